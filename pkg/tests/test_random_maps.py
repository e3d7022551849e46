"""
Tests for the seeded generators.
"""
import unittest

from haarbmo.bmo.carleson import CarlesonAnalyzer
from haarbmo.constructions.random_maps import (
    RANDOM_DEPTH_CAP,
    RandomGenerator,
    random_collection,
    random_rearrangement,
)
from haarbmo.exceptions import ParameterError
from haarbmo.models.rearrangement import Rearrangement


class TestRandomGenerator(unittest.TestCase):
    """Test RandomGenerator."""

    def test_same_seed_same_output(self):
        self.assertEqual(random_rearrangement(3, seed=9), random_rearrangement(3, seed=9))
        self.assertEqual(random_collection(3, seed=9), random_collection(3, seed=9))
        self.assertEqual(RandomGenerator(9).expansion(3), RandomGenerator(9).expansion(3))

    def test_different_seeds_differ(self):
        draws = {tuple(random_rearrangement(3, seed=s).items()) for s in range(5)}
        self.assertGreater(len(draws), 1)

    def test_rearrangements_are_bijections(self):
        generator = RandomGenerator(0)
        for _ in range(100):
            tau = generator.rearrangement(3)
            self.assertTrue(tau.total)
            # validate rejects anything that is not injective
            Rearrangement.validate(tau.universe, tau.items())
            self.assertEqual(tau.map_collection(tau.universe.all()), tau.universe.all())

    def test_level_preserving(self):
        generator = RandomGenerator(4)
        for _ in range(20):
            tau = generator.rearrangement(4, level_preserving=True)
            self.assertTrue(tau.is_level_preserving())

    def test_depth_cap(self):
        with self.assertRaises(ParameterError):
            RandomGenerator(0).rearrangement(RANDOM_DEPTH_CAP + 1)
        with self.assertRaises(ParameterError):
            RandomGenerator(0).collection(-1)

    def test_collection_density(self):
        generator = RandomGenerator(1)
        self.assertEqual(len(generator.collection(3, density=1.0)), 15)
        self.assertEqual(len(generator.collection(3, density=0.0)), 0)

    def test_expansion_coefficients(self):
        x = RandomGenerator(7).expansion(3, density=1.0, denominator_exp=2)
        for _, value in x.items():
            self.assertLessEqual(abs(value), 1)
            self.assertEqual((value * 4).denominator, 1)

    def test_grid_squares_stay_normalized(self):
        generator = RandomGenerator(3)
        for grid in (1, 2, 4, 8):
            squares = generator.grid_squares(3, grid, density=0.8)
            self.assertLessEqual(CarlesonAnalyzer.packing_maximum(squares).constant, 1)
            for value in squares.values():
                self.assertGreater(value, 0)
                self.assertEqual((value * grid).denominator, 1)


if __name__ == "__main__":
    unittest.main()
