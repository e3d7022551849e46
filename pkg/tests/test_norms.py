"""
Tests for the norm oracles.
"""
import math
import unittest
from fractions import Fraction

import pytest

from haarbmo.constructions.random_maps import RandomGenerator
from haarbmo.constructions.section5 import Section5Params, build_section5
from haarbmo.exceptions import OracleLimitError, ParameterError
from haarbmo.models.interval import ROOT, DyadicInterval, IntervalSet, Universe
from haarbmo.models.rearrangement import Rearrangement
from haarbmo.norms.oracle import NormOracle


def I(depth, index):
    return DyadicInterval(depth, index)


def swap_map():
    universe = Universe(2)
    mapping = {i: i for i in universe.intervals()}
    mapping[I(1, 0)], mapping[I(2, 0)] = I(2, 0), I(1, 0)
    return Rearrangement(universe, mapping)


def mirror_map():
    """The tree automorphism exchanging the two halves of U_2."""
    universe = Universe(2)
    mapping = {i: I(i.depth, i.index ^ (1 << (i.depth - 1))) if i.depth else i
               for i in universe.intervals()}
    return Rearrangement(universe, mapping)


class TestDistortion(unittest.TestCase):
    """Test NormOracle.carleson_distortion."""

    def test_identity(self):
        result = NormOracle(Rearrangement.identity(Universe(2))).carleson_distortion()
        self.assertEqual(result.ratio, 1)
        self.assertEqual(result.witness, IntervalSet([ROOT]))
        self.assertTrue(result.exhaustive)

    def test_swap(self):
        result = NormOracle(swap_map()).carleson_distortion()
        self.assertEqual(result.ratio, Fraction(3, 2))
        self.assertEqual(result.witness, IntervalSet([I(2, 0), I(2, 1)]))

    def test_tree_automorphism(self):
        tau = mirror_map()
        self.assertEqual(tau(I(2, 0)), I(2, 2))
        self.assertEqual(NormOracle(tau).carleson_distortion().ratio, 1)

    def test_empty_domain(self):
        result = NormOracle(Rearrangement(Universe(1), {})).carleson_distortion()
        self.assertEqual(result.ratio, 0)
        self.assertEqual(result.witness, IntervalSet())

    def test_exhaustive_limit(self):
        oracle = NormOracle(Rearrangement.identity(Universe(4)))
        self.assertFalse(oracle.exhaustive_allowed)
        with self.assertRaises(OracleLimitError) as ctx:
            oracle.carleson_distortion()
        self.assertIn("domain too large for exhaustive mode", str(ctx.exception))

    def test_greedy_is_not_exhaustive(self):
        tau = RandomGenerator(2).rearrangement(4)
        result = NormOracle(tau).carleson_distortion("greedy", budget=3, seed=1)
        self.assertFalse(result.exhaustive)
        self.assertGreaterEqual(result.ratio, 0)

    def test_greedy_is_deterministic(self):
        oracle = NormOracle(RandomGenerator(8).rearrangement(4))
        first = oracle.carleson_distortion("greedy", budget=3, seed=7)
        second = NormOracle(RandomGenerator(8).rearrangement(4)).carleson_distortion("greedy", budget=3, seed=7)
        self.assertEqual(first.ratio, second.ratio)
        self.assertEqual(first.witness, second.witness)

    def test_two_sided_distortion_is_symmetric(self):
        generator = RandomGenerator(41)
        for _ in range(20):
            tau = generator.rearrangement(3)
            inverse = tau.inverse()
            forward = max(NormOracle(tau).carleson_distortion().ratio,
                          NormOracle(inverse).carleson_distortion().ratio)
            backward = max(NormOracle(inverse).carleson_distortion().ratio,
                           NormOracle(inverse.inverse()).carleson_distortion().ratio)
            self.assertEqual(forward, backward)
            self.assertGreaterEqual(forward, 1)

    def test_greedy_never_beats_exhaustive(self):
        generator = RandomGenerator(19)
        for _ in range(10):
            oracle = NormOracle(generator.rearrangement(3))
            exact = oracle.carleson_distortion().ratio
            self.assertLessEqual(oracle.carleson_distortion("greedy").ratio, exact)

    def test_unknown_mode(self):
        with self.assertRaises(ParameterError):
            NormOracle(swap_map()).carleson_distortion("annealing")


class TestDisjointFamilies(unittest.TestCase):
    """Test NormOracle.disjoint_family_bound."""

    def test_identity(self):
        value, witness = NormOracle(Rearrangement.identity(Universe(2))).disjoint_family_bound()
        self.assertEqual(value, 1)
        self.assertEqual(witness, IntervalSet([ROOT]))

    def test_swap(self):
        value, witness = NormOracle(swap_map()).disjoint_family_bound()
        # I(2,0) and I(2,1) are disjoint but their images nest.
        self.assertEqual(value, Fraction(3, 2))
        self.assertTrue(witness.is_pairwise_disjoint())


class TestBounds(unittest.TestCase):
    """Test the operator norm sandwich."""

    def test_identity(self):
        report = NormOracle(Rearrangement.identity(Universe(2))).bounds()
        self.assertEqual(report.distortion, 1)
        self.assertEqual(report.witness, IntervalSet([ROOT]))
        self.assertEqual(report.lower_bound, 1.0)
        self.assertEqual(report.upper_bound_sq, 3)
        self.assertEqual(report.upper_witness, Universe(2).all())
        self.assertTrue(report.certified)

    def test_swap_sandwich(self):
        report = NormOracle(swap_map()).bounds(budget=2, seed=3)
        self.assertEqual(report.distortion, Fraction(3, 2))
        self.assertLessEqual(report.distortion, report.lower_bound_sq)
        self.assertLessEqual(report.lower_bound_sq, report.upper_bound_sq)
        self.assertTrue(report.certified)

    def test_uncertified_beyond_cap(self):
        tau = RandomGenerator(6).rearrangement(4)
        oracle = NormOracle(tau)
        with self.assertLogs("haarbmo", level="WARNING"):
            upper, _, certified = oracle.operator_norm_upper_bound(budget=2)
        self.assertFalse(certified)
        self.assertGreater(upper, 0)

    def test_truncated_construction_sandwich(self):
        bundle = build_section5(Section5Params.from_triples(10, [(3, 4, 3)]))
        squeezed = bundle.sigma.truncated(3)
        for tau in (squeezed, squeezed.inverse()):
            report = NormOracle(tau).bounds(budget=1)
            self.assertTrue(report.certified)
            self.assertTrue(math.isfinite(report.lower_bound))
            self.assertLessEqual(report.distortion, report.lower_bound_sq)
            self.assertLessEqual(report.lower_bound_sq, report.upper_bound_sq)

    @pytest.mark.slow
    def test_random_sandwich(self):
        generator = RandomGenerator(1234)
        for _ in range(100):
            report = NormOracle(generator.rearrangement(3)).bounds(budget=1, seed=5)
            self.assertTrue(report.certified)
            self.assertLessEqual(report.distortion, report.lower_bound_sq)
            self.assertLessEqual(report.lower_bound_sq, report.upper_bound_sq)


if __name__ == "__main__":
    unittest.main()
