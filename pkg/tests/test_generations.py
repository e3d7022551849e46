"""
Tests for the generational decomposition and the union bound.
"""
import unittest
from fractions import Fraction

import pytest

from haarbmo.bmo.carleson import CarlesonAnalyzer
from haarbmo.constructions.random_maps import RandomGenerator
from haarbmo.decompose.generations import GenerationalDecomposer, generational_decomposition, lemma2_union_bound
from haarbmo.exceptions import DomainError, HypothesisError
from haarbmo.models.certificate import Mode
from haarbmo.models.interval import ROOT, DyadicInterval, IntervalSet, Universe
from haarbmo.models.rearrangement import Rearrangement
from haarbmo.norms.oracle import NormOracle


def I(depth, index):
    return DyadicInterval(depth, index)


@pytest.fixture
def identity():
    return Rearrangement.identity(Universe(2))


@pytest.fixture
def swap():
    universe = Universe(2)
    mapping = {i: i for i in universe.intervals()}
    mapping[I(1, 0)], mapping[I(2, 0)] = I(2, 0), I(1, 0)
    return Rearrangement(universe, mapping)


def test_identity_single_block(identity):
    certificate, tree = generational_decomposition(identity, ROOT)
    assert certificate.mode is Mode.STRONG
    assert len(certificate.blocks) == 1
    assert certificate.blocks[0].preimage == Universe(2).all()
    assert certificate.blocks[0].error == IntervalSet()
    constants = certificate.constants
    assert constants.error_carleson == 0
    assert constants.homogeneity == 1
    assert constants.mass == 1
    assert constants.weak_sup == 1
    assert tree.generations == [IntervalSet([ROOT])]


def test_swap_with_small_threshold(swap):
    certificate, tree = generational_decomposition(swap, ROOT, threshold=1)
    block = certificate.blocks[0]
    assert block.preimage == Universe(2).all() - IntervalSet([I(2, 0)])
    assert block.error == IntervalSet([I(1, 0)])
    assert certificate.constants.error_carleson == 1
    assert certificate.constants.homogeneity == Fraction(2, 3)
    assert certificate.constants.mass == 1
    assert len(tree.generations) == 1
    assert tree.nesting_violation() is None


def test_default_threshold_from_carleson_bound(swap):
    assert GenerationalDecomposer(swap).threshold == 2
    assert GenerationalDecomposer(swap, carleson_bound=Fraction(3, 2)).threshold == 3
    assert GenerationalDecomposer(swap, threshold=5, carleson_bound=1).threshold == 5


def test_level_preserving_single_generation():
    generator = RandomGenerator(21)
    for _ in range(10):
        tau = generator.rearrangement(3, level_preserving=True)
        certificate, tree = generational_decomposition(tau, ROOT)
        assert len(tree.generations) == 1
        assert certificate.error_union() == IntervalSet()


def test_subinterval_root(identity):
    certificate, tree = generational_decomposition(identity, I(1, 1))
    assert tree.generations == [IntervalSet([I(1, 1)])]
    assert certificate.preimage_union() == IntervalSet([I(1, 1), I(2, 2), I(2, 3)])
    assert certificate.constants.mass == 1


def test_weak_mode(identity):
    family = IntervalSet([ROOT, I(1, 1)])
    certificate, _ = generational_decomposition(identity, ROOT, family=family)
    assert certificate.mode is Mode.WEAK
    assert certificate.preimage_union() == family
    assert certificate.constants.weak_sup == 1


def test_weak_mode_outside_domain():
    partial = Rearrangement(Universe(2), {ROOT: ROOT})
    with pytest.raises(DomainError):
        generational_decomposition(partial, ROOT, family=IntervalSet([ROOT, I(1, 0)]))


def test_trace_lines(swap):
    _, tree = generational_decomposition(swap, ROOT, threshold=1)
    lines = tree.trace_lines()
    assert lines[0] == "generation 0 I(0,0)"
    assert lines[-1] == "I(0,0): rule 3 I(2,0) red"


def test_random_certificates_partition_the_image():
    generator = RandomGenerator(5)
    for _ in range(20):
        tau = generator.rearrangement(3)
        certificate, tree = generational_decomposition(tau, ROOT)
        assert tree.nesting_violation() is None
        covered = IntervalSet()
        for block in certificate.blocks:
            images = tau.map_collection(block.preimage) | block.error
            assert covered.isdisjoint(images)
            covered = covered | images
        assert covered == tau.universe.all()


@pytest.mark.slow
def test_error_constant_bounded_by_distortion():
    generator = RandomGenerator(31)
    for _ in range(200):
        tau = generator.rearrangement(3)
        distortion = NormOracle(tau).carleson_distortion().ratio
        certificate, _ = GenerationalDecomposer(tau, carleson_bound=distortion).decompose(ROOT)
        assert certificate.constants.error_carleson <= 2 * distortion
        assert certificate.constants.mass <= 2 * distortion * certificate.constants.weak_sup


class TestUnionBound(unittest.TestCase):
    """Test lemma2_union_bound."""

    def test_quartering_chain(self):
        generations = [IntervalSet([I(2 * k, 0)]) for k in range(3)]
        value = lemma2_union_bound(generations, generations)
        self.assertEqual(value, Fraction(21, 16))
        self.assertEqual(value, CarlesonAnalyzer.constant(IntervalSet([ROOT, I(2, 0), I(4, 0)])))

    def test_single_generation(self):
        family = Universe(2).all()
        self.assertEqual(lemma2_union_bound([IntervalSet([ROOT])], [family]), 3)

    def test_empty_families(self):
        generations = [IntervalSet([ROOT]), IntervalSet([I(2, 1)])]
        self.assertEqual(lemma2_union_bound(generations, [IntervalSet(), IntervalSet()]), 0)

    def test_family_below_next_generation(self):
        generations = [IntervalSet([ROOT]), IntervalSet([I(1, 0)])]
        with self.assertRaises(HypothesisError) as ctx:
            lemma2_union_bound(generations, [IntervalSet([I(2, 0)])])
        self.assertEqual(ctx.exception.generation, 0)
        self.assertEqual(ctx.exception.interval, I(2, 0))

    def test_generations_not_nested(self):
        with self.assertRaises(HypothesisError):
            lemma2_union_bound([IntervalSet([I(1, 0)]), IntervalSet([ROOT])], [IntervalSet(), IntervalSet()])

    def test_generations_not_packed(self):
        # I(1,0) and I(1,1) fill the root, more than half of it.
        generations = [IntervalSet([ROOT]), IntervalSet([I(1, 0), I(1, 1)])]
        with self.assertRaises(HypothesisError):
            lemma2_union_bound(generations, [IntervalSet([ROOT]), IntervalSet()])


if __name__ == "__main__":
    unittest.main()
