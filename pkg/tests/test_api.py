"""
Tests for the top-level API.
"""
from fractions import Fraction

import haarbmo
from haarbmo import ROOT, DyadicInterval, HaarExpansion, IntervalSet
from haarbmo.constructions.random_maps import random_rearrangement


def test_carleson_constant():
    report = haarbmo.carleson_constant(IntervalSet([ROOT, DyadicInterval(1, 0)]))
    assert report.constant == Fraction(3, 2)
    assert report.witness == ROOT


def test_bmo_norm():
    assert haarbmo.bmo_norm(HaarExpansion.single(DyadicInterval(1, 0))) == 1.0


def test_decompose_and_verify():
    tau = random_rearrangement(3, seed=7)
    certificate, tree = haarbmo.decompose(tau, ROOT, threshold=2)
    assert tree.generations[0] == IntervalSet([ROOT])
    verdict = haarbmo.verify(tau, certificate)
    assert verdict.holds


def test_weak_verify():
    tau = random_rearrangement(2, seed=1)
    family = IntervalSet([ROOT, DyadicInterval(2, 1)])
    certificate, _ = haarbmo.decompose(tau, family=family)
    assert haarbmo.verify(tau, certificate, family=family).failure is None


def test_bounds_and_example():
    report = haarbmo.bounds(random_rearrangement(2, seed=3), budget=1)
    assert report.certified
    bundle = haarbmo.build_section5(10, stages=1, eps_exp=3)
    assert bundle.stage_report.cumulative[-1].to_fraction() == Fraction(1, 2)
