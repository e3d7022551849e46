"""
haarbmo - Haar rearrangements acting on dyadic BMO, in exact arithmetic.

This package computes Carleson constants and dyadic BMO norms, builds the
stopping-time certificates that show a rearrangement of the Haar system is
bounded on BMO, verifies them, and brackets operator norms with exhaustive
oracles on small universes.
"""

__version__ = "0.1.0"

from fractions import Fraction
from typing import Optional, Tuple, Union

from haarbmo.models.certificate import GenerationTree, PropertyPCertificate, Verdict
from haarbmo.models.expansion import CarlesonReport, HaarExpansion
from haarbmo.models.interval import ROOT, DyadicInterval, IntervalSet, Universe
from haarbmo.models.rearrangement import Rearrangement
from haarbmo.models.report import ExampleBundle, NormReport

# Load the decompose subpackage first so that the decompose() function defined
# below is not later shadowed by the subpackage attribute on first import.
import haarbmo.decompose  # noqa: E402,F401


# Public API
def carleson_constant(collection: IntervalSet) -> CarlesonReport:
    """
    Compute the Carleson constant of a finite collection.

    Args:
        collection: The dyadic intervals

    Returns:
        A CarlesonReport with the constant and the canonical witness interval
    """
    from haarbmo.bmo.carleson import CarlesonAnalyzer

    return CarlesonAnalyzer.carleson_constant(collection)


def bmo_norm(x: HaarExpansion) -> float:
    from haarbmo.bmo.carleson import CarlesonAnalyzer

    return CarlesonAnalyzer.bmo_norm(x)


def decompose(tau: Rearrangement, root: DyadicInterval = ROOT,
              threshold: Optional[Union[int, Fraction]] = None,
              family: Optional[IntervalSet] = None) -> Tuple[PropertyPCertificate, GenerationTree]:
    """
    Build a Property P certificate for tau under root.

    Args:
        tau: The rearrangement
        root: The interval J
        threshold: The colouring constant A (default 2)
        family: Restrict to this family for a weak certificate

    Returns:
        The certificate with exact constants and the generation tree
    """
    from haarbmo.decompose.generations import GenerationalDecomposer

    return GenerationalDecomposer(tau, threshold).decompose(root, family)


def verify(tau: Rearrangement, certificate: PropertyPCertificate,
           bound: Optional[Union[int, Fraction]] = None,
           family: Optional[IntervalSet] = None) -> Verdict:
    """
    Verify a certificate, in weak mode when a family is given.

    Returns:
        A Verdict with the minimal constants of every clause
    """
    from haarbmo.decompose.verifier import PropertyVerifier

    verifier = PropertyVerifier(tau)
    if family is not None:
        return verifier.verify_weak_property_p(family, certificate.root, certificate, bound)
    return verifier.verify_property_p(certificate.root, certificate, bound)


def bounds(tau: Rearrangement, budget: int = 4, seed: int = 0, mode: Optional[str] = None) -> NormReport:
    from haarbmo.norms.oracle import NormOracle

    return NormOracle(tau).bounds(budget, seed, mode)


def build_section5(depth: int, stages: int = 3, eps_exp: int = 1) -> ExampleBundle:
    """Build the staged counterexample with the default stage recursion."""
    from haarbmo.constructions.section5 import Section5Params
    from haarbmo.constructions.section5 import build_section5 as build

    return build(Section5Params.default_recursion(depth, stages, eps_exp))


__all__ = [
    "DyadicInterval",
    "HaarExpansion",
    "IntervalSet",
    "ROOT",
    "Rearrangement",
    "Universe",
    "bmo_norm",
    "bounds",
    "build_section5",
    "carleson_constant",
    "decompose",
    "verify",
]
