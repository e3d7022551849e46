"""
Generational decomposition of the image family inside J, and the union
bound for families spread across generations.
"""
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from haarbmo.bmo.carleson import CarlesonAnalyzer
from haarbmo.decompose.main_lemma import MainLemma
from haarbmo.decompose.verifier import certificate_constants
from haarbmo.exceptions import DecompositionError, HypothesisError
from haarbmo.models.certificate import CertificateBlock, GenerationTree, Mode, PropertyPCertificate
from haarbmo.models.interval import DyadicInterval, IntervalSet
from haarbmo.models.rearrangement import Rearrangement

logger = logging.getLogger(__name__)


class GenerationalDecomposer:
    """
    Build Property P certificates by iterating the colouring process.

    Generation 0 holds the maximal intervals of the preimage family
    P = {I : tau(I) inside J}. Every member I of a generation is coloured
    within P; its green family becomes a block L_I with error block
    tau(C_I), and the maximal members of P strictly below each red C form
    the next generation.
    """

    def __init__(self, tau: Rearrangement, threshold: Optional[Union[int, Fraction]] = None,
                 carleson_bound: Optional[Union[int, Fraction]] = None,
                 sweep_order: str = "canonical"):
        """
        Args:
            tau: The rearrangement.
            threshold: The constant A of the colouring rules.
            carleson_bound: A bound M on [[tau(E)]] / [[E]]; when no threshold
                is given, A = 2M. With neither, A = 2.
            sweep_order: Order of the recolouring sweeps.
        """
        if threshold is None:
            threshold = 2 * Fraction(carleson_bound) if carleson_bound is not None else Fraction(2)
        self.tau = tau
        self.lemma = MainLemma(tau, threshold, sweep_order)
        self.threshold = self.lemma.threshold

    def preimage_family(self, root: DyadicInterval, family: Optional[IntervalSet] = None) -> IntervalSet:
        """The intervals of the family (or of the domain) whose image lies inside root."""
        self.tau.universe.check(root)
        if family is None:
            return self.tau.preimage_within(root)
        self.tau.require_domain(family)
        return IntervalSet(i for i in family if root.contains(self.tau(i)))

    def decompose(self, root: DyadicInterval,
                  family: Optional[IntervalSet] = None) -> Tuple[PropertyPCertificate, GenerationTree]:
        """
        Decompose tau(D) inside root, or tau(B) inside root when a family B is given.

        Returns:
            The certificate with its exact constants, and the generation tree.

        Raises:
            DomainError: If the family is not inside the domain of tau.
            DecompositionError: If the generations are not properly nested.
        """
        mode = Mode.STRONG if family is None else Mode.WEAK
        working = self.preimage_family(root, family)
        tree = GenerationTree()
        blocks: List[CertificateBlock] = []

        current = working.maximal_elements()
        while current:
            tree.generations.append(current)
            following = []
            for top in current:
                result = self.lemma.run(top, working)
                tree.results[top] = result
                blocks.append(CertificateBlock(result.green, self.tau.map_collection(result.red)))
                for red in result.red:
                    following.extend((working.restrict(red) - IntervalSet([red])).maximal_elements())
            logger.debug("generation %d: %d intervals", len(tree.generations) - 1, len(current))
            current = IntervalSet(following)

        violation = tree.nesting_violation()
        if violation is not None:
            raise DecompositionError(f"generation {violation[0]} is not nested at {violation[1]}")
        for k, top, gap in tree.packing_violations():
            logger.warning("generation %d packs more than 2^-%d of %s below it (A = %s)",
                           k + gap, gap, top, self.threshold)

        certificate = PropertyPCertificate(root, mode, blocks)
        certificate.constants = certificate_constants(self.tau, root, blocks)
        return certificate, tree


def generational_decomposition(tau: Rearrangement, root: DyadicInterval,
                               family: Optional[IntervalSet] = None,
                               threshold: Optional[Union[int, Fraction]] = None,
                               carleson_bound: Optional[Union[int, Fraction]] = None,
                               ) -> Tuple[PropertyPCertificate, GenerationTree]:
    decomposer = GenerationalDecomposer(tau, threshold, carleson_bound)
    return decomposer.decompose(root, family)


def _covering_member(generation: IntervalSet, interval: DyadicInterval) -> bool:
    return interval in generation or generation.has_proper_ancestor(interval)


def lemma2_union_bound(generations: Sequence[IntervalSet], families: Sequence[IntervalSet]) -> Fraction:
    """
    Carleson constant of a union of families V_k living between generations.

    Checks that each V_k lies in Q(G_k) but outside Q(G_k+1), that the
    generations are nested and packed (members of G_k+l inside I in G_k
    take at most 2**-l |I|), and that the V_k are pairwise disjoint. Under
    these hypotheses [[union V_k]] <= 2 max [[V_k]].

    Raises:
        HypothesisError: naming the generation and interval of the first
            failed hypothesis.
    """
    tree = GenerationTree(list(generations))
    violation = tree.nesting_violation()
    if violation is not None:
        raise HypothesisError(f"generations not nested at {violation[1]}", *violation)
    packing = tree.packing_violations()
    if packing:
        k, top, gap = packing[0]
        raise HypothesisError(f"generation {k + gap} packs more than 2^-{gap} of {top}", k, top)

    owner = {}
    empty = IntervalSet()
    for k, family in enumerate(families):
        inside = generations[k] if k < len(generations) else empty
        below = generations[k + 1] if k + 1 < len(generations) else empty
        for interval in family:
            if not _covering_member(inside, interval) or _covering_member(below, interval):
                raise HypothesisError(f"{interval} is not between generations {k} and {k + 1}", k, interval)
            if interval in owner:
                raise HypothesisError(f"{interval} appears in families {owner[interval]} and {k}", k, interval)
            owner[interval] = k

    union = IntervalSet(owner)
    value = CarlesonAnalyzer.constant(union)
    bound = 2 * max((CarlesonAnalyzer.constant(f) for f in families), default=Fraction(0))
    if value > bound:
        raise DecompositionError(f"union bound failed: {value} > {bound}")
    logger.debug("union of %d families: %s <= %s", len(families), value, bound)
    return value
