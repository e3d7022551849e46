"""
Verifiers for Property P, weak Property P and condition S.

Verifiers do not test against a given M. They compute the minimal constant
for which each clause holds and report the largest one as the overall M.
"""
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from haarbmo.bmo.carleson import CarlesonAnalyzer
from haarbmo.models.certificate import (
    CertificateBlock,
    CertificateConstants,
    ConditionSSplit,
    Mode,
    PackingEstimate,
    PropertyPCertificate,
    Verdict,
)
from haarbmo.models.expansion import HaarExpansion
from haarbmo.models.interval import DyadicInterval, IntervalSet
from haarbmo.models.rearrangement import Rearrangement

logger = logging.getLogger(__name__)


def _measure(collection: IntervalSet) -> Fraction:
    return collection.covered_measure().to_fraction()


def _max_ratio(tau: Rearrangement, preimage: Iterable[DyadicInterval]) -> Fraction:
    return max((tau.ratio(i) for i in preimage), default=Fraction(0))


def certificate_constants(tau: Rearrangement, root: DyadicInterval,
                          blocks: Sequence[CertificateBlock]) -> CertificateConstants:
    """
    Compute the constants of a list of blocks (L_i, E_i) under root.

    error_carleson is [[union E_i]]; homogeneity is the largest
    (|tau(I)|/|I|) |L_i*| / (|tau(L_i)*| + |E_i*|) over I in L_i; mass is
    sum |tau(L_i)*| / |J|; weak_sup is max [[tau^-1(max tau(L_i))]].
    """
    errors = IntervalSet()
    homogeneity = Fraction(0)
    image_mass = Fraction(0)
    weak_sup = Fraction(0)
    for block in blocks:
        errors = errors | block.error
        if not block.preimage:
            continue
        images = tau.map_collection(block.preimage)
        image_cover = _measure(images)
        spread = _measure(block.preimage) / (image_cover + _measure(block.error))
        homogeneity = max(homogeneity, _max_ratio(tau, block.preimage) * spread)
        image_mass += image_cover
        top_preimages = tau.preimage(images.maximal_elements())
        weak_sup = max(weak_sup, CarlesonAnalyzer.constant(top_preimages))

    return CertificateConstants(
        error_carleson=CarlesonAnalyzer.constant(errors),
        homogeneity=homogeneity,
        mass=image_mass / root.measure.to_fraction(),
        weak_sup=weak_sup,
    )


class PropertyVerifier:
    """Check certificates and splits for a fixed rearrangement."""

    def __init__(self, tau: Rearrangement):
        self.tau = tau

    def target_family(self, root: DyadicInterval, family: Optional[IntervalSet] = None) -> IntervalSet:
        """tau(D) inside root, or tau(B) inside root for a family B."""
        if family is None:
            return IntervalSet(t for _, t in self.tau.items() if root.contains(t))
        return IntervalSet(self.tau(i) for i in family if i in self.tau and root.contains(self.tau(i)))

    def _structural_failure(self, root: DyadicInterval,
                            blocks: Sequence[Tuple[IntervalSet, IntervalSet]],
                            family: Optional[IntervalSet] = None) -> Optional[str]:
        # Returns a message naming the first offending interval, or None.
        seen = set()
        for preimage, error in blocks:
            for interval in preimage:
                if interval not in self.tau:
                    return f"interval not in domain of τ: {interval}"
                if family is not None and interval not in family:
                    return f"block interval {interval} is not in the family"
            for image in list(self.tau.map_collection(preimage)) + list(error):
                if image in seen:
                    return f"interval {image} appears in more than one block"
                seen.add(image)

        target = self.target_family(root, family)
        for image in sorted(seen):
            if image not in target:
                return f"interval {image} is outside the target family"
        for image in target:
            if image not in seen:
                return f"interval {image} of the target family is not covered"
        return None

    @staticmethod
    def _failed(mode: str, message: str, bound: Optional[Fraction]) -> Verdict:
        logger.debug("%s: structural failure: %s", mode, message)
        return Verdict(False, mode, failure=message, bound=bound)

    @staticmethod
    def _finish(mode: str, constants: Dict[str, Fraction], overall: Fraction,
                bound: Optional[Union[int, Fraction]]) -> Verdict:
        limit = None if bound is None else Fraction(bound)
        holds = limit is None or overall <= limit
        return Verdict(holds, mode, constants, overall, bound=limit)

    def verify_property_p(self, root: DyadicInterval, certificate: PropertyPCertificate,
                          bound: Optional[Union[int, Fraction]] = None) -> Verdict:
        """
        Verify a Property P certificate under root.

        Args:
            root: The interval J.
            certificate: Blocks that must partition tau(D) inside J.
            bound: When given, the verdict holds only if the overall M is at
                most this value.
        """
        mode = "property_p"
        blocks = [(b.preimage, b.error) for b in certificate.blocks]
        message = self._structural_failure(root, blocks)
        if message:
            return self._failed(mode, message, bound)
        constants = certificate_constants(self.tau, root, certificate.blocks)
        values = {
            "error_carleson": constants.error_carleson,
            "homogeneity": constants.homogeneity,
            "mass": constants.mass,
        }
        return self._finish(mode, values, max(values.values()), bound)

    def verify_weak_property_p(self, family: IntervalSet, root: DyadicInterval,
                               certificate: PropertyPCertificate,
                               bound: Optional[Union[int, Fraction]] = None) -> Verdict:
        """
        Verify a weak Property P certificate of tau(B) under root.

        The mass clause is measured relative to
        sup_i [[tau^-1(max tau(L_i))]], which is reported as weak_sup.
        """
        mode = "weak_property_p"
        blocks = [(b.preimage, b.error) for b in certificate.blocks]
        message = self._structural_failure(root, blocks, family)
        if message:
            return self._failed(mode, message, bound)
        constants = certificate_constants(self.tau, root, certificate.blocks)
        weak_sup = constants.weak_sup or Fraction(0)
        relative_mass = constants.mass / weak_sup if weak_sup else Fraction(0)
        values = {
            "error_carleson": constants.error_carleson,
            "homogeneity": constants.homogeneity,
            "mass": constants.mass,
            "weak_sup": weak_sup,
        }
        overall = max(constants.error_carleson, constants.homogeneity, relative_mass)
        return self._finish(mode, values, overall, bound)

    def condition_s_constants(self, split: ConditionSSplit) -> Dict[str, Fraction]:
        images = self.tau.map_collection(split.preimage)
        homogeneity = Fraction(0)
        if split.preimage:
            homogeneity = _max_ratio(self.tau, split.preimage) * _measure(split.preimage) / _measure(images)
        return {
            "error_carleson": CarlesonAnalyzer.constant(split.error),
            "homogeneity": homogeneity,
        }

    def verify_condition_s(self, root: DyadicInterval, split: ConditionSSplit,
                           bound: Optional[Union[int, Fraction]] = None) -> Verdict:
        """
        Verify a single split tau(L) + E of tau(D) under root.

        homogeneity is the largest (|tau(I)|/|I|) |L*| / |tau(L)*| over I in L.
        """
        mode = "condition_s"
        message = self._structural_failure(root, [(split.preimage, split.error)])
        if message:
            return self._failed(mode, message, bound)
        values = self.condition_s_constants(split)
        return self._finish(mode, values, max(values.values()), bound)

    def verify_merged(self, root: DyadicInterval, certificate: PropertyPCertificate,
                      bound: Optional[Union[int, Fraction]] = None) -> Verdict:
        """
        Verify the merged form of a certificate, with blocks K_i = L_i + C_i.

        Homogeneity is only required for I in K_i whose image is not an error
        interval, and the mass is taken relative to
        sup_i [[tau^-1(max tau(K_i))]].
        """
        mode = "merged"
        merged = certificate.merged(self.tau)
        message = self._structural_failure(root, [(k, IntervalSet()) for k in merged])
        if message:
            return self._failed(mode, message, bound)

        errors = certificate.error_union()
        homogeneity = Fraction(0)
        image_mass = Fraction(0)
        sup = Fraction(0)
        for block in merged:
            if not block:
                continue
            images = self.tau.map_collection(block)
            image_cover = _measure(images)
            regular = [i for i in block if self.tau(i) not in errors]
            homogeneity = max(homogeneity, _max_ratio(self.tau, regular) * _measure(block) / image_cover)
            image_mass += image_cover
            sup = max(sup, CarlesonAnalyzer.constant(self.tau.preimage(images.maximal_elements())))
        relative_mass = image_mass / (root.measure.to_fraction() * sup) if sup else Fraction(0)
        values = {
            "error_carleson": CarlesonAnalyzer.constant(errors),
            "homogeneity": homogeneity,
            "mass": relative_mass,
        }
        return self._finish(mode, values, max(values.values()), bound)

    def packing_estimate(self, root: DyadicInterval,
                         decomposition: Union[PropertyPCertificate, ConditionSSplit],
                         x: HaarExpansion) -> PackingEstimate:
        """
        Split the packing sum of x transported into root along a decomposition.

        S1 sums x_I**2 |tau(I)| over block intervals, S2 over intervals whose
        image is an error interval. The bounds are the homogeneity estimate
        for S1 and ||x||**2 [[E]] |J| for S2.
        """
        norm_sq = CarlesonAnalyzer.bmo_norm_sq(x)
        if isinstance(decomposition, ConditionSSplit):
            values = self.condition_s_constants(decomposition)
            images = self.tau.map_collection(decomposition.preimage)
            blocks: List[Tuple[IntervalSet, IntervalSet]] = [(decomposition.preimage, decomposition.error)]
            s1_bound = values["homogeneity"] * norm_sq * _measure(images)
            error_constant = values["error_carleson"]
        else:
            constants = certificate_constants(self.tau, root, decomposition.blocks)
            blocks = [(b.preimage, b.error) for b in decomposition.blocks]
            spread = sum((_measure(self.tau.map_collection(p)) + _measure(e) for p, e in blocks), Fraction(0))
            s1_bound = constants.homogeneity * norm_sq * spread
            error_constant = constants.error_carleson

        s1 = Fraction(0)
        s2 = Fraction(0)
        for preimage, error in blocks:
            for interval in preimage:
                image = self.tau(interval)
                s1 += x.coefficient(interval) ** 2 * image.measure.to_fraction()
            for interval in self.tau.preimage(error):
                image = self.tau(interval)
                s2 += x.coefficient(interval) ** 2 * image.measure.to_fraction()
        s2_bound = norm_sq * error_constant * root.measure.to_fraction()
        return PackingEstimate(s1, s2, s1_bound, s2_bound)
