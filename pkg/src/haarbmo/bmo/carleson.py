"""
Exact Carleson constants and dyadic BMO norms of finite Haar expansions.
"""
import logging
import math
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional

from haarbmo.models.expansion import CarlesonReport, HaarExpansion
from haarbmo.models.interval import DyadicInterval, IntervalSet

logger = logging.getLogger(__name__)


def sqrt_fraction(value: Fraction) -> float:
    """Square root of a non-negative rational, within one ulp of the true value."""
    if value <= 0:
        return 0.0
    p, q = value.numerator, value.denominator
    shift = max(0, 128 - (p.bit_length() - q.bit_length()))
    shift += shift & 1
    root = math.isqrt((p << shift) // q)
    return root / (1 << (shift // 2))


class CarlesonAnalyzer:
    """Compute packing sums, Carleson constants and BMO norms exactly."""

    @staticmethod
    def scaled_sums(collection: Iterable[DyadicInterval], scale_depth: int) -> Dict[DyadicInterval, int]:
        # Packing sum under every member and every ancestor of a member, in
        # units of 2**-scale_depth. Any other J has an empty packing sum.
        sums: Dict[DyadicInterval, int] = {}
        for interval in collection:
            weight = 1 << (scale_depth - interval.depth)
            sums[interval] = sums.get(interval, 0) + weight
            for ancestor in interval.ancestors():
                sums[ancestor] = sums.get(ancestor, 0) + weight
        return sums

    @classmethod
    def carleson_constant(cls, collection: IntervalSet, include_sums: bool = False) -> CarlesonReport:
        """
        Compute the Carleson packing constant of a collection.

        The supremum over all dyadic J is attained at a member or an ancestor
        of a member, so only those candidates are scanned.

        Args:
            collection: The family of intervals.
            include_sums: Also return the packing sum under every candidate J.

        Returns:
            A CarlesonReport; the constant of the empty family is 0.
        """
        if not collection:
            return CarlesonReport(Fraction(0), None, {} if include_sums else None)

        scale = collection.max_depth
        sums = cls.scaled_sums(collection, scale)
        best = -1
        witness: Optional[DyadicInterval] = None
        for candidate in sorted(sums):
            density = sums[candidate] << candidate.depth
            if density > best:
                best, witness = density, candidate

        per_interval = None
        if include_sums:
            per_interval = {j: Fraction(s, 1 << scale) for j, s in sorted(sums.items())}
        return CarlesonReport(Fraction(best, 1 << scale), witness, per_interval)

    @staticmethod
    def packing_density(collection: Iterable[DyadicInterval], top: DyadicInterval) -> Fraction:
        """(1/|J|) * sum of |I| over members I contained in J."""
        total = Fraction(0)
        for interval in collection:
            if top.contains(interval):
                total += Fraction(1, 1 << (interval.depth - top.depth))
        return total

    @classmethod
    def constant(cls, collection: IntervalSet) -> Fraction:
        """Shorthand for carleson_constant(collection).constant."""
        return cls.carleson_constant(collection).constant

    @staticmethod
    def packing_maximum(weights: Mapping[DyadicInterval, Fraction]) -> CarlesonReport:
        """
        Maximize (1/|J|) * sum over I inside J of w_I |I|.

        With w_I = x_I**2 this is the squared BMO norm; with w_I = 1 it is the
        Carleson constant of the support.
        """
        sums: Dict[DyadicInterval, Fraction] = {}
        for interval, weight in weights.items():
            if not weight:
                continue
            mass = weight / (1 << interval.depth)
            sums[interval] = sums.get(interval, Fraction(0)) + mass
            for ancestor in interval.ancestors():
                sums[ancestor] = sums.get(ancestor, Fraction(0)) + mass

        best = Fraction(0)
        witness: Optional[DyadicInterval] = None
        for candidate in sorted(sums):
            density = sums[candidate] * (1 << candidate.depth)
            if witness is None or density > best:
                best, witness = density, candidate
        return CarlesonReport(best, witness)

    @classmethod
    def bmo_report(cls, x: HaarExpansion) -> CarlesonReport:
        """Squared BMO norm of x together with the interval attaining it."""
        return cls.packing_maximum(x.squares())

    @classmethod
    def bmo_norm_sq(cls, x: HaarExpansion) -> Fraction:
        return cls.bmo_report(x).constant

    @classmethod
    def bmo_norm(cls, x: HaarExpansion) -> float:
        return sqrt_fraction(cls.bmo_norm_sq(x))

    @staticmethod
    def indicator_expansion(collection: Iterable[DyadicInterval]) -> HaarExpansion:
        """The expansion with coefficient 1 on every member of the collection."""
        return HaarExpansion({interval: 1 for interval in collection})
