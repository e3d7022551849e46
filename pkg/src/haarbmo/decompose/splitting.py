"""
Splitting families and expansions into Carleson-thin classes.
"""
import logging
import math
from fractions import Fraction
from typing import Dict, List, Mapping, Set, Tuple, Union

from haarbmo.bmo.carleson import CarlesonAnalyzer
from haarbmo.exceptions import DecompositionError, ParameterError, RationalizationError
from haarbmo.models.certificate import SplitReport
from haarbmo.models.expansion import HaarExpansion
from haarbmo.models.interval import DyadicInterval, IntervalSet
from haarbmo.models.rearrangement import Rearrangement

logger = logging.getLogger(__name__)

# Density threshold of the peeling split; every part packs at most this much.
PEEL_THRESHOLD = 4
# Every class of the coefficient split packs at most this much.
CLASS_BOUND = 3

SquaredCoefficients = Union[HaarExpansion, Mapping[DyadicInterval, Fraction]]


class CarlesonSplitter:
    """Split families by peeling and expansions by the mod-K class assignment."""

    @staticmethod
    def jones_split_report(family: IntervalSet) -> SplitReport:
        """
        Peel a family into parts with Carleson constant at most 4.

        Each round takes every remaining interval whose local density (the
        packing sum of the remainder below it, divided by its length) is at
        most 4. Minimal members have density 1, so every round is nonempty.

        Raises:
            ParameterError: If the family is empty.
        """
        if not family:
            raise ParameterError("cannot split an empty family")
        scale = family.max_depth
        limit = PEEL_THRESHOLD << scale
        remainder = family
        parts: List[IntervalSet] = []
        while remainder:
            sums = CarlesonAnalyzer.scaled_sums(remainder, scale)
            part = IntervalSet(i for i in remainder if sums[i] << i.depth <= limit)
            parts.append(part)
            remainder = remainder - part

        constants = [CarlesonAnalyzer.constant(p) for p in parts]
        if any(c > PEEL_THRESHOLD for c in constants):
            raise DecompositionError("a peeled part exceeds the density threshold")

        expected = math.ceil(CarlesonAnalyzer.constant(family))
        report = SplitReport("jones", parts, constants, expected_parts=expected)
        if len(parts) > expected:
            note = f"{len(parts)} parts exceed the expected count {expected}"
            logger.warning(note)
            report.within_bounds = False
            report.notes.append(note)
        logger.debug("peeled %d intervals into %d parts", len(family), len(parts))
        return report

    @classmethod
    def jones_split(cls, family: IntervalSet) -> List[IntervalSet]:
        return cls.jones_split_report(family).parts

    @staticmethod
    def rationalize(x: HaarExpansion, grid: int) -> HaarExpansion:
        """
        Move x onto the 1/K grid for a perfect square K = q**2.

        Coefficients are truncated toward zero to multiples of 1/q, so every
        squared coefficient becomes a multiple of 1/K and no coefficient grows
        in absolute value.
        """
        q = math.isqrt(grid) if grid > 0 else 0
        if q * q != grid or grid <= 0:
            raise ParameterError(f"K must be a positive perfect square to rationalize, got {grid}")
        truncated = {}
        for interval, value in x.items():
            steps = math.floor(abs(value) * q)
            truncated[interval] = Fraction(steps, q) if value > 0 else Fraction(-steps, q)
        return HaarExpansion(truncated)

    @staticmethod
    def _grid_counts(squares: Mapping[DyadicInterval, Fraction], grid: int) -> Dict[DyadicInterval, int]:
        counts = {}
        for interval, square in sorted(squares.items()):
            scaled = Fraction(square) * grid
            if scaled < 0 or scaled.denominator != 1:
                raise RationalizationError(
                    f"x_I^2 = {square} at {interval} is not a multiple of 1/{grid}", interval)
            if scaled:
                counts[interval] = int(scaled)
        return counts

    @classmethod
    def coefficient_split_report(cls, x: SquaredCoefficients, grid: int, root: DyadicInterval,
                                 tau: Rearrangement) -> SplitReport:
        """
        Distribute the intervals mapped into root among K classes.

        For every scale n, the intervals I of length 2**-n with tau(I) inside
        root are listed by left endpoint, each repeated k_I = K x_I**2 times,
        and the entry at position p goes to class ((p - 1) mod K) + 1.

        Args:
            x: An expansion, or a mapping of squared coefficients when those
                have no rational square root.
            grid: The grid size K.
            root: The interval J.
            tau: The rearrangement.

        Returns:
            A report with the K classes and their Carleson constants.

        Raises:
            RationalizationError: If some x_I**2 is not a multiple of 1/K.
        """
        if not isinstance(grid, int) or grid < 1:
            raise ParameterError(f"K must be a positive integer, got {grid!r}")
        squares = x.squares() if isinstance(x, HaarExpansion) else dict(x)
        counts = cls._grid_counts(squares, grid)
        tau.require_domain(counts)
        norm_sq = CarlesonAnalyzer.packing_maximum(squares).constant

        classes: List[Set[DyadicInterval]] = [set() for _ in range(grid)]
        scales: Dict[int, List[DyadicInterval]] = {}
        for interval in counts:
            if root.contains(tau(interval)):
                scales.setdefault(interval.depth, []).append(interval)

        for depth in sorted(scales):
            position = 0
            for interval in sorted(scales[depth], key=lambda i: i.index):
                for _ in range(counts[interval]):
                    classes[position % grid].add(interval)
                    position += 1

        parts = [IntervalSet(c) for c in classes]
        constants = [CarlesonAnalyzer.constant(p) for p in parts]
        report = SplitReport("coefficient", parts, constants)
        cls._check_split(report, scales, counts, tau, grid, norm_sq)
        return report

    @classmethod
    def coefficient_split(cls, x: SquaredCoefficients, grid: int, root: DyadicInterval,
                          tau: Rearrangement) -> List[IntervalSet]:
        return cls.coefficient_split_report(x, grid, root, tau).parts

    @staticmethod
    def _check_split(report: SplitReport, scales: Dict[int, List[DyadicInterval]],
                     counts: Dict[DyadicInterval, int], tau: Rearrangement,
                     grid: int, norm_sq: Fraction) -> None:
        # The scale-wise identity and the class bound need every k_I <= K,
        # which holds whenever ||x|| <= 1.
        proven = norm_sq <= 1
        for depth, entries in scales.items():
            expected = sum(counts[i] * tau(i).measure.to_fraction() for i in entries)
            actual = sum(
                (tau(i).measure.to_fraction() for part in report.parts for i in part if i.depth == depth),
                Fraction(0),
            )
            if actual != expected:
                note = f"scale {depth}: class masses do not match the squared coefficients"
                if proven:
                    raise DecompositionError(note)
                report.within_bounds = False
                report.notes.append(note)

        # Per-scale class counts inside every I0 are at most 1 + (1/K) sum k_I.
        members: Dict[Tuple[DyadicInterval, int, int], int] = {}
        weights: Dict[Tuple[DyadicInterval, int], int] = {}
        for c, part in enumerate(report.parts):
            for interval in part:
                for top in [interval, *interval.ancestors()]:
                    key = (top, interval.depth, c)
                    members[key] = members.get(key, 0) + 1
        for depth, entries in scales.items():
            for interval in entries:
                for top in [interval, *interval.ancestors()]:
                    weights[(top, depth)] = weights.get((top, depth), 0) + counts[interval]
        for (top, depth, c), count in members.items():
            if grid * count > grid + weights[(top, depth)]:
                note = f"class {c + 1} has {count} intervals of depth {depth} inside {top}"
                if proven:
                    raise DecompositionError(note)
                report.notes.append(note)

        for c, constant in enumerate(report.constants):
            if constant > CLASS_BOUND:
                note = f"class {c + 1} has Carleson constant {constant} > {CLASS_BOUND}"
                if proven:
                    raise DecompositionError(note)
                report.within_bounds = False
                report.notes.append(note)
        if not proven:
            logger.warning("||x||^2 = %s exceeds 1; class bounds are reported, not enforced", norm_sq)
