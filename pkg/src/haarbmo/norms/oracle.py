"""
Brute-force oracles and certified bounds for the operator induced by a
rearrangement on dyadic BMO.

Exhaustive oracles enumerate subfamilies of the domain as bitmasks; the
Carleson constants of all subfamilies of a fixed tuple of intervals are
tabulated once and cached.
"""
import logging
import random
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from haarbmo.bmo.carleson import CarlesonAnalyzer, sqrt_fraction
from haarbmo.exceptions import DecompositionError, OracleLimitError, ParameterError
from haarbmo.models.expansion import HaarExpansion
from haarbmo.models.interval import DyadicInterval, IntervalSet
from haarbmo.models.rearrangement import Rearrangement
from haarbmo.models.report import DistortionResult, NormReport

logger = logging.getLogger(__name__)

EXHAUSTIVE_DOMAIN_CAP = 15
MAX_DENOMINATOR_EXPONENT = 10
# Upper bound on [[E]] for the families entering the certified bound.
UPPER_FAMILY_BOUND = 3
MODES = ("exhaustive", "greedy")


@lru_cache(maxsize=32)
def carleson_table(intervals: Tuple[DyadicInterval, ...], scale: int) -> Tuple[int, ...]:
    """
    Carleson constants of all subfamilies of a tuple, in units of 2**-scale.

    Entry m is the constant of the subfamily whose members are the bits set
    in m.
    """
    size = 1 << len(intervals)
    sums = [0] * size
    for mask in range(1, size):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + (1 << (scale - intervals[low.bit_length() - 1].depth))

    # For a fixed set of members below J, the deepest such J packs densest.
    deepest: Dict[int, int] = {}
    candidates = set(intervals)
    for interval in intervals:
        candidates.update(interval.ancestors())
    for top in candidates:
        inside = 0
        for bit, interval in enumerate(intervals):
            if top.contains(interval):
                inside |= 1 << bit
        deepest[inside] = max(deepest.get(inside, 0), top.depth)

    table = [0] * size
    for inside, shift in sorted(deepest.items()):
        column = [sums[mask & inside] << shift for mask in range(size)]
        table = list(map(max, table, column))
    return tuple(table)


class _PackingState:
    """Incrementally maintained packing sums of a growing family."""

    def __init__(self, scale: int):
        self.scale = scale
        self.sums: Dict[DyadicInterval, int] = {}
        self.best = 0

    def trial(self, interval: DyadicInterval) -> int:
        """The scaled Carleson constant after adding interval."""
        weight = 1 << (self.scale - interval.depth)
        best = self.best
        for top in (interval, *interval.ancestors()):
            best = max(best, (self.sums.get(top, 0) + weight) << top.depth)
        return best

    def add(self, interval: DyadicInterval) -> None:
        self.best = self.trial(interval)
        weight = 1 << (self.scale - interval.depth)
        for top in (interval, *interval.ancestors()):
            self.sums[top] = self.sums.get(top, 0) + weight


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


class NormOracle:
    """
    Oracles for a fixed rearrangement.

    All constants are exact; ratios are compared by cross-multiplication and
    ties go to the smallest family, then the lexicographically first one.
    """

    def __init__(self, tau: Rearrangement):
        self.tau = tau
        self.scale = tau.universe.max_depth
        self.domain: Tuple[DyadicInterval, ...] = tuple(tau.domain)
        self.images: Tuple[DyadicInterval, ...] = tuple(tau(i) for i in self.domain)
        self._tables: Optional[Tuple[Sequence[int], List[int]]] = None

    @property
    def exhaustive_allowed(self) -> bool:
        return len(self.domain) <= EXHAUSTIVE_DOMAIN_CAP

    def _require_exhaustive(self) -> None:
        if not self.exhaustive_allowed:
            raise OracleLimitError(
                f"domain too large for exhaustive mode: {len(self.domain)} intervals "
                f"(at most {EXHAUSTIVE_DOMAIN_CAP})")

    def _subset_tables(self) -> Tuple[Sequence[int], List[int]]:
        # (domain constants, image constants) indexed by masks over self.domain
        if self._tables is None:
            self._require_exhaustive()
            domain_table = carleson_table(self.domain, self.scale)
            ordered = tuple(sorted(self.images))
            image_table = carleson_table(ordered, self.scale)
            position = {interval: bit for bit, interval in enumerate(ordered)}
            moved = [1 << position[image] for image in self.images]
            size = 1 << len(self.domain)
            permuted = [0] * size
            for mask in range(1, size):
                low = mask & -mask
                permuted[mask] = permuted[mask ^ low] | moved[low.bit_length() - 1]
            self._tables = (domain_table, [image_table[m] for m in permuted])
            logger.debug("tabulated %d subfamilies", size)
        return self._tables

    def _family(self, mask: int) -> IntervalSet:
        return IntervalSet(i for bit, i in enumerate(self.domain) if mask >> bit & 1)

    def _members(self, mask: int) -> Tuple[DyadicInterval, ...]:
        return tuple(i for bit, i in enumerate(self.domain) if mask >> bit & 1)

    def _earlier(self, mask: int, other: int) -> bool:
        """Tie-break: smaller family first, then lexicographic order."""
        a, b = _popcount(mask), _popcount(other)
        if a != b:
            return a < b
        return self._members(mask) < self._members(other)

    def _scaled(self, value: int) -> Fraction:
        return Fraction(value, 1 << self.scale)

    # Carleson distortion

    def carleson_distortion(self, mode: str = "exhaustive", budget: Optional[int] = None,
                            seed: int = 0) -> DistortionResult:
        """
        sup over nonempty E inside the domain of [[tau(E)]] / [[E]].

        Args:
            mode: "exhaustive" for the exact maximum (at most 15 domain
                intervals), "greedy" for a seeded lower estimate.
            budget: Number of greedy starts; all singletons when None.
            seed: Seed choosing the greedy starts.

        Raises:
            OracleLimitError: In exhaustive mode beyond the domain cap.
        """
        if mode not in MODES:
            raise ParameterError(f"unknown oracle mode {mode!r}; expected one of {MODES}")
        if not self.domain:
            return DistortionResult(Fraction(0), IntervalSet(), mode == "exhaustive")
        if mode == "greedy":
            return self._greedy_distortion(budget, seed)

        domain_table, image_table = self._subset_tables()
        best = 0
        for mask in range(1, len(domain_table)):
            if best == 0:
                best = mask
                continue
            lhs = image_table[mask] * domain_table[best]
            rhs = image_table[best] * domain_table[mask]
            if lhs > rhs or (lhs == rhs and self._earlier(mask, best)):
                best = mask
        ratio = Fraction(image_table[best], domain_table[best])
        return DistortionResult(ratio, self._family(best), True)

    def _starts(self, budget: Optional[int], seed: int) -> List[DyadicInterval]:
        if budget is None or budget >= len(self.domain):
            return list(self.domain)
        if budget < 1:
            raise ParameterError(f"budget must be positive, got {budget}")
        return sorted(random.Random(seed).sample(self.domain, budget))

    def _grow(self, start: DyadicInterval, limit: Optional[int] = None) -> Tuple[Fraction, IntervalSet]:
        # Greedy growth from a singleton. With a limit, maximize [[tau(E)]]
        # subject to [[E]] <= limit; otherwise maximize the ratio.
        source, target = _PackingState(self.scale), _PackingState(self.scale)
        source.add(start)
        target.add(self.tau(start))
        members = [start]
        remaining = [i for i in self.domain if i != start]

        def score(dom: int, img: int) -> Fraction:
            return self._scaled(img) if limit is not None else Fraction(img, dom)

        best_value = score(source.best, target.best)
        best_family = list(members)
        while remaining:
            choice = None
            choice_value = None
            for candidate in remaining:
                dom = source.trial(candidate)
                if limit is not None and dom > limit << self.scale:
                    continue
                value = score(dom, target.trial(self.tau(candidate)))
                if choice is None or value > choice_value:
                    choice, choice_value = candidate, value
            if choice is None:
                break
            source.add(choice)
            target.add(self.tau(choice))
            members.append(choice)
            remaining.remove(choice)
            if choice_value > best_value:
                best_value, best_family = choice_value, list(members)
        return best_value, IntervalSet(best_family)

    @staticmethod
    def _prefer(value: Fraction, family: IntervalSet,
                best: Optional[Tuple[Fraction, IntervalSet]]) -> bool:
        if best is None or value > best[0]:
            return True
        if value < best[0]:
            return False
        return (len(family), family.members) < (len(best[1]), best[1].members)

    def _greedy_distortion(self, budget: Optional[int], seed: int) -> DistortionResult:
        best: Optional[Tuple[Fraction, IntervalSet]] = None
        for start in self._starts(budget, seed):
            value, family = self._grow(start)
            if self._prefer(value, family, best):
                best = (value, family)
        assert best is not None
        return DistortionResult(best[0], best[1], False)

    # Disjoint families

    def _antichains(self) -> List[Tuple[DyadicInterval, ...]]:
        children: Dict[Optional[DyadicInterval], List[DyadicInterval]] = {}
        members = set(self.domain)
        for interval in self.domain:
            parent = next((a for a in interval.ancestors() if a in members), None)
            children.setdefault(parent, []).append(interval)

        def combine(nodes: List[DyadicInterval]) -> List[Tuple[DyadicInterval, ...]]:
            choices = [below(node) for node in nodes]
            return [sum(parts, ()) for parts in product(*choices)]

        def below(node: DyadicInterval) -> List[Tuple[DyadicInterval, ...]]:
            return [(node,)] + combine(children.get(node, []))

        return [family for family in combine(children.get(None, [])) if family]

    def disjoint_family_bound(self) -> Tuple[Fraction, IntervalSet]:
        """
        max [[tau(E)]] over nonempty pairwise disjoint E inside the domain.

        Raises:
            OracleLimitError: Beyond the exhaustive domain cap.
        """
        self._require_exhaustive()
        best: Optional[Tuple[Fraction, IntervalSet]] = None
        for members in self._antichains():
            family = IntervalSet(members)
            value = CarlesonAnalyzer.constant(self.tau.map_collection(family))
            if self._prefer(value, family, best):
                best = (value, family)
        if best is None:
            return Fraction(0), IntervalSet()
        return best

    # Operator norm bounds

    def operator_norm_upper_bound(self, budget: Optional[int] = None,
                                  seed: int = 0) -> Tuple[Fraction, IntervalSet, bool]:
        """
        M3 = max [[tau(E)]] over E with [[E]] <= 3, a bound on ||T||**2.

        Returns:
            (bound, witness family, certified). Beyond the exhaustive cap a
            greedy estimate is returned with certified False.
        """
        if not self.domain:
            return Fraction(0), IntervalSet(), True
        if not self.exhaustive_allowed:
            best: Optional[Tuple[Fraction, IntervalSet]] = None
            for start in self._starts(budget, seed):
                value, family = self._grow(start, UPPER_FAMILY_BOUND)
                if self._prefer(value, family, best):
                    best = (value, family)
            assert best is not None
            logger.warning("upper bound %s is uncertified: domain has %d intervals",
                           best[0], len(self.domain))
            return best[0], best[1], False

        domain_table, image_table = self._subset_tables()
        limit = UPPER_FAMILY_BOUND << self.scale
        best_mask = 0
        for mask in range(1, len(domain_table)):
            if domain_table[mask] > limit:
                continue
            if (best_mask == 0 or image_table[mask] > image_table[best_mask]
                    or (image_table[mask] == image_table[best_mask] and self._earlier(mask, best_mask))):
                best_mask = mask
        return self._scaled(image_table[best_mask]), self._family(best_mask), True

    def _norm_ratio(self, coefficients: Dict[DyadicInterval, Fraction]) -> Optional[Fraction]:
        x = HaarExpansion(coefficients)
        denominator = CarlesonAnalyzer.bmo_norm_sq(x)
        if not denominator:
            return None
        return CarlesonAnalyzer.bmo_norm_sq(self.tau.transport(x)) / denominator

    def _ascend(self, rng: random.Random,
                support: Sequence[DyadicInterval]) -> Tuple[Fraction, Dict[DyadicInterval, Fraction]]:
        unit = 1 << MAX_DENOMINATOR_EXPONENT
        coefficients = {i: Fraction(rng.randint(-unit, unit), unit) for i in support}
        if not any(coefficients.values()):
            coefficients[support[0]] = Fraction(1)
        best = self._norm_ratio(coefficients) or Fraction(0)

        step = Fraction(1, 2)
        sweeps = 0
        while step * unit >= 1 and sweeps < 2 * (MAX_DENOMINATOR_EXPONENT + 1):
            sweeps += 1
            improved = False
            for interval in support:
                for delta in (step, -step):
                    trial = dict(coefficients)
                    trial[interval] = coefficients[interval] + delta
                    value = self._norm_ratio(trial)
                    if value is not None and value > best:
                        best, coefficients, improved = value, trial, True
                        break
            if not improved:
                step /= 2
        return best, coefficients

    def operator_norm_lower_bound(self, budget: int = 4, seed: int = 0, mode: Optional[str] = None
                                  ) -> Tuple[float, Fraction, HaarExpansion, DistortionResult]:
        """
        A lower bound on ||T|| from indicator witnesses and coordinate ascent.

        The indicator of the distortion witness E gives ||T||**2 >= [[tau(E)]] / [[E]];
        seeded coordinate ascent over coefficients with denominators at most
        2**10 may improve on it.

        Returns:
            (bound, bound squared, witness expansion, distortion result).
        """
        if mode is None:
            mode = "exhaustive" if self.exhaustive_allowed else "greedy"
        distortion = self.carleson_distortion(mode, budget, seed)
        best_sq = distortion.ratio
        witness = CarlesonAnalyzer.indicator_expansion(distortion.witness)

        rng = random.Random(seed)
        support = self.domain if self.exhaustive_allowed else distortion.witness.members
        for _ in range(budget if support else 0):
            value, coefficients = self._ascend(rng, support)
            if value > best_sq:
                best_sq, witness = value, HaarExpansion(coefficients)
        return sqrt_fraction(best_sq), best_sq, witness, distortion

    def bounds(self, budget: int = 4, seed: int = 0, mode: Optional[str] = None) -> NormReport:
        """
        The sandwich distortion <= lower_bound**2 <= M3.

        Raises:
            DecompositionError: If a certified upper bound falls below the
                lower bound.
        """
        lower, lower_sq, lower_witness, distortion = self.operator_norm_lower_bound(budget, seed, mode)
        upper_sq, upper_witness, certified = self.operator_norm_upper_bound(budget, seed)
        if certified and lower_sq > upper_sq:
            raise DecompositionError(f"lower bound {lower_sq} exceeds certified upper bound {upper_sq}")
        return NormReport(
            distortion=distortion.ratio,
            witness=distortion.witness,
            lower_bound=lower,
            lower_bound_sq=lower_sq,
            lower_witness=lower_witness,
            upper_bound_sq=upper_sq,
            upper_witness=upper_witness,
            certified=certified,
        )
