"""
The stopping-time colouring process under a single top interval.

Starting from a green top interval I0, intervals of the working family are
coloured one at a time:

- Rule 1 colours an unvisited child I1 of a green interval green when
  |tau(I1)|/|I1| <= A |tau(K + {I1})*| / |I0|, red otherwise.
- Rule 2 recolours a red interval green when it passes the same test against
  the current visited set K.
- Rule 3 stops once neither rule changes anything; the red intervals form
  the stopping family C.
"""
import heapq
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Union

from haarbmo.exceptions import DecompositionError, ParameterError
from haarbmo.models.certificate import Colour, MainLemmaResult, TraceEntry
from haarbmo.models.interval import CoverTracker, DyadicInterval, IntervalSet
from haarbmo.models.rearrangement import Rearrangement

logger = logging.getLogger(__name__)

SWEEP_ORDERS = ("canonical", "reverse")


def check_threshold(value: Union[int, Fraction]) -> Fraction:
    threshold = Fraction(value)
    if threshold < 1:
        raise ParameterError(f"A must be at least 1, got {threshold}")
    return threshold


class MainLemma:
    """
    Run the colouring process for a fixed rearrangement and threshold A.

    The working family under I0 is either the full tree Q(I0) of the universe
    or the members of a supplied family contained in I0. The children of an
    interval in the working family are its maximal members strictly below it;
    for the full tree these are the two dyadic halves.
    """

    def __init__(self, tau: Rearrangement, threshold: Union[int, Fraction],
                 sweep_order: str = "canonical"):
        if sweep_order not in SWEEP_ORDERS:
            raise ParameterError(f"unknown sweep order {sweep_order!r}; expected one of {SWEEP_ORDERS}")
        self.tau = tau
        self.threshold = check_threshold(threshold)
        self.sweep_order = sweep_order
        self._scale = tau.universe.max_depth

    def _working_family(self, top: DyadicInterval, family: Optional[IntervalSet]) -> IntervalSet:
        universe = self.tau.universe
        universe.check(top)
        if family is None:
            working = IntervalSet(universe.subtree(top))
        else:
            if top not in family:
                raise ParameterError(f"top interval {top} is not a member of the working family")
            working = family.restrict(top)
        self.tau.require_domain(working)
        return working

    @staticmethod
    def _children_map(top: DyadicInterval, working: IntervalSet) -> Dict[DyadicInterval, List[DyadicInterval]]:
        children: Dict[DyadicInterval, List[DyadicInterval]] = {}
        for interval in working:
            if interval == top:
                continue
            for ancestor in interval.ancestors():
                if ancestor in working:
                    children.setdefault(ancestor, []).append(interval)
                    break
        return children

    def _passes(self, interval: DyadicInterval, top: DyadicInterval, cover_total: int) -> bool:
        # |tau(I)|/|I| <= A * cover / |I0|, with cover in units of 2**-scale
        lhs = self.tau.ratio(interval) * (1 << self._scale)
        rhs = self.threshold * cover_total * (1 << top.depth)
        return lhs <= rhs

    def run(self, top: DyadicInterval, family: Optional[IntervalSet] = None) -> MainLemmaResult:
        """
        Colour the working family under top.

        Args:
            top: The top interval I0.
            family: Restrict the process to this family; None means the full
                tree below top.

        Returns:
            The red stopping family, the green family and the rule trace.

        Raises:
            DomainError: If tau is undefined on part of the working family.
            DecompositionError: If a guaranteed postcondition fails.
        """
        working = self._working_family(top, family)
        children = self._children_map(top, working)

        colour: Dict[DyadicInterval, Colour] = {top: Colour.GREEN}
        trace: List[TraceEntry] = [TraceEntry(top, 0, Colour.GREEN)]
        tracker = CoverTracker(self._scale)
        tracker.add(self.tau(top))

        pending: List[DyadicInterval] = list(children.get(top, ()))
        heapq.heapify(pending)

        while True:
            # Rule 1: saturate the green intervals.
            while pending:
                candidate = heapq.heappop(pending)
                if candidate in colour:
                    continue
                image = self.tau(candidate)
                total = tracker.total + tracker.gain(image)
                tracker.add(image)
                if self._passes(candidate, top, total):
                    colour[candidate] = Colour.GREEN
                    for child in children.get(candidate, ()):
                        heapq.heappush(pending, child)
                else:
                    colour[candidate] = Colour.RED
                trace.append(TraceEntry(candidate, 1, colour[candidate]))

            # Rule 2: one sweep over the red intervals.
            reds = sorted((i for i, c in colour.items() if c is Colour.RED),
                          reverse=self.sweep_order == "reverse")
            changed = False
            for interval in reds:
                if self._passes(interval, top, tracker.total):
                    colour[interval] = Colour.GREEN
                    trace.append(TraceEntry(interval, 2, Colour.GREEN))
                    for child in children.get(interval, ()):
                        heapq.heappush(pending, child)
                    changed = True
            if not changed:
                break

        red = IntervalSet(i for i, c in colour.items() if c is Colour.RED)
        green = IntervalSet(i for i, c in colour.items() if c is Colour.GREEN)
        for interval in red:
            trace.append(TraceEntry(interval, 3, Colour.RED))
        result = MainLemmaResult(top, red, green, trace)
        self._check(result, working)
        logger.debug("colouring under %s: %d green, %d red", top, len(green), len(red))
        return result

    def _check(self, result: MainLemmaResult, working: IntervalSet) -> None:
        red, green, top = result.red, result.green, result.top
        if not red.is_pairwise_disjoint():
            raise DecompositionError(f"red family under {top} is not pairwise disjoint")
        below_red = IntervalSet(i for i in working if i in red or red.has_proper_ancestor(i))
        if not green.isdisjoint(below_red) or (green | below_red) != working:
            raise DecompositionError(f"green and red families under {top} do not partition the working family")

        cover = (self.tau.map_collection(green).covered_measure()
                 + self.tau.map_collection(red).covered_measure())
        bound = self.threshold * cover.to_fraction() / top.measure.to_fraction()
        for interval in green:
            if self.tau.ratio(interval) > bound:
                raise DecompositionError(f"green interval {interval} violates the homogeneity bound")


def main_lemma(tau: Rearrangement, top: DyadicInterval, threshold: Union[int, Fraction] = 1,
               family: Optional[IntervalSet] = None, sweep_order: str = "canonical") -> MainLemmaResult:
    """Functional shorthand for MainLemma(tau, threshold, sweep_order).run(top, family)."""
    return MainLemma(tau, threshold, sweep_order).run(top, family)
