"""
The staged counterexample: a rearrangement whose image blocks pile up
homogeneous mass in [1/2, 1) while each stage alone is harmless.

For every stage n an interval K_n of [0, 1/4) is chosen. Its generations
G_i (the dyadic subintervals of length 2**-i |K_n|, i = 0..l_n) are
translated by rho: G_i for i >= 1 onto the slot
[1/2 + (i - 1)|K_n|, 1/2 + i|K_n|), and G_0 = {K_n} into [1/4, 1/2).
sigma squeezes the same family by eps_n = 2**-e towards the left endpoint
of K_n, and tau = rho after sigma^-1.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from haarbmo.constructions.extension import extend_to_total
from haarbmo.exceptions import DecompositionError, ParameterError
from haarbmo.models.interval import DyadicInterval, DyadicRational, IntervalSet, Universe
from haarbmo.models.rearrangement import Rearrangement
from haarbmo.models.report import ExampleBundle, StageEntry, StageReport

logger = logging.getLogger(__name__)

# Depth of K_1 in the default recursion (|K_1| = 1/8).
DEFAULT_FIRST_DEPTH = 3


@dataclass(frozen=True)
class StageSpec:
    kn_depth: int
    l_n: int
    eps_exp: int
    default_l_n: Optional[int] = None


@dataclass
class Section5Params:
    """Universe depth and the (kn_depth, l_n, eps_exp) triple of every stage."""
    depth: int
    stages: List[StageSpec] = field(default_factory=list)

    @classmethod
    def from_triples(cls, depth: int, triples: Sequence[Tuple[int, int, int]]) -> "Section5Params":
        return cls(depth, [StageSpec(*t) for t in triples])

    @classmethod
    def default_recursion(cls, depth: int, stages: int, eps_exp: int) -> "Section5Params":
        """
        The recursion |K_1| = 1/8, l_n = 1/(2|K_n|), |K_n+1| = |K_n|**2 / 4.

        l_n is cut to depth - kn_depth - eps_exp where the universe is too
        shallow; the default value is kept on the stage for reporting.
        """
        specs = []
        kn_depth = DEFAULT_FIRST_DEPTH
        for n in range(1, stages + 1):
            default_l = 1 << (kn_depth - 1)
            room = depth - kn_depth - eps_exp
            if room < 1:
                raise ParameterError(f"stage {n}: no room for K_n of depth {kn_depth} in a universe of depth {depth}")
            l_n = min(default_l, room)
            if l_n < default_l:
                logger.warning("stage %d: l_n truncated from %d to %d", n, default_l, l_n)
            specs.append(StageSpec(kn_depth, l_n, eps_exp, default_l_n=default_l))
            kn_depth = 2 * kn_depth + 2
        params = cls(depth, specs)
        params.validate()
        return params

    def validate(self) -> None:
        """
        Raises:
            ParameterError: If the stages do not fit the universe.
        """
        Universe(self.depth)
        if not self.stages:
            raise ParameterError("at least one stage is required")
        previous = 0
        end = DyadicRational(0)
        for n, stage in enumerate(self.stages, start=1):
            if stage.kn_depth < 2 or stage.kn_depth < previous:
                raise ParameterError(f"stage {n}: kn_depth must be at least 2 and nondecreasing, got {stage.kn_depth}")
            if stage.l_n < 1 or stage.eps_exp < 0:
                raise ParameterError(f"stage {n}: l_n must be positive and eps_exp non-negative")
            if stage.kn_depth + stage.l_n + stage.eps_exp > self.depth:
                raise ParameterError(
                    f"stage {n}: kn_depth + l_n + eps_exp = "
                    f"{stage.kn_depth + stage.l_n + stage.eps_exp} exceeds depth {self.depth}")
            if stage.l_n > 1 << (stage.kn_depth - 1):
                raise ParameterError(f"stage {n}: slot overflow, l_n |K_n| = {stage.l_n}/2^{stage.kn_depth} > 1/2")
            previous = stage.kn_depth
            end = end + DyadicRational(1, stage.kn_depth)
        if DyadicRational(1, 2) < end:
            raise ParameterError(f"K_n do not fit into [0, 1/4): total length {end}")


class Section5Builder:
    """Build rho, sigma and tau for a set of stages."""

    def __init__(self, params: Section5Params):
        params.validate()
        self.params = params
        self.universe = Universe(params.depth)

    def placements(self) -> List[DyadicInterval]:
        """K_n, packed left to right from 0."""
        cursor = DyadicRational(0)
        result = []
        for stage in self.params.stages:
            result.append(DyadicInterval(stage.kn_depth, cursor.scaled(stage.kn_depth)))
            cursor = cursor + DyadicRational(1, stage.kn_depth)
        return result

    @staticmethod
    def _rho(interval: DyadicInterval, top: DyadicInterval) -> DyadicInterval:
        i = interval.depth - top.depth
        if i == 0:
            return DyadicInterval(top.depth, top.index + (1 << (top.depth - 2)))
        offset = interval.index - (top.index << i)
        slot = (1 << (interval.depth - 1)) + ((i - 1) << i)
        return DyadicInterval(interval.depth, slot + offset)

    @staticmethod
    def _sigma(interval: DyadicInterval, top: DyadicInterval, eps_exp: int) -> DyadicInterval:
        i = interval.depth - top.depth
        offset = interval.index - (top.index << i)
        return DyadicInterval(interval.depth + eps_exp, (top.index << (i + eps_exp)) + offset)

    def build(self) -> ExampleBundle:
        """
        Raises:
            ParameterError: If the stages do not fit.
            RearrangementError: If slots of different stages collide, or rho
                has no length-preserving extension.
        """
        rho: Dict[DyadicInterval, DyadicInterval] = {}
        sigma: Dict[DyadicInterval, DyadicInterval] = {}
        report = StageReport()
        domains: List[IntervalSet] = []
        total = DyadicRational(0)

        for stage, top in zip(self.params.stages, self.placements()):
            family = [i for i in self.universe.subtree(top) if i.depth <= top.depth + stage.l_n]
            for interval in family:
                rho[interval] = self._rho(interval, top)
                sigma[interval] = self._sigma(interval, top, stage.eps_exp)
            domains.append(IntervalSet(family))

            entry = StageEntry(stage.kn_depth, stage.l_n, stage.eps_exp, top.left,
                               default_l_n=stage.default_l_n,
                               truncated=stage.default_l_n is not None and stage.default_l_n > stage.l_n)
            for i in range(1, stage.l_n + 1):
                generation = IntervalSet(j for j in family if j.depth == top.depth + i)
                entry.generation_measures.append(generation.covered_measure())
            slots = IntervalSet(rho[j] for j in family if j.depth > top.depth)
            entry.slot_measure = slots.covered_measure()
            if entry.slot_measure != stage.l_n * top.measure:
                raise DecompositionError(f"stage slots cover {entry.slot_measure}, expected l_n |K_n|")
            total = total + entry.slot_measure
            report.stages.append(entry)
            report.cumulative.append(total)

        partial_rho = Rearrangement.validate(self.universe, rho.items())
        partial_sigma = Rearrangement.validate(self.universe, sigma.items())
        partial_tau = partial_rho.compose(partial_sigma.inverse())
        if not partial_rho.is_level_preserving():
            raise DecompositionError("rho does not preserve lengths")

        bundle = ExampleBundle(
            rho=extend_to_total(self.universe, dict(partial_rho.items()), same_length_only=True),
            sigma=extend_to_total(self.universe, dict(partial_sigma.items())),
            tau=extend_to_total(self.universe, dict(partial_tau.items())),
            stage_report=report,
            stage_domains=domains,
        )
        logger.debug("built %d stages, cumulative slot mass %s", len(domains), total)
        return bundle


def build_section5(params: Section5Params) -> ExampleBundle:
    return Section5Builder(params).build()
