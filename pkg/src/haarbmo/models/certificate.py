"""
Models for decomposition results: colouring traces, generation trees,
Property P certificates and verdicts.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from haarbmo.models.interval import DyadicInterval, IntervalSet
from haarbmo.models.rearrangement import Rearrangement


class Colour(Enum):
    """Colour assigned to an interval by the stopping-time rules."""
    GREEN = "green"
    RED = "red"


class Mode(Enum):
    """Certificate flavour: Property P, or its weak variant for a family B."""
    STRONG = "strong"
    WEAK = "weak"


@dataclass(frozen=True)
class TraceEntry:
    """One rule application: the interval, the rule number and the colour given."""
    interval: DyadicInterval
    rule: int
    colour: Colour

    def __str__(self) -> str:
        return f"rule {self.rule} {self.interval} {self.colour.value}"


@dataclass
class MainLemmaResult:
    """
    Outcome of the colouring process under a top interval.

    red is the stopping family C (pairwise disjoint); green is everything in
    the working family below top that is not covered by red.
    """
    top: DyadicInterval
    red: IntervalSet
    green: IntervalSet
    trace: List[TraceEntry] = field(default_factory=list, repr=False)

    def trace_lines(self) -> List[str]:
        return [f"{self.top}: {entry}" for entry in self.trace]


@dataclass(frozen=True)
class CertificateBlock:
    """A block (L_i, E_i): preimage intervals and error image intervals."""
    preimage: IntervalSet
    error: IntervalSet


@dataclass
class CertificateConstants:
    """
    The exact constants of a certificate.

    weak_sup is sup_i [[tau^-1(max tau(L_i))]]; it is 0 when there are no blocks.
    """
    error_carleson: Fraction
    homogeneity: Fraction
    mass: Fraction
    weak_sup: Optional[Fraction] = None

    def as_dict(self) -> Dict[str, Optional[Fraction]]:
        return {
            "error_carleson": self.error_carleson,
            "homogeneity": self.homogeneity,
            "mass": self.mass,
            "weak_sup": self.weak_sup,
        }


@dataclass
class ConditionSSplit:
    """A single split of tau(D) inside J into tau(L) and an error family E."""
    root: DyadicInterval
    preimage: IntervalSet
    error: IntervalSet


@dataclass
class PropertyPCertificate:
    """A decomposition of the image family inside root into blocks."""
    root: DyadicInterval
    mode: Mode
    blocks: List[CertificateBlock] = field(default_factory=list)
    constants: Optional[CertificateConstants] = None

    def preimage_union(self) -> IntervalSet:
        result = IntervalSet()
        for block in self.blocks:
            result = result | block.preimage
        return result

    def error_union(self) -> IntervalSet:
        result = IntervalSet()
        for block in self.blocks:
            result = result | block.error
        return result

    def merged(self, tau: Rearrangement) -> List[IntervalSet]:
        """The merged blocks K_i = L_i together with tau^-1(E_i)."""
        return [block.preimage | tau.preimage(block.error) for block in self.blocks]

    def flatten(self) -> ConditionSSplit:
        """Collapse all blocks into a single (L, E) split."""
        return ConditionSSplit(self.root, self.preimage_union(), self.error_union())

    def __str__(self) -> str:
        return f"{self.mode.value} certificate under {self.root} with {len(self.blocks)} blocks"


@dataclass
class GenerationTree:
    """
    The generations G_0, G_1, ... of stopping intervals, with the colouring
    result computed under each of their members.
    """
    generations: List[IntervalSet] = field(default_factory=list)
    results: Dict[DyadicInterval, MainLemmaResult] = field(default_factory=dict)

    def _generation_index(self) -> Dict[DyadicInterval, int]:
        index: Dict[DyadicInterval, int] = {}
        for k, generation in enumerate(self.generations):
            for interval in generation:
                index.setdefault(interval, k)
        return index

    def nesting_violation(self) -> Optional[Tuple[int, DyadicInterval]]:
        """
        Check that intersecting members of generations k and m satisfy
        I contains K exactly when k < m.

        Returns:
            (generation, interval) of the first offending member, or None.
        """
        index = self._generation_index()
        seen: Dict[DyadicInterval, int] = {}
        for m, generation in enumerate(self.generations):
            for interval in generation:
                if interval in seen:
                    return m, interval
                seen[interval] = m
                for ancestor in interval.ancestors():
                    k = index.get(ancestor)
                    if k is not None and k >= m:
                        return m, interval
        return None

    def packing_violations(self) -> List[Tuple[int, DyadicInterval, int]]:
        """
        Check that members of generation k + l inside a member I of generation
        k have total length at most 2**-l |I|.

        Returns:
            (k, I, l) for every violated pair.
        """
        index = self._generation_index()
        sums: Dict[Tuple[DyadicInterval, int], Fraction] = {}
        for m, generation in enumerate(self.generations):
            for interval in generation:
                for ancestor in interval.ancestors():
                    k = index.get(ancestor)
                    if k is not None and k < m:
                        key = (ancestor, m)
                        sums[key] = sums.get(key, Fraction(0)) + interval.measure.to_fraction()
        violations = []
        for (top, m), total in sorted(sums.items()):
            k = index[top]
            gap = m - k
            if total > top.measure.to_fraction() / (1 << gap):
                violations.append((k, top, gap))
        return violations

    def trace_lines(self) -> List[str]:
        lines = []
        for k, generation in enumerate(self.generations):
            for top in generation:
                lines.append(f"generation {k} {top}")
                lines.extend(self.results[top].trace_lines())
        return lines


@dataclass
class Verdict:
    """
    Result of a verifier: whether the structure is sound and the minimal
    constants for which each clause holds.
    """
    holds: bool
    mode: str
    constants: Dict[str, Fraction] = field(default_factory=dict)
    overall: Optional[Fraction] = None
    failure: Optional[str] = None
    bound: Optional[Fraction] = None

    def __str__(self) -> str:
        if self.failure:
            return f"{self.mode}: FAILED ({self.failure})"
        status = "holds" if self.holds else "fails"
        return f"{self.mode}: {status} with M = {self.overall}"


@dataclass
class SplitReport:
    """Parts produced by a splitting method together with their constants."""
    method: str
    parts: List[IntervalSet]
    constants: List[Fraction]
    expected_parts: Optional[int] = None
    within_bounds: bool = True
    notes: List[str] = field(default_factory=list)


@dataclass
class PackingEstimate:
    """
    The two halves S1 (block part) and S2 (error part) of the packing sum of
    an expansion transported into J, with the upper bounds that hold for them.
    """
    s1: Fraction
    s2: Fraction
    s1_bound: Fraction
    s2_bound: Fraction

    @property
    def total(self) -> Fraction:
        return self.s1 + self.s2

    def holds(self) -> bool:
        return self.s1 <= self.s1_bound and self.s2 <= self.s2_bound
