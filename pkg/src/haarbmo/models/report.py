"""
Models for norm-bound reports and example bundles.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from haarbmo.models.expansion import HaarExpansion
from haarbmo.models.interval import DyadicRational, IntervalSet
from haarbmo.models.rearrangement import Rearrangement


@dataclass
class DistortionResult:
    """sup over families E of [[tau(E)]] / [[E]], or a lower estimate of it."""
    ratio: Fraction
    witness: IntervalSet
    exhaustive: bool = True


@dataclass
class NormReport:
    """
    A certified sandwich for the norm of the operator induced by tau.

    distortion <= lower_bound**2 <= upper_bound_sq, the last one only
    when certified.
    """
    distortion: Fraction
    witness: IntervalSet
    lower_bound: float
    lower_bound_sq: Fraction
    lower_witness: HaarExpansion
    upper_bound_sq: Fraction
    upper_witness: IntervalSet
    certified: bool

    def __str__(self) -> str:
        flag = "certified" if self.certified else "uncertified"
        return (f"distortion {self.distortion}, lower bound {self.lower_bound}, "
                f"upper bound^2 {self.upper_bound_sq} ({flag})")


@dataclass
class StageEntry:
    """Exact quantities of one stage of the counterexample construction."""
    kn_depth: int
    l_n: int
    eps_exp: int
    left: DyadicRational
    default_l_n: Optional[int] = None
    truncated: bool = False
    # |G_i(K_n)*| for i = 1..l_n
    generation_measures: List[DyadicRational] = field(default_factory=list)
    # Measure of the slots covered by rho on generations 1..l_n
    slot_measure: DyadicRational = field(default_factory=lambda: DyadicRational(0))

    @property
    def kn_measure(self) -> DyadicRational:
        return DyadicRational(1, self.kn_depth)


@dataclass
class StageReport:
    stages: List[StageEntry] = field(default_factory=list)
    cumulative: List[DyadicRational] = field(default_factory=list)


@dataclass
class ExampleBundle:
    """The maps rho, sigma and tau = rho after sigma^-1, plus the stage report."""
    rho: Rearrangement
    sigma: Rearrangement
    tau: Rearrangement
    stage_report: StageReport
    # The family K_n with its generations, per stage
    stage_domains: List[IntervalSet] = field(default_factory=list)
