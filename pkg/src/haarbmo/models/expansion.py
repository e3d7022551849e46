"""
Models for finite Haar expansions and Carleson reports.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

from haarbmo.models.interval import DyadicInterval, IntervalSet, Universe

Coefficient = Union[int, Fraction]


class HaarExpansion:
    """
    A finitely supported expansion x = sum of x_I h_I.

    h_I is the L-infinity normalized Haar function (+1 on the left half of I,
    -1 on the right half). Coefficients are exact rationals; zero coefficients
    are never stored.
    """

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients: Optional[Mapping[DyadicInterval, Coefficient]] = None):
        items = (coefficients or {}).items()
        self._coefficients: Dict[DyadicInterval, Fraction] = {
            interval: Fraction(value)
            for interval, value in sorted(items)
            if value != 0
        }

    @classmethod
    def single(cls, interval: DyadicInterval, value: Coefficient = 1) -> "HaarExpansion":
        return cls({interval: value})

    def coefficient(self, interval: DyadicInterval) -> Fraction:
        return self._coefficients.get(interval, Fraction(0))

    def items(self) -> Iterator[Tuple[DyadicInterval, Fraction]]:
        return iter(self._coefficients.items())

    def squares(self) -> Dict[DyadicInterval, Fraction]:
        """The map I -> x_I**2."""
        return {i: c * c for i, c in self._coefficients.items()}

    def support(self) -> IntervalSet:
        return IntervalSet(self._coefficients)

    def is_zero(self) -> bool:
        return not self._coefficients

    def max_abs_coefficient(self) -> Fraction:
        return max((abs(c) for c in self._coefficients.values()), default=Fraction(0))

    def check_universe(self, universe: Universe) -> None:
        universe.check_all(self._coefficients)

    def __len__(self) -> int:
        return len(self._coefficients)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HaarExpansion):
            return NotImplemented
        return self._coefficients == other._coefficients

    def __hash__(self) -> int:
        return hash(tuple(self._coefficients.items()))

    def __repr__(self) -> str:
        terms = " + ".join(f"{c}*h{i}" for i, c in self._coefficients.items())
        return f"HaarExpansion({terms or '0'})"


@dataclass
class CarlesonReport:
    """
    Result of a packing-constant computation.

    constant is the supremum over dyadic J of the normalized packing sum under
    J, and witness is the first J (in canonical order) attaining it.
    """
    constant: Fraction
    witness: Optional[DyadicInterval] = None
    per_interval_sums: Optional[Dict[DyadicInterval, Fraction]] = field(default=None, repr=False)

    def __str__(self) -> str:
        where = f" at {self.witness}" if self.witness is not None else ""
        return f"Carleson constant {self.constant}{where}"
