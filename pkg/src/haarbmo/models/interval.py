"""
Models for dyadic intervals, truncated universes and finite interval collections.

Intervals are encoded as (depth, index) pairs; no floating point endpoints are
used anywhere, so nesting tests and measures are exact.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple, Union

from haarbmo.exceptions import IntervalError, ParameterError

# Index arithmetic headroom for the run-wide universe depth.
MAX_UNIVERSE_DEPTH = 62
# Features that enumerate subsets of a universe refuse deeper universes.
EXHAUSTIVE_DEPTH_CAP = 4


@total_ordering
class DyadicRational:
    """
    An exact number of the form numerator * 2**-exponent.

    Kept in canonical form: the exponent is non-negative and the numerator is
    odd unless the exponent is zero.
    """

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int, exponent: int = 0):
        if exponent < 0:
            numerator <<= -exponent
            exponent = 0
        if numerator == 0:
            exponent = 0
        elif exponent:
            shift = min(exponent, (numerator & -numerator).bit_length() - 1)
            numerator >>= shift
            exponent -= shift
        self.numerator = numerator
        self.exponent = exponent

    @classmethod
    def from_fraction(cls, value: Fraction) -> "DyadicRational":
        """Convert a Fraction whose denominator is a power of two."""
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ParameterError(f"{value} is not a dyadic rational")
        return cls(value.numerator, den.bit_length() - 1)

    @property
    def denominator(self) -> int:
        return 1 << self.exponent

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def scaled(self, exponent: int) -> int:
        """Return self * 2**exponent as an integer; the result must be exact."""
        if exponent < self.exponent:
            raise ParameterError(f"{self} is not a multiple of 2^-{exponent}")
        return self.numerator << (exponent - self.exponent)

    def _align(self, other: "DyadicRational") -> Tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return (self.numerator << (e - self.exponent),
                other.numerator << (e - other.exponent), e)

    @staticmethod
    def _coerce(other: object) -> Optional["DyadicRational"]:
        if isinstance(other, DyadicRational):
            return other
        if isinstance(other, int):
            return DyadicRational(other)
        return None

    def __add__(self, other: object) -> "DyadicRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, e = self._align(o)
        return DyadicRational(a + b, e)

    __radd__ = __add__

    def __sub__(self, other: object) -> "DyadicRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, e = self._align(o)
        return DyadicRational(a - b, e)

    def __neg__(self) -> "DyadicRational":
        return DyadicRational(-self.numerator, self.exponent)

    def __mul__(self, other: object) -> "DyadicRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DyadicRational(self.numerator * o.numerator, self.exponent + o.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> Fraction:
        if isinstance(other, DyadicRational):
            return self.to_fraction() / other.to_fraction()
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() / other
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if isinstance(other, DyadicRational):
            return self.numerator == other.numerator and self.exponent == other.exponent
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        if isinstance(other, DyadicRational):
            a, b, _ = self._align(other)
            return a < b
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() < other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __bool__(self) -> bool:
        return self.numerator != 0

    def __repr__(self) -> str:
        return f"DyadicRational({self.numerator}, {self.exponent})"

    def __str__(self) -> str:
        return f"{self.numerator}/{1 << self.exponent}"


class Relation(Enum):
    """Relative position of two dyadic intervals."""
    EQUAL = "equal"
    CONTAINS = "contains"
    CONTAINED_IN = "contained_in"
    DISJOINT = "disjoint"


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """
    The dyadic interval [index * 2**-depth, (index + 1) * 2**-depth).

    Ordering is the canonical (depth, index) order used everywhere.
    """
    depth: int
    index: int

    def __post_init__(self) -> None:
        if not isinstance(self.depth, int) or not isinstance(self.index, int):
            raise IntervalError(f"interval fields must be integers, got ({self.depth!r}, {self.index!r})")
        if self.depth < 0 or self.depth > MAX_UNIVERSE_DEPTH:
            raise IntervalError(f"depth {self.depth} outside 0..{MAX_UNIVERSE_DEPTH}")
        if not 0 <= self.index < (1 << self.depth):
            raise IntervalError(f"index {self.index} outside 0..2^{self.depth}-1")

    @property
    def measure(self) -> DyadicRational:
        return DyadicRational(1, self.depth)

    @property
    def left(self) -> DyadicRational:
        return DyadicRational(self.index, self.depth)

    @property
    def right(self) -> DyadicRational:
        return DyadicRational(self.index + 1, self.depth)

    def children(self, universe: Optional["Universe"] = None) -> Tuple["DyadicInterval", "DyadicInterval"]:
        """
        Return the two halves of this interval.

        Args:
            universe: When given, children must lie inside it.

        Returns:
            The (left, right) children.
        """
        limit = MAX_UNIVERSE_DEPTH if universe is None else universe.max_depth
        if self.depth >= limit:
            raise IntervalError(f"{self}: no children in universe")
        d = self.depth + 1
        return DyadicInterval(d, 2 * self.index), DyadicInterval(d, 2 * self.index + 1)

    def parent(self) -> "DyadicInterval":
        if self.depth == 0:
            raise IntervalError("root has no parent")
        return DyadicInterval(self.depth - 1, self.index >> 1)

    def ancestors(self) -> Iterator["DyadicInterval"]:
        """Proper ancestors, nearest first."""
        d, k = self.depth, self.index
        while d > 0:
            d -= 1
            k >>= 1
            yield DyadicInterval(d, k)

    def ancestor_at(self, depth: int) -> "DyadicInterval":
        if not 0 <= depth <= self.depth:
            raise IntervalError(f"{self} has no ancestor at depth {depth}")
        return DyadicInterval(depth, self.index >> (self.depth - depth))

    def contains(self, other: "DyadicInterval") -> bool:
        """Non-strict containment: other is a subset of self."""
        return (self.depth <= other.depth
                and other.index >> (other.depth - self.depth) == self.index)

    def relation(self, other: "DyadicInterval") -> Relation:
        if self == other:
            return Relation.EQUAL
        if self.contains(other):
            return Relation.CONTAINS
        if other.contains(self):
            return Relation.CONTAINED_IN
        return Relation.DISJOINT

    def length_ratio(self, image: "DyadicInterval") -> Fraction:
        """|image| / |self| as an exact rational."""
        shift = self.depth - image.depth
        return Fraction(1 << shift) if shift >= 0 else Fraction(1, 1 << -shift)

    def to_pair(self) -> List[int]:
        return [self.depth, self.index]

    def __str__(self) -> str:
        return f"I({self.depth},{self.index})"


ROOT = DyadicInterval(0, 0)


@dataclass(frozen=True)
class Universe:
    """The truncated tree U_D of all dyadic intervals of depth at most D."""
    max_depth: int

    def __post_init__(self) -> None:
        if not isinstance(self.max_depth, int) or not 0 <= self.max_depth <= MAX_UNIVERSE_DEPTH:
            raise ParameterError(f"universe depth must lie in 0..{MAX_UNIVERSE_DEPTH}, got {self.max_depth!r}")

    @property
    def size(self) -> int:
        return (1 << (self.max_depth + 1)) - 1

    @property
    def root(self) -> DyadicInterval:
        return ROOT

    def level(self, depth: int) -> Iterator[DyadicInterval]:
        for k in range(1 << depth):
            yield DyadicInterval(depth, k)

    def intervals(self) -> Iterator[DyadicInterval]:
        """All intervals of the universe in canonical order."""
        for d in range(self.max_depth + 1):
            yield from self.level(d)

    def subtree(self, top: DyadicInterval) -> Iterator[DyadicInterval]:
        """Q(top): the intervals of the universe contained in top."""
        self.check(top)
        for d in range(top.depth, self.max_depth + 1):
            shift = d - top.depth
            base = top.index << shift
            for k in range(base, base + (1 << shift)):
                yield DyadicInterval(d, k)

    def all(self) -> "IntervalSet":
        return IntervalSet(self.intervals())

    def check(self, interval: DyadicInterval) -> DyadicInterval:
        if interval.depth > self.max_depth:
            raise IntervalError(f"interval exceeds max depth: {interval} in a universe of depth {self.max_depth}")
        return interval

    def check_all(self, intervals: Iterable[DyadicInterval]) -> None:
        for interval in intervals:
            self.check(interval)

    def __contains__(self, interval: object) -> bool:
        return isinstance(interval, DyadicInterval) and interval.depth <= self.max_depth

    @property
    def exhaustive(self) -> bool:
        return self.max_depth <= EXHAUSTIVE_DEPTH_CAP


IntervalLike = Union[DyadicInterval, Tuple[int, int], List[int]]


def as_interval(value: IntervalLike) -> DyadicInterval:
    if isinstance(value, DyadicInterval):
        return value
    depth, index = value
    return DyadicInterval(depth, index)


class IntervalSet:
    """
    An immutable finite collection of dyadic intervals.

    Iteration follows the canonical (depth, index) order; duplicates collapse.
    """

    __slots__ = ("_members", "_index")

    def __init__(self, members: Iterable[IntervalLike] = ()):
        index = frozenset(as_interval(m) for m in members)
        self._index = index
        self._members = tuple(sorted(index))

    @property
    def members(self) -> Tuple[DyadicInterval, ...]:
        return self._members

    def __iter__(self) -> Iterator[DyadicInterval]:
        return iter(self._members)

    def __len__(self) -> int:
        return len(self._members)

    def __bool__(self) -> bool:
        return bool(self._members)

    def __contains__(self, item: object) -> bool:
        return item in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._index == other._index

    def __hash__(self) -> int:
        return hash(self._index)

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self._index | other._index)

    def __sub__(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self._index - other._index)

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self._index & other._index)

    def issubset(self, other: "IntervalSet") -> bool:
        return self._index <= other._index

    def isdisjoint(self, other: "IntervalSet") -> bool:
        return self._index.isdisjoint(other._index)

    @property
    def max_depth(self) -> int:
        return max((m.depth for m in self._members), default=0)

    def restrict(self, top: DyadicInterval) -> "IntervalSet":
        """The members of this collection contained in top (top included)."""
        return IntervalSet(m for m in self._members if top.contains(m))

    def has_proper_ancestor(self, interval: DyadicInterval) -> bool:
        return any(a in self._index for a in interval.ancestors())

    def maximal_elements(self) -> "IntervalSet":
        """Members contained in no other member; pairwise disjoint, same cover."""
        return IntervalSet(m for m in self._members if not self.has_proper_ancestor(m))

    def covered_measure(self) -> DyadicRational:
        """|S*|, the measure of the union of the members."""
        total = DyadicRational(0)
        for m in self.maximal_elements():
            total = total + m.measure
        return total

    def total_measure(self) -> DyadicRational:
        """The sum of |I| over members (not the measure of the union)."""
        total = DyadicRational(0)
        for m in self._members:
            total = total + m.measure
        return total

    def down_set(self, universe: Universe) -> "IntervalSet":
        """All intervals of the universe contained in some member."""
        universe.check_all(self._members)
        result: List[DyadicInterval] = []
        for top in self.maximal_elements():
            result.extend(universe.subtree(top))
        return IntervalSet(result)

    def is_pairwise_disjoint(self) -> bool:
        return all(not self.has_proper_ancestor(m) for m in self._members)

    def to_pairs(self) -> List[List[int]]:
        return [m.to_pair() for m in self._members]

    def __repr__(self) -> str:
        return "IntervalSet([" + ", ".join(str(m) for m in self._members) + "])"


class CoverTracker:
    """
    Incremental measure of the union of a growing set of dyadic intervals.

    Measures are kept as integers in units of 2**-scale_depth. Each insertion
    costs O(depth).
    """

    def __init__(self, scale_depth: int):
        self.scale_depth = scale_depth
        self._inserted: Set[DyadicInterval] = set()
        self._cover: Dict[DyadicInterval, int] = {}
        self.total = 0

    def _weight(self, interval: DyadicInterval) -> int:
        if interval.depth > self.scale_depth:
            raise IntervalError(f"{interval} is finer than the tracker scale 2^-{self.scale_depth}")
        return 1 << (self.scale_depth - interval.depth)

    def _covered_by_ancestor(self, interval: DyadicInterval) -> bool:
        if interval in self._inserted:
            return True
        return any(a in self._inserted for a in interval.ancestors())

    def gain(self, interval: DyadicInterval) -> int:
        """How much the covered measure would grow if interval were added."""
        if self._covered_by_ancestor(interval):
            return 0
        return self._weight(interval) - self._cover.get(interval, 0)

    def add(self, interval: DyadicInterval) -> int:
        g = self.gain(interval)
        if g:
            self._inserted.add(interval)
            self._cover[interval] = self._weight(interval)
            for a in interval.ancestors():
                self._cover[a] = self._cover.get(a, 0) + g
            self.total += g
        return g

    @property
    def measure(self) -> DyadicRational:
        return DyadicRational(self.total, self.scale_depth)
