"""
Model for rearrangements: finite injective maps of dyadic intervals.

A rearrangement tau induces the operator T with T h_I = h_tau(I) on Haar
expansions.
"""
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

from haarbmo.exceptions import DomainError, RearrangementError
from haarbmo.models.expansion import HaarExpansion
from haarbmo.models.interval import DyadicInterval, IntervalLike, IntervalSet, Universe, as_interval


class Rearrangement:
    """
    An injective map from a domain Dom inside U_D into U_D.

    Instances are immutable and always validated; build them with
    ``Rearrangement.validate`` or ``Rearrangement.identity``.
    """

    __slots__ = ("universe", "_map", "_inverse_map")

    def __init__(self, universe: Universe, mapping: Mapping[DyadicInterval, DyadicInterval]):
        checked = self._check(universe, mapping.items())
        self.universe = universe
        self._map: Dict[DyadicInterval, DyadicInterval] = dict(sorted(checked.items()))
        self._inverse_map: Dict[DyadicInterval, DyadicInterval] = {v: k for k, v in self._map.items()}

    @staticmethod
    def _check(universe: Universe,
               pairs: Iterable[Tuple[IntervalLike, IntervalLike]]) -> Dict[DyadicInterval, DyadicInterval]:
        mapping: Dict[DyadicInterval, DyadicInterval] = {}
        preimages: Dict[DyadicInterval, DyadicInterval] = {}
        for raw_source, raw_target in pairs:
            source = universe.check(as_interval(raw_source))
            target = universe.check(as_interval(raw_target))
            if source in mapping:
                raise RearrangementError(f"duplicate domain interval {source}")
            if target in preimages:
                raise RearrangementError(f"not injective at ({preimages[target]}, {source})")
            mapping[source] = target
            preimages[target] = source
        return mapping

    @classmethod
    def validate(cls, universe: Universe,
                 pairs: Iterable[Tuple[IntervalLike, IntervalLike]]) -> "Rearrangement":
        """
        Validate a candidate map.

        Args:
            universe: The ambient universe U_D.
            pairs: (source, target) pairs, checked in the given order.

        Returns:
            The validated rearrangement.

        Raises:
            RearrangementError: naming the first violation found.
        """
        return cls(universe, cls._check(universe, pairs))

    @classmethod
    def identity(cls, universe: Universe, domain: Optional[Iterable[DyadicInterval]] = None) -> "Rearrangement":
        source = universe.intervals() if domain is None else domain
        return cls(universe, {i: i for i in source})

    @property
    def domain(self) -> IntervalSet:
        return IntervalSet(self._map)

    @property
    def image(self) -> IntervalSet:
        return IntervalSet(self._inverse_map)

    @property
    def total(self) -> bool:
        return len(self._map) == self.universe.size

    def __call__(self, interval: DyadicInterval) -> DyadicInterval:
        try:
            return self._map[interval]
        except KeyError:
            raise DomainError(f"interval not in domain of τ: {interval}") from None

    def get(self, interval: DyadicInterval) -> Optional[DyadicInterval]:
        return self._map.get(interval)

    def preimage_of(self, interval: DyadicInterval) -> Optional[DyadicInterval]:
        return self._inverse_map.get(interval)

    def __contains__(self, interval: object) -> bool:
        return interval in self._map

    def items(self) -> Iterator[Tuple[DyadicInterval, DyadicInterval]]:
        """(source, target) pairs in canonical domain order."""
        return iter(self._map.items())

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Rearrangement):
            return NotImplemented
        return self.universe == other.universe and self._map == other._map

    def __hash__(self) -> int:
        return hash((self.universe, tuple(self._map.items())))

    def require_domain(self, intervals: Iterable[DyadicInterval]) -> None:
        for interval in intervals:
            if interval not in self._map:
                raise DomainError(f"interval not in domain of τ: {interval}")

    def map_collection(self, collection: Iterable[DyadicInterval]) -> IntervalSet:
        """tau(S); every member of S must lie in the domain."""
        return IntervalSet(self(i) for i in collection)

    def preimage(self, collection: Iterable[DyadicInterval]) -> IntervalSet:
        """tau^-1(S), ignoring members of S that are not images."""
        return IntervalSet(self._inverse_map[i] for i in collection if i in self._inverse_map)

    def preimage_within(self, top: DyadicInterval) -> IntervalSet:
        """The domain intervals whose image lies inside top."""
        return IntervalSet(s for s, t in self._map.items() if top.contains(t))

    def transport(self, x: HaarExpansion) -> HaarExpansion:
        """Apply the induced operator: (Tx)_tau(I) = x_I."""
        return HaarExpansion({self(i): c for i, c in x.items()})

    def inverse(self) -> "Rearrangement":
        return Rearrangement(self.universe, self._inverse_map)

    def compose(self, inner: "Rearrangement") -> "Rearrangement":
        """self after inner, on the intervals where both steps are defined."""
        return Rearrangement(self.universe, {
            s: self._map[t] for s, t in inner.items() if t in self._map
        })

    def restricted(self, domain: Iterable[DyadicInterval]) -> "Rearrangement":
        self.require_domain(domain)
        return Rearrangement(self.universe, {i: self._map[i] for i in domain})

    def truncated(self, depth: int) -> "Rearrangement":
        """The pairs with source and image both in U_depth, as a map on U_depth."""
        universe = Universe(depth)
        return Rearrangement(universe, {
            s: t for s, t in self._map.items() if s.depth <= depth and t.depth <= depth
        })

    def ratio(self, interval: DyadicInterval) -> Fraction:
        """|tau(I)| / |I|."""
        return interval.length_ratio(self(interval))

    def is_level_preserving(self) -> bool:
        return all(s.depth == t.depth for s, t in self._map.items())

    def __repr__(self) -> str:
        kind = "total" if self.total else "partial"
        return f"Rearrangement(depth={self.universe.max_depth}, {kind}, {len(self._map)} intervals)"
