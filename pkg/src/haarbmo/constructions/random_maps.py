"""
Seeded generators of rearrangements, collections and expansions.
"""
import random
from fractions import Fraction
from typing import Dict, Optional

from haarbmo.bmo.carleson import CarlesonAnalyzer
from haarbmo.exceptions import ParameterError
from haarbmo.models.expansion import HaarExpansion
from haarbmo.models.interval import DyadicInterval, IntervalSet, Universe
from haarbmo.models.rearrangement import Rearrangement

RANDOM_DEPTH_CAP = 16


class RandomGenerator:
    """All draws come from one random.Random, so a seed fixes every output."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.rng = random.Random(seed)

    @staticmethod
    def _universe(depth: int) -> Universe:
        if not 0 <= depth <= RANDOM_DEPTH_CAP:
            raise ParameterError(f"random generation supports depth 0..{RANDOM_DEPTH_CAP}, got {depth}")
        return Universe(depth)

    def rearrangement(self, depth: int, level_preserving: bool = False) -> Rearrangement:
        """A uniform bijection of U_D, or a uniform permutation of every level."""
        universe = self._universe(depth)
        if level_preserving:
            mapping = {}
            for d in range(depth + 1):
                level = list(universe.level(d))
                shuffled = list(level)
                self.rng.shuffle(shuffled)
                mapping.update(zip(level, shuffled))
            return Rearrangement(universe, mapping)
        intervals = list(universe.intervals())
        shuffled = list(intervals)
        self.rng.shuffle(shuffled)
        return Rearrangement(universe, dict(zip(intervals, shuffled)))

    def collection(self, depth: int, density: float = 0.5) -> IntervalSet:
        """Each interval of U_D is kept independently with the given probability."""
        universe = self._universe(depth)
        return IntervalSet(i for i in universe.intervals() if self.rng.random() < density)

    def expansion(self, depth: int, density: float = 0.5, denominator_exp: int = 3) -> HaarExpansion:
        """Random dyadic coefficients in [-1, 1] on a random support."""
        unit = 1 << denominator_exp
        return HaarExpansion({
            interval: Fraction(self.rng.randint(-unit, unit), unit)
            for interval in self.collection(depth, density)
        })

    def grid_squares(self, depth: int, grid: int, density: float = 0.5) -> Dict[DyadicInterval, Fraction]:
        """
        Random squared coefficients k_I / K whose packing maximum stays at most 1.

        Intervals are visited in random order and dropped when they would
        push the squared norm above 1.
        """
        universe = self._universe(depth)
        squares: Dict[DyadicInterval, Fraction] = {}
        intervals = list(universe.intervals())
        self.rng.shuffle(intervals)
        for interval in intervals:
            if self.rng.random() >= density:
                continue
            squares[interval] = Fraction(self.rng.randint(1, grid), grid)
            if CarlesonAnalyzer.packing_maximum(squares).constant > 1:
                del squares[interval]
        return squares


def random_rearrangement(depth: int, seed: int = 0, level_preserving: bool = False) -> Rearrangement:
    return RandomGenerator(seed).rearrangement(depth, level_preserving)


def random_collection(depth: int, seed: int = 0, density: Optional[float] = None) -> IntervalSet:
    return RandomGenerator(seed).collection(depth, 0.5 if density is None else density)
