"""
Extension of partial rearrangements to total maps on a universe.
"""
import logging
from typing import Dict, List, Mapping

from haarbmo.exceptions import RearrangementError
from haarbmo.models.interval import DyadicInterval, Universe
from haarbmo.models.rearrangement import Rearrangement

logger = logging.getLogger(__name__)


def extend_to_total(universe: Universe, partial: Mapping[DyadicInterval, DyadicInterval],
                    same_length_only: bool = False) -> Rearrangement:
    """
    Extend an injective partial map to a bijection of the universe.

    Free intervals are assigned in three passes, each in canonical order:
    first the identity wherever the interval is still a free target, then
    the first free target of the same length, and finally the remaining
    sources take the remaining targets, deepest targets first.

    Args:
        universe: The universe U_D.
        partial: The injective map to extend.
        same_length_only: Refuse the last pass, so the extension keeps every
            length.

    Raises:
        RearrangementError: If the partial map is not injective, or if a
            same-length extension does not exist.
    """
    base = Rearrangement.validate(universe, partial.items())
    mapping: Dict[DyadicInterval, DyadicInterval] = dict(base.items())
    taken = set(mapping.values())
    sources = [i for i in universe.intervals() if i not in mapping]
    targets = {i for i in universe.intervals() if i not in taken}

    leftover: List[DyadicInterval] = []
    for source in sources:
        if source in targets:
            mapping[source] = source
            targets.discard(source)
        else:
            leftover.append(source)

    by_depth: Dict[int, List[DyadicInterval]] = {}
    for target in sorted(targets):
        by_depth.setdefault(target.depth, []).append(target)
    unmatched: List[DyadicInterval] = []
    for source in leftover:
        free = by_depth.get(source.depth)
        if free:
            mapping[source] = free.pop(0)
        else:
            unmatched.append(source)

    if unmatched:
        if same_length_only:
            raise RearrangementError(
                f"universe too small to extend injectively: no free interval of length 2^-{unmatched[0].depth} "
                f"for {unmatched[0]}")
        remaining = sorted((t for free in by_depth.values() for t in free), key=lambda t: (-t.depth, t.index))
        for source, target in zip(unmatched, remaining):
            mapping[source] = target
        logger.debug("extended %d intervals across lengths", len(unmatched))

    return Rearrangement(universe, mapping)
