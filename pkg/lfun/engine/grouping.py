# Segment Grouping
"""
Sorting reduced segment starts into groups whose members lie in the U_δ
neighbourhood of the group representative.

Algorithm:
1. Reduce every base point into the fundamental domain
2. Quantize its Iwasawa coordinates at cell side δ
3. Search the cell and its 26 neighbours for a representative v with
   v⁻¹x ∈ U_δ; join the first one found (lowest group index)
4. Otherwise open a new group with x as representative
"""

import itertools
import logging
import math
from collections import defaultdict
from typing import Dict, List, NamedTuple, Sequence, Tuple

from lfun.engine.segments import Segment
from lfun.geometry import Mat2, in_neighborhood, iwasawa_decompose, reduce_to_fundamental_domain


logger = logging.getLogger(__name__)

_NEIGHBOURS = tuple(itertools.product((-1, 0, 1), repeat=3))

CellKey = Tuple[int, int, int]


class GroupMember(NamedTuple):
    segment: Segment
    reduced: Mat2


class SegmentGroup(NamedTuple):
    """
    Attributes:
        index: Group number in creation order
        representative: Reduced point v
        members: Segments with v⁻¹x ∈ U_δ, the representative's own first
    """
    index: int
    representative: Mat2
    members: List[GroupMember]


def _cell(point: Mat2, delta: float) -> CellKey:
    return tuple(math.floor(c / delta) for c in iwasawa_decompose(point))


def group_segments(segments: Sequence[Segment], delta: float) -> List[SegmentGroup]:
    """
    Group segments by their reduced starting points.

    Args:
        segments: Segments in path order
        delta: Neighbourhood radius δ

    Returns:
        Groups in creation order; members keep path order
    """
    if not delta > 0:
        raise ValueError(f"grouping radius must be positive, got {delta}")
    groups: List[SegmentGroup] = []
    cells: Dict[CellKey, List[int]] = defaultdict(list)
    inverses: List[Mat2] = []

    for segment in segments:
        reduced, _ = reduce_to_fundamental_domain(segment.base)
        key = _cell(reduced, delta)
        candidates = sorted(
            {g for offset in _NEIGHBOURS for g in cells.get(tuple(k + o for k, o in zip(key, offset)), ())}
        )
        member = GroupMember(segment, reduced)
        for g in candidates:
            if in_neighborhood(inverses[g] @ reduced, delta):
                groups[g].members.append(member)
                break
        else:
            index = len(groups)
            groups.append(SegmentGroup(index, reduced, [member]))
            inverses.append(reduced.inverse())
            cells[key].append(index)

    logger.info("grouped %d segments into %d groups (δ = %.4g)", len(segments), len(groups), delta)
    return groups
