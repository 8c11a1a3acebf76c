"""
Leaper graphs K_move(shape): adjacency, connectivity, two-colour parity and
the existence classification for the classical knight.
"""

import enum
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Sequence, Set, Tuple, Union

import numpy as np

from .board import KNIGHT, BoardShape, Cell, MoveSpec
from .errors import MoveError, NotBipartiteArgument, UnreliablePrediction, UnsupportedMove
from .settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)

ShapeLike = Union[BoardShape, Sequence[int]]


def as_shape(shape: ShapeLike) -> BoardShape:
    return shape if isinstance(shape, BoardShape) else BoardShape(tuple(shape))


# ==============================================================================
# ADJACENCY
# ==============================================================================

def neighbors(shape: BoardShape, move: MoveSpec, c: Cell) -> Set[Cell]:
    shape.check_cell(c)
    result = set()
    for off in move.offsets(shape.rank):
        v = tuple(a + b for a, b in zip(c, off))
        if shape.contains(v):
            result.add(v)
    return result


@lru_cache(maxsize=32)
def adjacency(shape: BoardShape, move: MoveSpec) -> Tuple[Tuple[int, ...], ...]:
    """Sorted neighbour lists over flat cell indices."""
    n = shape.cell_count
    offsets = move.offsets(shape.rank)
    if not offsets:
        return tuple(() for _ in range(n))
    dims = np.array(shape.dims)
    strides = np.array(shape.strides)
    coords = np.indices(shape.dims).reshape(shape.rank, -1).T
    src_parts, dst_parts = [], []
    for off in offsets:
        target = coords + np.array(off)
        ok = np.all((target >= 0) & (target < dims), axis=1)
        src_parts.append(np.nonzero(ok)[0])
        dst_parts.append(target[ok] @ strides)
    src = np.concatenate(src_parts)
    dst = np.concatenate(dst_parts)
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    bounds = np.searchsorted(src, np.arange(n + 1))
    dst_list = dst.tolist()
    return tuple(tuple(dst_list[bounds[i]:bounds[i + 1]]) for i in range(n))


def degree(shape: BoardShape, move: MoveSpec, c: Cell) -> int:
    return len(neighbors(shape, move, c))


# ==============================================================================
# CONNECTIVITY
# ==============================================================================

class DisjointSet:
    """Union-find with path compression and union by size."""

    def __init__(self, size: int):
        self.parents = list(range(size))
        self.sizes = [1] * size
        self.num_components = size

    def find(self, x: int) -> int:
        root = x
        while root != self.parents[root]:
            root = self.parents[root]
        while x != root:
            self.parents[x], x = root, self.parents[x]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of a and b; False if they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.sizes[ra] < self.sizes[rb]:
            ra, rb = rb, ra
        self.parents[rb] = ra
        self.sizes[ra] += self.sizes[rb]
        self.num_components -= 1
        return True


@dataclass(frozen=True)
class ConnectivityReport:
    connected: bool
    component_count: int
    witness: Optional[Tuple[Cell, Cell]] = None

    def to_dict(self) -> Dict:
        return {
            'connected': self.connected,
            'component_count': self.component_count,
            'witness': [list(c) for c in self.witness] if self.witness else None,
        }


def connectivity(shape: ShapeLike, move: MoveSpec = KNIGHT) -> ConnectivityReport:
    """Exact connectivity of the leaper graph by union-find over all edges."""
    shape = as_shape(shape)
    adj = adjacency(shape, move)
    dsu = DisjointSet(shape.cell_count)
    for u, nbrs in enumerate(adj):
        for v in nbrs:
            if u < v:
                dsu.union(u, v)
    count = dsu.num_components
    if count == 1:
        return ConnectivityReport(True, 1)
    root = dsu.find(0)
    other = next(i for i in range(shape.cell_count) if dsu.find(i) != root)
    logger.debug('%s under (%s): %d components', shape.label, move.label, count)
    return ConnectivityReport(False, count, (shape.cell_at(0), shape.cell_at(other)))


def knuth_connectivity_predicted(a: int, b: int, n: int, m: int) -> bool:
    """Connectivity of the (a,b)-leaper on n x m from the closed-form criterion."""
    a, b = sorted((a, b))
    n, m = max(n, m), min(n, m)
    return math.gcd(a + b, b - a) == 1 and n >= 2 * b and m >= a + b


def leaper_connectivity_predicted(move: MoveSpec, shape: ShapeLike,
                                  threshold_factor: Optional[int] = None) -> bool:
    """
    Formula verdict for an s-tuple leaper on a large board.

    Args:
        move: the leaper
        shape: board with rank >= len(move.steps)
        threshold_factor: every side must be at least factor * max(step)

    Returns:
        True when the step sum is odd, the gcd is 1 and, for rank == s, some step is even.

    Raises:
        UnreliablePrediction: a side is below the threshold
    """
    shape = as_shape(shape)
    steps = move.steps
    if shape.rank < len(steps):
        raise MoveError(f'{len(steps)} steps need at least {len(steps)} axes, board {shape.label} has {shape.rank}')
    factor = threshold_factor or DEFAULT_SETTINGS['leaper_threshold_factor']
    threshold = factor * max(steps)
    if min(shape.dims) < threshold:
        raise UnreliablePrediction(
            f'{shape.label} is below the size threshold {threshold} for ({move.label})',
            {'threshold': threshold},
        )
    odd_sum = sum(steps) % 2 == 1
    coprime = math.gcd(*steps) == 1
    spare_axis = shape.rank > len(steps) or any(a % 2 == 0 for a in steps)
    return odd_sum and coprime and spare_axis


def color_imbalance(shape: ShapeLike, move: MoveSpec = KNIGHT) -> int:
    """|even-sum cells - odd-sum cells|; nonzero rules out a closed tour."""
    shape = as_shape(shape)
    if sum(move.steps) % 2 == 0:
        raise NotBipartiteArgument(f'step sum of ({move.label}) is even; every move keeps the colour')
    return math.prod(d % 2 for d in shape.dims)


# ==============================================================================
# CLASSIFICATION
# ==============================================================================

class Verdict(enum.Enum):
    TOURABLE = 'Tourable'
    NOT_TOURABLE = 'NotTourable'


class Reason(enum.Enum):
    NONE = 'None'
    PARITY_ALL_ODD = 'ParityAllOdd'
    DISCONNECTED = 'Disconnected'
    SMALL_CASE_EXCLUSION = 'SmallCaseExclusion'
    DIMENSION_TOO_SMALL = 'DimensionTooSmall'


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    reason: Reason
    shape: BoardShape

    @property
    def tourable(self) -> bool:
        return self.verdict is Verdict.TOURABLE

    @property
    def shape_label(self) -> str:
        return self.shape.label

    def to_dict(self) -> Dict:
        return {
            'shape': list(self.shape.dims),
            'verdict': self.verdict.value,
            'reason': self.reason.value,
        }


SMALL_3_WIDE_EXCLUSIONS = {(4, 3), (6, 3), (8, 3)}


def _not(shape: BoardShape, reason: Reason) -> Classification:
    return Classification(Verdict.NOT_TOURABLE, reason, shape)


def classify(shape: ShapeLike, move: MoveSpec = KNIGHT) -> Classification:
    """
    Exact closed-tour existence for the classical knight on any board.

    Size-1 axes carry no moves and are ignored; the remaining sides are
    sorted descending before the existence conditions are applied.
    """
    shape = as_shape(shape)
    if not move.is_knight:
        raise UnsupportedMove(f'existence is only classified for the (1,2) knight, not ({move.label})')

    dims = sorted((d for d in shape.dims if d > 1), reverse=True)
    if len(dims) < 2:
        return _not(shape, Reason.DIMENSION_TOO_SMALL)
    if all(d % 2 == 1 for d in dims):
        return _not(shape, Reason.PARITY_ALL_ODD)

    if len(dims) == 2:
        n, m = dims
        if m == 2:
            return _not(shape, Reason.DISCONNECTED)
        if m == 4 or (n, m) in SMALL_3_WIDE_EXCLUSIONS:
            return _not(shape, Reason.SMALL_CASE_EXCLUSION)
        return Classification(Verdict.TOURABLE, Reason.NONE, shape)

    if dims[0] < 4 or dims[1] < 3:
        # These boards are small (every side but one is at most 3)
        report = connectivity(BoardShape(tuple(dims)), KNIGHT)
        reason = Reason.SMALL_CASE_EXCLUSION if report.connected else Reason.DISCONNECTED
        return _not(shape, reason)
    return Classification(Verdict.TOURABLE, Reason.NONE, shape)
