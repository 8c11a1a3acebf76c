"""
Two-dimensional constructions.

A seeded n x m tour contains the corner edges ((0,m-3),(1,m-1)) and
((n-3,0),(n-1,1)). Gluing a seeded 4 x m extender (an open path from (3,m-1)
to (3,m-2)) above a seeded tour gives a seeded (n+4) x m tour, so one base
case per residue pair (n mod 4, m mod 4) covers every tourable board.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .base_cases import (DOUBLING_BASES, GROWTH_BRIDGE, SEEDED_BASES, BaseCaseStore,
                         default_store, doubling_endpoints, extender_endpoints, seed_edges)
from .board import BoardShape, OpenPath, Tour, edge_key, legal_move, open_at, shift, split_path, transform
from .errors import ConstructionError, NotTourableError, PreconditionError, UnsupportedSize
from .graph import classify

logger = logging.getLogger(__name__)


def transpose(t: Tour) -> Tour:
    return transform(t, (1, 0))


def is_seeded(t: Tour) -> bool:
    if t.shape.rank != 2:
        return False
    n, m = t.shape.dims
    present = t.edge_set()
    return all(edge_key(u, v) in present for u, v in seed_edges(n, m))


# ==============================================================================
# EXTENDERS
# ==============================================================================

@dataclass(frozen=True)
class Extender:
    """Open 4 x m path from (3,m-1) to (3,m-2)."""
    path: OpenPath
    seeded: bool = True

    @property
    def width(self) -> int:
        return self.path.shape.dims[1]


_extenders: Dict[Tuple[str, int], Extender] = {}

EXTENDER_BASE_BY_RESIDUE = {0: 3, 2: 5, 1: 7}


def grow_extender(path: OpenPath, growth: OpenPath) -> OpenPath:
    """Append the 4 x 3 growth block to the right of a 4 x w extender."""
    w = path.shape.dims[1]
    cells = growth.cells
    bridge = set(GROWTH_BRIDGE)
    cut = next(i for i in range(len(cells) - 1) if {cells[i], cells[i + 1]} == bridge)
    head = [(r, c + w) for r, c in cells[:cut + 1]]
    tail = [(r, c + w) for r, c in cells[cut + 1:]]
    shape = BoardShape((4, w + 3))
    if legal_move(shape, path.move, head[-1], path.start):
        middle = list(path.cells)
    else:
        middle = list(reversed(path.cells))
    if not (legal_move(shape, path.move, head[-1], middle[0]) and legal_move(shape, path.move, middle[-1], tail[0])):
        raise ConstructionError(f'growth block does not attach to the 4x{w} extender')
    return OpenPath(shape, path.move, tuple(head + middle + tail))


def make_extender(m: int, store: Optional[BaseCaseStore] = None) -> Extender:
    """Seeded 4 x m extender: a cached base of width 3, 5 or 7 grown three columns at a time."""
    if m < 3 or m == 4:
        raise UnsupportedSize(f'no 4x{m} extender exists', {'width': m})
    store = store or default_store()
    key = (store.cache_dir, m)
    if key in _extenders:
        return _extenders[key]
    width = EXTENDER_BASE_BY_RESIDUE[m % 3]
    path = store.get(f'base_4x{width}_extender').tour
    growth = store.get('base_4x3_growth').tour
    while width < m:
        path = grow_extender(path, growth)
        width += 3
    if (path.start, path.end) != extender_endpoints(m):
        raise ConstructionError(f'4x{m} extender ends at {path.start}, {path.end}')
    ext = Extender(path)
    _extenders[key] = ext
    return ext


# ==============================================================================
# SEEDED GROWTH
# ==============================================================================

def extend_seeded(t: Tour, axis: int = 0, store: Optional[BaseCaseStore] = None) -> Tour:
    """
    Grow a seeded tour (or seeded open path) by four along `axis`.

    The extender goes into rows 0..3, the input moves down four rows, the
    shifted seed edge ((4,m-3),(5,m-1)) is dropped and ((3,m-1),(4,m-3)),
    ((5,m-1),(3,m-2)) join the two pieces. Open paths keep their endpoints.
    """
    if axis == 1:
        return transpose(extend_seeded(transpose(t), 0, store))
    if axis != 0:
        raise PreconditionError(f'2D boards have axes 0 and 1, got {axis}')
    if not is_seeded(t):
        raise PreconditionError(f'{t.shape.label} input is not seeded')
    n, m = t.shape.dims
    ext = make_extender(m, store).path
    moved = shift(t, (4, 0), BoardShape((n + 4, m)))
    u, v = (4, m - 3), (5, m - 1)
    if moved.closed:
        cells = open_at(moved.cells, u, v) + list(reversed(ext.cells))
    else:
        head, tail = split_path(moved.cells, u, v)
        middle = list(ext.cells) if head[-1] == u else list(reversed(ext.cells))
        cells = head + middle + tail
    return moved.with_cells(cells)


def _pick_base(n: int, m: int) -> Optional[Tuple[int, int, bool]]:
    options = [(a, b, False) for a, b in SEEDED_BASES] + [(b, a, True) for a, b in SEEDED_BASES]
    for a, b, flipped in options:
        if a % 4 == n % 4 and b % 4 == m % 4 and a <= n and b <= m:
            return a, b, flipped
    return None


def base_seeded(a: int, b: int, store: Optional[BaseCaseStore] = None) -> Tour:
    store = store or default_store()
    if (a, b) in SEEDED_BASES:
        return store.get(f'base_{a}x{b}_seeded').tour
    return transpose(store.get(f'base_{b}x{a}_seeded').tour)


def construct_2d(n: int, m: int, store: Optional[BaseCaseStore] = None) -> Tour:
    """Seeded n x m tour from the matching residue base, grown by extenders."""
    verdict = classify((n, m))
    if not verdict.tourable:
        raise NotTourableError(verdict)
    picked = _pick_base(n, m)
    if picked is None:
        raise ConstructionError(f'no seeded base fits {n}x{m}')
    a, b, _ = picked
    t = base_seeded(a, b, store)
    while t.shape.dims[0] < n:
        t = extend_seeded(t, 0, store)
    while t.shape.dims[1] < m:
        t = extend_seeded(t, 1, store)
    logger.debug('%dx%d grown from the %dx%d base', n, m, a, b)
    return t


# ==============================================================================
# OPEN PATHS FOR DOUBLING
# ==============================================================================

def construct_open_for_doubling(n: int, m: int, store: Optional[BaseCaseStore] = None) -> OpenPath:
    """Seeded open n x m path from (n-1,m-1) to (n-1,m-3), for odd n, m >= 5."""
    if n % 2 == 0 or m % 2 == 0 or n < 5 or m < 5:
        raise PreconditionError(f'doubling paths need odd sides >= 5, got {n}x{m}')
    store = store or default_store()
    a = 5 if n % 4 == 1 else 7
    b = 5 if m % 4 == 1 else 7
    if (a, b) not in DOUBLING_BASES:
        raise ConstructionError(f'no {a}x{b} doubling base')
    path = store.get(f'base_{a}x{b}_doubling').tour
    while path.shape.dims[0] < n:
        path = extend_seeded(path, 0, store)
    while path.shape.dims[1] < m:
        path = extend_seeded(path, 1, store)
    if (path.start, path.end) != doubling_endpoints(n, m):
        raise ConstructionError(f'{n}x{m} doubling path ends at {path.start}, {path.end}')
    return path


def seeded_sizes(limit: int) -> List[Tuple[int, int]]:
    """Every tourable n x m with both sides <= limit."""
    return [(n, m) for n in range(1, limit + 1) for m in range(1, limit + 1) if classify((n, m)).tourable]
