"""
Board geometry: shapes, cells, leaper moves, tours and rigid transforms.

Cells are plain coordinate tuples. A flat row-major index (last axis fastest)
is derived from them wherever a search needs bitset-style membership.
"""

import itertools
import json
import math
import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import IllegalSplice, MoveError, NotASingleCycle, ShapeError

Cell = Tuple[int, ...]
Edge = Tuple[Cell, Cell]


# ==============================================================================
# SHAPES AND MOVES
# ==============================================================================

@dataclass(frozen=True)
class BoardShape:
    """Side lengths n1 x n2 x ... x nr of a board."""
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(self.dims)
        if not dims:
            raise ShapeError('a board needs at least one axis')
        for d in dims:
            if isinstance(d, bool) or not isinstance(d, int) or d < 1:
                raise ShapeError(f'side lengths must be positive integers, got {d!r}')
        if math.prod(dims) > sys.maxsize:
            raise ShapeError(f'board {dims} has more cells than can be indexed')
        object.__setattr__(self, 'dims', dims)

    @classmethod
    def parse(cls, text: str) -> 'BoardShape':
        """Parse 'N1xN2x...xNr'; the error names the offending token."""
        tokens = text.strip().lower().split('x')
        dims = []
        for token in tokens:
            if not token.isdigit() or int(token) < 1:
                raise ShapeError(f'bad side length {token!r} in shape {text!r}', {'token': token})
            dims.append(int(token))
        return cls(tuple(dims))

    @property
    def rank(self) -> int:
        return len(self.dims)

    @property
    def cell_count(self) -> int:
        return math.prod(self.dims)

    @property
    def label(self) -> str:
        return 'x'.join(str(d) for d in self.dims)

    @property
    def strides(self) -> Tuple[int, ...]:
        strides = [1] * self.rank
        for j in range(self.rank - 2, -1, -1):
            strides[j] = strides[j + 1] * self.dims[j + 1]
        return tuple(strides)

    def contains(self, cell: Sequence[int]) -> bool:
        return len(cell) == self.rank and all(0 <= c < d for c, d in zip(cell, self.dims))

    def check_cell(self, cell: Sequence[int]) -> Cell:
        if len(cell) != self.rank:
            raise ShapeError(f'cell {tuple(cell)} has {len(cell)} coordinates, board {self.label} has {self.rank}')
        if not self.contains(cell):
            raise ShapeError(f'cell {tuple(cell)} is outside board {self.label}')
        return tuple(cell)

    def index(self, cell: Sequence[int]) -> int:
        return sum(c * s for c, s in zip(cell, self.strides))

    def cell_at(self, index: int) -> Cell:
        coords = []
        for s in self.strides:
            q, index = divmod(index, s)
            coords.append(q)
        return tuple(coords)

    def cells(self) -> Iterator[Cell]:
        return itertools.product(*(range(d) for d in self.dims))

    def corners(self) -> List[Cell]:
        return list(itertools.product(*((0, d - 1) if d > 1 else (0,) for d in self.dims)))

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class MoveSpec:
    """A leaper moving steps[i] along a distinct axis for every i."""
    steps: Tuple[int, ...]

    def __post_init__(self):
        steps = tuple(self.steps)
        if len(steps) < 2:
            raise MoveError(f'a leaper needs at least two steps, got {steps}')
        for a in steps:
            if isinstance(a, bool) or not isinstance(a, int) or a < 1:
                raise MoveError(f'steps must be positive integers, got {a!r}')
        object.__setattr__(self, 'steps', tuple(sorted(steps)))

    @classmethod
    def parse(cls, text: str) -> 'MoveSpec':
        tokens = [t.strip() for t in text.split(',')]
        for token in tokens:
            if not token.isdigit():
                raise MoveError(f'bad step {token!r} in move {text!r}', {'token': token})
        return cls(tuple(int(t) for t in tokens))

    @property
    def label(self) -> str:
        return ','.join(str(a) for a in self.steps)

    @property
    def is_knight(self) -> bool:
        return self.steps == (1, 2)

    def offsets(self, rank: int) -> Tuple[Cell, ...]:
        """Every displacement vector of this leaper in `rank` dimensions."""
        return _offsets(self.steps, rank)

    def __str__(self):
        return self.label


KNIGHT = MoveSpec((1, 2))


@lru_cache(maxsize=64)
def _offsets(steps: Tuple[int, ...], rank: int) -> Tuple[Cell, ...]:
    found = set()
    for axes in itertools.permutations(range(rank), len(steps)):
        for signs in itertools.product((1, -1), repeat=len(steps)):
            vec = [0] * rank
            for axis, step, sign in zip(axes, steps, signs):
                vec[axis] = step * sign
            found.add(tuple(vec))
    return tuple(sorted(found))


def legal_move(shape: BoardShape, move: MoveSpec, u: Sequence[int], v: Sequence[int]) -> bool:
    """True iff u -> v displaces exactly the move's steps along distinct axes."""
    if len(u) != shape.rank or len(v) != shape.rank:
        raise ShapeError(f'cells {tuple(u)}, {tuple(v)} do not match board {shape.label}')
    diffs = sorted(abs(a - b) for a, b in zip(u, v) if a != b)
    return tuple(diffs) == move.steps


def edge_key(u: Cell, v: Cell) -> Edge:
    return (u, v) if u <= v else (v, u)


# ==============================================================================
# TOURS
# ==============================================================================

@dataclass(frozen=True)
class Tour:
    """Cells in visit order; the closing edge back to cells[0] is implicit."""
    shape: BoardShape
    move: MoveSpec
    cells: Tuple[Cell, ...]
    closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'cells', tuple(tuple(c) for c in self.cells))

    def __len__(self):
        return len(self.cells)

    @property
    def start(self) -> Cell:
        return self.cells[0]

    @property
    def end(self) -> Cell:
        return self.cells[-1]

    def edges(self) -> List[Edge]:
        """Unordered edge keys in visit order."""
        cells = self.cells
        result = [edge_key(cells[i], cells[i + 1]) for i in range(len(cells) - 1)]
        if self.closed and len(cells) > 2:
            result.append(edge_key(cells[-1], cells[0]))
        return result

    def edge_set(self) -> frozenset:
        return frozenset(self.edges())

    def with_cells(self, cells: Iterable[Cell], shape: Optional[BoardShape] = None) -> 'Tour':
        return type(self)(shape or self.shape, self.move, tuple(cells), self.closed)


@dataclass(frozen=True)
class OpenPath(Tour):
    """A Hamiltonian path; start and end are distinguished."""
    closed: bool = False


def make_tour(shape: BoardShape, move: MoveSpec, cells: Iterable[Cell], closed: bool = True) -> Tour:
    cls = Tour if closed else OpenPath
    return cls(shape, move, tuple(cells), closed)


def edge_set(t: Tour) -> frozenset:
    return t.edge_set()


def edges(t: Tour) -> List[Edge]:
    return t.edges()


# ==============================================================================
# RIGID TRANSFORMS
# ==============================================================================

def _check_perm(perm: Sequence[int], rank: int) -> Tuple[int, ...]:
    perm = tuple(perm)
    if sorted(perm) != list(range(rank)):
        raise ShapeError(f'{perm} is not a permutation of {rank} axes')
    return perm


def transform_shape(shape: BoardShape, perm: Sequence[int]) -> BoardShape:
    perm = _check_perm(perm, shape.rank)
    return BoardShape(tuple(shape.dims[p] for p in perm))


def transform_cell(shape: BoardShape, cell: Cell, perm: Sequence[int],
                   reflect: Optional[Sequence[bool]] = None) -> Cell:
    """Output axis i takes input axis perm[i]; reflect applies to output axes."""
    out = [cell[p] for p in perm]
    if reflect:
        for i, flip in enumerate(reflect):
            if flip:
                out[i] = shape.dims[perm[i]] - 1 - out[i]
    return tuple(out)


def transform(t: Tour, perm: Sequence[int], reflect: Optional[Sequence[bool]] = None) -> Tour:
    perm = _check_perm(perm, t.shape.rank)
    if reflect is not None and len(reflect) != t.shape.rank:
        raise ShapeError(f'reflection mask {tuple(reflect)} does not match rank {t.shape.rank}')
    new_shape = transform_shape(t.shape, perm)
    return t.with_cells((transform_cell(t.shape, c, perm, reflect) for c in t.cells), new_shape)


def inverse_perm(perm: Sequence[int]) -> Tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def shift(t: Tour, offset: Sequence[int], new_shape: BoardShape) -> Tour:
    """Translate every cell by offset into new_shape."""
    if len(offset) != t.shape.rank or new_shape.rank != t.shape.rank:
        raise ShapeError(f'offset {tuple(offset)} does not match board {t.shape.label}')
    cells = [tuple(c + o for c, o in zip(cell, offset)) for cell in t.cells]
    for cell in cells:
        if not new_shape.contains(cell):
            raise ShapeError(f'shifted cell {cell} falls outside {new_shape.label}')
    return t.with_cells(cells, new_shape)


def shift_cell(cell: Cell, offset: Sequence[int]) -> Cell:
    return tuple(c + o for c, o in zip(cell, offset))


# ==============================================================================
# CYCLE SURGERY
# ==============================================================================

def open_at(cells: Sequence[Cell], u: Cell, v: Cell) -> List[Cell]:
    """Drop the cycle edge u-v and return the path from u to v."""
    n = len(cells)
    i = cells.index(u)
    if cells[(i + 1) % n] == v:
        return [cells[(i - k) % n] for k in range(n)]
    if cells[(i - 1) % n] == v:
        return [cells[(i + k) % n] for k in range(n)]
    raise IllegalSplice(f'{u}-{v} is not an edge of the cycle')


def split_path(cells: Sequence[Cell], u: Cell, v: Cell) -> Tuple[List[Cell], List[Cell]]:
    """Remove the path edge u-v; return (prefix, suffix) in path order."""
    i = list(cells).index(u)
    if i + 1 < len(cells) and cells[i + 1] == v:
        return list(cells[:i + 1]), list(cells[i + 1:])
    if i > 0 and cells[i - 1] == v:
        return list(cells[:i]), list(cells[i:])
    raise IllegalSplice(f'{u}-{v} is not an edge of the path')


def assemble_cycle(shape: BoardShape, move: MoveSpec, links: Iterable[Edge]) -> Tour:
    """
    Build a tour from an unordered edge list.

    The walk starts at the smallest cell and heads toward its smaller
    neighbour, so equal edge sets always give identical tours.
    """
    adj: Dict[Cell, List[Cell]] = {}
    for u, v in links:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if len(adj) != shape.cell_count or any(len(nb) != 2 for nb in adj.values()):
        raise NotASingleCycle(f'edge set on {shape.label} is not 2-regular over every cell')
    start = min(adj)
    prev, cur = start, min(adj[start])
    order = [start]
    while cur != start:
        order.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
        if len(order) > shape.cell_count:
            break
    if len(order) != shape.cell_count:
        raise NotASingleCycle(f'splice on {shape.label} closed a cycle of {len(order)} cells',
                              {'cycle_length': len(order), 'cells': shape.cell_count})
    return Tour(shape, move, tuple(order), True)


# ==============================================================================
# CANONICAL JSON
# ==============================================================================

def tour_to_dict(t: Tour, extra: Optional[Dict] = None) -> Dict:
    payload = {
        'shape': list(t.shape.dims),
        'move': list(t.move.steps),
        'closed': bool(t.closed),
        'cells': [list(c) for c in t.cells],
    }
    if extra:
        payload.update(extra)
    return payload


def tour_to_json(t: Tour, extra: Optional[Dict] = None) -> str:
    return json.dumps(tour_to_dict(t, extra), separators=(',', ':'))


def tour_from_dict(payload: Dict) -> Tour:
    try:
        shape = BoardShape(tuple(payload['shape']))
        move = MoveSpec(tuple(payload.get('move', (1, 2))))
        cells = tuple(tuple(int(x) for x in c) for c in payload['cells'])
        closed = bool(payload.get('closed', True))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, (ShapeError, MoveError)):
            raise
        raise ShapeError(f'malformed tour document: {e}')
    return make_tour(shape, move, cells, closed)


def tour_from_json(text: str) -> Tour:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ShapeError(f'tour file is not JSON: {e}')
    return tour_from_dict(payload)


def save_tour(t: Tour, path: str, extra: Optional[Dict] = None) -> None:
    with open(path, 'w') as fh:
        fh.write(tour_to_json(t, extra))
        fh.write('\n')


def load_document(path: str) -> Tuple[Tour, Dict]:
    with open(path) as fh:
        payload = json.load(fh)
    return tour_from_dict(payload), payload


def load_tour(path: str) -> Tour:
    return load_document(path)[0]
