"""
Layered text rendering.

One grid per layer (axes 0 and 1 as rows and columns), each cell holding its
1-based visit number. Layers are listed topmost first, i.e. from the highest
index of the remaining axes down to zero.
"""

import itertools
from typing import List, Tuple

import numpy as np

from .board import BoardShape, MoveSpec, Tour, make_tour
from .errors import PreconditionError, ShapeError


def visit_grid(t: Tour) -> np.ndarray:
    """Array over the board holding each cell's visit number (0 where unvisited)."""
    grid = np.zeros(t.shape.dims, dtype=np.int64)
    for number, cell in enumerate(t.cells, start=1):
        grid[cell] = number
    return grid


def layer_indices(shape: BoardShape) -> List[Tuple[int, ...]]:
    upper = shape.dims[2:]
    return sorted(itertools.product(*(range(d) for d in upper)), reverse=True)


def render(t: Tour) -> str:
    if t.shape.rank < 2:
        raise PreconditionError(f'rendering needs at least two axes, got {t.shape.label}')
    grid = visit_grid(t)
    width = len(str(len(t.cells)))
    lines = [f"shape {t.shape.label} move {t.move.label} {'closed' if t.closed else 'open'}"]
    for layer in layer_indices(t.shape):
        lines.append('')
        lines.append(('layer ' + ','.join(map(str, layer))).rstrip())
        for row in grid[(slice(None), slice(None)) + layer]:
            lines.append(' '.join(str(v).rjust(width) for v in row))
    return '\n'.join(lines) + '\n'


def parse_render(text: str) -> Tour:
    """Read rendered text back into the tour it came from."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ShapeError('empty render')
    header = lines[0].split()
    if len(header) != 5 or header[0] != 'shape' or header[2] != 'move':
        raise ShapeError(f'bad render header: {lines[0]!r}')
    shape = BoardShape.parse(header[1])
    move = MoveSpec.parse(header[3])
    closed = header[4] == 'closed'

    grid = np.zeros(shape.dims, dtype=np.int64)
    layer, row = None, 0
    for line in lines[1:]:
        if line.startswith('layer'):
            rest = line[len('layer'):].strip()
            layer = tuple(int(x) for x in rest.split(',')) if rest else ()
            row = 0
            continue
        if layer is None:
            raise ShapeError('grid row before any layer line')
        values = [int(x) for x in line.split()]
        if len(values) != shape.dims[1] or row >= shape.dims[0]:
            raise ShapeError(f'grid row {line!r} does not fit {shape.label}')
        grid[(row, slice(None)) + layer] = values
        row += 1

    flat = grid.reshape(-1)
    if sorted(flat.tolist()) != list(range(1, shape.cell_count + 1)):
        raise ShapeError('visit numbers are not 1..N')
    order = np.argsort(flat, kind='stable')
    cells = [shape.cell_at(int(i)) for i in order]
    return make_tour(shape, move, cells, closed)
