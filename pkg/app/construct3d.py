"""
Bi-sited tours on every tourable p x q x r board.

Boards with a tourable face are a 2D tour stacked along the third side.
The rest fall into a handful of families built from small solver-made
prisms: open-path doubling for odd p x q with two or four layers, and chains
of prisms joined side by side through lateral splices.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from .analysis import CertifiedTour, aligned_layer_sites, bisited_certificate, is_layer_pair
from .base_cases import BaseCaseStore, default_store, doubling_endpoints
from .board import (BoardShape, Edge, OpenPath, Tour, edge_key, legal_move, open_at, shift,
                    transform, transform_cell)
from .construct2d import construct_2d, construct_open_for_doubling
from .errors import (ConstructionError, IllegalSplice, NotBisited,
                     NotTourableError, PreconditionError, ShapeError)
from .graph import classify

logger = logging.getLogger(__name__)


# ==============================================================================
# ORIENTATION
# ==============================================================================

def _permute(ct: CertifiedTour, perm: Sequence[int]) -> CertifiedTour:
    shape = ct.tour.shape
    return CertifiedTour(transform(ct.tour, perm),
                         tuple(s.mapped(lambda c: transform_cell(shape, c, perm)) for s in ct.sites))


def orient(ct: CertifiedTour, target: Sequence[int]) -> CertifiedTour:
    """Permute axes so the tour's shape reads `target`."""
    dims = ct.tour.shape.dims
    if sorted(dims) != sorted(target):
        raise ShapeError(f'cannot orient {ct.tour.shape.label} as {"x".join(map(str, target))}')
    free = list(range(len(dims)))
    perm = []
    for size in target:
        j = next(j for j in free if dims[j] == size)
        free.remove(j)
        perm.append(j)
    if perm == sorted(perm):
        return ct
    return _permute(ct, perm)


def certify(t: Tour, distance: int = 2) -> CertifiedTour:
    pair = bisited_certificate(t, distance)
    if pair is None:
        raise NotBisited(f'{t.shape.label} tour has no two edge-disjoint sites')
    return CertifiedTour(t, tuple(pair))


# ==============================================================================
# DOUBLING
# ==============================================================================

def double_open(path: OpenPath) -> Tour:
    """Two copies of the path, one per layer, closed by the two cross-layer edges."""
    if path.shape.rank != 2:
        raise PreconditionError(f'doubling takes a 2D path, got {path.shape.label}')
    n, m = path.shape.dims
    if (path.start, path.end) != doubling_endpoints(n, m):
        raise PreconditionError(f'path runs {path.start} -> {path.end}, expected {doubling_endpoints(n, m)}')
    cells = [c + (0,) for c in path.cells] + [c + (1,) for c in path.cells]
    return Tour(BoardShape((n, m, 2)), path.move, tuple(cells))


# ==============================================================================
# LATERAL SPLICES
# ==============================================================================

def _neighbours_in_cycle(cells: Sequence, pos: dict, c) -> Tuple:
    i = pos[c]
    return cells[i - 1], cells[(i + 1) % len(cells)]


def _find_splice(t1: Tour, t2: Tour, axis: int, boundary: int, protected: frozenset):
    reach = max(t1.move.steps)
    pos2 = {c: i for i, c in enumerate(t2.cells)}
    offsets = [o for o in t1.move.offsets(t1.shape.rank) if o[axis] > 0]
    cells = t1.cells
    for i in range(len(cells)):
        a, b = cells[i], cells[(i + 1) % len(cells)]
        if a[axis] < boundary - reach or b[axis] < boundary - reach:
            continue
        if edge_key(a, b) in protected:
            continue
        for x1, x2 in ((a, b), (b, a)):
            for o in offsets:
                y1 = tuple(c + d for c, d in zip(x1, o))
                if y1 not in pos2:
                    continue
                for y2 in _neighbours_in_cycle(t2.cells, pos2, y1):
                    if edge_key(y1, y2) in protected:
                        continue
                    if legal_move(t1.shape, t1.move, x2, y2):
                        return x1, x2, y1, y2
    return None


def splice_lateral(t1: Tour, t2: Tour, axis: int, deletions: Optional[Tuple[Edge, Edge]] = None,
                   additions: Optional[Tuple[Edge, Edge]] = None,
                   protected: Iterable[Edge] = ()) -> Tour:
    """
    Join two tours placed side by side along `axis` into one.

    Args:
        t1, t2: tours whose shapes agree off `axis`; t2 is placed after t1
        axis: the axis to concatenate along
        deletions: (edge of t1, edge of t2), each in its own tour's coordinates;
            searched when omitted
        additions: the two cross edges in combined coordinates; derived from
            the deletions when omitted
        protected: combined-coordinate edges a searched splice must not delete

    Returns:
        The combined tour, running t1 minus its edge then t2 minus its edge.

    Raises:
        IllegalSplice: a deletion is not a tour edge, or an addition is not a
            legal move joining the deleted edges' ends
    """
    d1, d2 = t1.shape.dims, t2.shape.dims
    if len(d1) != len(d2) or any(a != b for j, (a, b) in enumerate(zip(d1, d2)) if j != axis):
        raise ShapeError(f'{t1.shape.label} and {t2.shape.label} do not line up along axis {axis}')
    boundary = d1[axis]
    dims = list(d1)
    dims[axis] += d2[axis]
    shape = BoardShape(tuple(dims))
    offset = tuple(boundary if j == axis else 0 for j in range(len(dims)))
    left = t1.with_cells(t1.cells, shape)
    right = shift(t2, offset, shape)

    if deletions is None:
        found = _find_splice(left, right, axis, boundary, frozenset(edge_key(*e) for e in protected))
        if found is None:
            raise IllegalSplice(f'no splice joins {t1.shape.label} and {t2.shape.label} along axis {axis}')
        x1, x2, y1, y2 = found
    else:
        (x1, x2), (y1, y2) = deletions[0], tuple(tuple(c + o for c, o in zip(v, offset)) for v in deletions[1])
        if edge_key(x1, x2) not in t1.edge_set():
            raise IllegalSplice(f'{x1}-{x2} is not an edge of the first tour')
        if edge_key(y1, y2) not in right.edge_set():
            raise IllegalSplice(f'{deletions[1]} is not an edge of the second tour')
        if additions is None:
            if not (legal_move(shape, t1.move, x1, y1) and legal_move(shape, t1.move, x2, y2)):
                y1, y2 = y2, y1
        else:
            pairs = {edge_key(*e) for e in additions}
            for u, v in additions:
                if not legal_move(shape, t1.move, u, v):
                    raise IllegalSplice(f'added edge {u}-{v} is not a ({t1.move.label}) move')
            if pairs == {edge_key(x1, y2), edge_key(x2, y1)}:
                y1, y2 = y2, y1
            elif pairs != {edge_key(x1, y1), edge_key(x2, y2)}:
                raise IllegalSplice('added edges do not join the ends of the deleted edges')
        if not (legal_move(shape, t1.move, x1, y1) and legal_move(shape, t1.move, x2, y2)):
            raise IllegalSplice(f'no legal cross edges between {x1}-{x2} and {y1}-{y2}')

    cells = open_at(left.cells, x1, x2) + open_at(right.cells, y2, y1)
    return Tour(shape, t1.move, tuple(cells))


def chain(blocks: Sequence[CertifiedTour], axis: int) -> CertifiedTour:
    """
    Splice blocks end to end along `axis`.

    The first block's certificate sites are kept out of every splice so the
    result stays bi-sited; if that blocks a splice, the splice is retried
    freely and a new certificate is searched at the end.
    """
    acc = blocks[0].tour
    cert = tuple(blocks[0].sites)
    for block in blocks[1:]:
        protected = [e for s in cert for e in (s.e, s.f)]
        try:
            acc = splice_lateral(acc, block.tour, axis, protected=protected)
        except IllegalSplice:
            if not protected:
                raise
            acc = splice_lateral(acc, block.tour, axis)
            cert = ()
    if len(cert) < 2:
        return certify(acc)
    return CertifiedTour(acc, cert)


def _join_layers(lower: CertifiedTour, upper: CertifiedTour, axis: int) -> CertifiedTour:
    """
    Put `upper` on top of `lower` along `axis`. Both carry (bottom, top)
    layer site pairs; the result keeps lower's bottom site and upper's top site.
    """
    height = lower.tour.shape.dims[axis]
    bottom, top = lower.sites[0], lower.sites[1]
    lift = lambda c: c[:axis] + (c[axis] + height,) + c[axis + 1:]
    drop = lambda c: c[:axis] + (0,) + c[axis + 1:]
    kept_top = upper.sites[1].mapped(lift)
    x1, x2 = top.e
    y1, y2 = drop(top.f[0]), drop(top.f[1])
    if all(c[axis] == height - 1 for c in top.cells) and edge_key(y1, y2) in upper.tour.edge_set():
        joined = splice_lateral(lower.tour, upper.tour, axis, deletions=((x1, x2), (y1, y2)),
                                additions=((x1, lift(y1)), (x2, lift(y2))))
        return CertifiedTour(joined, (bottom, kept_top))
    keep = [e for s in (bottom, kept_top) for e in (s.e, s.f)]
    try:
        joined = splice_lateral(lower.tour, upper.tour, axis, protected=keep)
    except IllegalSplice:
        return certify(splice_lateral(lower.tour, upper.tour, axis))
    return CertifiedTour(joined, (bottom, kept_top))


def stack_layers(blocks: Sequence[CertifiedTour], axis: int) -> CertifiedTour:
    """
    Stack prisms one on top of the next along `axis`.

    Every block must carry a (bottom, top) layer site pair along `axis`; the
    lower block gives up the top site's e edge, the upper block the matching
    edge one row across in its bottom layer, and the two cross edges climb one
    layer. Blocks that do not line up are joined by a searched splice instead.
    The result keeps the lowest block's bottom site and the highest block's top site.
    """
    for block in blocks:
        if not is_layer_pair(block.sites, axis, block.tour.shape.dims[axis]):
            raise NotBisited(f'{block.tour.shape.label} block has no layer site pair along axis {axis}')
    acc = blocks[0]
    for block in blocks[1:]:
        acc = _join_layers(acc, block, axis)
    return acc


# ==============================================================================
# FAMILY PLAN
# ==============================================================================

@dataclass(frozen=True)
class Plan:
    """How a 3D board is built. `dims` are sorted descending."""
    family: str
    dims: Tuple[int, int, int]
    parts: Tuple = ()

    def to_dict(self):
        return {'family': self.family, 'dims': list(self.dims), 'parts': list(self.parts)}


def _twos_and_threes(n: int) -> Tuple[int, ...]:
    return ((3,) if n % 2 else ()) + (2,) * ((n - 3) // 2 if n % 2 else n // 2)


def _blocks(n: int, first: dict, step: int) -> Tuple[int, ...]:
    k0 = first[n % step]
    return (k0,) + (step,) * ((n - k0) // step)


CHAIN_4X2_FIRST = {0: 3, 1: 4, 2: 5}
CHAIN_3X2_FIRST = {0: 4, 1: 5, 2: 6, 3: 7}


def plan_3d(dims: Sequence[int]) -> Plan:
    """Pick the construction family for a tourable 3D board."""
    verdict = classify(tuple(dims))
    if not verdict.tourable:
        raise NotTourableError(verdict)
    if min(dims) < 2 or len(dims) != 3:
        raise PreconditionError(f'3D constructions need three sides >= 2, got {dims}')
    D = tuple(sorted(dims, reverse=True))
    P, Q, R = D
    for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        if classify((D[i], D[j])).tourable:
            return Plan('face', D, (i, j, k))
    if P % 2 and Q % 2 and Q >= 5 and R in (2, 4):
        return Plan('doubling', D, (R,))
    if D in ((4, 4, 2), (4, 4, 3)):
        return Plan('prism-4x4', D)
    if (Q, R) == (4, 4):
        return Plan('prism-4x4', D, _twos_and_threes(P))
    if D in ((4, 3, 2), (4, 3, 3)):
        return Plan('prism-4x3', D)
    if (Q, R) == (4, 3):
        return Plan('prism-4x3', D, _twos_and_threes(P))
    if (Q, R) == (4, 2):
        return Plan('chain-4x2', D, _blocks(P, CHAIN_4X2_FIRST, 3))
    if (Q, R) == (3, 2):
        return Plan('chain-3x2', D, _blocks(P, CHAIN_3X2_FIRST, 4))
    if D == (6, 3, 3):
        return Plan('base-3x3x6', D)
    if D == (8, 3, 3):
        return Plan('splice-3x3x8', D)
    raise ConstructionError(f'no construction family covers {"x".join(map(str, D))}')


# ==============================================================================
# BUILDERS
# ==============================================================================

def _prism(dims: Tuple[int, ...], store: BaseCaseStore, tag: str = 'prism') -> CertifiedTour:
    name = f"base_{'x'.join(map(str, dims))}_{tag}"
    ct = store.get(name)
    entry = store.entries.get(name)
    axis = entry.constraints.stack_axis if entry else None
    if axis is not None:
        if not is_layer_pair(ct.sites, axis, dims[axis]):
            raise NotBisited(f'{name} has no bottom/top layer site pair; rerun bootstrap')
        return ct
    return ct if len(ct.sites) >= 2 else certify(ct.tour)


def _layer_block(height: int, rest: Tuple[int, int], store: BaseCaseStore) -> CertifiedTour:
    """A layered prism turned so its layer axis comes first: height x rest[0] x rest[1]."""
    return _permute(_prism(rest + (height,), store), (2, 0, 1))


def _block(length: int, rest: Tuple[int, int], store: BaseCaseStore) -> CertifiedTour:
    """A length x rest[0] x rest[1] block cut from whichever cached prism has those sides."""
    target = (length,) + rest
    if target == (5, 4, 2):
        return _prism(target, store, 'bridge')
    for dims in ((4, 4, 2), (4, 4, 3), (4, 3, 2), (4, 3, 3), (5, 3, 2), (6, 3, 2), (7, 3, 2)):
        if sorted(dims) == sorted(target):
            return orient(_prism(dims, store), target)
    raise ConstructionError(f'no cached prism for {target}')


def _build(plan: Plan, store: BaseCaseStore) -> CertifiedTour:
    from .constructnd import stack

    D = plan.dims
    family = plan.family
    if family == 'face':
        i, j, k = plan.parts
        flat = construct_2d(D[i], D[j], store)
        return orient(stack(certify(flat), D[k]), D)
    if family == 'doubling':
        P, Q, _ = D
        flat = double_open(construct_open_for_doubling(P, Q, store))
        if plan.parts[0] == 4:
            pair = aligned_layer_sites(flat, 2)
            if pair is not None:
                layered = CertifiedTour(flat, pair)
                return stack_layers([layered, layered], axis=2)
            doubled = certify(flat)
            return chain([doubled, doubled], axis=2)
        return certify(flat)
    if family in ('prism-4x4', 'prism-4x3'):
        if not plan.parts:
            return _prism(D, store)
        return stack_layers([_layer_block(k, D[1:], store) for k in plan.parts], axis=0)
    if family in ('chain-4x2', 'chain-3x2'):
        blocks = [_block(k, D[1:], store) for k in plan.parts]
        return chain(blocks, axis=0)
    if family == 'base-3x3x6':
        return _prism(D, store)
    if family == 'splice-3x3x8':
        half = _prism((4, 3, 3), store)
        try:
            return chain([half, half], axis=0)
        except (IllegalSplice, NotBisited):
            logger.info('8x3x3 splice not bi-sited; using the direct search entry')
            return _prism(D, store)
    raise ConstructionError(f'unknown family {family}')


def construct_3d(p: int, q: int, r: int, store: Optional[BaseCaseStore] = None) -> CertifiedTour:
    """Bi-sited p x q x r tour, axes in the order given."""
    store = store or default_store()
    plan = plan_3d((p, q, r))
    ct = _build(plan, store)
    logger.debug('%dx%dx%d via %s %s', p, q, r, plan.family, plan.parts)
    return orient(ct, (p, q, r))
