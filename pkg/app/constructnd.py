"""
Higher-dimensional constructions.

`stack` layers p copies of a bi-sited tour along a new axis, joining each
copy to the next through one of two sites in turn. `construct` builds any
tourable board from a 3D base and repeated stacking; `lift_1b` and `lift_ab`
do the same for (1,b) and (a,b) leapers.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .analysis import ABSite, CertifiedTour, Site, bisited_certificate, corner_sites, find_ab_sites, \
    is_site_of, verify
from .base_cases import BaseCaseStore
from .board import BoardShape, Edge, MoveSpec, Tour, assemble_cycle, edge_key, transform
from .construct2d import construct_2d
from .construct3d import construct_3d
from .errors import (ConstructionError, CornerSiteMissing, InsufficientSites, LayerBudget,
                     MissingCornerSites, NotBisited, NotTourableError, PreconditionError)
from .graph import DisjointSet, as_shape, classify
from .solver import Budget, SearchConstraints, solve

logger = logging.getLogger(__name__)


# ==============================================================================
# STACKING
# ==============================================================================

def _lift(edge: Edge, layer: int) -> Edge:
    return edge[0] + (layer,), edge[1] + (layer,)


def _layered_edges(tour: Tour, p: int, deleted: Dict[int, set]) -> List[Edge]:
    base = tour.edges()
    links = []
    for layer in range(p):
        gone = deleted.get(layer, ())
        links.extend(_lift(e, layer) for e in base if edge_key(*e) not in gone)
    return links


def _stack_sites(ct: CertifiedTour, sites: Optional[Sequence[Site]], distance: int) -> Tuple[Site, Site]:
    if sites is not None:
        if len(sites) != 2:
            raise NotBisited('stacking needs exactly two sites')
        chosen = tuple(sites)
    else:
        pair = [s for s in ct.sites if isinstance(s, Site)][:2]
        if len(pair) < 2:
            pair = bisited_certificate(ct.tour, distance) or ()
        if len(pair) < 2:
            raise NotBisited(f'{ct.tour.shape.label} tour has no two edge-disjoint {distance}-sites')
        chosen = tuple(sorted(pair, key=lambda s: (s.e, s.f)))
    present = ct.tour.edge_set()
    if not chosen[0].edge_disjoint(chosen[1]) or not all(is_site_of(present, s) for s in chosen):
        raise NotBisited('the two sites must be edge-disjoint tour edges')
    return chosen


def stack(t: Union[Tour, CertifiedTour], p: int, sites: Optional[Sequence[Site]] = None,
          distance: int = 2, axis: Optional[int] = None) -> CertifiedTour:
    """
    Layer p copies of a bi-sited tour along a new axis.

    Copy k is joined to copy k+1 through sites[k % 2]: its e edge goes in
    copy k, its f edge in copy k+1, and e[i] is linked to f[i] across the
    layers. The sites left untouched in the bottom and top copies certify
    the result.

    Args:
        t: tour, or certified tour whose sites are used
        p: number of copies
        sites: the ordered site pair to alternate; searched when omitted
        distance: site distance to search for
        axis: position of the new axis (default: last)

    Returns:
        CertifiedTour on shape x p
    """
    ct = t if isinstance(t, CertifiedTour) else CertifiedTour(t)
    if p < 1:
        raise PreconditionError(f'stack height must be >= 1, got {p}')
    if p == 1 and axis is None:
        return ct
    tour = ct.tour
    first, second = _stack_sites(ct, sites, distance)
    if first.distance != second.distance:
        raise PreconditionError('both sites must use the same distance')
    if tuple(sorted((1, first.distance))) != tour.move.steps:
        raise PreconditionError(f'cross edges of a {first.distance}-site are not ({tour.move.label}) moves')

    pair = (first, second)
    deleted: Dict[int, set] = {}
    cross: List[Edge] = []
    for k in range(p - 1):
        s = pair[k % 2]
        deleted.setdefault(k, set()).add(edge_key(*s.e))
        deleted.setdefault(k + 1, set()).add(edge_key(*s.f))
        cross.append((s.e[0] + (k,), s.f[0] + (k + 1,)))
        cross.append((s.e[1] + (k,), s.f[1] + (k + 1,)))

    shape = BoardShape(tour.shape.dims + (p,))
    out = assemble_cycle(shape, tour.move, _layered_edges(tour, p, deleted) + cross)
    cert = (second.lifted(0), pair[(p - 1) % 2].lifted(p - 1))
    if p == 1:
        cert = (first.lifted(0), second.lifted(0))
    result = CertifiedTour(out, cert)
    if axis is not None and axis != tour.shape.rank:
        result = _move_last_axis(result, axis)
    return result


def _move_last_axis(ct: CertifiedTour, axis: int) -> CertifiedTour:
    rank = ct.tour.shape.rank
    if not 0 <= axis < rank:
        raise PreconditionError(f'axis {axis} out of range for rank {rank}')
    perm = list(range(rank - 1))
    perm.insert(axis, rank - 1)
    moved = lambda c: tuple(c[j] for j in perm)
    return CertifiedTour(transform(ct.tour, perm), tuple(s.mapped(moved) for s in ct.sites))


# ==============================================================================
# MASTER CONSTRUCTOR
# ==============================================================================

def _pick_triple(dims: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Axes for the 3D base (two largest plus an even partner) and the rest, largest first."""
    order = sorted(range(len(dims)), key=lambda i: -dims[i])
    first, second = order[:2]
    if dims[first] % 2 == 0 or dims[second] % 2 == 0:
        third = order[2]
    else:
        third = next(i for i in order[2:] if dims[i] % 2 == 0)
    triple = [first, second, third]
    return triple, [i for i in order if i not in triple]


def construct(shape, store: Optional[BaseCaseStore] = None) -> Tour:
    """
    A closed knight's tour on any tourable board.

    Sides of length one are dropped and put back at the end; two remaining
    sides go to the 2D construction, three or more to a 3D base stacked
    along the other axes.
    """
    shape = as_shape(shape)
    verdict = classify(shape)
    if not verdict.tourable:
        raise NotTourableError(verdict)
    dims = shape.dims
    live = [i for i, d in enumerate(dims) if d > 1]
    core = [dims[i] for i in live]

    if len(core) == 2:
        tour = construct_2d(core[0], core[1], store)
    else:
        triple, rest = _pick_triple(core)
        ct = construct_3d(*(core[i] for i in triple), store=store)
        for i in rest:
            ct = stack(ct, core[i])
        axes = triple + rest
        tour = transform(ct.tour, [axes.index(i) for i in range(len(core))])

    if len(live) == len(dims):
        return tour
    cells = []
    for c in tour.cells:
        full = [0] * len(dims)
        for j, i in enumerate(live):
            full[i] = c[j]
        cells.append(tuple(full))
    return tour.with_cells(cells, shape)


# ==============================================================================
# LEAPER LIFTING
# ==============================================================================

def lift_1b(t: Tour, b: int, layers: Sequence[int]) -> CertifiedTour:
    """
    Stack a 2D (1,b)-tour along one new axis per entry of `layers`.

    The first stacking uses two edge-disjoint corner b-sites; later ones use
    the certificate the previous stacking returns.
    """
    if t.move.steps != tuple(sorted((1, b))):
        raise PreconditionError(f'lift_1b takes a (1,{b}) tour, got ({t.move.label})')
    if t.shape.rank != 2 or max(t.shape.dims) <= 2 * b + 1:
        raise PreconditionError(f'(1,{b}) lifting needs a 2D board with a side > {2 * b + 1}, got {t.shape.label}')
    check = verify(t)
    if not check:
        raise PreconditionError(f'input is not a valid tour: {check.problem}')
    try:
        corners = corner_sites(t, b)
    except CornerSiteMissing as exc:
        raise MissingCornerSites(exc.message, exc.details)
    pair = next(((s, u) for i, s in enumerate(corners) for u in corners[i + 1:] if s.edge_disjoint(u)), None)
    if pair is None:
        raise MissingCornerSites(f'corner {b}-sites of {t.shape.label} overlap')
    ct = CertifiedTour(t, pair)
    for p in layers:
        ct = stack(ct, p, distance=b)
    return ct


def lift_ab(t: Union[Tour, CertifiedTour], a: int, b: int, p: int,
            sites: Optional[Sequence[ABSite]] = None) -> CertifiedTour:
    """
    Stack p copies of an (a,b)-tour along a new axis.

    a-sites join layers b apart, chaining each residue class of layers mod b;
    b-sites join layer (k*a) mod b to the layer a above it for k < b-1, which
    links the residue classes. The joins form a tree over the layers.

    Args:
        t: an (a,b)-tour, optionally certified with its (a,b)-sites
        a, b: the leaper's steps
        p: number of layers, at least a+b+1
        sites: (a,b)-sites to use; searched when omitted

    Returns:
        CertifiedTour keeping the unused (a,b)-sites of the bottom and top layers
    """
    ct = t if isinstance(t, CertifiedTour) else CertifiedTour(t)
    tour = ct.tour
    if math.gcd(a, b) != 1:
        raise PreconditionError(f'gcd({a},{b}) must be 1')
    if tour.move.steps != tuple(sorted((a, b))):
        raise PreconditionError(f'lift_ab({a},{b}) takes an ({a},{b}) tour, got ({tour.move.label})')
    if p < a + b + 1:
        raise LayerBudget(f'{p} layers; ({a},{b}) lifting needs at least {a + b + 1}', {'p': p, 'min': a + b + 1})
    if sites is None:
        sites = [s for s in ct.sites if isinstance(s, ABSite)] or find_ab_sites(tour, a, b)
    sites = list(sites)
    if len(sites) < 4:
        raise InsufficientSites(f'{len(sites)} ({a},{b})-sites found, 4 needed', {'found': len(sites)})
    for i, x in enumerate(sites[:4]):
        for y in sites[i + 1:4]:
            if not x.edge_disjoint(y):
                raise PreconditionError(f'({a},{b})-sites at {x.corner} and {y.corner} share an edge')

    joins = [(j, j + b, sites[0].a_site) for j in range(p - b)]
    for k in range(b - 1):
        j = (k * a) % b
        joins.append((j, j + a, sites[1].b_site))

    layers = DisjointSet(p)
    deleted: Dict[int, set] = {}
    cross: List[Edge] = []
    for lo, hi, site in joins:
        if not layers.union(lo, hi):
            raise ConstructionError(f'layers {lo} and {hi} are already joined')
        for layer, edge in ((lo, site.e), (hi, site.f)):
            gone = deleted.setdefault(layer, set())
            if edge_key(*edge) in gone:
                raise ConstructionError(f'edge {edge} deleted twice in layer {layer}')
            gone.add(edge_key(*edge))
        cross.append((site.e[0] + (lo,), site.f[0] + (hi,)))
        cross.append((site.e[1] + (lo,), site.f[1] + (hi,)))
    if layers.num_components != 1:
        raise ConstructionError(f'layer joins left {layers.num_components} pieces')

    shape = BoardShape(tour.shape.dims + (p,))
    out = assemble_cycle(shape, tour.move, _layered_edges(tour, p, deleted) + cross)
    kept = tuple(s.lifted(layer) for layer in (0, p - 1) for s in sites[2:4])
    logger.debug('(%d,%d) lift of %s into %d layers', a, b, tour.shape.label, p)
    return CertifiedTour(out, kept)


@dataclass
class ABBaseSearch:
    """Outcome of looking for an (a,b)-tour that carries enough (a,b)-sites."""
    a: int
    b: int
    tour: Optional[Tour] = None
    tried: List[Dict] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.tour is not None

    @property
    def bound(self) -> Optional[str]:
        """The largest board searched."""
        return self.tried[-1]['shape'] if self.tried else None

    def to_dict(self) -> Dict:
        return {'move': [self.a, self.b], 'found': self.found, 'bound': self.bound, 'tried': self.tried}


def search_ab_base(a: int, b: int, max_side: int, budget: Optional[Budget] = None,
                   min_sites: int = 4) -> ABBaseSearch:
    """
    Smallest 2D (a,b)-tour with `min_sites` (a,b)-sites.

    Boards up to max_side x max_side are tried by cell count; boards the
    solver rules out without searching are skipped and not recorded.
    """
    move = MoveSpec((a, b))
    constraints = SearchConstraints(min_ab_sites=(a, b, min_sites))
    boards = sorted(((n, m) for n in range(2, max_side + 1) for m in range(2, n + 1)),
                    key=lambda d: (d[0] * d[1], d))
    result = ABBaseSearch(a, b)
    for dims in boards:
        outcome = solve(dims, move, constraints, budget)
        if outcome.reason:
            continue
        result.tried.append({'shape': BoardShape(dims).label, 'status': outcome.status.value,
                             'nodes': outcome.nodes_expanded})
        if outcome.found:
            result.tour = outcome.tour
            break
    logger.info('(%d,%d) base search: %s, bound %s', a, b, 'found' if result.found else 'none', result.bound)
    return result
