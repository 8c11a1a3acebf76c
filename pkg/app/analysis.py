"""
Tour analysis: verification and site detection.

A site is a pair of vertex-disjoint tour edges e, f whose paired endpoints
e[i] <-> f[i] each differ by a fixed distance d along exactly one axis.
Two copies of a tour stacked one layer apart can be merged through a site:
delete e below, delete f above, and join e[i] to f[i] across the layers.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .board import Cell, Edge, Tour, edge_key, legal_move
from .errors import CornerSiteMissing, PreconditionError
from .settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)


# ==============================================================================
# VERIFICATION
# ==============================================================================

@dataclass(frozen=True)
class Verification:
    """Valid, or the first violated constraint. `index` points into cells."""
    valid: bool
    problem: Optional[str] = None
    index: Optional[int] = None
    detail: str = ''

    def __bool__(self):
        return self.valid

    def to_dict(self) -> Dict:
        return {'valid': self.valid, 'problem': self.problem, 'index': self.index, 'detail': self.detail}


VALID = Verification(True)


def verify(t: Tour) -> Verification:
    """Check Hamiltonicity and move legality. Never raises."""
    shape, cells = t.shape, t.cells
    seen = {}
    for i, c in enumerate(cells):
        if len(c) != shape.rank:
            return Verification(False, 'dimension_mismatch', i, f'{c} on {shape.label}')
        if not shape.contains(c):
            return Verification(False, 'out_of_bounds', i, f'{c} outside {shape.label}')
        if c in seen:
            return Verification(False, 'duplicate_cell', i, f'{c} already visited at {seen[c]}')
        seen[c] = i
    if len(cells) < shape.cell_count:
        missing = next(c for c in shape.cells() if c not in seen)
        return Verification(False, 'missing_cell', None, f'{missing} never visited')
    for k in range(len(cells) - 1):
        if not legal_move(shape, t.move, cells[k], cells[k + 1]):
            return Verification(False, 'illegal_step', k, f'{cells[k]} -> {cells[k + 1]}')
    if t.closed:
        if len(cells) < 3:
            return Verification(False, 'too_short', None, f'{len(cells)} cells cannot close a cycle')
        if not legal_move(shape, t.move, cells[-1], cells[0]):
            return Verification(False, 'not_closed', len(cells) - 1, f'{cells[-1]} -> {cells[0]}')
    return VALID


# ==============================================================================
# SITES
# ==============================================================================

def _one_axis_apart(u: Cell, v: Cell, d: int) -> bool:
    diff = [abs(a - b) for a, b in zip(u, v) if a != b]
    return diff == [d]


@dataclass(frozen=True)
class Site:
    """Edges e and f, oriented so that e[i] pairs with f[i]."""
    e: Edge
    f: Edge
    distance: int

    @property
    def pairs(self) -> Tuple[Tuple[Cell, Cell], Tuple[Cell, Cell]]:
        return (self.e[0], self.f[0]), (self.e[1], self.f[1])

    @property
    def edge_keys(self) -> frozenset:
        return frozenset((edge_key(*self.e), edge_key(*self.f)))

    @property
    def cells(self) -> Tuple[Cell, ...]:
        return self.e + self.f

    def edge_disjoint(self, other) -> bool:
        return not (self.edge_keys & other.edge_keys)

    def swapped(self) -> 'Site':
        return Site(self.f, self.e, self.distance)

    def lifted(self, layer: int) -> 'Site':
        """The same site inside copy `layer` of a stack along a new last axis."""
        up = lambda c: c + (layer,)
        return Site((up(self.e[0]), up(self.e[1])), (up(self.f[0]), up(self.f[1])), self.distance)

    def mapped(self, fn) -> 'Site':
        return Site((fn(self.e[0]), fn(self.e[1])), (fn(self.f[0]), fn(self.f[1])), self.distance)

    def to_dict(self) -> Dict:
        return {
            'e': [list(c) for c in self.e],
            'f': [list(c) for c in self.f],
            'distance': self.distance,
        }

    @classmethod
    def from_dict(cls, payload: Dict) -> 'Site':
        e = tuple(tuple(c) for c in payload['e'])
        f = tuple(tuple(c) for c in payload['f'])
        return cls(e, f, int(payload['distance']))


def make_site(e: Edge, f: Edge, d: int) -> Optional[Site]:
    """The site formed by e and f at distance d, if any (straight pairing first)."""
    if set(e) & set(f):
        return None
    if _one_axis_apart(e[0], f[0], d) and _one_axis_apart(e[1], f[1], d):
        return Site(e, f, d)
    if _one_axis_apart(e[0], f[1], d) and _one_axis_apart(e[1], f[0], d):
        return Site(e, (f[1], f[0]), d)
    return None


def is_site_of(t_edges: frozenset, site: Site) -> bool:
    return edge_key(*site.e) in t_edges and edge_key(*site.f) in t_edges


def _unit_shifts(rank: int, d: int) -> List[Tuple[int, ...]]:
    shifts = []
    for axis in range(rank):
        for sign in (d, -d):
            vec = [0] * rank
            vec[axis] = sign
            shifts.append(tuple(vec))
    return shifts


def _iter_sites(t: Tour, d: int) -> Iterator[Site]:
    """Sites in increasing (e, f) edge-key order, each unordered pair once."""
    tour_edges = sorted(t.edge_set())
    present = set(tour_edges)
    shifts = _unit_shifts(t.shape.rank, d)
    for e in tour_edges:
        u, v = e
        partners = set()
        for du in shifts:
            u2 = tuple(a + b for a, b in zip(u, du))
            for dv in shifts:
                v2 = tuple(a + b for a, b in zip(v, dv))
                f = edge_key(u2, v2)
                if f > e and f in present:
                    partners.add(f)
        for f in sorted(partners):
            site = make_site(e, f, d)
            if site is not None:
                yield site


@dataclass(frozen=True)
class SiteInventory:
    sites: Tuple[Site, ...]
    bisited: bool
    disjoint_pair: Optional[Tuple[int, int]] = None

    def certificate(self) -> Optional[Tuple[Site, Site]]:
        if self.disjoint_pair is None:
            return None
        i, j = self.disjoint_pair
        return self.sites[i], self.sites[j]

    def to_dict(self) -> Dict:
        return {
            'count': len(self.sites),
            'bisited': self.bisited,
            'disjoint_pair': list(self.disjoint_pair) if self.disjoint_pair else None,
            'sites': [s.to_dict() for s in self.sites],
        }


def _first_disjoint_pair(sites: Sequence[Site]) -> Optional[Tuple[int, int]]:
    for j in range(len(sites)):
        for i in range(j):
            if sites[i].edge_disjoint(sites[j]):
                return i, j
    return None


def find_sites(t: Tour, d: Optional[int] = None) -> SiteInventory:
    """All sites at distance d, found through an edge-set index."""
    d = d or DEFAULT_SETTINGS['find_sites_distance']
    sites = tuple(_iter_sites(t, d))
    pair = _first_disjoint_pair(sites)
    return SiteInventory(sites, pair is not None, pair)


def find_sites_bruteforce(t: Tour, d: Optional[int] = None) -> SiteInventory:
    """Reference enumeration over every pair of tour edges."""
    d = d or DEFAULT_SETTINGS['find_sites_distance']
    tour_edges = sorted(t.edge_set())
    sites = []
    for e, f in itertools.combinations(tour_edges, 2):
        site = make_site(e, f, d)
        if site is not None:
            sites.append(site)
    pair = _first_disjoint_pair(sites)
    return SiteInventory(tuple(sites), pair is not None, pair)


def bisited_certificate(t: Tour, d: Optional[int] = None) -> Optional[Tuple[Site, Site]]:
    """Two edge-disjoint sites, stopping at the first pair found."""
    d = d or DEFAULT_SETTINGS['find_sites_distance']
    seen: List[Site] = []
    for site in _iter_sites(t, d):
        for earlier in seen:
            if earlier.edge_disjoint(site):
                return earlier, site
        seen.append(site)
    return None


# ==============================================================================
# LAYER SITES
# ==============================================================================

def _to_layer(site: Site, axis: int, layer: int) -> Site:
    return site.mapped(lambda c: c[:axis] + (layer,) + c[axis + 1:])


def is_layer_pair(pair: Sequence[Site], axis: int, height: int) -> bool:
    """
    True when pair is (bottom, top): a site lying in layer 0 along `axis` and
    the same site lying in layer height-1.
    """
    if len(pair) < 2 or height < 2:
        return False
    bottom, top = pair[0], pair[1]
    if not isinstance(bottom, Site) or any(c[axis] != 0 for c in bottom.cells):
        return False
    return top == _to_layer(bottom, axis, height - 1)


def aligned_layer_sites(t: Tour, axis: int, d: Optional[int] = None) -> Optional[Tuple[Site, Site]]:
    """
    A site in the bottom layer along `axis` whose copy in the top layer is
    also a site of the tour.

    Prisms carrying such a pair stack along `axis`: the lower copy loses the
    top site's e, the upper copy loses its bottom site's f, and the two cross
    edges run one layer up and d across.
    """
    d = d or DEFAULT_SETTINGS['find_sites_distance']
    top = t.shape.dims[axis] - 1
    if top < 1:
        return None
    present = t.edge_set()
    for site in _iter_sites(t, d):
        if all(c[axis] == 0 for c in site.cells):
            upper = _to_layer(site, axis, top)
            if is_site_of(present, upper):
                return site, upper
    return None


# ==============================================================================
# CORNER SITES (2D)
# ==============================================================================

def corner_sites(t: Tour, d: Optional[int] = None) -> List[Site]:
    """
    One site per board corner, each using an edge at the corner cell.

    Corner cells have degree two, so both their edges are in every tour;
    a site at distance d always shares one of them.
    """
    if t.shape.rank != 2:
        raise PreconditionError(f'corner sites are defined for 2D tours, got {t.shape.label}')
    d = d or max(t.move.steps)
    inventory = find_sites(t, d)
    chosen: List[Site] = []
    for corner in t.shape.corners():
        candidates = [s for s in inventory.sites if corner in s.cells]
        if not candidates:
            raise CornerSiteMissing(f'no site at corner {corner} of {t.shape.label}', {'corner': list(corner)})
        disjoint = [s for s in candidates if all(s.edge_disjoint(c) for c in chosen)]
        chosen.append((disjoint or candidates)[0])
    return chosen


# ==============================================================================
# (a,b)-SITES
# ==============================================================================

@dataclass(frozen=True)
class ABSite:
    """An a-site and a b-site near the same corner of the first two axes."""
    corner: Tuple[int, int]
    a_site: Site
    b_site: Site

    @property
    def edge_keys(self) -> frozenset:
        return self.a_site.edge_keys | self.b_site.edge_keys

    def edge_disjoint(self, other: 'ABSite') -> bool:
        return not (self.edge_keys & other.edge_keys)

    def lifted(self, layer: int) -> 'ABSite':
        return ABSite(self.corner, self.a_site.lifted(layer), self.b_site.lifted(layer))

    def to_dict(self) -> Dict:
        return {'corner': list(self.corner), 'a_site': self.a_site.to_dict(), 'b_site': self.b_site.to_dict()}

    @classmethod
    def from_dict(cls, payload: Dict) -> 'ABSite':
        return cls(tuple(payload['corner']), Site.from_dict(payload['a_site']), Site.from_dict(payload['b_site']))


def _near(site: Site, corner: Tuple[int, int], window: int) -> bool:
    return all(abs(c[0] - corner[0]) < window and abs(c[1] - corner[1]) < window for c in site.cells)


def _same_window(a_site: Site, b_site: Site, window: int) -> bool:
    cells = a_site.cells + b_site.cells
    for axis in range(2, len(cells[0])):
        values = [c[axis] for c in cells]
        if max(values) - min(values) >= window:
            return False
    return True


def find_ab_sites(t: Tour, a: int, b: int, window: Optional[int] = None) -> List[ABSite]:
    """
    Pairwise edge-disjoint (a,b)-sites, at most one per corner, in corner order.

    Args:
        t: a valid tour, rank >= 2
        a, b: the two site distances
        window: how far from the corner (along the first two axes) the sites may reach

    Returns:
        The chosen (a,b)-sites; a corner with no free candidate is skipped.
    """
    if t.shape.rank < 2:
        raise PreconditionError(f'(a,b)-sites need rank >= 2, got {t.shape.label}')
    window = window or DEFAULT_SETTINGS['ab_site_window'] or a + 2 * b
    a_sites = find_sites(t, a).sites
    b_sites = a_sites if a == b else find_sites(t, b).sites
    n0, n1 = t.shape.dims[0], t.shape.dims[1]
    corners = sorted({(x, y) for x in (0, n0 - 1) for y in (0, n1 - 1)})

    candidates: Dict[Tuple[int, int], List[Tuple[Site, Site]]] = {}
    for corner in corners:
        near_a = [s for s in a_sites if _near(s, corner, window)]
        near_b = [s for s in b_sites if _near(s, corner, window)]
        candidates[corner] = [(sa, sb) for sa in near_a for sb in near_b if _same_window(sa, sb, window)]

    chosen: List[ABSite] = []
    used: set = set()
    for corner in corners:
        for sa, sb in candidates[corner]:
            keys = sa.edge_keys | sb.edge_keys
            if not keys & used:
                chosen.append(ABSite(corner, sa, sb))
                used |= keys
                break
    logger.debug('%d (%d,%d)-sites on %s', len(chosen), a, b, t.shape.label)
    return chosen


# ==============================================================================
# CERTIFIED TOURS
# ==============================================================================

@dataclass(frozen=True)
class CertifiedTour:
    """A tour with the sites that certify it can be stacked further."""
    tour: Tour
    sites: Tuple = field(default_factory=tuple)

    @property
    def bisited(self) -> bool:
        return len(self.sites) >= 2 and all(isinstance(s, Site) for s in self.sites[:2]) \
            and self.sites[0].edge_disjoint(self.sites[1])

    def check(self) -> bool:
        """Every certificate site is made of tour edges."""
        present = self.tour.edge_set()
        for s in self.sites:
            parts = (s.a_site, s.b_site) if isinstance(s, ABSite) else (s,)
            if not all(is_site_of(present, p) for p in parts):
                return False
        return True
