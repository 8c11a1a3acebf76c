"""
Base-case cache.

Every small tour the constructions grow from is regenerated by the solver
under the structural constraints it must satisfy (seed edges, fixed
endpoints, bridge edges, site certificates) and stored as canonical tour
JSON, one file per entry, next to a manifest listing the required entries.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .analysis import CertifiedTour, Site, aligned_layer_sites, bisited_certificate, is_layer_pair
from .board import KNIGHT, BoardShape, Cell, Edge, MoveSpec, tour_from_dict, tour_to_json
from .errors import BootstrapIncomplete
from .settings import autobuild_enabled, cache_dir as default_cache_dir
from .solver import Budget, SearchConstraints, Status, check_solution, count_tours, solve

logger = logging.getLogger(__name__)

MANIFEST = 'manifest.json'
GOLDEN_SHAPE = (3, 10)


# ==============================================================================
# CONSTRAINT TEMPLATES
# ==============================================================================

def seed_edges(n: int, m: int) -> Tuple[Edge, Edge]:
    """The two corner edges every seeded n x m tour contains."""
    return ((0, m - 3), (1, m - 1)), ((n - 3, 0), (n - 1, 1))


def extender_endpoints(m: int) -> Tuple[Cell, Cell]:
    return (3, m - 1), (3, m - 2)


def doubling_endpoints(n: int, m: int) -> Tuple[Cell, Cell]:
    return (n - 1, m - 1), (n - 1, m - 3)


GROWTH_BRIDGE = ((1, 0), (2, 0))
BRIDGE_EDGE_5X4X2 = ((3, 1, 0), (4, 3, 0))

SEEDED_BASES = [(3, 10), (3, 12), (5, 6), (5, 8), (6, 6), (6, 7), (6, 8), (7, 8), (8, 8)]
EXTENDER_BASES = [3, 5, 7]
DOUBLING_BASES = [(5, 5), (5, 7), (7, 5), (7, 7)]
PRISM_BASES = [(4, 4, 2), (4, 4, 3), (4, 3, 2), (4, 3, 3), (5, 3, 2), (6, 3, 2), (7, 3, 2), (6, 3, 3)]
# Bases of the 4x4xn and 4x3xn stacks; the last axis is the layer axis
LAYERED_PRISMS = [(4, 4, 2), (4, 4, 3), (4, 3, 2), (4, 3, 3)]


@dataclass(frozen=True)
class BaseCaseEntry:
    dims: Tuple[int, ...]
    tag: str
    constraints: SearchConstraints
    move: MoveSpec = KNIGHT
    certify: Optional[int] = None

    @property
    def name(self) -> str:
        return f"base_{'x'.join(str(d) for d in self.dims)}_{self.tag}"

    @property
    def shape(self) -> BoardShape:
        return BoardShape(self.dims)

    def to_dict(self) -> Dict:
        payload = {'name': self.name, 'dims': list(self.dims), 'tag': self.tag,
                   'move': list(self.move.steps), 'constraints': self.constraints.to_dict()}
        if self.certify:
            payload['certify'] = self.certify
        return payload

    @classmethod
    def from_dict(cls, payload: Dict) -> 'BaseCaseEntry':
        return cls(
            tuple(payload['dims']),
            payload['tag'],
            SearchConstraints.from_dict(payload.get('constraints', {})),
            MoveSpec(tuple(payload.get('move', (1, 2)))),
            payload.get('certify'),
        )


def seeded_entry(n: int, m: int) -> BaseCaseEntry:
    return BaseCaseEntry((n, m), 'seeded', SearchConstraints(forced_edges=seed_edges(n, m)))


def extender_entry(m: int) -> BaseCaseEntry:
    return BaseCaseEntry((4, m), 'extender', SearchConstraints(
        closed=False, endpoints=extender_endpoints(m), forced_edges=seed_edges(4, m)))


def growth_entry() -> BaseCaseEntry:
    return BaseCaseEntry((4, 3), 'growth', SearchConstraints(
        closed=False, endpoints=((3, 2), (3, 1)), bridges=(GROWTH_BRIDGE,),
        forced_edges=(((0, 0), (1, 2)),)))


def doubling_entry(n: int, m: int) -> BaseCaseEntry:
    return BaseCaseEntry((n, m), 'doubling', SearchConstraints(
        closed=False, endpoints=doubling_endpoints(n, m), forced_edges=seed_edges(n, m)))


def prism_entry(dims: Tuple[int, ...]) -> BaseCaseEntry:
    """Prisms stacked layer on layer also need a bottom-layer site repeated in the top layer."""
    dims = tuple(dims)
    if dims in LAYERED_PRISMS:
        return BaseCaseEntry(dims, 'prism', SearchConstraints(stack_axis=len(dims) - 1), certify=2)
    return BaseCaseEntry(dims, 'prism', SearchConstraints(bisited_distance=2), certify=2)


def bridge_entry() -> BaseCaseEntry:
    return BaseCaseEntry((5, 4, 2), 'bridge', SearchConstraints(
        forced_edges=(BRIDGE_EDGE_5X4X2,), bisited_distance=2), certify=2)


def required_entries() -> List[BaseCaseEntry]:
    entries = [seeded_entry(n, m) for n, m in SEEDED_BASES]
    entries += [extender_entry(m) for m in EXTENDER_BASES]
    entries.append(growth_entry())
    entries += [doubling_entry(n, m) for n, m in DOUBLING_BASES]
    entries += [prism_entry(d) for d in PRISM_BASES]
    entries.append(bridge_entry())
    return entries


def optional_entries() -> List[BaseCaseEntry]:
    """Entries only built when a construction falls back to them."""
    return [prism_entry((8, 3, 3))]


# ==============================================================================
# STORE
# ==============================================================================

class BaseCaseStore:
    """
    Reads base cases from the cache directory, solving missing ones on demand
    when autobuild is enabled.
    """

    def __init__(self, cache_dir: Optional[str] = None, autobuild: Optional[bool] = None,
                 budget: Optional[Budget] = None, entries: Optional[Iterable[BaseCaseEntry]] = None):
        self.cache_dir = default_cache_dir(cache_dir)
        self.autobuild = autobuild_enabled() if autobuild is None else autobuild
        self.budget = budget or Budget.default()
        self.required = list(entries) if entries is not None else required_entries()
        self.entries: Dict[str, BaseCaseEntry] = {e.name: e for e in self.required + optional_entries()}
        self._memory: Dict[str, CertifiedTour] = {}

    def path_for(self, name: str) -> str:
        return os.path.join(self.cache_dir, f'{name}.json')

    def has(self, name: str) -> bool:
        return name in self._memory or os.path.exists(self.path_for(name))

    def missing(self) -> List[str]:
        return [e.name for e in self.required if not self.has(e.name)]

    def entry(self, name: str) -> BaseCaseEntry:
        if name not in self.entries:
            raise BootstrapIncomplete(f'unknown base case {name}')
        return self.entries[name]

    def get(self, name: str) -> CertifiedTour:
        """The cached tour (with its site certificate, if any)."""
        if name in self._memory:
            return self._memory[name]
        path = self.path_for(name)
        if os.path.exists(path):
            with open(path) as fh:
                payload = json.load(fh)
            ct = CertifiedTour(tour_from_dict(payload),
                               tuple(Site.from_dict(s) for s in payload.get('sites', ())))
            if self.autobuild and name in self.entries:
                problems = self.audit(self.entries[name], ct)
                if problems:
                    logger.warning('cached %s rejected, %s; rebuilding', name, problems[0])
                    self.discard(name)
                    ct = self.build(self.entries[name])
        elif self.autobuild:
            ct = self.build(self.entry(name))
        else:
            raise BootstrapIncomplete(f'base case {name} is not in {self.cache_dir}; run bootstrap',
                                      {'missing': [name]})
        self._memory[name] = ct
        return ct

    def solve_entry(self, entry: BaseCaseEntry, budget: Optional[Budget] = None, jobs: int = 1):
        outcome = solve(entry.shape, entry.move, entry.constraints, budget or self.budget, jobs=jobs)
        if not outcome.found:
            return None, outcome
        sites = ()
        if entry.constraints.stack_axis is not None:
            sites = aligned_layer_sites(outcome.tour, entry.constraints.stack_axis, entry.certify) or ()
        elif entry.certify:
            sites = bisited_certificate(outcome.tour, entry.certify) or ()
        return CertifiedTour(outcome.tour, tuple(sites)), outcome

    def audit(self, entry: BaseCaseEntry, ct: CertifiedTour) -> List[str]:
        """Reasons the cached tour cannot stand in for `entry`; empty when it can."""
        if ct.tour.shape.dims != entry.dims or ct.tour.move != entry.move:
            return [f'cached {ct.tour.shape.label} ({ct.tour.move.label}) does not match {entry.name}']
        problems = check_solution(ct.tour, entry.constraints)
        if ct.sites and not ct.check():
            problems.append('certificate sites are not tour edges')
        axis = entry.constraints.stack_axis
        if axis is not None:
            if not is_layer_pair(ct.sites, axis, entry.dims[axis]):
                problems.append(f'certificate is not a bottom/top layer site pair along axis {axis}')
        elif entry.certify and not ct.bisited:
            problems.append('no bi-sited certificate')
        return problems

    def discard(self, name: str) -> None:
        self._memory.pop(name, None)
        if os.path.exists(self.path_for(name)):
            os.remove(self.path_for(name))

    def build(self, entry: BaseCaseEntry) -> CertifiedTour:
        ct, outcome = self.solve_entry(entry)
        if ct is None:
            raise BootstrapIncomplete(
                f'{entry.name}: search ended {outcome.status.value} after {outcome.nodes_expanded} nodes',
                {'missing': [entry.name], 'status': outcome.status.value})
        self.put(entry, ct)
        return ct

    def put(self, entry: BaseCaseEntry, ct: CertifiedTour) -> None:
        os.makedirs(self.cache_dir, exist_ok=True)
        extra = {'name': entry.name, 'tag': entry.tag, 'constraints': entry.constraints.to_dict()}
        if ct.sites:
            extra['sites'] = [s.to_dict() for s in ct.sites]
        with open(self.path_for(entry.name), 'w') as fh:
            fh.write(tour_to_json(ct.tour, extra))
            fh.write('\n')
        self._memory[entry.name] = ct
        logger.info('stored base case %s', entry.name)

    # -- manifest ---------------------------------------------------------------

    def read_manifest(self) -> Dict:
        path = os.path.join(self.cache_dir, MANIFEST)
        if not os.path.exists(path):
            return {'entries': [], 'golden': {}}
        with open(path) as fh:
            return json.load(fh)

    def golden(self) -> Dict[str, int]:
        return dict(self.read_manifest().get('golden', {}))

    def write_manifest(self, golden: Optional[Dict[str, int]] = None) -> str:
        os.makedirs(self.cache_dir, exist_ok=True)
        merged = self.golden()
        merged.update(golden or {})
        payload = {'entries': [e.to_dict() for e in self.required], 'golden': merged}
        path = os.path.join(self.cache_dir, MANIFEST)
        with open(path, 'w') as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write('\n')
        return path


def load_entries(manifest_path: str) -> List[BaseCaseEntry]:
    with open(manifest_path) as fh:
        payload = json.load(fh)
    return [BaseCaseEntry.from_dict(e) for e in payload.get('entries', [])]


_stores: Dict[Tuple[str, bool], BaseCaseStore] = {}


def default_store() -> BaseCaseStore:
    """One shared store per cache directory and autobuild setting."""
    key = (default_cache_dir(), autobuild_enabled())
    if key not in _stores:
        _stores[key] = BaseCaseStore(*key)
    return _stores[key]


# ==============================================================================
# BOOTSTRAP
# ==============================================================================

@dataclass
class BootstrapReport:
    found: List[str] = field(default_factory=list)
    reused: List[str] = field(default_factory=list)
    failed: Dict[str, str] = field(default_factory=dict)
    rejected: Dict[str, str] = field(default_factory=dict)
    golden: Dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failed

    def raise_for_failures(self) -> None:
        if self.failed:
            raise BootstrapIncomplete(f'{len(self.failed)} base cases could not be built',
                                      {'failed': self.failed})

    def to_dict(self) -> Dict:
        return {'ok': self.ok, 'found': self.found, 'reused': self.reused, 'rejected': self.rejected,
                'failed': self.failed, 'golden': self.golden}


def bootstrap(store: BaseCaseStore, entries: Optional[Iterable[BaseCaseEntry]] = None,
              budget: Optional[Budget] = None, jobs: int = 1, golden: bool = True) -> BootstrapReport:
    """
    Solve and persist every entry not yet cached. Idempotent.

    Cached entries are re-checked against their constraints first; one that
    fails is discarded and solved again.

    Args:
        store: target cache
        entries: entries to build (default: the store's required list)
        budget: per-entry solver budget
        jobs: solver worker processes per entry
        golden: also record the exhaustive 3x10 tour count in the manifest

    Returns:
        BootstrapReport naming found, reused and failed entries
    """
    report = BootstrapReport()
    for entry in (list(entries) if entries is not None else store.required):
        if store.has(entry.name):
            problems = store.audit(entry, store.get(entry.name))
            if not problems:
                report.reused.append(entry.name)
                continue
            report.rejected[entry.name] = problems[0]
            logger.warning('bootstrap: cached %s rejected, %s', entry.name, problems[0])
            store.discard(entry.name)
        ct, outcome = store.solve_entry(entry, budget, jobs)
        if ct is None:
            report.failed[entry.name] = outcome.status.value
            logger.warning('bootstrap: %s %s', entry.name, outcome.status.value)
            continue
        store.put(entry, ct)
        report.found.append(entry.name)

    counts = store.golden()
    label = 'x'.join(str(d) for d in GOLDEN_SHAPE)
    if golden and label not in counts:
        tally = count_tours(GOLDEN_SHAPE, KNIGHT, budget or store.budget)
        if tally.status is Status.EXHAUSTED:
            counts[label] = tally.count
        else:
            report.failed[f'golden_{label}'] = tally.status.value
    report.golden = counts
    store.write_manifest(counts)
    logger.info('bootstrap: %d found, %d reused, %d failed',
                len(report.found), len(report.reused), len(report.failed))
    return report
