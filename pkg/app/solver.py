"""
Constrained backtracking search for closed tours and Hamiltonian paths.

The search extends a single path over flat cell indices. Successors are
ordered least-onward-degree first (Warnsdorff), forced edges are followed as
soon as the path reaches one of their ends, and a branch is cut whenever an
unvisited cell can no longer collect the edges it needs.

Used three ways: to regenerate the base cases the constructions grow from,
as a small-board oracle, and to scan generalized leapers for tours.
"""

import enum
import itertools
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .analysis import aligned_layer_sites, bisited_certificate, find_ab_sites, find_sites, verify
from .board import KNIGHT, BoardShape, Cell, Edge, MoveSpec, Tour, edge_key, legal_move, make_tour
from .errors import ConstraintError, ConstructionError
from .graph import adjacency, as_shape, connectivity
from .settings import get_settings

logger = logging.getLogger(__name__)


# ==============================================================================
# CONSTRAINTS AND OUTCOMES
# ==============================================================================

class Status(enum.Enum):
    FOUND = 'Found'
    EXHAUSTED = 'Exhausted'
    TIMED_OUT = 'TimedOut'


@dataclass(frozen=True)
class Budget:
    """Node and wall-clock limits; None means unlimited."""
    nodes: Optional[int] = None
    seconds: Optional[float] = None

    @classmethod
    def default(cls) -> 'Budget':
        settings = get_settings()
        return cls(settings['budget_nodes'], settings['budget_secs'])

    def deterministic(self) -> 'Budget':
        """Drop the clock so identical inputs always expand identical nodes."""
        return Budget(self.nodes, None)

    def split(self, parts: int) -> 'Budget':
        """Share of the node limit for one of `parts` parallel branches."""
        if self.nodes is None or parts <= 1:
            return self
        return Budget(max(1, -(-self.nodes // parts)), self.seconds)

    def to_dict(self) -> Dict:
        return {'nodes': self.nodes, 'seconds': self.seconds}


def _cell(c) -> Cell:
    return tuple(int(x) for x in c)


def _edges(items) -> Tuple[Edge, ...]:
    return tuple(sorted({edge_key(_cell(u), _cell(v)) for u, v in items}))


@dataclass(frozen=True)
class SiteRequirement:
    """A site at `distance` whose cells all lie within `reach` of `corner` on every axis."""
    distance: int
    corner: Cell
    reach: int

    def satisfied_by(self, sites) -> bool:
        return any(all(abs(a - b) <= self.reach for c in s.cells for a, b in zip(c, self.corner))
                   for s in sites)

    def to_dict(self) -> Dict:
        return {'distance': self.distance, 'corner': list(self.corner), 'reach': self.reach}

    @classmethod
    def from_dict(cls, payload: Dict) -> 'SiteRequirement':
        return cls(int(payload['distance']), _cell(payload['corner']), int(payload['reach']))


@dataclass(frozen=True)
class SearchConstraints:
    """
    Structural requirements on a searched tour.

    Bridges are extra non-leaper edges the path must use; they let one search
    produce several paths that are later wired together through another tour.
    `stack_axis` asks for a site in the bottom layer along that axis that
    repeats in the top layer.
    """
    closed: bool = True
    forced_edges: Tuple[Edge, ...] = ()
    forbidden_edges: Tuple[Edge, ...] = ()
    endpoints: Optional[Tuple[Cell, Cell]] = None
    required_sites: Tuple[SiteRequirement, ...] = ()
    bridges: Tuple[Edge, ...] = ()
    bisited_distance: Optional[int] = None
    min_ab_sites: Optional[Tuple[int, int, int]] = None
    stack_axis: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'forced_edges', _edges(self.forced_edges))
        object.__setattr__(self, 'forbidden_edges', _edges(self.forbidden_edges))
        object.__setattr__(self, 'bridges', _edges(self.bridges))
        object.__setattr__(self, 'required_sites', tuple(self.required_sites))
        if self.endpoints is not None:
            object.__setattr__(self, 'endpoints', (_cell(self.endpoints[0]), _cell(self.endpoints[1])))
            if self.closed:
                raise ConstraintError('endpoints are only meaningful for open paths')
        if self.min_ab_sites is not None:
            object.__setattr__(self, 'min_ab_sites', tuple(int(x) for x in self.min_ab_sites))
        clash = set(self.forced_edges) & set(self.forbidden_edges)
        if clash:
            raise ConstraintError(f'edges both forced and forbidden: {sorted(clash)}')

    @property
    def needs_leaf_check(self) -> bool:
        return (bool(self.required_sites) or self.bisited_distance is not None or self.min_ab_sites is not None
                or self.stack_axis is not None)

    def validate(self, shape: BoardShape, move: MoveSpec) -> None:
        """Raise ConstraintError unless every constraint fits the board."""
        for group, name in ((self.forced_edges, 'forced'), (self.forbidden_edges, 'forbidden'),
                            (self.bridges, 'bridge')):
            for u, v in group:
                if not (shape.contains(u) and shape.contains(v)) or u == v:
                    raise ConstraintError(f'{name} edge {u}-{v} does not fit {shape.label}')
                if name != 'bridge' and not legal_move(shape, move, u, v):
                    raise ConstraintError(f'{name} edge {u}-{v} is not a ({move.label}) move')
        load: Dict[Cell, int] = {}
        for u, v in self.forced_edges + self.bridges:
            load[u] = load.get(u, 0) + 1
            load[v] = load.get(v, 0) + 1
        if any(k > 2 for k in load.values()):
            raise ConstraintError('a cell carries more than two forced edges')
        if self.endpoints is not None:
            s, t = self.endpoints
            if s == t or not (shape.contains(s) and shape.contains(t)):
                raise ConstraintError(f'bad endpoints {s}, {t} on {shape.label}')
            if load.get(s, 0) > 1 or load.get(t, 0) > 1:
                raise ConstraintError('an endpoint carries two forced edges')
        for req in self.required_sites:
            if len(req.corner) != shape.rank:
                raise ConstraintError(f'site corner {req.corner} does not match {shape.label}')
        if self.stack_axis is not None:
            if not 0 <= self.stack_axis < shape.rank or shape.dims[self.stack_axis] < 2:
                raise ConstraintError(f'{shape.label} has no two layers along axis {self.stack_axis}')

    def to_dict(self) -> Dict:
        payload = {'closed': self.closed}
        if self.forced_edges:
            payload['forced_edges'] = [[list(u), list(v)] for u, v in self.forced_edges]
        if self.forbidden_edges:
            payload['forbidden_edges'] = [[list(u), list(v)] for u, v in self.forbidden_edges]
        if self.endpoints:
            payload['endpoints'] = [list(c) for c in self.endpoints]
        if self.required_sites:
            payload['required_sites'] = [r.to_dict() for r in self.required_sites]
        if self.bridges:
            payload['bridges'] = [[list(u), list(v)] for u, v in self.bridges]
        if self.bisited_distance is not None:
            payload['bisited_distance'] = self.bisited_distance
        if self.min_ab_sites is not None:
            payload['min_ab_sites'] = list(self.min_ab_sites)
        if self.stack_axis is not None:
            payload['stack_axis'] = self.stack_axis
        return payload

    @classmethod
    def from_dict(cls, payload: Dict) -> 'SearchConstraints':
        return cls(
            closed=bool(payload.get('closed', True)),
            forced_edges=tuple(tuple(e) for e in payload.get('forced_edges', ())),
            forbidden_edges=tuple(tuple(e) for e in payload.get('forbidden_edges', ())),
            endpoints=tuple(payload['endpoints']) if payload.get('endpoints') else None,
            required_sites=tuple(SiteRequirement.from_dict(r) for r in payload.get('required_sites', ())),
            bridges=tuple(tuple(e) for e in payload.get('bridges', ())),
            bisited_distance=payload.get('bisited_distance'),
            min_ab_sites=tuple(payload['min_ab_sites']) if payload.get('min_ab_sites') else None,
            stack_axis=payload.get('stack_axis'),
        )


CLOSED = SearchConstraints()


@dataclass
class SearchOutcome:
    status: Status
    tour: Optional[Tour] = None
    nodes_expanded: int = 0
    elapsed: float = 0.0
    reason: Optional[str] = None

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND

    def to_dict(self) -> Dict:
        return {
            'status': self.status.value,
            'nodes_expanded': self.nodes_expanded,
            'elapsed': round(self.elapsed, 3),
            'reason': self.reason,
        }


@dataclass
class TourCount:
    """Complete when status is Exhausted; otherwise `count` is a lower bound."""
    count: int
    status: Status
    nodes_expanded: int = 0
    elapsed: float = 0.0

    @property
    def complete(self) -> bool:
        return self.status is Status.EXHAUSTED


# ==============================================================================
# LEAF REQUIREMENTS AND POST-CHECKS
# ==============================================================================

def make_acceptor(shape: BoardShape, move: MoveSpec,
                  constraints: SearchConstraints) -> Optional[Callable[[Sequence[int]], bool]]:
    """Predicate over complete index paths for the site-based requirements."""
    if not constraints.needs_leaf_check:
        return None

    def accept(path: Sequence[int]) -> bool:
        tour = make_tour(shape, move, (shape.cell_at(i) for i in path), constraints.closed)
        return requirements_met(tour, constraints)

    return accept


def requirements_met(tour: Tour, constraints: SearchConstraints) -> bool:
    by_distance: Dict[int, tuple] = {}
    for req in constraints.required_sites:
        if req.distance not in by_distance:
            by_distance[req.distance] = find_sites(tour, req.distance).sites
        if not req.satisfied_by(by_distance[req.distance]):
            return False
    if constraints.bisited_distance is not None:
        if bisited_certificate(tour, constraints.bisited_distance) is None:
            return False
    if constraints.min_ab_sites is not None:
        a, b, count = constraints.min_ab_sites
        if len(find_ab_sites(tour, a, b)) < count:
            return False
    if constraints.stack_axis is not None:
        if aligned_layer_sites(tour, constraints.stack_axis, constraints.bisited_distance) is None:
            return False
    return True


def check_solution(tour: Tour, constraints: SearchConstraints) -> List[str]:
    """Independent re-check of a found tour; returns the violated constraints."""
    problems = []
    bridges = set(constraints.bridges)
    if bridges:
        cells = tour.cells
        if sorted(cells) != sorted(tour.shape.cells()):
            problems.append('not hamiltonian')
        for k in range(len(cells) - 1):
            step = edge_key(cells[k], cells[k + 1])
            if step not in bridges and not legal_move(tour.shape, tour.move, *step):
                problems.append(f'illegal step {k}')
                break
    else:
        verdict = verify(tour)
        if not verdict.valid:
            problems.append(f'verify: {verdict.problem} at {verdict.index}')
    present = tour.edge_set()
    missing = [e for e in constraints.forced_edges + constraints.bridges if e not in present]
    if missing:
        problems.append(f'forced edges missing: {missing}')
    banned = [e for e in constraints.forbidden_edges if e in present]
    if banned:
        problems.append(f'forbidden edges used: {banned}')
    if constraints.endpoints is not None and (tour.start, tour.end) != constraints.endpoints:
        problems.append(f'endpoints {tour.start}, {tour.end} != {constraints.endpoints}')
    if constraints.closed != tour.closed:
        problems.append('closedness mismatch')
    if not problems and not requirements_met(tour, constraints):
        problems.append('site requirements not met')
    return problems


def prefilter(shape: BoardShape, move: MoveSpec, constraints: SearchConstraints) -> Optional[str]:
    """A cheap proof that no solution exists, or None."""
    n = shape.cell_count
    if constraints.closed and n < 3:
        return 'too_small'
    if constraints.bridges:
        return None
    adj = adjacency(shape, move)
    if n > 1 and not connectivity(shape, move).connected:
        return 'disconnected'
    if sum(move.steps) % 2 == 1:
        if constraints.closed:
            if math.prod(d % 2 for d in shape.dims):
                return 'parity'
        elif constraints.endpoints is not None:
            s, t = constraints.endpoints
            cs, ct = sum(s) % 2, sum(t) % 2
            if n % 2 == 0 and cs == ct:
                return 'parity'
            if n % 2 == 1 and (cs or ct):
                return 'parity'
    banned = set(constraints.forbidden_edges)
    ends = set(constraints.endpoints or ())
    for i in range(n):
        c = shape.cell_at(i)
        deg = sum(1 for j in adj[i] if edge_key(c, shape.cell_at(j)) not in banned) if banned else len(adj[i])
        need = 2 if constraints.closed and n > 1 else (1 if (c in ends or constraints.endpoints is None) else 2)
        if deg < need:
            return 'degree'
    return None


# ==============================================================================
# SEARCH
# ==============================================================================

class _Search:
    """One depth-first search over flat indices. Not reentrant."""

    def __init__(self, shape: BoardShape, move: MoveSpec, constraints: SearchConstraints,
                 budget: Budget, warnsdorff: bool = True, counting: bool = False):
        self.shape = shape
        self.n = n = shape.cell_count
        self.closed = constraints.closed
        self.counting = counting
        self.warnsdorff = warnsdorff
        self.budget = budget
        self.accept = None if counting else make_acceptor(shape, move, constraints)

        idx = shape.index
        banned = set()
        for u, v in constraints.forbidden_edges:
            a, b = idx(u), idx(v)
            banned.update(((a, b), (b, a)))
        base = adjacency(shape, move)
        adj = [[w for w in base[v] if (v, w) not in banned] for v in range(n)]
        forced: List[List[int]] = [[] for _ in range(n)]
        for u, v in constraints.forced_edges + constraints.bridges:
            a, b = idx(u), idx(v)
            forced[a].append(b)
            forced[b].append(a)
        for u, v in constraints.bridges:
            a, b = idx(u), idx(v)
            if b not in adj[a]:
                adj[a].append(b)
                adj[b].append(a)
        self.adj = [tuple(sorted(a)) for a in adj]
        self.adjset = [frozenset(a) for a in adj]
        self.forced = [tuple(sorted(f)) for f in forced]
        self.forced_pairs = [(idx(u), idx(v)) for u, v in constraints.forced_edges + constraints.bridges]

        self.target = idx(constraints.endpoints[1]) if constraints.endpoints else None
        self.free_end = not self.closed and self.target is None
        if counting:
            self.starts = [0]
        elif constraints.endpoints:
            self.starts = [idx(constraints.endpoints[0])]
        elif not self.closed:
            self.starts = list(range(n))
        else:
            self.starts = [self._closed_start()]

        self.nodes = 0
        self.count = 0
        self.found: Optional[List[int]] = None
        self._deadline = time.monotonic() + budget.seconds if budget.seconds else None

    def _closed_start(self) -> int:
        with_forced = [v for v in range(self.n) if self.forced[v]]
        if with_forced:
            return min(with_forced, key=lambda v: (-len(self.forced[v]), v))
        return min(range(self.n), key=lambda v: (len(self.adj[v]), v))

    # -- state ----------------------------------------------------------------

    def _reset(self, start: int) -> None:
        self.visited = bytearray(self.n)
        self.free = [len(a) for a in self.adj]
        self.path: List[int] = []
        self.start = start
        if self.closed and len(self.forced[start]) == 2:
            self.reserved = self.forced[start][1]
        else:
            self.reserved = self.target
        self._extend(start)

    def _extend(self, v: int) -> None:
        self.path.append(v)
        self.visited[v] = 1
        free = self.free
        for w in self.adj[v]:
            free[w] -= 1
        self.nodes += 1

    def _retract(self) -> None:
        v = self.path.pop()
        self.visited[v] = 0
        free = self.free
        for w in self.adj[v]:
            free[w] += 1

    def _out_of_budget(self) -> bool:
        if self.budget.nodes is not None and self.nodes >= self.budget.nodes:
            return True
        if self._deadline is not None and (self.nodes & 2047) == 0 and time.monotonic() > self._deadline:
            return True
        return False

    # -- moves ----------------------------------------------------------------

    def _candidates(self, v: int, prev: Optional[int]) -> List[int]:
        remaining = self.n - len(self.path)
        pending = [w for w in self.forced[v] if w != prev]
        if v == self.start and self.closed and self.reserved is not None:
            pending = [w for w in pending if w != self.reserved]
        if len(pending) > 1:
            return []
        visited = self.visited
        result = []
        for w in (pending or self.adj[v]):
            if visited[w]:
                continue
            if w == self.reserved and remaining > 1:
                continue
            fw = self.forced[w]
            if len(fw) == 2 and v not in fw:
                continue
            result.append(w)
        if self.warnsdorff:
            free = self.free
            result.sort(key=lambda w: (free[w], w))
        return result

    def _feasible(self, u: int, v: int) -> bool:
        """Every unvisited neighbour of the old end u can still be threaded."""
        if len(self.path) == self.n:
            return True
        visited, free = self.visited, self.free
        adj_v = self.adjset[v]
        adj_s = self.adjset[self.start] if self.closed else None
        for w in self.adj[u]:
            if visited[w]:
                continue
            avail = free[w] + (w in adj_v)
            if adj_s is not None and w in adj_s:
                avail += 1
            need = 1 if (w == self.target or self.free_end) else 2
            if avail < need:
                return False
        if adj_s is not None and free[self.start] == 0:
            return False
        return True

    def _leaf_ok(self) -> bool:
        path = self.path
        last = path[-1]
        if self.closed:
            if last not in self.adjset[self.start]:
                return False
            if self.counting and path[1] > last:
                return False
        elif self.target is not None and last != self.target:
            return False
        if self.forced_pairs:
            pos = [0] * self.n
            for i, v in enumerate(path):
                pos[v] = i
            for a, b in self.forced_pairs:
                gap = abs(pos[a] - pos[b])
                if gap != 1 and not (self.closed and gap == self.n - 1):
                    return False
        if self.accept is not None and not self.accept(path):
            return False
        return True

    # -- driver ---------------------------------------------------------------

    def root_moves(self) -> List[int]:
        self._reset(self.starts[0])
        return self._candidates(self.start, None)

    def run(self, first: Optional[int] = None) -> Status:
        for s in self.starts:
            self._reset(s)
            if first is not None:
                self._extend(first)
                if len(self.path) < self.n and not self._feasible(s, first):
                    return Status.EXHAUSTED
            status = self._dfs()
            if status is not Status.EXHAUSTED:
                return status
        return Status.EXHAUSTED

    def _dfs(self) -> Status:
        if len(self.path) == self.n:
            if self._leaf_ok():
                self.count += 1
                if not self.counting:
                    self.found = list(self.path)
                    return Status.FOUND
            return Status.EXHAUSTED
        prev = self.path[-2] if len(self.path) > 1 else None
        stack = [iter(self._candidates(self.path[-1], prev))]
        while stack:
            if self._out_of_budget():
                return Status.TIMED_OUT
            w = next(stack[-1], None)
            if w is None:
                stack.pop()
                if stack:
                    self._retract()
                continue
            u = self.path[-1]
            self._extend(w)
            if len(self.path) == self.n:
                if self._leaf_ok():
                    self.count += 1
                    if not self.counting:
                        self.found = list(self.path)
                        return Status.FOUND
                self._retract()
                continue
            if not self._feasible(u, w):
                self._retract()
                continue
            stack.append(iter(self._candidates(w, u)))
        return Status.EXHAUSTED


def _solve_branch(args) -> Tuple[Status, Optional[List[int]], int]:
    shape, move, constraints, budget, warnsdorff, first = args
    search = _Search(shape, move, constraints, budget, warnsdorff)
    status = search.run(first)
    return status, search.found, search.nodes


def solve(shape, move: MoveSpec = KNIGHT, constraints: Optional[SearchConstraints] = None,
          budget: Optional[Budget] = None, jobs: int = 1, warnsdorff: bool = True,
          use_prefilter: bool = True) -> SearchOutcome:
    """
    Search for a tour (or path) meeting the constraints.

    Args:
        shape: the board
        move: the leaper
        constraints: structural requirements (default: any closed tour)
        budget: node/time limits (default from settings)
        jobs: worker processes splitting the first move; the lowest-ordered
            branch that finds a tour wins, so the result matches a sequential run;
            the node limit is shared evenly across the branches
        warnsdorff: order successors by onward degree (heuristic only)
        use_prefilter: reject disconnected/parity/degree-deficient boards up front

    Returns:
        SearchOutcome: Found carries a tour that has been re-checked independently;
        Exhausted proves that no tour meets the constraints; TimedOut is inconclusive.
    """
    shape = as_shape(shape)
    constraints = constraints or CLOSED
    constraints.validate(shape, move)
    budget = budget or Budget.default()
    started = time.monotonic()

    if use_prefilter:
        reason = prefilter(shape, move, constraints)
        if reason:
            logger.debug('%s (%s): no search needed, %s', shape.label, move.label, reason)
            return SearchOutcome(Status.EXHAUSTED, None, 0, time.monotonic() - started, reason)

    search = _Search(shape, move, constraints, budget, warnsdorff)
    if jobs > 1 and len(search.starts) == 1:
        status, path, nodes = _solve_parallel(search, shape, move, constraints, budget, warnsdorff, jobs)
    else:
        status = search.run()
        path, nodes = search.found, search.nodes

    elapsed = time.monotonic() - started
    tour = None
    if status is Status.FOUND:
        tour = make_tour(shape, move, (shape.cell_at(i) for i in path), constraints.closed)
        problems = check_solution(tour, constraints)
        if problems:
            raise ConstructionError(f'search result on {shape.label} failed its re-check: {problems}')
    logger.info('%s (%s): %s after %d nodes in %.2fs', shape.label, move.label, status.value, nodes, elapsed)
    return SearchOutcome(status, tour, nodes, elapsed)


def _solve_parallel(search: _Search, shape, move, constraints, budget, warnsdorff, jobs):
    firsts = search.root_moves()
    if not firsts:
        return Status.EXHAUSTED, None, search.nodes
    share = budget.split(len(firsts))
    tasks = [(shape, move, constraints, share, warnsdorff, w) for w in firsts]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_solve_branch, tasks))
    nodes = sum(r[2] for r in results)
    for status, path, _ in results:
        if status is Status.FOUND:
            return status, path, nodes
    if any(r[0] is Status.TIMED_OUT for r in results):
        return Status.TIMED_OUT, None, nodes
    return Status.EXHAUSTED, None, nodes


def count_tours(shape, move: MoveSpec = KNIGHT, budget: Optional[Budget] = None) -> TourCount:
    """
    Number of undirected closed tours.

    Each cycle is counted once: it starts at the smallest cell and leaves
    toward the smaller of that cell's two tour neighbours.
    """
    shape = as_shape(shape)
    budget = budget or Budget.default()
    started = time.monotonic()
    if prefilter(shape, move, CLOSED):
        return TourCount(0, Status.EXHAUSTED, 0, time.monotonic() - started)
    search = _Search(shape, move, CLOSED, budget, counting=True)
    status = search.run()
    elapsed = time.monotonic() - started
    logger.info('counted %d tours on %s (%s) in %d nodes', search.count, shape.label, status.value, search.nodes)
    return TourCount(search.count, status, search.nodes, elapsed)


# ==============================================================================
# SCANS
# ==============================================================================

@dataclass
class ScanReport:
    move: MoveSpec
    max_dim: int
    preconditions: Dict
    records: List[Dict] = field(default_factory=list)

    def to_jsonl(self) -> str:
        return ''.join(json.dumps(r, separators=(',', ':')) + '\n' for r in self.records)

    def summary(self) -> Dict:
        tally: Dict[str, int] = {}
        for r in self.records:
            tally[r['verdict']] = tally.get(r['verdict'], 0) + 1
        return {'move': list(self.move.steps), 'max_dim': self.max_dim,
                'preconditions': self.preconditions, 'verdicts': tally}


def scan_preconditions(move: MoveSpec) -> Dict:
    steps = move.steps
    return {
        'gcd': math.gcd(*steps),
        'step_sum_odd': sum(steps) % 2 == 1,
        'coprime_and_odd': math.gcd(*steps) == 1 and sum(steps) % 2 == 1,
    }


def scan(move: MoveSpec, max_dim: int, budget: Optional[Budget] = None, jobs: int = 1,
         rank: Optional[int] = None, min_dim: int = 1) -> ScanReport:
    """Try every board n1 >= n2 >= ... within [min_dim, max_dim] for a closed tour."""
    rank = rank or max(2, len(move.steps))
    budget = budget or Budget.default()
    report = ScanReport(move, max_dim, scan_preconditions(move))
    for dims in itertools.combinations_with_replacement(range(max_dim, min_dim - 1, -1), rank):
        shape = BoardShape(dims)
        outcome = solve(shape, move, CLOSED, budget, jobs=jobs)
        record = {'shape': list(dims), 'move': list(move.steps), 'verdict': outcome.status.value,
                  'nodes': outcome.nodes_expanded}
        if outcome.reason:
            record['reason'] = outcome.reason
        report.records.append(record)
    logger.info('scan (%s) up to %d: %s', move.label, max_dim, report.summary()['verdicts'])
    return report
