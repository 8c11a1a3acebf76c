"""
Command-line interface: `flask tours ...` or `python kt.py ...`.

Results go to stdout as JSON (tours as canonical tour JSON); errors go to
stderr as {"error": code, "message": ...} with a nonzero exit status.
"""

import json
import sys
from typing import Optional, Tuple

import click
from flask import current_app
from flask.cli import AppGroup

from .analysis import find_sites, verify
from .base_cases import BaseCaseStore, bootstrap as run_bootstrap, load_entries, seed_edges
from .board import BoardShape, KNIGHT, MoveSpec, load_tour, save_tour, tour_to_json
from .construct2d import is_seeded
from .constructnd import construct as construct_tour
from .errors import BootstrapIncomplete, ConstraintError, TourError
from .graph import classify, connectivity as graph_connectivity
from .render import render as render_tour
from .solver import Budget, SearchConstraints, count_tours, scan as run_scan, solve as run_solve

tours_cli = AppGroup('tours', help="Knight's tours on boards of any dimension.")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


# =============================================================================
# HELPERS
# =============================================================================

def _fail(e: TourError, code: int = EXIT_NEGATIVE):
    click.echo(json.dumps(e.to_dict()), err=True)
    sys.exit(code)


def _emit(payload):
    click.echo(json.dumps(payload, separators=(',', ':')))


def _write_or_echo(tour, out: Optional[str], extra=None):
    if out:
        save_tour(tour, out, extra)
    else:
        click.echo(tour_to_json(tour, extra))


def _parse_cell(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(','))
    except ValueError:
        raise ConstraintError(f'bad cell {text!r}; expected comma-separated integers')


def _parse_pair(text: str) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    if ':' not in text:
        raise ConstraintError(f'bad cell pair {text!r}; expected x1,y1:x2,y2')
    a, b = text.split(':', 1)
    return _parse_cell(a), _parse_cell(b)


def _store() -> BaseCaseStore:
    return BaseCaseStore(current_app.config.get('KT_CACHE_DIR'), autobuild=False)


def _budget(nodes: Optional[int], secs: Optional[float], deterministic: bool) -> Budget:
    base = Budget.default()
    budget = Budget(nodes if nodes is not None else base.nodes, secs if secs is not None else base.seconds)
    return budget.deterministic() if deterministic else budget


budget_options = [
    click.option('--budget-nodes', type=int, default=None, help='Node limit per search, shared across --jobs branches'),
    click.option('--budget-secs', type=float, default=None, help='Time limit per search'),
    click.option('--deterministic', is_flag=True, help='Drop the time limit for reproducible output'),
    click.option('--jobs', type=int, default=1, show_default=True, help='Worker processes'),
]


def with_budget(fn):
    for option in reversed(budget_options):
        fn = option(fn)
    return fn


# =============================================================================
# CLASSIFICATION
# =============================================================================

@tours_cli.command('exists')
@click.argument('shape')
def exists(shape):
    """Does SHAPE admit a closed knight's tour? Exit 0 yes, 1 no, 2 bad input."""
    try:
        verdict = classify(BoardShape.parse(shape))
    except TourError as e:
        _fail(e, EXIT_USAGE)
    _emit(verdict.to_dict())
    sys.exit(EXIT_OK if verdict.tourable else EXIT_NEGATIVE)


@tours_cli.command('connectivity')
@click.argument('shape')
@click.option('--move', default='1,2', show_default=True)
def connectivity(shape, move):
    """Connectivity of the leaper graph on SHAPE."""
    try:
        report = graph_connectivity(BoardShape.parse(shape), MoveSpec.parse(move))
    except TourError as e:
        _fail(e, EXIT_USAGE)
    _emit(report.to_dict())


# =============================================================================
# CONSTRUCTION AND ANALYSIS
# =============================================================================

@tours_cli.command('construct')
@click.argument('shape')
@click.option('-o', '--out', type=click.Path(dir_okay=False), default=None)
def construct(shape, out):
    """Construct a closed tour on SHAPE from the cached base cases."""
    try:
        board = BoardShape.parse(shape)
    except TourError as e:
        _fail(e, EXIT_USAGE)
    store = _store()
    missing = store.missing()
    try:
        if missing:
            raise BootstrapIncomplete(f'{len(missing)} base cases missing from {store.cache_dir}; run bootstrap',
                                      {'missing': missing})
        tour = construct_tour(board, store)
    except TourError as e:
        _fail(e)
    _write_or_echo(tour, out)


@tours_cli.command('verify')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
def verify_cmd(path):
    """Check a tour file. Exit 0 valid, 1 invalid."""
    try:
        tour = load_tour(path)
    except TourError as e:
        _fail(e, EXIT_USAGE)
    result = verify(tour)
    _emit(result.to_dict())
    sys.exit(EXIT_OK if result.valid else EXIT_NEGATIVE)


@tours_cli.command('sites')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--distance', type=int, default=2, show_default=True)
@click.option('--full', is_flag=True, help='List every site, not just the count and certificate')
def sites(path, distance, full):
    """Site inventory of a tour file."""
    try:
        inventory = find_sites(load_tour(path), distance)
    except TourError as e:
        _fail(e, EXIT_USAGE)
    payload = inventory.to_dict()
    if not full:
        cert = inventory.certificate()
        payload['sites'] = [s.to_dict() for s in cert] if cert else []
    _emit(payload)


@tours_cli.command('render')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
def render(path):
    """Print a tour file layer by layer, topmost layer first."""
    try:
        click.echo(render_tour(load_tour(path)), nl=False)
    except TourError as e:
        _fail(e, EXIT_USAGE)


# =============================================================================
# SEARCH
# =============================================================================

@tours_cli.command('solve')
@click.argument('shape')
@click.option('--move', default='1,2', show_default=True)
@click.option('--open', 'open_path', is_flag=True, help='Search for an open path')
@click.option('--endpoints', default=None, help='x1,y1:x2,y2 (implies --open)')
@click.option('--force-edge', multiple=True, help='u:v edge the tour must use (repeatable)')
@click.option('--forbid-edge', multiple=True, help='u:v edge the tour must avoid (repeatable)')
@click.option('--seeded', is_flag=True, help='Force the two corner seed edges (2D)')
@click.option('--bisited', type=int, default=None, help='Require two edge-disjoint sites at this distance')
@click.option('--no-warnsdorff', is_flag=True)
@click.option('-o', '--out', type=click.Path(dir_okay=False), default=None)
@with_budget
def solve(shape, move, open_path, endpoints, force_edge, forbid_edge, seeded, bisited, no_warnsdorff, out,
          budget_nodes, budget_secs, deterministic, jobs):
    """Search SHAPE for a tour meeting the given constraints. Exit 0 found, 1 otherwise."""
    try:
        board = BoardShape.parse(shape)
        leaper = MoveSpec.parse(move)
        forced = [_parse_pair(e) for e in force_edge]
        if seeded:
            if board.rank != 2:
                raise ConstraintError('--seeded applies to 2D boards')
            forced += list(seed_edges(*board.dims))
        ends = _parse_pair(endpoints) if endpoints else None
        constraints = SearchConstraints(
            closed=not (open_path or ends),
            forced_edges=tuple(forced),
            forbidden_edges=tuple(_parse_pair(e) for e in forbid_edge),
            endpoints=ends,
            bisited_distance=bisited,
        )
    except TourError as e:
        _fail(e, EXIT_USAGE)
    try:
        outcome = run_solve(board, leaper, constraints, _budget(budget_nodes, budget_secs, deterministic),
                            jobs=jobs, warnsdorff=not no_warnsdorff)
    except TourError as e:
        _fail(e, EXIT_USAGE)
    payload = outcome.to_dict()
    if outcome.found:
        if board.rank == 2 and leaper == KNIGHT and constraints.closed:
            payload['seeded'] = is_seeded(outcome.tour)
        if out:
            save_tour(outcome.tour, out)
            payload['out'] = out
        else:
            payload['tour'] = json.loads(tour_to_json(outcome.tour))
    _emit(payload)
    sys.exit(EXIT_OK if outcome.found else EXIT_NEGATIVE)


@tours_cli.command('count')
@click.argument('shape')
@click.option('--move', default='1,2', show_default=True)
@with_budget
def count(shape, move, budget_nodes, budget_secs, deterministic, jobs):
    """Count the undirected closed tours on a small board."""
    try:
        tally = count_tours(BoardShape.parse(shape), MoveSpec.parse(move),
                            _budget(budget_nodes, budget_secs, deterministic))
    except TourError as e:
        _fail(e, EXIT_USAGE)
    _emit({'shape': shape, 'count': tally.count, 'status': tally.status.value,
           'complete': tally.complete, 'nodes_expanded': tally.nodes_expanded})
    sys.exit(EXIT_OK if tally.complete else EXIT_NEGATIVE)


@tours_cli.command('scan')
@click.option('--move', default='1,2', show_default=True)
@click.option('--max', 'max_dim', type=int, required=True, help='Largest side length')
@click.option('--min', 'min_dim', type=int, default=1, show_default=True, help='Smallest side length')
@click.option('--rank', type=int, default=None, help='Number of axes (default: max(2, steps))')
@click.option('-o', '--out', type=click.Path(dir_okay=False), default=None, help='Write JSON lines here')
@click.option('--xlsx', type=click.Path(dir_okay=False), default=None, help='Export the verdict grid')
@click.option('--save', is_flag=True, help='Store the records in the database')
@with_budget
def scan(move, max_dim, min_dim, rank, out, xlsx, save, budget_nodes, budget_secs, deterministic, jobs):
    """Try every board up to --max for a closed tour of the given leaper."""
    try:
        report = run_scan(MoveSpec.parse(move), max_dim, _budget(budget_nodes, budget_secs, deterministic),
                          jobs=jobs, rank=rank, min_dim=min_dim)
    except TourError as e:
        _fail(e, EXIT_USAGE)
    if out:
        with open(out, 'w') as fh:
            fh.write(report.to_jsonl())
    else:
        click.echo(report.to_jsonl(), nl=False)
    summary = report.summary()
    if xlsx:
        from .reports import export_scan_table
        summary['xlsx'] = export_scan_table(report, xlsx)
    if save:
        from .reports import save_scan_report
        summary['scan_id'] = save_scan_report(report)
    click.echo(json.dumps(summary), err=True)


# =============================================================================
# CACHE
# =============================================================================

@tours_cli.command('bootstrap')
@click.option('--manifest', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Manifest listing the entries to build (default: the built-in list)')
@click.option('--no-golden', is_flag=True, help='Skip the exhaustive 3x10 tour count')
@with_budget
def bootstrap(manifest, no_golden, budget_nodes, budget_secs, deterministic, jobs):
    """Regenerate every missing base case. Exit 0 when all are present."""
    store = _store()
    try:
        entries = load_entries(manifest) if manifest else None
        report = run_bootstrap(store, entries, _budget(budget_nodes, budget_secs, deterministic),
                               jobs=jobs, golden=not no_golden)
    except TourError as e:
        _fail(e)
    _emit(report.to_dict())
    sys.exit(EXIT_OK if report.ok else EXIT_NEGATIVE)
