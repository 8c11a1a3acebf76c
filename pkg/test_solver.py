"""Constrained search: oracle agreement, constraints, counting and scans."""

import itertools
import json

from app.analysis import verify
from app.base_cases import seed_edges
from app.board import KNIGHT, BoardShape, MoveSpec
from app.construct2d import is_seeded
from app.errors import ConstraintError
from app.graph import classify
from app.solver import (Budget, SearchConstraints, SiteRequirement, Status, check_solution, count_tours,
                        prefilter, scan, solve)
from checks import expect_error, run_tests

BUDGET = Budget.default().deterministic()


def test_small_exclusion_is_exhausted():
    outcome = solve((4, 3), budget=BUDGET)
    assert outcome.status is Status.EXHAUSTED
    assert outcome.tour is None


def test_3x10_is_found():
    outcome = solve((3, 10), budget=BUDGET)
    assert outcome.found
    assert verify(outcome.tour).valid
    assert outcome.nodes_expanded > 0


def test_4x2x2_is_exhausted():
    assert solve((4, 2, 2), budget=BUDGET).status is Status.EXHAUSTED


def test_prefilter_reasons():
    assert solve((5, 5), budget=BUDGET).reason == 'parity'
    assert solve((3, 3), budget=BUDGET).reason == 'disconnected'
    assert prefilter(BoardShape((5, 6)), KNIGHT, SearchConstraints()) is None


def test_oracle_agrees_with_classification_2d():
    for n in range(1, 7):
        for m in range(1, n + 1):
            if n * m < 3:
                continue
            outcome = solve((n, m), budget=BUDGET)
            assert outcome.status is not Status.TIMED_OUT, (n, m)
            assert outcome.found == classify((n, m)).tourable, (n, m)


def test_oracle_agrees_with_classification_3d():
    for dims in itertools.combinations_with_replacement(range(6, 1, -1), 3):
        if dims[0] * dims[1] * dims[2] > 24:
            continue
        outcome = solve(dims, budget=BUDGET)
        assert outcome.status is not Status.TIMED_OUT, dims
        assert outcome.found == classify(dims).tourable, dims


def test_warnsdorff_is_only_a_heuristic():
    for dims in [(4, 3), (5, 4), (6, 3), (3, 3, 2)]:
        plain = solve(dims, budget=BUDGET, warnsdorff=False)
        assert plain.status == solve(dims, budget=BUDGET).status, dims


def test_deterministic_mode_repeats_itself():
    first = solve((6, 6), budget=BUDGET)
    second = solve((6, 6), budget=BUDGET)
    assert first.tour == second.tour
    assert first.nodes_expanded == second.nodes_expanded


def test_parallel_split_returns_the_sequential_tour():
    sequential = solve((5, 6), budget=BUDGET)
    parallel = solve((5, 6), budget=BUDGET, jobs=2)
    assert parallel.tour == sequential.tour


def test_seeded_search():
    constraints = SearchConstraints(forced_edges=seed_edges(5, 6))
    outcome = solve((5, 6), KNIGHT, constraints, BUDGET)
    assert outcome.found
    assert is_seeded(outcome.tour)


def test_forbidden_edge_is_avoided():
    first = solve((6, 6), budget=BUDGET)
    edge = next(e for e in sorted(first.tour.edge_set()) if (2, 2) in e)
    outcome = solve((6, 6), KNIGHT, SearchConstraints(forbidden_edges=(edge,)), BUDGET)
    assert outcome.found
    assert edge not in outcome.tour.edge_set()
    assert check_solution(outcome.tour, SearchConstraints(forbidden_edges=(edge,))) == []


def test_open_path_with_endpoints():
    constraints = SearchConstraints(closed=False, endpoints=((0, 0), (1, 0)))
    outcome = solve((3, 4), KNIGHT, constraints, BUDGET)
    assert outcome.found
    assert outcome.tour.start == (0, 0) and outcome.tour.end == (1, 0)
    assert verify(outcome.tour).valid
    assert check_solution(outcome.tour, constraints) == []


def test_open_path_without_endpoints():
    outcome = solve((3, 4), KNIGHT, SearchConstraints(closed=False), BUDGET)
    assert outcome.found
    assert not outcome.tour.closed


def test_site_requirements():
    constraints = SearchConstraints(bisited_distance=2,
                                    required_sites=(SiteRequirement(2, (0, 0), 3),))
    outcome = solve((6, 6), KNIGHT, constraints, BUDGET)
    assert outcome.found
    assert check_solution(outcome.tour, constraints) == []


def test_malformed_constraints():
    expect_error(ConstraintError, SearchConstraints, closed=True, endpoints=((0, 0), (1, 2)))
    edge = ((0, 0), (1, 2))
    expect_error(ConstraintError, SearchConstraints, forced_edges=(edge,), forbidden_edges=(edge,))
    expect_error(ConstraintError, solve, (5, 6), KNIGHT, SearchConstraints(forced_edges=(((0, 0), (0, 1)),)),
                 BUDGET)
    expect_error(ConstraintError, solve, (5, 6), KNIGHT, SearchConstraints(forced_edges=(((0, 0), (9, 9)),)),
                 BUDGET)


def test_constraints_round_trip():
    constraints = SearchConstraints(closed=False, endpoints=((3, 2), (3, 1)), bridges=(((1, 0), (2, 0)),),
                                    forced_edges=(((0, 0), (1, 2)),), bisited_distance=2)
    assert SearchConstraints.from_dict(json.loads(json.dumps(constraints.to_dict()))) == constraints


def test_budget_runs_out():
    outcome = solve((8, 8), budget=Budget(nodes=5), warnsdorff=False)
    assert outcome.status in (Status.TIMED_OUT, Status.FOUND)
    tiny = solve((6, 4), budget=Budget(nodes=3))
    assert tiny.status is Status.TIMED_OUT


def test_parallel_branches_share_the_node_limit():
    assert Budget(nodes=10).split(4) == Budget(nodes=3)
    assert Budget(nodes=2).split(4) == Budget(nodes=1)
    assert Budget().split(4) == Budget()
    outcome = solve((8, 8), budget=Budget(nodes=40), jobs=2, warnsdorff=False)
    assert outcome.status is Status.TIMED_OUT
    assert outcome.nodes_expanded <= 42


def test_count_tours():
    assert count_tours((4, 3), budget=BUDGET).count == 0
    assert count_tours((3, 3), budget=BUDGET).count == 0
    tally = count_tours((3, 10), budget=BUDGET)
    assert tally.complete
    assert tally.count > 0
    assert count_tours((3, 10), budget=BUDGET).count == tally.count


def test_scan_matches_classification():
    report = scan(KNIGHT, 6, BUDGET)
    assert report.records
    for record in report.records:
        if record['verdict'] != 'TimedOut':
            assert (record['verdict'] == 'Found') == classify(record['shape']).tourable, record
    lines = report.to_jsonl().splitlines()
    assert len(lines) == len(report.records)
    assert set(json.loads(lines[0])) >= {'shape', 'move', 'verdict'}


def test_scan_of_a_disconnected_leaper():
    report = scan(MoveSpec((2, 2)), 5, BUDGET)
    assert all(r['verdict'] == 'Exhausted' and 'reason' in r for r in report.records)
    assert report.summary()['preconditions']['gcd'] == 2


if __name__ == '__main__':
    run_tests(globals())
