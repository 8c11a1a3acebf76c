"""Stacking, the any-dimension constructor and leaper lifting."""

import itertools
import random

from app.analysis import CertifiedTour, Site, find_ab_sites, find_sites, make_site, verify
from app.board import KNIGHT, BoardShape, MoveSpec, Tour, edge_key
from app.constructnd import construct, lift_1b, lift_ab, search_ab_base, stack
from app.errors import InsufficientSites, LayerBudget, NotBisited, NotTourableError, PreconditionError
from app.graph import classify
from app.solver import Budget, SearchConstraints, solve
from checks import expect_error, run_tests, shared_store

STORE = shared_store()
BUDGET = Budget.default().deterministic()

WORKED_E = ((0, 2), (1, 4))
WORKED_F = ((0, 4), (1, 2))


def worked_tour():
    outcome = solve((5, 6), KNIGHT, SearchConstraints(forced_edges=(WORKED_E, WORKED_F), bisited_distance=2),
                    BUDGET)
    assert outcome.found
    return outcome.tour


# ==============================================================================
# STACK
# ==============================================================================

def test_stack_of_one_layer_is_the_input():
    ct = STORE.get('base_4x3x2_prism')
    assert stack(ct, 1) is ct
    expect_error(PreconditionError, stack, ct, 0)


def test_stack_joins_layers_through_the_site():
    t = worked_tour()
    site = make_site(WORKED_E, WORKED_F, 2)
    other = next(s for s in find_sites(t, 2).sites if s.edge_disjoint(site))
    ct = stack(t, 2, sites=[site, other])
    assert ct.tour.shape.dims == (5, 6, 2)
    assert verify(ct.tour).valid
    edges = ct.tour.edge_set()
    assert edge_key((0, 2, 0), (0, 4, 1)) in edges
    assert edge_key((1, 4, 0), (1, 2, 1)) in edges
    assert edge_key((0, 2, 0), (1, 4, 0)) not in edges
    assert edge_key((0, 4, 1), (1, 2, 1)) not in edges


def test_stack_preserves_bisitedness():
    top = 6
    for label in ('4x3x2', '4x4x2', '6x3x3'):
        base = STORE.get(f'base_{label}_prism')
        for p in range(2, top + 1):
            ct = stack(base, p)
            assert verify(ct.tour).valid, (label, p)
            assert len(ct.tour.cells) == p * len(base.tour.cells)
            assert ct.bisited and ct.check(), (label, p)
            assert find_sites(ct.tour, 2).bisited


def test_stack_repeatedly():
    ct = STORE.get('base_4x3x2_prism')
    for p in (2, 3):
        ct = stack(ct, p)
    assert ct.tour.shape.dims == (4, 3, 2, 2, 3)
    assert verify(ct.tour).valid


def test_stack_along_a_chosen_axis():
    ct = stack(STORE.get('base_4x3x2_prism'), 3, axis=0)
    assert ct.tour.shape.dims == (3, 4, 3, 2)
    assert verify(ct.tour).valid
    assert ct.check()


def test_stack_needs_two_disjoint_sites():
    t = worked_tour()
    site = make_site(WORKED_E, WORKED_F, 2)
    expect_error(NotBisited, stack, t, 2, [site])
    expect_error(NotBisited, stack, t, 2, [site, site])
    bogus = Site(((0, 0), (1, 1)), ((0, 2), (1, 3)), 2)
    expect_error(NotBisited, stack, CertifiedTour(t), 2, [site, bogus])


# ==============================================================================
# CONSTRUCT
# ==============================================================================

def test_construct_examples():
    for dims in [(4, 3, 2, 2), (5, 6, 1), (5, 1, 6), (3, 4, 2, 3), (2, 3, 2, 4)]:
        t = construct(dims, STORE)
        assert t.shape.dims == dims
        assert verify(t).valid, dims


def test_construct_rejects_untourable_boards():
    for dims in [(7, 5, 3, 3), (3, 3, 3, 2), (4, 3, 1), (4, 2, 2, 1), (9,)]:
        expect_error(NotTourableError, construct, dims, STORE)


def test_construct_sweep_rank_4():
    top = 5
    for dims in itertools.product(range(2, top + 1), repeat=4):
        if not classify(dims).tourable:
            continue
        t = construct(dims, STORE)
        assert t.shape.dims == dims
        assert verify(t).valid, dims


def test_construct_random_shapes():
    rng = random.Random(7)
    count, cap = 200, 20000
    done = 0
    while done < count:
        rank = rng.randint(4, 6)
        dims = tuple(rng.randint(1, 8) for _ in range(rank))
        cells = 1
        for d in dims:
            cells *= d
        if cells > cap:
            continue
        done += 1
        if classify(dims).tourable:
            assert verify(construct(dims, STORE)).valid, dims
        else:
            expect_error(NotTourableError, construct, dims, STORE)


def test_construct_is_deterministic():
    assert construct((6, 5, 4), STORE) == construct((6, 5, 4), STORE)
    assert construct((4, 3, 2, 2), STORE).cells == construct((4, 3, 2, 2), STORE).cells


# ==============================================================================
# LIFTING
# ==============================================================================

def test_lift_1b():
    t = solve((5, 6), budget=BUDGET).tour
    ct = lift_1b(t, 2, [2])
    assert ct.tour.shape.dims == (5, 6, 2)
    assert verify(ct.tour).valid
    deeper = lift_1b(t, 2, [2, 3])
    assert deeper.tour.shape.dims == (5, 6, 2, 3)
    assert verify(deeper.tour).valid


def test_lift_1b_preconditions():
    small = Tour(BoardShape((5, 4)), KNIGHT, ((0, 0), (1, 2)))
    expect_error(PreconditionError, lift_1b, small, 2, [2])
    t = solve((5, 6), budget=BUDGET).tour
    expect_error(PreconditionError, lift_1b, t, 3, [2])
    broken = t.with_cells(t.cells[:-1] + (t.cells[0],))
    expect_error(PreconditionError, lift_1b, broken, 2, [2])


def ab_base(a, b, dims):
    constraints = SearchConstraints(min_ab_sites=(a, b, 4))
    return solve(dims, MoveSpec((a, b)), constraints, BUDGET)


def test_lift_ab_knight():
    outcome = ab_base(1, 2, (8, 8))
    assert outcome.found
    assert len(find_ab_sites(outcome.tour, 1, 2)) >= 4
    for p in (4, 5):
        ct = lift_ab(outcome.tour, 1, 2, p)
        assert ct.tour.shape.dims == (8, 8, p)
        assert verify(ct.tour).valid, p
        assert len(ct.sites) >= 4
        assert ct.check()


def test_lift_ab_preconditions():
    t = solve((6, 6), budget=BUDGET).tour
    e = expect_error(LayerBudget, lift_ab, t, 1, 2, 3)
    assert e.details == {'p': 3, 'min': 4}
    expect_error(InsufficientSites, lift_ab, t, 1, 2, 4, sites=[])
    expect_error(PreconditionError, lift_ab, t, 2, 4, 7)
    expect_error(PreconditionError, lift_ab, t, 2, 3, 6)


def test_lift_ab_needs_four_separate_sites():
    base = ab_base(1, 2, (8, 8)).tour
    sites = find_ab_sites(base, 1, 2)
    e = expect_error(InsufficientSites, lift_ab, base, 1, 2, 4, sites=sites[:3])
    assert e.details == {'found': 3}
    repeated = [sites[0], sites[0], sites[1], sites[2]]
    expect_error(PreconditionError, lift_ab, base, 1, 2, 4, sites=repeated)


def test_lift_ab_wider_leaper():
    search = search_ab_base(2, 3, max_side=10, budget=Budget(nodes=100_000))
    assert search.tried
    print(f'(2,3) base search: {search.to_dict()}')
    if search.found:
        assert len(find_ab_sites(search.tour, 2, 3)) >= 4
        ct = lift_ab(search.tour, 2, 3, 6)
        assert ct.tour.shape.dims == search.tour.shape.dims + (6,)
        assert verify(ct.tour).valid
        assert len(ct.sites) >= 4
        assert ct.check()
    else:
        assert all(r['status'] in ('TimedOut', 'Exhausted') for r in search.tried)
        assert search.bound == search.tried[-1]['shape']
        assert search.to_dict()['found'] is False



if __name__ == '__main__':
    run_tests(globals())
