"""Three-dimensional constructions: plans, doubling, lateral splices, the sweep."""

import itertools

from app.analysis import CertifiedTour, find_sites, is_layer_pair, verify
from app.board import KNIGHT, BoardShape, OpenPath
from app.construct2d import construct_open_for_doubling
from app.construct3d import (chain, certify, construct_3d, double_open, orient, plan_3d, splice_lateral,
                             stack_layers)
from app.errors import IllegalSplice, NotBisited, NotTourableError, PreconditionError, ShapeError
from app.graph import classify
from checks import expect_error, run_tests, shared_store

STORE = shared_store()

PATH_3X4 = ((0, 0), (1, 2), (2, 0), (0, 1), (1, 3), (2, 1), (0, 2), (2, 3), (1, 1), (0, 3), (2, 2), (1, 0))


def prism(label):
    return STORE.get(f'base_{label}_prism')


def test_plan_families():
    cases = {
        (4, 4, 4): ('prism-4x4', (2, 2)),
        (5, 6, 2): ('face', (0, 1, 2)),
        (5, 5, 2): ('doubling', (2,)),
        (7, 5, 4): ('doubling', (4,)),
        (6, 3, 3): ('base-3x3x6', ()),
        (3, 8, 3): ('splice-3x3x8', ()),
        (9, 4, 2): ('chain-4x2', (3, 3, 3)),
        (8, 3, 2): ('chain-3x2', (4, 4)),
        (7, 4, 3): ('prism-4x3', (3, 2, 2)),
        (4, 3, 2): ('prism-4x3', ()),
        (7, 4, 2): ('chain-4x2', (4, 3)),
    }
    for dims, (family, parts) in cases.items():
        plan = plan_3d(dims)
        assert (plan.family, plan.parts) == (family, parts), dims
        assert plan.dims == tuple(sorted(dims, reverse=True))
    assert plan_3d((5, 6, 2)).to_dict() == {'family': 'face', 'dims': [6, 5, 2], 'parts': [0, 1, 2]}


def test_plan_rejects_untourable_boards():
    for dims in [(3, 3, 3), (4, 2, 2), (3, 3, 2), (5, 5, 5)]:
        expect_error(NotTourableError, plan_3d, dims)


def test_double_open():
    path = construct_open_for_doubling(5, 5, STORE)
    t = double_open(path)
    assert t.shape.dims == (5, 5, 2)
    assert verify(t).valid
    assert find_sites(t, 2).bisited
    bad = OpenPath(BoardShape((3, 4)), KNIGHT, PATH_3X4)
    expect_error(PreconditionError, double_open, bad)


def test_double_open_for_odd_sides():
    sides = (5, 7, 9, 11)
    for n in sides:
        for m in sides:
            ct = certify(double_open(construct_open_for_doubling(n, m, STORE)))
            assert verify(ct.tour).valid, (n, m)
            assert ct.bisited and ct.check(), (n, m)


def test_splice_lateral():
    t = prism('4x3x2').tour
    joined = splice_lateral(t, t, 0)
    assert joined.shape.dims == (8, 3, 2)
    assert verify(joined).valid
    assert len(joined.cells) == 2 * len(t.cells)


def test_splice_lateral_with_explicit_deletions():
    t = prism('4x3x2').tour
    joined = splice_lateral(t, t, 0)
    # Recover the splice the search picked and replay it explicitly
    cut = {frozenset(e) for e in t.edges()}
    left_edges = {frozenset(e) for e in joined.edges() if all(c[0] < 4 for c in e)}
    deleted = next(e for e in cut if e not in left_edges)
    right_edges = {frozenset((c[0] - 4,) + c[1:] for c in e) for e in joined.edges() if all(c[0] >= 4 for c in e)}
    deleted_right = next(e for e in cut if e not in right_edges)
    replay = splice_lateral(t, t, 0, deletions=(tuple(sorted(deleted)), tuple(sorted(deleted_right))))
    assert verify(replay).valid
    kept = {frozenset(e) for e in replay.edges() if all(c[0] < 4 for c in e)}
    assert kept == left_edges


def test_illegal_splices():
    t = prism('4x3x2').tour
    edge = t.edges()[0]
    e = expect_error(IllegalSplice, splice_lateral, t, t, 0, deletions=(((0, 0, 0), (0, 0, 1)), edge))
    assert 'not an edge' in e.message
    expect_error(IllegalSplice, splice_lateral, t, t, 0, deletions=(edge, edge),
                 additions=(((0, 0, 0), (0, 0, 1)), ((1, 0, 0), (1, 0, 1))))
    expect_error(ShapeError, splice_lateral, t, prism('4x4x2').tour, 0)


def test_chain_keeps_a_certificate():
    block = prism('4x3x2')
    ct = chain([block, block, block], axis=0)
    assert ct.tour.shape.dims == (12, 3, 2)
    assert verify(ct.tour).valid
    assert ct.bisited and ct.check()


def test_orient():
    ct = prism('4x3x2')
    moved = orient(ct, (2, 4, 3))
    assert moved.tour.shape.dims == (2, 4, 3)
    assert verify(moved.tour).valid
    assert moved.check()
    assert orient(ct, (4, 3, 2)) is ct
    expect_error(ShapeError, orient, ct, (4, 4, 2))


def test_stack_layers_lines_up_sites():
    for label, height in (('4x4x2', 2), ('4x3x3', 3)):
        block = prism(label)
        assert is_layer_pair(block.sites, 2, height)
        ct = stack_layers([block, block, block], axis=2)
        assert ct.tour.shape.dims == block.tour.shape.dims[:2] + (3 * height,)
        assert verify(ct.tour).valid, label
        assert ct.bisited and ct.check(), label
        assert is_layer_pair(ct.sites, 2, 3 * height), label
    expect_error(NotBisited, stack_layers, [prism('4x4x2'), CertifiedTour(prism('4x4x2').tour)], 2)


def test_layered_families_stay_certified():
    for dims in [(4, 4, 5), (5, 4, 4), (7, 4, 3), (4, 3, 6), (5, 5, 4), (7, 7, 4)]:
        ct = construct_3d(*dims, store=STORE)
        assert ct.tour.shape.dims == dims
        assert verify(ct.tour).valid, dims
        assert ct.bisited and ct.check(), dims


def test_construct_3d_sweep():
    top = 10
    for dims in itertools.combinations_with_replacement(range(top, 1, -1), 3):
        if not classify(dims).tourable:
            expect_error(NotTourableError, construct_3d, *dims, store=STORE)
            continue
        ct = construct_3d(*dims, store=STORE)
        assert ct.tour.shape.dims == dims
        assert verify(ct.tour).valid, dims
        assert ct.bisited and ct.check(), dims


def test_construct_3d_keeps_axis_order():
    for dims in itertools.permutations((6, 3, 2)):
        ct = construct_3d(*dims, store=STORE)
        assert ct.tour.shape.dims == dims
        assert verify(ct.tour).valid, dims


def test_construct_3d_special_boards():
    for dims in [(3, 3, 6), (3, 3, 8), (3, 4, 4), (5, 5, 4)]:
        ct = construct_3d(*dims, store=STORE)
        assert verify(ct.tour).valid, dims
        assert ct.bisited, dims


if __name__ == '__main__':
    run_tests(globals())
