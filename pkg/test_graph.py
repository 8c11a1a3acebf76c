"""Knight graph: adjacency, connectivity, colouring and classification."""

import itertools

from app.board import KNIGHT, BoardShape, MoveSpec
from app.errors import MoveError, NotBipartiteArgument, UnreliablePrediction, UnsupportedMove
from app.graph import (DisjointSet, Reason, adjacency, classify, color_imbalance, connectivity, degree,
                       knuth_connectivity_predicted, leaper_connectivity_predicted, neighbors)
from checks import expect_error, run_tests


def test_adjacency_3x3():
    shape = BoardShape((3, 3))
    adj = adjacency(shape, KNIGHT)
    assert adj[4] == ()
    assert adj[0] == (5, 7)
    assert neighbors(shape, KNIGHT, (0, 0)) == {(1, 2), (2, 1)}
    assert degree(shape, KNIGHT, (1, 1)) == 0


def test_adjacency_matches_neighbors():
    for dims in [(5, 6), (4, 3, 2), (3, 3, 3, 2)]:
        shape = BoardShape(dims)
        adj = adjacency(shape, KNIGHT)
        for i, cell in enumerate(shape.cells()):
            expected = sorted(shape.index(v) for v in neighbors(shape, KNIGHT, cell))
            assert list(adj[i]) == expected, (dims, cell)


def test_disjoint_set():
    dsu = DisjointSet(4)
    assert dsu.union(0, 1)
    assert not dsu.union(1, 0)
    assert dsu.union(2, 3)
    assert dsu.num_components == 2
    assert dsu.find(0) != dsu.find(2)


def test_connectivity():
    report = connectivity((3, 3))
    assert not report.connected
    assert report.component_count == 2
    assert report.witness == ((0, 0), (1, 1))
    assert connectivity((5, 6)).connected
    assert connectivity((3, 4)).connected
    assert not connectivity((2, 8)).connected
    assert not connectivity((6, 6), MoveSpec((2, 2))).connected


def test_knuth_criterion_agrees_with_search():
    top = 5
    for b in range(2, top + 1):
        for a in range(1, b):
            move = MoveSpec((a, b))
            for n in range(1, 2 * b + 5):
                for m in range(1, a + b + 5):
                    if n * m < 2:
                        continue
                    predicted = knuth_connectivity_predicted(a, b, n, m)
                    assert predicted == connectivity((n, m), move).connected, (a, b, n, m)


def test_knuth_criterion_is_tight():
    # (1,2): sides 3 and 4 are the smallest connected board
    assert knuth_connectivity_predicted(1, 2, 4, 3)
    assert not knuth_connectivity_predicted(1, 2, 3, 3)
    assert not knuth_connectivity_predicted(1, 2, 8, 2)
    assert not knuth_connectivity_predicted(1, 3, 20, 20)
    assert not knuth_connectivity_predicted(2, 4, 20, 20)


def test_leaper_prediction():
    assert leaper_connectivity_predicted(KNIGHT, (8, 8, 8))
    assert leaper_connectivity_predicted(KNIGHT, (8, 8))
    assert not leaper_connectivity_predicted(MoveSpec((1, 3)), (8, 8))
    assert not leaper_connectivity_predicted(MoveSpec((1, 1, 1)), (8, 8, 8))
    expect_error(UnreliablePrediction, leaper_connectivity_predicted, KNIGHT, (3, 8))
    expect_error(MoveError, leaper_connectivity_predicted, MoveSpec((1, 2, 3)), (9, 9))


def test_leaper_prediction_on_large_boards():
    # Checked against graph search where the formula claims to be reliable
    for steps, dims in [((1, 2), (4, 5)), ((1, 3), (6, 6)), ((2, 3), (6, 7)), ((1, 2, 3), (6, 6, 6)),
                        ((1, 1, 2), (4, 4, 4))]:
        move = MoveSpec(steps)
        assert leaper_connectivity_predicted(move, dims) == connectivity(dims, move).connected, steps


def test_color_imbalance():
    assert color_imbalance((5, 5)) == 1
    assert color_imbalance((5, 6)) == 0
    assert color_imbalance((3, 3, 3)) == 1
    expect_error(NotBipartiteArgument, color_imbalance, (5, 6), MoveSpec((1, 3)))


def test_classify_two_dimensions():
    assert classify((5, 6)).tourable
    assert classify((3, 10)).tourable
    assert classify((8, 8)).tourable
    assert classify((4, 3)).reason is Reason.SMALL_CASE_EXCLUSION
    assert classify((3, 8)).reason is Reason.SMALL_CASE_EXCLUSION
    assert classify((4, 9)).reason is Reason.SMALL_CASE_EXCLUSION
    assert classify((5, 5)).reason is Reason.PARITY_ALL_ODD
    assert classify((6, 2)).reason is Reason.DISCONNECTED


def test_classify_higher_dimensions():
    assert classify((4, 3, 2, 2)).tourable
    assert classify((4, 4, 4)).tourable
    assert classify((3, 3, 8)).tourable
    assert classify((7, 5, 3, 3)).reason is Reason.PARITY_ALL_ODD
    assert not classify((3, 3, 3, 2)).tourable
    assert not classify((4, 2, 2)).tourable
    assert classify((3, 3, 3, 3, 2)).verdict.value == 'NotTourable'


def test_classify_ignores_unit_sides():
    assert classify((4, 3, 1)).reason is Reason.SMALL_CASE_EXCLUSION
    assert classify((5, 1, 6)).tourable
    assert classify((7,)).reason is Reason.DIMENSION_TOO_SMALL
    assert classify((1, 1)).reason is Reason.DIMENSION_TOO_SMALL
    assert classify(BoardShape((9, 1, 1))).reason is Reason.DIMENSION_TOO_SMALL


def test_classify_payload():
    payload = classify((4, 3)).to_dict()
    assert payload == {'shape': [4, 3], 'verdict': 'NotTourable', 'reason': 'SmallCaseExclusion'}
    expect_error(UnsupportedMove, classify, (8, 8), MoveSpec((1, 3)))


def test_classify_3d_order_free():
    for dims in [(4, 3, 2), (6, 3, 3), (5, 5, 2)]:
        verdicts = {classify(p).verdict for p in itertools.permutations(dims)}
        assert len(verdicts) == 1, dims


if __name__ == '__main__':
    run_tests(globals())
