"""Layered text rendering."""

from app.board import KNIGHT, BoardShape, OpenPath
from app.errors import PreconditionError, ShapeError
from app.render import layer_indices, parse_render, render, visit_grid
from app.solver import Budget, solve
from checks import expect_error, run_tests

BUDGET = Budget.default().deterministic()

PATH_3X4 = ((0, 0), (1, 2), (2, 0), (0, 1), (1, 3), (2, 1), (0, 2), (2, 3), (1, 1), (0, 3), (2, 2), (1, 0))


def test_render_open_path():
    text = render(OpenPath(BoardShape((3, 4)), KNIGHT, PATH_3X4))
    assert text == (
        'shape 3x4 move 1,2 open\n'
        '\n'
        'layer\n'
        ' 1  4  7 10\n'
        '12  9  2  5\n'
        ' 3  6 11  8\n'
    )


def test_visit_grid():
    grid = visit_grid(OpenPath(BoardShape((3, 4)), KNIGHT, PATH_3X4))
    assert grid[0, 0] == 1 and grid[1, 0] == 12
    assert sorted(grid.reshape(-1).tolist()) == list(range(1, 13))


def test_layers_are_listed_topmost_first():
    assert layer_indices(BoardShape((4, 3, 2))) == [(1,), (0,)]
    assert layer_indices(BoardShape((4, 3, 2, 2)))[0] == (1, 1)
    t = solve((4, 3, 2), budget=BUDGET).tour
    text = render(t)
    assert text.index('layer 1') < text.index('layer 0')


def test_render_round_trip():
    for dims in [(5, 6), (4, 3, 2)]:
        t = solve(dims, budget=BUDGET).tour
        assert parse_render(render(t)) == t
    path = OpenPath(BoardShape((3, 4)), KNIGHT, PATH_3X4)
    assert parse_render(render(path)) == path


def test_render_errors():
    expect_error(PreconditionError, render, OpenPath(BoardShape((3,)), KNIGHT, ((0,), (1,), (2,))))
    expect_error(ShapeError, parse_render, '')
    expect_error(ShapeError, parse_render, 'board 3x4\n')
    expect_error(ShapeError, parse_render, 'shape 2x2 move 1,2 open\n\nlayer\n1 2\n3 3\n')


if __name__ == '__main__':
    run_tests(globals())
