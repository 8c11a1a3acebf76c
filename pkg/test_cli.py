"""The `tours` command group, driven through Flask's CLI runner."""

import json
import os

from app import create_app
from app.base_cases import BaseCaseEntry, bootstrap
from app.solver import SearchConstraints
from checks import expect_error, run_tests, scratch_dir, shared_store

PATH_3X4 = [[0, 0], [1, 2], [2, 0], [0, 1], [1, 3], [2, 1], [0, 2], [2, 3], [1, 1], [0, 3], [2, 2], [1, 0]]


def make_runner(cache_dir=None):
    app = create_app({
        'SQLALCHEMY_DATABASE_URI': 'sqlite://',
        'KT_CACHE_DIR': cache_dir or scratch_dir(),
        'TESTING': True,
    })
    return app, app.test_cli_runner()


def tours(runner, *args):
    return runner.invoke(args=['tours'] + [str(a) for a in args])


def json_lines(result):
    """JSON objects printed by a command (stdout and stderr may be mixed)."""
    return [json.loads(line) for line in result.output.splitlines() if line.startswith('{')]


def write_json(payload):
    path = os.path.join(scratch_dir(), 'tour.json')
    with open(path, 'w') as fh:
        json.dump(payload, fh)
    return path


# ==============================================================================
# CLASSIFICATION
# ==============================================================================

def test_exists_exit_codes():
    _, runner = make_runner()
    result = tours(runner, 'exists', '5x6')
    assert result.exit_code == 0
    assert json_lines(result)[0] == {'shape': [5, 6], 'verdict': 'Tourable', 'reason': 'None'}
    result = tours(runner, 'exists', '4x3')
    assert result.exit_code == 1
    assert json_lines(result)[0]['reason'] == 'SmallCaseExclusion'
    assert tours(runner, 'exists', '4x').exit_code == 2
    result = tours(runner, 'exists', '4xq')
    assert result.exit_code == 2
    assert json_lines(result)[0]['error'] == 'shape_error'


def test_connectivity():
    _, runner = make_runner()
    result = tours(runner, 'connectivity', '3x3')
    assert result.exit_code == 0
    payload = json_lines(result)[0]
    assert payload['connected'] is False and payload['component_count'] == 2
    result = tours(runner, 'connectivity', '6x6', '--move', '2,2')
    assert json_lines(result)[0]['connected'] is False
    assert tours(runner, 'connectivity', '6x6', '--move', '0,2').exit_code == 2


# ==============================================================================
# SOLVE, VERIFY, SITES, RENDER
# ==============================================================================

def test_solve_then_inspect():
    _, runner = make_runner()
    out = os.path.join(scratch_dir(), 'five_by_six.json')
    result = tours(runner, 'solve', '5x6', '--seeded', '--deterministic', '-o', out)
    assert result.exit_code == 0, result.output
    payload = json_lines(result)[0]
    assert payload['status'] == 'Found' and payload['seeded'] is True and payload['out'] == out

    result = tours(runner, 'verify', out)
    assert result.exit_code == 0
    assert json_lines(result)[0]['valid'] is True

    result = tours(runner, 'sites', out, '--distance', '2')
    inventory = json_lines(result)[0]
    assert inventory['bisited'] is True
    assert len(inventory['sites']) == 2
    full = json_lines(tours(runner, 'sites', out, '--full'))[0]
    assert len(full['sites']) == full['count']

    result = tours(runner, 'render', out)
    assert result.exit_code == 0
    assert result.output.startswith('shape 5x6 move 1,2 closed')


def test_solve_negative_and_open():
    _, runner = make_runner()
    result = tours(runner, 'solve', '4x3', '--deterministic')
    assert result.exit_code == 1
    assert json_lines(result)[0]['status'] == 'Exhausted'

    result = tours(runner, 'solve', '3x4', '--endpoints', '0,0:1,0', '--deterministic')
    assert result.exit_code == 0
    tour = json_lines(result)[0]['tour']
    assert tour['closed'] is False
    assert tour['cells'][0] == [0, 0] and tour['cells'][-1] == [1, 0]


def test_solve_rejects_bad_constraints():
    _, runner = make_runner()
    assert tours(runner, 'solve', '5x6', '--force-edge', '0,0').exit_code == 2
    assert tours(runner, 'solve', '5x6', '--force-edge', '0,0:0,1').exit_code == 2
    assert tours(runner, 'solve', '4x3x2', '--seeded').exit_code == 2


def test_verify_reports_problems():
    _, runner = make_runner()
    cells = PATH_3X4[:-1] + [[0, 0]]
    path = write_json({'shape': [3, 4], 'move': [1, 2], 'closed': False, 'cells': cells})
    result = tours(runner, 'verify', path)
    assert result.exit_code == 1
    assert json_lines(result)[0]['problem'] == 'duplicate_cell'
    assert tours(runner, 'verify', write_json({'shape': [3, 4]})).exit_code == 2


def test_count():
    _, runner = make_runner()
    result = tours(runner, 'count', '3x3', '--deterministic')
    assert result.exit_code == 0
    payload = json_lines(result)[0]
    assert payload['count'] == 0 and payload['complete'] is True


# ==============================================================================
# SCAN
# ==============================================================================

def test_scan_to_file_and_workbook():
    app, runner = make_runner()
    out = os.path.join(scratch_dir(), 'scan.jsonl')
    xlsx = os.path.join(scratch_dir(), 'scan.xlsx')
    result = tours(runner, 'scan', '--max', 4, '--deterministic', '-o', out, '--xlsx', xlsx, '--save')
    assert result.exit_code == 0, result.output
    with open(out) as fh:
        records = [json.loads(line) for line in fh]
    assert len(records) == 10
    assert all(r['verdict'] == 'Exhausted' for r in records)
    assert os.path.exists(xlsx)
    summary = [p for p in json_lines(result) if 'verdicts' in p][0]
    assert summary['verdicts'] == {'Exhausted': 10}
    assert summary['preconditions']['coprime_and_odd'] is True

    from app.models import ScanRecord
    with app.app_context():
        assert ScanRecord.query.filter_by(scan_id=summary['scan_id']).count() == 10


def test_scan_to_stdout():
    _, runner = make_runner()
    result = tours(runner, 'scan', '--max', 3, '--move', '2,2', '--deterministic')
    assert result.exit_code == 0
    records = [p for p in json_lines(result) if 'shape' in p]
    assert len(records) == 6
    assert all(r['reason'] for r in records)


# ==============================================================================
# CONSTRUCT AND BOOTSTRAP
# ==============================================================================

def test_construct_needs_the_cache():
    _, runner = make_runner(scratch_dir())
    result = tours(runner, 'construct', '4x3x2x2')
    assert result.exit_code == 1
    assert json_lines(result)[0]['error'] == 'bootstrap_incomplete'


def test_construct_from_a_full_cache():
    store = shared_store()
    bootstrap(store, golden=False).raise_for_failures()
    _, runner = make_runner(store.cache_dir)
    out = os.path.join(scratch_dir(), 'construct.json')
    result = tours(runner, 'construct', '4x3x2x2', '-o', out)
    assert result.exit_code == 0, result.output
    result = tours(runner, 'verify', out)
    assert result.exit_code == 0
    assert tours(runner, 'construct', '3x3x3').exit_code == 1
    assert tours(runner, 'construct', '3xx3').exit_code == 2

    prism = os.path.join(scratch_dir(), 'prism.json')
    assert tours(runner, 'construct', '5x6x2', '-o', prism).exit_code == 0
    assert json_lines(tours(runner, 'sites', prism, '--distance', '2'))[0]['bisited'] is True
    text = tours(runner, 'render', prism).output
    assert text.index('layer 1') < text.index('layer 0')
    assert ' 60' in text or '60 ' in text


def test_bootstrap_reports_failures():
    cache = scratch_dir()
    impossible = BaseCaseEntry((4, 2, 2), 'prism', SearchConstraints(bisited_distance=2), certify=2)
    manifest = os.path.join(scratch_dir(), 'manifest.json')
    with open(manifest, 'w') as fh:
        json.dump({'entries': [impossible.to_dict()]}, fh)
    _, runner = make_runner(cache)
    result = tours(runner, 'bootstrap', '--manifest', manifest, '--no-golden', '--deterministic')
    assert result.exit_code == 1
    payload = json_lines(result)[0]
    assert payload['failed'] == {'base_4x2x2_prism': 'Exhausted'}
    assert payload['ok'] is False


def test_parse_helpers():
    from app.cli import _parse_cell, _parse_pair
    from app.errors import ConstraintError
    assert _parse_pair('0,0:1,2') == ((0, 0), (1, 2))
    assert _parse_cell('3,4,5') == (3, 4, 5)
    expect_error(ConstraintError, _parse_cell, '3,x')
    expect_error(ConstraintError, _parse_pair, '0,0')


if __name__ == '__main__':
    run_tests(globals())
