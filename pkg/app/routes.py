"""
Flask Routes - JSON API over the tour library
"""

from flask import Blueprint, Response, current_app, jsonify, request
from werkzeug.exceptions import HTTPException

from .analysis import find_sites, verify
from .base_cases import BaseCaseStore
from .board import BoardShape, KNIGHT, MoveSpec, tour_from_dict, tour_to_dict
from .constructnd import construct
from .errors import BootstrapIncomplete, TourError
from .graph import classify, connectivity
from .render import render
from .reports import stored_scans

# Blueprints
main_bp = Blueprint('main', __name__)
api_bp = Blueprint('api', __name__)


ENDPOINTS = {
    'exists': 'GET /api/exists/<shape>?move=a,b',
    'connectivity': 'GET /api/connectivity/<shape>?move=a,b',
    'construct': 'GET /api/construct/<shape>',
    'verify': 'POST /api/verify',
    'sites': 'POST /api/sites?distance=d',
    'render': 'POST /api/render',
    'scans': 'GET /api/scans?move=a,b',
}


# =============================================================================
# INDEX
# =============================================================================

@main_bp.route('/')
def index():
    """List of API endpoints"""
    return jsonify({'name': 'knight-tours', 'endpoints': ENDPOINTS})


# =============================================================================
# ERROR HANDLING
# =============================================================================

@api_bp.errorhandler(TourError)
def handle_tour_error(e):
    current_app.logger.info('%s: %s', e.code, e.message)
    return jsonify(e.to_dict()), e.http_status


@api_bp.errorhandler(Exception)
def handle_unexpected(e):
    if isinstance(e, HTTPException):
        return e
    current_app.logger.exception('unhandled error')
    return jsonify({'error': str(e)}), 500


def _move_arg():
    text = request.args.get('move')
    return MoveSpec.parse(text) if text else KNIGHT


def _tour_body():
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        return None
    return tour_from_dict(data)


def _store():
    return BaseCaseStore(current_app.config.get('KT_CACHE_DIR'), autobuild=False)


# =============================================================================
# API ENDPOINTS
# =============================================================================

@api_bp.route('/exists/<shape>')
def api_exists(shape):
    """Classification of a board"""
    verdict = classify(BoardShape.parse(shape), _move_arg())
    return jsonify(verdict.to_dict())


@api_bp.route('/connectivity/<shape>')
def api_connectivity(shape):
    """Connectivity of the leaper graph"""
    report = connectivity(BoardShape.parse(shape), _move_arg())
    return jsonify(report.to_dict())


@api_bp.route('/construct/<shape>')
def api_construct(shape):
    """Construct a closed knight's tour from the cached base cases"""
    board = BoardShape.parse(shape)
    store = _store()
    missing = store.missing()
    if missing:
        raise BootstrapIncomplete('base-case cache is incomplete; run bootstrap', {'missing': missing})
    tour = construct(board, store)
    return jsonify(tour_to_dict(tour))


@api_bp.route('/verify', methods=['POST'])
def api_verify():
    """Verify a tour document"""
    tour = _tour_body()
    if tour is None:
        return jsonify({'error': 'No tour document provided'}), 400
    return jsonify(verify(tour).to_dict())


@api_bp.route('/sites', methods=['POST'])
def api_sites():
    """Site inventory of a tour document"""
    tour = _tour_body()
    if tour is None:
        return jsonify({'error': 'No tour document provided'}), 400
    distance = request.args.get('distance', type=int)
    return jsonify(find_sites(tour, distance).to_dict())


@api_bp.route('/render', methods=['POST'])
def api_render():
    """Layered text rendering of a tour document"""
    tour = _tour_body()
    if tour is None:
        return jsonify({'error': 'No tour document provided'}), 400
    return Response(render(tour), mimetype='text/plain')


@api_bp.route('/scans')
def api_scans():
    """Stored scan records"""
    move = request.args.get('move')
    if move:
        move = MoveSpec.parse(move).label
    return jsonify(stored_scans(move))
