"""
Errors raised by the tour library.

Every error carries a stable ``code`` so the CLI and the HTTP API can report
it as machine-readable JSON.
"""

from typing import Dict, Optional


class TourError(Exception):
    """Base class for all library errors."""

    code = 'tour_error'
    http_status = 400

    def __init__(self, message: str, details: Optional[Dict] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict:
        payload = {'error': self.code, 'message': self.message}
        if self.details:
            payload['details'] = self.details
        return payload


class ShapeError(TourError, ValueError):
    code = 'shape_error'


class MoveError(TourError, ValueError):
    code = 'move_error'


class ConstraintError(TourError, ValueError):
    code = 'constraint_error'


class PreconditionError(TourError, ValueError):
    code = 'precondition'


class UnsupportedMove(TourError):
    code = 'unsupported_move'


class UnsupportedSize(TourError):
    """No extender exists for the requested width."""
    code = 'unsupported'


class NotTourableError(TourError):
    code = 'not_tourable'

    def __init__(self, classification):
        super().__init__(
            f'{classification.shape_label} admits no closed tour ({classification.reason.value})',
            {'reason': classification.reason.value},
        )
        self.classification = classification


class NotBipartiteArgument(TourError):
    code = 'not_bipartite_argument'


class UnreliablePrediction(TourError):
    code = 'unreliable'


class CornerSiteMissing(TourError):
    code = 'corner_site_missing'


class MissingCornerSites(TourError):
    code = 'missing_corner_sites'


class InsufficientSites(TourError):
    code = 'insufficient_sites'


class LayerBudget(TourError):
    code = 'layer_budget'


class NotBisited(TourError):
    code = 'not_bisited'


class IllegalSplice(TourError):
    code = 'illegal_splice'


class NotASingleCycle(TourError):
    code = 'not_a_single_cycle'


class ConstructionError(TourError):
    code = 'construction_failed'
    http_status = 500


class BootstrapIncomplete(TourError):
    code = 'bootstrap_incomplete'
    http_status = 409
