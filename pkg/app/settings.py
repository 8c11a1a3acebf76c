"""Default settings and environment overrides."""

import os
from typing import Dict, Optional

BASE_DIR = os.path.abspath(os.path.dirname(os.path.dirname(__file__)))

DEFAULT_SETTINGS = {
    # Solver budgets per search (nodes and wall-clock seconds)
    'budget_nodes': 10 ** 8,
    'budget_secs': 60.0,

    # "Sufficiently large" for the s-tuple connectivity formula: every side >= factor * max(step)
    'leaper_threshold_factor': 2,

    # Classical site distance
    'find_sites_distance': 2,

    # Corner window for (a,b)-sites; None means a + 2b
    'ab_site_window': None,
}


def cache_dir(override: Optional[str] = None) -> str:
    """Base-case cache directory: explicit override, then KT_CACHE_DIR, then <repo>/tour_cache."""
    if override:
        return override
    return os.environ.get('KT_CACHE_DIR') or os.path.join(BASE_DIR, 'tour_cache')


def autobuild_enabled() -> bool:
    return os.environ.get('KT_AUTOBUILD', '1') not in ('0', 'false', 'no')


def get_settings() -> Dict:
    """Defaults merged with the KT_BUDGET_* environment overrides."""
    result = dict(DEFAULT_SETTINGS)
    nodes = os.environ.get('KT_BUDGET_NODES')
    secs = os.environ.get('KT_BUDGET_SECS')
    if nodes:
        result['budget_nodes'] = int(nodes)
    if secs:
        result['budget_secs'] = float(secs)
    return result
