"""
Scan persistence and tables.

Scan records go to the database through ScanRecord; `scan_table` pivots a
two-axis scan into an n x m verdict grid that can be exported as a workbook.
"""

import json
import logging
import uuid
from typing import Dict, Iterable, List, Optional

import pandas as pd

from . import db
from .models import ScanRecord
from .solver import ScanReport

logger = logging.getLogger(__name__)

VERDICT_MARKS = {'Found': 'T', 'Exhausted': '-', 'TimedOut': '?'}


def save_scan_report(report: ScanReport, scan_id: Optional[str] = None) -> str:
    """Store every record of the report under one scan id. Must run in an app context."""
    scan_id = scan_id or uuid.uuid4().hex
    for r in report.records:
        db.session.add(ScanRecord(
            scan_id=scan_id,
            move=','.join(str(a) for a in r['move']),
            shape='x'.join(str(d) for d in r['shape']),
            dims=json.dumps(r['shape']),
            verdict=r['verdict'],
            nodes=r.get('nodes', 0),
            reason=r.get('reason'),
        ))
    db.session.commit()
    logger.info('saved %d scan records as %s', len(report.records), scan_id)
    return scan_id


def records_frame(records: Iterable[Dict]) -> pd.DataFrame:
    rows = []
    for r in records:
        dims = list(r['shape'])
        rows.append({
            'shape': 'x'.join(map(str, dims)),
            'n': dims[0],
            'm': dims[1] if len(dims) > 1 else 1,
            'rest': 'x'.join(map(str, dims[2:])),
            'verdict': r['verdict'],
            'nodes': r.get('nodes', 0),
            'reason': r.get('reason'),
        })
    return pd.DataFrame(rows, columns=['shape', 'n', 'm', 'rest', 'verdict', 'nodes', 'reason'])


def scan_table(report: ScanReport) -> pd.DataFrame:
    """
    Verdict grid: rows n, columns m; T found, - exhausted, ? timed out.

    Boards with more than two axes are grouped by their remaining sides,
    which become the outer row level.
    """
    frame = records_frame(report.records)
    if frame.empty:
        return frame
    frame['mark'] = frame['verdict'].map(VERDICT_MARKS)
    index = ['rest', 'n'] if frame['rest'].any() else ['n']
    table = frame.pivot_table(index=index, columns='m', values='mark', aggfunc='first')
    return table.sort_index().sort_index(axis=1)


def export_scan_table(report: ScanReport, path: str) -> str:
    """Write the verdict grid and the raw records to an .xlsx workbook."""
    with pd.ExcelWriter(path, engine='openpyxl') as writer:
        scan_table(report).to_excel(writer, sheet_name='verdicts')
        records_frame(report.records).to_excel(writer, sheet_name='records', index=False)
        pd.DataFrame([report.summary()['verdicts']]).to_excel(writer, sheet_name='summary', index=False)
    return path


def stored_scans(move: Optional[str] = None, limit: int = 500) -> List[Dict]:
    query = ScanRecord.query
    if move:
        query = query.filter_by(move=move)
    return [r.to_dict() for r in query.order_by(ScanRecord.created_at.desc()).limit(limit).all()]
