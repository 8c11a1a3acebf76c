from . import db
from datetime import datetime
import json


class ScanRecord(db.Model):
    """One board tried by an existence scan"""
    __tablename__ = 'scan_records'

    id = db.Column(db.Integer, primary_key=True)
    scan_id = db.Column(db.String(40), nullable=False, index=True)
    move = db.Column(db.String(50), nullable=False, index=True)
    shape = db.Column(db.String(100), nullable=False)
    dims = db.Column(db.Text, nullable=False)  # JSON list
    verdict = db.Column(db.String(20), nullable=False)  # Found, Exhausted, TimedOut
    nodes = db.Column(db.BigInteger, default=0)
    reason = db.Column(db.String(50))  # prefilter reason, if any
    created_at = db.Column(db.DateTime, default=datetime.utcnow)

    __table_args__ = (
        db.UniqueConstraint('scan_id', 'shape', name='unique_scan_shape'),
    )

    @property
    def side_lengths(self):
        return json.loads(self.dims)

    def __repr__(self):
        return f'<ScanRecord ({self.move}) {self.shape}: {self.verdict}>'

    def to_dict(self):
        return {
            'id': self.id,
            'scan_id': self.scan_id,
            'move': [int(a) for a in self.move.split(',')],
            'shape': self.side_lengths,
            'verdict': self.verdict,
            'nodes': self.nodes,
            'reason': self.reason,
            'created_at': self.created_at.isoformat() if self.created_at else None
        }
