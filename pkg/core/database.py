"""Run ledger models and setup."""

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from sqlalchemy import Column, DateTime, Float, Integer, String, Text, create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from config.settings import APP_SETTINGS

Base = declarative_base()


def get_data_directory() -> Path:
    """Get the per-user data directory for the run ledger."""
    if sys.platform == "darwin":
        app_support = Path.home() / "Library" / "Application Support" / APP_SETTINGS["app_name"]
    else:
        app_support = Path.home() / ".wigner-lift"

    app_support.mkdir(parents=True, exist_ok=True)
    return app_support


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class RunRecord(Base):
    """One recorded reconstruct or check run."""
    __tablename__ = "runs"

    id = Column(Integer, primary_key=True)
    command = Column(String(32), nullable=False)
    method = Column(String(32), nullable=True)
    dim = Column(Integer, nullable=True)
    oracle_kind = Column(String(32), nullable=True)
    outcome = Column(String(32), nullable=False)
    exit_code = Column(Integer, default=0)
    residual = Column(Float, nullable=True)
    created_at = Column(DateTime, default=_utcnow)
    report_json = Column(Text, default="{}")

    @property
    def report(self) -> dict:
        return json.loads(self.report_json or "{}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "command": self.command,
            "method": self.method,
            "dim": self.dim,
            "oracle_kind": self.oracle_kind,
            "outcome": self.outcome,
            "exit_code": self.exit_code,
            "residual": self.residual,
            "created_at": self.created_at.isoformat() if self.created_at else None,
        }


class DatabaseManager:
    """Database connection and session management."""

    def __init__(self, db_path: str = None):
        if db_path is None:
            self.db_path = get_data_directory() / APP_SETTINGS["database_name"]
        else:
            self.db_path = Path(db_path)
            self.db_path.parent.mkdir(parents=True, exist_ok=True)

        self.engine = create_engine(f"sqlite:///{self.db_path}", echo=False)
        Base.metadata.create_all(self.engine)
        self.SessionLocal = sessionmaker(bind=self.engine, expire_on_commit=False)

    def get_session(self):
        """Get a new database session."""
        return self.SessionLocal()

    def add_run(self, command: str, outcome: str, report_text: str, exit_code: int = 0,
                method: str = None, dim: int = None, oracle_kind: str = None,
                residual: float = None) -> RunRecord:
        """Record a finished run together with its full report text."""
        session = self.get_session()
        try:
            record = RunRecord(
                command=command,
                method=method,
                dim=dim,
                oracle_kind=oracle_kind,
                outcome=outcome,
                exit_code=exit_code,
                residual=residual,
                report_json=report_text,
            )
            session.add(record)
            session.commit()
            session.refresh(record)
            return record
        finally:
            session.close()

    def get_runs(self, limit: int = 20) -> list:
        """Most recent runs first."""
        session = self.get_session()
        try:
            return session.query(RunRecord).order_by(
                RunRecord.id.desc()
            ).limit(limit).all()
        finally:
            session.close()

    def get_run_by_id(self, run_id: int) -> RunRecord:
        """Get run by ID."""
        session = self.get_session()
        try:
            return session.query(RunRecord).filter(RunRecord.id == run_id).first()
        finally:
            session.close()

    def delete_run(self, run_id: int) -> bool:
        """Delete a run; returns False when no such run exists."""
        session = self.get_session()
        try:
            record = session.query(RunRecord).filter(RunRecord.id == run_id).first()
            if record:
                session.delete(record)
                session.commit()
                return True
            return False
        finally:
            session.close()
