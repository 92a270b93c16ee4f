"""
Report Store Plugin Module

This module stores verification suite reports in SQLite through SQLAlchemy
Core. A campaign is one named suite run; each of its claims is a row with the
expected and measured values kept as JSON text.

Usage:
    grmw verify --suite constructors --db results.db --campaign nightly
"""
import datetime
import json
from typing import Any, Dict, List, Optional

from robot.api import logger
from sqlalchemy import (
    Boolean,
    Column,
    DateTime,
    ForeignKey,
    Integer,
    MetaData,
    String,
    Table,
    Text,
    create_engine,
    select,
)

from grmbot.utils.engine import ComponentBase


class ReportStore:
    """
    SQLite store of suite reports.

    The schema has two tables:
    - campaigns: one row per stored report
    - claims: one row per claim, linked to its campaign
    """

    def __init__(self, path: str):
        """
        Open or create the database file.

        Args:
            path: Path to the SQLite file, ':memory:' for a transient store.

        Raises:
            RuntimeError: If the database cannot be opened.
        """
        self.path = path
        try:
            self.engine = create_engine(f"sqlite:///{path}")
        except Exception as e:
            raise RuntimeError(f"Failed to connect to SQLite database: {e}") from e
        self.metadata = MetaData()
        self.campaigns = Table(
            "campaigns", self.metadata,
            Column("id", Integer, primary_key=True, autoincrement=True),
            Column("name", String(500), nullable=False),
            Column("suite", String(100), nullable=False),
            Column("start_time", DateTime),
            Column("elapsed_ms", Integer),
            Column("passed", Boolean),
        )
        self.claims = Table(
            "claims", self.metadata,
            Column("id", Integer, primary_key=True, autoincrement=True),
            Column("campaign_id", Integer, ForeignKey("campaigns.id")),
            Column("claim_id", String(500), nullable=False),
            Column("provenance", String(100)),
            Column("expected", Text),
            Column("measured", Text),
            Column("passed", Boolean),
        )
        self.metadata.create_all(self.engine)

    def save(self, name: str, report: Dict[str, Any]) -> int:
        """
        Store a report as a new campaign.

        Args:
            name: Campaign name; several campaigns may share it.
            report: A suite report in its JSON layout.

        Returns:
            The id of the new campaign row.
        """
        claims = report.get("claims", [])
        with self.engine.begin() as connection:
            result = connection.execute(
                self.campaigns.insert().values(
                    name=name,
                    suite=report["suite"],
                    start_time=datetime.datetime.now(),
                    elapsed_ms=int(report.get("elapsed_ms", 0)),
                    passed=all(claim["pass"] for claim in claims),
                )
            )
            campaign_id = result.inserted_primary_key[0]
            if claims:
                connection.execute(
                    self.claims.insert(),
                    [
                        {
                            "campaign_id": campaign_id,
                            "claim_id": claim["id"],
                            "provenance": claim["provenance"],
                            "expected": json.dumps(claim["expected"]),
                            "measured": json.dumps(claim["measured"]),
                            "passed": bool(claim["pass"]),
                        }
                        for claim in claims
                    ],
                )
        logger.info(f"Stored campaign '{name}' ({len(claims)} claims) in {self.path}")
        return campaign_id

    def list_campaigns(self, name: Optional[str] = None) -> List[Dict[str, Any]]:
        stmt = select(self.campaigns).order_by(self.campaigns.c.id)
        if name is not None:
            stmt = stmt.where(self.campaigns.c.name == name)
        with self.engine.connect() as connection:
            return [dict(row._mapping) for row in connection.execute(stmt)]

    def load(self, campaign_id: int) -> Dict[str, Any]:
        """
        Read a campaign back in the suite report layout.

        Raises:
            KeyError: If the campaign does not exist.
        """
        with self.engine.connect() as connection:
            campaign = connection.execute(
                select(self.campaigns).where(self.campaigns.c.id == campaign_id)
            ).fetchone()
            if campaign is None:
                raise KeyError(f"Campaign {campaign_id} not found")
            rows = connection.execute(
                select(self.claims)
                .where(self.claims.c.campaign_id == campaign_id)
                .order_by(self.claims.c.id)
            ).fetchall()
        return {
            "suite": campaign.suite,
            "claims": [
                {
                    "id": row.claim_id,
                    "provenance": row.provenance,
                    "expected": json.loads(row.expected),
                    "measured": json.loads(row.measured),
                    "pass": bool(row.passed),
                }
                for row in rows
            ],
            "elapsed_ms": campaign.elapsed_ms,
        }

    def close(self) -> None:
        self.engine.dispose()


class Store(ComponentBase):
    """Report store keywords."""

    def save_report(self, db: str, campaign: str, report: dict) -> int:
        store = ReportStore(db)
        try:
            return store.save(campaign, report)
        finally:
            store.close()

    def load_campaigns(self, db: str, campaign: str) -> list:
        """Every stored report of a campaign name, oldest first."""
        store = ReportStore(db)
        try:
            return [store.load(row["id"]) for row in store.list_campaigns(campaign)]
        finally:
            store.close()
