"""
Assembles report sections into human-readable documents and JSON envelopes.
"""
import logging
from typing import List, Optional

from rules.schemas.report import ReportPayload
from src.models.catalog import CertificationReport
from src.models.designs import DifferenceFamily
from src.models.frames import VerificationReport
from src.models.triples import ExistenceVerdict, OrbitClass, ParamTriple
from src.utils.validators import validate_report_structure, validate_verification
from .templates import ReportTemplates

logger = logging.getLogger(__name__)


class ReportGenerator:
    """Render library results as markdown text."""

    certification_sections = ["## Certification", "## Evidence trail"]
    verification_sections = ["## Verification", "## Principal angles"]

    def __init__(self, angle_rows: Optional[int] = 20):
        self.templates = ReportTemplates()
        self.angle_rows = angle_rows

    def orbit(self, points: List[ParamTriple], k_min: int) -> str:
        return self.templates.get_orbit(points, k_min)

    def classification(self, t: ParamTriple, orbit: OrbitClass) -> str:
        return self.templates.get_classification(t, orbit)

    def existence(self, t: ParamTriple, verdict: ExistenceVerdict) -> str:
        return self.templates.get_existence(t, verdict)

    def certification(self, report: CertificationReport) -> str:
        text = (
            self.templates.get_certification_summary(report)
            + self.templates.get_rule_table("ECTFF rules", report.matched_rules)
            + self.templates.get_rule_table("EITFF rules", report.eitff_rules)
            + self.templates.get_rule_table("Constructions outside the catalog", report.constructions)
            + self.templates.get_narrative(report.narrative)
        )
        self._check(text, self.certification_sections)
        return text

    def verification(self, report: VerificationReport) -> str:
        notes = list(report.notes) + validate_verification(report)
        if report.repeated_subspaces:
            pairs = ", ".join(f"({i},{j})" for i, j in report.repeated_subspaces)
            notes.append(f"repeated subspaces at pairs {pairs}")
        text = (
            self.templates.get_verification_summary(report)
            + self.templates.get_principal_angles(report, self.angle_rows)
            + self.templates.get_notes(notes)
        )
        self._check(text, self.verification_sections)
        return text

    def families(self, families: List[DifferenceFamily]) -> str:
        if not families:
            return "No difference family found.\n"
        return "".join(self.templates.get_family(df) for df in families)

    @staticmethod
    def envelope(kind: str, query: str, body: dict, report: Optional[CertificationReport] = None) -> ReportPayload:
        return ReportPayload(
            kind=kind,
            query=query,
            catalog_version=report.catalog_version if report is not None else None,
            catalog_hash=report.catalog_hash if report is not None else None,
            body=body,
        )

    @staticmethod
    def _check(text: str, sections: List[str]) -> None:
        ok, errors = validate_report_structure(text, sections)
        if not ok:
            logger.warning("rendered report is incomplete: %s", "; ".join(errors))
