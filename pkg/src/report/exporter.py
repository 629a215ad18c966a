"""
Tabular exports: batch certification tables, orbit plot data and principal angles.
"""
import json
from typing import List

import pandas as pd

from src.models.catalog import CertificationReport
from src.models.frames import VerificationReport
from src.models.triples import OrbitGraph

CERTIFICATION_COLUMNS = ["D", "N", "R", "field", "f", "orbit", "minimal", "verdict", "matched", "catalog_version"]


class TableExporter:
    """DataFrame views of library results, written as text, CSV or JSON lines."""

    @staticmethod
    def certification_table(reports: List[CertificationReport]) -> pd.DataFrame:
        rows = []
        for r in reports:
            matched = [o.id for o in r.matched_rules if o.outcome.is_yes()]
            rows.append({
                "D": r.query.D, "N": r.query.N, "R": r.query.R,
                "field": r.field.value,
                "f": r.f_value,
                "orbit": r.orbit_tag.value,
                "minimal": str(r.minimal) if r.minimal is not None else "",
                "verdict": r.verdict.value,
                "matched": ",".join(matched),
                "catalog_version": r.catalog_version,
            })
        return pd.DataFrame(rows, columns=CERTIFICATION_COLUMNS)

    @staticmethod
    def orbit_plot_data(graph: OrbitGraph) -> pd.DataFrame:
        """One row per node with the move leading to the next node, for (D, R) scatter plots."""
        moves = {i: move.value for i, _, move in graph.edges}
        return pd.DataFrame({
            "k": [graph.k_min + i for i in range(len(graph.nodes))],
            "D": [d for d, _ in graph.nodes],
            "R": [r for _, r in graph.nodes],
            "N": graph.N,
            "next_move": [moves.get(i, "") for i in range(len(graph.nodes))],
        })

    @staticmethod
    def principal_angle_table(report: VerificationReport) -> pd.DataFrame:
        rows = []
        for pair in report.principal_angle_table:
            for k, c in enumerate(pair.cos2):
                rows.append({"i": pair.i, "j": pair.j, "k": k, "cos2": c})
        return pd.DataFrame(rows, columns=["i", "j", "k", "cos2"])

    @staticmethod
    def to_text(df: pd.DataFrame) -> str:
        if df.empty:
            return "(empty)\n"
        return df.to_string(index=False) + "\n"

    @staticmethod
    def to_csv(df: pd.DataFrame) -> str:
        return df.to_csv(index=False)

    @staticmethod
    def to_jsonl(records: List[dict]) -> str:
        return "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in records)
