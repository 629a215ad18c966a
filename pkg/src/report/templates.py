"""
Text sections for orbit, existence, certification and verification reports.
"""
from typing import List, Optional

from src.models.catalog import CertificationReport, RuleOutcome
from src.models.designs import DifferenceFamily
from src.models.frames import VerificationReport
from src.models.triples import ExistenceVerdict, OrbitClass, ParamTriple, replay
from utils.formatters import format_chain, format_float, format_list, format_moves, format_triple


class ReportTemplates:
    """Markdown sections; every section starts with a '## ' heading."""

    @staticmethod
    def get_orbit(points: List[ParamTriple], k_min: int) -> str:
        rows = "\n".join(f"| {k_min + i} | {format_triple(p)} |" for i, p in enumerate(points))
        return f"""## Naimark-spatial sequence

| k | (D,N,R) |
|---|---------|
{rows}

"""

    @staticmethod
    def get_classification(t: ParamTriple, orbit: OrbitClass) -> str:
        sample = ", ".join(format_triple(p) for p in orbit.orbit_sample[:12])
        more = " ..." if len(orbit.orbit_sample) > 12 else ""
        return f"""## Orbit class

Query: {format_triple(t)}
f = DNR - D^2 - NR^2 = {orbit.f_value}
Class: {orbit.tag.value}
Minimal point: {format_triple(orbit.minimal_point)}
Sample: {sample}{more}

"""

    @staticmethod
    def get_existence(t: ParamTriple, verdict: ExistenceVerdict) -> str:
        if not verdict.exists:
            return f"""## Existence

No TFF{format_triple(t)} exists: its orbit has no trivial seed.

"""
        points = [verdict.seed]
        for k in range(1, len(verdict.chain) + 1):
            points.append(replay(verdict.seed, verdict.chain[:k]))
        return f"""## Existence

A TFF{format_triple(t)} exists.
Seed: {format_triple(verdict.seed)}
Chain: {format_moves(verdict.chain)}
Path: {format_chain(points, verdict.chain)}

"""

    @staticmethod
    def get_certification_summary(report: CertificationReport) -> str:
        return f"""## Certification

Query: {format_triple(report.query)} over the {report.field.value.lower()} numbers
f = {report.f_value}, orbit class {report.orbit_tag.value}
Minimal point: {format_triple(report.minimal)}
Verdict: **{report.verdict.value}**
Catalog: version {report.catalog_version}, sha256 {report.catalog_hash[:16]}

"""

    @staticmethod
    def _rule_rows(outcomes: List[RuleOutcome]) -> str:
        rows = []
        for o in outcomes:
            evidence = "; ".join(o.evidence).replace("|", "/") or "-"
            rows.append(f"| {o.id} | {o.outcome.value} | {evidence} |")
        return "\n".join(rows)

    @staticmethod
    def get_rule_table(title: str, outcomes: List[RuleOutcome]) -> str:
        if not outcomes:
            return ""
        return f"""## {title}

| Rule | Outcome | Evidence |
|------|---------|----------|
{ReportTemplates._rule_rows(outcomes)}

"""

    @staticmethod
    def get_narrative(lines: List[str]) -> str:
        body = "\n".join(f"{i}. {line}" for i, line in enumerate(lines, 1))
        return f"""## Evidence trail

{body}

"""

    @staticmethod
    def get_verification_summary(report: VerificationReport) -> str:
        t = report.targets
        return f"""## Verification

Frame: {report.n} subspaces of dimension {report.r} in {report.field.value.lower()} dimension {report.dim}
Effective tolerance: {report.effective_tol:.3e}

| Property | Result | Detail |
|----------|--------|--------|
| Tight | {report.is_tight} | residual {report.tight_residual:.3e}, constant {format_float(report.tight_constant)} |
| Equichordal | {report.is_equichordal} | Tr(P1 P2) in [{format_float(report.trace_min)}, {format_float(report.trace_max)}], target {t.trace_target_exact} |
| Equi-isoclinic | {report.is_equiisoclinic} | cos^2 spread {report.ei_spread:.3e}, target {t.ei_cos2_target_exact} |
| Simplex bound | {format_float(report.min_chordal_distance_sq)} | bound {format_float(report.simplex_bound_sq)} |
| Block coherence | {format_float(report.block_coherence)} | Welch-type bound {format_float(report.block_welch_bound)} |

"""

    @staticmethod
    def get_principal_angles(report: VerificationReport, limit: Optional[int] = 20) -> str:
        pairs = report.principal_angle_table if limit is None else report.principal_angle_table[:limit]
        rows = "\n".join(f"| {p.i} | {p.j} | {format_list(p.cos2)} |" for p in pairs)
        more = ""
        if limit is not None and len(report.principal_angle_table) > limit:
            more = f"\n{len(report.principal_angle_table) - limit} more pairs omitted.\n"
        return f"""## Principal angles

| i | j | cos^2 |
|---|---|-------|
{rows}
{more}
"""

    @staticmethod
    def get_notes(notes: List[str]) -> str:
        if not notes:
            return ""
        return "## Notes\n\n" + "\n".join(f"- {n}" for n in notes) + "\n\n"

    @staticmethod
    def get_family(df: DifferenceFamily) -> str:
        blocks = "\n".join("- {" + ", ".join(str(g) for g in block) + "}" for block in df.blocks)
        V, K, lam = df.parameters()
        return f"""## Difference family DF({V},{K},{lam}) in {df.group.literal()}

{blocks}

"""
