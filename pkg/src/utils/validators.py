"""
Validators for batch input, verification reports and rendered reports.
"""
import re
from typing import List, Tuple

from ..models.errors import ParameterError
from ..models.frames import VerificationReport
from ..models.triples import ParamTriple

_TRIPLE = re.compile(r"^\s*\(?\s*(-?\d+)\s*[,\s]\s*(-?\d+)\s*[,\s]\s*(-?\d+)\s*\)?\s*$")


def parse_triple_line(line: str) -> ParamTriple:
    """Parse "D N R", "D,N,R" or "(D,N,R)"."""
    match = _TRIPLE.match(line)
    if not match:
        raise ParameterError(f"cannot parse {line.strip()!r} as a triple 'D N R'")
    D, N, R = (int(v) for v in match.groups())
    return ParamTriple.of(D, N, R)


def parse_batch(text: str) -> Tuple[List[ParamTriple], List[str]]:
    """Triples from batch text; blank lines and '#' comments are skipped.

    Returns the parsed triples and one error message per unparseable line.
    """
    triples, errors = [], []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        try:
            triples.append(parse_triple_line(line))
        except ParameterError as e:
            errors.append(f"line {number}: {e}")
    return triples, errors


def validate_verification(report: VerificationReport) -> List[str]:
    """Internal consistency warnings for a verification report."""
    warnings = []
    if report.is_equiisoclinic and not report.is_equichordal:
        warnings.append("equi-isoclinic but not equichordal")
    if (report.is_equichordal or report.is_equiisoclinic) and not report.is_tight:
        warnings.append("equichordal flags set on a frame that is not tight")
    slack = report.effective_tol * max(1, report.r)
    if report.min_chordal_distance_sq > report.simplex_bound_sq + slack:
        warnings.append(f"minimum squared chordal distance {report.min_chordal_distance_sq:.6g} "
                        f"exceeds the simplex bound {report.simplex_bound_sq:.6g}")
    if report.is_equichordal and abs(report.trace_max - report.targets.trace_target) > slack:
        warnings.append(f"equichordal with Tr(P1 P2) = {report.trace_max:.6g}, "
                        f"expected {report.targets.trace_target_exact}")
    return warnings


def validate_report_structure(report: str, sections: List[str]) -> Tuple[bool, List[str]]:
    """Check that a rendered report carries every required section heading."""
    errors = [f"Missing section: {section}" for section in sections if section not in report]
    return len(errors) == 0, errors
