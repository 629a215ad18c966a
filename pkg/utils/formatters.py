"""
Formatters for triples, exact fractions, complement chains and three-valued outcomes.
"""
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from src.models.triples import Move, ParamTriple
from src.models.truth import Truth

_MOVE_LETTER = {Move.NAIMARK: "N", Move.SPATIAL: "s"}
_TRUTH_MARK = {Truth.YES: "yes", Truth.NO: "no", Truth.UNKNOWN: "unknown"}


def format_triple(t: Optional[ParamTriple]) -> str:
    return "-" if t is None else f"({t.D},{t.N},{t.R})"


def format_fraction(value: Fraction) -> str:
    """5/9 stays 5/9, integers drop the denominator."""
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def format_moves(moves: Sequence[Move]) -> str:
    """Chain of complements, N for Naimark and s for spatial."""
    return " ".join(_MOVE_LETTER[m] for m in moves) if moves else "(none)"


def format_chain(points: Sequence[ParamTriple], moves: Sequence[Move]) -> str:
    """(1,4,1) N (3,4,1) s (3,4,2) ..."""
    if not points:
        return ""
    parts = [format_triple(points[0])]
    for move, point in zip(moves, points[1:]):
        parts.extend([_MOVE_LETTER[move], format_triple(point)])
    return " ".join(parts)


def format_truth(value: Truth) -> str:
    return _TRUTH_MARK[value]


def format_float(value: float, digits: int = 6) -> str:
    return f"{value:.{digits}g}"


def format_list(values: Iterable[float], digits: int = 4) -> str:
    return "[" + ", ".join(f"{v:.{digits}f}" for v in values) + "]"
