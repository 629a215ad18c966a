from fractions import Fraction

import pytest

from src.models.errors import SearchCapError
from src.models.groups import parse_group
from src.models.triples import Move, ParamTriple
from src.models.truth import Truth
from src.settings import get_settings
from src.utils.arithmetic import (
    as_integer,
    exact_sqrt,
    is_prime,
    is_prime_power,
    is_sum_of_two_squares,
    power_of,
    prime_power_roots,
)
from utils.formatters import format_chain, format_fraction, format_moves, format_truth


def test_prime_powers():
    assert is_prime(19) and not is_prime(1) and not is_prime(57)
    assert is_prime_power(64) == (2, 6)
    assert is_prime_power(12) is None
    assert is_prime_power(1) is None
    assert prime_power_roots(64) == [(2, 6), (4, 3), (8, 2), (64, 1)]
    assert prime_power_roots(10) == []


def test_integer_helpers():
    assert exact_sqrt(49) == 7
    assert exact_sqrt(50) is None
    assert as_integer(Fraction(12, 4)) == 3
    assert as_integer(Fraction(27, 19)) is None
    assert power_of(4, 256) == 4
    assert power_of(4, 32) is None
    assert is_sum_of_two_squares(13)
    assert not is_sum_of_two_squares(21)


def test_kleene_connectives():
    assert Truth.all([Truth.YES, Truth.UNKNOWN]) is Truth.UNKNOWN
    assert Truth.all([Truth.UNKNOWN, Truth.NO]) is Truth.NO
    assert Truth.any([Truth.NO, Truth.UNKNOWN]) is Truth.UNKNOWN
    assert Truth.any([Truth.UNKNOWN, Truth.YES]) is Truth.YES
    assert Truth.any([]) is Truth.NO
    assert Truth.UNKNOWN.negate() is Truth.UNKNOWN


def test_formatters():
    points = [ParamTriple.of(1, 4, 1), ParamTriple.of(3, 4, 1), ParamTriple.of(3, 4, 2)]
    assert format_chain(points, [Move.NAIMARK, Move.SPATIAL]) == "(1,4,1) N (3,4,1) s (3,4,2)"
    assert format_moves([]) == "(none)"
    assert format_fraction(Fraction(10, 18)) == "5/9"
    assert format_fraction(Fraction(4, 2)) == "2"
    assert format_truth(Truth.UNKNOWN) == "unknown"


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("ECTFF_TOL", "1e-6")
    monkeypatch.setenv("ECTFF_GROUP_CAP", "16")
    get_settings.cache_clear()
    assert get_settings().tol == pytest.approx(1e-6)
    with pytest.raises(SearchCapError):
        parse_group("Z17")


def test_settings_defaults():
    settings = get_settings()
    assert settings.tol == 1e-9
    assert settings.window == 16
    assert settings.search_cap == 64
