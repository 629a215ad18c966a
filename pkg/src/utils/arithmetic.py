"""
Integer helpers used by catalog rule hypotheses.
"""
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import List, Optional, Tuple

from sympy import divisors, factorint, isprime


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


@lru_cache(maxsize=8192)
def is_prime_power(n: int) -> Optional[Tuple[int, int]]:
    """Return (p, k) with n = p**k, or None when n is not a prime power."""
    if n < 2:
        return None
    factors = factorint(n)
    if len(factors) != 1:
        return None
    (p, k), = factors.items()
    return int(p), int(k)


def prime_power_roots(n: int) -> List[Tuple[int, int]]:
    """All (Q, I) with Q a prime power and Q**I == n."""
    pk = is_prime_power(n)
    if pk is None:
        return []
    p, k = pk
    return [(p ** s, k // s) for s in divisors(k)]


def exact_sqrt(n: int) -> Optional[int]:
    if n < 0:
        return None
    root = isqrt(n)
    return root if root * root == n else None


def as_integer(value: Fraction) -> Optional[int]:
    return value.numerator if value.denominator == 1 else None


def power_of(base: int, n: int) -> Optional[int]:
    """Return j with base**j == n, or None."""
    if base < 2 or n < 1:
        return None
    j = 0
    while n % base == 0:
        n //= base
        j += 1
    return j if n == 1 else None


def is_sum_of_two_squares(n: int) -> bool:
    if n < 0:
        return False
    return all(k % 2 == 0 for p, k in factorint(n).items() if p % 4 == 3)
