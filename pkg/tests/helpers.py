from typing import List


def abelian_groups(max_order: int) -> List[str]:
    """Literals for every abelian group of order 2..max_order, once each, in invariant-factor form."""
    found = []

    def extend(factors: List[int], order: int) -> None:
        if factors:
            found.append("x".join(f"Z{n}" for n in factors))
        step = factors[-1] if factors else 1
        n = factors[-1] if factors else 2
        while order * n <= max_order:
            extend(factors + [n], order * n)
            n += step

    extend([], 1)
    return found
