"""
Parameter triples (D, N, R) and their Naimark-spatial orbits.

All arithmetic is exact on Python integers. The invariant
f(D,N,R) = DNR - D^2 - NR^2 is fixed by both complements, and its sign
together with N decides the shape of the orbit.
"""
import logging
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, StrictInt

from .errors import OrbitCapError, ParameterError
from ..settings import get_settings

logger = logging.getLogger(__name__)


class Move(str, Enum):
    NAIMARK = "Naimark"
    SPATIAL = "Spatial"


class NumberField(str, Enum):
    REAL = "Real"
    COMPLEX = "Complex"


class OrbitTag(str, Enum):
    SMALL_N2 = "SmallN2"
    SMALL_N3 = "SmallN3"
    F_ZERO = "FZero"
    F_NEG_TRIVIAL_SEED = "FNegTrivialSeed"
    F_NEG_NO_TFF = "FNegNoTFF"
    F_POS = "FPos"


class ParamTriple(BaseModel):
    """Integer triple (D, N, R); entries may be nonpositive inside an orbit."""
    model_config = ConfigDict(frozen=True)

    D: StrictInt = Field(..., description="Ambient dimension")
    N: StrictInt = Field(..., description="Number of subspaces")
    R: StrictInt = Field(..., description="Subspace dimension")

    @classmethod
    def of(cls, D: int, N: int, R: int) -> "ParamTriple":
        return cls(D=D, N=N, R=R)

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.D, self.N, self.R)

    def __str__(self) -> str:
        return f"({self.D},{self.N},{self.R})"


class OrbitClass(BaseModel):
    tag: OrbitTag
    f_value: int
    minimal_point: Optional[ParamTriple] = None
    orbit_sample: List[ParamTriple] = []


class ExistenceVerdict(BaseModel):
    exists: bool
    seed: Optional[ParamTriple] = None
    chain: List[Move] = Field(default_factory=list, description="Moves from seed to query")


def invariant(t: ParamTriple) -> int:
    return t.D * t.N * t.R - t.D * t.D - t.N * t.R * t.R


def naimark(t: ParamTriple) -> ParamTriple:
    return ParamTriple.of(t.N * t.R - t.D, t.N, t.R)


def spatial(t: ParamTriple) -> ParamTriple:
    return ParamTriple.of(t.D, t.N, t.D - t.R)


def apply_move(t: ParamTriple, move: Move) -> ParamTriple:
    return naimark(t) if move is Move.NAIMARK else spatial(t)


def _move_at(k: int) -> Move:
    """Move taking index k-1 to k (k > 0) or k+1 to k (k < 0)."""
    if k > 0:
        return Move.NAIMARK if k % 2 == 1 else Move.SPATIAL
    return Move.SPATIAL if (-k) % 2 == 1 else Move.NAIMARK


def sequence(t: ParamTriple, k_min: int, k_max: int) -> List[ParamTriple]:
    """Window of the Naimark-spatial sequence with indices k_min..k_max; index 0 is t."""
    if not k_min <= 0 <= k_max:
        raise ParameterError(f"window must satisfy k_min <= 0 <= k_max, got [{k_min}, {k_max}]")
    forward = [t]
    for k in range(1, k_max + 1):
        forward.append(apply_move(forward[-1], _move_at(k)))
    backward = []
    current = t
    for k in range(-1, k_min - 1, -1):
        current = apply_move(current, _move_at(k))
        backward.append(current)
    return list(reversed(backward)) + forward


class OrbitGraph(BaseModel):
    """(D, R) nodes of a sequence window and the complement joining each neighbouring pair."""
    N: int
    k_min: int
    nodes: List[Tuple[int, int]]
    edges: List[Tuple[int, int, Move]]


def orbit_nodes(t: ParamTriple, width: int) -> OrbitGraph:
    k_min, k_max = window_bounds(width)
    points = sequence(t, k_min, k_max)
    edges = []
    for i in range(1, len(points)):
        k = k_min + i
        edges.append((i - 1, i, _move_at(k) if k > 0 else _move_at(k - 1)))
    return OrbitGraph(N=t.N, k_min=k_min, nodes=[(p.D, p.R) for p in points], edges=edges)


def window_bounds(width: int) -> Tuple[int, int]:
    """Centered window of `width` steps: width 6 gives indices -3..3."""
    if width < 0:
        raise ParameterError(f"window width must be nonnegative, got {width}")
    return -(width // 2), width - width // 2


def is_minimal(t: ParamTriple) -> bool:
    return 0 < t.D <= t.N * t.R - t.D and 0 < t.R <= t.D - t.R


def is_trivial_seed(t: ParamTriple) -> bool:
    return t.D > 0 and t.R > 0 and (t.R * t.N == t.D or t.R == t.D)


def gerzon_max(D: int, field: NumberField) -> int:
    if D < 1:
        raise ParameterError(f"Gerzon's bound needs D >= 1, got {D}")
    return D * (D + 1) // 2 if field is NumberField.REAL else D * D


def replay(seed: ParamTriple, chain: List[Move]) -> ParamTriple:
    current = seed
    for move in chain:
        current = apply_move(current, move)
    return current


def _descend(t: ParamTriple, cap: int) -> Tuple[ParamTriple, List[Move], List[ParamTriple]]:
    """Walk down the orbit while a move strictly shrinks D or R and stays positive.

    Returns the last point, the moves taken and the visited points. For N=4 the
    walk is linear in D, so whole (Naimark, spatial) pairs are taken in one jump.
    """
    current = t
    moves: List[Move] = []
    visited = [t]
    for _ in range(cap):
        D, N, R = current.as_tuple()
        complement_d = N * R - D
        complement_r = D - R
        if N == 4 and D != 2 * R:
            c = abs(D - 2 * R)
            pairs = min((D - 1) // (2 * c), (R - 1) // c)
            if pairs > 1:
                pair = [Move.NAIMARK, Move.SPATIAL] if D > 2 * R else [Move.SPATIAL, Move.NAIMARK]
                moves.extend(pair * pairs)
                current = ParamTriple.of(D - 2 * c * pairs, N, R - c * pairs)
                visited.append(current)
                continue
        if D > complement_d > 0:
            moves.append(Move.NAIMARK)
            current = naimark(current)
        elif R > complement_r > 0:
            moves.append(Move.SPATIAL)
            current = spatial(current)
        else:
            logger.debug("orbit walk from %s stopped at %s after %d moves", t, current, len(moves))
            return current, moves, visited
        visited.append(current)
    raise OrbitCapError(f"orbit walk from {t} exceeded {cap} steps")


def _small_n_cycle(t: ParamTriple) -> List[ParamTriple]:
    period = 8 if t.N == 2 else 12
    sample: List[ParamTriple] = []
    for point in sequence(t, 0, period - 1):
        if point not in sample:
            sample.append(point)
    return sample


def _small_n_seed(t: ParamTriple) -> Tuple[Optional[ParamTriple], List[Move]]:
    """Nearest trivial seed on the finite cycle, searching indices 0, 1, -1, 2, -2, ..."""
    half = 4 if t.N == 2 else 6

    def walk(direction: int) -> List[Tuple[ParamTriple, List[Move]]]:
        steps, current, moves = [], t, []
        for k in range(1, half + 1):
            move = _move_at(direction * k)
            nxt = apply_move(current, move)
            if nxt != current:
                moves = moves + [move]
            steps.append((nxt, moves))
            current = nxt
        return steps

    order = [(t, [])]
    for ahead, behind in zip(walk(1), walk(-1)):
        order.extend([ahead, behind])
    for point, moves in order:
        if is_trivial_seed(point):
            return point, list(reversed(moves))
    return None, []


def _check_query(t: ParamTriple, min_n: int = 2) -> None:
    if t.N < min_n:
        raise ParameterError(f"N must be at least {min_n}, got {t.N}")
    if t.D < 1 or t.R < 1:
        raise ParameterError(f"D and R must be positive, got {t}")


def classify(t: ParamTriple, cap: Optional[int] = None) -> OrbitClass:
    """Classify the orbit of t and locate its minimal point."""
    _check_query(t)
    f = invariant(t)
    if t.N in (2, 3):
        seed, _ = _small_n_seed(t)
        tag = OrbitTag.SMALL_N2 if t.N == 2 else OrbitTag.SMALL_N3
        return OrbitClass(tag=tag, f_value=f, minimal_point=seed, orbit_sample=_small_n_cycle(t))
    if f == 0:
        return OrbitClass(tag=OrbitTag.F_ZERO, f_value=f, minimal_point=t, orbit_sample=[t])
    bottom, _, visited = _descend(t, cap or get_settings().orbit_cap)
    if f > 0:
        tag = OrbitTag.F_POS
    else:
        tag = OrbitTag.F_NEG_TRIVIAL_SEED if is_trivial_seed(bottom) else OrbitTag.F_NEG_NO_TFF
    return OrbitClass(tag=tag, f_value=f, minimal_point=bottom, orbit_sample=visited)


def minimal_point(t: ParamTriple, cap: Optional[int] = None) -> ParamTriple:
    """Minimal point for f >= 0 orbits; the query itself when f = 0."""
    result = classify(t, cap)
    if result.tag not in (OrbitTag.F_POS, OrbitTag.F_ZERO):
        raise ParameterError(f"{t} has f = {result.f_value} with N = {t.N}; minimal points need f >= 0 and N >= 4")
    return result.minimal_point


def tff_exists(t: ParamTriple, cap: Optional[int] = None) -> ExistenceVerdict:
    """Decide whether a TFF(D,N,R) exists and give the complement chain from its seed."""
    _check_query(t, min_n=1)
    if t.N == 1:
        return ExistenceVerdict(exists=t.R == t.D, seed=t if t.R == t.D else None)
    if t.N in (2, 3):
        seed, chain = _small_n_seed(t)
        return ExistenceVerdict(exists=seed is not None, seed=seed, chain=chain)
    f = invariant(t)
    if f == 0:
        return ExistenceVerdict(exists=True, seed=t)
    bottom, moves, _ = _descend(t, cap or get_settings().orbit_cap)
    if f < 0 and not is_trivial_seed(bottom):
        return ExistenceVerdict(exists=False)
    return ExistenceVerdict(exists=True, seed=bottom, chain=list(reversed(moves)))


def eitff_feasible(t: ParamTriple, cap: Optional[int] = None) -> bool:
    """Necessary condition for an equi-isoclinic TFF with these parameters."""
    verdict = tff_exists(t, cap)
    if not verdict.exists:
        raise ParameterError(f"no TFF{t} exists, equi-isoclinicity is moot")
    D0, N, R0 = verdict.seed.as_tuple()
    if t.R < t.D < 2 * t.R:
        return False
    return t.R == R0 and t.D in (D0, N * R0 - D0)
