"""
Fusion frames as lists of orthonormal synthesis blocks.

A frame holds N matrices Phi_n of shape D x R with orthonormal columns; the
projections P_n = Phi_n Phi_n^* are never stored. Verification compares the
frame against the chordal simplex bound and its equi-isoclinic refinement.
"""
import logging
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field

from .designs import BlockDesign, verify_bibd
from .errors import ParameterError, ShapeError
from .triples import NumberField, ParamTriple
from ..settings import get_settings

logger = logging.getLogger(__name__)


class FusionFrame(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dim: int
    blocks: List[np.ndarray]
    field_tag: NumberField
    notes: List[str] = []

    @property
    def n(self) -> int:
        return len(self.blocks)

    @property
    def r(self) -> int:
        return self.blocks[0].shape[1]

    @property
    def params(self) -> ParamTriple:
        return ParamTriple.of(self.dim, self.n, self.r)

    def synthesis(self) -> np.ndarray:
        return np.hstack(self.blocks)

    def projections(self) -> List[np.ndarray]:
        return [projection(b) for b in self.blocks]


class PairAngles(BaseModel):
    i: int
    j: int
    cos2: List[float]


class VerificationTargets(BaseModel):
    trace_target: float
    ei_cos2_target: float
    trace_target_exact: str
    ei_cos2_target_exact: str


class VerificationReport(BaseModel):
    dim: int
    n: int
    r: int
    field: NumberField
    effective_tol: float
    is_tight: bool
    tight_residual: float
    tight_constant: float
    is_equichordal: bool
    trace_min: float
    trace_max: float
    trace_spread: float
    is_equiisoclinic: bool
    ei_spread: float
    targets: VerificationTargets
    min_chordal_distance_sq: float
    simplex_bound_sq: float
    block_coherence: float
    block_welch_bound: float
    principal_angle_table: List[PairAngles]
    repeated_subspaces: List[Tuple[int, int]] = []
    notes: List[str] = []


def projection(block: np.ndarray) -> np.ndarray:
    return block @ block.conj().T


def fusion_frame(blocks: Sequence[np.ndarray], field: Optional[NumberField] = None,
                 notes: Optional[List[str]] = None) -> FusionFrame:
    """Validate blocks and freeze them into a FusionFrame.

    Without an explicit field, blocks whose imaginary parts are all below
    tol_real are hard-zeroed and tagged Real.
    """
    settings = get_settings()
    notes = list(notes or [])
    if not blocks:
        raise ShapeError("a fusion frame needs at least one block")
    arrays = [np.array(b, dtype=complex) for b in blocks]
    if any(a.ndim != 2 for a in arrays):
        raise ShapeError("every block must be a matrix")
    shapes = {a.shape for a in arrays}
    if len(shapes) != 1:
        raise ShapeError(f"blocks must share one shape, got {sorted(shapes)}")
    D, R = shapes.pop()
    if R < 1 or R > D:
        raise ShapeError(f"blocks must be D x R with 1 <= R <= D, got {D} x {R}")
    for k, a in enumerate(arrays):
        error = np.abs(a.conj().T @ a - np.eye(R)).max()
        if error > settings.tol_orth:
            raise ShapeError(f"block {k} has non-orthonormal columns (deviation {error:.3e})")
    largest_imag = max(np.abs(a.imag).max() for a in arrays)
    if field is None:
        field = NumberField.REAL if largest_imag < settings.tol_real else NumberField.COMPLEX
    if field is NumberField.REAL:
        if largest_imag >= settings.tol_real:
            raise ShapeError(f"frame tagged Real has imaginary parts up to {largest_imag:.3e}")
        if largest_imag > 0:
            notes.append(f"imaginary parts up to {largest_imag:.3e} hard-zeroed")
            logger.info("hard-zeroed imaginary parts up to %.3e", largest_imag)
        arrays = [a.real.astype(complex) for a in arrays]
    for a in arrays:
        a.flags.writeable = False
    return FusionFrame(dim=D, blocks=arrays, field_tag=field, notes=notes)


def chordal_distance(P1: np.ndarray, P2: np.ndarray) -> float:
    _check_projection_pair(P1, P2)
    return float(np.linalg.norm(P1 - P2) / np.sqrt(2))


def spectral_distance(P1: np.ndarray, P2: np.ndarray) -> float:
    _check_projection_pair(P1, P2)
    top = scipy.linalg.svdvals(P1 @ P2)[0]
    return float(np.sqrt(max(0.0, 1.0 - top ** 2)))


def _check_projection_pair(P1: np.ndarray, P2: np.ndarray) -> None:
    if P1.shape != P2.shape or P1.shape[0] != P1.shape[1]:
        raise ShapeError(f"projections must be square of equal size, got {P1.shape} and {P2.shape}")
    r1, r2 = round(np.trace(P1).real), round(np.trace(P2).real)
    if r1 != r2:
        raise ParameterError(f"distances need equal ranks, got {r1} and {r2}")


def principal_angles(B1: np.ndarray, B2: np.ndarray) -> np.ndarray:
    """Principal angles in ascending order from orthonormal bases B1, B2."""
    if B1.shape[0] != B2.shape[0]:
        raise ShapeError(f"bases live in different dimensions {B1.shape[0]} and {B2.shape[0]}")
    s = np.clip(scipy.linalg.svdvals(B1.conj().T @ B2), 0.0, 1.0)
    return np.sort(np.arccos(s))


def fusion_gram(frame: FusionFrame) -> np.ndarray:
    phi = frame.synthesis()
    return phi.conj().T @ phi


def simplex_bound(t: ParamTriple) -> Fraction:
    """Largest possible minimum squared chordal distance, NR(D-R)/(D(N-1))."""
    return Fraction(t.N * t.R * (t.D - t.R), t.D * (t.N - 1))


def trace_target(t: ParamTriple) -> Fraction:
    return Fraction(t.R * (t.N * t.R - t.D), t.D * (t.N - 1))


def ei_cos2_target(t: ParamTriple) -> Fraction:
    return Fraction(t.N * t.R - t.D, t.D * (t.N - 1))


def block_welch_bound(t: ParamTriple) -> float:
    return float(np.sqrt(max(0.0, float(ei_cos2_target(t)))))


def verify(frame: FusionFrame, tol: Optional[float] = None) -> VerificationReport:
    if frame.n < 2:
        raise ParameterError(f"verification needs N >= 2 subspaces, got {frame.n}")
    tol = tol if tol is not None else get_settings().tol
    t = frame.params
    D, N, R = t.as_tuple()
    phi = frame.synthesis()
    eff = tol * max(1.0, scipy.linalg.svdvals(phi)[0] ** 2)

    constant = N * R / D
    residual = float(np.linalg.norm(phi @ phi.conj().T - constant * np.eye(D)))
    is_tight = residual <= eff * np.sqrt(D)

    traces, table, all_cos2, repeated = [], [], [], []
    coherence = 0.0
    for i, j in combinations(range(N), 2):
        cross = frame.blocks[i].conj().T @ frame.blocks[j]
        s = scipy.linalg.svdvals(cross)
        cos2 = np.clip(s ** 2, 0.0, 1.0)
        traces.append(float(np.sum(np.abs(cross) ** 2)))
        table.append(PairAngles(i=i, j=j, cos2=[float(c) for c in cos2]))
        all_cos2.extend(cos2.tolist())
        coherence = max(coherence, float(s[0]))
        if np.all(np.abs(cos2 - 1.0) <= eff):
            repeated.append((i, j))

    tr_target, ei_target = trace_target(t), ei_cos2_target(t)
    spread = max(traces) - min(traces)
    ei_spread = max(all_cos2) - min(all_cos2)
    is_equichordal = bool(is_tight and spread <= eff)
    is_ei = bool(is_tight and all(abs(c - float(ei_target)) <= eff for c in all_cos2))
    notes = list(frame.notes)
    if repeated:
        notes.append(f"{len(repeated)} pair(s) of repeated subspaces")
    return VerificationReport(
        dim=D, n=N, r=R, field=frame.field_tag, effective_tol=eff,
        is_tight=bool(is_tight), tight_residual=residual, tight_constant=constant,
        is_equichordal=is_equichordal, trace_min=min(traces), trace_max=max(traces), trace_spread=spread,
        is_equiisoclinic=is_ei, ei_spread=ei_spread,
        targets=VerificationTargets(trace_target=float(tr_target), ei_cos2_target=float(ei_target),
                                    trace_target_exact=str(tr_target), ei_cos2_target_exact=str(ei_target)),
        min_chordal_distance_sq=R - max(traces), simplex_bound_sq=float(simplex_bound(t)),
        block_coherence=coherence, block_welch_bound=block_welch_bound(t),
        principal_angle_table=table, repeated_subspaces=repeated, notes=notes,
    )


def _normalize_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first entry of non-negligible size is real positive."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        column = out[:, k]
        lead = np.flatnonzero(np.abs(column) > 1e-8)
        if lead.size:
            out[:, k] = column * (abs(column[lead[0]]) / column[lead[0]])
    return out


def naimark_complement(frame: FusionFrame, tol: Optional[float] = None) -> FusionFrame:
    """TFF(NR-D, N, R) whose fusion Gram is (NR/(NR-D))(I - (D/NR) Phi^* Phi)."""
    D, N, R = frame.params.as_tuple()
    if D == N * R:
        raise ParameterError(f"D = NR = {D}: the Naimark complement would be zero-dimensional")
    if not verify(frame, tol).is_tight:
        raise ParameterError("the Naimark complement needs a tight input frame")
    M = N * R
    complement = np.eye(M) - (D / M) * fusion_gram(frame)
    complement = (complement + complement.conj().T) / 2
    if frame.field_tag is NumberField.REAL:
        complement = complement.real
    values, vectors = scipy.linalg.eigh(complement)
    order = np.argsort(-values, kind="stable")[: M - D]
    basis = _normalize_phases(vectors[:, order])
    psi = np.sqrt(M / (M - D)) * basis.conj().T
    blocks = [psi[:, n * R:(n + 1) * R] for n in range(N)]
    return fusion_frame(blocks, field=frame.field_tag)


def spatial_complement(frame: FusionFrame) -> FusionFrame:
    """Orthogonal complements of every subspace: a TFF(D, N, D-R)."""
    if frame.r == frame.dim:
        raise ParameterError(f"R = D = {frame.dim}: the spatial complement would be zero-dimensional")
    blocks = []
    for b in frame.blocks:
        a = b.real if frame.field_tag is NumberField.REAL else b
        blocks.append(scipy.linalg.null_space(a.conj().T))
    return fusion_frame(blocks, field=frame.field_tag)


def direct_sum(f1: FusionFrame, f2: FusionFrame) -> FusionFrame:
    """Block-diagonal stacking of two frames with equal N and equal R/D."""
    if f1.n != f2.n:
        raise ParameterError(f"direct sums need equal N, got {f1.n} and {f2.n}")
    if f1.r * f2.dim != f2.r * f1.dim:
        raise ParameterError(f"direct sums need equal ratios R/D, got {f1.r}/{f1.dim} and {f2.r}/{f2.dim}")
    field = NumberField.REAL if f1.field_tag is f2.field_tag is NumberField.REAL else NumberField.COMPLEX
    blocks = [scipy.linalg.block_diag(a, b) for a, b in zip(f1.blocks, f2.blocks)]
    return fusion_frame(blocks, field=field)


_J = np.array([[0.0, -1.0], [1.0, 0.0]])


def realify(matrix: np.ndarray) -> np.ndarray:
    """Entrywise a + ib -> [[a, -b], [b, a]]."""
    return np.kron(matrix.real, np.eye(2)) + np.kron(matrix.imag, _J)


def hoggar_realify(frame: FusionFrame) -> FusionFrame:
    """Real TFF(2D, N, 2R) from a complex TFF(D, N, R)."""
    return fusion_frame([realify(b) for b in frame.blocks], field=NumberField.REAL)


def construct_trivial(t: ParamTriple) -> FusionFrame:
    """Partition of an orthonormal basis (D = NR) or N copies of the whole space (R = D)."""
    D, N, R = t.as_tuple()
    if D < 1 or N < 1 or R < 1:
        raise ParameterError(f"trivial frames need positive parameters, got {t}")
    identity = np.eye(D)
    if D == N * R:
        blocks = [identity[:, n * R:(n + 1) * R] for n in range(N)]
    elif D == R:
        blocks = [identity] * N
    else:
        raise ParameterError(f"trivial frames need R = D/N or R = D, got {t}")
    return fusion_frame(blocks, field=NumberField.REAL)


def construct_2r4r(R: int, field: NumberField = NumberField.COMPLEX) -> FusionFrame:
    """EITFF(2R, 4, R) from U and -(I + U) both unitary.

    Complex: U = omega I with omega a primitive cube root of unity. Real:
    U is block diagonal with rotations by 2 pi / 3, which needs R even.
    """
    if R < 1:
        raise ParameterError(f"R must be positive, got {R}")
    if field is NumberField.REAL:
        if R % 2:
            raise ParameterError(f"a real EITFF(2R,4,R) exists if and only if R is even, got R={R}")
        c, s = np.cos(2 * np.pi / 3), np.sin(2 * np.pi / 3)
        U = scipy.linalg.block_diag(*([np.array([[c, -s], [s, c]])] * (R // 2))).astype(complex)
    else:
        U = np.exp(2j * np.pi / 3) * np.eye(R)
    I, Z = np.eye(R), np.zeros((R, R))
    a, b = 1 / np.sqrt(3), np.sqrt(2 / 3)
    blocks = [
        np.vstack([I, Z]),
        np.vstack([a * I, b * I]),
        np.vstack([a * I, b * U]),
        np.vstack([a * I, -b * (I + U)]),
    ]
    return fusion_frame(blocks, field=field)


def construct_f_zero(R: int) -> FusionFrame:
    """Real TFF(2R, 4, R): two copies each of the odd and even coordinate axes."""
    if R < 1:
        raise ParameterError(f"R must be positive, got {R}")
    identity = np.eye(2 * R)
    odd, even = identity[:, 0::2], identity[:, 1::2]
    return fusion_frame([odd, odd, even, even], field=NumberField.REAL,
                        notes=["subspaces 1,2 and 3,4 coincide"])


def construct_zauner(design: BlockDesign) -> FusionFrame:
    """Real ECTFF(B, V, r): U_v spanned by the basis vectors of blocks containing v."""
    params = verify_bibd(design)
    if params is None:
        raise ParameterError("Zauner's construction needs a balanced incomplete block design")
    identity = np.eye(params.B)
    blocks = []
    for v in range(design.V):
        containing = [j for j, block in enumerate(design.blocks) if v in block]
        blocks.append(identity[:, containing])
    return fusion_frame(blocks, field=NumberField.REAL)
