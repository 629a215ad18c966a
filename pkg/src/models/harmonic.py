"""
Harmonic fusion frames from subsets of finite abelian groups.

Restrict the characters of G to a subset D and group them by cosets of the
annihilator of a subgroup H. The blocks are orthonormal exactly when every
D_g = H intersect (D - g) has the same size; the frame is equichordal exactly
when the D_g form a difference family for H, and equi-isoclinic exactly when
each D_g is a difference set for H. Both sides are computed and must agree.
"""
import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from .designs import (
    CosetPartition,
    DifferenceFamily,
    DivisibleDifferenceSet,
    family_lambda,
    partition_by_cosets,
)
from .errors import ConsistencyError, ParameterError
from .frames import FusionFrame, VerificationReport, fusion_frame, verify
from .groups import (
    AbelianGroup,
    GroupElement,
    Subgroup,
    annihilator,
    character_table,
    cosets,
    dft,
    indicator,
)
from .triples import ParamTriple

logger = logging.getLogger(__name__)


class HarmonicSpec(BaseModel):
    group: AbelianGroup
    subgroup: Subgroup
    subset: List[GroupElement]


class CombinatorialFlags(BaseModel):
    constant_card: bool
    is_df: bool
    is_ds_each: bool


class HarmonicResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    spec: HarmonicSpec
    frame: FusionFrame
    params: ParamTriple
    combinatorial_flags: CombinatorialFlags
    partition: CosetPartition
    report: VerificationReport
    df: Optional[DifferenceFamily] = None
    trivial: bool = False
    cross_modulus: Optional[float] = None


def _check_spec(spec: HarmonicSpec) -> CosetPartition:
    if not spec.subset:
        raise ParameterError("the subset D must be nonempty")
    if len(set(spec.subset)) != len(spec.subset):
        raise ParameterError("the subset D repeats an element")
    if spec.subgroup.parent != spec.group:
        raise ParameterError(f"{spec.subgroup.literal()} is not a subgroup of {spec.group}")
    if spec.subgroup.order < 2:
        raise ParameterError("the subgroup H must have order at least 2 to give N >= 2 subspaces")
    partition = partition_by_cosets(spec.group, spec.subgroup, spec.subset)
    if not partition.constant_card:
        sizes = partition.sizes()
        odd = next(k for k, size in enumerate(sizes) if size != sizes[0])
        first, other = partition.representatives[0], partition.representatives[odd]
        raise ParameterError(
            f"|D_g| is not constant over cosets of H: |D_{first}| = {sizes[0]} but |D_{other}| = {sizes[odd]}"
        )
    return partition


def _is_difference_set_of(group: AbelianGroup, subgroup: Subgroup, part: List[GroupElement]) -> bool:
    return family_lambda(group, [part], within=subgroup) is not None


def harmonic_blocks(spec: HarmonicSpec) -> List[np.ndarray]:
    """One D x (G/|H|) block per coset of the annihilator, columns in canonical coset order."""
    group = spec.group
    table = character_table(group)
    subset_idx = np.array([group.index(d) for d in sorted(spec.subset)])
    scale = 1 / np.sqrt(len(spec.subset))
    blocks = []
    for coset in cosets(annihilator(spec.subgroup)):
        dual_idx = np.array([group.index(a) for a in coset])
        blocks.append(table[np.ix_(dual_idx, subset_idx)].T * scale)
    return blocks


def build(spec: HarmonicSpec, tol: Optional[float] = None) -> HarmonicResult:
    partition = _check_spec(spec)
    group, H = spec.group, spec.subgroup
    frame = fusion_frame(harmonic_blocks(spec))
    report = verify(frame, tol)

    lam = family_lambda(group, partition.parts, within=H)
    flags = CombinatorialFlags(
        constant_card=True,
        is_df=lam is not None,
        is_ds_each=all(_is_difference_set_of(group, H, part) for part in partition.parts),
    )
    if flags.is_df != report.is_equichordal or flags.is_ds_each != report.is_equiisoclinic:
        raise ConsistencyError(
            f"combinatorial flags (df={flags.is_df}, ds_each={flags.is_ds_each}) disagree with verification "
            f"(equichordal={report.is_equichordal}, equi-isoclinic={report.is_equiisoclinic})"
        )
    params = frame.params
    df = None
    if lam is not None:
        df = DifferenceFamily(group=group, blocks=partition.parts, lam=lam, subgroup=H)
    trivial = params.R == params.D or params.D == params.N * params.R
    logger.debug("harmonic frame %s from %s: df=%s ds_each=%s", params, group, flags.is_df, flags.is_ds_each)
    return HarmonicResult(spec=spec, frame=frame, params=params, combinatorial_flags=flags,
                          partition=partition, report=report, df=df, trivial=trivial)


def cross_gram_spectrum(spec: HarmonicSpec, gamma1: GroupElement, gamma2: GroupElement) -> np.ndarray:
    """Eigenvalues of the cross-Gram between the blocks containing gamma1 and gamma2, indexed by G/H.

    lambda(g + H) = (G / (D |H|)) gamma_{2-1}(g) sum_{h in D_g} gamma_{2-1}(h).
    """
    partition = _check_spec(spec)
    group = spec.group
    group.check_member(gamma1)
    group.check_member(gamma2)
    table = character_table(group)
    delta = group.index(gamma2 - gamma1)
    factor = group.order / (len(spec.subset) * spec.subgroup.order)
    spectrum = []
    for rep, part in zip(partition.representatives, partition.parts):
        inner = sum(table[delta, group.index(h)] for h in part)
        spectrum.append(factor * table[delta, group.index(rep)] * inner)
    return np.array(spectrum, dtype=complex)


def harmonic_gram(group: AbelianGroup, subset: List[GroupElement]) -> np.ndarray:
    """Gram matrix of all G normalized characters restricted to the subset."""
    table = character_table(group)
    idx = np.array(sorted(group.index(d) for d in subset))
    vectors = table[:, idx].T / np.sqrt(len(idx))
    return vectors.conj().T @ vectors


def gram_from_dft(group: AbelianGroup, subset: List[GroupElement]) -> np.ndarray:
    """(1/D) (Gamma^* chi_D)(gamma1 - gamma2) for every pair of characters."""
    transform = dft(group, indicator(group, subset)) / len(subset)
    coords = np.array([g.coords for g in group.elements()])
    moduli = np.array(group.moduli)
    diff = (coords[:, None, :] - coords[None, :, :]) % moduli
    idx = np.ravel_multi_index(tuple(np.moveaxis(diff, -1, 0)), group.moduli)
    return transform[idx]


def from_df(df: DifferenceFamily, tol: Optional[float] = None) -> HarmonicResult:
    """ECTFF(KR, V, R) from a DF(V, K, lam) with R blocks, via G = V x Z_R and H = V x {0}."""
    if df.subgroup is not None:
        raise ParameterError("from_df needs a difference family of a whole group")
    V, R = df.group, df.R
    group = AbelianGroup(moduli=V.moduli + (R,))
    subgroup_elements = tuple(group.element(*(v.coords + (0,))) for v in V.elements())
    H = Subgroup(parent=group, elements=tuple(sorted(subgroup_elements)))
    subset = [group.element(*(d.coords + (r,))) for r, block in enumerate(df.blocks) for d in block]
    return build(HarmonicSpec(group=group, subgroup=H, subset=subset), tol)


def dds_to_ectff(dds: DivisibleDifferenceSet, tol: Optional[float] = None) -> HarmonicResult:
    """Harmonic ECTFF(D, |H|, G/|H|) from a semiregular divisible difference set.

    Inner products between vectors of different blocks all have squared
    modulus H(G - D) / (D G (H - 1)).
    """
    if not dds.semiregular:
        raise ParameterError("dds_to_ectff needs a semiregular divisible difference set (D^2 = G lambda2, D != lambda1)")
    result = build(HarmonicSpec(group=dds.group, subgroup=dds.subgroup, subset=dds.set), tol)
    if not result.combinatorial_flags.is_df:
        raise ConsistencyError("a semiregular DDS must partition into a difference family")
    G, H, D = dds.group.order, dds.subgroup.order, dds.size
    expected = H * (G - D) / (D * G * (H - 1))
    phi = result.frame.synthesis()
    gram = np.abs(phi.conj().T @ phi) ** 2
    R = result.params.R
    labels = np.repeat(np.arange(result.params.N), R)
    cross = gram[labels[:, None] != labels[None, :]]
    deviation = float(np.abs(cross - expected).max())
    if deviation > result.report.effective_tol:
        raise ConsistencyError(f"cross-block inner products deviate from {expected:.6g} by {deviation:.3e}")
    return result.model_copy(update={"cross_modulus": expected})
