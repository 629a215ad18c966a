"""
Difference sets, divisible difference sets, difference families and block designs.

Verification works on exact integer autocorrelations. The difference family
search is an exhaustive exact-cover backtrack over translation classes of
blocks, so its output order is deterministic.
"""
import logging
import sys
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from tqdm import tqdm

from .errors import ParameterError, SearchCapError
from .groups import (
    AbelianGroup,
    GroupElement,
    Subgroup,
    autocorrelation,
    coset_representatives,
    subgroup_from_elements,
)
from ..settings import get_settings

logger = logging.getLogger(__name__)


class DifferenceFamily(BaseModel):
    """Blocks whose summed autocorrelation is lam off the identity.

    When `subgroup` is set the blocks live inside that subgroup and the family
    is a difference family for it rather than for the whole group.
    """
    group: AbelianGroup
    blocks: List[List[GroupElement]]
    lam: int = Field(..., ge=0)
    subgroup: Optional[Subgroup] = None

    @property
    def V(self) -> int:
        return self.subgroup.order if self.subgroup is not None else self.group.order

    @property
    def K(self) -> int:
        return len(self.blocks[0])

    @property
    def R(self) -> int:
        return len(self.blocks)

    def parameters(self) -> Tuple[int, int, int]:
        return (self.V, self.K, self.lam)


class DivisibleDifferenceSet(BaseModel):
    group: AbelianGroup
    subgroup: Subgroup
    set: List[GroupElement]
    lambda1: int
    lambda2: int
    semiregular: bool
    relative: bool

    @property
    def size(self) -> int:
        return len(self.set)


class CosetPartition(BaseModel):
    representatives: List[GroupElement]
    parts: List[List[GroupElement]]
    constant_card: bool

    def sizes(self) -> List[int]:
        return [len(p) for p in self.parts]


class BlockDesign(BaseModel):
    """Incidence structure on points 0..V-1."""
    V: int = Field(..., ge=2)
    blocks: List[List[int]]


class BibdParameters(BaseModel):
    V: int
    K: int
    lam: int
    B: int
    r: int


def _check_blocks(group: AbelianGroup, blocks: Sequence[Sequence[GroupElement]], min_size: int) -> None:
    if not blocks:
        raise ParameterError("a family needs at least one block")
    sizes = {len(b) for b in blocks}
    if len(sizes) != 1:
        raise ParameterError(f"blocks must have equal sizes, got {sorted(sizes)}")
    if sizes.pop() < min_size:
        raise ParameterError(f"blocks must have at least {min_size} elements")
    for block in blocks:
        if len(set(block)) != len(block):
            raise ParameterError(f"block {[str(g) for g in block]} repeats an element")
        for g in block:
            group.check_member(g)


def summed_autocorrelation(group: AbelianGroup, blocks: Sequence[Sequence[GroupElement]]) -> np.ndarray:
    return sum((autocorrelation(group, block) for block in blocks), np.zeros(group.order, dtype=np.int64))


def family_lambda(group: AbelianGroup, blocks: Sequence[Sequence[GroupElement]],
                  within: Optional[Subgroup] = None) -> Optional[int]:
    """Constant value of the summed autocorrelation on the nonzero elements, if any."""
    total = summed_autocorrelation(group, blocks)
    support = within.index_array() if within is not None else np.arange(group.order)
    values = {int(total[i]) for i in support if i != 0}
    if len(values) > 1:
        return None
    return values.pop() if values else 0


def verify_df(group: AbelianGroup, blocks: Sequence[Sequence[GroupElement]],
              within: Optional[Subgroup] = None) -> Optional[DifferenceFamily]:
    _check_blocks(group, blocks, min_size=2)
    if within is not None:
        for block in blocks:
            if any(g not in within for g in block):
                raise ParameterError(f"block {[str(g) for g in block]} is not contained in {within.literal()}")
    lam = family_lambda(group, blocks, within)
    if lam is None:
        return None
    return DifferenceFamily(group=group, blocks=[sorted(b) for b in blocks], lam=lam, subgroup=within)


def verify_dds(group: AbelianGroup, subgroup: Subgroup, subset: Sequence[GroupElement]) -> Optional[DivisibleDifferenceSet]:
    """Classify a divisible difference set relative to `subgroup`.

    With a trivial subgroup lambda1 is set to lambda2 and the set is never
    called relative; with subgroup = group lambda2 is set to lambda1.
    """
    if not subset:
        raise ParameterError("a divisible difference set must be nonempty")
    if subgroup.parent != group:
        raise ParameterError(f"{subgroup.literal()} is not a subgroup of {group}")
    for g in subset:
        group.check_member(g)
    acf = autocorrelation(group, subset)
    in_h = np.zeros(group.order, dtype=bool)
    in_h[subgroup.index_array()] = True
    in_h_nonzero = in_h.copy()
    in_h_nonzero[0] = False
    inside = set(acf[in_h_nonzero].tolist())
    outside = set(acf[~in_h].tolist())
    if len(inside) > 1 or len(outside) > 1:
        return None
    if not inside and not outside:
        return None
    lambda1 = inside.pop() if inside else None
    lambda2 = outside.pop() if outside else None
    trivial = subgroup.order == 1
    if lambda1 is None:
        lambda1 = lambda2
    if lambda2 is None:
        lambda2 = lambda1
    D = len(subset)
    semiregular = D * D == group.order * lambda2 and D != lambda1
    return DivisibleDifferenceSet(group=group, subgroup=subgroup, set=sorted(subset),
                                  lambda1=int(lambda1), lambda2=int(lambda2),
                                  semiregular=semiregular, relative=(not trivial and lambda1 == 0))


def is_difference_set(group: AbelianGroup, subset: Sequence[GroupElement]) -> Optional[int]:
    """Lambda of a (G, D, lambda) difference set, or None."""
    trivial = subgroup_from_elements(group, [group.zero()])
    dds = verify_dds(group, trivial, subset)
    return dds.lambda2 if dds is not None else None


def partition_by_cosets(group: AbelianGroup, subgroup: Subgroup, subset: Sequence[GroupElement]) -> CosetPartition:
    """D_g = H intersect (D - g) for each canonical coset representative g."""
    for g in subset:
        group.check_member(g)
    members = set(subgroup.elements)
    reps = coset_representatives(subgroup)
    parts = [sorted(d - g for d in subset if d - g in members) for g in reps]
    sizes = {len(p) for p in parts}
    return CosetPartition(representatives=reps, parts=parts, constant_card=len(sizes) == 1)


def _canonical_candidates(group: AbelianGroup, K: int) -> List[Tuple[int, ...]]:
    """K-subsets containing 0 that are lexicographically least among their translates containing 0."""
    zero = group.zero()
    elements = group.elements()
    candidates = []
    for rest in combinations(range(1, group.order), K - 1):
        block = [zero] + [elements[i] for i in rest]
        key = tuple(sorted(group.index(b) for b in block))
        translates = (tuple(sorted(group.index(b - s) for b in block)) for s in block)
        if key == min(translates):
            candidates.append(key)
    return candidates


def search_df(group: AbelianGroup, K: int, lam: int, limit: Optional[int] = None,
              cap: Optional[int] = None, progress: Optional[bool] = None) -> List[DifferenceFamily]:
    """Exhaustive search for DF(V, K, lam) over translation classes of blocks."""
    settings = get_settings()
    cap = cap or settings.search_cap
    V = group.order
    if V > cap:
        raise SearchCapError(f"group order {V} exceeds the search cap {cap}")
    if not 2 <= K <= V or lam < 1:
        raise ParameterError(f"need 2 <= K <= V and lambda >= 1, got K={K}, V={V}, lambda={lam}")
    numerator, denominator = lam * (V - 1), K * (K - 1)
    if numerator % denominator:
        raise ParameterError(f"R = lambda(V-1)/(K(K-1)) = {numerator}/{denominator} is not an integer")
    R = numerator // denominator

    elements = group.elements()
    candidates = _canonical_candidates(group, K)
    counts = np.array([autocorrelation(group, [elements[i] for i in c]) for c in candidates], dtype=np.int64)
    counts[:, 0] = 0
    usable = np.flatnonzero((counts <= lam).all(axis=1))
    covering: Dict[int, List[int]] = {g: [int(i) for i in usable if counts[i, g] > 0] for g in range(1, V)}
    logger.debug("search DF(%d,%d,%d): %d candidate blocks, R=%d", V, K, lam, len(usable), R)

    found: List[DifferenceFamily] = []
    seen = set()

    def extend(chosen: List[int], total: np.ndarray) -> bool:
        if len(chosen) == R:
            key = tuple(sorted(chosen))
            if key not in seen:
                seen.add(key)
                blocks = [[elements[i] for i in candidates[c]] for c in key]
                found.append(DifferenceFamily(group=group, blocks=blocks, lam=lam))
            return limit is not None and len(found) >= limit
        deficit = np.flatnonzero(total[1:] < lam)
        target = int(deficit[0]) + 1
        for c in covering[target]:
            new_total = total + counts[c]
            if (new_total <= lam).all():
                chosen.append(c)
                if extend(chosen, new_total):
                    return True
                chosen.pop()
        return False

    show = settings.progress if progress is None else progress
    start = np.zeros(V, dtype=np.int64)
    first_target = 1
    for c in tqdm(covering.get(first_target, []), desc=f"DF({V},{K},{lam})", file=sys.stderr,
                  disable=not show, leave=False):
        if extend([c], start + counts[c]):
            break
    return found


def complement_df(df: DifferenceFamily) -> Optional[DifferenceFamily]:
    """{V minus D_r} as a difference family of the same group."""
    everything = df.group.elements() if df.subgroup is None else list(df.subgroup.elements)
    blocks = [[g for g in everything if g not in set(block)] for block in df.blocks]
    if len(blocks[0]) < 2:
        return None
    return verify_df(df.group, blocks, df.subgroup)


def search_dds(group: AbelianGroup, subgroup: Subgroup, size: int,
               semiregular_only: bool = True, limit: Optional[int] = None) -> List[DivisibleDifferenceSet]:
    """Brute-force divisible difference sets of a given size containing 0."""
    group.check_cap(cap=get_settings().search_cap)
    elements = group.elements()
    results = []
    for rest in combinations(range(1, group.order), size - 1):
        subset = [elements[0]] + [elements[i] for i in rest]
        dds = verify_dds(group, subgroup, subset)
        if dds is None or (semiregular_only and not dds.semiregular):
            continue
        results.append(dds)
        if limit is not None and len(results) >= limit:
            break
    return results


def verify_bibd(design: BlockDesign) -> Optional[BibdParameters]:
    """Parameters (V, K, lam, B, r) of a balanced incomplete block design, or None."""
    if not design.blocks:
        return None
    sizes = {len(set(b)) for b in design.blocks}
    if len(sizes) != 1 or any(len(set(b)) != len(b) for b in design.blocks):
        return None
    K = sizes.pop()
    if any(not 0 <= p < design.V for b in design.blocks for p in b):
        raise ParameterError(f"blocks must use points 0..{design.V - 1}")
    incidence = np.zeros((design.V, len(design.blocks)), dtype=np.int64)
    for j, block in enumerate(design.blocks):
        incidence[block, j] = 1
    pairs = incidence @ incidence.T
    off_diagonal = pairs[~np.eye(design.V, dtype=bool)]
    if off_diagonal.min() != off_diagonal.max() or off_diagonal.min() < 1:
        return None
    replication = np.diag(pairs)
    if replication.min() != replication.max():
        return None
    return BibdParameters(V=design.V, K=K, lam=int(off_diagonal[0]), B=len(design.blocks), r=int(replication[0]))


def complete_design(V: int, K: int) -> BlockDesign:
    """All K-subsets of V points, a BIBD(V, K, C(V-2, K-2))."""
    if not 2 <= K < V:
        raise ParameterError(f"complete designs need 2 <= K < V, got K={K}, V={V}")
    return BlockDesign(V=V, blocks=[list(b) for b in combinations(range(V), K)])


def develop(df: DifferenceFamily) -> BlockDesign:
    """All translates of the blocks of a difference family of the whole group."""
    if df.subgroup is not None:
        raise ParameterError("only difference families of the whole group can be developed")
    group = df.group
    blocks = []
    for block in df.blocks:
        for s in group.elements():
            blocks.append(sorted(group.index(b + s) for b in block))
    return BlockDesign(V=group.order, blocks=blocks)
