"""
Finite abelian groups as products of cyclic groups.

Elements are mixed-radix coordinate vectors; the integer index of an element
(first coordinate most significant) agrees with lexicographic coordinate
order. Characters are identified with elements through
gamma_a(g) = exp(2 pi i sum_j a_j g_j / n_j), so the dual group and its
subgroups live in the same coordinates as the group.
"""
import logging
import re
from functools import lru_cache
from math import lcm, prod
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .errors import ParameterError, SearchCapError
from ..settings import get_settings

logger = logging.getLogger(__name__)


class AbelianGroup(BaseModel):
    """Z_{n_1} x ... x Z_{n_m}."""
    model_config = ConfigDict(frozen=True)

    moduli: Tuple[int, ...]

    @field_validator("moduli")
    @classmethod
    def _positive_moduli(cls, v):
        if not v or any(n < 1 for n in v):
            raise ValueError(f"moduli must be a nonempty sequence of integers >= 1, got {v}")
        return tuple(int(n) for n in v)

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls(moduli=(n,))

    @property
    def order(self) -> int:
        return prod(self.moduli)

    @property
    def exponent(self) -> int:
        return lcm(*self.moduli)

    def literal(self) -> str:
        return "x".join(f"Z{n}" for n in self.moduli)

    def __str__(self) -> str:
        return self.literal()

    def element(self, *coords: int) -> "GroupElement":
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) != len(self.moduli):
            raise ParameterError(f"{coords} has {len(coords)} coordinates, {self} needs {len(self.moduli)}")
        return GroupElement(coords=tuple(int(c) % n for c, n in zip(coords, self.moduli)), moduli=self.moduli)

    def zero(self) -> "GroupElement":
        return self.element(*([0] * len(self.moduli)))

    def elements(self) -> List["GroupElement"]:
        return [self.from_index(i) for i in range(self.order)]

    def index(self, g: "GroupElement") -> int:
        self.check_member(g)
        idx = 0
        for c, n in zip(g.coords, self.moduli):
            idx = idx * n + c
        return idx

    def from_index(self, i: int) -> "GroupElement":
        coords = _coordinates(self.moduli)[i]
        return GroupElement(coords=tuple(int(c) for c in coords), moduli=self.moduli)

    def indices(self, elements: Iterable["GroupElement"]) -> np.ndarray:
        return np.array(sorted({self.index(g) for g in elements}), dtype=np.int64)

    def check_member(self, g: "GroupElement") -> None:
        if g.moduli != self.moduli:
            raise ParameterError(f"element {g} does not belong to {self}")

    def check_cap(self, cap: int = 0) -> None:
        cap = cap or get_settings().group_cap
        if self.order > cap:
            raise SearchCapError(f"group order {self.order} of {self} exceeds the cap {cap}")


class GroupElement(BaseModel):
    model_config = ConfigDict(frozen=True)

    coords: Tuple[int, ...]
    moduli: Tuple[int, ...]

    @model_validator(mode="after")
    def _in_range(self):
        if len(self.coords) != len(self.moduli):
            raise ValueError("coordinate count does not match the parent group")
        if any(not 0 <= c < n for c, n in zip(self.coords, self.moduli)):
            raise ValueError(f"coordinates {self.coords} out of range for moduli {self.moduli}")
        return self

    def _same_parent(self, other: "GroupElement") -> None:
        if self.moduli != other.moduli:
            raise ParameterError(f"mismatched parent groups {self.moduli} and {other.moduli}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._same_parent(other)
        return GroupElement(coords=tuple((a + b) % n for a, b, n in zip(self.coords, other.coords, self.moduli)),
                            moduli=self.moduli)

    def __neg__(self) -> "GroupElement":
        return GroupElement(coords=tuple((-a) % n for a, n in zip(self.coords, self.moduli)), moduli=self.moduli)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __lt__(self, other: "GroupElement") -> bool:
        return self.coords < other.coords

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return str(self.coords[0]) if len(self.coords) == 1 else "(" + ",".join(map(str, self.coords)) + ")"


class Subgroup(BaseModel):
    """A subgroup stored as its canonically sorted element list."""
    model_config = ConfigDict(frozen=True)

    parent: AbelianGroup
    elements: Tuple[GroupElement, ...]

    @model_validator(mode="after")
    def _closed(self):
        members = set(self.elements)
        if list(self.elements) != sorted(members):
            raise ValueError("subgroup elements must be distinct and sorted")
        for g in self.elements:
            self.parent.check_member(g)
        if self.parent.zero() not in members:
            raise ValueError("a subgroup must contain the identity")
        idx = self.parent.indices(self.elements)
        coords = _coordinates(self.parent.moduli)[idx]
        differences = _ravel(coords[:, None, :] - coords[None, :, :], self.parent.moduli)
        if not np.isin(differences, idx).all():
            raise ValueError("elements are not closed under subtraction")
        return self

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_array(self) -> np.ndarray:
        return self.parent.indices(self.elements)

    def __contains__(self, g: GroupElement) -> bool:
        return g in set(self.elements)

    def literal(self) -> str:
        return "{" + ",".join(str(g) for g in self.elements) + "}"


@lru_cache(maxsize=64)
def _coordinates(moduli: Tuple[int, ...]) -> np.ndarray:
    grids = np.indices(moduli).reshape(len(moduli), -1).T
    return grids.astype(np.int64)


def _ravel(coords: np.ndarray, moduli: Tuple[int, ...]) -> np.ndarray:
    return np.ravel_multi_index(tuple(np.moveaxis(coords % np.array(moduli), -1, 0)), moduli)


@lru_cache(maxsize=64)
def _unit_roots(L: int) -> np.ndarray:
    roots = np.exp(2j * np.pi * np.arange(L) / L)
    roots[0] = 1
    if L % 2 == 0:
        roots[L // 2] = -1
    if L % 4 == 0:
        roots[L // 4], roots[3 * L // 4] = 1j, -1j
    return roots


def _phases(group: AbelianGroup, a_idx: np.ndarray, g_idx: np.ndarray) -> np.ndarray:
    """Integer phases p with gamma_a(g) = exp(2 pi i p / L), L the group exponent."""
    L = group.exponent
    coords = _coordinates(group.moduli)
    scale = np.array([L // n for n in group.moduli], dtype=np.int64)
    return (coords[a_idx] * scale) @ coords[g_idx].T % L


@lru_cache(maxsize=32)
def character_table(group: AbelianGroup) -> np.ndarray:
    """X[a, g] = gamma_a(g); symmetric under the self-duality identification."""
    group.check_cap()
    everything = np.arange(group.order)
    return _unit_roots(group.exponent)[_phases(group, everything, everything)]


def character_value(a: GroupElement, g: GroupElement) -> complex:
    a._same_parent(g)
    group = AbelianGroup(moduli=a.moduli)
    phase = _phases(group, np.array([group.index(a)]), np.array([group.index(g)]))[0, 0]
    return complex(_unit_roots(group.exponent)[phase])


def _as_vector(group: AbelianGroup, y: Sequence[complex]) -> np.ndarray:
    y = np.asarray(y, dtype=complex)
    if y.shape != (group.order,):
        raise ParameterError(f"vector of shape {y.shape} does not match group order {group.order}")
    return y


def dft(group: AbelianGroup, y: Sequence[complex]) -> np.ndarray:
    """(Gamma^* y)(a) = sum_g conj(gamma_a(g)) y(g)."""
    return character_table(group).conj() @ _as_vector(group, y)


def idft(group: AbelianGroup, y_hat: Sequence[complex]) -> np.ndarray:
    return character_table(group) @ _as_vector(group, y_hat) / group.order


def difference_table(group: AbelianGroup) -> np.ndarray:
    """T[g, h] = index of g - h."""
    coords = _coordinates(group.moduli)
    return _ravel(coords[:, None, :] - coords[None, :, :], group.moduli)


def convolve(group: AbelianGroup, y1: Sequence[complex], y2: Sequence[complex]) -> np.ndarray:
    """(y1 * y2)(g) = sum_h y1(g - h) y2(h)."""
    y1, y2 = _as_vector(group, y1), _as_vector(group, y2)
    return (y1[difference_table(group)] * y2[None, :]).sum(axis=1)


def involution(group: AbelianGroup, y: Sequence[complex]) -> np.ndarray:
    """y~(g) = conj(y(-g))."""
    y = _as_vector(group, y)
    negatives = _ravel(-_coordinates(group.moduli), group.moduli)
    return y[negatives].conj()


def indicator(group: AbelianGroup, subset: Iterable[GroupElement]) -> np.ndarray:
    chi = np.zeros(group.order)
    chi[group.indices(subset)] = 1.0
    return chi


def autocorrelation(group: AbelianGroup, subset: Iterable[GroupElement]) -> np.ndarray:
    """Integer vector whose value at g is #[S intersect (g + S)]."""
    idx = group.indices(subset)
    coords = _coordinates(group.moduli)[idx]
    diffs = _ravel(coords[:, None, :] - coords[None, :, :], group.moduli)
    return np.bincount(diffs.ravel(), minlength=group.order).astype(np.int64)


def subgroup_from_elements(group: AbelianGroup, elements: Iterable[GroupElement]) -> Subgroup:
    try:
        return Subgroup(parent=group, elements=tuple(sorted(set(elements))))
    except ValueError as exc:
        raise ParameterError(f"not a subgroup of {group}: {exc}") from exc


def subgroup_from_generators(group: AbelianGroup, generators: Iterable[GroupElement]) -> Subgroup:
    members = {group.zero()}
    frontier = [group.zero()]
    generators = list(generators)
    for g in generators:
        group.check_member(g)
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = x + g
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(parent=group, elements=tuple(sorted(members)))


def trivial_subgroup(group: AbelianGroup) -> Subgroup:
    return Subgroup(parent=group, elements=(group.zero(),))


def whole_group(group: AbelianGroup) -> Subgroup:
    return Subgroup(parent=group, elements=tuple(group.elements()))


def annihilator(H: Subgroup) -> Subgroup:
    """{a : gamma_a(h) = 1 for all h in H}, a subgroup of order G/|H|."""
    group = H.parent
    phases = _phases(group, np.arange(group.order), H.index_array())
    members = np.flatnonzero((phases == 0).all(axis=1))
    return Subgroup(parent=group, elements=tuple(group.from_index(int(i)) for i in members))


def cosets(H: Subgroup) -> List[List[GroupElement]]:
    """Cosets of H, each sorted, listed by their least (canonical) representative."""
    group = H.parent
    assigned = np.zeros(group.order, dtype=bool)
    h_coords = _coordinates(group.moduli)[H.index_array()]
    partition = []
    for i in range(group.order):
        if assigned[i]:
            continue
        members = np.sort(_ravel(_coordinates(group.moduli)[i] + h_coords, group.moduli))
        assigned[members] = True
        partition.append([group.from_index(int(j)) for j in members])
    return partition


def coset_representatives(H: Subgroup) -> List[GroupElement]:
    return [coset[0] for coset in cosets(H)]


def all_subgroups(group: AbelianGroup) -> List[Subgroup]:
    """Every subgroup, by closing under one extra generator until nothing new appears."""
    group.check_cap(cap=256)
    found = {frozenset([group.zero()])}
    frontier = list(found)
    everything = group.elements()
    while frontier:
        nxt = []
        for members in frontier:
            for g in everything:
                if g in members:
                    continue
                bigger = frozenset(subgroup_from_generators(group, list(members) + [g]).elements)
                if bigger not in found:
                    found.add(bigger)
                    nxt.append(bigger)
        frontier = nxt
    subgroups = [Subgroup(parent=group, elements=tuple(sorted(s))) for s in found]
    return sorted(subgroups, key=lambda s: (s.order, [g.coords for g in s.elements]))


_FACTOR = re.compile(r"^Z(\d+)$")


def parse_group(literal: str) -> AbelianGroup:
    """Parse "Z13", "Z3xZ3" or "Z4xZ2"."""
    factors = [part.strip() for part in literal.strip().split("x")]
    moduli = []
    for part in factors:
        match = _FACTOR.match(part)
        if not match:
            raise ParameterError(f"cannot parse group factor {part!r} in {literal!r}; expected Z<n>")
        moduli.append(int(match.group(1)))
    group = AbelianGroup(moduli=tuple(moduli))
    group.check_cap()
    return group


def _parse_tuple(text: str, arity: int) -> Tuple[int, ...]:
    values = tuple(int(v) for v in text.replace("(", "").replace(")", "").split(",") if v.strip())
    if len(values) != arity:
        raise ParameterError(f"element {text!r} needs {arity} coordinates")
    return values


def parse_subgroup(group: AbelianGroup, literal: str) -> Subgroup:
    """Parse a subgroup literal.

    Either a product of per-factor pieces ("Z13x{0}", "Z2xZ4", "{0,2}xZ2"),
    where Z<k> is the unique order-k subgroup of that cyclic factor, or a
    generator list "<(1,1),(0,2)>".
    """
    literal = literal.strip()
    arity = len(group.moduli)
    if literal.startswith("<") and literal.endswith(">"):
        body = literal[1:-1]
        chunks = re.findall(r"\(([^)]*)\)", body) if arity > 1 else [c for c in body.split(",") if c.strip()]
        gens = [group.element(*_parse_tuple(c, arity)) for c in chunks]
        return subgroup_from_generators(group, gens)
    parts = [p.strip() for p in re.split(r"x(?![^{]*})", literal)]
    if len(parts) != arity:
        raise ParameterError(f"subgroup literal {literal!r} has {len(parts)} factors, {group} has {arity}")
    pieces = []
    for part, n in zip(parts, group.moduli):
        match = _FACTOR.match(part)
        if match:
            k = int(match.group(1))
            if n % k:
                raise ParameterError(f"Z{n} has no subgroup of order {k}")
            pieces.append(list(range(0, n, n // k)))
        elif part.startswith("{") and part.endswith("}"):
            values = sorted({int(v) % n for v in part[1:-1].split(",") if v.strip()})
            pieces.append(values)
        else:
            raise ParameterError(f"cannot parse subgroup factor {part!r}")
    elements = [group.element(*coords) for coords in np.array(np.meshgrid(*pieces, indexing="ij")).reshape(arity, -1).T]
    return subgroup_from_elements(group, elements)


def parse_subset(group: AbelianGroup, items: Iterable) -> List[GroupElement]:
    """JSON subset: a list of coordinate tuples, or plain integers for cyclic groups."""
    subset = []
    for item in items:
        coords = (item,) if isinstance(item, int) else tuple(item)
        subset.append(group.element(*coords))
    if len(set(subset)) != len(subset):
        raise ParameterError("subset contains repeated elements")
    return subset
