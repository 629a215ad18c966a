"""
Catalog of known minimal-parameter EITFF and ECTFF constructions, and the
engine that certifies a parameter triple against it.

Rule outcomes are three-valued. Yes means a catalogued construction gives the
parameters, No means none of them can, and Unknown means the answer hangs on an
open existence question (a Hadamard order, an ETF, a BIBD) or on a recursion
that was cut short. "Novel" is always relative to the loaded catalog version.
"""
import logging
import math
import sys
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from pathlib import Path
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from pydantic import BaseModel, Field
from sympy import divisors
from tqdm import tqdm

from rules import load_rules
from .designs import search_df
from .errors import CatalogError, EctffError, ParameterError
from .groups import AbelianGroup
from .triples import (
    Move,
    NumberField,
    OrbitTag,
    ParamTriple,
    classify,
    eitff_feasible,
    gerzon_max,
    invariant,
    is_minimal,
    is_trivial_seed,
    minimal_point,
    naimark,
    tff_exists,
)
from .truth import Truth
from ..settings import get_settings
from ..utils.arithmetic import (
    as_integer,
    exact_sqrt,
    is_prime,
    is_prime_power,
    is_sum_of_two_squares,
    power_of,
    prime_power_roots,
)

logger = logging.getLogger(__name__)

Evaluation = Tuple[Truth, List[str]]


class RuleKind(str, Enum):
    EITFF = "EITFF"
    ECTFF = "ECTFF"


class Verdict(str, Enum):
    COVERED = "CoveredByCatalog"
    NOVEL = "Novel"
    INDETERMINATE = "Indeterminate"
    SETTLED_NEGATIVE = "SettledNegative"
    SETTLED_BY_F_NEG = "SettledByFNeg"


class CatalogRule(BaseModel):
    id: str
    kind: RuleKind
    clause: str
    provenance: str
    field: str = Field("inherit", description="real, complex, inherit or conditional")


class RuleOutcome(BaseModel):
    """Result of one catalog rule on one minimal triple."""
    id: str
    kind: RuleKind
    outcome: Truth
    evidence: List[str] = []
    provenance: str

    def line(self) -> str:
        reasons = "; ".join(self.evidence) if self.evidence else "no details"
        return f"{self.id} [{self.outcome.value}]: {reasons} ({self.provenance})"


class NumericalRange(BaseModel):
    D: int
    R: int
    n_min: int
    n_max: int


class CertificationReport(BaseModel):
    query: ParamTriple
    field: NumberField
    f_value: int
    orbit_tag: OrbitTag
    minimal: Optional[ParamTriple] = None
    verdict: Verdict
    tff_exists: Optional[bool] = None
    seed: Optional[ParamTriple] = None
    chain: List[Move] = []
    matched_rules: List[RuleOutcome] = []
    eitff_rules: List[RuleOutcome] = []
    constructions: List[RuleOutcome] = []
    narrative: List[str] = []
    catalog_version: str
    catalog_hash: str


@lru_cache(maxsize=8)
def hadamard_closure(bound: int) -> FrozenSet[int]:
    """Hadamard orders up to `bound` from Sylvester doubling and both Paley constructions."""
    base = {2}
    for q in range(3, bound):
        if is_prime_power(q) is None:
            continue
        if q % 4 == 3 and q + 1 <= bound:
            base.add(q + 1)
        if q % 4 == 1 and 2 * (q + 1) <= bound:
            base.add(2 * (q + 1))
    orders = {1} | base
    frontier = set(orders)
    while frontier:
        fresh = {a * b for a in frontier for b in base if a * b <= bound} - orders
        orders |= fresh
        frontier = fresh
    return frozenset(orders)


class ExistenceTables(BaseModel):
    """Curated existence data plus the closed-form families computed around it."""
    etf_table: Dict[NumberField, Dict[Tuple[int, int], Truth]]
    sic_max_dim: int = 0
    bibd_table: Dict[Tuple[int, int, int], Truth] = {}
    hadamard_orders: FrozenSet[int] = frozenset()
    quaternionic_etf: FrozenSet[Tuple[int, int]] = frozenset()
    sporadic_ectff: List[ParamTriple] = []
    numerical_ectff: List[NumericalRange] = []
    sporadic_eitff: List[ParamTriple] = []

    @classmethod
    def from_rules(cls, tables: Dict, hadamard_bound: int) -> "ExistenceTables":
        try:
            etf = {}
            for name, field in (("complex", NumberField.COMPLEX), ("real", NumberField.REAL)):
                entries = tables["etf"][name]
                table = {(d, n): Truth.YES for d, n in entries.get("yes", [])}
                table.update({(d, n): Truth.NO for d, n in entries.get("no", [])})
                etf[field] = table
            quaternionic = {(d, n) for d, lo, hi in tables["quaternionic_etf"] for n in range(lo, hi + 1)}
            bibd = {tuple(v): Truth.YES for v in tables["bibd"].get("yes", [])}
            bibd.update({tuple(v): Truth.NO for v in tables["bibd"].get("no", [])})
            hadamard = set(hadamard_closure(hadamard_bound)) | set(tables.get("hadamard_extra", []))
            return cls(
                etf_table=etf,
                sic_max_dim=tables["etf"].get("sic_max_dim", 0),
                bibd_table=bibd,
                hadamard_orders=frozenset(hadamard),
                quaternionic_etf=frozenset(quaternionic),
                sporadic_ectff=[ParamTriple.of(*t) for t in tables.get("sporadic_ectff", [])],
                numerical_ectff=[NumericalRange(D=d, R=r, n_min=lo, n_max=hi)
                                 for d, r, lo, hi in tables.get("numerical_ectff", [])],
                sporadic_eitff=[ParamTriple.of(*t) for t in tables.get("sporadic_eitff", [])],
            )
        except (KeyError, TypeError, ValueError) as e:
            raise CatalogError(f"malformed existence tables: {e}") from e

    def hadamard_known(self, n: int) -> Truth:
        if n < 1:
            raise ParameterError(f"Hadamard orders are positive, got {n}")
        if n in (1, 2):
            return Truth.YES
        if n % 4:
            return Truth.NO
        return Truth.YES if n in self.hadamard_orders else Truth.UNKNOWN

    def etf_known(self, D: int, N: int, field: NumberField) -> Tuple[Truth, str]:
        """Existence of an ETF(D, N) over the given field, with the reason."""
        if D < 1 or N < D:
            raise ParameterError(f"ETF(D, N) needs 1 <= D <= N, got ({D}, {N})")
        if D == 1 or N in (D, D + 1):
            return Truth.YES, f"ETF({D},{N}) is an orthonormal basis, a regular simplex or a set of scalars"
        for d in (D, N - D):
            bound = gerzon_max(d, field)
            if N > bound:
                return Truth.NO, f"ETF({d},{N}) violates Gerzon's bound: N = {N} > {bound}"
        table = self.etf_table[field]
        for key in ((D, N), (N - D, N)):
            if key in table:
                verb = "exists" if table[key] is Truth.YES else "does not exist"
                return table[key], f"{field.value.lower()} ETF{key} {verb} (tabulated)"
        if field is NumberField.COMPLEX and self.etf_table[NumberField.REAL].get((D, N)) is Truth.YES:
            return Truth.YES, f"real ETF({D},{N}) is tabulated"
        for d in (D, N - D):
            pk = is_prime_power(N - 1)
            if N == 2 * d and pk is not None and (N - 1) % 4 == 1:
                return Truth.YES, f"ETF({d},{N}) from a symmetric conference matrix (N - 1 = {N - 1} a prime power)"
            if field is NumberField.COMPLEX:
                if N == d * d and d <= self.sic_max_dim:
                    return Truth.YES, f"SIC-POVM in dimension {d}"
                q = d - 1
                if q >= 2 and is_prime_power(q) and N == q * q + q + 1:
                    return Truth.YES, f"harmonic ETF({d},{N}) from a Singer difference set (q = {q})"
                if is_prime_power(N) and N % 4 == 3 and d == (N - 1) // 2:
                    return Truth.YES, f"harmonic ETF({d},{N}) from a Paley difference set"
        if field is NumberField.REAL:
            if N == 2 * D:
                if N % 4 != 2 or not is_sum_of_two_squares(N - 1):
                    return Truth.NO, f"real ETF({D},{2 * D}) needs N = 2 mod 4 and N - 1 a sum of two squares"
            else:
                for label, value in (("D(N-1)/(N-D)", Fraction(D * (N - 1), N - D)),
                                     ("(N-D)(N-1)/D", Fraction((N - D) * (N - 1), D))):
                    n = as_integer(value)
                    root = exact_sqrt(n) if n is not None else None
                    if root is None or root % 2 == 0:
                        return Truth.NO, f"real ETF({D},{N}) needs sqrt({label}) = sqrt({value}) to be an odd integer"
        return Truth.UNKNOWN, f"{field.value.lower()} ETF({D},{N}) is not settled by the tables"

    def _bibd_base(self, V: int, K: int, lam: int) -> Optional[Tuple[Truth, str]]:
        if (V, K, lam) in self.bibd_table:
            truth = self.bibd_table[(V, K, lam)]
            return truth, f"BIBD({V},{K},{lam}) {'exists' if truth is Truth.YES else 'does not exist'} (tabulated)"
        if lam % comb(V - 2, K - 2) == 0:
            return Truth.YES, f"{lam // comb(V - 2, K - 2)} copies of the complete design of {K}-subsets"
        if lam == 1:
            q = K - 1
            if is_prime_power(q) and V == q * q + q + 1:
                return Truth.YES, f"projective plane of order {q}"
            if is_prime_power(K) and V == K * K:
                return Truth.YES, f"affine plane of order {K}"
            if K == 5 and V % 20 in (1, 5):
                return Truth.YES, "Steiner system with blocks of size 5, V = 1 or 5 mod 20"
        if K in (3, 4):
            return Truth.YES, f"Hanani: every admissible BIBD with K = {K} exists"
        t = (V + 1) // 4
        if V == 4 * t - 1 and K == 2 * t - 1 and lam == t - 1:
            truth = self.hadamard_known(4 * t)
            if truth is not Truth.NO:
                return truth, f"Hadamard design from a Hadamard matrix of order {4 * t} ({truth.value})"
        return None

    def bibd_known(self, V: int, K: int, lam: int) -> Tuple[Truth, str]:
        """Existence of a BIBD(V, K, lam): admissibility and Fisher first, then constructions."""
        if not 2 <= K < V or lam < 1:
            raise ParameterError(f"BIBD(V, K, lambda) needs 2 <= K < V and lambda >= 1, got ({V}, {K}, {lam})")
        r, r_rem = divmod(lam * (V - 1), K - 1)
        B, B_rem = divmod(lam * V * (V - 1), K * (K - 1))
        if r_rem or B_rem:
            return Truth.NO, f"BIBD({V},{K},{lam}) is not admissible: r or B is not an integer"
        if B < V:
            return Truth.NO, f"Fisher's inequality fails for BIBD({V},{K},{lam}): B = {B} < V = {V}"
        candidates = [(V, K, lam)]
        if V - K >= 2:
            candidates.append((V, V - K, B - 2 * r + lam))
        unknown = None
        for v, k, l in candidates:
            for d in divisors(l):
                if (d * (v - 1)) % (k - 1) or (d * v * (v - 1)) % (k * (k - 1)):
                    continue
                found = self._bibd_base(v, k, d)
                if found is None:
                    continue
                truth, why = found
                note = why if d == l else f"{l // d} copies of BIBD({v},{k},{d}): {why}"
                if (v, k, l) != (V, K, lam):
                    note = f"complement of BIBD({v},{k},{l}): {note}"
                if truth is Truth.YES:
                    return Truth.YES, note
                if truth is Truth.NO and d == l:
                    return Truth.NO, note
                unknown = unknown or note
        return Truth.UNKNOWN, unknown or f"BIBD({V},{K},{lam}) is admissible but not settled by the tables"


def novel_family(limit: int) -> List[ParamTriple]:
    """((Q-1)/2, Q, 3) for prime powers 19 <= Q <= limit with Q = 7 mod 12."""
    return [ParamTriple.of((q - 1) // 2, q, 3) for q in range(19, limit + 1)
            if q % 12 == 7 and is_prime_power(q) is not None]


def eitff_parity_rule(t: ParamTriple, field: NumberField) -> Optional[Truth]:
    """EITFF(2R, 4, R): always complex, real exactly when R is even. Other shapes give None."""
    if t.N != 4 or t.D != 2 * t.R or t.R < 1:
        return None
    if field is NumberField.COMPLEX:
        return Truth.YES
    return Truth.from_bool(t.R % 2 == 0)


def _same_orbit(candidate: ParamTriple, t0: ParamTriple) -> bool:
    """True when candidate has positive entries and its orbit's minimal point is t0."""
    if candidate.N != t0.N or candidate.D < 1 or candidate.R < 1 or candidate.R > candidate.D:
        return False
    if invariant(candidate) != invariant(t0):
        return False
    return minimal_point(candidate) == t0


def _wilson_bound_exceeded(Q: int, K: int) -> bool:
    base, exponent = K * (K - 1) // 2, K * (K - 1)
    if base <= 1:
        return Q > 1
    if exponent * math.log2(base) > math.log2(Q) + 1:
        return False
    return Q > base ** exponent


class CatalogEngine:
    """Evaluates catalog rules against minimal triples and certifies queries."""

    def __init__(self, rules: Optional[Dict] = None, search: bool = False):
        settings = get_settings()
        data = rules if rules is not None else load_rules(settings.catalog)
        try:
            self.rules = [CatalogRule(**r) for r in data["rules"]]
            self.construction_rules = [CatalogRule(**r) for r in data.get("constructions", [])]
        except (KeyError, TypeError, ValueError) as e:
            raise CatalogError(f"malformed rule entry: {e}") from e
        self.version = str(data.get("catalog_version", "unversioned"))
        self.content_hash = data.get("content_hash", "")
        self.tables = ExistenceTables.from_rules(data["tables"], settings.hadamard_bound)
        self.depth_limit = settings.rule_depth
        self.search = search
        self._memo: Dict[Tuple[RuleKind, ParamTriple, NumberField], Tuple[Truth, str]] = {}
        self._gaps: List[str] = []
        self._handlers: Dict[str, Callable[[ParamTriple, NumberField, int], Evaluation]] = {
            "eitff.i": self._rule_eitff_etf,
            "eitff.ii": lambda t, f, d: self._rule_decompose(RuleKind.EITFF, t, f, d),
            "eitff.iii": lambda t, f, d: self._rule_halving(RuleKind.EITFF, t, f, d),
            "eitff.iv": self._rule_eitff_conference,
            "eitff.v": self._rule_eitff_sporadic,
            "eitff.2r4r": self._rule_eitff_2r4r,
            "ectff.i": self._rule_ectff_from_eitff,
            "ectff.ii": lambda t, f, d: self._rule_decompose(RuleKind.ECTFF, t, f, d),
            "ectff.iii": lambda t, f, d: self._rule_halving(RuleKind.ECTFF, t, f, d),
            "ectff.iv": self._rule_hadamard_gerzon,
            "ectff.v": self._rule_zauner,
            "ectff.vi": self._rule_difference_family,
            "ectff.vi.dds": self._rule_semiregular_dds,
            "ectff.vii": self._rule_simplex_partition,
            "ectff.viii": self._rule_paired_difference_sets,
            "ectff.ix": self._rule_sporadic_ectff,
            "ectff.2r4r": self._rule_ectff_2r4r,
        }
        for rule in self.rules + self.construction_rules:
            if rule.id not in self._handlers:
                raise CatalogError(f"catalog rule {rule.id!r} has no matcher")

    def rule_ids(self) -> List[str]:
        return [r.id for r in self.rules + self.construction_rules]

    def _find(self, rule_id: str) -> CatalogRule:
        for rule in self.rules + self.construction_rules:
            if rule.id == rule_id:
                return rule
        raise CatalogError(f"unknown rule id {rule_id!r}; known ids: {', '.join(self.rule_ids())}")

    def _rules_of(self, kind: RuleKind) -> List[CatalogRule]:
        return [r for r in self.rules if r.kind is kind]

    def _open(self, reason: str) -> str:
        """Record an open existence question met while evaluating rules."""
        if reason not in self._gaps:
            self._gaps.append(reason)
        return reason

    def _run(self, rule: CatalogRule, t0: ParamTriple, field: NumberField, depth: int) -> RuleOutcome:
        try:
            outcome, evidence = self._handlers[rule.id](t0, field, depth)
        except EctffError as e:
            logger.warning("rule %s failed on %s: %s", rule.id, t0, e)
            outcome, evidence = Truth.UNKNOWN, [self._open(f"rule {rule.id} failed on {t0}: {e}")]
        if rule.field == "complex" and field is NumberField.REAL and not outcome.is_no():
            outcome = Truth.NO
            evidence = evidence + ["this construction yields complex frames only"]
        return RuleOutcome(id=rule.id, kind=rule.kind, outcome=outcome, evidence=evidence,
                           provenance=rule.provenance)

    def evaluate_rule(self, rule_id: str, minimal: ParamTriple,
                      field: NumberField = NumberField.COMPLEX) -> RuleOutcome:
        rule = self._find(rule_id)
        if not is_minimal(minimal):
            raise ParameterError(f"{minimal} is not minimal: need 0 < D <= NR - D and 0 < R <= D - R")
        self._gaps = []
        return self._run(rule, minimal, field, 0)

    def covered(self, kind: RuleKind, t: ParamTriple, field: NumberField, depth: int = 0) -> Tuple[Truth, str]:
        """Whether the catalog gives a (kind) TFF with parameters t, anywhere in its orbit."""
        if t.D < 1 or t.R < 1 or t.N < 2:
            return Truth.NO, f"{t} has a nonpositive entry"
        verdict = tff_exists(t)
        if not verdict.exists:
            return Truth.NO, f"no TFF{t} exists"
        if kind is RuleKind.EITFF and not eitff_feasible(t):
            D0, N, R0 = verdict.seed.as_tuple()
            return Truth.NO, (f"TFF{t} cannot be equi-isoclinic: its orbit needs R = {R0} "
                              f"and D in {{{D0}, {N * R0 - D0}}}")
        seed = verdict.seed
        if is_trivial_seed(seed) and (invariant(t) < 0 or t.N in (2, 3)):
            return Truth.YES, f"{t} arises from the trivial TFF{seed} by complements"
        bound = gerzon_max(seed.D, field)
        if t.N > bound:
            return Truth.NO, f"{seed} violates Gerzon's bound: N = {t.N} > {bound}"
        key = (kind, seed, field)
        if key in self._memo:
            return self._memo[key]
        if depth >= self.depth_limit:
            return Truth.UNKNOWN, self._open(f"recursion depth {self.depth_limit} reached at {seed}")
        outcomes = [self._run(rule, seed, field, depth + 1) for rule in self._rules_of(kind)]
        truth = Truth.any(o.outcome for o in outcomes)
        where = str(seed)
        if truth is Truth.YES:
            reason = f"{kind.value}{where} is catalogued via {', '.join(o.id for o in outcomes if o.outcome.is_yes())}"
        elif truth is Truth.NO:
            reason = f"{kind.value}{where} is not catalogued"
        else:
            reason = f"{kind.value}{where} hangs on open entries ({', '.join(o.id for o in outcomes if o.outcome.is_unknown())})"
        if not truth.is_unknown():
            self._memo[key] = (truth, reason)
        return truth, reason

    def _quaternionic(self, kind: RuleKind, t: ParamTriple, depth: int) -> Tuple[Truth, str]:
        if t.D % t.R == 0 and (t.D // t.R, t.N) in self.tables.quaternionic_etf:
            return Truth.YES, f"quaternionic ETF({t.D // t.R},{t.N}) is known, {t.R} copies give {t}"
        truth, why = self.covered(kind, t, NumberField.COMPLEX, depth)
        if truth is Truth.YES:
            return truth, f"quaternionic {t} from the complex one: {why}"
        return truth, f"quaternionic {t} is not known: {why}"

    def _rule_eitff_etf(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        if t0.R != 1:
            return Truth.NO, [f"R0 = {t0.R} is not 1"]
        truth, why = self.tables.etf_known(t0.D, t0.N, field)
        if truth.is_unknown():
            self._open(why)
        return truth, [why]

    def _rule_decompose(self, kind: RuleKind, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        D0, N, R0 = t0.as_tuple()
        g = gcd(D0, R0)
        if g == 1:
            return Truth.NO, [f"gcd(D0, R0) = 1, so {t0} is not a sum of smaller triples with the same ratio"]
        d, r = D0 // g, R0 // g
        evidence = []
        options = []
        for k1 in range(1, g // 2 + 1):
            parts = []
            for k in sorted({k1, g - k1}):
                atom = ParamTriple.of(k * d, N, k * r)
                truth, why = self.covered(kind, atom, field, depth)
                evidence.append(f"atom {atom}: {why}")
                parts.append(truth)
                if truth.is_no():
                    break
            options.append(Truth.all(parts))
        return Truth.any(options), evidence

    def _rule_halving(self, kind: RuleKind, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        D0, N, R0 = t0.as_tuple()
        odd = [f"{name} = {value}" for name, value in (("D0", D0), ("R0", R0)) if value % 2]
        if odd:
            return Truth.NO, [f"Hoggar halving needs D0 and R0 even, but {' and '.join(odd)} {'is' if len(odd) == 1 else 'are'} odd"]
        half = ParamTriple.of(D0 // 2, N, R0 // 2)
        results, evidence = [], []
        if field is NumberField.REAL:
            truth, why = self.covered(kind, half, NumberField.COMPLEX, depth)
            results.append(truth)
            evidence.append(f"complex {half}: {why}")
        else:
            truth, why = self._quaternionic(kind, half, depth)
            results.append(truth)
            evidence.append(why)
        if D0 % 4 == 0 and R0 % 4 == 0:
            quarter = ParamTriple.of(D0 // 4, N, R0 // 4)
            truth, why = self._quaternionic(kind, quarter, depth)
            results.append(truth)
            evidence.append(why)
        return Truth.any(results), evidence

    def _rule_eitff_conference(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        D0, N, R0 = t0.as_tuple()
        if D0 != N or R0 != 2:
            return Truth.NO, [f"{t0} is not of the form (N, N, 2)"]
        pk = is_prime_power(N)
        if pk is not None and N % 4 == 1:
            return Truth.YES, [f"N = {N} is a prime power = 1 mod 4, so a symmetric conference matrix of size {N + 1} exists"]
        if N % 2 == 1:
            truth, why = self.tables.etf_known((N + 1) // 2, N + 1, NumberField.REAL)
            if truth is Truth.YES:
                return truth, [f"real symmetric conference matrix of size {N + 1}: {why}"]
        return Truth.UNKNOWN, [self._open(f"no complex symmetric conference matrix of size {N} is tabulated")]

    def _rule_eitff_sporadic(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        for t in self.tables.sporadic_eitff:
            if _same_orbit(t, t0):
                return Truth.YES, [f"{t} is a sporadic EITFF"]
        return Truth.NO, [f"{t0} is not a sporadic EITFF"]

    def _rule_eitff_2r4r(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        truth = eitff_parity_rule(t0, field)
        if truth is None:
            return Truth.NO, [f"{t0} is not of the form (2R, 4, R)"]
        if truth.is_no():
            return truth, [f"a real EITFF(2R,4,R) exists if and only if R is even, here R = {t0.R}"]
        return truth, [f"EITFF{t0} from tensoring an ETF(2,4)"]

    def _rule_ectff_from_eitff(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        truth, why = self.covered(RuleKind.EITFF, t0, field, depth)
        return truth, [why]

    def _rule_hadamard_gerzon(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        P = t0.D
        shape = ParamTriple.of(P, P * (P + 1) // 2, (P - 1) // 2)
        if t0 != shape:
            return Truth.NO, [f"{t0} is not of the form (P, P(P+1)/2, (P-1)/2) = {shape}"]
        if not is_prime(P):
            return Truth.NO, [f"P = {P} is not prime"]
        truth = self.tables.hadamard_known((P + 1) // 2)
        if truth.is_unknown():
            self._open(f"Hadamard matrix of size {(P + 1) // 2} is not settled by the tables")
        return truth, [f"Hadamard matrix of size {(P + 1) // 2}: {truth.value}"]

    def _rule_zauner(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        B, V, r = t0.as_tuple()
        evidence = []
        if B < V:
            evidence.append(f"Fisher's inequality rules out a BIBD with B = {B} < V = {V}")
        K = Fraction(V * r, B)
        if K.denominator != 1:
            evidence.append(f"K = VR/B = {V * r}/{B} is not an integer")
        if evidence:
            return Truth.NO, evidence
        K = int(K)
        if not 2 <= K < V:
            return Truth.NO, [f"K = {K} is outside 2 <= K < V = {V}"]
        lam = Fraction(r * (K - 1), V - 1)
        if lam.denominator != 1:
            return Truth.NO, [f"lambda = R(K-1)/(V-1) = {r * (K - 1)}/{V - 1} is not an integer"]
        truth, why = self.tables.bibd_known(V, K, int(lam))
        if truth.is_unknown():
            self._open(why)
        return truth, [f"BIBD({V},{K},{int(lam)}): {why}"]

    def _dds_family_points(self, t0: ParamTriple) -> Iterator[Tuple[str, ParamTriple]]:
        N, f0 = t0.N, invariant(t0)
        for Q, I in prime_power_roots(N):
            if Q < 2:
                continue
            for J in range(I, I + 64):
                R = Q ** (2 * J - 2 * I) * (Q ** I - 1) // (Q - 1)
                t = ParamTriple.of(Q ** (I - 1) * R, N, R)
                f = invariant(t)
                if f < 0 or (f == 0 and R > t0.R) or f > f0:
                    break
                yield f"affine type with Q = {Q}, I = {I}, J = {J}", t
        for Q, J in prime_power_roots(N):
            R = (Q ** J - 1) // (Q - 1)
            for L in self._field_difference_set_sizes(Q):
                yield f"difference set type with Q = {Q}, J = {J}, L = {L}", ParamTriple.of(L * Q ** (J - 1) * R, N, R)
        J = power_of(9, N)
        if J is not None and J >= 1:
            yield f"ternary type with J = {J}", ParamTriple.of(2 * (N - 3 ** J), N, 4)

    @staticmethod
    def _field_difference_set_sizes(Q: int) -> List[int]:
        """Sizes of known difference sets in the additive group of F_Q, excluding the whole group."""
        sizes = {1, Q - 1}
        if Q % 4 == 3:
            sizes |= {(Q - 1) // 2, (Q + 1) // 2}
        m = power_of(4, Q)
        if m:
            sizes |= {2 ** (2 * m - 1) - 2 ** (m - 1), 2 ** (2 * m - 1) + 2 ** (m - 1)}
        return sorted(s for s in sizes if 1 <= s < Q)

    def _rule_semiregular_dds(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        evidence = []
        integral = False
        for t in (t0, naimark(t0)):
            D, N, R = t.as_tuple()
            G = N * R
            lam2 = Fraction(D * D, G)
            lam1 = Fraction(D * (D - R), R * (N - 1))
            if lam2.denominator != 1:
                evidence.append(f"at {t}: Lambda2 = D^2/G = {D * D}/{G} = {lam2} is not an integer")
            elif lam1.denominator != 1:
                evidence.append(f"at {t}: Lambda1 = D(D-R)/(R(N-1)) = {D * (D - R)}/{R * (N - 1)} is not an integer")
            else:
                integral = True
                evidence.append(f"at {t}: Lambda1 = {lam1}, Lambda2 = {lam2} are integers")
        if not integral:
            return Truth.NO, evidence
        for label, t in self._dds_family_points(t0):
            if _same_orbit(t, t0):
                return Truth.YES, evidence + [f"semiregular DDS family ({label}) gives {t}"]
        return Truth.UNKNOWN, evidence + [self._open(f"no known semiregular DDS family gives {t0}")]

    def _rule_difference_family(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        D0, V, R = t0.as_tuple()
        if D0 % R:
            return Truth.NO, [f"R0 = {R} does not divide D0 = {D0}"]
        K = D0 // R
        lam = Fraction(R * K * (K - 1), V - 1)
        if lam.denominator != 1:
            return Truth.NO, [f"lambda = RK(K-1)/(V-1) = {R * K * (K - 1)}/{V - 1} is not an integer"]
        lam = int(lam)
        if is_prime_power(V) is not None and K <= V:
            Q = V
            checks = [
                ((2 * R * K) % (Q - 1) == 0, f"2RK/(Q-1) = {2 * R * K}/{Q - 1} is an integer"),
                ((2 * R * (K - 1)) % (Q - 1) == 0, f"2R(K-1)/(Q-1) = {2 * R * (K - 1)}/{Q - 1} is an integer"),
                (R >= Q - 1, f"R = {R} >= Q - 1 = {Q - 1}"),
                (_wilson_bound_exceeded(Q, K), f"Q = {Q} exceeds (K(K-1)/2)^(K(K-1))"),
            ]
            for ok, why in checks:
                if ok:
                    return Truth.YES, [f"DF({V},{K},{lam}) exists over F_{Q} (Wilson): {why}"]
        if self.search and V <= get_settings().search_cap:
            found = search_df(AbelianGroup.cyclic(V), K, lam, limit=1)
            if found:
                blocks = [[str(g) for g in b] for b in found[0].blocks]
                return Truth.YES, [f"DF({V},{K},{lam}) found by search in Z{V}: {blocks}"]
            if is_prime(V):
                return Truth.NO, [f"exhaustive search found no DF({V},{K},{lam}) in Z{V}, the only group of order {V}"]
            return Truth.UNKNOWN, [f"no DF({V},{K},{lam}) in Z{V}; other groups of order {V} were not searched"]
        return Truth.UNKNOWN, [f"DF({V},{K},{lam}) is not settled by Wilson's conditions"]

    def _rule_simplex_partition(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        D0, N, Q = t0.as_tuple()
        if D0 != N or Q * Q - Q + 1 != N:
            return Truth.NO, [f"{t0} is not of the form (Q^2-Q+1, Q^2-Q+1, Q)"]
        if Q < 3 or is_prime_power(Q) is None:
            return Truth.NO, [f"Q = {Q} is not a prime power >= 3"]
        if field is NumberField.REAL and Q % 2 == 0:
            return Truth.NO, [f"Q = {Q} is even, and only odd Q give real frames"]
        return Truth.YES, [f"Q = {Q} is a prime power"]

    def _rule_paired_difference_sets(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        J = power_of(4, t0.N)
        if J is None or J < 2:
            return Truth.NO, [f"N = {t0.N} is not 2^(2J) with J >= 2"]
        for eps in (1, -1):
            numerator = 2 ** (J - 1) * (2 ** J + 3 * eps) + 1
            if numerator % 3:
                continue
            t = ParamTriple.of(2 ** (J - 1) * (2 ** J + eps), t0.N, numerator // 3)
            if t == t0:
                return Truth.YES, [f"J = {J}, epsilon = {eps}"]
        return Truth.NO, [f"{t0} matches neither sign for J = {J}"]

    def _rule_sporadic_ectff(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        for t in self.tables.sporadic_ectff:
            if _same_orbit(t, t0):
                return Truth.YES, [f"{t} is a sporadic real ECTFF"]
        for entry in self.tables.numerical_ectff:
            if entry.n_min <= t0.N <= entry.n_max and _same_orbit(ParamTriple.of(entry.D, t0.N, entry.R), t0):
                return Truth.YES, [f"({entry.D},{t0.N},{entry.R}) lies in a numerically certified range"]
        return Truth.NO, [f"{t0} is neither sporadic nor in a numerically certified range"]

    def _rule_ectff_2r4r(self, t0: ParamTriple, field: NumberField, depth: int) -> Evaluation:
        if t0.N != 4 or t0.D != 2 * t0.R:
            return Truth.NO, [f"{t0} is not of the form (2R, 4, R)"]
        if field is NumberField.REAL and t0.R == 1:
            return Truth.NO, ["a real ECTFF(2,4,1) would violate Gerzon's bound"]
        return Truth.YES, [f"ECTFF{t0} exists for every R"]

    def certify(self, t: ParamTriple, field: NumberField = NumberField.COMPLEX) -> CertificationReport:
        if t.N < 2 or t.D < 1 or t.R < 1:
            raise ParameterError(f"certify needs D, R >= 1 and N >= 2, got {t}")
        f = invariant(t)
        orbit = classify(t)
        base = dict(query=t, field=field, f_value=f, orbit_tag=orbit.tag,
                    catalog_version=self.version, catalog_hash=self.content_hash)
        narrative = [f"f{t} = DNR - D^2 - NR^2 = {f}"]

        if f < 0:
            verdict = tff_exists(t)
            narrative.append("f < 0: every TFF with these parameters is equichordal, and a real one exists whenever any does")
            if verdict.exists:
                narrative.append(f"a TFF{t} exists: it comes from the trivial TFF{verdict.seed} "
                                 f"by {len(verdict.chain)} complements")
            else:
                narrative.append(f"no TFF{t} exists: the orbit bottoms out at {orbit.minimal_point}, "
                                 f"which is not a trivial seed")
            return CertificationReport(**base, minimal=orbit.minimal_point, verdict=Verdict.SETTLED_BY_F_NEG,
                                       tff_exists=verdict.exists, seed=verdict.seed, chain=verdict.chain,
                                       narrative=narrative)

        t0 = orbit.minimal_point
        chain = tff_exists(t).chain
        if t0 == t:
            narrative.append(f"{t} is its own minimal point")
        else:
            narrative.append(f"{t} is reached from the minimal point {t0} by {len(chain)} complements")
        bound = gerzon_max(t0.D, field)
        if t.N > bound:
            narrative.append(f"{t0} violates Gerzon's bound: N = {t.N} > {bound}, so no "
                             f"{field.value.lower()} ECTFF exists anywhere in the orbit")
            return CertificationReport(**base, minimal=t0, verdict=Verdict.SETTLED_NEGATIVE, tff_exists=True,
                                       seed=t0, chain=chain, narrative=narrative)

        self._gaps = []
        ectff = [self._run(rule, t0, field, 0) for rule in self._rules_of(RuleKind.ECTFF)]
        gaps = list(self._gaps)
        eitff = [self._run(rule, t0, field, 0) for rule in self._rules_of(RuleKind.EITFF)]
        constructions = [self._run(rule, t0, field, 0) for rule in self.construction_rules]
        narrative.extend(o.line() for o in ectff)
        narrative.extend(f"EITFF sub-catalog {o.line()}" for o in eitff)
        narrative.extend(f"construction {o.line()}" for o in constructions)

        overall = Truth.any(o.outcome for o in ectff)
        if overall is Truth.YES:
            verdict = Verdict.COVERED
        elif overall is Truth.NO:
            verdict = Verdict.NOVEL
        else:
            verdict = Verdict.INDETERMINATE
            if gaps and all("ETF(" in gap and gap.endswith("not settled by the tables") for gap in gaps):
                narrative.append(f"the ETF table is the only gap: {'; '.join(gaps)}")
            elif gaps:
                narrative.append(f"open entries: {'; '.join(gaps)}")
        narrative.append(f"verdict: {verdict.value} relative to catalog {self.version}")
        logger.info("certified %s (%s): %s", t, field.value, verdict.value)
        return CertificationReport(**base, minimal=t0, verdict=verdict, tff_exists=True, seed=t0, chain=chain,
                                   matched_rules=ectff, eitff_rules=eitff, constructions=constructions,
                                   narrative=narrative)

    def certify_batch(self, triples: Iterable[ParamTriple], field: NumberField = NumberField.COMPLEX,
                      progress: Optional[bool] = None) -> List[CertificationReport]:
        triples = list(triples)
        show = get_settings().progress if progress is None else progress
        return [self.certify(t, field) for t in tqdm(triples, desc="certify", file=sys.stderr,
                                                     disable=not show, leave=False)]


@lru_cache(maxsize=4)
def default_engine(path: Optional[str] = None, search: bool = False) -> CatalogEngine:
    data = load_rules(Path(path)) if path else None
    return CatalogEngine(rules=data, search=search)


def certify(t: ParamTriple, field: NumberField = NumberField.COMPLEX) -> CertificationReport:
    return default_engine().certify(t, field)


def evaluate_rule(rule_id: str, minimal: ParamTriple, field: NumberField = NumberField.COMPLEX) -> RuleOutcome:
    return default_engine().evaluate_rule(rule_id, minimal, field)


def hadamard_known(n: int) -> Truth:
    return default_engine().tables.hadamard_known(n)


def etf_known(D: int, N: int, field: NumberField = NumberField.COMPLEX) -> Truth:
    return default_engine().tables.etf_known(D, N, field)[0]


def bibd_known(V: int, K: int, lam: int) -> Truth:
    return default_engine().tables.bibd_known(V, K, lam)[0]
