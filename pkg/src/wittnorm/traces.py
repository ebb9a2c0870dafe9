"""Cyclic trace structures on tensor powers of free modules.

Three functors on finite free modules are equipped with a rotation
isomorphism T(M (x) N) -> T(N (x) M) and checked against the exchange
axioms: the m-fold tensor power followed by cyclic coinvariants, the raw
m-fold tensor power (the expected failure case), and the Witt-vector
norm functor: fixed vectors of the p^(r-1)-fold tensor power modulo p
times the image of the total group norm.

Everything is an exact matrix identity between induced maps on
presentations; the checks are exhaustive up to a rank cap and sampled
for naturality squares.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .abgroups import FgAbGroup, GroupHom, Presentation, induced_hom, present_quotient
from .intlinalg import IntMatrix, kernel_basis, kron, solve_int_matrix
from .polywitt import DEFAULT_CAP, CapExceeded


@dataclass(frozen=True)
class TensorCategory:
    """Finite free modules over Z (char 0) or F_p, maps as matrices.

    Objects are ranks; tensor is rank product with the lexicographic
    basis identification, so associators and unitors are identities."""
    base_char: int
    rank_cap: int

    def objects(self) -> List[int]:
        return list(range(1, self.rank_cap + 1))

    def tensor(self, a: int, b: int) -> int:
        return a * b

    def random_map(self, rng: random.Random, src: int, dst: int) -> IntMatrix:
        hi = self.base_char if self.base_char else 3
        data = {}
        for i in range(dst):
            for j in range(src):
                v = rng.randrange(hi)
                if v:
                    data[(i, j)] = v
        return IntMatrix(dst, src, data)


@dataclass(frozen=True)
class TraceAxiomReport:
    axiom: str
    ok: bool
    checked: int
    witness: Optional[str] = None


def _tuple_index(t: Tuple[int, ...], d: int) -> int:
    idx = 0
    for c in t:
        idx = idx * d + c
    return idx


def _rotation_perm(d: int, m: int) -> IntMatrix:
    """Generator of the cyclic rotation on the m-fold tensor power."""
    n = d ** m
    data = {}
    for idx, t in enumerate(itertools.product(range(d), repeat=m)):
        s = (t[-1],) + t[:-1]
        data[(_tuple_index(s, d), idx)] = 1
    return IntMatrix(n, n, data)


def _exchange_perm(a: int, b: int, m: int) -> IntMatrix:
    """Rotation by one object slot: (M (x) N)^(x)m -> (N (x) M)^(x)m.

    Factor tuples alternate M, N; the last N-factor moves to the front.
    """
    n = (a * b) ** m
    data = {}
    for idx, t in enumerate(itertools.product(range(a * b), repeat=m)):
        ms = [c // b for c in t]
        ns = [c % b for c in t]
        out = tuple(ns[k - 1] * a + ms[k] for k in range(m))
        data[(_tuple_index(out, b * a), idx)] = 1
    return IntMatrix(n, n, data)


def _kron_power(mat: IntMatrix, m: int) -> IntMatrix:
    out = mat
    for _ in range(m - 1):
        out = kron(out, mat)
    return out


class OrbitTraceTheory:
    """T(M) = cyclic coinvariants of the m-fold tensor power.

    The coinvariant presentation is written down directly on orbit
    representatives; no normal-form computation is needed."""

    def __init__(self, m: int, base_char: int = 0, rank_cap: int = 2,
                 tensor_cap: int = DEFAULT_CAP):
        if m < 1:
            raise ValueError("the tensor power must be positive")
        self.m = m
        self.category = TensorCategory(base_char, rank_cap)
        self.tensor_cap = tensor_cap
        self._values: Dict[int, Presentation] = {}

    @property
    def base_char(self) -> int:
        return self.category.base_char

    def value(self, rank: int) -> Presentation:
        pres = self._values.get(rank)
        if pres is None:
            pres = self._orbit_presentation(rank)
            self._values[rank] = pres
        return pres

    def _orbit_presentation(self, rank: int) -> Presentation:
        m, char = self.m, self.base_char
        n = rank ** m
        if n > self.tensor_cap:
            raise CapExceeded(n, self.tensor_cap)
        orbit_of: Dict[int, int] = {}
        reps: List[int] = []
        for idx, t in enumerate(itertools.product(range(rank), repeat=m)):
            if idx in orbit_of:
                continue
            col = len(reps)
            reps.append(idx)
            cur = t
            while True:
                orbit_of[_tuple_index(cur, rank)] = col
                cur = (cur[-1],) + cur[:-1]
                if cur == t:
                    break
        k = len(reps)
        proj = IntMatrix(k, n, {(orbit_of[idx], idx): 1 for idx in range(n)})
        lift = IntMatrix(n, k, {(reps[c], c): 1 for c in range(k)})
        rel: Dict[Tuple[int, int], int] = {}
        col = 0
        for idx, t in enumerate(itertools.product(range(rank), repeat=m)):
            src = _tuple_index((t[-1],) + t[:-1], rank)
            if src != idx:
                rel[(src, col)] = 1
                rel[(idx, col)] = -1
                col += 1
        if char:
            for idx in range(n):
                rel[(idx, col)] = char
                col += 1
        relations = IntMatrix(n, col, rel)
        group = FgAbGroup([char] * k)
        return Presentation(n, relations, group, proj, lift)

    def morphism(self, mat: IntMatrix) -> GroupHom:
        src, dst = self.value(mat.cols), self.value(mat.rows)
        return induced_hom(src, dst, _kron_power(mat, self.m))

    def tau(self, a: int, b: int) -> GroupHom:
        src, dst = self.value(a * b), self.value(b * a)
        return induced_hom(src, dst, _exchange_perm(a, b, self.m))


class RawPowerTraceTheory:
    """T(M) = the raw m-fold tensor power, no orbits taken.

    Same exchange map as the orbit theory; the exchange axioms are
    expected to fail for m above one."""

    def __init__(self, m: int, base_char: int = 0, rank_cap: int = 2,
                 tensor_cap: int = DEFAULT_CAP):
        if m < 1:
            raise ValueError("the tensor power must be positive")
        self.m = m
        self.category = TensorCategory(base_char, rank_cap)
        self.tensor_cap = tensor_cap
        self._values: Dict[int, Presentation] = {}

    @property
    def base_char(self) -> int:
        return self.category.base_char

    def value(self, rank: int) -> Presentation:
        pres = self._values.get(rank)
        if pres is None:
            n = rank ** self.m
            if n > self.tensor_cap:
                raise CapExceeded(n, self.tensor_cap)
            char = self.base_char
            ident = IntMatrix.identity(n)
            relations = ident.scale(char) if char else IntMatrix.zero(n, 0)
            pres = Presentation(n, relations, FgAbGroup([char] * n), ident, ident)
            self._values[rank] = pres
        return pres

    def morphism(self, mat: IntMatrix) -> GroupHom:
        src, dst = self.value(mat.cols), self.value(mat.rows)
        return induced_hom(src, dst, _kron_power(mat, self.m))

    def tau(self, a: int, b: int) -> GroupHom:
        src, dst = self.value(a * b), self.value(b * a)
        return induced_hom(src, dst, _exchange_perm(a, b, self.m))


class NormTraceTheory:
    """T(M) = fixed vectors of the p^(r-1) tensor power of the integral
    lift, modulo p times the image of the total group norm.

    This is the top level of the norm pipeline; morphisms transport
    integral representative matrices (entries 0..p-1 for the canonical
    lift of an F_p-linear map)."""

    def __init__(self, p: int, r: int, rank_cap: int = 2,
                 tensor_cap: int = DEFAULT_CAP):
        if r < 1:
            raise ValueError("truncation level must be >= 1")
        self.p = p
        self.r = r
        self.m = p ** (r - 1)
        self.category = TensorCategory(p, rank_cap)
        self.tensor_cap = tensor_cap
        self._values: Dict[int, Tuple[IntMatrix, Presentation]] = {}

    @property
    def base_char(self) -> int:
        return self.p

    def _fixed_and_pres(self, rank: int) -> Tuple[IntMatrix, Presentation]:
        hit = self._values.get(rank)
        if hit is None:
            n = rank ** self.m
            if n > self.tensor_cap:
                raise CapExceeded(n, self.tensor_cap)
            alpha = _rotation_perm(rank, self.m)
            ident = IntMatrix.identity(n)
            fixed = kernel_basis(alpha - ident)
            norm = IntMatrix.zero(n, n)
            power = ident
            for _ in range(self.m):
                norm = norm + power
                power = alpha * power
            coords = solve_int_matrix(fixed, norm.scale(self.p))
            if coords is None:
                raise AssertionError("norm image must lie in the fixed lattice")
            hit = (fixed, present_quotient(fixed.cols, coords))
            self._values[rank] = hit
        return hit

    def value(self, rank: int) -> Presentation:
        return self._fixed_and_pres(rank)[1]

    def _descend(self, amb: IntMatrix, src_rank: int, dst_rank: int) -> GroupHom:
        src_fixed, src_pres = self._fixed_and_pres(src_rank)
        dst_fixed, dst_pres = self._fixed_and_pres(dst_rank)
        carried = solve_int_matrix(dst_fixed, amb * src_fixed)
        if carried is None:
            raise AssertionError("equivariant map must preserve fixed lattices")
        return induced_hom(src_pres, dst_pres, carried)

    def morphism(self, mat: IntMatrix) -> GroupHom:
        return self._descend(_kron_power(mat, self.m), mat.cols, mat.rows)

    def tau(self, a: int, b: int) -> GroupHom:
        return self._descend(_exchange_perm(a, b, self.m), a * b, b * a)


def tensor_power_orbit_trace(m: int, base_char: int = 0, rank_cap: int = 2,
                             tensor_cap: int = DEFAULT_CAP) -> OrbitTraceTheory:
    return OrbitTraceTheory(m, base_char, rank_cap, tensor_cap)


# ---------------------------------------------------------------------------
# axiom checks; each is an exhaustive matrix identity up to the rank cap


def check_unity(theory, rank_cap: Optional[int] = None) -> TraceAxiomReport:
    cap = rank_cap or theory.category.rank_cap
    checked = 0
    for d in range(1, cap + 1):
        checked += 1
        if theory.tau(1, d) != GroupHom.identity(theory.value(d).group):
            return TraceAxiomReport("unity", False, checked,
                                    f"tau(1, {d}) is not the identity")
    return TraceAxiomReport("unity", True, checked)


def check_acyclicity(theory, rank_cap: Optional[int] = None) -> TraceAxiomReport:
    cap = rank_cap or theory.category.rank_cap
    checked = 0
    for a in range(1, cap + 1):
        for b in range(1, cap + 1):
            for c in range(1, cap + 1):
                checked += 1
                comp = theory.tau(c, a * b).compose(
                    theory.tau(b, c * a).compose(theory.tau(a, b * c)))
                if comp != GroupHom.identity(theory.value(a * b * c).group):
                    return TraceAxiomReport(
                        "acyclicity", False, checked,
                        f"triple rotation differs from the identity at {(a, b, c)}")
    return TraceAxiomReport("acyclicity", True, checked)


def check_involution(theory, rank_cap: Optional[int] = None) -> TraceAxiomReport:
    cap = rank_cap or theory.category.rank_cap
    checked = 0
    for a in range(1, cap + 1):
        for b in range(1, cap + 1):
            checked += 1
            comp = theory.tau(b, a).compose(theory.tau(a, b))
            if comp != GroupHom.identity(theory.value(a * b).group):
                return TraceAxiomReport(
                    "involution", False, checked,
                    f"double exchange differs from the identity at {(a, b)}")
    return TraceAxiomReport("involution", True, checked)


def check_naturality(theory, samples: int = 12, seed: int = 0,
                     rank_cap: Optional[int] = None) -> TraceAxiomReport:
    cap = rank_cap or theory.category.rank_cap
    rng = random.Random(seed)
    cat = theory.category
    checked = 0
    for _ in range(samples):
        a, b = rng.randint(1, cap), rng.randint(1, cap)
        a2, b2 = rng.randint(1, cap), rng.randint(1, cap)
        f = cat.random_map(rng, a, a2)
        g = cat.random_map(rng, b, b2)
        checked += 1
        lhs = theory.tau(a2, b2).compose(theory.morphism(kron(f, g)))
        rhs = theory.morphism(kron(g, f)).compose(theory.tau(a, b))
        if lhs != rhs:
            return TraceAxiomReport(
                "naturality", False, checked,
                f"exchange square fails at ranks {(a, b)} -> {(a2, b2)}")
    return TraceAxiomReport("naturality", True, checked)


def run_axiom_checks(theory, rank_cap: Optional[int] = None,
                     samples: int = 12, seed: int = 0) -> List[TraceAxiomReport]:
    return [
        check_unity(theory, rank_cap),
        check_acyclicity(theory, rank_cap),
        check_involution(theory, rank_cap),
        check_naturality(theory, samples, seed, rank_cap),
    ]


# ---------------------------------------------------------------------------
# the failure witness for raw tensor powers, and the norm-functor descent


@dataclass(frozen=True)
class NegativeExampleReport:
    m: int
    base_char: int
    found: Optional[Tuple[int, int]]
    vacuous: bool
    degenerate: Tuple[Tuple[int, int], ...] = ()

    @property
    def passed(self) -> bool:
        # for m = 1 no counterexample can exist and none is required
        return self.vacuous or self.found is not None


def negative_raw_power(m: int, base_char: int = 2,
                       rank_cap: int = 2) -> NegativeExampleReport:
    """Search for a pair where the raw tensor power breaks the double
    exchange; low ranks can degenerate (rank one is a fixed point of
    every rotation), so the search continues past them."""
    if m == 1:
        return NegativeExampleReport(m, base_char, None, True)
    theory = RawPowerTraceTheory(m, base_char, rank_cap)
    degenerate: List[Tuple[int, int]] = []
    for a in range(1, rank_cap + 1):
        for b in range(1, rank_cap + 1):
            comp = theory.tau(b, a).compose(theory.tau(a, b))
            if comp == GroupHom.identity(theory.value(a * b).group):
                degenerate.append((a, b))
            else:
                return NegativeExampleReport(m, base_char, (a, b), False,
                                             tuple(degenerate))
    return NegativeExampleReport(m, base_char, None, False, tuple(degenerate))


@dataclass
class SubdividedTraceData:
    """Norm-functor trace data at subdivision p^(r-1) with its descent flag."""
    theory: NormTraceTheory
    m: int
    reports: List[TraceAxiomReport] = field(default_factory=list)
    descended: bool = False


def polywitt_trace(p: int, r: int, rank_cap: int = 2, samples: int = 12,
                   seed: int = 0, tensor_cap: int = DEFAULT_CAP) -> SubdividedTraceData:
    """Builds the norm-functor trace data and certifies its descent by
    running every exchange axiom on the descended maps."""
    theory = NormTraceTheory(p, r, rank_cap, tensor_cap)
    reports = run_axiom_checks(theory, rank_cap, samples, seed)
    return SubdividedTraceData(theory, theory.m, reports,
                               all(rep.ok for rep in reports))
