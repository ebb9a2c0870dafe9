"""Truncated p-typical Witt vectors over small commutative base rings.

A length-r Witt vector is a tuple of base-ring components.  Ring
operations are characterized by the ghost map

    w_n = sum_{i <= n} p^i * x_i^(p^(n-i)),

which must transform additively / multiplicatively.  The universal sum
and product polynomials (with integer coefficients) realize this over
every base ring; ``WittPolyTable`` builds and verifies them symbolically.

Arithmetic itself runs by lifting components into the base ring's
p-torsion-free cover, doing ghost arithmetic there and inverting the
ghost map with exact divisions by powers of p.  By universality this
computes exactly the values of the universal polynomials; the test suite
cross-checks the two paths wherever the tables are cheap to build.
"""

from __future__ import annotations

import itertools
import threading
from typing import Callable, List, Optional, Sequence, Tuple

from .multipoly import MPoly
from .rings import GFPolyRing, ZModRing, ZRing


class WittDegreeOverflow(ValueError):
    """A polynomial Witt component exceeded the caller-supplied degree cap."""


# universal polynomial tables


def _ghost_mpoly(p: int, nvars: int, offset: int, n: int) -> MPoly:
    """sum_{i <= n} p^i x_{offset+i}^(p^(n-i)) as a polynomial."""
    acc = MPoly.zero(nvars)
    for i in range(n + 1):
        acc = acc + MPoly.var(nvars, offset + i).pow(p ** (n - i)).scale(p ** i)
    return acc


def _invert_ghost_polys(p: int, targets: List[MPoly]) -> List[MPoly]:
    """Solve sum_{i<=n} p^i Z_i^(p^(n-i)) = targets[n] for polynomials Z_n."""
    out: List[MPoly] = []
    for n, t in enumerate(targets):
        acc = MPoly.zero(t.nvars)
        for i in range(n):
            acc = acc + out[i].pow(p ** (n - i)).scale(p ** i)
        out.append((t - acc).exact_div_int(p ** n))
    return out


class WittPolyTable:
    """Universal sum/product/negation/Frobenius polynomials for W_r at p.

    Sum and product polynomials live in Z[x_0..x_{r-1}, y_0..y_{r-1}],
    negation in Z[x_0..x_{r-1}], Frobenius (length r to r-1) in
    Z[x_0..x_{r-1}].  The defining ghost identities are verified
    symbolically at construction time.
    """

    def __init__(self, p: int, r: int):
        self.p = p
        self.r = r
        two = 2 * r
        gx = [_ghost_mpoly(p, two, 0, n) for n in range(r)]
        gy = [_ghost_mpoly(p, two, r, n) for n in range(r)]
        self.sum_polys = _invert_ghost_polys(p, [a + b for a, b in zip(gx, gy)])
        self.prod_polys = _invert_ghost_polys(p, [a * b for a, b in zip(gx, gy)])
        g1 = [_ghost_mpoly(p, r, 0, n) for n in range(r)]
        self.neg_polys = _invert_ghost_polys(p, [-g for g in g1])
        self.frob_polys = _invert_ghost_polys(p, g1[1:])
        self._verify()

    def _verify(self) -> None:
        p, r = self.p, self.r
        two = 2 * r
        gx = [_ghost_mpoly(p, two, 0, n) for n in range(r)]
        gy = [_ghost_mpoly(p, two, r, n) for n in range(r)]
        g1 = [_ghost_mpoly(p, r, 0, n) for n in range(r)]

        def ghost_of(seq: List[MPoly], n: int) -> MPoly:
            acc = MPoly.zero(seq[0].nvars)
            for i in range(n + 1):
                acc = acc + seq[i].pow(p ** (n - i)).scale(p ** i)
            return acc

        for n in range(r):
            if ghost_of(self.sum_polys, n) != gx[n] + gy[n]:
                raise AssertionError("sum polynomial ghost identity failed")
            if ghost_of(self.prod_polys, n) != gx[n] * gy[n]:
                raise AssertionError("product polynomial ghost identity failed")
            if ghost_of(self.neg_polys, n) != -g1[n]:
                raise AssertionError("negation polynomial ghost identity failed")
        for n in range(r - 1):
            if ghost_of(self.frob_polys, n) != g1[n + 1]:
                raise AssertionError("Frobenius polynomial ghost identity failed")

    # evaluation over an arbitrary base ring

    def eval_sum(self, base, xs: Sequence, ys: Sequence) -> List:
        vals = list(xs) + list(ys)
        return [q.eval(base, vals) for q in self.sum_polys]

    def eval_prod(self, base, xs: Sequence, ys: Sequence) -> List:
        vals = list(xs) + list(ys)
        return [q.eval(base, vals) for q in self.prod_polys]

    def eval_neg(self, base, xs: Sequence) -> List:
        return [q.eval(base, list(xs)) for q in self.neg_polys]

    def eval_frob(self, base, xs: Sequence) -> List:
        return [q.eval(base, list(xs)) for q in self.frob_polys]


_TABLE_CACHE: dict = {}
_TABLE_LOCK = threading.Lock()


def get_table(p: int, r: int) -> WittPolyTable:
    """Memoized universal polynomial table (thread-safe single build)."""
    key = (p, r)
    tab = _TABLE_CACHE.get(key)
    if tab is not None:
        return tab
    with _TABLE_LOCK:
        tab = _TABLE_CACHE.get(key)
        if tab is None:
            tab = WittPolyTable(p, r)
            _TABLE_CACHE[key] = tab
    return tab


def table_is_cheap(p: int, r: int) -> bool:
    """Combinations whose symbolic tables build in well under a second."""
    return (p <= 3 and r <= 5) or (p == 5 and r <= 3)


# Witt vectors


class WittVector:
    __slots__ = ("ring", "components")

    def __init__(self, ring: "WittRing", components: Sequence):
        if len(components) != ring.r:
            raise ValueError("component count must equal the truncation length")
        self.ring = ring
        self.components = tuple(components)

    def __add__(self, other: "WittVector") -> "WittVector":
        return self.ring.add(self, other)

    def __mul__(self, other: "WittVector") -> "WittVector":
        return self.ring.mul(self, other)

    def __neg__(self) -> "WittVector":
        return self.ring.neg(self)

    def __sub__(self, other: "WittVector") -> "WittVector":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WittVector)
            and self.ring == other.ring
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.ring, self.components))

    def __repr__(self) -> str:
        return f"WittVector(p={self.ring.p}, {list(self.components)})"

    def ghost(self) -> List:
        return self.ring.ghost(self)


class _PowerChains:
    """Lazily extended chains v, v^p, v^(p^2), ... per tracked value."""

    def __init__(self, cover):
        self.cover = cover
        self.chains: List[List] = []

    def track(self, v) -> int:
        self.chains.append([v])
        return len(self.chains) - 1

    def power(self, idx: int, k: int):
        chain = self.chains[idx]
        while len(chain) <= k:
            chain.append(self.cover.pow_p(chain[-1]))
        return chain[k]


class WittRing:
    """W_r(base) for a prime p, with F, V, R, Teichmuller and ghost."""

    def __init__(self, p: int, r: int, base, degree_cap: Optional[int] = None):
        if r < 1:
            raise ValueError("truncation length must be >= 1")
        if p < 2:
            raise ValueError("p must be a prime >= 2")
        self.p = p
        self.r = r
        self.base = base
        self.degree_cap = degree_cap

    def __eq__(self, other):
        return (
            isinstance(other, WittRing)
            and (self.p, self.r, self.base, self.degree_cap)
            == (other.p, other.r, other.base, other.degree_cap)
        )

    def __hash__(self):
        return hash((self.p, self.r, self.base, self.degree_cap))

    def __repr__(self):
        return f"WittRing(p={self.p}, r={self.r}, base={self.base.label()})"

    # construction

    def vector(self, components: Sequence) -> WittVector:
        return WittVector(self, components)

    def zero(self) -> WittVector:
        z = self.base.zero()
        return WittVector(self, (z,) * self.r)

    def one(self) -> WittVector:
        return self.teichmuller(self.base.one())

    def teichmuller(self, x) -> WittVector:
        z = self.base.zero()
        return WittVector(self, (x,) + (z,) * (self.r - 1))

    def from_int(self, n: int) -> WittVector:
        return self.scalar_mul(n, self.one())

    def random_element(self, rng) -> WittVector:
        return WittVector(self, tuple(self.base.random_element(rng) for _ in range(self.r)))

    def elements(self):
        pool = list(self.base.elements())
        for comps in itertools.product(pool, repeat=self.r):
            yield WittVector(self, comps)

    # ghost machinery

    def ghost(self, w: WittVector) -> List:
        """Ghost components computed inside the base ring itself."""
        base = self.base
        out = []
        chains = [[c] for c in w.components]

        def power(i, k):
            chain = chains[i]
            while len(chain) <= k:
                prev = chain[-1]
                cur = prev
                for _ in range(self.p - 1):
                    cur = base.mul(cur, prev)
                chain.append(cur)
            return chain[k]

        for n in range(self.r):
            acc = base.zero()
            for i in range(n + 1):
                acc = base.add(acc, base.mul(base.from_int(self.p ** i), power(i, n - i)))
            out.append(acc)
        return out

    def _lift(self, cover, w: WittVector) -> List:
        return [self.base.lift(c, cover) for c in w.components]

    def _lifted_ghost(self, cover, lifted: List, upto: int) -> List:
        chains = _PowerChains(cover)
        for v in lifted:
            chains.track(v)
        out = []
        for n in range(upto):
            acc = cover.zero()
            for i in range(n + 1):
                acc = cover.add(acc, cover.scale_pow_p(chains.power(i, n - i), i))
            out.append(acc)
        return out

    def _components_from_ghost(self, cover, targets: List) -> List:
        chains = _PowerChains(cover)
        comps = []
        for n, t in enumerate(targets):
            acc = cover.zero()
            for i in range(n):
                acc = cover.add(acc, cover.scale_pow_p(chains.power(i, n - i), i))
            z = cover.div_pow_p(cover.sub(t, acc), n)
            comps.append(z)
            chains.track(z)
        return comps

    def _finish(self, target_ring: "WittRing", cover, comps: List) -> WittVector:
        base = self.base
        reduced = tuple(base.reduce(v, cover) for v in comps)
        cap = target_ring.degree_cap
        if cap is not None and isinstance(base, GFPolyRing):
            for c in reduced:
                if base.degree(c) > cap:
                    raise WittDegreeOverflow(
                        f"component degree {base.degree(c)} exceeds cap {cap}"
                    )
        return WittVector(target_ring, reduced)

    def _ghost_binary(self, a: WittVector, b: WittVector, combine: Callable) -> WittVector:
        if a.ring != b.ring:
            raise ValueError("operands live in different Witt rings")
        cover = self.base.witt_cover(self.p, self.r)
        ga = self._lifted_ghost(cover, self._lift(cover, a), self.r)
        gb = self._lifted_ghost(cover, self._lift(cover, b), self.r)
        targets = [combine(cover, x, y) for x, y in zip(ga, gb)]
        return self._finish(self, cover, self._components_from_ghost(cover, targets))

    # ring operations

    def add(self, a: WittVector, b: WittVector) -> WittVector:
        return self._ghost_binary(a, b, lambda c, x, y: c.add(x, y))

    def mul(self, a: WittVector, b: WittVector) -> WittVector:
        return self._ghost_binary(a, b, lambda c, x, y: c.mul(x, y))

    def neg(self, a: WittVector) -> WittVector:
        cover = self.base.witt_cover(self.p, self.r)
        ga = self._lifted_ghost(cover, self._lift(cover, a), self.r)
        targets = [cover.neg(x) for x in ga]
        return self._finish(self, cover, self._components_from_ghost(cover, targets))

    def scalar_mul(self, n: int, a: WittVector) -> WittVector:
        cover = self.base.witt_cover(self.p, self.r)
        ga = self._lifted_ghost(cover, self._lift(cover, a), self.r)
        cn = cover.from_int(n)
        targets = [cover.mul(cn, x) for x in ga]
        return self._finish(self, cover, self._components_from_ghost(cover, targets))

    # structure maps

    def restrict(self, w: WittVector) -> WittVector:
        """Drop the last component: W_r -> W_{r-1}."""
        if self.r < 2:
            raise ValueError("restriction needs length >= 2")
        target = WittRing(self.p, self.r - 1, self.base, self.degree_cap)
        return WittVector(target, w.components[:-1])

    def verschiebung(self, w: WittVector) -> WittVector:
        """Prepend zero: W_r -> W_{r+1}."""
        target = WittRing(self.p, self.r + 1, self.base, self.degree_cap)
        return WittVector(target, (self.base.zero(),) + w.components)

    def frobenius(self, w: WittVector) -> WittVector:
        """Ghost-shift map W_r -> W_{r-1}."""
        if self.r < 2:
            raise ValueError("Frobenius needs length >= 2")
        cover = self.base.witt_cover(self.p, self.r)
        ga = self._lifted_ghost(cover, self._lift(cover, w), self.r)
        target = WittRing(self.p, self.r - 1, self.base, self.degree_cap)
        return self._finish(target, cover, self._components_from_ghost(cover, ga[1:]))


def frobenius(w: WittVector) -> WittVector:
    return w.ring.frobenius(w)


def verschiebung(w: WittVector) -> WittVector:
    return w.ring.verschiebung(w)


def restrict(w: WittVector) -> WittVector:
    return w.ring.restrict(w)


def ghost(w: WittVector) -> List:
    return w.ring.ghost(w)


def teichmuller(ring: WittRing, x) -> WittVector:
    return ring.teichmuller(x)


# the identification W_t(F_p) = Z/p^t


def teichmuller_character(p: int, t: int, c: int) -> int:
    """Multiplicative lift of c in F_p to Z/p^t."""
    return pow(int(c) % p, p ** (t - 1), p ** t)


def witt_fp_to_zmod(w: WittVector) -> int:
    """Ring isomorphism W_t(F_p) -> Z/p^t, (a_i) -> sum of lifts of a_i times p^i."""
    ring = w.ring
    base = ring.base
    if not isinstance(base, ZModRing) or base.m != ring.p:
        raise ValueError("defined for Witt vectors of the prime field only")
    p, t = ring.p, ring.r
    mod = p ** t
    return sum(teichmuller_character(p, t, c) * p ** i for i, c in enumerate(w.components)) % mod


def zmod_to_witt_fp(ring: WittRing, n: int) -> WittVector:
    """Inverse of witt_fp_to_zmod."""
    base = ring.base
    if not isinstance(base, ZModRing) or base.m != ring.p:
        raise ValueError("defined for Witt vectors of the prime field only")
    p, t = ring.p, ring.r
    x = n % p ** t
    comps = []
    for i in range(t):
        ti = t - i
        c = x % p
        comps.append(c)
        x = (x - teichmuller_character(p, ti, c)) // p
        x %= p ** (ti - 1) if ti > 1 else 1
    return WittVector(ring, comps)


# Cartier tower over a finite base


class CartierTower:
    """Levels W_1(A)..W_Rmax(A) of a finite ring with R, F, V between them.

    Commutation of every square in the tower diagram (restriction against
    Frobenius and Verschiebung, Frobenius-after-Verschiebung equals
    multiplication by p, Frobenius reciprocity, and the product rule for
    Verschiebung) is verified on construction: exhaustively for the unary
    identities, on seeded samples for the binary ones.
    """

    def __init__(self, base, p: int, r_max: int, pair_samples: int = 150, seed: int = 0):
        if not getattr(base, "is_finite", False):
            raise ValueError("Cartier tower needs a finite base ring")
        if r_max < 1:
            raise ValueError("r_max must be >= 1")
        self.base = base
        self.p = p
        self.r_max = r_max
        self.levels = [WittRing(p, r, base) for r in range(1, r_max + 1)]
        self._verify(pair_samples, seed)

    def level(self, r: int) -> WittRing:
        return self.levels[r - 1]

    def _verify(self, pair_samples: int, seed: int) -> None:
        import random

        rng = random.Random(seed)
        p = self.p
        for r in range(2, self.r_max + 1):
            upper = self.level(r)
            for w in upper.elements():
                rw = upper.restrict(w)
                fw = upper.frobenius(w)
                if r >= 3:
                    # R(F(w)) = F(R(w)) landing in W_{r-2}
                    if fw.ring.restrict(fw) != rw.ring.frobenius(rw):
                        raise AssertionError("restriction/Frobenius square failed")
            lower = self.level(r - 1)
            for w in lower.elements():
                vw = lower.verschiebung(w)
                # R(V(w)) = V(R(w)) for r-1 >= 2, and F(V(w)) = p w always
                if r >= 3:
                    if vw.ring.restrict(vw) != lower.restrict(w).ring.verschiebung(
                        lower.restrict(w)
                    ):
                        raise AssertionError("restriction/Verschiebung square failed")
                if vw.ring.frobenius(vw) != lower.scalar_mul(p, w):
                    raise AssertionError("FV = p failed")
            pool_hi = list(upper.elements())
            pool_lo = list(lower.elements())
            for _ in range(pair_samples):
                w = rng.choice(pool_hi)
                u = rng.choice(pool_lo)
                # V(F(w) u) = w V(u)
                left = lower.verschiebung(upper.frobenius(w) * u)
                if left != w * lower.verschiebung(u):
                    raise AssertionError("Frobenius reciprocity failed")
                x = rng.choice(pool_lo)
                y = rng.choice(pool_lo)
                # V(x) V(y) = p V(x y)
                vx = lower.verschiebung(x)
                vy = lower.verschiebung(y)
                if vx * vy != upper.scalar_mul(p, lower.verschiebung(x * y)):
                    raise AssertionError("V(x)V(y) = pV(xy) failed")

    def level_group_iso_zmod(self) -> List[int]:
        """For base F_p: the cyclic order p^r of each level under the standard iso."""
        return [self.p ** r for r in range(1, self.r_max + 1)]


def cartier_tower(base, p: int, r_max: int, pair_samples: int = 150, seed: int = 0) -> CartierTower:
    return CartierTower(base, p, r_max, pair_samples=pair_samples, seed=seed)
