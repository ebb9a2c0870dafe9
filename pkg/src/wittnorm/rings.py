"""Base rings for truncated Witt vectors.

Supported bases: Z, Z/m, F_p, F_p[x] (one variable), and F_p[x]/(f) with f
monic.  Elements are canonical hashable values (ints, or coefficient
tuples for polynomials), so == is semantic equality.

Every base ring exposes a torsion-free cover used by the Witt arithmetic
engine: an ambient ring with no p-torsion together with lift and reduce
maps.  For Z and Z/m the cover works with plain Python integers; for
F_p[x]/(f) with integer coefficient tuples modulo a monic lift of f; for
F_p[x] with numpy arrays carrying coefficients modulo a power of p plus an
explicit precision, which keeps the exact divisions by p fast at large
degree while still producing exact mod-p answers.
"""

from __future__ import annotations

from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

IntPoly = Tuple[int, ...]  # dense coefficients, no trailing zeros, () = 0


def _trim(coeffs: Sequence[int]) -> IntPoly:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


def poly_add(a: Sequence[int], b: Sequence[int], mod: int = 0) -> IntPoly:
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] = v
    for i, v in enumerate(b):
        out[i] += v
    if mod:
        out = [v % mod for v in out]
    return _trim(out)


def poly_mul(a: Sequence[int], b: Sequence[int], mod: int = 0) -> IntPoly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, va in enumerate(a):
        if not va:
            continue
        for j, vb in enumerate(b):
            if vb:
                out[i + j] += va * vb
    if mod:
        out = [v % mod for v in out]
    return _trim(out)


def poly_rem_monic(a: Sequence[int], f: Sequence[int], mod: int = 0) -> IntPoly:
    """Remainder of a modulo a monic polynomial f (optionally coeffs mod m)."""
    d = len(f) - 1
    if f[-1] != 1 or d < 1:
        raise ValueError("modulus must be monic of degree >= 1")
    work = list(a)
    for i in range(len(work) - 1, d - 1, -1):
        c = work[i]
        if c:
            for j in range(d + 1):
                work[i - d + j] -= c * f[j]
    work = work[:d]
    if mod:
        work = [v % mod for v in work]
    return _trim(work)


# torsion-free cover contexts


class IntCover:
    """Exact integer cover (for Z, Z/m bases)."""

    def __init__(self, p: int):
        self.p = p

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, n):
        return n

    def zero(self):
        return 0

    def pow_p(self, a):
        return a ** self.p

    def scale_pow_p(self, a, i: int):
        return a * self.p ** i

    def div_pow_p(self, a, i: int):
        q, rem = divmod(a, self.p ** i)
        if rem:
            raise ArithmeticError("inexact division in Witt recursion")
        return q


class QuotPolyCover:
    """Z[x]/(f~) for a monic integer lift f~ of the base modulus."""

    def __init__(self, p: int, f_lift: IntPoly):
        self.p = p
        self.f = f_lift

    def _red(self, a: Sequence[int]) -> IntPoly:
        return poly_rem_monic(a, self.f)

    def add(self, a, b):
        return poly_add(a, b)

    def sub(self, a, b):
        return poly_add(a, tuple(-v for v in b))

    def neg(self, a):
        return tuple(-v for v in a)

    def mul(self, a, b):
        return self._red(poly_mul(a, b))

    def from_int(self, n):
        return _trim([n])

    def zero(self):
        return ()

    def pow_p(self, a):
        out = self.from_int(1)
        base = a
        n = self.p
        while n:
            if n & 1:
                out = self.mul(out, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return out

    def scale_pow_p(self, a, i: int):
        k = self.p ** i
        return tuple(v * k for v in a)

    def div_pow_p(self, a, i: int):
        k = self.p ** i
        out = []
        for v in a:
            q, rem = divmod(v, k)
            if rem:
                raise ArithmeticError("inexact division in Witt recursion")
            out.append(q)
        return tuple(out)


class PadicVal:
    """Dense integer polynomial known modulo p^prec."""

    __slots__ = ("arr", "prec")

    def __init__(self, arr: np.ndarray, prec: int):
        self.arr = arr
        self.prec = prec


class PadicPolyCover:
    """Z[x] tracked modulo a power of p, numpy-accelerated.

    Values carry (coefficients mod p^prec, prec).  Additions and products
    keep the minimum precision of their inputs; dividing by p^i costs i
    digits of precision.  Starting precision is chosen by the Witt engine
    so that final answers are still exact modulo p.
    """

    def __init__(self, p: int, max_prec: int):
        self.p = p
        self.K = max_prec

    def _canon(self, arr: np.ndarray, prec: int) -> PadicVal:
        m = self.p ** prec
        a = np.remainder(arr, m)
        n = len(a)
        while n and not a[n - 1]:
            n -= 1
        a = a[:n]
        if a.dtype == object and m < 2 ** 62:
            a = a.astype(np.int64)
        return PadicVal(np.array(a, dtype=a.dtype), prec)

    def make(self, coeffs: Sequence[int]) -> PadicVal:
        arr = np.array(list(coeffs), dtype=np.int64)
        return self._canon(arr, self.K)

    def add(self, a: PadicVal, b: PadicVal) -> PadicVal:
        prec = min(a.prec, b.prec)
        n = max(len(a.arr), len(b.arr))
        out = np.zeros(n, dtype=np.int64)
        out[: len(a.arr)] = a.arr
        out[: len(b.arr)] += b.arr
        return self._canon(out, prec)

    def sub(self, a: PadicVal, b: PadicVal) -> PadicVal:
        return self.add(a, self.neg(b))

    def neg(self, a: PadicVal) -> PadicVal:
        return self._canon(-a.arr.astype(object) if a.arr.dtype == object else -a.arr, a.prec)

    def mul(self, a: PadicVal, b: PadicVal) -> PadicVal:
        prec = min(a.prec, b.prec)
        if not len(a.arr) or not len(b.arr):
            return PadicVal(np.zeros(0, dtype=np.int64), prec)
        bound = min(len(a.arr), len(b.arr)) * self.p ** (a.prec + b.prec)
        if bound < 2 ** 62 and a.arr.dtype != object and b.arr.dtype != object:
            out = np.convolve(a.arr, b.arr)
        else:
            out = np.convolve(a.arr.astype(object), b.arr.astype(object))
        return self._canon(out, prec)

    def from_int(self, n: int) -> PadicVal:
        return self.make([n])

    def zero(self) -> PadicVal:
        return PadicVal(np.zeros(0, dtype=np.int64), self.K)

    def pow_p(self, a: PadicVal) -> PadicVal:
        out = self.from_int(1)
        out = PadicVal(out.arr, a.prec)
        base = a
        n = self.p
        while n:
            if n & 1:
                out = self.mul(out, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return out

    def scale_pow_p(self, a: PadicVal, i: int) -> PadicVal:
        prec = min(a.prec + i, self.K)
        arr = a.arr.astype(object) * (self.p ** i)
        return self._canon(arr, prec)

    def div_pow_p(self, a: PadicVal, i: int) -> PadicVal:
        if i == 0:
            return a
        k = self.p ** i
        if np.any(np.remainder(a.arr, k)):
            raise ArithmeticError("inexact division in Witt recursion")
        prec = a.prec - i
        if prec < 1:
            raise ArithmeticError("precision exhausted in Witt recursion")
        return self._canon(a.arr // k, prec)


# base rings


class ZRing:
    """The integers."""

    is_finite = False
    char = 0

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def from_int(self, n):
        return int(n)

    def random_element(self, rng):
        return rng.randint(-9, 9)

    def witt_cover(self, p: int, r: int):
        return IntCover(p)

    def lift(self, a, cover):
        return a

    def reduce(self, v, cover):
        return v

    def label(self) -> str:
        return "Z"

    def __eq__(self, other):
        return isinstance(other, ZRing)

    def __hash__(self):
        return hash("ZRing")


class ZModRing:
    """Z/m with canonical representatives 0..m-1."""

    is_finite = True

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("modulus must be >= 2")
        self.m = m
        self.char = m

    def zero(self):
        return 0

    def one(self):
        return 1 % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def sub(self, a, b):
        return (a - b) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def from_int(self, n):
        return n % self.m

    def elements(self) -> Iterator[int]:
        return iter(range(self.m))

    def random_element(self, rng):
        return rng.randrange(self.m)

    def witt_cover(self, p: int, r: int):
        return IntCover(p)

    def lift(self, a, cover):
        return a

    def reduce(self, v, cover):
        return v % self.m

    def label(self) -> str:
        return f"Z/{self.m}"

    def __eq__(self, other):
        return isinstance(other, ZModRing) and self.m == other.m

    def __hash__(self):
        return hash(("ZModRing", self.m))


class GFPolyRing:
    """F_p[x] in one variable; elements are coefficient tuples mod p."""

    is_finite = False

    def __init__(self, p: int, random_degree: int = 4):
        self.p = p
        self.char = p
        self.random_degree = random_degree

    def zero(self):
        return ()

    def one(self):
        return (1,)

    def add(self, a, b):
        return poly_add(a, b, self.p)

    def neg(self, a):
        return tuple((-v) % self.p for v in a)

    def sub(self, a, b):
        return poly_add(a, self.neg(b), self.p)

    def mul(self, a, b):
        return poly_mul(a, b, self.p)

    def from_int(self, n):
        return _trim([n % self.p])

    def random_element(self, rng):
        return _trim([rng.randrange(self.p) for _ in range(self.random_degree + 1)])

    def witt_cover(self, p: int, r: int):
        if p != self.p:
            raise ValueError("prime mismatch between Witt ring and base")
        # each division by p^i in the component recursion costs i digits
        max_prec = r * (r - 1) // 2 + 2
        return PadicPolyCover(p, max_prec)

    def lift(self, a, cover: PadicPolyCover):
        return cover.make(a)

    def reduce(self, v: PadicVal, cover: PadicPolyCover):
        if v.prec < 1:
            raise ArithmeticError("precision exhausted")
        return _trim([int(c) % self.p for c in v.arr])

    def degree(self, a) -> int:
        return len(a) - 1 if a else -1

    def label(self) -> str:
        return f"F_{self.p}[x]"

    def __eq__(self, other):
        return isinstance(other, GFPolyRing) and self.p == other.p

    def __hash__(self):
        return hash(("GFPolyRing", self.p))


class QuotPolyRing:
    """F_p[x]/(f) for monic f; elements are coefficient tuples of length < deg f."""

    is_finite = True

    def __init__(self, p: int, f: Sequence[int]):
        f = _trim([c % p for c in f])
        if not f or f[-1] != 1 or len(f) < 2:
            raise ValueError("modulus must be monic of degree >= 1")
        self.p = p
        self.char = p
        self.f = f
        self.deg = len(f) - 1

    def _red(self, a):
        return poly_rem_monic(a, self.f, self.p)

    def zero(self):
        return ()

    def one(self):
        return (1,)

    def add(self, a, b):
        return poly_add(a, b, self.p)

    def neg(self, a):
        return tuple((-v) % self.p for v in a)

    def sub(self, a, b):
        return poly_add(a, self.neg(b), self.p)

    def mul(self, a, b):
        return self._red(poly_mul(a, b))

    def from_int(self, n):
        return _trim([n % self.p])

    def elements(self) -> Iterator[IntPoly]:
        def gen():
            coeffs = [0] * self.deg
            while True:
                yield _trim(coeffs)
                i = 0
                while i < self.deg:
                    coeffs[i] += 1
                    if coeffs[i] < self.p:
                        break
                    coeffs[i] = 0
                    i += 1
                else:
                    return
        return gen()

    def random_element(self, rng):
        return _trim([rng.randrange(self.p) for _ in range(self.deg)])

    def witt_cover(self, p: int, r: int):
        if p != self.p:
            raise ValueError("prime mismatch between Witt ring and base")
        return QuotPolyCover(p, self.f)

    def lift(self, a, cover):
        return tuple(a)

    def reduce(self, v, cover):
        return poly_rem_monic(v, self.f, self.p)

    def label(self) -> str:
        return f"F_{self.p}[x]/({self.f})"

    def __eq__(self, other):
        return isinstance(other, QuotPolyRing) and self.p == other.p and self.f == other.f

    def __hash__(self):
        return hash(("QuotPolyRing", self.p, self.f))
