"""Classical de Rham complexes of polynomial rings in at most two variables.

Serves as the truncation-level-one oracle for the F-V-tower construction
and as a standalone target for universal-map checks.  Pieces are graded
by total weight, where a monomial contributes its degree and each dx_j
contributes one.  Coefficients live in Z/p^N.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .abgroups import FgAbGroup, GroupHom
from .intlinalg import IntMatrix

Mono = Tuple[int, ...]
Frame = Tuple[int, ...]  # strictly increasing variable indices under d


class DeRhamComplex:
    """Differential forms of k[x] or k[x, y] with k = Z/p^N, weight-truncated."""

    def __init__(self, p: int, nvars: int = 1, weight_cap: int = 8, char_exp: int = 1):
        if nvars not in (1, 2):
            raise ValueError("only one or two variables are supported")
        if char_exp < 1:
            raise ValueError("coefficient ring must be Z/p^N with N >= 1")
        self.p = p
        self.nvars = nvars
        self.weight_cap = weight_cap
        self.char_exp = char_exp
        self.q = p ** char_exp
        self._basis: Dict[Tuple[int, int], List[Tuple[Mono, Frame]]] = {}
        for w in range(weight_cap + 1):
            for deg in range(nvars + 1):
                self._basis[(deg, w)] = self._enumerate(deg, w)

    def _enumerate(self, deg: int, w: int) -> List[Tuple[Mono, Frame]]:
        frames = {0: [()], 1: [(j,) for j in range(self.nvars)], 2: [(0, 1)]}
        out = []
        mono_weight = w - deg
        if mono_weight < 0:
            return out
        for frame in frames.get(deg, []):
            for mono in self._monomials(mono_weight):
                out.append((mono, frame))
        return out

    def _monomials(self, total: int) -> List[Mono]:
        if self.nvars == 1:
            return [(total,)]
        return [(a, total - a) for a in range(total + 1)]

    def basis(self, deg: int, w: int) -> List[Tuple[Mono, Frame]]:
        return list(self._basis.get((deg, w), []))

    def group(self, deg: int, w: int) -> FgAbGroup:
        return FgAbGroup([self.q] * len(self._basis.get((deg, w), [])))

    def index(self, deg: int, w: int, mono: Mono, frame: Frame) -> int:
        return self._basis[(deg, w)].index((mono, frame))

    def d_hom(self, deg: int, w: int) -> GroupHom:
        """Exterior differential on the weight-w piece."""
        src = self._basis.get((deg, w), [])
        dst = self._basis.get((deg + 1, w), [])
        dst_pos = {bk: i for i, bk in enumerate(dst)}
        data = {}
        for j, (mono, frame) in enumerate(src):
            for v in range(self.nvars):
                if mono[v] == 0 or v in frame:
                    continue
                new_mono = tuple(m - (1 if t == v else 0) for t, m in enumerate(mono))
                new_frame = tuple(sorted(frame + (v,)))
                sign = (-1) ** sum(1 for t in frame if t < v)
                i = dst_pos.get((new_mono, new_frame))
                if i is not None:
                    data[(i, j)] = (data.get((i, j), 0) + sign * mono[v]) % self.q
        return GroupHom(self.group(deg, w), self.group(deg + 1, w),
                        IntMatrix(len(dst), len(src), {k: v for k, v in data.items() if v}))

    def mul_vec(self, deg1: int, w1: int, vec1, deg2: int, w2: int, vec2):
        """Product of two elements, landing in (deg1+deg2, w1+w2)."""
        src1 = self._basis.get((deg1, w1), [])
        src2 = self._basis.get((deg2, w2), [])
        dst = self._basis.get((deg1 + deg2, w1 + w2), [])
        dst_pos = {bk: i for i, bk in enumerate(dst)}
        out = [0] * len(dst)
        for j1, c1 in enumerate(vec1):
            if c1 == 0:
                continue
            for j2, c2 in enumerate(vec2):
                if c2 == 0:
                    continue
                (m1, f1), (m2, f2) = src1[j1], src2[j2]
                if set(f1) & set(f2):
                    continue
                mono = tuple(a + b for a, b in zip(m1, m2))
                frame = tuple(sorted(f1 + f2))
                # sign of sorting the concatenated frame
                sign = 1
                items = list(f1 + f2)
                for a in range(len(items)):
                    for b in range(a + 1, len(items)):
                        if items[a] > items[b]:
                            sign = -sign
                i = dst_pos.get((mono, frame))
                if i is not None:
                    out[i] = (out[i] + sign * c1 * c2) % self.q
        return out


def de_rham_complex(p: int, nvars: int = 1, weight_cap: int = 8, char_exp: int = 1) -> DeRhamComplex:
    return DeRhamComplex(p, nvars, weight_cap, char_exp)
