"""Ground truth that does not go through exterior-algebra resolutions.

* closed forms for ``h^j(O(a))`` and ``h^j(Omega^i(j))``;
* :func:`p1_hyper`: hypercohomology of a complex of line bundles on P^1
  from the two-row Cech spectral sequence, with ``d_2`` built by an
  explicit zig-zag on Laurent polynomials;
* :func:`cech_hyper` and :func:`cech_multiplication_rank`: the Cech total
  complex of the same cover cut down to exponents ``>= -R``, which is a
  quasi-isomorphic subcomplex once ``R`` covers every interior monomial.
  Multiplication by ``x_0, x_1`` acts on it directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .functor import LinearSheafComplex
from .linalg import Field


def _binom(a: int, b: int) -> int:
    return comb(a, b) if 0 <= b <= a else 0


def serre_dims(n: int, a: int) -> list[int]:
    """``(h^0, ..., h^n)`` of ``O(a)`` on P^n."""
    if n < 1:
        raise ValueError("need n >= 1")
    out = [0] * (n + 1)
    if a >= 0:
        out[0] = comb(a + n, n)
    if a <= -n - 1:
        out[n] = comb(-a - 1, n)
    return out


def bott_dims(n: int, i: int, j: int) -> list[int]:
    """``(h^0, ..., h^n)`` of ``Omega^i(j)`` on P^n."""
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}")
    out = [0] * (n + 1)
    if j > i:
        out[0] += _binom(j + n - i, j) * _binom(j - 1, i)
    if j == 0:
        out[i] += 1
    if j < i - n:
        out[n] += _binom(i - j, -j) * _binom(-j - 1, n - i)
    return out


# -- Laurent polynomials in x0, x1 ---------------------------------------------------

@dataclass(frozen=True)
class LaurentVector:
    """A finite sum of monomials ``x0^u x1^v`` with field coefficients."""

    field: Field
    terms: tuple[tuple[tuple[int, int], object], ...] = ()

    @classmethod
    def make(cls, field: Field, terms: dict) -> "LaurentVector":
        clean = {}
        for e, c in terms.items():
            c = field.scalar(c)
            if c:
                clean[e] = c
        return cls(field, tuple(sorted(clean.items())))

    @classmethod
    def monomial(cls, field: Field, u: int, v: int, c=1) -> "LaurentVector":
        return cls.make(field, {(u, v): c})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LaurentVector") -> "LaurentVector":
        out = self.as_dict()
        for e, c in other.terms:
            out[e] = out.get(e, 0) + c
        return LaurentVector.make(self.field, out)

    def __neg__(self) -> "LaurentVector":
        return LaurentVector.make(self.field, {e: self.field.neg(c) for e, c in self.terms})

    def __sub__(self, other: "LaurentVector") -> "LaurentVector":
        return self + (-other)

    def scaled(self, c) -> "LaurentVector":
        c = self.field.scalar(c)
        return LaurentVector.make(self.field, {e: a * c for e, a in self.terms})

    def times_monomial(self, du: int, dv: int) -> "LaurentVector":
        return LaurentVector(self.field, tuple(((u + du, v + dv), c) for (u, v), c in self.terms))

    def split(self) -> tuple["LaurentVector", "LaurentVector", "LaurentVector"]:
        """``(regular in x0, regular in x1 only, interior)``.

        The first part has ``u >= 0``, the second ``u < 0 <= v``, the last
        ``u, v < 0``; they sum back to ``self``.
        """
        parts = ({}, {}, {})
        for (u, v), c in self.terms:
            k = 0 if u >= 0 else (1 if v >= 0 else 2)
            parts[k][(u, v)] = c
        return tuple(LaurentVector.make(self.field, p) for p in parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*x0^{u}*x1^{v}" for (u, v), c in self.terms)


# -- complexes on P^1 ----------------------------------------------------------------

def _coords(C: LinearSheafComplex, p: int) -> list[tuple[int, int, int]]:
    """``(summand, copy, twist)`` for each coordinate of ``C^p``."""
    return [(j, r, a) for j, (a, m) in enumerate(C.term(p)) for r in range(m)]


def _entry_terms(C: LinearSheafComplex, p: int) -> dict[tuple[int, int], list[tuple[int, int, object]]]:
    """Differential entries: (src coord, tgt coord) -> [(du, dv, coef)]."""
    src = _coords(C, p)
    tgt = _coords(C, p + 1)
    spos = {(j, r): k for k, (j, r, _) in enumerate(src)}
    tpos = {(l, c): k for k, (l, c, _) in enumerate(tgt)}
    out: dict[tuple[int, int], list] = {}
    for (j, l), blk in C.diffs.get(p, {}).items():
        for mono, mat in blk.items():
            du, dv = mono.count(0), mono.count(1)
            for r, c in zip(*np.nonzero(mat)):
                out.setdefault((spos[(j, int(r))], tpos[(l, int(c))]), []).append((du, dv, mat[r, c]))
    return out


def _apply(C: LinearSheafComplex, p: int, vec: dict[int, LaurentVector]) -> dict[int, LaurentVector]:
    """``d^p`` on a vector of Laurent polynomials indexed by coordinate."""
    out: dict[int, LaurentVector] = {}
    for (s, t), items in _entry_terms(C, p).items():
        if s not in vec:
            continue
        for du, dv, c in items:
            img = vec[s].times_monomial(du, dv).scaled(c)
            out[t] = out[t] + img if t in out else img
    return {k: v for k, v in out.items() if not v.is_zero()}


def _h0_basis(C: LinearSheafComplex, p: int) -> list[tuple[int, int, int]]:
    return [(k, u, a - u) for k, (_, _, a) in enumerate(_coords(C, p)) for u in range(0, a + 1)]


def _h1_basis(C: LinearSheafComplex, p: int) -> list[tuple[int, int, int]]:
    return [(k, u, a - u) for k, (_, _, a) in enumerate(_coords(C, p)) for u in range(a + 1, 0)]


def _to_row(f: Field, basis: list[tuple[int, int, int]], vec: dict[int, LaurentVector]) -> np.ndarray:
    pos = {b: i for i, b in enumerate(basis)}
    row = f.zeros(1, len(basis))
    for k, lv in vec.items():
        for (u, v), c in lv.terms:
            if (k, u, v) in pos:
                row[0, pos[(k, u, v)]] = c
    return row


def _basis_vec(f: Field, b: tuple[int, int, int]) -> dict[int, LaurentVector]:
    k, u, v = b
    return {k: LaurentVector.monomial(f, u, v)}


def _d1(C: LinearSheafComplex, p: int, row: int) -> np.ndarray:
    """Matrix of ``E_1^{p,row} -> E_1^{p+1,row}``; classes leaving the region drop out."""
    f = C.field
    basis = _h0_basis if row == 0 else _h1_basis
    src, tgt = basis(C, p), basis(C, p + 1)
    out = f.zeros(len(src), len(tgt))
    for i, b in enumerate(src):
        out[i] = _to_row(f, tgt, _apply(C, p, _basis_vec(f, b)))[0]
    return out


def _rows_combination(f: Field, coeffs: np.ndarray, basis) -> dict[int, LaurentVector]:
    out: dict[int, dict] = {}
    for c, (k, u, v) in zip(coeffs, basis):
        if c:
            out.setdefault(k, {})[(u, v)] = c
    return {k: LaurentVector.make(f, t) for k, t in out.items()}


def _d2(C: LinearSheafComplex, p: int, ker: np.ndarray) -> np.ndarray:
    """Zig-zag images in ``E_1^{p+2,0}`` of cycles of ``E_1^{p,1}`` (rows of ``ker``)."""
    f = C.field
    src = _h1_basis(C, p)
    tgt = _h0_basis(C, p + 2)
    out = f.zeros(ker.shape[0], len(tgt))
    for r in range(ker.shape[0]):
        c = _rows_combination(f, ker[r], src)
        g = _apply(C, p, c)
        b1 = {}
        for k, lv in g.items():
            reg0, reg1, interior = lv.split()
            if not interior.is_zero():
                raise ArithmeticError("cycle of E1 has a nonzero interior image")
            # g = b1 - b0 on the overlap: b1 regular on U1 (u >= 0), b0 = -(rest) regular on U0
            if not reg0.is_zero():
                b1[k] = reg0
        img = _apply(C, p + 1, b1)
        for lv in img.values():
            if any(u < 0 or v < 0 for (u, v), _ in lv.terms):
                raise ArithmeticError("zig-zag produced a non-global section")
        out[r] = _to_row(f, tgt, img)[0]
    return out


def p1_hyper(C: LinearSheafComplex) -> dict[int, int]:
    """``dim H^k(C)`` for a complex of line bundles on P^1 (zero entries omitted)."""
    if C.n != 1:
        raise ValueError("p1_hyper needs a complex on P^1")
    f = C.field
    idx = C.indices
    if not idx:
        return {}
    ps = range(idx[0] - 1, idx[-1] + 2)
    d1 = {(p, q): _d1(C, p, q) for p in range(idx[0] - 2, idx[-1] + 2) for q in (0, 1)}

    def rank(m):
        return f.rank(m) if m.size else 0

    e2 = {}
    for p in ps:
        for q in (0, 1):
            dim = len((_h0_basis if q == 0 else _h1_basis)(C, p))
            e2[(p, q)] = dim - rank(d1[(p, q)]) - rank(d1[(p - 1, q)])
    rank_d2 = {}
    for p in ps:
        m = d1[(p, 1)]
        ker = f.left_kernel(m) if m.shape[0] else m
        if not ker.shape[0]:
            rank_d2[p] = 0
            continue
        imgs = _d2(C, p, ker)
        bnd = d1[(p + 1, 0)]
        stacked = np.concatenate([imgs, bnd], axis=0) if bnd.shape[0] else imgs
        rank_d2[p] = rank(stacked) - rank(bnd)
    out = {}
    for k in range(idx[0] - 1, idx[-1] + 3):
        e0 = e2.get((k, 0), 0) - rank_d2.get(k - 2, 0)
        e1 = e2.get((k - 1, 1), 0) - rank_d2.get(k - 1, 0)
        if e0 + e1:
            out[k] = e0 + e1
    return out


# -- bounded Cech total complex -----------------------------------------------------

def _cech_radius(C: LinearSheafComplex, twists) -> int:
    lows = [a + d for t in C.terms.values() for a, m in t if m for d in twists]
    return max([0] + [-a - 1 for a in lows]) + 1


class _BoundedCech:
    """Cech total complex of ``C(d)`` on ``{x0 != 0}, {x1 != 0}`` with exponents ``>= -R``.

    Index ``k`` holds ``C^k`` on both opens and ``C^{k-1}`` on the overlap;
    ``D = d_C + (-1)^p delta`` with ``delta(s0, s1) = s1 - s0``.
    """

    def __init__(self, C: LinearSheafComplex, d: int, R: int):
        self.C, self.d, self.R = C, d, R
        self.f = C.field
        self._basis = {}

    def _monos(self, a: int, region: int) -> list[tuple[int, int]]:
        R = self.R
        # region 0: U0 (v >= 0), 1: U1 (u >= 0), 2: overlap
        out = []
        for u in range(-R, a + R + 1):
            v = a - u
            if v < -R:
                continue
            if region == 0 and v < 0 or region == 1 and u < 0:
                continue
            out.append((u, v))
        return out

    def basis(self, k: int) -> list[tuple[int, int, int, int]]:
        """``(part, coord, u, v)`` with part 0/1 for the opens at ``C^k``, 2 for the overlap at ``C^{k-1}``."""
        if k not in self._basis:
            out = []
            for part in (0, 1):
                for ci, (_, _, a) in enumerate(_coords(self.C, k)):
                    out += [(part, ci, u, v) for u, v in self._monos(a + self.d, part)]
            for ci, (_, _, a) in enumerate(_coords(self.C, k - 1)):
                out += [(2, ci, u, v) for u, v in self._monos(a + self.d, 2)]
            self._basis[k] = out
        return self._basis[k]

    def _row(self, k: int, items: dict) -> np.ndarray:
        basis = self.basis(k)
        pos = {b: i for i, b in enumerate(basis)}
        row = self.f.zeros(1, len(basis))
        for b, c in items.items():
            if b in pos:
                row[0, pos[b]] = self.f.scalar(row[0, pos[b]] + c)
            elif c:
                raise ArithmeticError("image left the bounded region")
        return row

    def differential(self, k: int) -> np.ndarray:
        f = self.f
        src, tgt = self.basis(k), self.basis(k + 1)
        out = f.zeros(len(src), len(tgt))
        entries = _entry_terms(self.C, k)
        entries_prev = _entry_terms(self.C, k - 1)
        by_src, by_src_prev = {}, {}
        for (s, t), items in entries.items():
            by_src.setdefault(s, []).append((t, items))
        for (s, t), items in entries_prev.items():
            by_src_prev.setdefault(s, []).append((t, items))
        tpos = {b: i for i, b in enumerate(tgt)}
        sign = 1 if k % 2 == 0 else -1
        for i, (part, ci, u, v) in enumerate(src):
            img: dict = {}
            if part in (0, 1):
                for t, items in by_src.get(ci, []):
                    for du, dv, c in items:
                        key = (part, t, u + du, v + dv)
                        img[key] = img.get(key, 0) + c
                key = (2, ci, u, v)
                img[key] = img.get(key, 0) + (sign if part == 1 else -sign)
            else:
                for t, items in by_src_prev.get(ci, []):
                    for du, dv, c in items:
                        key = (2, t, u + du, v + dv)
                        img[key] = img.get(key, 0) + c
            for key, c in img.items():
                c = f.scalar(c)
                if not c:
                    continue
                if key not in tpos:
                    raise ArithmeticError("image left the bounded region")
                out[i, tpos[key]] = f.scalar(out[i, tpos[key]] + c)
        return out

    def shift_map(self, k: int, other: "_BoundedCech", var: int) -> np.ndarray:
        """Multiplication by ``x_var`` from ``C(d)`` to ``C(d+1)`` in index ``k``."""
        src, tgt = self.basis(k), other.basis(k)
        tpos = {b: i for i, b in enumerate(tgt)}
        out = self.f.zeros(len(src), len(tgt))
        for i, (part, ci, u, v) in enumerate(src):
            key = (part, ci, u + (var == 0), v + (var == 1))
            out[i, tpos[key]] = 1
        return out


def _cycles_and_boundaries(K: _BoundedCech, k: int):
    f = K.f
    dk = K.differential(k)
    dprev = K.differential(k - 1)
    Z = f.left_kernel(dk) if dk.shape[0] else dk
    B = dprev
    return Z, B


def cech_hyper(C: LinearSheafComplex, d: int = 0) -> dict[int, int]:
    """``dim H^k(C(d))`` from the bounded Cech complex (zero entries omitted)."""
    if C.n != 1:
        raise ValueError("the Cech oracle works on P^1 only")
    f = C.field
    idx = C.indices
    if not idx:
        return {}
    K = _BoundedCech(C, d, _cech_radius(C, [d]))
    out = {}
    for k in range(idx[0], idx[-1] + 2):
        dk, dprev = K.differential(k), K.differential(k - 1)
        dim = len(K.basis(k))
        h = dim - (f.rank(dk) if dk.size else 0) - (f.rank(dprev) if dprev.size else 0)
        if h:
            out[k] = h
    return out


def cech_multiplication_rank(C: LinearSheafComplex, k: int, d: int) -> int:
    """Rank of ``H^k(C(d)) (x) V* -> H^k(C(d+1))`` induced by ``x_0, x_1``."""
    if C.n != 1:
        raise ValueError("the Cech oracle works on P^1 only")
    f = C.field
    R = _cech_radius(C, [d, d + 1])
    K0, K1 = _BoundedCech(C, d, R), _BoundedCech(C, d + 1, R)
    Z0, _ = _cycles_and_boundaries(K0, k)
    _, B1 = _cycles_and_boundaries(K1, k)
    if not Z0.shape[0]:
        return 0
    imgs = [f.mul(Z0, K0.shift_map(k, K1, var)) for var in (0, 1)]
    stacked = np.concatenate(imgs + ([B1] if B1.shape[0] else []), axis=0)
    base = f.rank(B1) if B1.size else 0
    return f.rank(stacked) - base
