"""Exterior algebra on V = k^{n+1} and its dual.

Monomials are bit masks over ``{0..n}``; ``e_S`` means
``e_{s1} ^ ... ^ e_{sk}`` with ``s1 < ... < sk``.  Dual elements reuse the
same representation with ``dual=True`` and are written with ``X``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from .linalg import Field, CharacteristicMismatch


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def wedge_sign(s: int, t: int) -> int:
    """Sign of sorting ``e_S ^ e_T``; 0 when S and T meet."""
    if s & t:
        return 0
    # count pairs (a in S, b in T) with a > b
    inversions = 0
    for b in indices_of(t):
        inversions += popcount(s >> (b + 1))
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class ExteriorContext:
    """Fixed data for ``Lambda = wedge V`` with ``dim V = n + 1``."""

    n: int
    field: Field = Field()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")

    @property
    def rank(self) -> int:
        return self.n + 1

    @property
    def top(self) -> int:
        return (1 << (self.n + 1)) - 1

    def dim(self, k: int) -> int:
        return comb(self.n + 1, k) if 0 <= k <= self.n + 1 else 0

    @cached_property
    def _bases(self) -> list[list[int]]:
        return [[mask_of(c) for c in combinations(range(self.n + 1), k)]
                for k in range(self.n + 2)]

    @cached_property
    def _index(self) -> dict[int, int]:
        return {m: i for basis in self._bases for i, m in enumerate(basis)}

    def basis(self, k: int) -> list[int]:
        """Monomials of degree k in lexicographic order of index tuples."""
        return self._bases[k] if 0 <= k <= self.n + 1 else []

    def index(self, mask: int) -> int:
        return self._index[mask]

    @cached_property
    def _wedge_mats(self) -> dict[tuple[int, int], np.ndarray]:
        # right multiplication by e_i on Lambda_k -> Lambda_{k+1}
        f = self.field
        out = {}
        for k in range(self.n + 1):
            for i in range(self.n + 1):
                m = f.zeros(self.dim(k), self.dim(k + 1))
                for r, s in enumerate(self.basis(k)):
                    sg = wedge_sign(s, 1 << i)
                    if sg:
                        m[r, self.index(s | (1 << i))] = f.scalar(sg)
                out[(i, k)] = m
        return out

    def wedge_matrix(self, i: int, k: int) -> np.ndarray:
        """Matrix of ``x -> x ^ e_i`` from Lambda_k to Lambda_{k+1}."""
        if 0 <= k <= self.n:
            return self._wedge_mats[(i, k)]
        return self.field.zeros(self.dim(k), self.dim(k + 1))

    @cached_property
    def _contract_mats(self) -> dict[tuple[int, int], np.ndarray]:
        f = self.field
        out = {}
        for p in range(1, self.n + 2):
            for i in range(self.n + 1):
                m = f.zeros(self.dim(p), self.dim(p - 1))
                for r, s in enumerate(self.basis(p)):
                    if s >> i & 1:
                        pos = popcount(s & ((1 << i) - 1))
                        m[r, self.index(s & ~(1 << i))] = f.scalar(-1 if pos % 2 else 1)
                out[(i, p)] = m
        return out

    def contraction_matrix(self, i: int, p: int) -> np.ndarray:
        """Matrix of ``xi -> xi . e_i`` from wedge^p V* to wedge^{p-1} V*."""
        if 1 <= p <= self.n + 1:
            return self._contract_mats[(i, p)]
        return self.field.zeros(self.dim(p), self.dim(p - 1))

    # convenience constructors
    def e(self, *indices) -> "ExteriorElement":
        return ExteriorElement.monomial(self, indices)

    def X(self, *indices) -> "ExteriorElement":
        return ExteriorElement.monomial(self, indices, dual=True)

    def zero(self, dual=False) -> "ExteriorElement":
        return ExteriorElement(self, {}, dual)


class ExteriorElement:
    """An element of Lambda (or of wedge V* when ``dual``), in canonical form."""

    __slots__ = ("ctx", "terms", "dual")

    def __init__(self, ctx: ExteriorContext, terms: dict, dual: bool = False):
        f = ctx.field
        clean = {}
        for m, c in terms.items():
            c = f.scalar(c)
            if c != 0:
                clean[m] = c
        self.ctx = ctx
        self.terms = dict(sorted(clean.items(), key=lambda kv: (popcount(kv[0]), indices_of(kv[0]))))
        self.dual = dual

    @classmethod
    def monomial(cls, ctx, indices, coeff=1, dual=False) -> "ExteriorElement":
        indices = list(indices)
        if len(set(indices)) != len(indices):
            return cls(ctx, {}, dual)
        # sort with sign
        sign = 1
        arr = indices[:]
        for i in range(len(arr)):
            for j in range(len(arr) - 1 - i):
                if arr[j] > arr[j + 1]:
                    arr[j], arr[j + 1] = arr[j + 1], arr[j]
                    sign = -sign
        if any(not 0 <= i <= ctx.n for i in arr):
            raise ValueError(f"index out of range 0..{ctx.n}")
        return cls(ctx, {mask_of(arr): sign * Fraction(coeff)}, dual)

    @classmethod
    def from_vector(cls, ctx, k: int, vec, dual=False) -> "ExteriorElement":
        """Element of degree k from coordinates in ``ctx.basis(k)``."""
        return cls(ctx, {m: v for m, v in zip(ctx.basis(k), list(vec))}, dual)

    def to_vector(self, k: int) -> np.ndarray:
        f = self.ctx.field
        out = f.zeros(1, self.ctx.dim(k))
        for m, c in self.terms.items():
            if popcount(m) == k:
                out[0, self.ctx.index(m)] = c
        return out[0]

    def _check(self, other: "ExteriorElement"):
        if self.ctx != other.ctx:
            if self.ctx.field != other.ctx.field:
                raise CharacteristicMismatch("elements over different fields")
            raise ValueError("elements from different exterior algebras")

    # -- structure -----------------------------------------------------------

    def degrees(self) -> set[int]:
        return {popcount(m) for m in self.terms}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("element is not homogeneous")
        return ds.pop()

    def is_zero(self) -> bool:
        return not self.terms

    def in_positive_part(self) -> bool:
        """True when there is no degree-0 component."""
        return 0 not in self.terms

    def homogeneous_part(self, k: int) -> "ExteriorElement":
        return ExteriorElement(self.ctx, {m: c for m, c in self.terms.items() if popcount(m) == k}, self.dual)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        if self.dual != other.dual:
            raise ValueError("cannot add elements of Lambda and its dual")
        f = self.ctx.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = f.scalar(terms.get(m, 0) + c)
        return ExteriorElement(self.ctx, terms, self.dual)

    def __neg__(self):
        f = self.ctx.field
        return ExteriorElement(self.ctx, {m: f.neg(c) for m, c in self.terms.items()}, self.dual)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        f = self.ctx.field
        c = f.scalar(c)
        return ExteriorElement(self.ctx, {m: f.scalar(c * v) for m, v in self.terms.items()}, self.dual)

    def __mul__(self, other):
        if isinstance(other, ExteriorElement):
            return wedge_product(self, other)
        return self.__rmul__(other)

    def __eq__(self, other):
        if not isinstance(other, ExteriorElement):
            return NotImplemented
        return self.ctx == other.ctx and self.dual == other.dual and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, self.dual, tuple(self.terms.items())))

    def __repr__(self):
        return f"ExteriorElement({self})"

    def __str__(self):
        return render(self)


def wedge_product(x: ExteriorElement, y: ExteriorElement) -> ExteriorElement:
    """``x ^ y`` in Lambda (or in wedge V*, when both are dual)."""
    x._check(y)
    if x.dual != y.dual:
        raise ValueError("wedge of Lambda and dual elements is undefined")
    f = x.ctx.field
    out: dict[int, object] = {}
    for s, a in x.terms.items():
        for t, b in y.terms.items():
            sg = wedge_sign(s, t)
            if sg:
                out[s | t] = f.scalar(out.get(s | t, 0) + sg * a * b)
    return ExteriorElement(x.ctx, out, x.dual)


def contract(xi: ExteriorElement, v) -> ExteriorElement:
    """Right action of a vector ``v`` on a dual element by contraction.

    ``(f_1 ^ ... ^ f_p) . v = sum_i (-1)^(i-1) f_i(v) f_1 ^ .. f_i^ .. ^ f_p``.
    ``v`` is an ExteriorElement of degree 1 or a coefficient sequence.
    """
    ctx = xi.ctx
    if not xi.dual:
        raise ValueError("contraction acts on dual elements")
    if isinstance(v, ExteriorElement):
        xi._check(v)
        if v.dual or not v.degrees() <= {1}:
            raise ValueError("contraction needs a vector of V")
        coeffs = {indices_of(m)[0]: c for m, c in v.terms.items()}
    else:
        coeffs = {i: ctx.field.scalar(c) for i, c in enumerate(v) if ctx.field.scalar(c) != 0}
    f = ctx.field
    out: dict[int, object] = {}
    for s, a in xi.terms.items():
        for i, c in coeffs.items():
            if s >> i & 1:
                pos = popcount(s & ((1 << i) - 1))
                sg = -1 if pos % 2 else 1
                key = s & ~(1 << i)
                out[key] = f.scalar(out.get(key, 0) + sg * a * c)
    return ExteriorElement(ctx, out, True)


def contract_by(xi: ExteriorElement, omega: ExteriorElement) -> ExteriorElement:
    """Right action of ``omega`` in Lambda on a dual element: ``xi . omega``.

    ``xi . (e_{s1} ^ ... ^ e_{sk}) = (..(xi . e_{s1}) ..) . e_{sk}``.
    """
    out = ExteriorElement(xi.ctx, {}, True)
    for m, c in omega.terms.items():
        y = xi
        for i in indices_of(m):
            y = contract(y, xi.ctx.e(i))
        out = out + c * y
    return out


# -- text rendering ------------------------------------------------------------

def _coef_str(field: Field, c) -> tuple[str, str]:
    """Return (sign, magnitude) for display, centering GF(p) residues."""
    if field.char:
        v = int(c)
        if v > field.char // 2:
            v -= field.char
        return ("-" if v < 0 else "+", str(abs(v)))
    if c < 0:
        return "-", str(-c)
    return "+", str(c)


def render(x: ExteriorElement) -> str:
    if not x.terms:
        return "0"
    sym = "X" if x.dual else "e"
    parts = []
    for m, c in x.terms.items():
        sign, mag = _coef_str(x.ctx.field, c)
        mono = "^".join(f"{sym}{i}" for i in indices_of(m))
        if not mono:
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\*)?((?:[eX]\d+)(?:\^[eX]\d+)*)$|^(\d+(?:/\d+)?)$")


def parse(ctx: ExteriorContext, text: str, dual: bool = False) -> ExteriorElement:
    """Parse the rendering grammar, e.g. ``"e0^e1 - 2*e2^e3"`` or ``"X0^X1"``.

    ``dual`` only decides text without any symbol, such as ``"0"`` or ``"3"``.
    """
    s = text.replace(" ", "")
    if s in ("", "0"):
        return ExteriorElement(ctx, {}, dual)
    if s[0] not in "+-":
        s = "+" + s
    chunks = re.findall(r"[+-][^+-]+", s)
    if "".join(chunks) != s:
        raise ValueError(f"cannot parse {text!r}")
    terms = []
    kinds = set()
    for chunk in chunks:
        m = _TERM.match(chunk[1:])
        if not m:
            raise ValueError(f"cannot parse term {chunk!r}")
        sign = -1 if chunk[0] == "-" else 1
        if m.group(3) is not None:
            terms.append((sign * Fraction(m.group(3)), []))
            continue
        syms = m.group(2).split("^")
        kinds |= {t[0] for t in syms}
        terms.append((sign * Fraction(m.group(1) or "1"), [int(t[1:]) for t in syms]))
    if len(kinds) > 1:
        raise ValueError(f"mixed e/X symbols in {text!r}")
    if kinds:
        dual = kinds.pop() == "X"
    out = ExteriorElement(ctx, {}, dual)
    for coeff, idx in terms:
        out = out + coeff * ExteriorElement.monomial(ctx, idx, 1, dual)
    return out
