"""The BGG functor L: Lambda-modules to complexes of sums of line bundles.

``L(N)`` has ``O(p) (x) N_p`` in index ``p`` and differential
``sum_i X_i (x) (. e_i)``.  A :class:`LinearSheafComplex` stores each
differential as blocks between summands ``O(a)^m -> O(b)^m'``; a block is a
dict from a monomial in ``X_0..X_n`` (a sorted index tuple, ``()`` for a
constant) to an ``m x m'`` coefficient matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import factorial

import numpy as np

from .exterior import ExteriorContext, ExteriorElement
from .linalg import Field
from .modules import LambdaModule, ModuleMorphism

Block = dict[tuple[int, ...], np.ndarray]


def chi_line(n: int, m: int) -> int:
    """Euler characteristic of ``O(m)`` on P^n: ``(m+n)...(m+1) / n!`` for every integer m."""
    num = 1
    for k in range(1, n + 1):
        num *= m + k
    return num // factorial(n)


@dataclass
class LinearSheafComplex:
    """A bounded complex of sums of line bundles on P^n."""

    ctx: ExteriorContext
    terms: dict[int, list[tuple[int, int]]]                       # p -> [(twist, multiplicity)]
    diffs: dict[int, dict[tuple[int, int], Block]] = dc_field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def field(self) -> Field:
        return self.ctx.field

    @property
    def indices(self) -> list[int]:
        return sorted(p for p, t in self.terms.items() if any(m for _, m in t))

    def term(self, p: int) -> list[tuple[int, int]]:
        return self.terms.get(p, [])

    def block(self, p: int, j: int, l: int) -> Block:
        return self.diffs.get(p, {}).get((j, l), {})

    def twisted(self, d: int) -> "LinearSheafComplex":
        """``C(d)``: every summand twisted by ``d``, same matrices."""
        return LinearSheafComplex(self.ctx, {p: [(a + d, m) for a, m in t] for p, t in self.terms.items()},
                                  self.diffs)

    def square(self, p: int) -> dict[tuple[int, int], Block]:
        """Blocks of ``d^{p+1} d^p`` expanded as polynomial matrices."""
        f = self.field
        out: dict[tuple[int, int], Block] = {}
        for (j, k), b1 in self.diffs.get(p, {}).items():
            for (k2, l), b2 in self.diffs.get(p + 1, {}).items():
                if k2 != k:
                    continue
                acc = out.setdefault((j, l), {})
                for m1, a1 in b1.items():
                    for m2, a2 in b2.items():
                        key = tuple(sorted(m1 + m2))
                        prod = f.mul(a1, a2)
                        acc[key] = f.add(acc[key], prod) if key in acc else prod
        return out

    def squares_to_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(m) for p in self.diffs for blk in self.square(p).values() for m in blk.values())

    def is_linear(self) -> bool:
        """Every block entry is a form of degree ``b - a`` in {0, 1}."""
        for p, blocks in self.diffs.items():
            for (j, l), blk in blocks.items():
                deg = self.term(p + 1)[l][0] - self.term(p)[j][0]
                if deg not in (0, 1) or any(len(m) != deg for m in blk):
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, LinearSheafComplex):
            return NotImplemented
        if self.ctx != other.ctx or self.terms != other.terms:
            return False
        f = self.field
        for p in set(self.diffs) | set(other.diffs):
            keys = set(self.diffs.get(p, {})) | set(other.diffs.get(p, {}))
            for key in keys:
                a, b = self.diffs.get(p, {}).get(key, {}), other.diffs.get(p, {}).get(key, {})
                for mono in set(a) | set(b):
                    x, y = a.get(mono), b.get(mono)
                    if x is None:
                        x = f.zeros(*y.shape)
                    if y is None:
                        y = f.zeros(*x.shape)
                    if not np.array_equal(x, y):
                        return False
        return True

    def render(self, with_maps: bool = False) -> str:
        lines = []
        for p in self.indices:
            parts = [f"O({a})^{m}" if m != 1 else f"O({a})" for a, m in self.term(p) if m]
            lines.append(f"{p}: " + " ⊕ ".join(parts))
            if with_maps and p in self.diffs:
                for (j, l), blk in sorted(self.diffs[p].items()):
                    lines.append(f"  d[{j}->{l}]:")
                    for row in _render_block(self, blk, self.term(p)[j][1], self.term(p + 1)[l][1]):
                        lines.append("    " + row)
        return "\n".join(lines) + "\n"


def _render_block(C: LinearSheafComplex, blk: Block, rows: int, cols: int) -> list[str]:
    out = []
    for r in range(rows):
        cells = []
        for c in range(cols):
            terms = {}
            const = None
            for mono, mat in blk.items():
                if mat[r, c]:
                    if mono == ():
                        const = mat[r, c]
                    else:
                        terms[1 << mono[0]] = mat[r, c]
            if const is not None:
                cells.append(str(ExteriorElement(C.ctx, {0: const}, True)))
            else:
                cells.append(str(ExteriorElement(C.ctx, terms, True)))
        out.append("[" + ", ".join(cells) + "]")
    return out


def L_module(N: LambdaModule) -> LinearSheafComplex:
    terms = {p: [(p, k)] for p, k in N.dims.items()}
    diffs = {}
    for p in N.degrees:
        if N.dim(p + 1):
            diffs[p] = {(0, 0): {(i,): N.act(i, p) for i in range(N.n + 1)}}
    return LinearSheafComplex(N.ctx, terms, diffs)


def L_morphism(u: ModuleMorphism) -> dict[int, np.ndarray]:
    """``L(u)``: the constant matrix ``u_p`` on ``O(p) (x) N_p`` in each index."""
    return {p: m for p, m in u.maps.items()}


def is_chain_map(source: LinearSheafComplex, target: LinearSheafComplex, maps: dict[int, np.ndarray]) -> bool:
    """Check ``d u = u d`` for constant maps between single-summand terms (the shape of ``L``)."""
    f = source.field
    for p in set(source.indices) | set(target.indices):
        for i in range(source.n + 1):
            sd = source.block(p, 0, 0).get((i,))
            td = target.block(p, 0, 0).get((i,))
            u0, u1 = maps.get(p), maps.get(p + 1)
            lhs = f.mul(sd, u1) if sd is not None and u1 is not None else None
            rhs = f.mul(u0, td) if u0 is not None and td is not None else None
            if lhs is None and rhs is None:
                continue
            if lhs is None:
                lhs = f.zeros(*rhs.shape)
            if rhs is None:
                rhs = f.zeros(*lhs.shape)
            if not np.array_equal(lhs, rhs):
                return False
    return True


def L_complex(K) -> LinearSheafComplex:
    """Total complex of ``L(K^p)`` with the inner differential signed by ``(-1)^p``.

    Summands of total index ``s`` are ``O(s-p) (x) K^p_{s-p}``, ordered by ``p``.
    """
    ctx = K.ctx
    f = ctx.field
    layout: dict[int, list[tuple[int, int]]] = {}       # s -> [(p, q)]
    for p, M in K.terms.items():
        for q in M.degrees:
            layout.setdefault(p + q, []).append((p, q))
    for s in layout:
        layout[s].sort()
    terms = {s: [(q, K.term(p).dim(q)) for p, q in pq] for s, pq in layout.items()}
    diffs: dict[int, dict] = {}
    for s, pq in layout.items():
        if s + 1 not in layout:
            continue
        pos = {key: l for l, key in enumerate(layout[s + 1])}
        blocks = {}
        for j, (p, q) in enumerate(pq):
            M = K.term(p)
            if (p, q + 1) in pos and M.dim(q + 1):
                sign = -1 if p % 2 else 1
                blk = {}
                for i in range(ctx.n + 1):
                    a = M.act(i, q)
                    if not f.is_zero(a):
                        blk[(i,)] = a if sign > 0 else f.reduce(-a)
                if blk:
                    blocks[(j, pos[(p, q + 1)])] = blk
            if (p + 1, q) in pos:
                m = K.diff(p).component(q)
                if not f.is_zero(m):
                    blocks[(j, pos[(p + 1, q)])] = {(): m}
        if blocks:
            diffs[s] = blocks
    return LinearSheafComplex(ctx, terms, diffs)


def euler_char(C: LinearSheafComplex, d: int) -> int:
    return sum((-1) ** (p % 2) * m * chi_line(C.n, a + d)
               for p, t in C.terms.items() for a, m in t)


def sheaf_dual(C: LinearSheafComplex) -> LinearSheafComplex:
    """``Hom(C, O)``: index ``p`` and twist ``a`` negate, ``d'^q = (-1)^(q+1) (d^{-q-1})^T``."""
    f = C.field
    terms = {-p: [(-a, m) for a, m in t] for p, t in C.terms.items()}
    diffs = {}
    for p, blocks in C.diffs.items():
        q = -p - 1
        sign = -1 if (q + 1) % 2 else 1
        new = {}
        for (j, l), blk in blocks.items():
            new[(l, j)] = {mono: (m.T.copy() if sign > 0 else f.reduce(-m.T)) for mono, m in blk.items()}
        diffs[q] = new
    return LinearSheafComplex(C.ctx, terms, diffs)


def render_sheaf_complex(C: LinearSheafComplex, with_maps: bool = False) -> str:
    return C.render(with_maps)

