"""Beilinson monads read off a Tate resolution.

The first form keeps the Tate summands ``Lambda^v(-i)``, ``0 <= i <= n``;
each becomes ``Omega^i(i)``, the kernel of ``L(Lambda^v(-i))`` in index 0,
whose fibre sits in ``wedge^i V*``.  A Tate block between two such summands
restricted to these fibres is contraction by an element of
``wedge^{i-j} V``, which is what the complex records.

The second form only has terms: ``O(-i)`` with multiplicity
``dim H^{p+i}(J)_{-i}`` for the subcomplex ``J`` of summands with
nonnegative twist.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb

import numpy as np

from .exterior import ExteriorContext, ExteriorElement, indices_of
from .functor import chi_line
from .modules import LambdaModule, annihilated_by_top
from .resolutions import NotSocleAnnihilated, TateResolution, WindowTooSmall, tate_resolution


def chi_omega(n: int, i: int, d: int) -> int:
    """``chi(Omega^i(i)(d))`` from the Koszul resolution of ``Omega^i``."""
    return sum((-1) ** k * comb(n + 1, i - k) * chi_line(n, d + k) for k in range(i + 1))


def contraction_operator(ctx: ExteriorContext, lam: ExteriorElement, i: int) -> np.ndarray:
    """Matrix of ``xi -> xi . lam`` from ``wedge^i V*`` to ``wedge^{i-k} V*`` (``lam`` of degree k)."""
    f = ctx.field
    k = lam.degree if not lam.is_zero() else 0
    out = f.zeros(ctx.dim(i), ctx.dim(i - k)) if 0 <= i - k else f.zeros(ctx.dim(i), 0)
    for mask, c in lam.terms.items():
        m = f.eye(ctx.dim(i))
        deg = i
        for s in indices_of(mask):
            m = f.mul(m, ctx.contraction_matrix(s, deg))
            deg -= 1
        out = f.add(out, f.scale(c, m))
    return out


def _contraction_basis(ctx: ExteriorContext, i: int, k: int) -> tuple[list[int], np.ndarray]:
    """Monomials of degree k and their contraction operators stacked as rows."""
    masks = ctx.basis(k)
    rows = [contraction_operator(ctx, ExteriorElement(ctx, {m: 1}), i).reshape(1, -1) for m in masks]
    return masks, np.concatenate(rows, axis=0)


@dataclass
class BeilinsonComplex:
    """Terms ``Omega^i(i)^m`` and differentials by contraction with ``wedge^{i-j} V``.

    ``summands[p]`` lists the ``i`` of each copy (decreasing ``i``);
    ``blocks[p][a][b]`` is the element from copy ``a`` of index ``p`` to
    copy ``b`` of index ``p+1``.
    """

    ctx: ExteriorContext
    summands: dict[int, list[int]]
    blocks: dict[int, list[list[ExteriorElement]]] = dc_field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.ctx.n

    def terms(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = {}
        for p, iis in self.summands.items():
            for i in iis:
                out.setdefault(p, {})
                out[p][i] = out[p].get(i, 0) + 1
        return {p: t for p, t in sorted(out.items()) if t}

    def multiplicity(self, p: int, i: int) -> int:
        return self.summands.get(p, []).count(i)

    def fibre_matrix(self, p: int) -> np.ndarray:
        """The differential on fibres ``(+) wedge^i V* -> (+) wedge^j V*``."""
        ctx = self.ctx
        f = ctx.field
        src, tgt = self.summands.get(p, []), self.summands.get(p + 1, [])
        rows = [ctx.dim(i) for i in src]
        cols = [ctx.dim(j) for j in tgt]
        out = f.zeros(sum(rows), sum(cols))
        blk = self.blocks.get(p)
        if blk is None:
            return out
        r0 = 0
        for a, i in enumerate(src):
            c0 = 0
            for b, j in enumerate(tgt):
                lam = blk[a][b]
                if not lam.is_zero():
                    out[r0:r0 + rows[a], c0:c0 + cols[b]] = contraction_operator(ctx, lam, i)
                c0 += cols[b]
            r0 += rows[a]
        return out

    def squares_to_zero(self) -> bool:
        """Composite contractions vanish: ``sum_b (xi . lam_ab) . lam'_bc = 0``."""
        f = self.ctx.field
        for p in self.blocks:
            if p + 1 in self.blocks:
                if not f.is_zero(f.mul(self.fibre_matrix(p), self.fibre_matrix(p + 1))):
                    return False
        return True

    def products_vanish(self) -> bool:
        """The same statement in Lambda: ``sum_b lam_ab ^ lam'_bc = 0``."""
        for p, blk in self.blocks.items():
            nxt = self.blocks.get(p + 1)
            if nxt is None:
                continue
            for a in range(len(blk)):
                for c in range(len(nxt[0]) if nxt else 0):
                    acc = ExteriorElement(self.ctx, {})
                    for b in range(len(nxt)):
                        acc = acc + blk[a][b] * nxt[b][c]
                    if not acc.is_zero():
                        return False
        return True

    def euler(self, d: int) -> int:
        return sum((-1) ** (p % 2) * m * chi_omega(self.n, i, d)
                   for p, t in self.terms().items() for i, m in t.items())

    def render(self, with_maps: bool = False) -> str:
        lines = []
        for p, t in self.terms().items():
            parts = [f"Ω^{i}({i})" + (f"^{m}" if m != 1 else "") for i, m in sorted(t.items(), reverse=True)]
            lines.append(f"{p}: " + " ⊕ ".join(parts))
            if with_maps and p in self.blocks and self.blocks[p] and self.blocks[p][0]:
                for a, row in enumerate(self.blocks[p]):
                    lines.append("  [" + ", ".join(str(e) for e in row) + "]")
        return "\n".join(lines) + "\n"


@dataclass
class LinearMonadTerms:
    """Terms ``O(-i)^m`` of the second Beilinson form, per index."""

    n: int
    multiplicities: dict[int, dict[int, int]]

    def terms(self) -> dict[int, dict[int, int]]:
        return {p: {i: m for i, m in sorted(t.items()) if m}
                for p, t in sorted(self.multiplicities.items()) if any(t.values())}

    def euler(self, d: int) -> int:
        return sum((-1) ** (p % 2) * m * chi_line(self.n, -i + d)
                   for p, t in self.multiplicities.items() for i, m in t.items())

    def render(self) -> str:
        lines = []
        for p, t in self.terms().items():
            parts = [f"O({-i})" + (f"^{m}" if m != 1 else "") for i, m in t.items()]
            lines.append(f"{p}: " + " ⊕ ".join(parts))
        return "\n".join(lines) + "\n"


def beilinson_window(N0: LambdaModule) -> tuple[int, int]:
    """Tate indices that can carry a Beilinson term of ``L(N0)``."""
    n = N0.n
    return (N0.lo - n, N0.hi + n)


def _seed_tate(N0: LambdaModule, window, T):
    if not annihilated_by_top(N0):
        raise NotSocleAnnihilated("module has a free summand; normalize with split_free first")
    need = beilinson_window(N0)
    if T is None:
        T = tate_resolution(N0, window or need)
    if T.mode != "full":
        raise WindowTooSmall("Beilinson monads need a full Tate window")
    if T.window[0] > need[0] or T.window[1] < need[1]:
        raise WindowTooSmall(f"Tate window {T.window[0]}..{T.window[1]} misses terms; "
                             f"it must contain {need[0]}..{need[1]}")
    return T


def beilinson_omega(N0: LambdaModule, window: tuple[int, int] | None = None, shift: int = 0,
                    T: TateResolution | None = None) -> BeilinsonComplex:
    """``C^p = (+)_i H^{p+i}(F(-i)) (x) Omega^i(i)`` with contraction differentials.

    ``F = T^shift L(N0)``: index ``p`` of the complex is Tate index ``p + shift``.
    """
    if N0.is_zero():
        return BeilinsonComplex(N0.ctx, {})
    T = _seed_tate(N0, window, T)
    ctx = T.ctx
    f = ctx.field
    n = ctx.n
    lo, hi = T.window
    keep: dict[int, list[int]] = {}
    for q in range(lo, hi + 1):
        F = T.term(q)
        keep[q] = [j for j, t in enumerate(F.twists) if -n <= t <= 0]
    summands = {q - shift: sorted((-F_t for F_t in [T.term(q).twists[j] for j in js]), reverse=True)
                for q, js in keep.items() if js}
    # order copies by decreasing i, keeping Tate order inside each i
    order = {q: sorted(js, key=lambda j: T.term(q).twists[j]) for q, js in keep.items()}
    cache = {}
    blocks = {}
    for q in range(lo, hi):
        src, tgt = order.get(q, []), order.get(q + 1, [])
        if not src or not tgt:
            continue
        u = T.diff(q)
        Fs, Ft = T.term(q), T.term(q + 1)
        rows = []
        for j in src:
            i = -Fs.twists[j]
            row = []
            for l in tgt:
                jj = -Ft.twists[l]
                k = i - jj
                if k <= 0:
                    row.append(ExteriorElement(ctx, {}))
                    continue
                mat = u.component(0)[Fs.summand_slice(j, 0), Ft.summand_slice(l, 0)]
                if f.is_zero(mat):
                    row.append(ExteriorElement(ctx, {}))
                    continue
                if (i, k) not in cache:
                    cache[(i, k)] = _contraction_basis(ctx, i, k)
                masks, basis = cache[(i, k)]
                coeffs = f.solve_left(basis, mat.reshape(1, -1))[0]
                row.append(ExteriorElement(ctx, {m: c for m, c in zip(masks, coeffs)}))
            rows.append(row)
        blocks[q - shift] = rows
    return BeilinsonComplex(ctx, summands, blocks)


def beilinson_linear_terms(N0: LambdaModule, window: tuple[int, int] | None = None, shift: int = 0,
                           T: TateResolution | None = None) -> LinearMonadTerms:
    """Multiplicities ``dim H^{p+i}(J)_{-i}`` of ``O(-i)`` in index ``p`` (``0 <= i <= n``)."""
    n = N0.n
    if N0.is_zero():
        return LinearMonadTerms(n, {})
    T = _seed_tate(N0, window, T)
    f = T.ctx.field
    lo, hi = T.window

    def j_coords(q: int, deg: int) -> list[int]:
        F = T.term(q)
        out = []
        for j, t in enumerate(F.twists):
            if t >= 0:
                sl = F.summand_slice(j, deg)
                out.extend(range(sl.start, sl.stop))
        return out

    def j_rank(q: int, deg: int) -> int:
        if not T.computed[0] <= q < T.computed[1]:
            return 0
        m = T.diff(q).component(deg)
        rows, cols = j_coords(q, deg), j_coords(q + 1, deg)
        return f.rank(m[np.ix_(rows, cols)]) if rows and cols else 0

    def h(q: int, i: int) -> int:
        deg = -i
        return len(j_coords(q, deg)) - j_rank(q, deg) - j_rank(q - 1, deg)

    mult: dict[int, dict[int, int]] = {}
    for q in range(lo, hi + 1):
        for i in range(n + 1):
            v = h(q, i)
            if v:
                mult.setdefault(q - i - shift, {})[i] = v
        if h(q, n + 1):
            raise WindowTooSmall(f"H^{q}(J) has a component in degree {-n - 1}; enlarge the window")
    return LinearMonadTerms(n, mult)
