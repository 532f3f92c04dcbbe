"""Hypercohomology tables, derived Hom and multiplication maps from Tate resolutions.

For a socle-annihilated ``N0`` with Tate resolution ``I``, the multiplicity
``gamma_{p,i}`` of ``Lambda^v(i)`` in ``I^p`` is ``h^{p-i}(F(i))`` for
``F = L(N0)``.  Tables may be reported for a shifted complex ``T^s F``
(``shift = s``), which is how the line-bundle seeds ``k(-a)`` give the table
of ``O(a)`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .modules import (
    FreeModule,
    LambdaModule,
    annihilated_by_top,
    extend_functional,
    socle_dims,
    split_free,
)
from .resolutions import NotSocleAnnihilated, TateResolution, WindowTooSmall, tate_resolution


class BookkeepingMismatch(RuntimeError):
    """Tracked multiplicities disagree with the socle of a Tate term."""


class CannotCertify(ValueError):
    """The table is too narrow to decide the requested invariant."""


def _require_seed(N0: LambdaModule):
    if not annihilated_by_top(N0):
        raise NotSocleAnnihilated("module has a free summand; normalize with split_free first")


# -- Betti numbers -----------------------------------------------------------------------

def betti_table(T: TateResolution, check_socle: bool = True) -> dict[tuple[int, int], int]:
    """``{(p, i): gamma_{p,i}}``, cross-checked against ``dim soc(I^p)_{-i}`` when possible."""
    table = T.betti()
    if check_socle and T.mode == "full":
        for p, F in T.terms.items():
            soc = socle_dims(F)
            tracked = {-t: m for (q, t), m in table.items() if q == p}
            if soc != tracked:
                raise BookkeepingMismatch(f"index {p}: socle {soc} vs tracked {tracked}")
    return table


# -- tables ----------------------------------------------------------------------------

@dataclass
class CohomologyTable:
    """``h^j(F(d))`` for ``d`` in ``twists`` and ``j`` in ``degrees`` (inclusive ranges)."""

    n: int
    twists: tuple[int, int]
    degrees: tuple[int, int]
    entries: dict[tuple[int, int], int] = dc_field(default_factory=dict)   # (j, d) -> h
    shift: int = 0
    source: str = ""

    def h(self, j: int, d: int) -> int:
        if not (self.twists[0] <= d <= self.twists[1] and self.degrees[0] <= j <= self.degrees[1]):
            raise CannotCertify(f"h^{j}(F({d})) lies outside the table")
        return self.entries.get((j, d), 0)

    def column(self, d: int) -> list[int]:
        return [self.h(j, d) for j in range(self.degrees[0], self.degrees[1] + 1)]

    def euler(self, d: int) -> int:
        return sum((-1) ** (j % 2) * self.h(j, d) for j in range(self.degrees[0], self.degrees[1] + 1))

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in sorted(self.entries.items()) if v}

    def restricted(self, twists: tuple[int, int]) -> "CohomologyTable":
        lo, hi = max(twists[0], self.twists[0]), min(twists[1], self.twists[1])
        ent = {(j, d): v for (j, d), v in self.entries.items() if lo <= d <= hi}
        return CohomologyTable(self.n, (lo, hi), self.degrees, ent, self.shift, self.source)

    def twisted(self, e: int) -> "CohomologyTable":
        """The table of ``F(e)``."""
        ent = {(j, d - e): v for (j, d), v in self.entries.items()}
        return CohomologyTable(self.n, (self.twists[0] - e, self.twists[1] - e), self.degrees, ent,
                               self.shift, self.source)

    def render(self) -> str:
        """Rows ``j`` from top to bottom; empty rows outside ``0..n`` are left out."""
        ds = list(range(self.twists[0], self.twists[1] + 1))
        used = [j for (j, _), v in self.entries.items() if v]
        top = max(used + [min(self.n, self.degrees[1])])
        bottom = min(used + [max(0, self.degrees[0])])
        if top < bottom:
            top, bottom = self.degrees[1], self.degrees[0]
        lines = ["j\\d\t" + "\t".join(str(d) for d in ds)]
        for j in range(top, bottom - 1, -1):
            cells = [str(self.entries.get((j, d), 0) or ".") for d in ds]
            lines.append(f"{j}\t" + "\t".join(cells))
        return "\n".join(lines) + "\n"

    __str__ = render


def default_degrees(N0: LambdaModule, shift: int = 0) -> tuple[int, int]:
    """Degrees where ``T^shift L(N0)`` can have hypercohomology."""
    if N0.is_zero():
        return (0, N0.n)
    return (N0.lo - shift, N0.hi + N0.n - shift)


def cohomology_table(N0: LambdaModule, twists: tuple[int, int],
                     degrees: tuple[int, int] | None = None, shift: int = 0) -> CohomologyTable:
    """Table of ``F = T^shift L(N0)`` from one Tate computation.

    ``h^j(F(d)) = gamma_{d+j+shift, d}``; the Tate window and twist range
    are chosen to cover exactly the requested entries.
    """
    _require_seed(N0)
    dmin, dmax = twists
    if dmin > dmax:
        raise ValueError("empty twist range")
    jmin, jmax = degrees if degrees is not None else default_degrees(N0, shift)
    if jmin > jmax:
        raise ValueError("empty degree range")
    window = (dmin + jmin + shift, dmax + jmax + shift)
    T = tate_resolution(N0, window, twist_range=(dmin, dmax))
    entries = {}
    for d in range(dmin, dmax + 1):
        for j in range(jmin, jmax + 1):
            g = T.gamma(d + j + shift, d)
            if g:
                entries[(j, d)] = g
    return CohomologyTable(N0.n, (dmin, dmax), (jmin, jmax), entries, shift,
                           source=f"tate window {window[0]}..{window[1]}, twists {dmin}..{dmax}")


def seed_table(N: LambdaModule, twists: tuple[int, int], degrees: tuple[int, int] | None = None,
               shift: int = 0) -> CohomologyTable:
    """Split off free summands (their L-images are acyclic), then tabulate the core."""
    core = split_free(N).core
    if core.is_zero():
        jmin, jmax = degrees if degrees is not None else (0, N.n)
        return CohomologyTable(N.n, twists, (jmin, jmax), {}, shift, source="acyclic")
    return cohomology_table(core, twists, degrees, shift)


def table_from_tate(T: TateResolution, twists: tuple[int, int], degrees: tuple[int, int],
                    shift: int = 0) -> CohomologyTable:
    """Read a table off an existing Tate resolution (raises if it does not cover it)."""
    entries = {}
    for d in range(twists[0], twists[1] + 1):
        for j in range(degrees[0], degrees[1] + 1):
            p = d + j + shift
            if not T.window[0] <= p <= T.window[1]:
                raise WindowTooSmall(f"index {p} for h^{j}(F({d})) outside window {T.window}")
            g = T.gamma(p, d)
            if g:
                entries[(j, d)] = g
    return CohomologyTable(T.n, twists, degrees, entries, shift,
                           source=f"tate window {T.window[0]}..{T.window[1]}")


# -- Hom into a Tate resolution -------------------------------------------------------------

def _hom_basis(Np: LambdaModule, F: FreeModule) -> list[tuple[int, int]]:
    """Basis of ``Hom(N', F)``: one ``(summand, coordinate of N'_{-t})`` per functional."""
    return [(j, r) for j, t in enumerate(F.twists) for r in range(Np.dim(-t))]


def _composition_matrix(Np: LambdaModule, src: FreeModule, tgt: FreeModule, d) -> np.ndarray:
    """Matrix of ``f -> d o f`` from ``Hom(N', src)`` to ``Hom(N', tgt)``."""
    f = Np.field
    rows = _hom_basis(Np, src)
    cols = _hom_basis(Np, tgt)
    out = f.zeros(len(rows), len(cols))
    if not rows or not cols:
        return out
    col_pos = {}
    for c, (l, r) in enumerate(cols):
        col_pos.setdefault(l, []).append(c)
    cache = {}
    for ri, (j, r) in enumerate(rows):
        t = src.twists[j]
        phi = f.zeros(Np.dim(-t), 1)
        phi[r, 0] = 1
        u = extend_functional(Np, t, phi)
        for l, tl in enumerate(tgt.twists):
            deg = -tl
            if not Np.dim(deg) or l not in col_pos:
                continue
            # component of d o u at the socle coordinate of summand l
            uc = u.component(deg)
            if f.is_zero(uc):
                continue
            key = (j, l)
            if key not in cache:
                seg = d.component(deg)[src.summand_slice(j, deg), tgt.summand_slice(l, deg).start]
                cache[key] = seg.reshape(-1, 1)
            out[ri, col_pos[l]] = f.mul(uc, cache[key])[:, 0]
    return out


def hom_complex_ranks(Np: LambdaModule, T: TateResolution, p: int) -> tuple[int, int, int]:
    """``(dim Hom(N', I^p), rank into, rank out of)`` for ``Hom(N', I^.)``."""
    f = Np.field
    dim_p = len(_hom_basis(Np, T.term(p)))
    r_in = f.rank(_composition_matrix(Np, T.term(p - 1), T.term(p), T.diff(p - 1)))
    r_out = f.rank(_composition_matrix(Np, T.term(p), T.term(p + 1), T.diff(p)))
    return dim_p, r_in, r_out


def hom_derived_dim(Np: LambdaModule, N0: LambdaModule, p: int, T: TateResolution | None = None) -> int:
    """``dim Hom_D(L(N'), T^p L(N0))`` as ``H^p Hom(N', I^.)`` over the Tate resolution of ``N0``."""
    if Np.ctx != N0.ctx:
        raise ValueError("modules over different exterior algebras")
    _require_seed(N0)
    if T is None:
        T = tate_resolution(N0, (p - 1, p + 1))
    if not T.window[0] <= p <= T.window[1]:
        raise WindowTooSmall(f"index {p} outside window {T.window}")
    dim_p, r_in, r_out = hom_complex_ranks(Np, T, p)
    return dim_p - r_in - r_out


def factoring_through_free_dim(Np: LambdaModule, N0: LambdaModule, T: TateResolution | None = None) -> int:
    """Dimension of the maps ``N' -> N0`` that factor through a free module.

    Such maps factor through ``I^{-1} -> N0``; their space is the image of
    composition with ``d^{-1}`` on ``Hom(N', I^{-1})``.
    """
    _require_seed(N0)
    if T is None:
        T = tate_resolution(N0, (-1, 1))
    return Np.field.rank(_composition_matrix(Np, T.term(-1), T.term(0), T.diff(-1)))


# -- multiplication maps --------------------------------------------------------------------

def multiplication_map(T: TateResolution, p: int, i: int) -> np.ndarray:
    """``H^{p-i}F(i) (x) V* -> H^{p-i}F(i+1)`` read from the linear block of ``d^p``.

    Rows are indexed by (summand ``Lambda^v(i)`` of ``I^p``, variable ``k``),
    columns by the summands ``Lambda^v(i+1)`` of ``I^{p+1}``; the whole
    matrix carries the sign ``(-1)^(p-1)``.
    """
    lo, hi = T.window
    if not (lo <= p and p + 1 <= hi):
        raise WindowTooSmall(f"blocks {p} -> {p + 1} outside window {T.window}")
    f = T.ctx.field
    blk = T.linear_block(p, i)
    a, k, b = blk.shape
    mat = blk.reshape(a * k, b)
    if mat.dtype != object:
        mat = mat.astype(np.int64)
    return mat if (p - 1) % 2 == 0 else f.reduce(-mat)


def strand_composite(T: TateResolution, p: int, i: int) -> np.ndarray:
    """Antisymmetrized composite of two consecutive multiplication maps.

    Entry ``[a, k, k', c]`` is ``S[a,k,k',c] - S[a,k',k,c]`` with ``S`` the
    composite over the middle summands; it vanishes because ``d^2 = 0``.
    """
    f = T.ctx.field
    m1 = T.linear_block(p, i)
    m2 = T.linear_block(p + 1, i + 1)
    a, k, b = m1.shape
    _, _, c = m2.shape
    s = f.zeros(a * k, k * c) if b == 0 else f.mul(m1.reshape(a * k, b), m2.reshape(b, k * c))
    s = s.reshape(a, k, k, c)
    return f.reduce(s - s.transpose(0, 2, 1, 3))


# -- regularity ----------------------------------------------------------------------------------

def cm_regularity(tab: CohomologyTable) -> int:
    """Least ``m`` with ``h^j(F(m-j)) = 0`` for all ``j >= 1``.

    Candidates are the ``m`` for which every needed entry is in the table.
    The answer must be witnessed: the previous candidate has to fail, and
    vanishing must persist for every larger candidate.
    """
    js = [j for j in range(max(1, tab.degrees[0]), tab.degrees[1] + 1)]
    if not js:
        raise CannotCertify("table has no positive cohomological degrees")
    dlo, dhi = tab.twists
    cands = [m for m in range(dlo + max(js), dhi + min(js) + 1)]
    if not cands:
        raise CannotCertify("twist window too narrow")
    ok = {m: all(tab.h(j, m - j) == 0 for j in js) for m in cands}
    first = next((m for m in cands if ok[m]), None)
    if first is None:
        raise CannotCertify("no vanishing witnessed inside the table")
    if first == cands[0]:
        raise CannotCertify("regularity may lie below the table")
    if not all(ok[m] for m in cands if m >= first):
        raise CannotCertify("vanishing does not persist inside the table")
    return first
