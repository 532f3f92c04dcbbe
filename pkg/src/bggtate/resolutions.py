"""Complexes of Lambda-modules, minimal resolutions and Tate resolutions.

Free modules are always written as sums of ``Lambda^v(t)``; the free module
``Lambda(a)`` appears as ``Lambda^v(a-n-1)``.  A minimal free resolution is
indexed ``... -> P^{-2} -> P^{-1} -> N`` and an injective coresolution
``N -> I^0 -> I^1 -> ...``; the Tate resolution glues them so that
``I^p = P^p`` for ``p < 0``.

Resolutions can be cut off above an internal degree (``max_degree``): a
free summand generated above the cut has no component below it, so the
truncated computation produces the true generators up to the cut and stops
by itself.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .exterior import ExteriorContext, ExteriorElement
from .linalg import Field
from .modules import (
    FreeModule,
    LambdaModule,
    ModuleMorphism,
    annihilated_by_top,
    direct_sum,
    dual,
    dual_morphism,
    extend_functional,
    free_module_map,
    kernel,
    morphism_to_free,
    mu_prime,
    quotient,
    submodule,
    socle,
    split_free,
    top_contraction_signs,
    truncate,
    twist,
    twist_morphism,
    zero_module,
)


class NotSocleAnnihilated(ValueError):
    """A Tate resolution was requested for a module with a free summand."""


class WindowTooSmall(ValueError):
    """The requested data lies outside what a computed window can certify."""


class NotAChainMap(ValueError):
    pass


# -- complexes ------------------------------------------------------------------------

class ModuleComplex:
    """A bounded complex ``K^p -> K^{p+1}`` of Lambda-modules."""

    def __init__(self, ctx: ExteriorContext, terms: dict[int, LambdaModule],
                 diffs: dict[int, ModuleMorphism] | None = None, check: bool = False):
        self.ctx = ctx
        self.terms = {p: m for p, m in sorted(terms.items()) if not m.is_zero()}
        self.diffs = {p: u for p, u in (diffs or {}).items()
                      if p in self.terms and p + 1 in self.terms}
        if check:
            self.check()

    @property
    def field(self) -> Field:
        return self.ctx.field

    def term(self, p: int) -> LambdaModule:
        return self.terms.get(p) or zero_module(self.ctx)

    def diff(self, p: int) -> ModuleMorphism:
        u = self.diffs.get(p)
        if u is None:
            return ModuleMorphism.zero(self.term(p), self.term(p + 1))
        return u

    @property
    def indices(self) -> list[int]:
        return list(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def check(self):
        for p in self.terms:
            if p + 1 in self.diffs and p in self.diffs:
                if not self.diffs[p].then(self.diffs[p + 1]).is_zero():
                    raise ValueError(f"d^{p + 1} d^{p} != 0")

    def squares_to_zero(self) -> bool:
        try:
            self.check()
        except ValueError:
            return False
        return True

    def shift(self, k: int = 1) -> "ModuleComplex":
        """``T^k K``: ``(T^k K)^p = K^{p+k}`` with differential ``(-1)^k d``."""
        return ModuleComplex(self.ctx, {p - k: m for p, m in self.terms.items()},
                             {p - k: (u if k % 2 == 0 else -u) for p, u in self.diffs.items()})

    def twist(self, a: int) -> "ModuleComplex":
        return ModuleComplex(self.ctx, {p: twist(m, a) for p, m in self.terms.items()},
                             {p: twist_morphism(u, a) for p, u in self.diffs.items()})

    def dual(self) -> "ModuleComplex":
        """``(K^v)^p = (K^{-p})^v`` with the transposed differentials."""
        return ModuleComplex(self.ctx, {-p: dual(m) for p, m in self.terms.items()},
                             {-p - 1: dual_morphism(u) for p, u in self.diffs.items()})

    def cohomology_dims(self) -> dict[int, dict[int, int]]:
        """``dim H^p(K)_d`` by rank counting (only nonzero entries)."""
        f = self.field
        out: dict[int, dict[int, int]] = {}
        for p, m in self.terms.items():
            for d, k in m.dims.items():
                r_out = f.rank(self.diff(p).component(d))
                r_in = f.rank(self.diff(p - 1).component(d))
                h = k - r_out - r_in
                if h:
                    out.setdefault(p, {})[d] = h
        return out

    def __repr__(self):
        body = ", ".join(f"{p}: {m.dims}" for p, m in self.terms.items())
        return f"ModuleComplex({body})"

    @classmethod
    def concentrated(cls, N: LambdaModule, p: int = 0) -> "ModuleComplex":
        return cls(N.ctx, {p: N})


def is_exact(K: ModuleComplex, window: tuple[int, int] | None = None) -> dict[int, bool]:
    """Per index: ``rank d^{p-1} + rank d^p = dim K^p`` in every internal degree."""
    f = K.field
    if window is None:
        lo, hi = (min(K.indices), max(K.indices)) if K.indices else (0, -1)
    else:
        lo, hi = window
    out = {}
    for p in range(lo, hi + 1):
        m = K.term(p)
        out[p] = all(f.rank(K.diff(p - 1).component(d)) + f.rank(K.diff(p).component(d)) == k
                     for d, k in m.dims.items())
    return out


@dataclass
class ChainMap:
    source: ModuleComplex
    target: ModuleComplex
    maps: dict[int, ModuleMorphism]

    def component(self, p: int) -> ModuleMorphism:
        u = self.maps.get(p)
        if u is None:
            return ModuleMorphism.zero(self.source.term(p), self.target.term(p))
        return u

    def check(self):
        for p, u in self.maps.items():
            if u.source != self.source.term(p) or u.target != self.target.term(p):
                raise NotAChainMap(f"component {p} does not run between the terms at index {p}")
        for p in set(self.source.indices) | set(self.target.indices):
            lhs = self.source.diff(p).then(self.component(p + 1))
            rhs = self.component(p).then(self.target.diff(p))
            if not (lhs + (-rhs)).is_zero():
                raise NotAChainMap(f"square at index {p} does not commute")

    def then(self, other: "ChainMap") -> "ChainMap":
        ps = set(self.maps) & set(other.maps)
        return ChainMap(self.source, other.target, {p: self.maps[p].then(other.maps[p]) for p in ps})


def mapping_cone(u: ChainMap, check: bool = True) -> ModuleComplex:
    """``Con(u)^p = X^{p+1} + Y^p`` with ``d(x, y) = (-d_X x, u(x) + d_Y y)``."""
    if check:
        u.check()
    X, Y = u.source, u.target
    ctx = X.ctx
    f = ctx.field
    idx = sorted({p - 1 for p in X.indices} | set(Y.indices))
    terms, parts = {}, {}
    for p in idx:
        pieces = [X.term(p + 1), Y.term(p)]
        present = [m for m in pieces if not m.is_zero()]
        if not present:
            continue
        terms[p] = direct_sum(*present) if len(present) > 1 else present[0]
        parts[p] = pieces
    diffs = {}
    for p in terms:
        if p + 1 not in terms:
            continue
        src, tgt = terms[p], terms[p + 1]
        xa, ya = parts[p]
        xb, yb = parts[p + 1]
        maps = {}
        for d in src.degrees:
            if not tgt.dim(d):
                continue
            blocks = [[X.diff(p + 1).scaled(-1).component(d), u.component(p + 1).component(d)],
                      [f.zeros(ya.dim(d), xb.dim(d)), Y.diff(p).component(d)]]
            rows = []
            for r, row_mod in enumerate((xa, ya)):
                if row_mod.is_zero():
                    continue
                cols = [blocks[r][c] for c, col_mod in enumerate((xb, yb)) if not col_mod.is_zero()]
                rows.append(np.concatenate(cols, axis=1))
            maps[d] = np.concatenate(rows, axis=0)
        diffs[p] = ModuleMorphism(src, tgt, maps)
    return ModuleComplex(ctx, terms, diffs)


# -- minimal free resolutions ------------------------------------------------------------

def _subspace_rows(f: Field, m: np.ndarray) -> np.ndarray:
    """Rows spanning ``{x : x m = 0}`` (all of the source when m has no columns)."""
    if m.shape[1] == 0:
        return f.eye(m.shape[0])
    return f.left_kernel(m)


def _independent_mod(f: Field, span: np.ndarray, cands: np.ndarray) -> list[int]:
    """Indices of candidate rows independent modulo ``span``, greedily in order."""
    if cands.shape[0] == 0:
        return []
    if span.shape[0]:
        basis, piv = f.row_space(span)
        if piv:
            cands = f.sub(cands, f.mul(cands[:, piv], basis))
    _, piv = f.rref(cands.T.copy())
    return list(piv)


def minimal_generators(M: LambdaModule, sub: dict[int, np.ndarray]) -> list[tuple[int, np.ndarray]]:
    """Minimal homogeneous generators of the submodule ``W`` of ``M``.

    ``sub[d]`` holds rows spanning ``W_d``; generators are chosen greedily
    from those rows modulo ``(W . Lambda_+)_d``, highest degree first.
    """
    f = M.field
    out = []
    for d in sorted(sub, reverse=True):
        rows = sub[d]
        if rows.shape[0] == 0:
            continue
        below = sub.get(d - 1)
        if below is not None and below.shape[0]:
            span = np.concatenate([f.mul(below, M.act(i, d - 1)) for i in range(M.n + 1)], axis=0)
        else:
            span = f.zeros(0, M.dim(d))
        for r in _independent_mod(f, span, rows):
            out.append((d, rows[r:r + 1]))
    return out


@dataclass
class FreeResolution:
    """``... -> P^{-2} -> P^{-1} -> N`` with ``P^{-k}`` stored at index ``-k``."""

    module: LambdaModule
    terms: dict[int, FreeModule]
    diffs: dict[int, ModuleMorphism]          # index p: P^p -> P^{p+1}, p <= -2
    augmentation: ModuleMorphism | None       # P^{-1} -> N
    max_degree: int | None = None

    @property
    def complex(self) -> ModuleComplex:
        return ModuleComplex(self.module.ctx, dict(self.terms), dict(self.diffs))

    def betti(self) -> dict[int, Counter]:
        return {p: Counter(F.twists) for p, F in self.terms.items()}

    def ranks(self) -> dict[int, int]:
        return {p: len(F.twists) for p, F in self.terms.items()}


def min_free_resolution(N: LambdaModule, length: int | None = None,
                        max_degree: int | None = None) -> FreeResolution:
    """Minimal free resolution of ``N`` through ``P^{-length}``.

    With ``max_degree`` everything above that internal degree is dropped;
    the computation then stops on its own once no generator is left below
    the cut, so ``length`` may be omitted.
    """
    if length is None and max_degree is None:
        raise ValueError("need a length or a degree bound")
    ctx = N.ctx
    f = ctx.field
    n = ctx.n
    target = N if max_degree is None else truncate(N, max_degree)
    sub = {d: f.eye(k) for d, k in target.dims.items()}
    terms: dict[int, FreeModule] = {}
    diffs: dict[int, ModuleMorphism] = {}
    aug = None
    k = 0
    while length is None or k < length:
        gens = minimal_generators(target, sub)
        if not gens:
            break
        k += 1
        F = FreeModule(ctx, [-g - n - 1 for g, _ in gens], hi=max_degree)
        u = free_module_map(F, target, [row for _, row in gens])
        terms[-k] = F
        if k == 1:
            aug = u
        else:
            diffs[-k] = u
        sub = {d: _subspace_rows(f, u.component(d)) for d in F.degrees}
        sub = {d: r for d, r in sub.items() if r.shape[0]}
        target = F
    if aug is None:
        aug = ModuleMorphism.zero(zero_module(ctx), N)
    return FreeResolution(N, terms, diffs, aug, max_degree)


# -- duals of free modules in standard form ------------------------------------------------

_STD_CACHE: dict[tuple, tuple[dict, dict]] = {}


def _std_blocks(ctx: ExteriorContext, t: int):
    """Blocks of ``dual(Lambda^v(t)) -> Lambda^v(-t-n-1)`` and of the inverse."""
    key = (ctx.n, ctx.field.char, t)
    hit = _STD_CACHE.get(key)
    if hit is None:
        f = ctx.field
        single = FreeModule(ctx, [t])
        D = dual(single)
        u = extend_functional(D, -t - ctx.n - 1, f.eye(1))
        fwd = {d: u.component(d) for d in D.degrees}
        hit = (fwd, {d: f.inverse(m) for d, m in fwd.items()})
        _STD_CACHE[key] = hit
    return hit


def standardize_dual(F: FreeModule) -> tuple[FreeModule, ModuleMorphism, ModuleMorphism]:
    """``dual(F) ~= Lambda^v(-t_1-n-1) + ...`` in the summand order of ``F``.

    Each summand map is the unique morphism that is 1 on the dual of the
    summand's generator.  Returns the standard module, the isomorphism and
    its inverse.
    """
    if F.trunc_hi is not None:
        raise ValueError("cannot standardize the dual of a truncated free module")
    ctx = F.ctx
    f = ctx.field
    n = ctx.n
    D = dual(F)
    std = FreeModule(ctx, [-t - n - 1 for t in F.twists])
    fwd = {d: f.zeros(D.dim(d), std.dim(d)) for d in D.degrees}
    bwd = {d: f.zeros(std.dim(d), D.dim(d)) for d in D.degrees}
    for j, t in enumerate(F.twists):
        bf, bb = _std_blocks(ctx, t)
        for d, blk in bf.items():
            rs = F.summand_slice(j, -d)
            cs = std.summand_slice(j, d)
            fwd[d][rs, cs] = blk
            bwd[d][cs, rs] = bb[d]
    return std, ModuleMorphism(D, std, fwd), ModuleMorphism(std, D, bwd)


@dataclass
class InjectiveCoresolution:
    """``N -> I^0 -> I^1 -> ...`` with ``I^p`` at index ``p``."""

    module: LambdaModule
    terms: dict[int, FreeModule]
    diffs: dict[int, ModuleMorphism]
    coaugmentation: ModuleMorphism | None     # N -> I^0 (None in Betti-only mode)
    twists_only: bool = False

    @property
    def complex(self) -> ModuleComplex:
        return ModuleComplex(self.module.ctx, dict(self.terms), dict(self.diffs))

    def betti(self) -> dict[int, Counter]:
        return {p: Counter(F.twists) for p, F in self.terms.items()}


def injective_coresolution(N: LambdaModule, length: int | None = None,
                           min_degree: int | None = None) -> InjectiveCoresolution:
    """Dual of the minimal free resolution of ``dual(N)``.

    With ``min_degree`` only the multiplicities are produced (everything
    below that internal degree is ignored), and the returned terms are
    bookkeeping-only free modules without differentials.
    """
    ctx = N.ctx
    n = ctx.n
    hi = None if min_degree is None else -min_degree
    res = min_free_resolution(dual(N), length, max_degree=hi)
    if min_degree is not None:
        terms = {-p - 1: FreeModule(ctx, [-t - n - 1 for t in F.twists], hi=None)
                 for p, F in res.terms.items()}
        return InjectiveCoresolution(N, terms, {}, None, twists_only=True)
    terms, isos, invs = {}, {}, {}
    for p, F in res.terms.items():
        q = -p - 1
        terms[q], isos[q], invs[q] = standardize_dual(F)
    diffs = {}
    for p, u in res.diffs.items():            # u : P^p -> P^{p+1}
        q = -p - 2                             # dual: I^q -> I^{q+1}
        diffs[q] = invs[q].then(dual_morphism(u)).then(isos[q + 1])
    coaug = None
    if 0 in terms:
        coaug = mu_prime(N).then(dual_morphism(res.augmentation)).then(isos[0])
    return InjectiveCoresolution(N, terms, diffs, coaug)


# -- Tate resolutions -------------------------------------------------------------------------

class TateResolution:
    """A window of the Tate resolution of a socle-annihilated module ``N0``.

    ``window = (pmin, pmax)`` is what the caller asked for; terms are
    computed on ``[pmin - 1, pmax + 1]`` so that exactness and corners can be
    checked at the edges.  In ``betti`` mode only multiplicities with twists
    in ``twist_range`` are computed (no differentials).
    """

    def __init__(self, N0: LambdaModule, window: tuple[int, int],
                 twist_range: tuple[int, int] | None = None):
        if not annihilated_by_top(N0):
            raise NotSocleAnnihilated("module has a free summand; normalize with split_free first")
        self.ctx = N0.ctx
        self.seed = N0
        self.window = (int(window[0]), int(window[1]))
        self.computed = (self.window[0] - 1, self.window[1] + 1)
        self.twist_range = twist_range
        self.mode = "full" if twist_range is None else "betti"
        lo, hi = self.computed
        n = self.ctx.n
        self.terms: dict[int, FreeModule] = {}
        self.diffs: dict[int, ModuleMorphism] = {}
        self.twists: dict[int, list[int]] = {}
        if self.mode == "full":
            self._build_full(lo, hi)
        else:
            tmin, tmax = twist_range
            if lo <= -1:
                res = min_free_resolution(N0, -lo, max_degree=-tmin - n - 1)
                for p, F in res.terms.items():
                    self.twists[p] = [t for t in F.twists if tmin <= t <= tmax]
            if hi >= 0:
                cor = injective_coresolution(N0, hi + 1, min_degree=-tmax)
                for p, F in cor.terms.items():
                    self.twists[p] = [t for t in F.twists if tmin <= t <= tmax]
        for p in range(lo, hi + 1):
            self.twists.setdefault(p, [])

    def _build_full(self, lo: int, hi: int):
        N0 = self.seed
        res = cor = None
        if lo <= -1:
            res = min_free_resolution(N0, -lo)
            self.terms.update(res.terms)
            self.diffs.update(res.diffs)
        if hi >= 0:
            cor = injective_coresolution(N0, hi + 1)
            self.terms.update(cor.terms)
            self.diffs.update(cor.diffs)
        if res is not None and cor is not None and -1 in res.terms and 0 in cor.terms:
            self.diffs[-1] = res.augmentation.then(cor.coaugmentation)
        self.resolution, self.coresolution = res, cor
        self.terms = {p: F for p, F in self.terms.items() if lo <= p <= hi}
        self.diffs = {p: u for p, u in self.diffs.items() if lo <= p < hi}
        for p, F in self.terms.items():
            self.twists[p] = list(F.twists)

    # -- structure ---------------------------------------------------------------

    @property
    def n(self) -> int:
        return self.ctx.n

    def _require_full(self):
        if self.mode != "full":
            raise WindowTooSmall("differentials are only available for a full Tate window")

    @property
    def complex(self) -> ModuleComplex:
        self._require_full()
        return ModuleComplex(self.ctx, dict(self.terms), dict(self.diffs))

    def term(self, p: int) -> FreeModule:
        self._require_full()
        lo, hi = self.computed
        if not lo <= p <= hi:
            raise WindowTooSmall(f"index {p} outside computed range {lo}..{hi}")
        return self.terms.get(p) or FreeModule(self.ctx, [])

    def diff(self, p: int) -> ModuleMorphism:
        self._require_full()
        lo, hi = self.computed
        if not lo <= p < hi:
            raise WindowTooSmall(f"differential {p} outside computed range")
        u = self.diffs.get(p)
        if u is None:
            return ModuleMorphism.zero(self.term(p), self.term(p + 1))
        return u

    def betti(self) -> dict[tuple[int, int], int]:
        """``{(p, i): gamma_{p,i}}`` over the computed range (nonzero entries)."""
        out = {}
        for p, ts in self.twists.items():
            for t, m in Counter(ts).items():
                out[(p, t)] = m
        return dict(sorted(out.items()))

    def gamma(self, p: int, i: int) -> int:
        lo, hi = self.computed
        if not lo <= p <= hi:
            raise WindowTooSmall(f"index {p} outside computed range {lo}..{hi}")
        if self.twist_range is not None and not self.twist_range[0] <= i <= self.twist_range[1]:
            raise WindowTooSmall(f"twist {i} outside computed twist range")
        return self.twists.get(p, []).count(i)

    # -- differential blocks ----------------------------------------------------------

    def blocks(self, p: int) -> list[list[ExteriorElement]]:
        """Entries of ``d^p`` as elements of Lambda.

        Entry ``[j][l]`` is the ``lam`` with ``d^p(g_j) = sum_l g_l . lam`` on
        summand generators ``g = X_0^...^X_n``; it has degree ``t_l - t_j``.
        """
        ctx = self.ctx
        n = ctx.n
        src, tgt = self.term(p), self.term(p + 1)
        u = self.diff(p)
        signs = top_contraction_signs(ctx)
        out = []
        for j, t in enumerate(src.twists):
            g = -t - n - 1
            row_idx = src.summand_slice(j, g).start
            img = u.component(g)[row_idx] if tgt.dim(g) else None
            row = []
            for l, tl in enumerate(tgt.twists):
                terms = {}
                k = tl - t
                if img is not None and 0 <= k <= n + 1:
                    seg = img[tgt.summand_slice(l, g)]
                    for c_idx, T in enumerate(ctx.basis(n + 1 - k)):
                        c = seg[c_idx]
                        if c:
                            S = ctx.top & ~T
                            sg = signs[S] * (-1 if (tl * k) % 2 else 1)
                            terms[S] = c if sg > 0 else ctx.field.neg(c)
                row.append(ExteriorElement(ctx, terms))
            out.append(row)
        return out

    def is_minimal(self) -> bool:
        """Every differential entry lies in ``Lambda_+``."""
        return all(e.in_positive_part()
                   for p in self.diffs for row in self.blocks(p) for e in row)

    def is_block_triangular(self) -> bool:
        """Blocks from ``Lambda^v(i)`` to ``Lambda^v(j)`` vanish unless ``j > i``."""
        for p in self.diffs:
            src, tgt = self.term(p), self.term(p + 1)
            for j, row in enumerate(self.blocks(p)):
                for l, e in enumerate(row):
                    if tgt.twists[l] <= src.twists[j] and not e.is_zero():
                        return False
        return True

    def exactness(self) -> dict[int, bool]:
        return is_exact(self.complex, self.window)

    def linear_block(self, p: int, i: int) -> np.ndarray:
        """Coefficients of the linear entries from ``Lambda^v(i)`` to ``Lambda^v(i+1)``.

        Shape ``(gamma_{p,i}, n+1, gamma_{p+1,i+1})``; ``[a, k, b]`` is the
        coefficient of ``e_k`` in the entry from the a-th to the b-th summand.
        """
        f = self.ctx.field
        src, tgt = self.term(p), self.term(p + 1)
        rows = [j for j, t in enumerate(src.twists) if t == i]
        cols = [l for l, t in enumerate(tgt.twists) if t == i + 1]
        out = np.zeros((len(rows), self.n + 1, len(cols)), dtype=f.dtype)
        if not f.char:
            out = out.astype(object)
            out[...] = 0
        if not rows or not cols:
            return out
        blk = self.blocks(p)
        for a, j in enumerate(rows):
            for b, l in enumerate(cols):
                for k in range(self.n + 1):
                    out[a, k, b] = blk[j][l].terms.get(1 << k, 0)
        return out

    def __repr__(self):
        return f"TateResolution(n={self.n}, window={self.window}, mode={self.mode})"


def tate_resolution(N0: LambdaModule, window: tuple[int, int],
                    twist_range: tuple[int, int] | None = None) -> TateResolution:
    return TateResolution(N0, window, twist_range)


def corner(T: TateResolution, p: int) -> LambdaModule:
    """``Z^p = Ker(d^p)`` with its induced module structure."""
    if not T.window[0] <= p <= T.window[1]:
        raise WindowTooSmall(f"corner {p} needs index {p} inside the window {T.window}")
    return kernel(T.diff(p)).module


def betti_stable(T_small: TateResolution, T_big: TateResolution) -> bool:
    """Multiplicities agree on the common window."""
    lo = max(T_small.window[0], T_big.window[0])
    hi = min(T_small.window[1], T_big.window[1])
    return all(Counter(T_small.twists.get(p, [])) == Counter(T_big.twists.get(p, []))
               for p in range(lo, hi + 1))


def render_betti(T: TateResolution, indices: tuple[int, int] | None = None) -> str:
    """Rows are twists ``i``, columns indices ``p``; zero entries print as ``.``."""
    lo, hi = indices or T.window
    cols = list(range(lo, hi + 1))
    tw = sorted({t for p in cols for t in T.twists.get(p, [])})
    lines = ["i\\p\t" + "\t".join(str(p) for p in cols)]
    for i in reversed(tw):
        cells = []
        for p in cols:
            g = T.twists.get(p, []).count(i)
            cells.append(str(g) if g else ".")
        lines.append(f"{i}\t" + "\t".join(cells))
    return "\n".join(lines) + "\n"


# -- replacements of complexes ------------------------------------------------------------------

def injective_hull(Q: LambdaModule, W: dict[int, np.ndarray] | None = None):
    """A free ``E`` and a morphism ``Q -> E`` injective on the submodule ``W``.

    ``W`` is given by spanning rows per degree (default: all of ``Q``).  One
    summand ``Lambda^v(-d)`` per basis vector of ``soc(W)_d``, with a
    functional on ``Q_d`` dual to that socle basis.
    """
    f = Q.field
    if W is None:
        sub, incl = Q, None
    else:
        data = submodule(Q, W)
        sub, incl = data.module, data.inclusion
    soc = socle(sub)
    twists, functionals = [], []
    for d in sorted(soc, reverse=True):
        rows = soc[d] if incl is None else f.mul(soc[d], incl.component(d))
        phi = f.solve_left(rows.T.copy(), f.eye(rows.shape[0])).T.copy()
        for c in range(rows.shape[0]):
            twists.append(-d)
            functionals.append(phi[:, c:c + 1])
    E = FreeModule(Q.ctx, twists)
    return E, morphism_to_free(Q, E, functionals)


def _sum2(A: LambdaModule, B: LambdaModule) -> LambdaModule:
    if A.is_zero():
        return B
    if B.is_zero():
        return A
    return direct_sum(A, B)


def injective_replacement(K: ModuleComplex, top: int) -> tuple[ModuleComplex, ChainMap]:
    """A complex of free modules ``J`` with a quasi-isomorphism ``K -> J``.

    Builds ``J^p`` for ``p <= top`` so that ``Con(K -> J)`` is exact one index
    at a time: with ``C = K^p + J^{p-1}`` and ``Q = C / d(Con^{p-2})``,
    ``J^p`` is a hull of ``Ker(Q -> K^{p+1})`` extended over ``Q``.
    """
    ctx = K.ctx
    f = ctx.field
    J_terms: dict[int, FreeModule] = {}
    J_diffs: dict[int, ModuleMorphism] = {}
    fmaps: dict[int, ModuleMorphism] = {}
    if K.is_zero():
        return ModuleComplex(ctx, {}), ChainMap(K, ModuleComplex(ctx, {}), {})
    incoming: dict[int, np.ndarray] = {}      # Con^{p-2} -> Con^{p-1}, per degree
    for p in range(min(K.indices), top + 1):
        Kp, Kn = K.term(p), K.term(p + 1)
        Jm = J_terms.get(p - 1) or FreeModule(ctx, [])
        C = _sum2(Kp, Jm)
        psi = {}                               # C -> K^{p+1}, (k, j) -> -d_K k
        for d in C.degrees:
            m = f.zeros(C.dim(d), Kn.dim(d))
            if Kp.dim(d) and Kn.dim(d):
                m[:Kp.dim(d)] = f.reduce(-K.diff(p).component(d))
            psi[d] = m
        qd = quotient(C, {d: m for d, m in incoming.items() if C.dim(d) and m.shape[0]})
        Q = qd.module
        W = {}
        for d in Q.degrees:
            rows = _subspace_rows(f, psi[d][qd.section[d]])
            if rows.shape[0]:
                W[d] = rows
        E, phi = injective_hull(Q, W)
        whole = qd.projection.then(phi)        # C -> E
        kp_maps, jm_maps = {}, {}
        for d in C.degrees:
            m = whole.component(d)
            kp_maps[d] = m[:Kp.dim(d)]
            jm_maps[d] = m[Kp.dim(d):]
        if not E.is_zero():
            J_terms[p] = E
        if not Kp.is_zero():
            fmaps[p] = ModuleMorphism(Kp, E, kp_maps)
        if not Jm.is_zero():
            J_diffs[p - 1] = ModuleMorphism(Jm, E, jm_maps)
        incoming = {d: np.concatenate([psi[d], whole.component(d)], axis=1) for d in C.degrees}
    J = ModuleComplex(ctx, J_terms, J_diffs)
    return J, ChainMap(K, J, fmaps)


def free_replacement(K: ModuleComplex, bottom: int) -> tuple[ModuleComplex, ChainMap]:
    """A complex of free modules ``P`` with a quasi-isomorphism ``P -> K``.

    Dual of the injective replacement of ``K^v``, built down to ``bottom``.
    """
    ctx = K.ctx
    Kd = K.dual()
    J, g = injective_replacement(Kd, -bottom)
    terms, isos, invs = {}, {}, {}
    for q, F in J.terms.items():
        terms[-q], isos[-q], invs[-q] = standardize_dual(F)
    diffs = {}
    for q, u in J.diffs.items():               # J^q -> J^{q+1}; dual: P^{-q-1} -> P^{-q}
        diffs[-q - 1] = invs[-q - 1].then(dual_morphism(u)).then(isos[-q])
    P = ModuleComplex(ctx, terms, diffs)
    maps = {}
    for q, u in g.maps.items():                # Kd^q -> J^q; dual: P^{-q} -> (K^{-q})^vv -> K^{-q}
        p = -q
        if p not in invs:
            continue
        back = mu_prime(K.term(p)).inverse()
        maps[p] = invs[p].then(dual_morphism(u)).then(back)
    return P, ChainMap(P, K, maps)


def module_representative(K: ModuleComplex) -> LambdaModule:
    """A socle-annihilated module ``M`` with ``L(M)`` quasi-isomorphic to ``L(K)``.

    Joins a free replacement ``P -> K`` and an injective replacement
    ``K -> J`` into the acyclic free complex ``I = Con(P -> J)`` and returns
    the non-free part of ``Ker(d_I^0)``.
    """
    ctx = K.ctx
    if K.is_zero():
        return zero_module(ctx)
    a, b = min(K.indices), max(K.indices)
    J, g = injective_replacement(K, max(b, 1) + 1)
    P, h = free_replacement(K, min(a, 0) - 2)
    comp = h.then(g)
    # indices of P that are missing in J (or vice versa) contribute zero maps
    comp = ChainMap(P, J, {p: comp.component(p) for p in set(P.indices) & set(J.indices)})
    I = mapping_cone(comp, check=False)
    Z = kernel(I.diff(0)).module
    return split_free(Z).core
