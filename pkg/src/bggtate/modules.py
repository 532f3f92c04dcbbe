"""Finite-dimensional graded right modules over the exterior algebra.

A module stores, for every degree ``d``, the dimension of ``N_d`` and, for
every basis vector ``e_i`` of V, the matrix of ``y -> y . e_i`` from ``N_d``
to ``N_{d+1}`` (row-vector convention).  Sign conventions:

* twist ``N(a)``: ``N(a)_p = N_{a+p}``, actions multiplied by ``(-1)^a``;
* dual ``N^v``: ``(N^v)_p = (N_{-p})^*``, action on ``(N^v)_p`` is
  ``(-1)^(p+1)`` times the transpose of ``N_{-p-1} -> N_{-p}``;
* ``Lambda^v`` acts on ``wedge^p V*`` (sitting in degree ``-p``) by
  contraction, which is exactly ``dual(Lambda)`` in the monomial bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, NamedTuple

import numpy as np

from .exterior import ExteriorContext, indices_of, popcount
from .linalg import CharacteristicMismatch, Field


class ModuleAxiomError(ValueError):
    """The anticommutation relations fail."""


class NotAMorphism(ValueError):
    """A family of matrices fails Lambda-linearity."""


class LambdaModule:
    """A graded right Lambda-module given by dimensions and action matrices."""

    def __init__(self, ctx: ExteriorContext, dims: dict[int, int],
                 action: dict[tuple[int, int], np.ndarray] | None = None, check: bool = False):
        self.ctx = ctx
        self.dims = {int(d): int(m) for d, m in sorted(dims.items()) if m > 0}
        self.action: dict[tuple[int, int], np.ndarray] = {}
        for (i, d), mat in (action or {}).items():
            if self.dim(d) and self.dim(d + 1) and np.any(mat != 0):
                if mat.shape != (self.dim(d), self.dim(d + 1)):
                    raise ValueError(f"action e{i} in degree {d}: shape {mat.shape}")
                self.action[(i, d)] = mat
        if check:
            self.check_axioms()

    @property
    def field(self) -> Field:
        return self.ctx.field

    @property
    def n(self) -> int:
        return self.ctx.n

    def dim(self, d: int) -> int:
        return self.dims.get(d, 0)

    @property
    def degrees(self) -> list[int]:
        return list(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @property
    def lo(self) -> int | None:
        return min(self.dims) if self.dims else None

    @property
    def hi(self) -> int | None:
        return max(self.dims) if self.dims else None

    def is_zero(self) -> bool:
        return not self.dims

    def act(self, i: int, d: int) -> np.ndarray:
        m = self.action.get((i, d))
        if m is None:
            return self.field.zeros(self.dim(d), self.dim(d + 1))
        return m

    def monomial_action(self, d: int, mask: int) -> np.ndarray:
        """Matrix of ``y -> y . e_{s1} . ... . e_{sk}`` out of degree ``d``."""
        f = self.field
        out = f.eye(self.dim(d))
        deg = d
        for i in indices_of(mask):
            out = f.mul(out, self.act(i, deg))
            deg += 1
        return out

    def top_action(self, d: int) -> np.ndarray:
        return self.monomial_action(d, self.ctx.top)

    def check_axioms(self):
        f = self.field
        for d in self.degrees:
            if not self.dim(d + 2):
                continue
            for i in range(self.n + 1):
                for j in range(i, self.n + 1):
                    lhs = f.mul(self.act(i, d), self.act(j, d + 1))
                    rhs = f.mul(self.act(j, d), self.act(i, d + 1))
                    if not f.is_zero(f.add(lhs, rhs)):
                        raise ModuleAxiomError(f"e{i}, e{j} fail to anticommute in degree {d}")

    def satisfies_axioms(self) -> bool:
        try:
            self.check_axioms()
        except ModuleAxiomError:
            return False
        return True

    def graded_dims(self) -> dict[int, int]:
        return dict(self.dims)

    def __eq__(self, other):
        if not isinstance(other, LambdaModule):
            return NotImplemented
        if self.ctx != other.ctx or self.dims != other.dims:
            return False
        keys = set(self.action) | set(other.action)
        return all(np.array_equal(self.act(*k), other.act(*k)) for k in keys)

    def __hash__(self):
        return hash((self.ctx, tuple(self.dims.items())))

    def __repr__(self):
        return f"LambdaModule(n={self.n}, {self.field}, dims={self.dims})"


class ModuleMorphism:
    """A degree-0 map ``source -> target`` given by one matrix per degree."""

    def __init__(self, source: LambdaModule, target: LambdaModule,
                 maps: dict[int, np.ndarray] | None = None, check: bool = False):
        if source.ctx != target.ctx:
            if source.field != target.field:
                raise CharacteristicMismatch("morphism between modules over different fields")
            raise ValueError("morphism between modules over different exterior algebras")
        self.source = source
        self.target = target
        self.maps: dict[int, np.ndarray] = {}
        for d, m in (maps or {}).items():
            if source.dim(d) and target.dim(d):
                if m.shape != (source.dim(d), target.dim(d)):
                    raise ValueError(f"component {d}: shape {m.shape}")
                self.maps[d] = m
        if check:
            self.check()

    @property
    def field(self) -> Field:
        return self.source.field

    def component(self, d: int) -> np.ndarray:
        m = self.maps.get(d)
        if m is None:
            return self.field.zeros(self.source.dim(d), self.target.dim(d))
        return m

    def check(self):
        f = self.field
        src, tgt = self.source, self.target
        for d in set(src.degrees) | set(tgt.degrees):
            for i in range(src.n + 1):
                lhs = f.mul(src.act(i, d), self.component(d + 1))
                rhs = f.mul(self.component(d), tgt.act(i, d))
                if not np.array_equal(lhs, rhs):
                    raise NotAMorphism(f"not Lambda-linear at degree {d}, e{i}")

    def is_linear(self) -> bool:
        try:
            self.check()
        except NotAMorphism:
            return False
        return True

    def then(self, other: "ModuleMorphism") -> "ModuleMorphism":
        """``other o self``."""
        f = self.field
        return ModuleMorphism(self.source, other.target,
                              {d: f.mul(m, other.component(d)) for d, m in self.maps.items()})

    def __add__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        f = self.field
        degs = set(self.maps) | set(other.maps)
        return ModuleMorphism(self.source, self.target,
                              {d: f.add(self.component(d), other.component(d)) for d in degs})

    def scaled(self, c) -> "ModuleMorphism":
        f = self.field
        return ModuleMorphism(self.source, self.target, {d: f.scale(c, m) for d, m in self.maps.items()})

    def __neg__(self):
        return self.scaled(-1)

    def is_zero(self) -> bool:
        return all(self.field.is_zero(m) for m in self.maps.values())

    def rank(self, d: int) -> int:
        return self.field.rank(self.component(d))

    def is_isomorphism(self) -> bool:
        f = self.field
        if self.source.dims != self.target.dims:
            return False
        return all(f.rank(self.component(d)) == m for d, m in self.source.dims.items())

    def inverse(self) -> "ModuleMorphism":
        f = self.field
        return ModuleMorphism(self.target, self.source,
                              {d: f.inverse(self.component(d)) for d in self.source.degrees})

    def __eq__(self, other):
        if not isinstance(other, ModuleMorphism):
            return NotImplemented
        degs = set(self.maps) | set(other.maps)
        return all(np.array_equal(self.component(d), other.component(d)) for d in degs)

    def __repr__(self):
        return f"ModuleMorphism({self.source!r} -> {self.target!r})"

    @classmethod
    def identity(cls, m: LambdaModule) -> "ModuleMorphism":
        return cls(m, m, {d: m.field.eye(k) for d, k in m.dims.items()})

    @classmethod
    def zero(cls, a: LambdaModule, b: LambdaModule) -> "ModuleMorphism":
        return cls(a, b, {})


# -- basic constructions --------------------------------------------------------

def zero_module(ctx: ExteriorContext) -> LambdaModule:
    return LambdaModule(ctx, {})


def underline_k(ctx: ExteriorContext, a: int = 0) -> LambdaModule:
    """The residue field ``k = Lambda / Lambda_+`` twisted by ``a`` (degree ``-a``)."""
    return LambdaModule(ctx, {-a: 1})


def twist(N: LambdaModule, a: int) -> LambdaModule:
    f = N.field
    sign = -1 if a % 2 else 1
    action = {(i, d - a): (f.reduce(-m) if sign < 0 else m) for (i, d), m in N.action.items()}
    if isinstance(N, FreeModule):
        return FreeModule(N.ctx, [t + a for t in N.twists],
                          hi=None if N.trunc_hi is None else N.trunc_hi - a)
    return LambdaModule(N.ctx, {d - a: m for d, m in N.dims.items()}, action)


def twist_morphism(u: ModuleMorphism, a: int) -> ModuleMorphism:
    """``u(a)``: the same matrices between the twisted modules."""
    return ModuleMorphism(twist(u.source, a), twist(u.target, a), {d - a: m for d, m in u.maps.items()})


def dual(N: LambdaModule) -> LambdaModule:
    f = N.field
    action = {}
    for (i, d), m in N.action.items():
        p = -d - 1                    # act on (N^v)_p is built from N_{-p-1} -> N_{-p}
        mt = m.T.copy()
        action[(i, p)] = mt if (p + 1) % 2 == 0 else f.reduce(-mt)
    return LambdaModule(N.ctx, {-d: m for d, m in N.dims.items()}, action)


def dual_morphism(u: ModuleMorphism) -> ModuleMorphism:
    """``u^v : target^v -> source^v``, componentwise transpose."""
    return ModuleMorphism(dual(u.target), dual(u.source), {-d: m.T.copy() for d, m in u.maps.items()})


def mu_prime(N: LambdaModule) -> ModuleMorphism:
    """The isomorphism ``N -> (N^v)^v`` given by ``(-1)^p`` in degree ``p``."""
    f = N.field
    dd = dual(dual(N))
    return ModuleMorphism(N, dd, {d: (f.eye(m) if d % 2 == 0 else f.reduce(-f.eye(m)))
                                  for d, m in N.dims.items()})


def make_free(ctx: ExteriorContext, kind: str = "lambda", a: int = 0, multiplicity: int = 1) -> LambdaModule:
    """``Lambda(a)^m`` (``kind="lambda"``) or ``Lambda^v(a)^m`` (``kind="dual"``)."""
    if kind in ("dual", "lambda_dual", "injective"):
        return FreeModule(ctx, [a] * multiplicity)
    if kind != "lambda":
        raise ValueError(f"unknown free module kind {kind!r}")
    f = ctx.field
    m = multiplicity
    dims = {k - a: ctx.dim(k) * m for k in range(ctx.n + 2)} if m else {}
    action = {}
    for k in range(ctx.n + 1):
        for i in range(ctx.n + 1):
            block = ctx.wedge_matrix(i, k)
            if a % 2:
                block = f.reduce(-block)
            action[(i, k - a)] = _block_diag(f, [block] * m)
    return LambdaModule(ctx, dims, action)


def _block_diag(f: Field, blocks: list[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = f.zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


class FreeModule(LambdaModule):
    """``Lambda^v(t_1) + ... + Lambda^v(t_m)`` in the standard bases.

    Each summand ``Lambda^v(t)`` has ``wedge^{-t-d} V*`` in degree ``d``
    (basis: ``ctx.basis(-t-d)``) and acts by ``(-1)^t`` times contraction.
    Its socle is in degree ``-t``; its generator ``X_0^...^X_n`` sits in
    degree ``-t-n-1``.  Components of degree above ``hi`` are dropped when
    ``hi`` is given (a quotient module).
    """

    def __init__(self, ctx: ExteriorContext, twists: Iterable[int], hi: int | None = None):
        self.twists = [int(t) for t in twists]
        self.trunc_hi = hi
        n = ctx.n
        f = ctx.field
        dims: dict[int, int] = {}
        offsets: dict[int, list[int]] = {}
        for t in self.twists:
            for d in range(-t - n - 1, -t + 1):
                if hi is not None and d > hi:
                    continue
                dims[d] = dims.get(d, 0) + ctx.dim(-t - d)
        running = {d: 0 for d in dims}
        for j, t in enumerate(self.twists):
            for d in dims:
                k = -t - d
                offsets.setdefault(d, []).append(running[d] if 0 <= k <= n + 1 else -1)
                if 0 <= k <= n + 1:
                    running[d] += ctx.dim(k)
        self.offsets = offsets
        action = {}
        for d in dims:
            if d + 1 not in dims:
                continue
            for i in range(n + 1):
                m = f.zeros(dims[d], dims[d + 1])
                for j, t in enumerate(self.twists):
                    k = -t - d
                    if not 1 <= k <= n + 1:
                        continue
                    blk = ctx.contraction_matrix(i, k)
                    if t % 2:
                        blk = f.reduce(-blk)
                    r0, c0 = offsets[d][j], offsets[d + 1][j]
                    m[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] = blk
                action[(i, d)] = m
        super().__init__(ctx, dims, action)

    @property
    def rank_(self) -> int:
        return len(self.twists)

    def summand_slice(self, j: int, d: int) -> slice:
        """Coordinates of summand ``j`` inside degree ``d`` (empty if absent)."""
        off = self.offsets.get(d)
        if off is None or off[j] < 0:
            return slice(0, 0)
        k = -self.twists[j] - d
        return slice(off[j], off[j] + self.ctx.dim(k))

    def betti(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for t in self.twists:
            out[t] = out.get(t, 0) + 1
        return out

    def __repr__(self):
        return f"FreeModule(n={self.n}, twists={self.twists})"


# -- generators of the free summands ---------------------------------------------

def top_contraction_signs(ctx: ExteriorContext) -> dict[int, int]:
    """``c_S`` with ``X_0^...^X_n . e_{s1} . ... . e_{sk} = c_S X_{complement}``."""
    cache = _TOP_CACHE.get(ctx.n)
    if cache is not None:
        return cache
    out = {}
    top = ctx.top
    for k in range(ctx.n + 2):
        for s in ctx.basis(k):
            sign = 1
            cur = top
            for i in indices_of(s):
                pos = popcount(cur & ((1 << i) - 1))
                if pos % 2:
                    sign = -sign
                cur &= ~(1 << i)
            out[s] = sign
    _TOP_CACHE[ctx.n] = out
    return out


_TOP_CACHE: dict[int, dict[int, int]] = {}


def monomial_images(N: LambdaModule, d: int, ys: np.ndarray) -> dict[int, np.ndarray]:
    """``{S: rows y . e_S}`` for rows ``ys`` of ``N_d`` and every monomial S."""
    f = N.field
    out = {0: ys}
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            k = popcount(s)
            start = (max(indices_of(s)) + 1) if s else 0
            for i in range(start, N.n + 1):
                t = s | (1 << i)
                out[t] = f.mul(out[s], N.act(i, d + k))
                nxt.append(t)
        frontier = nxt
    return out


def free_module_map(F: FreeModule, target: LambdaModule, images: list[np.ndarray]) -> ModuleMorphism:
    """The morphism ``F -> target`` sending summand ``j``'s generator to ``images[j]``.

    ``images[j]`` is a row vector in ``target`` in degree ``-t_j-n-1``.
    """
    ctx = F.ctx
    f = F.field
    n = ctx.n
    signs = top_contraction_signs(ctx)
    maps = {d: f.zeros(F.dim(d), target.dim(d)) for d in F.degrees if target.dim(d)}
    # group generators by degree to batch the action products
    by_deg: dict[int, list[int]] = {}
    for j, t in enumerate(F.twists):
        by_deg.setdefault(-t - n - 1, []).append(j)
    for g, js in by_deg.items():
        if not target.dim(g):
            continue
        ys = np.concatenate([np.asarray(images[j]).reshape(1, -1) for j in js], axis=0)
        imgs = monomial_images(target, g, ys)
        for s, rows in imgs.items():
            k = popcount(s)
            d = g + k
            if d not in maps or F.trunc_hi is not None and d > F.trunc_hi:
                continue
            comp = ctx.index(ctx.top & ~s)
            for r, j in enumerate(js):
                t = F.twists[j]
                # X_top ._{twisted} e_S = (-1)^{t k} c_S X_{S^c}
                c = signs[s] * (-1 if (t * k) % 2 else 1)
                row = F.summand_slice(j, d).start + comp
                maps[d][row] = rows[r] if c > 0 else f.reduce(-rows[r])
    return ModuleMorphism(F, target, maps)


def generator_vector(F: FreeModule, j: int) -> tuple[int, np.ndarray]:
    """Degree and row vector of summand ``j``'s generator ``X_0^...^X_n``."""
    t = F.twists[j]
    d = -t - F.n - 1
    v = F.field.zeros(1, F.dim(d))
    v[0, F.summand_slice(j, d).start] = 1
    return d, v


# -- socle ------------------------------------------------------------------------

def socle(N: LambdaModule) -> dict[int, np.ndarray]:
    """RREF bases of ``soc(N)_d`` (elements killed by every ``e_i``)."""
    f = N.field
    out = {}
    for d in N.degrees:
        stacked = np.concatenate([N.act(i, d) for i in range(N.n + 1)], axis=1)
        ker = f.left_kernel(stacked) if stacked.shape[1] else f.eye(N.dim(d))
        if ker.shape[0]:
            out[d] = ker
    return out


def socle_dims(N: LambdaModule) -> dict[int, int]:
    return {d: b.shape[0] for d, b in socle(N).items()}


def annihilated_by_top(N: LambdaModule) -> bool:
    """``N . soc(Lambda) = 0``."""
    return all(N.field.is_zero(N.top_action(d)) for d in N.degrees)


# -- sums, sub- and quotient modules -------------------------------------------------

def direct_sum(*mods: LambdaModule) -> LambdaModule:
    if not mods:
        raise ValueError("empty direct sum")
    ctx = mods[0].ctx
    for m in mods[1:]:
        if m.ctx != ctx:
            raise CharacteristicMismatch("direct sum over different contexts")
    if all(isinstance(m, FreeModule) and m.trunc_hi is None for m in mods):
        return FreeModule(ctx, [t for m in mods for t in m.twists])
    f = ctx.field
    degs = sorted(set().union(*[m.degrees for m in mods]))
    dims = {d: sum(m.dim(d) for m in mods) for d in degs}
    action = {}
    for d in degs:
        for i in range(ctx.n + 1):
            action[(i, d)] = _block_diag(f, [m.act(i, d) for m in mods])
    return LambdaModule(ctx, dims, action)


def sum_injections(mods: list[LambdaModule], total: LambdaModule) -> list[ModuleMorphism]:
    f = total.field
    out = []
    offs = {d: 0 for d in total.degrees}
    for m in mods:
        maps = {}
        for d, k in m.dims.items():
            mat = f.zeros(k, total.dim(d))
            mat[:, offs[d]:offs[d] + k] = f.eye(k)
            offs[d] += k
            maps[d] = mat
        out.append(ModuleMorphism(m, total, maps))
    return out


def direct_sum_morphism(*us: ModuleMorphism) -> ModuleMorphism:
    src = direct_sum(*[u.source for u in us])
    tgt = direct_sum(*[u.target for u in us])
    f = src.field
    maps = {d: _block_diag(f, [u.component(d) for u in us]) for d in src.degrees}
    return ModuleMorphism(src, tgt, maps)


class SubmoduleData(NamedTuple):
    module: LambdaModule
    inclusion: ModuleMorphism
    bases: dict[int, np.ndarray]
    pivots: dict[int, list[int]]


def submodule(N: LambdaModule, gens: dict[int, np.ndarray]) -> SubmoduleData:
    """Submodule spanned (as a vector space) by the given rows per degree.

    The rows must already span a Lambda-stable subspace; bases are put in
    RREF so that coordinates are read off the pivot columns.
    """
    f = N.field
    bases, pivots = {}, {}
    for d, rows in gens.items():
        if rows.shape[0] == 0:
            continue
        b, piv = f.row_space(rows)
        if piv:
            bases[d], pivots[d] = b, piv
    dims = {d: b.shape[0] for d, b in bases.items()}
    action = {}
    for d, b in bases.items():
        if d + 1 not in bases:
            continue
        for i in range(N.n + 1):
            img = f.mul(b, N.act(i, d))
            coords = img[:, pivots[d + 1]]
            if not np.array_equal(f.mul(coords, bases[d + 1]), img):
                raise ValueError(f"subspace not stable under e{i} in degree {d}")
            action[(i, d)] = coords
    for d, b in bases.items():
        if d + 1 not in bases:
            for i in range(N.n + 1):
                if not f.is_zero(f.mul(b, N.act(i, d))):
                    raise ValueError(f"subspace not stable under e{i} in degree {d}")
    sub = LambdaModule(N.ctx, dims, action)
    return SubmoduleData(sub, ModuleMorphism(sub, N, bases), bases, pivots)


class QuotientData(NamedTuple):
    module: LambdaModule
    projection: ModuleMorphism
    section: dict[int, list[int]]     # complement coordinates chosen per degree


def quotient(N: LambdaModule, sub_bases: dict[int, np.ndarray]) -> QuotientData:
    """``N / W`` for a Lambda-stable W given by spanning rows per degree.

    The quotient basis is the images of the unit vectors of ``N_d`` at the
    non-pivot columns of RREF(W_d).
    """
    f = N.field
    red, pivs, comps = {}, {}, {}
    for d in N.degrees:
        rows = sub_bases.get(d)
        if rows is not None and rows.shape[0]:
            b, piv = f.row_space(rows)
        else:
            b, piv = f.zeros(0, N.dim(d)), []
        red[d], pivs[d] = b, piv
        pset = set(piv)
        comps[d] = [c for c in range(N.dim(d)) if c not in pset]

    def reduce_rows(d, v):
        if pivs[d]:
            v = f.sub(v, f.mul(v[:, pivs[d]], red[d]))
        return v[:, comps[d]]

    dims = {d: len(c) for d, c in comps.items()}
    action = {}
    for d in N.degrees:
        if d + 1 not in comps or not comps[d]:
            continue
        for i in range(N.n + 1):
            img = N.act(i, d)[comps[d]]
            action[(i, d)] = reduce_rows(d + 1, img)
    q = LambdaModule(N.ctx, dims, action)
    proj = {d: reduce_rows(d, f.eye(N.dim(d))) for d in N.degrees if comps[d]}
    return QuotientData(q, ModuleMorphism(N, q, proj), comps)


def kernel(u: ModuleMorphism) -> SubmoduleData:
    f = u.field
    gens = {}
    for d in u.source.degrees:
        m = u.component(d)
        gens[d] = f.left_kernel(m) if m.shape[1] else f.eye(m.shape[0])
    return submodule(u.source, gens)


def image(u: ModuleMorphism) -> SubmoduleData:
    return submodule(u.target, {d: m for d, m in u.maps.items()})


def cokernel(u: ModuleMorphism) -> QuotientData:
    return quotient(u.target, {d: m for d, m in u.maps.items()})


def truncate(N: LambdaModule, hi: int) -> LambdaModule:
    """The quotient ``N_{<= hi}``."""
    if isinstance(N, FreeModule):
        cur = N.trunc_hi
        return FreeModule(N.ctx, N.twists, hi=hi if cur is None else min(hi, cur))
    dims = {d: m for d, m in N.dims.items() if d <= hi}
    action = {k: m for k, m in N.action.items() if k[1] + 1 <= hi}
    return LambdaModule(N.ctx, dims, action)


def truncate_morphism(u: ModuleMorphism, hi: int, source=None, target=None) -> ModuleMorphism:
    s = source if source is not None else truncate(u.source, hi)
    t = target if target is not None else truncate(u.target, hi)
    return ModuleMorphism(s, t, {d: m for d, m in u.maps.items() if d <= hi})


# -- morphisms into Lambda^v(a) ------------------------------------------------------

def extend_functional(N: LambdaModule, a: int, phi: np.ndarray) -> ModuleMorphism:
    """The unique morphism ``f : N -> Lambda^v(a)`` with ``f_{-a} = phi``.

    ``phi`` is a column (``dim N_{-a} x 1``).  Lower components are solved
    downward from ``f_c . A_c = [act_i(c) . f_{c+1}]_i`` where ``A_c`` stacks
    the actions of ``Lambda^v(a)``; ``A_c`` is injective below the socle.
    """
    f = N.field
    target = FreeModule(N.ctx, [a])
    top = -a
    maps = {}
    if N.dim(top):
        maps[top] = phi.reshape(N.dim(top), 1)
    for c in range(top - 1, top - N.n - 2, -1):
        if not N.dim(c):
            continue
        a_c = np.concatenate([target.act(i, c) for i in range(N.n + 1)], axis=1)
        nxt = maps.get(c + 1)
        if nxt is None:
            nxt = f.zeros(N.dim(c + 1), target.dim(c + 1))
        rhs = np.concatenate([f.mul(N.act(i, c), nxt) for i in range(N.n + 1)], axis=1)
        maps[c] = f.solve_left(a_c, rhs)
    return ModuleMorphism(N, target, maps)


def morphism_to_free(N: LambdaModule, F: FreeModule, functionals: list[np.ndarray]) -> ModuleMorphism:
    """Assemble ``N -> F`` from one functional per summand of ``F``."""
    f = N.field
    maps = {d: f.zeros(N.dim(d), F.dim(d)) for d in N.degrees if F.dim(d)}
    for j, (t, phi) in enumerate(zip(F.twists, functionals)):
        u = extend_functional(N, t, phi)
        for d, m in u.maps.items():
            if d in maps:
                maps[d][:, F.summand_slice(j, d)] = m
    return ModuleMorphism(N, F, maps)


# -- Hom spaces ------------------------------------------------------------------------

@dataclass
class HomSpace:
    dimension: int
    basis: list[ModuleMorphism] = dc_field(default_factory=list)


def hom_space(A: LambdaModule, B: LambdaModule, want_basis: bool = True) -> HomSpace:
    """``Hom_Lambda(A, B)`` by solving the linearity equations exactly."""
    if A.ctx != B.ctx:
        if A.field != B.field:
            raise CharacteristicMismatch("hom between modules over different fields")
        raise ValueError("hom between modules over different exterior algebras")
    f = A.field
    degs = [d for d in A.degrees if B.dim(d)]
    offs, total = {}, 0
    for d in degs:
        offs[d] = total
        total += A.dim(d) * B.dim(d)
    if total == 0:
        return HomSpace(0, [])
    blocks = []
    for d in sorted(set(A.degrees) | set(B.degrees)):
        na, nb1 = A.dim(d), B.dim(d + 1)
        if not (na and nb1):
            continue
        for i in range(A.n + 1):
            # act_A(d) . f_{d+1} - f_d . act_B(d) = 0, written as rows of unknowns
            eq = f.zeros(total, na * nb1)
            if d + 1 in offs:
                m = np.kron(A.act(i, d).T, f.eye(nb1))      # unknowns of A X, row-major
                o = offs[d + 1]
                eq[o:o + m.shape[0]] = f.reduce(m)
            if d in offs:
                m = np.kron(f.eye(na), B.act(i, d))         # unknowns of X B, row-major
                o = offs[d]
                eq[o:o + m.shape[0]] = f.sub(eq[o:o + m.shape[0]], f.reduce(m))
            blocks.append(eq)
    if blocks:
        system = np.concatenate(blocks, axis=1)
        sol = f.left_kernel(system)
    else:
        sol = f.eye(total)
    if not want_basis:
        return HomSpace(sol.shape[0], [])
    basis = []
    for row in sol:
        maps = {d: row[offs[d]:offs[d] + A.dim(d) * B.dim(d)].reshape(A.dim(d), B.dim(d)) for d in degs}
        basis.append(ModuleMorphism(A, B, maps))
    return HomSpace(sol.shape[0], basis)


# -- splitting off free summands -----------------------------------------------------------

@dataclass
class SplitResult:
    """``N ~= Lambda(a_1) + ... + Lambda(a_m) + N0`` with ``N0 . soc(Lambda) = 0``.

    ``iso`` maps ``free + core`` (summands in the order of ``twists``, then
    the core) isomorphically onto ``N``.
    """

    twists: list[int]
    core: LambdaModule
    core_inclusion: ModuleMorphism
    free: LambdaModule
    iso: ModuleMorphism

    @property
    def N0(self) -> LambdaModule:
        return self.core


def split_free(N: LambdaModule) -> SplitResult:
    """Split off free summands until the rest is killed by ``soc(Lambda)``.

    A homogeneous witness ``y`` with ``y . e_0...e_n != 0`` (highest degree
    first, then first basis vector) generates ``y Lambda ~= Lambda(-deg y)``;
    a functional on the degree of ``y . e_0...e_n`` that is 1 there extends
    to a retraction onto ``Lambda^v(-deg y - n - 1)``, whose kernel is a
    complement.
    """
    ctx = N.ctx
    f = N.field
    n = ctx.n
    cur = N
    incl = ModuleMorphism.identity(N)         # cur -> N
    found: list[tuple[int, dict[int, np.ndarray]]] = []   # (a, image of Lambda(a) in N per degree)
    while True:
        witness = None
        for d in sorted(cur.degrees, reverse=True):
            top = cur.top_action(d)
            nz = np.flatnonzero(np.any(top != 0, axis=1)) if top.size else []
            if len(nz):
                witness = (d, int(nz[0]), top)
                break
        if witness is None:
            break
        d, r, top = witness
        a = -d
        y = f.zeros(1, cur.dim(d))
        y[0, r] = 1
        img_top = top[r]
        col = int(np.flatnonzero(img_top != 0)[0])
        phi = f.zeros(cur.dim(d + n + 1), 1)
        phi[col, 0] = f.inv(img_top[col])
        retr = extend_functional(cur, a - n - 1, phi)
        # image of y Lambda in cur, per degree
        imgs = monomial_images(cur, d, y)
        emb = {}
        for s, row in imgs.items():
            k = popcount(s)
            emb.setdefault(d + k, []).append((s, row))
        emb_maps = {}
        for deg, items in emb.items():
            k = deg - d
            mat = f.zeros(ctx.dim(k), cur.dim(deg))
            for s, row in items:
                # Lambda(a) basis e_S maps to (-1)^{a k} y . e_S
                mat[ctx.index(s)] = row[0] if (a * k) % 2 == 0 else f.reduce(-row[0])
            emb_maps[deg] = mat
        found.append((a, {deg: f.mul(m, incl.component(deg)) for deg, m in emb_maps.items()}))
        ker = kernel(retr)
        incl = ker.inclusion.then(incl)
        cur = ker.module
    order = sorted(range(len(found)), key=lambda j: -found[j][0])
    twists = [found[j][0] for j in order]
    frees = [make_free(ctx, "lambda", a) for a in twists]
    free = direct_sum(*frees) if frees else zero_module(ctx)
    total = direct_sum(*(frees + [cur])) if frees else cur
    maps = {}
    for d in N.degrees:
        rows = [found[j][1][d] for j in order if d in found[j][1]]
        rows.append(incl.component(d))
        maps[d] = np.concatenate(rows, axis=0) if rows else f.zeros(0, N.dim(d))
    iso = ModuleMorphism(total, N, maps)
    return SplitResult(twists, cur, incl, free, iso)
