"""Random modules built as kernels and cokernels of maps between free modules.

The module axioms hold by construction, so nothing is ever rejected for
failing them; draws are only redrawn when the result is zero or too big.
"""

from __future__ import annotations

import numpy as np

from .exterior import ExteriorContext
from .modules import (FreeModule, LambdaModule, cokernel, direct_sum, free_module_map, image, kernel,
                      split_free, truncate, underline_k)


def random_free_map(ctx: ExteriorContext, rng: np.random.Generator, target_twists: list[int], sources: int,
                    minimal: bool = True, sparsity: float = 0.0):
    """A random map ``(+) Lambda^v(t_j) -> (+) Lambda^v(t')`` with generators landing in range.

    ``sparsity`` is the chance that a coefficient is forced to zero.
    """
    f = ctx.field
    n = ctx.n
    tgt = FreeModule(ctx, target_twists)
    degrees = tgt.degrees
    twists = []
    images = []
    for _ in range(sources):
        g = int(rng.choice(degrees))
        twists.append(-g - n - 1)
    src = FreeModule(ctx, twists)
    for t in twists:
        g = -t - n - 1
        img = f.random(rng, 1, tgt.dim(g))
        img[0, rng.random(img.shape[1]) < sparsity] = 0
        if minimal:
            # keep the image inside tgt . Lambda_+: no component on a generator
            for l, tl in enumerate(target_twists):
                if -tl - n - 1 == g:
                    img[0, tgt.summand_slice(l, g)] = 0
        images.append(img)
    return free_module_map(src, tgt, images)


def random_module(ctx: ExteriorContext, rng: np.random.Generator, max_dim: int = 20,
                  twist_span: int = 2, socle_free: bool = True, attempts: int = 200) -> LambdaModule:
    """A nonzero random module of total dimension at most ``max_dim``.

    With ``socle_free`` the free summands are split off, so the result is a
    valid Tate seed.
    """
    per = 2 ** (ctx.n + 1)
    for _ in range(attempts):
        k = int(rng.integers(1, max(2, max_dim // per + 1) + 1))
        target = [int(rng.integers(-twist_span, twist_span + 1)) for _ in range(k)]
        u = random_free_map(ctx, rng, target, int(rng.integers(1, k + 2)),
                            sparsity=float(rng.choice([0.0, 0.5, 0.8])))
        kind = int(rng.integers(0, 4))
        if kind == 0:
            N = cokernel(u).module
        elif kind == 1:
            N = kernel(u).module
        elif kind == 2:
            N = image(u).module
        else:
            N = cokernel(u).module
            if N.degrees:
                N = truncate(N, int(rng.integers(N.lo, N.hi + 1)))
        if rng.random() < 0.2:
            N = direct_sum(N, underline_k(ctx, int(rng.integers(-twist_span, twist_span + 1))))
        if socle_free:
            N = split_free(N).N0
        if not N.is_zero() and N.total_dim <= max_dim:
            return N
    raise RuntimeError("could not draw a module within the size bound")


def random_seeds(ctx: ExteriorContext, count: int, seed: int, max_dim: int = 20) -> list[LambdaModule]:
    rng = np.random.default_rng(seed)
    return [random_module(ctx, rng, max_dim) for _ in range(count)]
