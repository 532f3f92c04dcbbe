"""Named seed modules and what their L-images represent.

Every builder returns a :class:`Seed`: the module together with the shift
``s`` such that ``T^s L(module)`` is the sheaf the name refers to.
"""

from __future__ import annotations

from typing import NamedTuple

from .exterior import ExteriorContext
from .modules import LambdaModule, dual, make_free, truncate, twist, underline_k


class Seed(NamedTuple):
    module: LambdaModule
    shift: int = 0


def residue_field(ctx: ExteriorContext, a: int = 0) -> Seed:
    """``k(a)``: one dimension in degree ``-a``; L gives ``O(-a)`` in index ``-a``."""
    return Seed(underline_k(ctx, a), -a)


def truncated(ctx: ExteriorContext, m: int, a: int = 0) -> Seed:
    """``(Lambda / Lambda_+^m)(a)``."""
    if not 1 <= m <= ctx.n + 2:
        raise ValueError(f"truncation length must lie in 1..{ctx.n + 2}, got {m}")
    return Seed(twist(truncate(make_free(ctx, "lambda", 0), m - 1), a), 0)


def omega(ctx: ExteriorContext, i: int) -> Seed:
    """Dual of ``truncated(i+1, i)``; L gives the Koszul resolution of ``Omega^i(i)``."""
    if not 0 <= i <= ctx.n:
        raise ValueError(f"omega index must lie in 0..{ctx.n}, got {i}")
    return Seed(dual(truncated(ctx, i + 1, i).module), 0)


def twisted_structure(ctx: ExteriorContext, a: int = 0) -> Seed:
    """``k(-a)``, whose L-image is ``O(a)`` placed in index ``a``."""
    return Seed(underline_k(ctx, -a), a)


BUILDERS = {
    "underline-k": residue_field,
    "truncated": truncated,
    "omega": omega,
    "twisted-structure": twisted_structure,
}


def build(name: str, ctx: ExteriorContext, **params) -> Seed:
    try:
        builder = BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown gallery module {name!r}; choose from {', '.join(BUILDERS)}") from None
    return builder(ctx, **params)
