"""Named verification suites, each a list of independent pass/fail cases."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from . import gallery, modfile
from .cohomology import cohomology_table, multiplication_map, seed_table, strand_composite
from .exterior import ExteriorContext
from .functor import L_module, euler_char
from .linalg import Field
from .oracle import bott_dims, cech_multiplication_rank, p1_hyper, serre_dims
from .randgen import random_module
from .resolutions import tate_resolution


@dataclass
class SuiteReport:
    name: str
    passed: int = 0
    failures: list[str] = dc_field(default_factory=list)

    @property
    def total(self) -> int:
        return self.passed + len(self.failures)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, label: str):
        if ok:
            self.passed += 1
        else:
            self.failures.append(label)

    def summary(self) -> str:
        return f"{self.name}: {self.passed}/{self.total} passed"


def serre(field: Field, seed: int = 0, count: int = 0, ns=(1, 2, 3, 4), a_range=(-8, 8)) -> SuiteReport:
    rep = SuiteReport("serre")
    lo, hi = a_range
    for n in ns:
        ctx = ExteriorContext(n, field)
        s = gallery.twisted_structure(ctx, 0)
        tab = seed_table(s.module, (lo, hi), (0, n), shift=s.shift)
        for a in range(lo, hi + 1):
            rep.record(tab.column(a) == serre_dims(n, a), f"n={n} a={a}")
    return rep


def bott(field: Field, seed: int = 0, count: int = 0, ns=(2, 3), extra=(-4, 4)) -> SuiteReport:
    """Table of ``omega(i)`` (that is ``Omega^i(i)``) at twist ``e`` against ``Omega^i(i+e)``."""
    rep = SuiteReport("bott")
    for n in ns:
        ctx = ExteriorContext(n, field)
        for i in range(n + 1):
            s = gallery.omega(ctx, i)
            tab = seed_table(s.module, extra, (0, n), shift=s.shift)
            for e in range(extra[0], extra[1] + 1):
                rep.record(tab.column(e) == bott_dims(n, i, i + e), f"n={n} i={i} e={e}")
    return rep


def _seeds(field: Field, n: int, seed: int, count: int, max_dim: int):
    ctx = ExteriorContext(n, field)
    rng = np.random.default_rng(seed)
    return [random_module(ctx, rng, max_dim) for _ in range(count)]


def euler(field: Field, seed: int = 0, count: int = 20, ns=(1, 2), max_dim: int = 40, span: int = 3) -> SuiteReport:
    rep = SuiteReport("euler")
    for n in ns:
        for k, N in enumerate(_seeds(field, n, seed, count, max_dim)):
            C = L_module(N)
            tab = cohomology_table(N, (-span, span))
            ok = all(tab.euler(d) == euler_char(C, d) for d in range(-span, span + 1))
            rep.record(ok, f"n={n} seed #{k}")
    return rep


def cech(field: Field, seed: int = 0, count: int = 20, max_dim: int = 20, span: int = 3) -> SuiteReport:
    """Tables and multiplication ranks on P^1 against the Cech oracles."""
    rep = SuiteReport("cech")
    f = field
    for k, N in enumerate(_seeds(field, 1, seed, count, max_dim)):
        C = L_module(N)
        tab = cohomology_table(N, (-span, span))
        ok = True
        for d in range(-span, span + 1):
            hyp = p1_hyper(C.twisted(d))
            ok &= all(tab.h(j, d) == hyp.get(j, 0) for j in range(tab.degrees[0], tab.degrees[1] + 1))
            ok &= not set(hyp) - set(range(tab.degrees[0], tab.degrees[1] + 1))
        T = tate_resolution(N, (N.lo - span, N.hi + span))
        for p in range(T.window[0], T.window[1]):
            for i in range(p - 3, p + 2):
                M = multiplication_map(T, p, i)
                r = f.rank(M) if M.size else 0
                ok &= r == cech_multiplication_rank(C, p - i, i)
        rep.record(bool(ok), f"seed #{k}")
    return rep


def strand(field: Field, seed: int = 0, count: int = 20, ns=(1, 2), max_dim: int = 30) -> SuiteReport:
    rep = SuiteReport("strand")
    for n in ns:
        for k, N in enumerate(_seeds(field, n, seed, count, max_dim)):
            T = tate_resolution(N, (N.lo - 2, N.hi + n + 1))
            ok = all(field.is_zero(strand_composite(T, p, i))
                     for p in range(T.window[0], T.window[1] - 1) for i in range(p - n - 2, p + 2))
            rep.record(ok, f"n={n} seed #{k}")
    return rep


def roundtrip(field: Field, seed: int = 0, count: int = 20, ns=(1, 2, 3)) -> SuiteReport:
    rep = SuiteReport("roundtrip")
    cases = []
    for n in ns:
        ctx = ExteriorContext(n, field)
        cases += [gallery.twisted_structure(ctx, a) for a in (-2, 0, 3)]
        cases += [gallery.omega(ctx, i) for i in range(n + 1)]
        cases.append(gallery.truncated(ctx, 2, 1))
    for n in ns[:2]:
        cases += [gallery.Seed(N, 0) for N in _seeds(field, n, seed, count, 30)]
    for k, s in enumerate(cases):
        text = modfile.dumps(s.module, s.shift)
        N, shift = modfile.loads(text)
        rep.record(N == s.module and shift == s.shift and modfile.dumps(N, shift) == text, f"case #{k}")
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "serre": serre,
    "bott": bott,
    "euler": euler,
    "cech": cech,
    "strand": strand,
    "roundtrip": roundtrip,
}
