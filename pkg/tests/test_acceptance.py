"""The nine acceptance criteria, each at its exact tolerance and time limit.

Every criterion prints one PASS/FAIL line; the lines are repeated in the
pytest terminal summary.  Run this file directly to get only those lines:

    python3 tests/test_acceptance.py
"""

from __future__ import annotations

import sys
import time
from functools import cache
from math import comb
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bggtate import gallery  # noqa: E402
from bggtate.beilinson import beilinson_linear_terms, beilinson_omega  # noqa: E402
from bggtate.cohomology import (cohomology_table, factoring_through_free_dim, hom_derived_dim,  # noqa: E402
                                multiplication_map, table_from_tate)
from bggtate.exterior import ExteriorContext  # noqa: E402
from bggtate.functor import L_module, chi_line, euler_char  # noqa: E402
from bggtate.linalg import Field  # noqa: E402
from bggtate.modules import direct_sum, hom_space, make_free, split_free, twist, underline_k  # noqa: E402
from bggtate.oracle import bott_dims, cech_multiplication_rank, p1_hyper, serre_dims  # noqa: E402
from bggtate.randgen import random_module  # noqa: E402
from bggtate.resolutions import betti_stable, corner, min_free_resolution, tate_resolution  # noqa: E402
from conftest import ACCEPTANCE_LINES  # noqa: E402
from strategies import random_automorphism  # noqa: E402

FIELD = Field()
CTX = {n: ExteriorContext(n, FIELD) for n in (1, 2, 3, 4)}

pytestmark = pytest.mark.acceptance


class Outcome:
    """Collects failures for one criterion and formats its report line."""

    def __init__(self, number: int, title: str, limit: float | None = None):
        self.number, self.title, self.limit = number, title, limit
        self.checks = 0
        self.failures: list[str] = []
        self.start = time.perf_counter()

    def expect(self, ok: bool, label: str):
        self.checks += 1
        if not ok:
            self.failures.append(label)

    def finish(self) -> bool:
        elapsed = time.perf_counter() - self.start
        in_time = self.limit is None or elapsed < self.limit
        ok = not self.failures and in_time
        budget = f"{elapsed:.1f}s" + (f" of {self.limit:.0f}s" if self.limit else "")
        line = (f"criterion {self.number}: {'PASS' if ok else 'FAIL'}  {self.title}  "
                f"[{self.checks - len(self.failures)}/{self.checks} checks, {budget}]")
        if self.failures:
            line += f"  first failure: {self.failures[0]}"
        if not in_time:
            line += "  over the time limit"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok


# -- shared random seeds -------------------------------------------------------------------

@cache
def tate_seeds(n: int):
    """200 random seeds of total dimension at most 40, each with two nested Tate windows."""
    rng = np.random.default_rng(1000 + n)
    runs = []
    for _ in range(200):
        N = random_module(CTX[n], rng, max_dim=40)
        window = (N.lo - 3, N.hi + n + 3)
        T = tate_resolution(N, window)
        wider = tate_resolution(N, (window[0] - 1, window[1] + 1))
        runs.append((N, T, wider))
    return runs


def small_seeds(n: int, count: int, seed: int, max_dim: int = 20, socle_free: bool = True):
    rng = np.random.default_rng(seed)
    return [random_module(CTX[n], rng, max_dim, socle_free=socle_free) for _ in range(count)]


# -- criteria ------------------------------------------------------------------------------

def criterion_1() -> bool:
    out = Outcome(1, "line-bundle tables match serre_dims, n in 1..4, a in [-8, 8]", limit=120)
    for n in (1, 2, 3, 4):
        for a in range(-8, 9):
            s = gallery.twisted_structure(CTX[n], a)
            core = split_free(s.module).core
            tab = cohomology_table(core, (0, 0), (0, n), s.shift)
            out.expect(tab.column(0) == serre_dims(n, a), f"seed O({a}) on P^{n}")
        s = gallery.twisted_structure(CTX[n], 0)
        tab = cohomology_table(split_free(s.module).core, (-8, 8), (0, n), s.shift)
        for a in range(-8, 9):
            out.expect(tab.column(a) == serre_dims(n, a), f"O({a}) on P^{n} from the O seed")
    return out.finish()


def criterion_2() -> bool:
    out = Outcome(2, "omega(i) tables match bott_dims, n in {2, 3}, twist in [-4, 4]", limit=120)
    for n in (2, 3):
        for i in range(n + 1):
            s = gallery.omega(CTX[n], i)
            tab = cohomology_table(split_free(s.module).core, (-4, 4), (0, n), s.shift)
            for e in range(-4, 5):
                out.expect(tab.column(e) == bott_dims(n, i, i + e), f"Omega^{i}({i + e}) on P^{n}")
    return out.finish()


def criterion_3() -> bool:
    out = Outcome(3, "Tate windows minimal, exact, block-triangular, Betti-stable (2 x 200 seeds)", limit=300)
    for n in (1, 2):
        for k, (N, T, wider) in enumerate(tate_seeds(n)):
            label = f"n={n} seed #{k}"
            out.expect(N.total_dim <= 40, label + " size")
            out.expect(T.is_minimal(), label + " minimality")
            out.expect(all(T.exactness().values()), label + " exactness")
            out.expect(T.is_block_triangular(), label + " block-triangularity")
            out.expect(T.complex.squares_to_zero(), label + " d^2")
            out.expect(betti_stable(T, wider), label + " Betti stability")
    return out.finish()


def criterion_4() -> bool:
    out = Outcome(4, "Euler identity on every twist of every window (same seeds)")
    for n in (1, 2):
        for k, (N, T, _) in enumerate(tate_seeds(n)):
            degrees = (N.lo, N.hi + n)
            twists = (T.window[0] - degrees[0], T.window[1] - degrees[1])
            tab = table_from_tate(T, twists, degrees)
            C = L_module(N)
            for d in range(twists[0], twists[1] + 1):
                out.expect(tab.euler(d) == euler_char(C, d), f"n={n} seed #{k} d={d}")
    return out.finish()


def criterion_5() -> bool:
    out = Outcome(5, "P^1 tables and multiplication ranks match the oracles (100 seeds)", limit=300)
    span = 3
    for k, N in enumerate(small_seeds(1, 100, 5001)):
        label = f"seed #{k}"
        out.expect(N.total_dim <= 20, label + " size")
        C = L_module(N)
        tab = cohomology_table(N, (-span, span))
        for d in range(-span, span + 1):
            hyp = p1_hyper(C.twisted(d))
            js = range(tab.degrees[0], tab.degrees[1] + 1)
            out.expect(all(tab.h(j, d) == hyp.get(j, 0) for j in js) and set(hyp) <= set(js),
                       f"{label} table at d={d}")
        T = tate_resolution(N, (N.lo - span, N.hi + span))
        for p in range(T.window[0], T.window[1]):
            for i in range(p - 3, p + 2):
                M = multiplication_map(T, p, i)
                rank = FIELD.rank(M) if M.size else 0
                out.expect(rank == cech_multiplication_rank(C, p - i, i), f"{label} multiplication p={p} i={i}")
    return out.finish()


def criterion_6() -> bool:
    out = Outcome(6, "corner shift for |p| <= 2 and derived Hom of k into shifted seeds")
    for n in (1, 2):
        for k, N in enumerate(small_seeds(n, 20, 6000 + n)):
            T = tate_resolution(N, (-3, 3))
            degrees = (N.lo - 3, N.hi + n + 3)
            expected = cohomology_table(N, (-2, 2), degrees).entries
            for p in range(-2, 3):
                core = split_free(corner(T, p)).core
                got = cohomology_table(core, (-2, 2), degrees, shift=-p).entries if not core.is_zero() else {}
                out.expect(got == expected, f"n={n} seed #{k} corner {p}")
    for n in (1, 2, 3):
        k = underline_k(CTX[n])
        for p in range(5):
            for a in range(-8, 7):
                want = comb(p + n, n) if a == -p else 0
                out.expect(hom_derived_dim(k, twist(k, a), p) == want, f"n={n} p={p} twist {a}")
    return out.finish()


def maps_through_cover(Np, N) -> int:
    """Dimension of the maps N' -> N that factor through the free cover of N."""
    aug = min_free_resolution(N, 1).augmentation
    rows = []
    for phi in hom_space(Np, aug.source).basis:
        u = phi.then(aug)
        rows.append(np.concatenate([u.component(d).reshape(-1) for d in Np.degrees]))
    return FIELD.rank(FIELD.array(rows)) if rows else 0


def criterion_7() -> bool:
    out = Outcome(7, "dim Hom = derived Hom + maps through I^-1 (random pairs)")
    for n in (1, 2):
        sources = small_seeds(n, 40, 7000 + n, socle_free=False)
        targets = small_seeds(n, 40, 7100 + n)
        for k, (Np, N) in enumerate(zip(sources, targets)):
            total = hom_space(Np, N, want_basis=False).dimension
            through = maps_through_cover(Np, N)
            out.expect(through == factoring_through_free_dim(Np, N), f"n={n} pair #{k} two factoring counts")
            out.expect(total == hom_derived_dim(Np, N, 0) + through, f"n={n} pair #{k}")
    return out.finish()


def criterion_8() -> bool:
    out = Outcome(8, "split_free recovers random free paddings; core matches N0")
    for n in (1, 2):
        rng = np.random.default_rng(8000 + n)
        for k, N0 in enumerate(small_seeds(n, 40, 8100 + n)):
            pads = [int(a) for a in rng.integers(-3, 4, size=int(rng.integers(1, 4)))]
            padded = direct_sum(N0, *[make_free(CTX[n], "lambda", a) for a in pads])
            scrambled, _ = random_automorphism(padded, rng)
            s = split_free(scrambled)
            label = f"n={n} seed #{k} pads {pads}"
            out.expect(s.twists == sorted(pads, reverse=True), label + " twists")
            out.expect(s.core.graded_dims() == N0.graded_dims(), label + " graded dims")
            window = (N0.lo - 2, N0.hi + n + 1)
            same = betti_stable(tate_resolution(s.core, window), tate_resolution(N0, window))
            out.expect(same, label + " Betti table")
    return out.finish()


def criterion_9() -> bool:
    out = Outcome(9, "Beilinson monads of O(a), |a| <= n, n in {2, 3}", limit=60)
    for n in (2, 3):
        for a in range(-n, n + 1):
            s = gallery.twisted_structure(CTX[n], a)
            N0 = split_free(s.module).core
            label = f"O({a}) on P^{n}"
            B = beilinson_omega(N0, shift=s.shift)
            for p in range(-n - 2, n + 2):
                for i in range(n + 1):
                    j = p + i
                    want = serre_dims(n, a - i)[j] if 0 <= j <= n else 0
                    out.expect(B.multiplicity(p, i) == want, f"{label} term ({p}, {i})")
            out.expect(all(-n - 1 <= p <= n + 1 for p in B.terms()), f"{label} stray terms")
            out.expect(B.squares_to_zero() and B.products_vanish(), f"{label} d^2")
            lin = beilinson_linear_terms(N0, shift=s.shift)
            C = L_module(N0)
            for d in range(-n - 2, n + 3):
                # F = T^shift L(N0), so chi(F(d)) = (-1)^shift chi(L(N0)(d)) = chi(O(a + d))
                chi = (-1) ** (s.shift % 2) * euler_char(C, d)
                out.expect(chi == chi_line(n, a + d), f"{label} chi at {d}")
                out.expect(B.euler(d) == chi, f"{label} omega-form Euler at {d}")
                out.expect(lin.euler(d) == chi, f"{label} linear-form Euler at {d}")
            if a == 1:
                out.expect(B.terms() == {-1: {1: 1}, 0: {0: n + 1}}, f"{label} Euler-sequence terms")
                M = B.fibre_matrix(-1)
                out.expect(M.shape == (n + 1, n + 1) and FIELD.rank(M) == n + 1, f"{label} V-map invertible")
                out.expect(all(lam.degree == 1 for lam in B.blocks[-1][0]), f"{label} linear entries")
    return out.finish()


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
