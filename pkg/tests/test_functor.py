from math import comb

import pytest
from hypothesis import given, strategies as st

from bggtate.functor import (LinearSheafComplex, L_complex, L_module, L_morphism, chi_line, euler_char,
                             is_chain_map, sheaf_dual)
from bggtate.modules import LambdaModule, dual, hom_space, make_free, underline_k
from bggtate.oracle import cech_hyper
from bggtate.resolutions import ChainMap, ModuleComplex, mapping_cone, min_free_resolution
from strategies import CONTEXTS, modules


def negated(C: LinearSheafComplex) -> LinearSheafComplex:
    f = C.field
    diffs = {p: {k: {m: f.neg(a) for m, a in blk.items()} for k, blk in blocks.items()}
             for p, blocks in C.diffs.items()}
    return LinearSheafComplex(C.ctx, C.terms, diffs)


class TestL:
    def test_residue_field(self, ctx2):
        C = L_module(underline_k(ctx2))
        assert C.terms == {0: [(0, 1)]} and not C.diffs

    def test_koszul(self, ctx2):
        C = L_module(make_free(ctx2, "dual"))
        assert {p: t for p, t in C.terms.items()} == {-3: [(-3, 1)], -2: [(-2, 3)], -1: [(-1, 3)], 0: [(0, 1)]}
        assert C.squares_to_zero() and C.is_linear()

    @pytest.mark.parametrize("a", [-2, 1, 3])
    def test_twisted_residue_field(self, ctx2, a):
        assert L_module(underline_k(ctx2, a)).terms == {-a: [(-a, 1)]}

    def test_render(self, ctx1):
        text = L_module(make_free(ctx1, "dual")).render(with_maps=True)
        assert text.splitlines()[0] == "-2: O(-2)"
        assert "-1: O(-1)^2" in text

    @given(modules(socle_free=False))
    def test_squares_to_zero(self, N):
        C = L_module(N)
        assert C.squares_to_zero() == N.satisfies_axioms() == True
        assert C.is_linear()

    def test_non_module_gives_nonzero_square(self, ctx1):
        f = ctx1.field
        bad = LambdaModule(ctx1, {0: 1, 1: 1, 2: 1}, {(0, 0): f.eye(1), (0, 1): f.eye(1)})
        assert not L_module(bad).squares_to_zero()

    @given(modules(socle_free=False, max_dim=10), modules(socle_free=False, max_dim=10))
    def test_morphisms_become_chain_maps(self, A, B):
        if A.ctx != B.ctx:
            return
        for u in hom_space(A, B).basis[:5]:
            assert is_chain_map(L_module(A), L_module(B), L_morphism(u))


class TestLComplex:
    @given(modules(socle_free=False))
    def test_single_module(self, N):
        assert L_complex(ModuleComplex.concentrated(N)) == L_module(N)

    @given(modules(), st.integers(-3, 3))
    def test_twist(self, N, a):
        K = min_free_resolution(N, 2).complex
        C, Ca = L_complex(K), L_complex(K.twist(a))
        assert Ca.squares_to_zero()
        for s in Ca.indices:
            assert sorted(Ca.term(s)) == sorted((t - a, m) for t, m in C.term(s + a))
        for d in range(-3, 4):
            assert euler_char(Ca, d) == (-1) ** (a % 2) * euler_char(C, d - a)

    @given(modules())
    def test_cone(self, N):
        res = min_free_resolution(N, 2)
        P, Y = res.complex, ModuleComplex.concentrated(N, -1)
        C = L_complex(mapping_cone(ChainMap(P, Y, {-1: res.augmentation})))
        assert C.squares_to_zero()
        LP, LY = L_complex(P), L_complex(Y)
        for s in set(C.indices) | set(LP.indices) | set(LY.indices):
            assert sorted(C.term(s)) == sorted(LP.term(s + 1) + LY.term(s))


class TestEuler:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_residue_field(self, n):
        C = L_module(underline_k(CONTEXTS[n]))
        assert [euler_char(C, d) for d in range(6)] == [comb(d + n, n) for d in range(6)]

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_koszul(self, n):
        C = L_module(make_free(CONTEXTS[n], "dual"))
        assert all(euler_char(C, d) == 0 for d in range(-8, 9))

    def test_plane_at_minus_one(self, ctx2):
        assert euler_char(L_module(underline_k(ctx2)), -1) == 0

    def test_chi_line(self):
        assert chi_line(2, -3) == 1 and chi_line(2, -2) == 0 and chi_line(1, -3) == -2

    @given(modules(), st.integers(-3, 3))
    def test_free_complexes_have_no_euler_characteristic(self, N, d):
        # L of a free module is acyclic, so every finite free complex has zero Euler characteristic
        P = min_free_resolution(N, 3).complex
        assert euler_char(L_complex(P), d) == 0


class TestFreeComplexAcyclic:
    @given(modules(ns=(1,), max_dim=12))
    def test_line_oracle_sees_nothing(self, N):
        P = min_free_resolution(N, 2).complex
        C = L_complex(P)
        for d in (-2, 0, 2):
            assert not any(cech_hyper(C, d).values())


class TestSheafDual:
    def test_residue_field(self, ctx2):
        C = L_module(underline_k(ctx2))
        assert sheaf_dual(C) == C

    def test_koszul(self, ctx2):
        D = make_free(ctx2, "dual")
        assert sheaf_dual(L_module(D)) == L_module(dual(D))

    @given(modules(socle_free=False))
    def test_matches_module_dual(self, N):
        assert sheaf_dual(L_module(N)) == L_module(dual(N))

    @given(modules(socle_free=False))
    def test_double_dual(self, N):
        C = L_module(N)
        CC = sheaf_dual(sheaf_dual(C))
        assert CC == negated(C)
        f = N.field
        signs = {p: (f.eye(m) if p % 2 == 0 else f.neg(f.eye(m))) for p, m in N.dims.items()}
        assert is_chain_map(C, CC, signs)

    def test_unsigned_dual_breaks_the_identity(self, ctx2):
        N = make_free(ctx2, "lambda")
        plain = LambdaModule(ctx2, {-d: m for d, m in N.dims.items()},
                             {(i, -d - 1): m.T.copy() for (i, d), m in N.action.items()})
        assert sheaf_dual(L_module(N)) != L_module(plain)
