from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bggtate import gallery
from bggtate.cohomology import (CannotCertify, betti_table, cm_regularity, cohomology_table,
                                factoring_through_free_dim, hom_derived_dim, multiplication_map, seed_table,
                                strand_composite, table_from_tate)
from bggtate.functor import L_module, euler_char
from bggtate.modules import direct_sum, make_free, socle_dims, twist, underline_k, zero_module
from bggtate.oracle import serre_dims
from bggtate.resolutions import NotSocleAnnihilated, WindowTooSmall, tate_resolution
from strategies import CONTEXTS, modules

PLANE_TABLE = ("j\\d\t-5\t-4\t-3\t-2\t-1\t0\t1\t2\t3\t4\t5\n"
               "2\t6\t3\t1\t.\t.\t.\t.\t.\t.\t.\t.\n"
               "1\t.\t.\t.\t.\t.\t.\t.\t.\t.\t.\t.\n"
               "0\t.\t.\t.\t.\t.\t1\t3\t6\t10\t15\t21\n")


class TestBetti:
    def test_residue_field_plane(self, ctx2):
        table = betti_table(tate_resolution(underline_k(ctx2), (-2, 2)))
        assert {k: table[k] for k in [(0, 0), (1, 1), (2, 2), (-1, -3), (-2, -4)]} == \
            {(0, 0): 1, (1, 1): 3, (2, 2): 6, (-1, -3): 1, (-2, -4): 3}

    @settings(max_examples=20)
    @given(modules(max_dim=20))
    def test_matches_socle(self, N):
        T = tate_resolution(N, (-2, 2))
        table = betti_table(T)
        for p, F in T.terms.items():
            assert socle_dims(F) == {-i: g for (q, i), g in table.items() if q == p}

    def test_zero_module(self, ctx2):
        assert seed_table(zero_module(ctx2), (-2, 2)).nonzero() == {}


class TestTables:
    def test_plane(self, ctx2):
        tab = cohomology_table(underline_k(ctx2), (-5, 5))
        assert tab.h(0, 2) == 6 and tab.h(2, -3) == 1
        assert tab.render() == PLANE_TABLE

    def test_line(self, ctx1):
        assert cohomology_table(underline_k(ctx1), (-3, 3)).h(1, -2) == 1

    def test_rejects_free_seed(self, ctx2):
        with pytest.raises(NotSocleAnnihilated):
            cohomology_table(make_free(ctx2, "dual"), (0, 1))

    def test_outside_table(self, ctx2):
        tab = cohomology_table(underline_k(ctx2), (0, 1))
        with pytest.raises(CannotCertify):
            tab.h(0, 5)

    def test_from_tate_needs_window(self, ctx2):
        T = tate_resolution(underline_k(ctx2), (-1, 1))
        with pytest.raises(WindowTooSmall):
            table_from_tate(T, (-3, 3), (0, 2))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_twisted_structure_seeds(self, n):
        ctx = CONTEXTS[n]
        for a in range(-4, 5):
            s = gallery.twisted_structure(ctx, a)
            assert seed_table(s.module, (0, 0), (0, n), s.shift).column(0) == serre_dims(n, a)

    @settings(max_examples=20)
    @given(modules(max_dim=24))
    def test_euler_identity(self, N):
        tab = cohomology_table(N, (-3, 3))
        C = L_module(N)
        assert all(tab.euler(d) == euler_char(C, d) for d in range(-3, 4))

    @settings(max_examples=15)
    @given(modules(max_dim=16), st.integers(-3, 3))
    def test_free_summands_do_not_matter(self, N, a):
        padded = direct_sum(N, make_free(N.ctx, "lambda", a))
        degrees = (N.lo - 1, N.hi + N.n + 1)
        assert seed_table(padded, (-2, 2), degrees).entries == cohomology_table(N, (-2, 2), degrees).entries

    @settings(max_examples=10)
    @given(modules(max_dim=16))
    def test_betti_mode_matches_full_resolution(self, N):
        tab = cohomology_table(N, (-2, 2))
        T = tate_resolution(N, (tab.degrees[0] - 2, tab.degrees[1] + 2))
        assert table_from_tate(T, (-2, 2), tab.degrees).entries == tab.entries


class TestHom:
    def test_identity(self, ctx2):
        k = underline_k(ctx2)
        assert hom_derived_dim(k, k, 0) == 1

    @pytest.mark.parametrize("p", range(5))
    def test_symmetric_powers(self, ctx2, p):
        k = underline_k(ctx2)
        assert hom_derived_dim(k, twist(k, -p), p) == comb(p + 2, 2)

    @pytest.mark.parametrize("p", [-1, 0, 1, 2])
    def test_free_source(self, ctx2, p):
        assert hom_derived_dim(make_free(ctx2, "lambda", 1), underline_k(ctx2), p) == 0
        assert hom_derived_dim(make_free(ctx2, "dual", 0), underline_k(ctx2, -1), p) == 0

    def test_window_check(self, ctx2):
        k = underline_k(ctx2)
        with pytest.raises(WindowTooSmall):
            hom_derived_dim(k, k, 3, T=tate_resolution(k, (-1, 1)))

    def test_maps_through_free(self, ctx2):
        k = underline_k(ctx2)
        assert factoring_through_free_dim(k, k) == 0
        # Lambda -> k through its free cover
        assert factoring_through_free_dim(make_free(ctx2, "lambda"), k) == 1


class TestMultiplication:
    def test_residue_field_first_block(self, ctx2):
        M = multiplication_map(tate_resolution(underline_k(ctx2), (-1, 2)), 0, 0)
        f = ctx2.field
        assert M.shape == (3, 3) and f.rank(M) == 3
        assert all(np.count_nonzero(row) == 1 for row in M)
        assert all(int(x) in (1, f.char - 1) for x in M[M != 0])

    def test_line(self, ctx1):
        M = multiplication_map(tate_resolution(underline_k(ctx1), (-4, 2)), -2, -3)
        assert M.shape == (4, 1) and ctx1.field.rank(M) == 1

    def test_window_independent(self, ctx2):
        k = underline_k(ctx2)
        a = multiplication_map(tate_resolution(k, (-2, 2)), -2, -4)
        b = multiplication_map(tate_resolution(k, (-4, 3)), -2, -4)
        assert np.array_equal(a, b)

    def test_out_of_window(self, ctx2):
        with pytest.raises(WindowTooSmall):
            multiplication_map(tate_resolution(underline_k(ctx2), (-1, 1)), 1, 1)

    @settings(max_examples=15)
    @given(modules(max_dim=20))
    def test_strands_compose_to_zero(self, N):
        T = tate_resolution(N, (N.lo - 2, N.hi + N.n + 1))
        f = N.field
        for p in range(T.window[0], T.window[1] - 1):
            for i in range(p - N.n - 2, p + 2):
                assert f.is_zero(strand_composite(T, p, i))


class TestRegularity:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_structure_sheaf(self, n):
        assert cm_regularity(cohomology_table(underline_k(CONTEXTS[n]), (-5, 5))) == 0

    @pytest.mark.parametrize("a", [-2, -1, 1, 2])
    def test_line_bundles(self, ctx2, a):
        s = gallery.twisted_structure(ctx2, a)
        assert cm_regularity(seed_table(s.module, (-6, 6), (0, 2), s.shift)) == -a

    def test_cotangent_plane(self, ctx2):
        s = gallery.omega(ctx2, 1)
        assert cm_regularity(seed_table(s.module, (-4, 4), (0, 2)).twisted(-1)) == 2

    def test_uncertifiable(self, ctx2):
        with pytest.raises(CannotCertify):
            cm_regularity(cohomology_table(underline_k(ctx2), (1, 3)))
        with pytest.raises(CannotCertify):
            cm_regularity(cohomology_table(underline_k(ctx2), (0, 1), (0, 0)))
