"""Lie algebra realizations: membership, roots, pairing, torus characters."""

from fractions import Fraction as Q

import pytest

from bdcohomology.errors import LieAlgebraError
from bdcohomology.field import BASE_TOWER
from bdcohomology.liealg import (LieAlgebra, positive_roots, root_inner,
                                 simple_roots, sp_comm, sp_to_matrix,
                                 sp_trace_mul, sp_transpose, sp_unit)

ALGS = [("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 3), ("D", 4)]


@pytest.mark.parametrize("series,n", ALGS)
def test_dimension(series, n):
    g = LieAlgebra(series, n)
    npos = {"B": n * n, "C": n * n, "D": n * n - n}[series]
    assert len(g.positive) == npos
    assert g.dim == 2 * npos + n
    assert len(set(g.positive)) == npos


@pytest.mark.parametrize("series,n", ALGS)
def test_root_vectors_in_algebra(series, n):
    g = LieAlgebra(series, n)
    for gamma in g.positive:
        for x in (g.e[gamma], g.f[gamma]):
            assert g.contains(sp_to_matrix(x, g.size))
        assert sp_trace_mul(g.e[gamma], g.f[gamma]) == 1
    for h in g.cartan:
        assert g.contains(sp_to_matrix(h, g.size))


def test_simple_vectors_corrected_forms():
    # 1-based: B_2 alpha_2 -> E(2,3)-E(3,4); C_2 alpha_2 -> E(2,3);
    #          D_3 alpha_3 -> E(2,4)-E(3,5)
    b2 = LieAlgebra("B", 2)
    assert b2.e[b2.simple[1]] == {(1, 2): Q(1), (2, 3): Q(-1)}
    c2 = LieAlgebra("C", 2)
    assert c2.e[c2.simple[1]] == {(1, 2): Q(1)}
    d3 = LieAlgebra("D", 3)
    assert d3.e[d3.simple[2]] == {(1, 3): Q(1), (2, 4): Q(-1)}


@pytest.mark.parametrize("series,n", ALGS)
def test_cartan_eigenvalues(series, n):
    g = LieAlgebra(series, n)
    for gamma in g.positive:
        for k in range(n):
            br = sp_comm(g.cartan[k], g.e[gamma])
            ev = g.coords(br)
            assert set(ev) <= {("e", gamma)}
            # eigenvalue = gamma evaluated on h_k, read off the diagonal of h_k
            hk = g.cartan[k]
            expect = sum(Q(c) * hk.get((i, i), Q(0))
                         for i, c in enumerate(gamma))
            assert ev.get(("e", gamma), Q(0)) == expect


@pytest.mark.parametrize("series,n", ALGS)
def test_coords_roundtrip(series, n):
    g = LieAlgebra(series, n)
    for label in g.basis_labels():
        c = g.coords(g.basis_mat(label))
        assert c == {label: Q(1)}
    x = sp_comm(g.e[g.simple[0]], g.f[g.simple[0]])
    assert g.from_coords(g.coords(x)) == x


@pytest.mark.parametrize("series,n", ALGS)
def test_form_invariance_sample(series, n):
    g = LieAlgebra(series, n)
    a, b, c = g.e[g.positive[0]], g.f[g.positive[-1]], g.cartan[n - 1]
    assert sp_trace_mul(sp_comm(a, b), c) == sp_trace_mul(a, sp_comm(b, c))
    assert g.gram().det() != 0


def test_root_systems():
    assert positive_roots("B", 2) == [(1, -1), (1, 1), (1, 0), (0, 1)]
    assert simple_roots("C", 3)[-1] == (0, 0, 2)
    assert simple_roots("D", 4)[-1] == (0, 0, 1, 1)
    assert root_inner((1, -1), (1, 1)) == 0
    with pytest.raises(LieAlgebraError):
        LieAlgebra("A", 2)
    with pytest.raises(LieAlgebraError):
        LieAlgebra("D", 2)


@pytest.mark.parametrize("series,n", ALGS)
def test_torus_characters(series, n):
    t0 = BASE_TOWER
    h = t0.hbar()
    values = [h + k + 1 for k in range(n)]
    g = LieAlgebra(series, n)
    tm = g.torus_matrix(values, t0)
    assert g.group_contains(tm)
    chars = g.simple_character_values(values, t0)
    tinv = tm.inv()
    for k, alpha in enumerate(g.simple):
        ek = sp_to_matrix(g.e[alpha], g.size, t0.el)
        assert tm * ek * tinv == ek * chars[k]


def test_transpose_is_opposite_root_vector():
    g = LieAlgebra("B", 3)
    for gamma in g.positive:
        ft = sp_transpose(g.e[gamma])
        assert g.weight_of(ft) == tuple(-c for c in gamma)


def test_structure_constants_cache():
    g = LieAlgebra("C", 2)
    la, lb = ("e", g.simple[0]), ("f", g.simple[0])
    c1 = g.struct(la, lb)
    assert c1 == g.struct(la, lb)
    assert set(c1) == {("h", 0)}
    assert c1[("h", 0)] == 1          # [e_i, f_i] = h_i by definition


def test_group_membership_rejects():
    g = LieAlgebra("D", 3)
    t0 = BASE_TOWER
    bad = sp_to_matrix(sp_unit(0, 0), g.size, t0.el)
    assert not g.group_contains(bad)
