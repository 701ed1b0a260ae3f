"""Tests for the cocycle classification layer: the S/J model matrices, the
twist companion T, twistability, the R*J*D normal form, and both
classification tables."""

import random
from fractions import Fraction as Q

import pytest

from bdcohomology.cohomology import (check_r21_ads, classify_nontwisted,
                                     classify_twisted, cocycles_equivalent,
                                     complete_to_group, decompose_rjd,
                                     block_decompose, in_centralizer, in_z,
                                     is_nontwisted_cocycle, is_twistable,
                                     is_twisted_cocycle, j_matrix,
                                     lift_matrix, nontwisted_reduce,
                                     s_fixed_points, s_matrix, s_prime_matrix,
                                     s_pairing, t_map, twistable_triples,
                                     twisted_reduce, has_fork_string)
from bdcohomology.errors import BlockHypothesisViolated, NotTwistedCocycle
from bdcohomology.field import (BASE_TOWER, ensure_fourth_root_h,
                                ensure_sqrt_h, sigma0)
from bdcohomology.liealg import LieAlgebra
from bdcohomology.linalg import Matrix, diag, eye
from bdcohomology.scalars import GaussRat
from bdcohomology.triples import BDTriple, enumerate_triples

from cocycle_probes import (nontwisted_probe, rand_block_instance,
                            rand_group_element, rand_monomial,
                            twisted_datum)

ALL_RANKS = [("B", 2), ("B", 3), ("B", 4), ("B", 5),
             ("C", 2), ("C", 3), ("C", 4), ("C", 5),
             ("D", 3), ("D", 4), ("D", 5)]
SMALL_RANKS = [("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 3), ("D", 4)]


def _alg(series, n):
    return LieAlgebra(series, n)


def _dj(alg):
    return BDTriple(alg, {})


def _datum_tower():
    return ensure_sqrt_h(BASE_TOWER)


# ---------------------------------------------------------------------------
# S and J
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("series,n", ALL_RANKS)
def test_sigma0_j_is_j_times_s(series, n):
    alg = _alg(series, n)
    jm, t = j_matrix(alg)
    s0 = sigma0(t)
    sp = lift_matrix(s_prime_matrix(alg), t)
    assert jm.map(s0.apply) == jm * sp
    if series != "C":
        assert s_prime_matrix(alg) == s_matrix(alg)


@pytest.mark.parametrize("series,n", ALL_RANKS)
def test_s_in_group_and_squares(series, n):
    alg = _alg(series, n)
    s = s_matrix(alg)
    m = alg.size
    ident = eye(m, Q(1))
    if series == "C":
        assert s * s == -ident
    else:
        assert s * s == ident
    t = BASE_TOWER
    assert alg.group_contains(lift_matrix(s, t))


@pytest.mark.parametrize("series,n", [("B", 2), ("B", 3), ("B", 4),
                                      ("D", 3), ("D", 4), ("D", 5)])
def test_j_determinant_stays_semantic(series, n):
    # needed so the group completion never has to divide by sqrt(h)
    alg = _alg(series, n)
    jm, t = j_matrix(alg)
    assert jm.det().in_semantic_base()


def test_s_matrix_displayed_examples():
    # C_2: antidiagonal (-1, -1, 1, 1)
    s = s_matrix(_alg("C", 2))
    assert s == Matrix([[0, 0, 0, -1], [0, 0, -1, 0],
                        [0, 1, 0, 0], [1, 0, 0, 0]]).map(Q)
    # D_3: antidiagonal units around a central 2x2 identity block
    s = s_matrix(_alg("D", 3))
    m = 6
    for i in range(m):
        for j in range(m):
            if (i, j) in ((2, 2), (3, 3)):
                assert s[i, j] == 1
            elif i + j == m - 1 and i not in (2, 3):
                assert s[i, j] == 1
            else:
                assert s[i, j] == 0
    # B_2: plain antidiagonal ones
    s = s_matrix(_alg("B", 2))
    assert all(s[i, 4 - i] == 1 for i in range(5))
    assert sum(1 for i in range(5) for j in range(5) if s[i, j]) == 5


def test_j_matrix_even_pattern():
    # D_4 carries the unrestricted half-integral pattern
    alg = _alg("D", 4)
    jm, t = j_matrix(alg)
    rh = t.gen_el("r2h")
    m = alg.size
    for k in range(4):
        assert jm[k, k] == t.one() and jm[k, m - 1 - k] == t.one()
    for k in range(4, 8):
        assert jm[k, k] == -rh and jm[k, m - 1 - k] == rh
    # odd D wraps the next-lower pattern around a central identity block
    alg = _alg("D", 3)
    jm, t = j_matrix(alg)
    assert jm[2, 2] == t.one() and jm[3, 3] == t.one()
    assert jm[2, 3] == t.zero() and jm[3, 2] == t.zero()
    sub = jm.sub([0, 1, 4, 5], [0, 1, 4, 5])
    rh = t.gen_el("r2h")
    assert sub == Matrix([[t.one(), t.zero(), t.zero(), t.one()],
                          [t.zero(), t.one(), t.one(), t.zero()],
                          [t.zero(), rh, -rh, t.zero()],
                          [rh, t.zero(), t.zero(), -rh]])


def test_j_matrix_odd_b_center():
    # even B keeps a plain 1 in the center, odd B scales it by sqrt(h)
    jm, t = j_matrix(_alg("B", 2))
    assert jm[2, 2] == t.one()
    jm, t = j_matrix(_alg("B", 3))
    assert jm[3, 3] == t.gen_el("r2h")


# ---------------------------------------------------------------------------
# the twist companion T
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("series,n", SMALL_RANKS)
def test_t_map_entrywise_formula(series, n):
    # T(D) = diag(eps_j sigma0(d_j) / d_{p(j)}) with p the S-pairing and
    # eps = +1 below the middle, -1 above for the symplectic series
    alg = _alg(series, n)
    rng = random.Random(113 + n)
    t = _datum_tower()
    s0 = sigma0(t)
    m = alg.size
    pr = s_pairing(alg)
    d = [rand_monomial(t, rng) for _ in range(m)]
    tm = t_map(alg, d, t)
    assert tm.is_diagonal()
    for j in range(m):
        eps = 1
        if series == "C":
            eps = 1 if j < n else -1
        assert tm[j, j] == eps * s0.apply(d[j]) / d[pr[j]]


@pytest.mark.parametrize("series,n", SMALL_RANKS)
def test_ker_t_from_norm_pairing(series, n):
    # sigma0-paired entries (with semantic values at the fixed points and 1
    # at the B center) are exactly the kernel relations for B and D
    alg = _alg(series, n)
    rng = random.Random(517 + n)
    t = _datum_tower()
    s0 = sigma0(t)
    m = alg.size
    fixed = set(s_fixed_points(alg))
    d = [None] * m
    for j in range(m // 2):
        if j in fixed:
            d[j] = rand_monomial(t, rng, half=False)
            d[m - 1 - j] = rand_monomial(t, rng, half=False)
            continue
        d[j] = rand_monomial(t, rng)
        d[m - 1 - j] = s0.apply(d[j])
    if series == "B":
        d[n] = t.one()
    tm = t_map(alg, d, t)
    if series == "C":
        assert tm != eye(m, t.one())
    else:
        assert tm == eye(m, t.one())


def test_ker_t_empty_for_symplectic():
    # T_j * sigma0(T_{m-1-j}) = -1 identically, so T(D) = I has no solution
    alg = _alg("C", 3)
    rng = random.Random(229)
    t = _datum_tower()
    s0 = sigma0(t)
    m = alg.size
    for _ in range(5):
        d = [rand_monomial(t, rng) for _ in range(m)]
        tm = t_map(alg, d, t)
        for j in range(m // 2):
            prod = tm[j, j] * s0.apply(tm[m - 1 - j, m - 1 - j])
            assert prod == -t.one()


@pytest.mark.parametrize("series,n", SMALL_RANKS)
def test_t_of_admissible_datum_lands_in_group(series, n):
    alg = _alg(series, n)
    tr = _dj(alg)
    rng = random.Random(311 + 7 * n)
    for _ in range(5):
        t = _datum_tower()
        d, t = twisted_datum(alg, tr, rng, t)
        tm = t_map(alg, d, t)
        assert alg.group_contains(tm)
        assert in_centralizer(alg, tr, tm)


def test_t_identity_datum():
    for series, n in [("B", 2), ("B", 3), ("D", 3), ("D", 4)]:
        alg = _alg(series, n)
        t = _datum_tower()
        ones = [t.one()] * alg.size
        assert t_map(alg, ones, t) == eye(alg.size, t.one())
        assert in_z(alg, ones, _dj(alg), t)
    # symplectic pair products must carry sqrt(h): the identity is not
    # admissible there, and the standard representative maps off the identity
    alg = _alg("C", 2)
    t = _datum_tower()
    ones = [t.one()] * 4
    assert not in_z(alg, ones, _dj(alg), t)
    rh = t.gen_el("r2h")
    rep = [rh, rh, t.one(), t.one()]
    assert in_z(alg, rep, _dj(alg), t)
    tm = t_map(alg, rep, t)
    assert tm != eye(4, t.one())
    assert in_centralizer(alg, _dj(alg), tm)


def test_fourth_root_element():
    # the quarter-power element diag(1, .., r4h, 1/r4h, .., 1) at the two
    # middle slots: admissible for D with twist companion in the torus but
    # never in the kernel under the canonical lift sigma0(r4h) = i*r4h
    t = ensure_fourth_root_h(BASE_TOWER)
    s0 = sigma0(t)
    r4 = t.gen_el("r4h")
    assert s0.apply(r4) == t.el(GaussRat(0, 1)) * r4
    for series, n, admissible in [("D", 4, True), ("D", 5, True),
                                  ("B", 3, False), ("C", 2, False)]:
        alg = _alg(series, n)
        d = [t.one()] * alg.size
        d[n - 1] = r4
        d[n] = r4.inv()
        tr = _dj(alg)
        assert in_z(alg, d, tr, t) == admissible
        tm = t_map(alg, d, t)
        assert tm != eye(alg.size, t.one())
        if admissible:
            assert in_centralizer(alg, tr, tm)
    # D_5: T(P) = diag(1, .., i, -i, .., 1) exactly
    alg = _alg("D", 5)
    d = [t.one()] * 10
    d[4], d[5] = r4, r4.inv()
    tm = t_map(alg, d, t)
    i = t.el(GaussRat(0, 1))
    for j in range(10):
        want = i if j == 4 else (-i if j == 5 else t.one())
        assert tm[j, j] == want


# ---------------------------------------------------------------------------
# twistability
# ---------------------------------------------------------------------------


def test_twistable_lists():
    for series, n in [("B", 2), ("B", 3), ("B", 4), ("C", 2), ("C", 3),
                      ("C", 4), ("D", 4)]:
        alg = _alg(series, n)
        tws = twistable_triples(alg)
        assert len(tws) == 1 and tws[0].is_empty()
    # odd even-orthogonal ranks add the four fork families
    alg = _alg("D", 3)
    maps = sorted(tuple(sorted(tr.tau_map.items()))
                  for tr in twistable_triples(alg))
    assert maps == sorted([(), ((1, 2),), ((2, 1),),
                           ((0, 2), (1, 0)), ((0, 1), (2, 0))])
    alg = _alg("D", 5)
    tws = twistable_triples(alg)
    assert sum(1 for tr in tws if tr.is_empty()) == 1
    fams = [dict(tr.tau_map) for tr in tws if not tr.is_empty()]
    assert len(fams) == 8
    for fam in fams:
        if len(fam) == 1:
            assert fam in ({3: 4}, {4: 3})
        else:
            (k,) = [k for k in fam if k < 3]
            assert fam in ({k: 4, 3: k}, {k: 3, 4: k})


@pytest.mark.parametrize("series,n", [("B", 2), ("B", 3), ("C", 2), ("C", 3),
                                      ("D", 3)])
def test_ads_identity_matches_twistability(series, n):
    alg = _alg(series, n)
    for tr in enumerate_triples(alg):
        assert check_r21_ads(alg, tr) == is_twistable(alg, tr)


def test_ads_identity_examples():
    # DJ satisfies Ad_S r = r21 in every series
    for series, n in SMALL_RANKS:
        assert check_r21_ads(_alg(series, n), _dj(_alg(series, n)))
    # the D_5 tip family does, the low A-type string does not
    alg = _alg("D", 5)
    assert check_r21_ads(alg, BDTriple(alg, {3: 4}))
    assert not check_r21_ads(alg, BDTriple(alg, {0: 1}))


# ---------------------------------------------------------------------------
# block decomposition
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("series,n", [("B", 2), ("C", 2), ("D", 3), ("D", 4)])
def test_block_decompose_reassembles(series, n):
    alg = _alg(series, n)
    rng = random.Random(1009 + n)
    t = _datum_tower()
    for _ in range(5):
        x, blocks = rand_block_instance(alg, rng, t)
        qm, km = block_decompose(x, blocks, t)
        assert qm * km == x
        owner = {i: k for k, b in enumerate(blocks) for i in b}
        for i in range(alg.size):
            for j in range(alg.size):
                if km[i, j]:
                    assert owner[i] == owner[j]
        for row in qm.rows:
            for e in row:
                assert e.in_semantic_base()


def test_block_decompose_rejects_crossing_support():
    t = _datum_tower()
    rh = t.gen_el("r2h")
    x = Matrix([[t.one(), rh], [t.zero(), t.one()]])
    with pytest.raises(BlockHypothesisViolated):
        block_decompose(x, [(0,), (1,)], t)


# ---------------------------------------------------------------------------
# completion and the R*J*D normal form
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("series,n", SMALL_RANKS)
def test_complete_decompose_roundtrip(series, n):
    alg = _alg(series, n)
    tr = _dj(alg)
    rng = random.Random(4099 + 13 * n)
    for _ in range(4):
        t = _datum_tower()
        d, t = twisted_datum(alg, tr, rng, t)
        r, t = complete_to_group(alg, d, t)
        jm, t = j_matrix(alg, t)
        x = r * jm * diag([t.el(e) for e in d])
        assert alg.group_contains(x)
        assert is_twisted_cocycle(alg, tr, x)
        r2, dv, t2 = decompose_rjd(alg, tr, x)
        jm2, t2 = j_matrix(alg, t2)
        assert lift_matrix(x, t2) == lift_matrix(r2, t2) * jm2 * diag(
            [t2.el(e) for e in dv])
        assert in_z(alg, dv, tr, t2)


def test_decompose_quarter_power_datum():
    # data with fourth roots of h still decompose and classify
    for series, n in [("C", 2), ("D", 3)]:
        alg = _alg(series, n)
        tr = _dj(alg)
        t = ensure_fourth_root_h(BASE_TOWER)
        r4 = t.gen_el("r4h")
        d = [t.one()] * alg.size
        if series == "C":
            rh = t.gen_el("r2h")
            d = [r4, rh, t.one(), rh / r4]
        else:
            d[0], d[alg.size - 1] = r4, t.hbar() / r4
        assert in_z(alg, d, tr, t)
        r, t = complete_to_group(alg, d, t)
        jm, t = j_matrix(alg, t)
        x = r * jm * diag([t.el(e) for e in d])
        assert is_twisted_cocycle(alg, tr, x)
        idx, label, q, c, tw = twisted_reduce(alg, tr, x)
        assert idx == 0


def test_decompose_rejects_plain_group_element():
    alg = _alg("D", 3)
    tr = _dj(alg)
    t = _datum_tower()
    rng = random.Random(77)
    x = rand_group_element(alg, rng, t)
    # over the base field sigma0 acts trivially, so S X^-1 sigma0(X) = S,
    # which is not a torus element
    with pytest.raises(NotTwistedCocycle):
        decompose_rjd(alg, tr, x)


# ---------------------------------------------------------------------------
# classification tables
# ---------------------------------------------------------------------------

NONTWISTED_TABLE = {
    ("B", 2): {1: 1}, ("B", 3): {1: 3}, ("B", 4): {1: 9},
    ("C", 2): {1: 1}, ("C", 3): {1: 3}, ("C", 4): {1: 9},
    ("D", 3): {1: 5, 2: 4}, ("D", 4): {1: 15, 2: 10},
    ("D", 5): {1: 73, 2: 28},
}


@pytest.mark.parametrize("series,n", sorted(NONTWISTED_TABLE))
def test_nontwisted_table(series, n):
    alg = _alg(series, n)
    got: dict = {}
    for tr in enumerate_triples(alg):
        cs = classify_nontwisted(alg, tr)
        got[cs.cardinality] = got.get(cs.cardinality, 0) + 1
        split = alg.series == "D" and has_fork_string(tr)
        assert cs.cardinality == (2 if split else 1)
    assert got == NONTWISTED_TABLE[(series, n)]


@pytest.mark.parametrize("series,n", [("B", 2), ("B", 3), ("C", 2), ("C", 3),
                                      ("D", 3), ("D", 4)])
def test_twisted_table(series, n):
    alg = _alg(series, n)
    for tr in enumerate_triples(alg):
        cs = classify_twisted(alg, tr)
        if not is_twistable(alg, tr):
            assert cs.cardinality == 0 and cs.describe() == "empty"
        elif tr.is_empty():
            assert cs.cardinality == 1
            assert cs.labels == (("hbar",) if series == "C" else ("one",))
        else:
            assert cs.cardinality == 2
            assert cs.labels == ("one", "hbar")
        for cls in cs.classes:
            assert is_twisted_cocycle(alg, tr, cls.representative)


def test_twisted_table_d5():
    alg = _alg("D", 5)
    counts = {0: 0, 1: 0, 2: 0}
    for tr in twistable_triples(alg):
        cs = classify_twisted(alg, tr)
        counts[cs.cardinality] += 1
    assert counts == {0: 0, 1: 1, 2: 8}


# ---------------------------------------------------------------------------
# probe soundness
# ---------------------------------------------------------------------------


def test_nontwisted_probes_split_case():
    alg = _alg("D", 4)
    rng = random.Random(31)
    split = [tr for tr in enumerate_triples(alg) if has_fork_string(tr)]
    assert len(split) == 10
    for tr in split[:4]:
        for _ in range(4):
            t = _datum_tower()
            x, t, parity = nontwisted_probe(alg, tr, rng, t)
            idx, label, q, c, tw = nontwisted_reduce(alg, tr, x)
            assert (idx, label) == ((1, "hbar") if parity else (0, "one"))
            xr = lift_matrix(x, tw)
            rep = classify_nontwisted(alg, tr).classes[idx].representative
            assert xr == q * lift_matrix(rep, tw) * c


def test_nontwisted_probes_nonsplit_stay_trivial():
    alg = _alg("D", 4)
    rng = random.Random(43)
    plain = [tr for tr in enumerate_triples(alg)
             if not has_fork_string(tr) and tr.gamma1]
    for tr in plain[:4]:
        for _ in range(3):
            t = _datum_tower()
            x, t, _parity = nontwisted_probe(alg, tr, rng, t)
            idx, label, q, c, tw = nontwisted_reduce(alg, tr, x)
            assert (idx, label) == (0, "one")


@pytest.mark.parametrize("series,n", [("B", 2), ("B", 3), ("C", 2), ("C", 3),
                                      ("D", 3), ("D", 4)])
def test_twisted_probes_dj(series, n):
    alg = _alg(series, n)
    tr = _dj(alg)
    rng = random.Random(91 + n)
    for _ in range(3):
        t = _datum_tower()
        d, t = twisted_datum(alg, tr, rng, t)
        r, t = complete_to_group(alg, d, t)
        jm, t = j_matrix(alg, t)
        x = r * jm * diag([t.el(e) for e in d])
        idx, label, q, c, tw = twisted_reduce(alg, tr, x)
        assert idx == 0
        assert label == ("hbar" if series == "C" else "one")


def test_twisted_probes_families():
    alg = _alg("D", 3)
    rng = random.Random(97)
    seen: dict = {}
    for tr in twistable_triples(alg):
        if tr.is_empty():
            continue
        for _ in range(4):
            t = _datum_tower()
            d, t = twisted_datum(alg, tr, rng, t)
            r, t = complete_to_group(alg, d, t)
            jm, t = j_matrix(alg, t)
            x = r * jm * diag([t.el(e) for e in d])
            assert is_twisted_cocycle(alg, tr, x)
            idx, label, q, c, tw = twisted_reduce(alg, tr, x)
            vmid = t.el(d[alg.rank - 1]).valuation()
            want = "one" if vmid.denominator == 1 else "hbar"
            assert label == want
            seen.setdefault(tr.key(), set()).add(label)
    # both classes get hit across the samples of at least one family
    assert any(v == {"one", "hbar"} for v in seen.values())


def test_family_datum_needs_extra_relation():
    # for a joined family a generic admissible diagonal fails the twisted
    # condition; the probe generator solves the missing relation
    alg = _alg("D", 3)
    tr = BDTriple(alg, {0: 2, 1: 0})
    rng = random.Random(53)
    rejected = 0
    for _ in range(6):
        t = _datum_tower()
        d, t = twisted_datum(alg, _dj(alg), rng, t)
        if not in_z(alg, d, tr, t):
            continue
        tm = t_map(alg, d, t)
        if not in_centralizer(alg, tr, tm):
            rejected += 1
    assert rejected > 0


# ---------------------------------------------------------------------------
# equivalence
# ---------------------------------------------------------------------------


def test_cocycles_equivalent_witness_and_symmetry():
    alg = _alg("D", 4)
    tr = next(t for t in enumerate_triples(alg) if has_fork_string(t))
    rng = random.Random(149)
    by_parity: dict = {0: [], 1: []}
    while not (by_parity[0] and by_parity[1]):
        t = _datum_tower()
        x, t, parity = nontwisted_probe(alg, tr, rng, t)
        by_parity[parity].append(x)
    x0, x1 = by_parity[0][0], by_parity[1][0]
    same, wit = cocycles_equivalent(alg, tr, x0, x0)
    assert same and wit is not None
    cross, wit = cocycles_equivalent(alg, tr, x0, x1)
    assert not cross and wit is None
    cross, wit = cocycles_equivalent(alg, tr, x1, x0)
    assert not cross


def test_twisted_equivalence_cross_class():
    alg = _alg("D", 3)
    tr = BDTriple(alg, {1: 2})
    cs = classify_twisted(alg, tr)
    assert cs.cardinality == 2
    r0, r1 = cs.classes[0].representative, cs.classes[1].representative
    same, wit = cocycles_equivalent(alg, tr, r0, r0, kind="twisted")
    assert same
    q, c = wit
    assert in_centralizer(alg, tr, c)
    cross, wit = cocycles_equivalent(alg, tr, r0, r1, kind="twisted")
    assert not cross and wit is None
