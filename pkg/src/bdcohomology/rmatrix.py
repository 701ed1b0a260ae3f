"""Construction and verification of Belavin-Drinfeld r-matrices.

An r-matrix is stored as a coefficient dictionary over ordered pairs of basis
labels, all coefficients exact rationals:

    r = r0 + sum_{gamma > 0} f_gamma (x) e_gamma
           + sum_{alpha, k >= 1} f_alpha ^ tilde-tau^k(e_alpha)

The Cartan part r0 is the canonical one: half the Cartan Casimir plus the
minimum-norm antisymmetric correction solving the compatibility system of the
triple, so rebuilding always gives the identical tensor.  tilde-tau is the
lift of tau to root vectors through each vector's recorded bracket
decomposition.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import LieAlgebraError
from .liealg import LieAlgebra, sp_comm
from .linalg import (Matrix, charpoly, eye, min_norm_solve, poly_eval_matrix,
                     squarefree_part, zeros)
from .scalars import GR_ONE, GaussRat, Poly, Q
from .triples import BDTriple

# ---------------------------------------------------------------------------
# Cartan part


def cartan_gram(alg: LieAlgebra) -> Matrix:
    return Matrix([[alg.gram()[a, b] for b in _h_slots(alg)]
                   for a in _h_slots(alg)])


def _h_slots(alg: LieAlgebra) -> range:
    npos = len(alg.positive)
    return range(npos, npos + alg.rank)


def root_functional(alg: LieAlgebra, root: tuple) -> tuple:
    """(root(h_1), ..., root(h_n)) read off the diagonals of the h_k."""
    out = []
    for k in range(alg.rank):
        h = alg.cartan[k]
        out.append(sum(Q(c) * h.get((i, i), Q(0)) for i, c in enumerate(root)))
    return tuple(out)


def build_r0(triple: BDTriple) -> Matrix:
    """Coefficients of r0 in the h (x) h basis: ghalf + antisymmetric part.

    The correction solves, for each simple alpha in Gamma1,
        (tau(alpha) (x) id + id (x) alpha) r0 = 0,
    picked out canonically as the minimum-norm solution.
    """
    alg = triple.alg
    n = alg.rank
    ghalf = cartan_gram(alg).inv() * Q(1, 2)
    if triple.is_empty():
        return ghalf
    unknowns = [(a, b) for a in range(n) for b in range(a + 1, n)]
    rows, rhs = [], []
    for i in triple.gamma1:
        la = root_functional(alg, alg.simple[i])
        lt = root_functional(alg, alg.simple[triple.tau_map[i]])
        # (lt - la) P = -(lt + la) ghalf, P antisymmetric, row by row
        base = [sum((lt[a] + la[a]) * ghalf[a, b] for a in range(n))
                for b in range(n)]
        for b in range(n):
            row = [Q(0)] * len(unknowns)
            for u, (x, y) in enumerate(unknowns):
                if y == b:
                    row[u] += lt[x] - la[x]
                if x == b:
                    row[u] -= lt[y] - la[y]
            rows.append(row)
            rhs.append([-base[b]])
    sol = min_norm_solve(Matrix(rows), Matrix(rhs))
    p = [[Q(0)] * n for _ in range(n)]
    for u, (x, y) in enumerate(unknowns):
        p[x][y] = sol[u, 0]
        p[y][x] = -sol[u, 0]
    return ghalf + Matrix(p)


# ---------------------------------------------------------------------------
# tau-lift on root vectors


class TauLift:
    """tilde-tau through recorded bracket decompositions; caches N-factors."""

    def __init__(self, triple: BDTriple):
        self.triple = triple
        self.alg = triple.alg
        self._once: dict[tuple, tuple] = {}

    def once(self, root: tuple) -> tuple[Fraction, tuple]:
        """tilde-tau(e_root) = c * e_{tau(root)}; returns (c, tau(root))."""
        if root not in self._once:
            alg, tr = self.alg, self.triple
            img_root = tr.tau_root(root)
            if root in self._simple_index():
                c = Q(1)
            else:
                k, beta = alg.parent[root]
                if k not in tr.tau_map:
                    raise LieAlgebraError("decomposition leaves Gamma1")
                cb, beta_img = self.once(beta)
                v = sp_comm(alg.e[alg.simple[tr.tau_map[k]]], alg.e[beta_img])
                coords = alg.coords(v)
                c = cb * coords[("e", img_root)]
                if set(coords) != {("e", img_root)}:
                    raise LieAlgebraError("lift left the expected root space")
            self._once[root] = (c, img_root)
        return self._once[root]

    def _simple_index(self):
        return set(self.alg.simple)

    def power(self, root: tuple, k: int) -> tuple[Fraction, tuple]:
        c, cur = Q(1), root
        for _ in range(k):
            ck, cur = self.once(cur)
            c *= ck
        return c, cur


# ---------------------------------------------------------------------------
# the full tensor


class RMatrix:
    """Exact tensor in basis-label coordinates, tied to its triple."""

    def __init__(self, triple: BDTriple, coeffs: dict):
        self.triple = triple
        self.alg = triple.alg
        self.coeffs = {k: v for k, v in coeffs.items() if v}

    def r21(self) -> dict:
        return {(b, a): c for (a, b), c in self.coeffs.items()}

    def plus_r21(self) -> dict:
        out = dict(self.coeffs)
        for k, v in self.r21().items():
            s = out.get(k, Q(0)) + v
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return out

    def __eq__(self, other):
        return isinstance(other, RMatrix) and self.coeffs == other.coeffs


def build_r_matrix(triple: BDTriple) -> RMatrix:
    alg = triple.alg
    coeffs: dict = {}
    r0 = build_r0(triple)
    for a in range(alg.rank):
        for b in range(alg.rank):
            if r0[a, b]:
                coeffs[(("h", a), ("h", b))] = r0[a, b]
    for g in alg.positive:
        coeffs[(("f", g), ("e", g))] = Q(1)
    lift = TauLift(triple)
    for a, k, b in triple.wedge_pairs():
        c, img = lift.power(a, k)
        if img != b:
            raise LieAlgebraError("lift and root map disagree")
        _bump(coeffs, (("f", a), ("e", b)), c)
        _bump(coeffs, (("e", b), ("f", a)), -c)
    return RMatrix(triple, coeffs)


def _bump(d: dict, key, c):
    s = d.get(key, Q(0)) + c
    if s:
        d[key] = s
    elif key in d:
        del d[key]


def omega_coeffs(alg: LieAlgebra) -> dict:
    """The split Casimir: sum e (x) f + f (x) e + Cartan dual pairs."""
    out: dict = {}
    for g in alg.positive:
        out[(("e", g), ("f", g))] = Q(1)
        out[(("f", g), ("e", g))] = Q(1)
    ghi = cartan_gram(alg).inv()
    for a in range(alg.rank):
        for b in range(alg.rank):
            if ghi[a, b]:
                out[(("h", a), ("h", b))] = ghi[a, b]
    return out


def check_r_plus_r21_is_omega(rm: RMatrix) -> bool:
    return rm.plus_r21() == omega_coeffs(rm.alg)


# ---------------------------------------------------------------------------
# classical Yang-Baxter equation


def cybe_residual(rm: RMatrix) -> dict:
    """[[r, r]] = [r12, r13] + [r12, r23] + [r13, r23] in coordinates.

    Nonzero entries map (la, lb, lc) -> Fraction; the equation holds exactly
    when the result is empty.
    """
    alg = rm.alg
    out: dict = {}
    items = list(rm.coeffs.items())
    for (a1, b1), c1 in items:
        for (a2, b2), c2 in items:
            c = c1 * c2
            for lc, sc in alg.struct(a1, a2).items():
                _bump(out, (lc, b1, b2), c * sc)
            for lc, sc in alg.struct(b1, a2).items():
                _bump(out, (a1, lc, b2), c * sc)
            for lc, sc in alg.struct(b1, b2).items():
                _bump(out, (a1, a2, lc), c * sc)
    return out


def check_cybe(rm: RMatrix) -> bool:
    return not cybe_residual(rm)


# ---------------------------------------------------------------------------
# the operator Phi(r) and its spectrum


def phi_matrix(rm: RMatrix) -> Matrix:
    """Matrix of x -> (id (x) <x, .>)(r) on basis coordinates."""
    alg = rm.alg
    labels = alg.basis_labels()
    index = {l: k for k, l in enumerate(labels)}
    n = len(labels)
    g = alg.gram()
    m = [[Q(0)] * n for _ in range(n)]
    for (la, lb), c in rm.coeffs.items():
        a, b = index[la], index[lb]
        for col in range(n):
            if g[col, b]:
                m[a][col] += c * g[col, b]
    return Matrix(m)


def spectral_structure(m: Matrix, eigenvalues=(Q(0), Q(1, 2), Q(1))):
    """Verify m is semisimple with spectrum inside the given set; return
    {eigenvalue: multiplicity}, or None if the annihilator test fails."""
    n = m.nrows
    ann = Poly.const(1)
    for ev in eigenvalues:
        ann = ann * Poly((-ev, 1))
    if poly_eval_matrix(ann, m) != zeros(n, n, GR_ONE - GR_ONE):
        return None
    out = {}
    for ev in eigenvalues:
        shifted = m - eye(n, Q(1)) * ev
        out[ev] = n - shifted.rank()
    if sum(out.values()) != n:
        return None
    return out


def dj_spectral_check(alg: LieAlgebra) -> bool:
    """For the Drinfeld-Jimbo r-matrix: eigenvalue 0 on the positive part,
    1/2 on the Cartan, 1 on the negative part, all exactly."""
    rm = build_r_matrix(BDTriple(alg, {}))
    m = phi_matrix(rm)
    npos = len(alg.positive)
    spec = spectral_structure(m)
    if spec != {Q(0): npos, Q(1, 2): alg.rank, Q(1): npos}:
        return False
    labels = alg.basis_labels()
    evs = {"e": Q(0), "h": Q(1, 2), "f": Q(1)}
    for k, (kind, _) in enumerate(labels):
        col = [m[r, k] for r in range(len(labels))]
        expect = [evs[kind] if r == k else Q(0) for r in range(len(labels))]
        if col != expect:
            return False
    return True


def span_rref(vectors: list) -> Matrix:
    """Canonical (reduced echelon) row basis for the span of coordinate rows."""
    m = Matrix([list(v) for v in vectors])
    red, piv = m.rref()
    return Matrix([list(red.rows[i]) for i in range(len(piv))])


def eigenspace(m: Matrix, ev) -> list[tuple]:
    one = m[0, 0] ** 0
    return (m - eye(m.nrows, one).map(lambda x: x * ev)).nullspace()


def subspace_normalizer(alg: LieAlgebra, vectors: list) -> Matrix:
    """Canonical row basis of the normalizer {x : [x, V] <= V}."""
    labels = alg.basis_labels()
    nb = len(labels)
    index = {l: i for i, l in enumerate(labels)}
    vspan = span_rref(vectors)
    k = vspan.nrows
    full = [[Q(1) if i == j else Q(0) for j in range(nb)] for i in range(nb)]
    if k == 0 or k == nb:
        return span_rref(full)
    funcs = vspan.nullspace()
    rows = []
    for vi in range(k):
        w = vspan.rows[vi]
        brackets = []                   # coords of [y_a, v] for each basis a
        for la in labels:
            acc = {}
            for b, lb in enumerate(labels):
                if not w[b]:
                    continue
                for lc, cc in alg.struct(la, lb).items():
                    acc[lc] = acc.get(lc, Q(0)) + w[b] * cc
            brackets.append(acc)
        for ell in funcs:
            row = []
            for a in range(nb):
                s = Q(0)
                for lc, cc in brackets[a].items():
                    s += ell[index[lc]] * cc
                row.append(s)
            rows.append(row)
    return span_rref([list(v) for v in Matrix(rows).nullspace()])
