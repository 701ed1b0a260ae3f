"""Matrix realizations of the simple Lie algebras B_n, C_n, D_n.

The bilinear form is antidiagonal: all ones for the orthogonal series, and
+1/-1 split at the middle for the symplectic one.  With that choice the
diagonal matrices in the algebra form the Cartan subalgebra and the standard
epsilon-coordinates read off the diagonal directly.

Root vectors for simple roots are explicit matrix units; every other positive
root vector is defined once and for all as the bracket of a simple root vector
with a lower one (the first decomposition found, recorded in `parent`).  The
dual vectors f are rescaled transposes, so <e, f> = 1 under the trace form.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import LieAlgebraError
from .linalg import Matrix
from .scalars import Q

# ---------------------------------------------------------------------------
# sparse matrices over Q: {(row, col): Fraction}, zero entries absent

SparseMat = dict


def sp_unit(i: int, j: int, c=1) -> SparseMat:
    return {(i, j): Q(c)} if c else {}


def sp_add(a: SparseMat, b: SparseMat) -> SparseMat:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return out


def sp_scale(a: SparseMat, c) -> SparseMat:
    return {k: v * c for k, v in a.items()} if c else {}


def sp_sub(a: SparseMat, b: SparseMat) -> SparseMat:
    return sp_add(a, sp_scale(b, -1))


def sp_mul(a: SparseMat, b: SparseMat) -> SparseMat:
    by_row: dict = {}
    for (i, j), v in b.items():
        by_row.setdefault(i, []).append((j, v))
    out: SparseMat = {}
    for (i, j), v in a.items():
        for k, w in by_row.get(j, ()):
            key = (i, k)
            s = out.get(key, 0) + v * w
            if s:
                out[key] = s
            elif key in out:
                del out[key]
    return out


def sp_comm(a: SparseMat, b: SparseMat) -> SparseMat:
    return sp_sub(sp_mul(a, b), sp_mul(b, a))


def sp_transpose(a: SparseMat) -> SparseMat:
    return {(j, i): v for (i, j), v in a.items()}


def sp_trace_mul(a: SparseMat, b: SparseMat) -> Fraction:
    t = Q(0)
    for (i, j), v in a.items():
        w = b.get((j, i))
        if w:
            t += v * w
    return t


def sp_to_matrix(a: SparseMat, n: int, lift=None) -> Matrix:
    lift = lift or (lambda x: x)
    zero = lift(Q(0))
    rows = [[zero] * n for _ in range(n)]
    for (i, j), v in a.items():
        rows[i][j] = lift(v)
    return Matrix(rows)


# ---------------------------------------------------------------------------
# roots in epsilon coordinates (integer tuples of length rank)


def _eps(n: int, *terms) -> tuple:
    v = [0] * n
    for idx, c in terms:
        v[idx] += c
    return tuple(v)


def positive_roots(series: str, n: int) -> list[tuple]:
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            out.append(_eps(n, (i, 1), (j, -1)))
            out.append(_eps(n, (i, 1), (j, 1)))
    if series == "B":
        out.extend(_eps(n, (i, 1)) for i in range(n))
    elif series == "C":
        out.extend(_eps(n, (i, 2)) for i in range(n))
    elif series != "D":
        raise LieAlgebraError(f"unknown series {series!r}")
    return out


def simple_roots(series: str, n: int) -> list[tuple]:
    out = [_eps(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
    if series == "B":
        out.append(_eps(n, (n - 1, 1)))
    elif series == "C":
        out.append(_eps(n, (n - 1, 2)))
    elif series == "D":
        out.append(_eps(n, (n - 2, 1), (n - 1, 1)))
    else:
        raise LieAlgebraError(f"unknown series {series!r}")
    return out


def root_inner(a: tuple, b: tuple) -> Fraction:
    return Q(sum(x * y for x, y in zip(a, b)))


def root_add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def root_sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


class LieAlgebra:
    """One of B_n (so_{2n+1}), C_n (sp_{2n}), D_n (so_{2n}), n >= 2."""

    def __init__(self, series: str, rank: int):
        if series not in ("B", "C", "D"):
            raise LieAlgebraError(f"series must be B, C or D, not {series!r}")
        if rank < 2 or (series == "D" and rank < 3):
            raise LieAlgebraError(f"rank {rank} too small for series {series}")
        self.series = series
        self.rank = rank
        self.size = 2 * rank + 1 if series == "B" else 2 * rank
        self.simple = simple_roots(series, rank)
        self.positive = self._ordered_positive()
        self.e: dict[tuple, SparseMat] = {}
        self.f: dict[tuple, SparseMat] = {}
        self.parent: dict[tuple, tuple] = {}
        self._build_root_vectors()
        self.cartan = [sp_comm(self.e[a], self.f[a]) for a in self.simple]
        self._cartan_solve = Matrix(
            [[self.cartan[k].get((i, i), Q(0)) for k in range(rank)]
             for i in range(rank)]).inv()
        self._struct_cache: dict = {}
        self._gram = None
        self._gram_inv = None

    # -- form and membership -------------------------------------------------

    def form_sign(self, i: int) -> int:
        """Sign of the antidiagonal form at row i (0-based)."""
        if self.series == "C":
            return 1 if i < self.rank else -1
        return 1

    def form_sparse(self) -> SparseMat:
        m = self.size
        return {(i, m - 1 - i): Q(self.form_sign(i)) for i in range(m)}

    def form_matrix(self, tower=None) -> Matrix:
        lift = (lambda x: tower.el(x)) if tower is not None else None
        return sp_to_matrix(self.form_sparse(), self.size, lift)

    def contains(self, x: Matrix) -> bool:
        """Membership in the algebra: x*B + B*x^T = 0."""
        lift = lambda v: x[0, 0] * 0 + v  # noqa: E731  (match entry type)
        fb = sp_to_matrix(self.form_sparse(), self.size, lift)
        z = x * fb + fb * x.transpose()
        return not any(z[i, j]
                       for i in range(self.size) for j in range(self.size))

    def group_contains(self, x: Matrix, check_det: bool = True) -> bool:
        """Membership in G: the form is preserved, det = 1 for the orthogonal
        series (symplectic matrices have det 1 automatically)."""
        lift = lambda v: x[0, 0] * 0 + v  # noqa: E731
        fb = sp_to_matrix(self.form_sparse(), self.size, lift)
        if x.transpose() * fb * x != fb:
            return False
        if check_det and self.series in ("B", "D"):
            one = x[0, 0] * 0 + 1
            return x.det() == one
        return True

    # -- construction --------------------------------------------------------

    def _ordered_positive(self) -> list[tuple]:
        """Positive roots by height (in the simple-root lattice), then lex."""
        simple_mat = Matrix([[Q(c) for c in a] for a in
                             zip(*self.simple)])  # columns are simple roots
        inv = simple_mat.inv()
        def height(g):
            coeffs = inv * Matrix([[Q(c)] for c in g])
            return sum(coeffs[i, 0] for i in range(self.rank))
        roots = positive_roots(self.series, self.rank)
        return sorted(roots, key=lambda g: (height(g), g))

    def _simple_vector(self, k: int) -> SparseMat:
        n, m = self.rank, self.size
        i = k  # 0-based simple index
        if self.series == "B":
            return sp_add(sp_unit(i, i + 1), sp_unit(2 * n - i - 1, 2 * n - i, -1))
        if i < n - 1:
            return sp_add(sp_unit(i, i + 1), sp_unit(2 * n - i - 2, 2 * n - i - 1, -1))
        if self.series == "C":
            return sp_unit(n - 1, n)
        return sp_add(sp_unit(n - 2, n), sp_unit(n - 1, n + 1, -1))

    def _build_root_vectors(self):
        for k, a in enumerate(self.simple):
            self.e[a] = self._simple_vector(k)
        pos = set(self.positive)
        for g in self.positive:
            if g in self.e:
                continue
            for k, a in enumerate(self.simple):
                b = root_sub(g, a)
                if b in pos and b in self.e:
                    v = sp_comm(self.e[a], self.e[b])
                    if v:
                        self.e[g] = v
                        self.parent[g] = (k, b)
                        break
            else:
                raise LieAlgebraError(f"no decomposition for root {g}")
        for g in self.positive:
            t = sp_transpose(self.e[g])
            self.f[g] = sp_scale(t, 1 / sp_trace_mul(self.e[g], t))
        for g in self.positive:
            if self.weight_of(self.e[g]) != g:
                raise LieAlgebraError(f"weight mismatch at {g}")

    def weight_of(self, x: SparseMat) -> tuple:
        """epsilon-weight of an ad-eigenvector for the diagonal torus."""
        n, m = self.rank, self.size
        def coord(idx):
            v = [0] * n
            if idx < n:
                v[idx] = 1
            elif m - 1 - idx < n and idx >= m - n:
                v[m - 1 - idx] = -1
            return tuple(v)
        wts = {root_sub(coord(i), coord(j)) for (i, j) in x}
        if len(wts) != 1:
            raise LieAlgebraError("not a weight vector")
        return wts.pop()

    # -- basis, pairing, coordinates ----------------------------------------

    def basis_labels(self) -> list[tuple]:
        out = [("e", g) for g in self.positive]
        out += [("h", k) for k in range(self.rank)]
        out += [("f", g) for g in self.positive]
        return out

    def basis_mat(self, label) -> SparseMat:
        kind, key = label
        if kind == "e":
            return self.e[key]
        if kind == "f":
            return self.f[key]
        return self.cartan[key]

    @property
    def dim(self) -> int:
        return 2 * len(self.positive) + self.rank

    def label_weight(self, label) -> tuple:
        kind, key = label
        if kind == "e":
            return key
        if kind == "f":
            return tuple(-c for c in key)
        return (0,) * self.rank

    def cartan_coords(self, x: SparseMat) -> list[Fraction]:
        """Coordinates of the diagonal part in the h_k basis."""
        col = Matrix([[x.get((i, i), Q(0))] for i in range(self.rank)])
        sol = self._cartan_solve * col
        return [sol[k, 0] for k in range(self.rank)]

    def coords(self, x: SparseMat) -> dict:
        """Coordinates in the basis e/h/f, via the trace-form pairing."""
        out = {}
        for g in self.positive:
            ce = sp_trace_mul(x, self.f[g])
            if ce:
                out[("e", g)] = ce
            cf = sp_trace_mul(x, self.e[g])
            if cf:
                out[("f", g)] = cf
        for k, c in enumerate(self.cartan_coords(x)):
            if c:
                out[("h", k)] = c
        return out

    def from_coords(self, coords: dict) -> SparseMat:
        x: SparseMat = {}
        for label, c in coords.items():
            x = sp_add(x, sp_scale(self.basis_mat(label), c))
        return x

    def gram(self) -> Matrix:
        if self._gram is None:
            labels = self.basis_labels()
            mats = [self.basis_mat(l) for l in labels]
            self._gram = Matrix([[sp_trace_mul(a, b) for b in mats]
                                 for a in mats])
        return self._gram

    def gram_inv(self) -> Matrix:
        if self._gram_inv is None:
            self._gram_inv = self.gram().inv()
        return self._gram_inv

    def struct(self, la, lb) -> dict:
        """Coordinates of [x_la, x_lb]; cached."""
        key = (la, lb)
        if key not in self._struct_cache:
            self._struct_cache[key] = self.coords(
                sp_comm(self.basis_mat(la), self.basis_mat(lb)))
        return self._struct_cache[key]

    # -- torus ---------------------------------------------------------------

    def torus_matrix(self, values: list, tower) -> Matrix:
        """diag(d_1..d_n, [1], d_n^-1..d_1^-1) as a group element."""
        d = [tower.el(v) for v in values]
        if len(d) != self.rank:
            raise LieAlgebraError("torus needs one value per rank")
        entries = list(d)
        if self.series == "B":
            entries.append(tower.one())
        entries.extend(x.inv() for x in reversed(d))
        rows = [[(entries[i] if i == j else tower.zero())
                 for j in range(self.size)] for i in range(self.size)]
        return Matrix(rows)

    def simple_character_values(self, values: list, tower) -> list:
        """Values of the simple-root characters on torus_matrix(values)."""
        d = [tower.el(v) for v in values]
        n = self.rank
        out = [d[i] / d[i + 1] for i in range(n - 1)]
        if self.series == "B":
            out.append(d[n - 1])
        elif self.series == "C":
            out.append(d[n - 1] * d[n - 1])
        else:
            out.append(d[n - 2] * d[n - 1])
        return out

    def __repr__(self):
        return f"LieAlgebra({self.series}{self.rank})"
