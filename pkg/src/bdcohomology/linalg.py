"""Small exact matrices over any of the package's scalar types.

Entries may be Fraction, GaussRat, RatFunc or FieldElement; the algorithms only
use ring operations plus exact division by nonzero entries (all these types are
fields).  Pivot selection is "first nonzero", so everything is deterministic.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldError
from .scalars import GR_ONE, GaussRat, Poly


class Matrix:
    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise FieldError("ragged matrix")
        self.rows = rows

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.nrows != other.nrows or self.ncols != other.ncols:
            return False
        return all(a == b for ra, rb in zip(self.rows, other.rows)
                   for a, b in zip(ra, rb))

    def __add__(self, other):
        return Matrix(tuple(tuple(a + b for a, b in zip(ra, rb))
                            for ra, rb in zip(self.rows, other.rows)))

    def __sub__(self, other):
        return Matrix(tuple(tuple(a - b for a, b in zip(ra, rb))
                            for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self):
        return Matrix(tuple(tuple(-a for a in r) for r in self.rows))

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise FieldError("matrix dimensions do not match")
            cols = tuple(zip(*other.rows))
            return Matrix(tuple(tuple(_dot(r, c) for c in cols)
                                for r in self.rows))
        return Matrix(tuple(tuple(a * other for a in r) for r in self.rows))

    def __rmul__(self, other):
        return Matrix(tuple(tuple(other * a for a in r) for r in self.rows))

    def transpose(self) -> "Matrix":
        return Matrix(tuple(zip(*self.rows)))

    def map(self, fn) -> "Matrix":
        return Matrix(tuple(tuple(fn(a) for a in r) for r in self.rows))

    def trace(self):
        return _sum(self.rows[i][i] for i in range(self.nrows))

    def sub(self, rows, cols) -> "Matrix":
        return Matrix(tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def is_diagonal(self) -> bool:
        return all(not self.rows[i][j]
                   for i in range(self.nrows) for j in range(self.ncols) if i != j)

    def diagonal(self) -> tuple:
        return tuple(self.rows[i][i] for i in range(min(self.nrows, self.ncols)))

    def _one(self):
        for r in self.rows:
            for a in r:
                if a:
                    return a / a
        return Fraction(1)

    def det(self):
        n = self.nrows
        if n != self.ncols:
            raise FieldError("determinant of a non-square matrix")
        one = self._one()
        rows = [list(r) for r in self.rows]
        det = one
        for c in range(n):
            p = next((r for r in range(c, n) if rows[r][c]), None)
            if p is None:
                return one - one
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                det = -det
            piv = rows[c][c]
            det = det * piv
            pinv = one / piv
            for r in range(c + 1, n):
                if rows[r][c]:
                    f = rows[r][c] * pinv
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
        return det

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        one = self._one()
        rows = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            if r == len(rows):
                break
            p = next((k for k in range(r, len(rows)) if rows[k][c]), None)
            if p is None:
                continue
            rows[r], rows[p] = rows[p], rows[r]
            pinv = one / rows[r][c]
            rows[r] = [a * pinv for a in rows[r]]
            for k in range(len(rows)):
                if k != r and rows[k][c]:
                    f = rows[k][c]
                    rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
            pivots.append(c)
            r += 1
        return Matrix(rows), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[tuple]:
        """Basis of the right kernel, in reduced echelon convention."""
        one = self._one()
        zero = one - one
        red, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for f in free:
            v = [zero] * self.ncols
            v[f] = one
            for r, c in enumerate(pivots):
                v[c] = -red[r, f]
            basis.append(tuple(v))
        return basis

    def inv(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise FieldError("inverse of a non-square matrix")
        one = self._one()
        zero = one - one
        aug = Matrix(tuple(tuple(list(r) + [one if i == j else zero
                                            for j in range(n)])
                           for i, r in enumerate(self.rows)))
        red, pivots = aug.rref()
        if pivots[:n] != tuple(range(n)):
            raise FieldError("matrix is singular")
        return Matrix(tuple(tuple(red[i, n + j] for j in range(n))
                            for i in range(n)))

    def solve(self, rhs: "Matrix") -> "Matrix":
        return self.inv() * rhs

    def solve_particular(self, rhs: "Matrix") -> "Matrix | None":
        """One solution of self * x = rhs (free variables zero), or None."""
        aug, pivots = hcat(self, rhs).rref()
        n = self.ncols
        if any(p >= n for p in pivots):
            return None
        one = self._one()
        zero = one - one
        k = rhs.ncols
        x = [[zero] * k for _ in range(n)]
        for r, c in enumerate(pivots):
            for j in range(k):
                x[c][j] = aug[r, n + j]
        return Matrix(x)

    def __repr__(self):
        body = "\n ".join("[" + ", ".join(str(a) for a in r) + "]"
                          for r in self.rows)
        return f"Matrix[{self.nrows}x{self.ncols}](\n {body})"


def _dot(row, col):
    it = iter(a * b for a, b in zip(row, col))
    s = next(it)
    for t in it:
        s = s + t
    return s


def _sum(items):
    items = list(items)
    s = items[0]
    for t in items[1:]:
        s = s + t
    return s


def eye(n: int, one) -> Matrix:
    zero = one - one
    return Matrix(tuple(tuple(one if i == j else zero for j in range(n))
                        for i in range(n)))


def zeros(m: int, n: int, zero) -> Matrix:
    return Matrix(tuple(tuple(zero for _ in range(n)) for _ in range(m)))


def diag(entries) -> Matrix:
    entries = tuple(entries)
    one = next((e / e for e in entries if e), Fraction(1))
    zero = one - one
    n = len(entries)
    return Matrix(tuple(tuple(entries[i] if i == j else zero
                              for j in range(n)) for i in range(n)))


def hcat(*mats: Matrix) -> Matrix:
    rows = mats[0].nrows
    if any(m.nrows != rows for m in mats):
        raise FieldError("row counts differ")
    return Matrix(tuple(tuple(a for m in mats for a in m.rows[i])
                        for i in range(rows)))


def block_diag(*mats: Matrix) -> Matrix:
    one = Fraction(1)
    for m in mats:
        for r in m.rows:
            for a in r:
                if a:
                    one = a / a
                    break
    zero = one - one
    n = sum(m.ncols for m in mats)
    rows = []
    off = 0
    for m in mats:
        for r in m.rows:
            rows.append(tuple([zero] * off + list(r)
                              + [zero] * (n - off - m.ncols)))
        off += m.ncols
    return Matrix(rows)


def min_norm_solve(a: Matrix, b: Matrix) -> Matrix:
    """Minimum-norm solution of a consistent system a*x = b over Q.

    x = a^T y with (a a^T) y = b; valid because rank(a a^T) = rank(a) for
    real entries (do not use over Q(i), where rows can be isotropic).
    """
    y = (a * a.transpose()).solve_particular(b)
    if y is None:
        raise FieldError("normal equations are inconsistent")
    x = a.transpose() * y
    if a * x != b:
        raise FieldError("system has no solution")
    return x


# ---------------------------------------------------------------------------
# characteristic polynomial and semisimple part over Q(i)


def charpoly(m: Matrix) -> Poly:
    """det(x*I - m) as a Poly over Q(i), via Hessenberg reduction."""
    n = m.nrows
    if n != m.ncols:
        raise FieldError("characteristic polynomial of a non-square matrix")
    a = [[_to_gauss(m[i, j]) for j in range(n)] for i in range(n)]
    for c in range(n - 2):
        p = next((r for r in range(c + 1, n) if a[r][c]), None)
        if p is None:
            continue
        if p != c + 1:  # swap row and column together: a similarity
            a[c + 1], a[p] = a[p], a[c + 1]
            for r in range(n):
                a[r][c + 1], a[r][p] = a[r][p], a[r][c + 1]
        piv = a[c + 1][c].inv()
        for r in range(c + 2, n):
            if a[r][c]:
                f = a[r][c] * piv
                a[r] = [x - f * y for x, y in zip(a[r], a[c + 1])]
                for k in range(n):
                    a[k][c + 1] = a[k][c + 1] + f * a[k][r]
    # chi_k = (x - a_kk) chi_{k-1} - sum_m a_{k-m,k} (prod subdiagonals) chi_{k-m-1}
    chis = [Poly.const(1)]
    for k in range(1, n + 1):
        p = Poly((-a[k - 1][k - 1], GR_ONE)) * chis[k - 1]
        sub = GR_ONE
        for mm in range(1, k):
            sub = sub * a[k - mm][k - mm - 1]
            if not sub:
                break
            coef = a[k - mm - 1][k - 1] * sub
            if coef:
                p = p - coef * chis[k - mm - 1]
        chis.append(p)
    return chis[n]


def _to_gauss(x) -> GaussRat:
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussRat(x)
    raise FieldError(f"need numeric entries, got {type(x).__name__}")


def poly_eval_matrix(p: Poly, m: Matrix) -> Matrix:
    n = m.nrows
    mg = m.map(_to_gauss)
    out = zeros(n, n, GR_ONE - GR_ONE)
    for c in reversed(p.coeffs):
        out = out * mg + c * eye(n, GR_ONE)
    return out


def squarefree_part(p: Poly) -> Poly:
    return p.divmod(p.gcd(p.deriv()))[0].monic()


def is_semisimple(m: Matrix) -> bool:
    """Exact test: the squarefree part of the charpoly annihilates m."""
    g = squarefree_part(charpoly(m))
    n = m.nrows
    return poly_eval_matrix(g, m) == zeros(n, n, GR_ONE - GR_ONE)


def semisimple_part(m: Matrix) -> Matrix:
    """Jordan-Chevalley semisimple summand, by Newton iteration over Q(i)."""
    g = squarefree_part(charpoly(m))
    gp = g.deriv()
    s = m.map(_to_gauss)
    n = m.nrows
    zero = zeros(n, n, GR_ONE - GR_ONE)
    for _ in range(n.bit_length() + 2):
        gs = poly_eval_matrix(g, s)
        if gs == zero:
            return s
        s = s - poly_eval_matrix(gp, s).inv() * gs
    raise FieldError("semisimple-part iteration failed to stabilize")
