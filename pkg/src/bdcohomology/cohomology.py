"""Classification of torus-valued Galois cocycles for the orthogonal and
symplectic series over the Laurent model field.

Two flavours are implemented.

* Plain cocycles: X in G(L) with X^-1 sigma(X) in the centralizer torus of
  the r-matrix for every semantic automorphism sigma, classified up to
  X -> Q X C with Q over the base field and C in the centralizer.
* Twisted cocycles: the comparison against sqrt(h) -> -sqrt(h) carries an
  extra matrix S; every such cocycle factors as X = R J D with R over the
  base field, J a fixed half-integral model matrix and D diagonal, and the
  classification is read off the diagonal datum D.

All arithmetic is exact; every reduction returns explicit witnesses and
re-verifies the identities it claims.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction as Q

from .errors import (BlockHypothesisViolated, CohomologyError,
                     FormsInequivalent, NotACocycle, NotInGroup,
                     NotTwistedCocycle, SingularD)
from .field import (BASE_TOWER, FieldElement, FieldPolicy, Tower,
                    ensure_sqrt_h, semantic_galois_group, sigma0, solve_norm,
                    sqrt_witness)
from .liealg import LieAlgebra
from .linalg import Matrix, diag, eye
from .scalars import GR_ONE
from .triples import BDTriple, enumerate_triples

# ---------------------------------------------------------------------------
# matrix helpers over the field tower
# ---------------------------------------------------------------------------


def matrix_tower(x: Matrix, seed: Tower | None = None) -> Tower:
    """Smallest tower containing every entry of x (merged with seed)."""
    t = seed
    for row in x.rows:
        for e in row:
            if isinstance(e, FieldElement):
                t = e.tower if t is None else t.merge(e.tower)
    if t is None:
        raise CohomologyError("matrix has no field entries")
    return t


def lift_matrix(x: Matrix, tower: Tower) -> Matrix:
    return x.map(tower.el)


def apply_auto(x: Matrix, auto) -> Matrix:
    return x.map(auto.apply)


def all_semantic(x: Matrix) -> bool:
    return all(e.in_semantic_base() for row in x.rows for e in row)


def group_inverse(alg: LieAlgebra, x: Matrix, tower: Tower) -> Matrix:
    """Inverse of a group element through the defining form: B^-1 X^T B."""
    fb = alg.form_matrix(tower)
    fbi = -fb if alg.series == "C" else fb      # B^2 = -I symplectic, I else
    return fbi * x.transpose() * fb


# ---------------------------------------------------------------------------
# the pairing matrix S and the model matrix J
# ---------------------------------------------------------------------------


def s_fixed_points(alg: LieAlgebra) -> tuple[int, ...]:
    """Indices the pairing involution leaves fixed (besides the odd middle,
    which self-pairs on its own)."""
    n = alg.rank
    if alg.series == "D" and n % 2 == 1:
        return (n - 1, n)
    return ()


def s_matrix(alg: LieAlgebra) -> Matrix:
    """The companion S of the model matrix J: sigma0(J) = J * S.

    Antidiagonal units, except that the symplectic series takes sign -1 on
    the first half, the odd D pattern keeps a 2x2 identity block in the
    middle, and the odd B pattern carries -1 at the center.
    """
    n, m = alg.rank, alg.size
    fixed = set(s_fixed_points(alg))
    rows = [[Q(0)] * m for _ in range(m)]
    for j in range(m):
        if j in fixed:
            rows[j][j] = Q(1)
        elif alg.series == "B" and n % 2 == 1 and j == n:
            rows[j][j] = Q(-1)
        elif alg.series == "C" and j < n:
            rows[j][m - 1 - j] = Q(-1)
        else:
            rows[j][m - 1 - j] = Q(1)
    return Matrix(rows)


def s_prime_matrix(alg: LieAlgebra) -> Matrix:
    """Unsigned variant; differs from S only for the symplectic series."""
    if alg.series != "C":
        return s_matrix(alg)
    m = alg.size
    rows = [[Q(0)] * m for _ in range(m)]
    for j in range(m):
        rows[j][m - 1 - j] = Q(1)
    return Matrix(rows)


def s_pairing(alg: LieAlgebra) -> list[int]:
    """Index involution underlying S."""
    m = alg.size
    fixed = set(s_fixed_points(alg))
    return [j if j in fixed else m - 1 - j for j in range(m)]


def _even_cells(n: int) -> dict[tuple[int, int], str]:
    """The unrestricted half-integral pattern on 2n indices."""
    out = {}
    for k in range(n):
        out[(k, k)] = "one"
        out[(k, 2 * n - 1 - k)] = "one"
    for k in range(n, 2 * n):
        out[(k, k)] = "mrh"
        out[(k, 2 * n - 1 - k)] = "rh"
    return out


def _j_cells(series: str, n: int) -> dict[tuple[int, int], str]:
    """Support cells of the rank-n half-integral pattern on 2n indices,
    values in {'one', 'rh', 'mrh'} (1, sqrt(h), -sqrt(h))."""
    if series == "D" and n % 2 == 1:
        inner = _even_cells(n - 1)
        out = {}
        for (i, j), v in inner.items():
            ii = i if i < n - 1 else i + 2
            jj = j if j < n - 1 else j + 2
            out[(ii, jj)] = v
        out[(n - 1, n - 1)] = "one"
        out[(n, n)] = "one"
        return out
    return _even_cells(n)


def j_matrix(alg: LieAlgebra, tower: Tower | None = None) -> tuple[Matrix, Tower]:
    """The block-diagonal model matrix J over K[sqrt(h)].

    Each index pair {j, m-1-j} carries the 2x2 cell [[1, 1], [rh, -rh]].
    The odd D pattern reuses the next-lower pattern around a 2x2 identity
    block; the odd B pattern keeps every pair cell and scales the center by
    sqrt(h), which keeps det(J) in the base field so the group completion
    stays solvable.
    """
    t = ensure_sqrt_h(tower or BASE_TOWER)
    n, m = alg.rank, alg.size
    if alg.series == "B":
        cells = {}
        for (i, j), v in _even_cells(n).items():
            ii = i if i < n else i + 1
            jj = j if j < n else j + 1
            cells[(ii, jj)] = v
        cells[(n, n)] = "one" if n % 2 == 0 else "rh"
    else:
        cells = _j_cells(alg.series, n)
    rh = t.gen_el("r2h")
    val = {"one": t.one(), "rh": rh, "mrh": -rh}
    rows = [[t.zero()] * m for _ in range(m)]
    for (i, j), v in cells.items():
        rows[i][j] = val[v]
    return Matrix(rows), t


# ---------------------------------------------------------------------------
# diagonal data and the twist map T
# ---------------------------------------------------------------------------


class DiagonalDatum:
    """Diagonal part D of the twisted normal form X = R J D."""

    def __init__(self, alg: LieAlgebra, entries, tower: Tower | None = None):
        t = ensure_sqrt_h(tower or BASE_TOWER)
        for e in entries:
            if isinstance(e, FieldElement):
                t = t.merge(e.tower)
        self.alg = alg
        self.tower = t
        self.entries = tuple(t.el(e) for e in entries)
        if len(self.entries) != alg.size:
            raise CohomologyError("diagonal datum needs one entry per index")
        if any(not e for e in self.entries):
            raise SingularD("diagonal datum has a zero entry")

    def matrix(self) -> Matrix:
        return diag(self.entries)

    def is_admissible(self, triple: BDTriple | None = None) -> bool:
        return in_z(self.alg, self.entries, triple, self.tower)


def _datum_entries(alg, datum, tower):
    if isinstance(datum, DiagonalDatum):
        t = tower.merge(datum.tower) if tower is not None else datum.tower
        return [t.el(e) for e in datum.entries], t
    t = ensure_sqrt_h(tower or BASE_TOWER)
    for e in datum:
        if isinstance(e, FieldElement):
            t = t.merge(e.tower)
    es = [t.el(e) for e in datum]
    if len(es) != alg.size:
        raise CohomologyError("diagonal datum needs one entry per index")
    if any(not e for e in es):
        raise SingularD("diagonal datum has a zero entry")
    return es, t


def in_z(alg: LieAlgebra, entries, triple: BDTriple | None = None,
         tower: Tower | None = None) -> bool:
    """Membership in the admissible diagonal set.

    Pair products must be semantic (symplectic: sqrt(h) times semantic), the
    odd middle entry must be 1, and D^-1 sigma(D) must centralize the
    r-matrix for every automorphism fixing sqrt(h).
    """
    try:
        d, t = _datum_entries(alg, entries, tower)
    except SingularD:
        return False
    n, m = alg.rank, alg.size
    t = ensure_sqrt_h(t)
    rh = t.gen_el("r2h")
    for j in range(m // 2):
        p = d[j] * d[m - 1 - j]
        if alg.series == "C":
            p = p / rh
        if not p.in_semantic_base():
            return False
    if alg.series == "B" and d[n] != t.one():
        return False
    for a in semantic_galois_group(t):
        if a.is_identity():
            continue
        if a.phases.get("r2h", GR_ONE) != GR_ONE:
            continue
        vals = [a.apply(e) / e for e in d]
        if not diag_in_centralizer(alg, triple, vals):
            return False
    return True


def t_map(alg: LieAlgebra, datum, tower: Tower | None = None) -> Matrix:
    """The twist companion T(D) = S D^-1 S sigma0(D); the symplectic series
    takes -S D^-1 S' sigma0(D).  Lands in the diagonal torus whenever D is
    admissible."""
    d, t = _datum_entries(alg, datum, tower)
    t = ensure_sqrt_h(t)
    s0 = sigma0(t)
    sl = lift_matrix(s_matrix(alg), t)
    mid = lift_matrix(s_prime_matrix(alg), t)
    out = sl * diag([e.inv() for e in d]) * mid * diag([s0.apply(e) for e in d])
    if alg.series == "C":
        out = -out
    return out


# ---------------------------------------------------------------------------
# centralizer of the r-matrix inside the torus
# ---------------------------------------------------------------------------


def _torus_values(alg: LieAlgebra, entries) -> list | None:
    """Read diagonal entries as a torus element, or None."""
    n, m = alg.rank, alg.size
    if len(entries) != m:
        return None
    if any(not e for e in entries):
        return None
    one = entries[0] / entries[0]
    for j in range(m // 2):
        if entries[j] * entries[m - 1 - j] != one:
            return None
    if alg.series == "B" and entries[n] != one:
        return None
    return list(entries[:n])


def diag_in_centralizer(alg: LieAlgebra, triple: BDTriple | None,
                        entries) -> bool:
    """Torus membership plus equal simple characters along tau."""
    vals = _torus_values(alg, entries)
    if vals is None:
        return False
    if triple is None or triple.is_empty():
        return True
    t = None
    for v in vals:
        if isinstance(v, FieldElement):
            t = v.tower if t is None else t.merge(v.tower)
    if t is None:
        t = BASE_TOWER
    s = alg.simple_character_values(vals, t)
    return all(s[i] == s[triple.tau_map[i]] for i in triple.gamma1)


def in_centralizer(alg: LieAlgebra, triple: BDTriple | None, x: Matrix) -> bool:
    if not x.is_diagonal():
        return False
    return diag_in_centralizer(alg, triple, list(x.diagonal()))


# ---------------------------------------------------------------------------
# plain (nontwisted) cocycles
# ---------------------------------------------------------------------------


def is_nontwisted_cocycle(alg: LieAlgebra, triple: BDTriple, x: Matrix) -> bool:
    """X in G(L) and X^-1 sigma(X) in the centralizer torus for every
    semantic automorphism sigma."""
    t = matrix_tower(x)
    x = lift_matrix(x, t)
    if not alg.group_contains(x):
        raise NotInGroup("cocycle values must lie in the group")
    xi = group_inverse(alg, x, t)
    for a in semantic_galois_group(t):
        if a.is_identity():
            continue
        if not in_centralizer(alg, triple, xi * apply_auto(x, a)):
            return False
    return True


def block_decompose(x: Matrix, blocks, tower: Tower | None = None):
    """Exact factorization X = Q K with Q defined over the semantic base and
    K supported on the given column blocks.

    Requires X^-1 sigma(X) to be supported on the blocks for every semantic
    automorphism sigma; raises BlockHypothesisViolated otherwise.
    """
    t = matrix_tower(x, tower)
    x = lift_matrix(x, t)
    m = x.nrows
    blocks = [tuple(b) for b in blocks]
    seen = sorted(i for b in blocks for i in b)
    if seen != list(range(m)):
        raise CohomologyError("blocks must partition the column indices")
    owner = {i: k for k, b in enumerate(blocks) for i in b}
    xi = x.inv()
    for a in semantic_galois_group(t):
        if a.is_identity():
            continue
        y = xi * apply_auto(x, a)
        for i in range(m):
            for j in range(m):
                if y[i, j] and owner[i] != owner[j]:
                    raise BlockHypothesisViolated(
                        f"support at ({i}, {j}) crosses the block partition")
    zero, one = t.zero(), t.one()
    qrows = [[zero] * m for _ in range(m)]
    krows = [[zero] * m for _ in range(m)]
    for b in blocks:
        rows_sel = _pivot_rows(x, b)
        kb = x.sub(rows_sel, b)
        qb = x.sub(range(m), b) * kb.inv()
        for bi, i in enumerate(b):
            for bj, j in enumerate(b):
                krows[i][j] = kb[bi, bj]
            for r in range(m):
                qrows[r][i] = qb[r, bi]
    qm, km = Matrix(qrows), Matrix(krows)
    if not all_semantic(qm):
        raise BlockHypothesisViolated("cofactor matrix leaves the base field")
    if qm * km != x:
        raise CohomologyError("block factorization failed to reassemble")
    return qm, km


def _pivot_rows(x: Matrix, cols) -> list[int]:
    """First row set (lexicographically) giving an invertible minor."""
    m = x.nrows
    k = len(cols)
    if k == 1:
        for i in range(m):
            if x[i, cols[0]]:
                return [i]
        raise CohomologyError("zero column has no pivot")
    for rows in itertools.combinations(range(m), k):
        if x.sub(rows, cols).det():
            return list(rows)
    raise CohomologyError("no invertible minor for the block")


def _column_pivot_factor(alg: LieAlgebra, x: Matrix, t: Tower):
    """X = Q1 * diag(pivots) with Q1 over the base field."""
    m = x.nrows
    piv = []
    cols = []
    for j in range(m):
        i0 = next((i for i in range(m) if x[i, j]), None)
        if i0 is None:
            raise NotACocycle("cocycle matrix has a zero column")
        p = x[i0, j]
        piv.append(p)
        pi = p.inv()
        cols.append([x[i, j] * pi for i in range(m)])
    q1 = Matrix([[cols[j][i] for j in range(m)] for i in range(m)])
    if not all_semantic(q1):
        raise NotACocycle("column ratios leave the base field")
    return q1, piv


def has_fork_string(triple: BDTriple) -> bool:
    """A tau-string visiting both fork nodes of the even orthogonal diagram."""
    n = triple.alg.rank
    return any((n - 2) in s and (n - 1) in s for s in triple.strings())


def _fork_rep_values(alg: LieAlgebra, triple: BDTriple):
    """Second representative for fork-joined triples: the first 0/1 exponent
    pattern p with p[n-1] = 1 whose sqrt(h)-power torus is a cocycle."""
    n = alg.rank
    t = ensure_sqrt_h(BASE_TOWER)
    rh = t.gen_el("r2h")
    for bits in itertools.product((0, 1), repeat=n):
        if not bits[n - 1]:
            continue
        q = [bits[j] ^ bits[j + 1] for j in range(n - 1)]
        q.append(bits[n - 2] ^ bits[n - 1])
        if all(q[i] == q[triple.tau_map[i]] for i in triple.gamma1):
            return [rh if b else t.one() for b in bits], t
    raise CohomologyError("no exponent pattern for the fork representative")


def _string_owner(triple: BDTriple, j: int) -> int:
    if j in triple.tau_map:
        return triple.string_of(j)[-1]
    return j


def _string_targets(alg, triple, ratios, assign, t):
    """Character targets: free indices take their assigned value, chained
    indices accumulate inverse ratios toward the string terminal."""
    n = alg.rank
    sig = [None] * n
    for j in range(n):
        if j not in triple.tau_map:
            sig[j] = t.el(assign.get(j, 1))
    for st in triple.strings():
        acc = sig[st[-1]]
        for i in reversed(st[:-1]):
            acc = ratios[i] * acc
            sig[i] = acc
    return sig


def nontwisted_reduce(alg: LieAlgebra, triple: BDTriple, x: Matrix,
                      policy: FieldPolicy = FieldPolicy.LAURENT):
    """Reduce a plain cocycle to a representative.

    Returns (index, label, Q, C, tower) with  X = Q * Rep_index * C  exactly,
    Q in G over the base field and C in the centralizer torus.
    """
    if not is_nontwisted_cocycle(alg, triple, x):
        raise NotACocycle("matrix fails the centralizer condition")
    t = matrix_tower(x)
    x = lift_matrix(x, t)
    n, m = alg.rank, alg.size
    q1, piv = _column_pivot_factor(alg, x, t)

    evals = [t.one()] * m
    for j in range(m // 2):
        evals[m - 1 - j] = piv[j] * piv[m - 1 - j]
    if alg.series == "B":
        evals[n] = piv[n]
    for e in evals:
        if not e.in_semantic_base():
            raise NotACocycle("pair products leave the base field")
    q = q1 * diag(evals)
    d1 = list(piv[:n])
    if x != q * alg.torus_matrix(d1, t):
        raise CohomologyError("column factorization failed to reassemble")

    rep_idx, label = 0, "one"
    rep_vals = None
    assign: dict[int, object] = {}

    def ratio_map(vals):
        s = alg.simple_character_values(vals, t)
        out = {}
        for i in triple.gamma1:
            r = s[i] / s[triple.tau_map[i]]
            if not r.in_semantic_base():
                raise NotACocycle("character ratios leave the base field")
            out[i] = r
        return out

    ratios = ratio_map(d1)
    sig = _string_targets(alg, triple, ratios, assign, t)

    if alg.series == "D":
        p = sig[n - 2] * sig[n - 1]
        if p.valuation() % 2 != 0:
            own2, own1 = _string_owner(triple, n - 2), _string_owner(triple, n - 1)
            if own2 != own1:
                assign[own1] = t.hbar()
                sig = _string_targets(alg, triple, ratios, assign, t)
                p = sig[n - 2] * sig[n - 1]
            else:
                rep_idx, label = 1, "hbar"
                rep_vals, trep = _fork_rep_values(alg, triple)
                t = t.merge(trep)
                rep_vals = [t.el(v) for v in rep_vals]
                d1 = [t.el(a) / b for a, b in zip(d1, rep_vals)]
                ratios = ratio_map(d1)
                sig = _string_targets(alg, triple, ratios, assign, t)
                p = sig[n - 2] * sig[n - 1]
            if p.valuation() % 2 != 0:
                raise CohomologyError("fork parity did not settle")

    u = [None] * n
    if alg.series == "D":
        w, t = sqrt_witness(sig[n - 2] * sig[n - 1], t)
        u[n - 2] = w
        u[n - 1] = t.el(sig[n - 1]) / w
        for j in range(n - 3, -1, -1):
            u[j] = t.el(sig[j]) * u[j + 1]
    else:
        u[n - 1] = t.el(sig[n - 1])
        for j in range(n - 2, -1, -1):
            u[j] = t.el(sig[j]) * u[j + 1]

    c_vals = [t.el(a) / b for a, b in zip(d1, u)]
    if not diag_in_centralizer(alg, triple,
                               _torus_entries(alg, c_vals, t)):
        raise CohomologyError("residual torus missed the centralizer")
    um = alg.torus_matrix(u, t)
    qtot = lift_matrix(q, t) * um
    if not all_semantic(qtot):
        raise CohomologyError("witness left the base field")
    if not alg.group_contains(qtot):
        raise CohomologyError("witness left the group")
    cm = alg.torus_matrix(c_vals, t)
    repm = alg.torus_matrix(rep_vals, t) if rep_idx else eye(m, t.one())
    if lift_matrix(x, t) != qtot * repm * cm:
        raise CohomologyError("reduction identity failed")
    return rep_idx, label, qtot, cm, t


def _torus_entries(alg, values, t):
    return list(alg.torus_matrix(values, t).diagonal())


def classify_nontwisted(alg: LieAlgebra, triple: BDTriple,
                        policy: FieldPolicy = FieldPolicy.LAURENT):
    """Cohomology set of plain cocycles for one triple.

    One class, except the even orthogonal triples with a tau-string joining
    the two fork roots: those split into two classes over the Laurent model,
    indexed by the residue square classes (1 and h).
    """
    t = BASE_TOWER
    reps = [CohomologyClass(eye(alg.size, t.one()), t, "one", None)]
    forked = alg.series == "D" and has_fork_string(triple)
    if forked:
        vals, t2 = _fork_rep_values(alg, triple)
        reps.append(CohomologyClass(alg.torus_matrix(vals, t2), t2, "hbar",
                                    None))
    for c in reps:
        if not is_nontwisted_cocycle(alg, triple, c.representative):
            raise CohomologyError("representative failed verification")
    if policy is FieldPolicy.LAURENT:
        card = len(reps)
    else:
        card = None if forked else 1
    return CohomologySet(triple, "nontwisted", policy, tuple(reps), card)


# ---------------------------------------------------------------------------
# twistability
# ---------------------------------------------------------------------------


def _tilde_w(alg: LieAlgebra, root: tuple) -> tuple:
    """Action of the outer companion on epsilon coordinates: trivial except
    for the odd even-orthogonal patterns, which flip the last coordinate."""
    if alg.series == "D" and alg.rank % 2 == 1:
        return root[:-1] + (-root[-1],)
    return root


def is_twistable(alg: LieAlgebra, triple: BDTriple) -> bool:
    """The wedge support must be stable under (a, b) -> (w b, w a)."""
    w = triple.wedge_set()
    for a, b in w:
        if (_tilde_w(alg, b), _tilde_w(alg, a)) not in w:
            return False
    return True


def twistable_triples(alg: LieAlgebra) -> list[BDTriple]:
    return [tr for tr in enumerate_triples(alg) if is_twistable(alg, tr)]


def check_r21_ads(alg: LieAlgebra, triple: BDTriple) -> bool:
    """Exact tensor identity r^21 = (Ad_S (x) Ad_S) r."""
    from .rmatrix import build_r_matrix
    from .liealg import sp_mul

    rm = build_r_matrix(BDTriple(alg, dict(triple.tau_map)))
    m = alg.size
    s = s_matrix(alg)
    sinv = -s if alg.series == "C" else s
    s_sp = {(i, j): s[i, j] for i in range(m) for j in range(m) if s[i, j]}
    si_sp = {(i, j): sinv[i, j] for i in range(m) for j in range(m)
             if sinv[i, j]}
    ad = {}
    for lab in alg.basis_labels():
        ad[lab] = alg.coords(sp_mul(sp_mul(s_sp, alg.basis_mat(lab)), si_sp))
    out: dict = {}
    for (la, lb), c in rm.coeffs.items():
        for ja, ca in ad[la].items():
            for jb, cb in ad[lb].items():
                key = (ja, jb)
                out[key] = out.get(key, Q(0)) + c * ca * cb
    out = {k: v for k, v in out.items() if v}
    tgt = {k: v for k, v in rm.r21().items() if v}
    return out == tgt


# ---------------------------------------------------------------------------
# twisted cocycles: normal form X = R J D
# ---------------------------------------------------------------------------


def is_twisted_cocycle(alg: LieAlgebra, triple: BDTriple, x: Matrix) -> bool:
    """X in G(L); X^-1 sigma(X) centralizes for sqrt(h)-fixing sigma; and
    S X^-1 sigma0(X) centralizes."""
    t = ensure_sqrt_h(matrix_tower(x))
    x = lift_matrix(x, t)
    if not alg.group_contains(x):
        raise NotInGroup("cocycle values must lie in the group")
    xi = group_inverse(alg, x, t)
    for a in semantic_galois_group(t):
        if a.is_identity():
            continue
        if a.phases.get("r2h", GR_ONE) != GR_ONE:
            continue
        if not in_centralizer(alg, triple, xi * apply_auto(x, a)):
            return False
    v = lift_matrix(s_matrix(alg), t) * (xi * apply_auto(x, sigma0(t)))
    return in_centralizer(alg, triple, v)


def decompose_rjd(alg: LieAlgebra, triple: BDTriple, x: Matrix):
    """Factor a twisted cocycle as X = R J D exactly.

    Returns (R, entries of D, tower); R is over the semantic base and D is
    an admissible diagonal datum.
    """
    t = ensure_sqrt_h(matrix_tower(x))
    x = lift_matrix(x, t)
    if not alg.group_contains(x):
        raise NotInGroup("matrix is not in the group")
    xi = group_inverse(alg, x, t)
    s0 = sigma0(t)
    for a in semantic_galois_group(t):
        if a.is_identity():
            continue
        if a.phases.get("r2h", GR_ONE) != GR_ONE:
            continue
        if not in_centralizer(alg, triple, xi * apply_auto(x, a)):
            raise NotTwistedCocycle("fails the base centralizer condition")
    v = lift_matrix(s_matrix(alg), t) * (xi * apply_auto(x, s0))
    if not in_centralizer(alg, triple, v):
        raise NotTwistedCocycle("twist value does not centralize")

    m = alg.size
    pr = s_pairing(alg)
    blocks = []
    for j in range(m):
        if pr[j] == j:
            blocks.append((j,))
        elif j < pr[j]:
            blocks.append((j, pr[j]))
    q, k = block_decompose(x, blocks, t)
    jm, t = j_matrix(alg, t)
    rh = t.gen_el("r2h")
    half = t.el(Q(1, 2))
    zero, one = t.zero(), t.one()
    rrows = [[zero] * m for _ in range(m)]
    dvals: list = [None] * m
    for b in blocks:
        if len(b) == 1:
            j = b[0]
            val = t.el(k[j, j]) / t.el(jm[j, j])
            if alg.series == "B":
                # the split only fixes R d_n up to a unit; put it in R
                rrows[j][j] = val
                dvals[j] = one
            else:
                rrows[j][j] = one
                dvals[j] = val
            continue
        jj, j2 = b
        a_, b_ = t.el(k[jj, jj]), t.el(k[jj, j2])
        c_, d_ = t.el(k[j2, jj]), t.el(k[j2, j2])
        if not c_ or not d_:
            raise NotTwistedCocycle("pair block is degenerate")
        ac, bd = a_ / c_, b_ / d_
        ap = (ac + bd) * half
        bp = (ac - bd) * half * rh.inv()
        if not (ap.in_semantic_base() and bp.in_semantic_base()):
            raise NotTwistedCocycle("pair block is not sigma0-paired")
        rrows[jj][jj] = ap
        rrows[jj][j2] = bp
        rrows[j2][jj] = one
        dvals[jj], dvals[j2] = c_, d_
    r = lift_matrix(q, t) * Matrix(rrows)
    if not all_semantic(r):
        raise NotTwistedCocycle("cofactor left the base field")
    if lift_matrix(x, t) != r * jm * diag(dvals):
        raise CohomologyError("normal form failed to reassemble")
    if not in_z(alg, dvals, triple, t):
        raise NotTwistedCocycle("diagonal part is not admissible")
    return r, dvals, t


def complete_to_group(alg: LieAlgebra, datum, tower: Tower | None = None):
    """Find R over the semantic base with R J D in G.

    The quadratic form carried by J D decomposes into hyperbolic pairs whose
    scales match in valuation parity, so the required square roots stay in
    the base field (extending the tower by constant radicals only).
    """
    d, t = _datum_entries(alg, datum, tower)
    jm, t = j_matrix(alg, t)
    x0 = jm * diag(d)
    fb = alg.form_matrix(t)
    aa = x0 * fb * x0.transpose()
    n, m = alg.rank, alg.size
    zero, one = t.zero(), t.one()

    if alg.series == "C":
        y = [one] * m
        for j in range(n):
            j2 = m - 1 - j
            for l in range(m):
                if l != j2 and aa[j, l]:
                    raise FormsInequivalent("unexpected symplectic coupling")
            mu = aa[j, j2]
            if not mu or not (fb[j, j2] / mu).in_semantic_base():
                raise FormsInequivalent("pairing scale leaves the base field")
            y[j] = fb[j, j2] / mu
        r = diag(y)
    else:
        fixed = set(s_fixed_points(alg))
        pairs = [(j, m - 1 - j) for j in range(m // 2) if j not in fixed]
        mid3 = None
        if alg.series == "B" and n % 2 == 1:
            mid3 = pairs.pop()
        if len(pairs) % 2:
            raise FormsInequivalent("odd number of scale pairs")
        if alg.series == "D" and n % 2 == 1:
            mid_pair = {n - 1, n}
        else:
            mid_pair = set()
        for i in range(m):
            for j in range(m):
                if i != j and aa[i, j] and {i, j} != mid_pair:
                    raise FormsInequivalent("unexpected form coupling")
        rrows = [[zero] * m for _ in range(m)]
        for ci in range(0, len(pairs), 2):
            (i1, i2), (j1, j2) = pairs[ci], pairs[ci + 1]
            vi, vj = aa[i1, i1].valuation(), aa[j1, j1].valuation()
            if (vi - vj) % 2 == 0:
                groups = [((i1, i2), (i1, j1)), ((j1, j2), (i2, j2))]
            else:
                groups = [((i1, i2), (i1, j2)), ((j1, j2), (i2, j1))]
            for (slot_a, slot_b), (u, w) in groups:
                au, aw = aa[u, u], aa[w, w]
                if not au or not aw:
                    raise FormsInequivalent("degenerate scale entry")
                kap, t = sqrt_witness(-au / aw, t)
                if not kap.in_semantic_base():
                    raise FormsInequivalent("scale ratio is not a square")
                au = t.el(au)
                row1 = [t.zero()] * m
                row1[u] = t.one()
                row1[w] = kap
                inv2a = (au + au).inv()
                row2 = [t.zero()] * m
                row2[u] = inv2a
                row2[w] = -kap * inv2a
                rrows = [[t.el(e) for e in rw] for rw in rrows]
                rrows[slot_a] = row1
                rrows[slot_b] = row2
        zero, one = t.zero(), t.one()
        if alg.series == "B" and mid3 is None:
            ac = t.el(aa[n, n])
            w, t = sqrt_witness(ac, t)
            if not w.in_semantic_base():
                raise FormsInequivalent("middle scale is not a square")
            rrows = [[t.el(e) for e in rw] for rw in rrows]
            rrows[n][n] = w.inv()
        elif alg.series == "B":
            u, w = mid3
            a_, c_, b_ = t.el(aa[u, u]), t.el(aa[n, n]), t.el(aa[w, w])
            if not a_ or not c_ or not b_:
                raise FormsInequivalent("degenerate middle scale")
            va = a_.valuation()
            if va.denominator != 1:
                raise FormsInequivalent("middle scale has odd half-order")
            if int(va) % 2 == 0:
                # isotropic mix of the center with the high slot
                y, t = sqrt_witness(a_, t)
                if not y.in_semantic_base():
                    raise FormsInequivalent("middle scale is not a square")
                a_, c_ = t.el(a_), t.el(c_)
                row_u = [t.zero()] * m
                row_c = [t.zero()] * m
                row_w = [t.zero()] * m
                row_u[n], row_u[w] = t.el(y), t.one()
                row_c[u] = t.el(y).inv()
                sc = (a_ * c_ + a_ * c_).inv()
                row_w[n], row_w[w] = t.el(y) * sc, -sc
            else:
                # isotropic mix of the center with the low slot
                z, t = sqrt_witness(-a_ / c_, t)
                if not z.in_semantic_base():
                    raise FormsInequivalent("middle scale is not a square")
                g, t = sqrt_witness(t.el(b_), t)
                if not g.in_semantic_base():
                    raise FormsInequivalent("middle scale is not a square")
                a_ = t.el(a_)
                row_u = [t.zero()] * m
                row_c = [t.zero()] * m
                row_w = [t.zero()] * m
                half_a = (a_ + a_).inv()
                row_u[u], row_u[n] = t.one(), t.el(z)
                row_c[w] = t.el(g).inv()
                row_w[u], row_w[n] = half_a, -t.el(z) * half_a
            rrows = [[t.el(e) for e in rw] for rw in rrows]
            rrows[u], rrows[n], rrows[w] = row_u, row_c, row_w
        elif alg.series == "D" and alg.rank % 2 == 1:
            kap = t.el(aa[n - 1, n])
            if not kap:
                raise FormsInequivalent("degenerate middle pairing")
            rrows = [[t.el(e) for e in rw] for rw in rrows]
            rrows[n - 1][n - 1] = kap.inv()
            rrows[n][n] = t.one()
        r = Matrix(rrows)

    aa = lift_matrix(aa, t)
    fb = alg.form_matrix(t)
    if r * aa * r.transpose() != fb:
        raise FormsInequivalent("form reduction failed")
    x = r * lift_matrix(x0, t)
    if alg.series != "C" and x.det() != t.one():
        rows = [list(rw) for rw in r.rows]
        rows[0], rows[m - 1] = rows[m - 1], rows[0]
        r = Matrix(rows)
        x = r * lift_matrix(x0, t)
    if not all_semantic(r):
        raise FormsInequivalent("completion left the base field")
    if not alg.group_contains(x):
        raise FormsInequivalent("completion missed the group")
    return r, t


def _family_sign_bits(alg: LieAlgebra, triple: BDTriple) -> tuple:
    """First 0/1 pattern v with v[n-1] = 1 whose sign torus (-1)^v has equal
    simple characters along tau."""
    n = alg.rank
    t = BASE_TOWER
    for bits in itertools.product((0, 1), repeat=n):
        if not bits[n - 1]:
            continue
        w = [t.el(-1 if b else 1) for b in bits]
        s = alg.simple_character_values(w, t)
        if all(s[i] == s[triple.tau_map[i]] for i in triple.gamma1):
            return bits
    raise CohomologyError("no sign pattern for the twisted representative")


def twisted_rep_entries(alg: LieAlgebra, triple: BDTriple, label: str):
    """Diagonal datum of a twisted representative.

    The symplectic series uses diag(sqrt(h), ..., 1, ...); the orthogonal
    DJ classes use the identity; the second class of each odd fork family
    puts sqrt(h) on a sign-consistent index pattern ending at the middle."""
    t = ensure_sqrt_h(BASE_TOWER)
    rh = t.gen_el("r2h")
    one = t.one()
    n, m = alg.rank, alg.size
    if alg.series == "C":
        return [rh] * n + [one] * n, t
    if label == "one":
        return [one] * m, t
    bits = _family_sign_bits(alg, triple)
    ent = [one] * m
    for j in range(n):
        if bits[j]:
            ent[j] = rh
            ent[m - 1 - j] = rh
    return ent, t


_TWISTED_REPS: dict = {}


def classify_twisted(alg: LieAlgebra, triple: BDTriple):
    """Cohomology set of twisted cocycles for one triple.

    Empty unless the triple is twistable.  Twistable triples carry one class
    (DJ) or two classes (the odd fork families), distinguished by the square
    class of the middle diagonal entry."""
    if not is_twistable(alg, triple):
        return CohomologySet(triple, "twisted", FieldPolicy.LAURENT, (), 0)
    key = (alg.series, alg.rank, triple.key())
    if key not in _TWISTED_REPS:
        if triple.is_empty():
            labels = ["hbar"] if alg.series == "C" else ["one"]
        else:
            labels = ["one", "hbar"]
        out = []
        for lb in labels:
            ent, t = twisted_rep_entries(alg, triple, lb)
            if not in_z(alg, ent, triple, t):
                raise CohomologyError("representative datum not admissible")
            r, t = complete_to_group(alg, ent, t)
            jm, t = j_matrix(alg, t)
            x = r * jm * diag([t.el(e) for e in ent])
            if not is_twisted_cocycle(alg, triple, x):
                raise CohomologyError("representative failed verification")
            out.append(CohomologyClass(x, t, lb, tuple(t.el(e) for e in ent)))
        _TWISTED_REPS[key] = tuple(out)
    classes = _TWISTED_REPS[key]
    return CohomologySet(triple, "twisted", FieldPolicy.LAURENT, classes,
                         len(classes))


def _middle_label(alg, dvals, t) -> str:
    """Square class of the middle entry of an admissible diagonal."""
    n = alg.rank
    dn = t.el(dvals[n - 1])
    v = dn.valuation()
    return "one" if v.denominator == 1 else "hbar"


def twisted_reduce(alg: LieAlgebra, triple: BDTriple, x: Matrix):
    """Reduce a twisted cocycle to a representative.

    Returns (index, label, Q, C, tower) with X = Q * Rep_index * C exactly.
    """
    r, dvals, t = decompose_rjd(alg, triple, x)
    n, m = alg.rank, alg.size
    cs = classify_twisted(alg, triple)
    if not cs.classes:
        raise NotTwistedCocycle("triple admits no twisted classes")
    if triple.is_empty():
        idx = 0
    else:
        s0 = sigma0(t)
        dn = dvals[n - 1]
        ratio = s0.apply(dn) / dn
        if ratio != t.one() and ratio != -t.one():
            raise NotTwistedCocycle("middle entry is not a twist eigenvector")
        idx = 0 if _middle_label(alg, dvals, t) == "one" else 1
    rep = cs.classes[idx]
    t = t.merge(rep.tower)
    dhat = [t.el(e) for e in rep.diagonal]
    dv = [t.el(e) for e in dvals]
    rh = t.gen_el("r2h")

    fixed = set(s_fixed_points(alg))
    pair_lows = [j for j in range(m // 2) if j not in fixed]
    c = [None] * n
    for j in pair_lows:
        j2 = m - 1 - j
        ktil = (dv[j] * dv[j2]) / (dhat[j] * dhat[j2])
        if not ktil.in_semantic_base():
            raise CohomologyError("pair ratio left the base field")
        xx, yy, t = solve_norm(ktil, t)
        lam = t.el(xx) + t.el(yy) * t.gen_el("r2h")
        c[j] = t.el(dv[j]) / (t.el(dhat[j]) * lam)
    mid_low = None
    if alg.series == "D" and n % 2 == 1:
        mid_low = n - 1
    if mid_low is not None:
        val = t.el(dv[mid_low]) / t.el(dhat[mid_low])
        c[mid_low] = val
    c = [t.el(v) for v in c]

    if triple.gamma1:
        c, t = _repair_characters(alg, triple, c, t, mid_low)

    cm = alg.torus_matrix(c, t)
    if not diag_in_centralizer(alg, triple, list(cm.diagonal())):
        raise CohomologyError("residual torus missed the centralizer")
    xl = lift_matrix(x, t)
    xr = lift_matrix(rep.representative, t)
    qm = xl * group_inverse(alg, cm, t) * group_inverse(alg, xr, t)
    if not all_semantic(qm):
        raise CohomologyError("witness left the base field")
    if not alg.group_contains(qm):
        raise CohomologyError("witness left the group")
    if xl != qm * xr * cm:
        raise CohomologyError("reduction identity failed")
    return idx, rep.label, qm, cm, t


def _char_exponents(alg: LieAlgebra) -> list[dict]:
    """E[i][j]: exponent of torus value j in simple character i."""
    n = alg.rank
    out = []
    for i in range(n - 1):
        out.append({i: 1, i + 1: -1})
    if alg.series == "B":
        out.append({n - 1: 1})
    elif alg.series == "C":
        out.append({n - 1: 2})
    else:
        out.append({n - 2: 1, n - 1: 1})
    return out


def _repair_characters(alg, triple, c, t, mid_low):
    """Adjust the centralizer candidate so its characters match along tau.

    The admissible moves are norm-1 scalings of pair values and arbitrary
    base-field scalings of the middle value.  For every twistable triple the
    condition rows sum to a pure middle-scaling row with exponent +-2, whose
    right-hand side is an exact square; one norm-1 pair move settles the
    rest.
    """
    n = alg.rank
    exps = _char_exponents(alg)
    s0 = sigma0(t)

    def mismatches(cv, tw):
        s = alg.simple_character_values(cv, tw)
        return {i: s[triple.tau_map[i]] / s[i] for i in triple.gamma1}

    def a_row(i):
        row: dict[int, int] = {}
        for j, e in exps[i].items():
            row[j] = row.get(j, 0) + e
        for j, e in exps[triple.tau_map[i]].items():
            row[j] = row.get(j, 0) - e
        return {j: e for j, e in row.items() if e}

    rows = {i: a_row(i) for i in triple.gamma1}
    rho = mismatches(c, t)
    if all(v == t.one() for v in rho.values()):
        return c, t

    if mid_low is None:
        raise CohomologyError("no middle freedom for character repair")
    comb: dict[int, int] = {}
    prod = t.one()
    for i in triple.gamma1:
        for j, e in rows[i].items():
            comb[j] = comb.get(j, 0) + e
        prod = prod * rho[i]
    comb = {j: e for j, e in comb.items() if e}
    if set(comb) != {mid_low} or abs(comb[mid_low]) != 2:
        raise CohomologyError("unexpected character system shape")
    w, t = sqrt_witness(prod, t)
    if not w.in_semantic_base():
        raise CohomologyError("middle repair is not a base-field square")
    nu = w if comb[mid_low] > 0 else w.inv()
    c = [t.el(v) for v in c]
    c[mid_low] = c[mid_low] * nu
    rho = mismatches(c, t)
    pending = [i for i in sorted(triple.gamma1) if rho[i] != t.one()]
    if pending:
        i = pending[0]
        cand = [j for j, e in sorted(rows[i].items())
                if abs(e) == 1 and j != mid_low]
        if not cand:
            raise CohomologyError("no unit pivot for character repair")
        j = cand[0]
        u = rho[i] if rows[i][j] > 0 else rho[i].inv()
        if s0.apply(u) * u != t.one():
            raise CohomologyError("pair repair is not norm-one")
        c[j] = c[j] * u
        rho = mismatches(c, t)
    if any(v != t.one() for v in rho.values()):
        raise CohomologyError("character repair did not converge")
    return c, t


# ---------------------------------------------------------------------------
# equivalence and the public containers
# ---------------------------------------------------------------------------


def cocycles_equivalent(alg: LieAlgebra, triple: BDTriple, x1: Matrix,
                        x2: Matrix, kind: str = "nontwisted"):
    """Decide equivalence; on success return (True, (Q, C)) with
    X1 = Q X2 C exactly, else (False, None)."""
    reduce = nontwisted_reduce if kind == "nontwisted" else twisted_reduce
    i1, _, q1, c1, t1 = reduce(alg, triple, x1)
    i2, _, q2, c2, t2 = reduce(alg, triple, x2)
    if i1 != i2:
        return False, None
    t = t1.merge(t2)
    q = lift_matrix(q1, t) * group_inverse(alg, lift_matrix(q2, t), t)
    c = group_inverse(alg, lift_matrix(c2, t), t) * lift_matrix(c1, t)
    if lift_matrix(x1, t) != q * lift_matrix(x2, t) * c:
        raise CohomologyError("equivalence witness failed to verify")
    return True, (q, c)


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    representative: Matrix
    tower: Tower
    label: str
    diagonal: tuple | None


@dataclass(frozen=True, eq=False)
class CohomologySet:
    triple: BDTriple
    kind: str
    policy: FieldPolicy
    classes: tuple
    cardinality: int | None

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.classes)

    def describe(self) -> str:
        if self.cardinality is None:
            return "indexed by square classes"
        if self.cardinality == 0:
            return "empty"
        if self.cardinality == 1:
            return "trivial"
        return f"{self.cardinality} elements"


@dataclass(frozen=True, eq=False)
class Cocycle:
    alg: LieAlgebra
    triple: BDTriple
    matrix: Matrix
    kind: str

    def verify(self) -> bool:
        if self.kind == "twisted":
            return is_twisted_cocycle(self.alg, self.triple, self.matrix)
        return is_nontwisted_cocycle(self.alg, self.triple, self.matrix)
