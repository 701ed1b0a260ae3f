"""Belavin-Drinfeld triples (Gamma1, Gamma2, tau) on the simple roots.

tau must preserve inner products (lengths included: Cartan-matrix equality
alone says nothing for singletons) and be nilpotent: every tau-orbit must
leave Gamma1.  Roots are epsilon-coordinate tuples throughout; simple roots
are referred to by 0-based index.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .errors import TripleError
from .liealg import LieAlgebra, root_inner
from .linalg import Matrix
from .scalars import Q


class BDTriple:
    def __init__(self, alg: LieAlgebra, tau: dict[int, int]):
        self.alg = alg
        self.tau_map = dict(sorted(tau.items()))
        self.gamma1 = tuple(sorted(self.tau_map))
        self.gamma2 = tuple(sorted(self.tau_map.values()))
        self._simple_inv = Matrix(
            [[Q(c) for c in a] for a in zip(*alg.simple)]).inv()
        self._validate()

    # -- validation ----------------------------------------------------------

    def _validate(self):
        n = self.alg.rank
        vals = list(self.tau_map.values())
        if len(set(vals)) != len(vals):
            raise TripleError("tau is not injective")
        for i in list(self.tau_map) + vals:
            if not 0 <= i < n:
                raise TripleError(f"simple-root index {i} out of range")
        simple = self.alg.simple
        for i in self.gamma1:
            for j in self.gamma1:
                lhs = root_inner(simple[self.tau_map[i]], simple[self.tau_map[j]])
                if lhs != root_inner(simple[i], simple[j]):
                    raise TripleError(
                        f"tau is not an isometry on the pair ({i}, {j})")
        for i in self.gamma1:
            seen = set()
            cur = i
            while cur in self.tau_map:
                if cur in seen:
                    raise TripleError(f"tau-orbit of {i} cycles inside Gamma1")
                seen.add(cur)
                cur = self.tau_map[cur]

    # -- basic structure -----------------------------------------------------

    def is_empty(self) -> bool:
        """The Drinfeld-Jimbo triple: Gamma1 empty."""
        return not self.tau_map

    def strings(self) -> list[list[int]]:
        """Maximal tau-chains: start in Gamma1 \\ tau(Gamma1), walk through
        Gamma1, include the final landing index (outside Gamma1)."""
        starts = [i for i in self.gamma1 if i not in set(self.tau_map.values())]
        out = []
        for s in starts:
            seq = [s]
            while seq[-1] in self.tau_map:
                seq.append(self.tau_map[seq[-1]])
            out.append(seq)
        return out

    def string_of(self, i: int) -> list[int] | None:
        for s in self.strings():
            if i in s:
                return s
        return None

    # -- roots in the span of Gamma1 -----------------------------------------

    def simple_coords(self, root: tuple) -> list:
        col = self._simple_inv * Matrix([[Q(c)] for c in root])
        return [col[k, 0] for k in range(self.alg.rank)]

    def in_span(self, root: tuple) -> bool:
        return all(c == 0 for k, c in enumerate(self.simple_coords(root))
                   if k not in self.tau_map)

    def span_positive(self) -> list[tuple]:
        return [g for g in self.alg.positive if self.in_span(g)]

    def tau_root(self, root: tuple) -> tuple:
        """Image of a root supported on Gamma1, extended linearly."""
        if not self.in_span(root):
            raise TripleError(f"root {root} is not supported on Gamma1")
        out = (0,) * self.alg.rank
        for k, c in enumerate(self.simple_coords(root)):
            if c:
                img = self.alg.simple[self.tau_map[k]]
                out = tuple(x + c * y for x, y in zip(out, img))
        return tuple(int(x) for x in out)

    def tau_chain(self, root: tuple) -> list[tuple]:
        """[tau(root), tau^2(root), ...] for as long as tau applies."""
        out = []
        cur = root
        for _ in range(self.alg.dim):
            if not self.in_span(cur):
                break
            cur = self.tau_root(cur)
            out.append(cur)
        else:
            raise TripleError("tau-chain failed to terminate")
        return out

    def wedge_pairs(self) -> list[tuple]:
        """All (alpha, k, tau^k alpha) with alpha positive in span(Gamma1)."""
        out = []
        for a in self.span_positive():
            for k, b in enumerate(self.tau_chain(a), start=1):
                out.append((a, k, b))
        return out

    def wedge_set(self) -> frozenset:
        """The set {(alpha, beta)} of index pairs of the wedge part
        f_alpha ^ e_beta, beta = tau^k(alpha)."""
        return frozenset((a, b) for a, k, b in self.wedge_pairs())

    # -- identity and ordering ----------------------------------------------

    def key(self) -> tuple:
        return (self.alg.series, self.alg.rank, tuple(self.tau_map.items()))

    def __eq__(self, other):
        return isinstance(other, BDTriple) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def describe(self) -> str:
        if self.is_empty():
            return "empty (Drinfeld-Jimbo)"
        return ", ".join(f"a{i + 1}->a{j + 1}"
                         for i, j in self.tau_map.items())

    def __repr__(self):
        return f"BDTriple({self.alg.series}{self.alg.rank}: {self.describe()})"


def enumerate_triples(alg: LieAlgebra) -> list[BDTriple]:
    """All admissible triples, Drinfeld-Jimbo first, deterministic order."""
    n = alg.rank
    out = [BDTriple(alg, {})]
    for k in range(1, n):
        for g1 in combinations(range(n), k):
            for g2 in combinations(range(n), k):
                for perm in permutations(g2):
                    try:
                        out.append(BDTriple(alg, dict(zip(g1, perm))))
                    except TripleError:
                        pass
    out.sort(key=lambda tr: (len(tr.gamma1), tr.key()))
    return out
