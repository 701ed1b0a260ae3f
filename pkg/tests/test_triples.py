"""Triple admissibility, strings, spans, tau-chains, enumeration counts."""

import pytest

from bdcohomology.errors import TripleError
from bdcohomology.liealg import LieAlgebra
from bdcohomology.triples import BDTriple, enumerate_triples


def test_length_obstruction():
    # B_n: the short root alpha_n cannot be the image of a long root
    b3 = LieAlgebra("B", 3)
    with pytest.raises(TripleError):
        BDTriple(b3, {1: 2})
    with pytest.raises(TripleError):
        BDTriple(b3, {2: 1})
    BDTriple(b3, {0: 1})  # long to long is fine


def test_cycle_rejection():
    d3 = LieAlgebra("D", 3)
    with pytest.raises(TripleError):
        BDTriple(d3, {0: 0})
    with pytest.raises(TripleError):
        BDTriple(d3, {0: 1, 1: 0})
    with pytest.raises(TripleError):
        BDTriple(d3, {0: 1, 1: 2, 2: 0})


def test_pair_isometry():
    d3 = LieAlgebra("D", 3)
    # adjacency must be preserved: 0-1 adjacent, 1-2 not (fork at 0)
    with pytest.raises(TripleError):
        BDTriple(d3, {0: 1, 1: 2})
    BDTriple(d3, {0: 2, 1: 0})  # sends the adjacent pair to an adjacent pair


def test_enumeration_counts():
    # hand counts: B2 has only DJ; B3/C3 have DJ + two singletons;
    # D3 (= A3) has DJ + 6 singletons + 2 admissible pairs
    assert len(enumerate_triples(LieAlgebra("B", 2))) == 1
    assert len(enumerate_triples(LieAlgebra("C", 2))) == 1
    assert len(enumerate_triples(LieAlgebra("B", 3))) == 3
    assert len(enumerate_triples(LieAlgebra("C", 3))) == 3
    assert len(enumerate_triples(LieAlgebra("D", 3))) == 9


def test_enumeration_all_admissible_and_unique():
    for series, n in (("B", 3), ("C", 3), ("D", 4)):
        ts = enumerate_triples(LieAlgebra(series, n))
        assert len(set(ts)) == len(ts)
        assert ts[0].is_empty()


def test_strings():
    d5 = LieAlgebra("D", 5)
    tr = BDTriple(d5, {0: 1, 1: 2})
    assert tr.strings() == [[0, 1, 2]]
    tr2 = BDTriple(d5, {0: 1, 3: 4})
    assert tr2.strings() == [[0, 1], [3, 4]]


def test_span_and_tau_root():
    b3 = LieAlgebra("B", 3)
    tr = BDTriple(b3, {0: 1})
    span = tr.span_positive()
    assert span == [b3.simple[0]]
    assert tr.tau_root(b3.simple[0]) == b3.simple[1]
    with pytest.raises(TripleError):
        tr.tau_root(b3.simple[2])


def test_tau_chain_composite_root():
    # A-type chain inside D4: a1->a2->a3 moves the composite a1+a2 forward once
    d4 = LieAlgebra("D", 4)
    tr = BDTriple(d4, {0: 1, 1: 2})
    comp = tuple(x + y for x, y in zip(d4.simple[0], d4.simple[1]))
    chain = tr.tau_chain(comp)
    assert chain == [tuple(x + y for x, y in zip(d4.simple[1], d4.simple[2]))]
    assert (comp, chain[0]) in tr.wedge_set()


def test_wedge_pairs_powers():
    d5 = LieAlgebra("D", 5)
    tr = BDTriple(d5, {0: 1, 1: 2})
    pairs = tr.wedge_pairs()
    ks = {k for a, k, b in pairs if a == d5.simple[0]}
    assert ks == {1, 2}          # tau and tau^2 both apply to alpha_1
    assert all(k == 1 for a, k, b in pairs if a == d5.simple[1])


def test_describe():
    b3 = LieAlgebra("B", 3)
    assert BDTriple(b3, {}).describe() == "empty (Drinfeld-Jimbo)"
    assert BDTriple(b3, {0: 1}).describe() == "a1->a2"
