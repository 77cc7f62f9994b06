"""Square-order fields, Paley/Peisert graphs and the invariant lemma."""

import pytest

from zconj.conjugacy import decide, intertwiner_lattice, verify_conjugator
from zconj.graphs import (
    NotThreeModFour,
    _is_irreducible,
    _projector_triple,
    _root_is_primitive,
    expected_invariant_counts,
    field_build,
    paley_adjacency,
    paley_idempotent_data,
    peisert_adjacency,
    quarter_cosets,
    verify_smith_lemma,
)
from zconj.linalg import charpoly
from zconj.matrix import IntMatrix
from zconj.modular import scaled_idempotent_invariants
from zconj.spectral import check_assumption, split_spectrum


def test_field_build_deterministic_modulus():
    f3 = field_build(3, 2)
    assert (f3.p, f3.t, f3.q) == (3, 1, 9)
    # ascending coefficients: t^2 + t + 2
    assert f3.modulus == (2, 1, 1)
    assert f3.beta == 3
    assert field_build(3, 2).modulus == f3.modulus


def test_modulus_root_must_be_primitive():
    # t^2 + 1 is irreducible over Z/3 but its root has order 4, so the
    # scan must pass it over
    assert _is_irreducible((1, 0, 1), 3)
    assert not _root_is_primitive((1, 0, 1), 3, 9)


def test_field_build_rejections():
    with pytest.raises(NotThreeModFour):
        field_build(5, 2)
    with pytest.raises(ValueError):
        field_build(3, 3)  # odd degree
    with pytest.raises(ValueError):
        field_build(9, 2)  # composite p


def test_field_tables():
    f3 = field_build(3, 2)
    assert sorted(f3.exp) == list(range(1, 9))
    assert f3.power(f3.beta, 8) == 1
    assert f3.power(f3.beta, 4) != 1
    for a in range(9):
        for b in range(9):
            assert f3.mul(a, b) == f3.mul(b, a)
    assert f3.mul(0, 5) == 0


def test_quarter_cosets():
    cosets = quarter_cosets(field_build(3, 2))
    assert [len(c) for c in cosets] == [2, 2, 2, 2]
    assert sorted(v for c in cosets for v in c) == list(range(1, 8 + 1))


def test_paley_adjacency_spectrum():
    x9 = paley_adjacency(field_build(3, 2))
    assert x9.nrows == 9
    assert all(sum(r) == 4 for r in x9.rows)
    sp = split_spectrum(x9)
    assert sp.eigenvalues == (-2, 1, 4)
    assert sp.multiplicities == (4, 4, 1)


def test_peisert_cospectral_not_equal():
    f3 = field_build(3, 2)
    x9, xs9 = paley_adjacency(f3), peisert_adjacency(f3)
    assert all(sum(r) == 4 for r in xs9.rows)
    assert x9 != xs9
    assert charpoly(x9) == charpoly(xs9)


def test_projector_closed_form():
    # at p = 3: E2 = -2J + 3X + 6I with trace 36
    data = paley_idempotent_data(3)
    x9 = paley_adjacency(field_build(3, 2))
    j = IntMatrix([[1] * 9 for _ in range(9)])
    assert data.E2 == j * (-2) + x9 * 3 + IntMatrix.identity(9) * 6
    assert data.E2.trace() == 36
    assert (data.k, data.r, data.s) == (4, 1, -2)


def test_smith_lemma_small():
    rep = verify_smith_lemma(3)
    assert rep.ok
    for entry in rep.entries:
        assert entry.invariants == (1, 3, 3, 9)
    assert expected_invariant_counts(3) == (1, 2, 1)
    assert expected_invariant_counts(7) == (1, 14, 9)
    assert expected_invariant_counts(11) == (1, 34, 25)


def test_assumption_clause_b():
    for build in (paley_adjacency, peisert_adjacency):
        rep = check_assumption(build(field_build(3, 2)))
        assert rep.holds and rep.clause_b


def test_self_intertwiner_rank():
    # rank over a field equals the sum of squared multiplicities
    x9 = paley_adjacency(field_build(3, 2))
    assert intertwiner_lattice(x9, x9).rank == 1 + 16 + 16


def test_decide_nine_vertex_pair():
    f3 = field_build(3, 2)
    x9, xs9 = paley_adjacency(f3), peisert_adjacency(f3)
    v = decide(x9, xs9)
    assert v.status == "CONJUGATE"
    assert v.conjugator is not None
    assert verify_conjugator(v.conjugator, x9, xs9)


def test_degree_four_field_graphs():
    f81 = field_build(3, 4)
    assert f81.q == 81
    assert all(sum(r) == 40 for r in paley_adjacency(f81).rows)
    assert all(sum(r) == 40 for r in peisert_adjacency(f81).rows)


def test_peisert_beta_choice():
    # a primitive element from the other odd power class gives a
    # different adjacency matrix, cospectral, with identical projector
    # Smith invariants
    from math import gcd

    f7 = field_build(7, 2)
    assert f7.log[f7.beta] == 1
    alt = next(
        f7.exp[i] for i in range(3, f7.q - 1, 4) if gcd(i, f7.q - 1) == 1
    )
    xs = peisert_adjacency(f7)
    xs_alt = peisert_adjacency(f7, beta=alt)
    assert xs != xs_alt
    assert charpoly(xs) == charpoly(xs_alt)
    k, r, s = 24, 3, -4
    _, e2a, e3a = _projector_triple(xs, 7, k, r, s)
    _, e2b, e3b = _projector_triple(xs_alt, 7, k, r, s)
    assert scaled_idempotent_invariants(e2a, 49) == scaled_idempotent_invariants(e2b, 49)
    assert scaled_idempotent_invariants(e3a, 49) == scaled_idempotent_invariants(e3b, 49)


def test_peisert_beta_must_be_primitive():
    f3 = field_build(3, 2)
    with pytest.raises(ValueError):
        peisert_adjacency(f3, beta=f3.exp[2])  # order divides (q-1)/2
