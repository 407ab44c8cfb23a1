import itertools

import numpy as np
import pytest

from rank2sheets.reps import build_matrix_rep
from rank2sheets.rootsys2 import (
    ALPHA,
    BETA,
    KINDS,
    Root,
    build_root_system,
    check_jacobi,
    commutator_coefficients,
    derive_structure_constants,
    parse_root,
    reflect,
)


def R(text):
    return parse_root(text)


def test_a1xa1_roots():
    rs = build_root_system("A1xA1")
    assert rs.positive_roots == (ALPHA, BETA)
    assert rs.braid_order == 2


def test_g2_canonical_order():
    rs = build_root_system("G2")
    assert [str(r) for r in rs.positive_roots] == ["a", "b", "a+b", "2a+b", "3a+b", "3a+2b"]
    assert rs.braid_order == 6


def test_g2_alpha_is_short():
    rs = build_root_system("G2")
    assert rs.inner(ALPHA, ALPHA) < rs.inner(BETA, BETA)
    assert rs.pairing(ALPHA, BETA) == -1
    assert rs.pairing(BETA, ALPHA) == -3


def test_b2_roots_alpha_long():
    rs = build_root_system("B2")
    assert rs.positive_roots == (R("a"), R("b"), R("a+b"), R("a+2b"))
    assert rs.inner(ALPHA, ALPHA) > rs.inner(BETA, BETA)


@pytest.mark.parametrize("kind", KINDS)
def test_reflection_closure_reproduces_roots(kind):
    rs = build_root_system(kind)
    found = {ALPHA, BETA}
    while True:
        new = {reflect(rs, s, r) for s in "ab" for r in found} | found
        if new == found:
            break
        found = new
    assert found == set(rs.roots)


def test_reflections():
    assert reflect(build_root_system("G2"), "b", ALPHA) == R("a+b")
    assert reflect(build_root_system("A2"), "a", R("a+b")) == BETA
    for kind in KINDS:
        assert reflect(build_root_system(kind), "a", ALPHA) == -ALPHA


@pytest.mark.parametrize("kind", KINDS)
def test_weyl_group_order_and_longest(kind):
    rs = build_root_system(kind)
    m = rs.braid_order
    assert len(rs.weyl_elements) == 2 * m
    w0 = rs.longest_element
    assert w0.length == m
    assert all(not w0.apply(r).is_positive() for r in rs.positive_roots)


@pytest.mark.parametrize("kind", KINDS)
def test_poincare_polynomial_at_one_counts_weyl_group(kind):
    rs = build_root_system(kind)
    assert rs.poincare(1) == len(rs.weyl_elements)
    assert rs.poincare(1, "P_a") * 2 == len(rs.weyl_elements)


def test_a1xa1_commutators_trivial():
    rs = build_root_system("A1xA1")
    assert commutator_coefficients(rs, ALPHA, BETA) == []
    sc = derive_structure_constants(rs)
    assert all(v == [] for v in sc.commutators.values())
    assert sc.eta[("a", BETA)] == 1 and sc.eta[("a", -BETA)] == 1


def _E(i, j):
    m = np.zeros((3, 3), dtype=object)
    m[i, j] = 1
    return m


def test_a2_commutator_matches_elementary_matrices():
    # [E12(x), E23(y)] = E13(xy) for x, y = 1
    x = np.eye(3, dtype=object) + _E(0, 1)
    y = np.eye(3, dtype=object) + _E(1, 2)
    xi = np.eye(3, dtype=object) - _E(0, 1)
    yi = np.eye(3, dtype=object) - _E(1, 2)
    assert np.array_equal(x.dot(y).dot(xi).dot(yi), np.eye(3, dtype=object) + _E(0, 2))
    assert commutator_coefficients(build_root_system("A2"), ALPHA, BETA) == [(1, 1, R("a+b"), 1)]


def test_a2_table_matches_matrix_model():
    rs = build_root_system("A2")
    sc = derive_structure_constants(rs)
    rep = build_matrix_rep("A2")
    for r, s in itertools.permutations(rs.roots, 2):
        if r == -s:
            continue
        br = rep.e[r] @ rep.e[s] - rep.e[s] @ rep.e[r]
        if rs.is_root(r + s):
            assert np.array_equal(br, sc.N[(r, s)] * rep.e[r + s])
        else:
            assert not br.any()


def test_g2_commutator_beta_alpha():
    terms = commutator_coefficients(build_root_system("G2"), BETA, ALPHA)
    assert [t[2] for t in terms] == [R("a+b"), R("2a+b"), R("3a+b"), R("3a+2b")]
    # the last constant is 2 in absolute value with the canonical product order
    assert sorted(abs(t[3]) for t in terms) == [1, 1, 1, 2]


@pytest.mark.parametrize("kind", KINDS)
def test_jacobi_identity(kind):
    rs = build_root_system(kind)
    check_jacobi(rs, derive_structure_constants(rs).N)


def test_parse_root_round_trip():
    for r in build_root_system("G2").roots:
        assert parse_root(str(r)) == r
    with pytest.raises(ValueError):
        build_root_system("G2").check_root(Root(2, 2))
