import random

import numpy as np
import pytest

from rank2sheets.flagfq import eval_word
from rank2sheets.poly import Polynomial, parse_poly
from rank2sheets.reps import build_matrix_rep
from rank2sheets.rootsys2 import ALPHA, BETA, build_root_system, parse_root
from rank2sheets.symchev import (
    collect,
    conjugate,
    conjugate_by_weyl,
    invert,
    membership_support_test,
    u,
    word,
)

R = parse_root
P = parse_poly


def nf_dict(nf):
    return {str(g): str(f) for g, f in nf.coeffs}


def test_one_parameter_additivity():
    nf = collect(word("G2", u(ALPHA, "x"), u(ALPHA, "y")))
    assert nf_dict(nf) == {"a": "x + y"}


def test_commuting_factors():
    nf = collect(word("A1xA1", u(BETA, "y"), u(ALPHA, "x")))
    assert nf_dict(nf) == {"a": "x", "b": "y"}


def test_invert():
    w = word("G2", u(ALPHA, "x"), u(BETA, "y"))
    inv = invert(w)
    assert [(l.root, l.arg) for l in inv.letters] == [(BETA, -Polynomial.var("y")), (ALPHA, -Polynomial.var("x"))]
    assert collect(w + inv).coeffs == ()


def test_conjugate_by_empty_word_is_collect():
    w = word("G2", u(BETA, "x"), u(ALPHA, "y"))
    assert conjugate(w, word("G2")) == collect(w)


def test_normal_generation_shape_g2():
    # u_b(y)^-1 u_a(x) u_b(y): every root but b, every coefficient nonconstant
    nf = conjugate(word("G2", u(ALPHA, "x")), word("G2", u(BETA, "y")))
    assert set(nf.support) == set(build_root_system("G2").positive_roots) - {BETA}
    assert all(not f.is_constant() for _, f in nf.coeffs)


def test_levi_big_cell_expansion():
    vinv = word("G2", u(R("3a+b"), "y1"), u(R("2a+b"), "y2"), u(R("a+b"), "y3"), u(R("3a+2b"), "y4"), u(BETA, "y5"))
    nf = conjugate(word("G2", u(BETA, "x")), invert(vinv))
    assert nf.as_dict() == {BETA: P("x"), R("3a+2b"): P("-x*y1")}


def test_levi_pb_expansion():
    vinv = word("G2", u(ALPHA, "y1"), u(R("3a+b"), "y2"), u(R("3a+2b"), "y3"), u(R("2a+b"), "y4"), u(R("a+b"), "y5"))
    nf = conjugate(word("G2", u(BETA, "x")), invert(vinv))
    assert nf.as_dict() == {
        BETA: P("x"),
        R("a+b"): P("x*y1"),
        R("2a+b"): P("x*y1^2"),
        R("3a+b"): P("x*y1^3"),
        R("3a+2b"): P("x^2*y1^3 - x*y2"),
    }


def test_membership_big_cell():
    rs = build_root_system("G2")
    vinv = word("G2", u(R("3a+b"), "y1"), u(R("2a+b"), "y2"), u(R("a+b"), "y3"), u(R("3a+2b"), "y4"), u(BETA, "y5"))
    nf = conjugate(word("G2", u(BETA, "x")), invert(vinv))
    obs = membership_support_test(nf, rs.longest_element, "P_a")
    assert sorted(map(str, obs)) == sorted(["-x*y1", "x"])


def test_membership_trivial_case():
    rs = build_root_system("G2")
    nf = collect(word("G2", u(ALPHA, "x")))
    assert membership_support_test(nf, rs.identity, "P_a") == []


def test_weyl_conjugation():
    nf = collect(word("A1xA1", u(BETA, "y")))
    assert [(l.root, str(l.arg)) for l in conjugate_by_weyl(nf, "a").letters] == [(BETA, "y")]
    nf = collect(word("G2", u(ALPHA, "x")))
    (letter,) = conjugate_by_weyl(nf, "a").letters
    assert letter.root == -ALPHA and abs(letter.arg.terms[(("x", 1),)]) == 1
    (letter,) = conjugate_by_weyl(nf, "b").letters
    assert letter.root == R("a+b")


@pytest.mark.parametrize("q", [5, 7])
def test_weyl_conjugation_matches_matrices(q):
    rep = build_matrix_rep("G2")
    for s in "ab":
        for g in build_root_system("G2").positive_roots:
            nf = collect(word("G2", u(g, "x")))
            lhs = rep.n(s, q) @ rep.u(g, 3, q) @ np.linalg.matrix_power(rep.n(s, q), 3) % q
            # n_s^-1 = n_s^3
            rhs = eval_word(conjugate_by_weyl(nf, s), {"x": 3}, q)
            assert np.array_equal(lhs % q, rhs % q)


def test_g2_commutator_matches_matrix_model():
    rng = random.Random(7)
    q = 7
    for _ in range(50):
        x, y = rng.randrange(q), rng.randrange(q)
        w = word("G2", u(ALPHA, "x"), u(BETA, "y"), u(ALPHA, Polynomial.var("x") * -1), u(BETA, Polynomial.var("y") * -1))
        vals = {"x": x, "y": y}
        assert np.array_equal(eval_word(w, vals, q), eval_word(collect(w), vals, q))


def test_negative_letters_rejected():
    with pytest.raises(ValueError):
        collect(word("G2", u(-ALPHA, "x")))
