import pytest

from rank2sheets import papercalc as pc
from rank2sheets.poly import Polynomial, parse_poly
from rank2sheets.rootsys2 import KINDS, parse_root

R = parse_root


def P(text):
    return parse_poly(text, units=pc.TORUS_VARS)


def assertion(report, name):
    (a,) = [a for a in report.assertions if a["name"] == name]
    return a


@pytest.mark.parametrize("kind", KINDS)
def test_normal_generation(kind):
    rep = pc.verify_normal_generation(kind)
    assert rep.passed, rep.assertions


def test_convention_is_identity_basis():
    assert set(pc.convention_signs().values()) == {1}


def test_levi_expansions_match_published_exactly():
    for check in pc.LEVI_CHECKS:
        assert all(m["exact"] for m in pc._matches(check, pc.convention_signs()).values())


def test_other_a1_beta_coefficient():
    computed = pc._computed_for("other-a1")
    assert computed[R("b")] == P("(b - 1)*x1")


def test_other_a2_exact_coefficients():
    computed = pc._computed_for("other-a2")
    assert computed[R("a+b")] == P("x1*y1 + y2")
    assert computed[R("a")] == P("(a - 1)*x1")


def test_other_a2_printed_nine_is_three():
    # the printed coefficient -9 of x1^2 y1 y2 comes out as -3
    diff = pc._matches("other-a2", pc.convention_signs())[R("3a+2b")]
    assert diff["support"] and not diff["abs"]
    assert diff["changed"] == ["x1^2*y1*y2: -9 -> -3"]


def test_other_a1_three_alpha_beta_discrepancy():
    diff = pc._matches("other-a1", pc.convention_signs())[R("3a+b")]
    assert diff["extra"] == ["-3*x3*y1"]


def test_no_sign_vector_matches_all_published_formulas():
    signs, matched, total = pc.global_sign_search()
    assert total == 15
    assert matched < total


def test_compare_formula():
    res = pc.compare_formula(P("x - y"), P("x + y"))
    assert res["support"] and res["abs"] and not res["exact"]


def test_coordinate_locus():
    assert pc.coordinate_locus([P("y1"), P("z^2")]) == {"y1", "z"}
    assert pc.coordinate_locus([P("1")]) is None


def test_levi_rejects_three():
    with pytest.raises(pc.UnsupportedPrime):
        pc.verify_levi_alpha2_case(primes=(3, 5))


def test_levi_report_details():
    rep = pc.verify_levi_alpha2_case()
    assert assertion(rep, "big cell obstructions are {x, -x*y1}")["ok"]
    assert assertion(rep, "big cell: x = 0 forced, no fixed points")["ok"]
    assert assertion(rep, "codim-1 cell: condition is y1 = 0")["ok"]
    assert assertion(rep, "symbolic and counted codim-1 dimensions agree")["ok"]
    assert assertion(rep, "G/P_b fits are (3, empty)")["ok"]
    # the fixed locus on the codim-1 cell is two-dimensional, not three
    assert assertion(rep, "codim-1 cell fixed locus has dimension 3")["detail"] == 2


def test_count_solutions_simple():
    a, b = Polynomial.unit("a"), Polynomial.unit("b")
    # a = 1 and b = 1: exactly one point with y free over F_5 -> 5 points
    n = pc.count_solutions([a - 1, b - 1], ["a", "b", "y1"], {}, 5)
    assert n == 5


@pytest.mark.parametrize("n", [1, 2])
def test_other_case_counts(n):
    rep = pc._verify_other(n, (5, 7, 11), pc.DEFAULT_SEED)
    count_checks = [a for a in rep.assertions if not a["name"].startswith("formula")]
    assert count_checks and all(a["ok"] for a in count_checks), count_checks


def test_gl2_cubic_stabilizer_is_six():
    for q in (5, 7, 11):
        assert pc.gl2_cubic_stabilizer(q) == 6


def test_sym3():
    rep = pc.verify_sym3_open_orbit()
    assert rep.passed


def test_stabilizer_of_zero_is_whole_levi():
    q = 5
    mats = pc._module_action("P_a", q)
    assert pc.stabilizer_count((0, 0, 0, 0), mats, q) == len(mats)


def test_run_check_unknown():
    with pytest.raises(ValueError):
        pc.run_check("nope")
