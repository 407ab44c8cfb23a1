"""Reproductions of the explicit computations behind the rank-2 W-action.

Each ``verify_*`` function recomputes a displayed formula or dimension claim
symbolically, compares it with the published statement, and cross-checks
the geometric conclusion by counting F_q-points.  Published formulas are
compared after a search over sign re-choices of the positive root vectors
(``e_g -> -e_g``), since they depend on the Chevalley basis.
"""
from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .flagfq import (
    InconsistentDimension,
    check_prime,
    estimate_dimension,
    fixed_points,
    primitive_root,
    root_gens,
)
from .poly import Polynomial, coefficients_in, parse_poly
from .reps import build_adjoint_rep
from .rootsys2 import ALPHA, BETA, KINDS, Root, build_root_system, derive_structure_constants, parse_root
from .symchev import (
    GroupWord,
    UNormalForm,
    conjugate,
    invert,
    membership_support_test,
    torus,
    u,
    word,
)

DEFAULT_SEED = 20240607
GENERAL_SAMPLES = 20


class UnsupportedPrime(ValueError):
    pass


@dataclass
class VerificationReport:
    check_id: str
    status: str = "pass"
    convention_sign_vector: dict | None = None
    evidence: list = field(default_factory=list)
    cross_checks: list = field(default_factory=list)
    assertions: list = field(default_factory=list)

    def add(self, description: str, value) -> None:
        self.evidence.append((description, _show(value)))

    def cross(self, description: str, value) -> None:
        self.cross_checks.append((description, _show(value)))

    def require(self, name: str, ok: bool, detail=None) -> bool:
        self.assertions.append({"name": name, "ok": bool(ok), "detail": _show(detail)})
        if not ok:
            self.status = "fail"
        return bool(ok)

    @property
    def passed(self) -> bool:
        return self.status == "pass" and bool(self.evidence)

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "status": self.status,
            "convention_sign_vector": self.convention_sign_vector,
            "evidence": [list(e) for e in self.evidence],
            "cross_checks": [list(c) for c in self.cross_checks],
            "assertions": self.assertions,
        }


def _show(v):
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    if isinstance(v, Polynomial) or isinstance(v, Root):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _show(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        items = sorted(v, key=str) if isinstance(v, (set, frozenset)) else v
        return [_show(x) for x in items]
    return str(v)


# ---------------------------------------------------------------------------
# published formulas, transcribed verbatim

R = parse_root

PAPER_FORMULAS = {
    # conjugation of u_b(x) by v, v^-1 in P_alpha^u
    "levi/P_a": {
        "vars": {"x": R("b"), "y1": R("3a+b"), "y2": R("2a+b"), "y3": R("a+b"), "y4": R("3a+2b"), "y5": R("b")},
        "coeffs": {R("3a+2b"): "-x*y1", R("b"): "x"},
    },
    # same with v^-1 in P_beta^u
    "levi/P_b": {
        "vars": {"x": R("b"), "y1": R("a"), "y2": R("3a+b"), "y3": R("3a+2b"), "y4": R("2a+b"), "y5": R("a+b")},
        "coeffs": {
            R("b"): "x",
            R("a+b"): "x*y1",
            R("2a+b"): "x*y1^2",
            R("3a+b"): "x*y1^3",
            R("3a+2b"): "x^2*y1^3 - x*y2",
        },
    },
    "other-a1": {
        "vars": {"x1": R("b"), "x2": R("a+b"), "x3": R("2a+b"), "y1": R("a"), "y2": R("3a+b")},
        "coeffs": {
            R("b"): "(b - 1)*x1",
            R("a+b"): "(a*b - 1)*x2 + x1*y1",
            R("2a+b"): "(a^2*b - 1)*x3 + 2*x2*y1 - x1*y1^2",
            R("3a+b"): "y2 - 6*x2*y1^2 + x1*y1^3",
        },
    },
    "other-a2": {
        "vars": {"x1": R("a"), "x2": R("3a+b"), "x3": R("3a+2b"), "y1": R("b"), "y2": R("a+b")},
        "coeffs": {
            R("a"): "(a - 1)*x1",
            R("3a+b"): "(a^3*b - 1)*x2 + x1^3*y1 - 3*x1^2*y2",
            R("3a+2b"): "(a^3*b^2 - 1)*x3 - x2*y1 - 9*x1^2*y1*y2 - x1^3*y1^2 - 3*x1*y2^2",
            R("a+b"): "x1*y1 + y2",
        },
    },
}

TORUS_VARS = ("a", "b")


def paper_coefficients(check: str) -> dict:
    return {r: parse_poly(s, units=TORUS_VARS) for r, s in PAPER_FORMULAS[check]["coeffs"].items()}


# ---------------------------------------------------------------------------
# sign conventions


def resign(coeffs: dict, var_roots: dict, signs: dict) -> dict:
    """Coefficients rewritten in the basis with e_g replaced by signs[g] e_g.

    u_g(f) = u'_g(s_g f) and each input variable attached to root g is
    replaced by s_g times itself.
    """
    sub = {v: Polynomial.const(signs[g]) * Polynomial.var(v) for v, g in var_roots.items() if signs[g] < 0}
    return {g: (f.subs(sub) if sub else f) * signs[g] for g, f in coeffs.items()}


def sign_vectors(kind: str = "G2"):
    roots = build_root_system(kind).positive_roots
    for bits in itertools.product((1, -1), repeat=len(roots)):
        yield dict(zip(roots, bits))


def compare_formula(computed: Polynomial, published: Polynomial) -> dict:
    """Exact, support and absolute-coefficient comparison of two polynomials."""
    ct, pt = computed.terms, published.terms
    return {
        "exact": ct == pt,
        "support": set(ct) == set(pt),
        "abs": set(ct) == set(pt) and all(abs(ct[m]) == abs(pt[m]) for m in ct),
        "missing": [str(Polynomial({m: c}, units=published.units)) for m, c in pt.items() if m not in ct],
        "extra": [str(Polynomial({m: c}, units=computed.units)) for m, c in ct.items() if m not in pt],
        "changed": [
            f"{Polynomial({m: 1}, units=computed.units)}: {pt[m]} -> {ct[m]}"
            for m in ct
            if m in pt and ct[m] != pt[m]
        ],
    }


def _computed_for(check: str) -> dict:
    return {
        "levi/P_a": lambda: _levi_expansion("P_a")[0].as_dict(),
        "levi/P_b": lambda: _levi_expansion("P_b")[0].as_dict(),
        "other-a1": lambda: _other_system(1)[0].as_dict(),
        "other-a2": lambda: _other_system(2)[0].as_dict(),
    }[check]()


def _matches(check: str, signs: dict) -> dict:
    computed = resign(_computed_for(check), PAPER_FORMULAS[check]["vars"], signs)
    out = {}
    for g, f in paper_coefficients(check).items():
        out[g] = compare_formula(computed.get(g, Polynomial.const(0)), f)
    return out


def global_sign_search(checks: Sequence[str] = tuple(PAPER_FORMULAS)) -> tuple[dict, int, int]:
    """Sign vector matching the most published formulas, over all 2^6 choices.

    Ties go to the first vector in enumeration order, which starts with the
    unchanged basis.  Returns (signs, matched, total).
    """
    total = sum(len(PAPER_FORMULAS[c]["coeffs"]) for c in checks)
    best, best_n = None, -1
    for signs in sign_vectors():
        n = sum(m["exact"] for c in checks for m in _matches(c, signs).values())
        if n > best_n:
            best, best_n = signs, n
    return best, best_n, total


LEVI_CHECKS = ("levi/P_a", "levi/P_b")


@lru_cache(maxsize=None)
def convention_signs() -> dict:
    """The run-wide basis convention: the re-choice fixed by the Levi expansions."""
    return global_sign_search(LEVI_CHECKS)[0]


def _sign_dict(signs: dict) -> dict:
    return {str(g): s for g, s in signs.items()}


def _check_published(report: VerificationReport, check: str, signs: dict) -> bool:
    """Record the comparison of every published formula of ``check``."""
    ok = True
    for g, m in _matches(check, signs).items():
        report.add(f"published A/coefficient on {g}", PAPER_FORMULAS[check]["coeffs"][g])
        if not m["exact"]:
            report.add(
                f"diff on {g}",
                {"support_equal": m["support"], "abs_equal": m["abs"], "missing": m["missing"], "extra": m["extra"], "changed": m["changed"]},
            )
        ok &= report.require(f"formula on {g} matches (global sign re-choice)", m["exact"])
    return ok


# ---------------------------------------------------------------------------
# coordinate loci


class UnsupportedLocus(ValueError):
    pass


def coordinate_locus(conditions: Iterable[Polynomial]) -> set | None:
    """Variables forced to vanish by conditions ``f = 0``.

    Handles the case met in rank 2, where after substituting known zeros
    every condition is a nonzero constant (no solutions: returns None), zero,
    or a monomial in one variable.  Anything else raises UnsupportedLocus.
    """
    conds = list(conditions)
    zeros: set = set()
    changed = True
    while changed:
        changed = False
        for f in conds:
            g = f.subs({v: 0 for v in zeros}) if zeros else f
            if g.is_zero():
                continue
            if g.is_constant():
                return None
            if len(g.terms) == 1 and len(g.variables) == 1:
                zeros |= g.variables
                changed = True
                continue
            if len(g.terms) == 1:
                continue  # union of coordinate loci: revisit after more zeros
            raise UnsupportedLocus(f"condition {g} is not a coordinate condition")
    for f in conds:
        g = f.subs({v: 0 for v in zeros}) if zeros else f
        if not g.is_zero():
            raise UnsupportedLocus(f"condition {g} is not a coordinate condition")
    return zeros


def fixed_conditions(nf: UNormalForm, w, parabolic: str, universal: str = "x") -> list[Polynomial]:
    """Conditions on the remaining variables for nf to lie in ^wP for all values of ``universal``."""
    out = []
    for f in membership_support_test(nf, w, parabolic):
        out.extend(coefficients_in(f, [universal]))
    return out


# ---------------------------------------------------------------------------
# normal generation


def verify_normal_generation(kind: str) -> VerificationReport:
    rs = build_root_system(kind)
    sc = derive_structure_constants(rs)
    rep = VerificationReport(f"normal-generation/{kind}")
    nf = conjugate(word(kind, u(ALPHA, "x")), word(kind, u(BETA, "y")))
    target = set(rs.positive_roots) - {BETA}
    for g, f in nf.coeffs:
        rep.add(f"f on {g}", f)
    rep.require("support avoids beta", set(nf.support) <= target, nf.support)
    rep.require("every f nonconstant", all(not f.is_constant() for _, f in nf.coeffs))
    # normal closure in U of U_alpha: add every root produced by a nonzero
    # commutator with an arbitrary positive root
    gen = {ALPHA}
    grow = True
    while grow:
        grow = False
        for g in list(gen):
            for d in rs.positive_roots:
                if d == g:
                    continue
                for _, _, r, c in sc.commutators[(g, d)]:
                    if c and r not in gen:
                        gen.add(r)
                        grow = True
    rep.add("generated root set", sorted(gen, key=rs.order_key))
    rep.require("generated root set is R+ minus beta", gen == target, sorted(gen, key=rs.order_key))
    # every root of the support is reached from the T-stable closure of nf
    rep.require("support lies in the generated set", set(nf.support) <= gen)
    return rep


# ---------------------------------------------------------------------------
# Levi subgroups in G2: U_beta-fixed points on G/P_a and G/P_b


def _levi_vinv(parabolic: str) -> GroupWord:
    vs = PAPER_FORMULAS[f"levi/{parabolic}"]["vars"]
    return word("G2", *[u(vs[f"y{i}"], f"y{i}") for i in range(1, 6)])


@lru_cache(maxsize=None)
def _levi_expansion(parabolic: str, extra: str | None = None):
    """Normal form of v^-1 u_b(x) v; ``extra`` prepends u_extra(z) to v^-1."""
    vinv = _levi_vinv(parabolic)
    if extra is not None:
        vinv = word("G2", u(parse_root(extra), "z")) + vinv
    nf = conjugate(word("G2", u(BETA, "x")), invert(vinv))
    return nf, vinv


def _cells_by_length(kind: str, parabolic: str) -> dict:
    return {w.length: w for w in build_root_system(kind).min_coset_reps(parabolic)}


def _stabiliser_roots(w, parabolic: str) -> list:
    rs = build_root_system("G2")
    allowed = {w.apply(r) for r in rs.parabolic_roots(parabolic)}
    return [g for g in rs.positive_roots if g in allowed]


def _locus_report(rep, label, nf, w, parabolic, n_coords):
    conds = fixed_conditions(nf, w, parabolic)
    rep.add(f"{label}: obstructions", membership_support_test(nf, w, parabolic))
    rep.add(f"{label}: conditions for all x", conds)
    zeros = coordinate_locus(conds)
    if zeros is None:
        rep.add(f"{label}: locus", "empty")
        return None, None
    stab = _stabiliser_roots(w, parabolic)
    dim = n_coords - len(zeros) - len(stab)
    rep.add(f"{label}: forced zeros", sorted(zeros))
    rep.add(f"{label}: stabiliser roots U cap ^wP", stab)
    rep.add(f"{label}: locus dimension", dim)
    return zeros, dim


def _fit(profile: dict):
    try:
        d = estimate_dimension(profile)
    except InconsistentDimension:
        return "inconsistent"
    return "empty" if d is None else d


def verify_levi_alpha2_case(primes: Sequence[int] = (5, 7)) -> VerificationReport:
    primes = [check_prime(q) for q in primes]
    if 3 in primes:
        raise UnsupportedPrime(
            "p = 3 is excluded: for G2 the case P = P_a is then exchanged with P_b by a "
            "special isogeny, which is not implemented; use primes >= 5"
        )
    if len(primes) < 2:
        raise ValueError("need at least two primes for exponent fits")
    rs = build_root_system("G2")
    rep = VerificationReport("levi")
    signs = convention_signs()
    rep.convention_sign_vector = _sign_dict(signs)
    w0 = rs.longest_element
    w1 = rs.weyl(("b",) + w0.word)
    sa_w0 = rs.weyl(("a",) + w0.word)
    cells_a = _cells_by_length("G2", "P_a")
    cells_b = _cells_by_length("G2", "P_b")

    # Q = P_a
    nf, _ = _levi_expansion("P_a")
    rep.add("v^-1 u_b(x) v, v^-1 in P_a^u", nf)
    _check_published(rep, "levi/P_a", signs)
    obs = membership_support_test(nf, w0, "P_a")
    rep.require("big cell obstructions are {x, -x*y1}", sorted(map(str, obs)) == sorted(["x", "-x*y1"]), obs)
    zeros, _ = _locus_report(rep, "P_a big cell (Q^u coordinates)", nf, w0, "P_a", 5)
    rep.require("big cell: x = 0 forced, no fixed points", zeros is None)
    conds = fixed_conditions(nf, w1, "P_a")
    rep.require("codim-1 cell: condition is y1 = 0", coordinate_locus(conds) == {"y1"}, conds)
    # the published count takes y1..y4 as coordinates on the cell
    rep.add("codim-1 cell locus dimension in the published coordinates y1..y4", 3)
    # honest count: v^-1 = u_a(z) * (Q^u word) runs over all of U
    nf_u, _ = _levi_expansion("P_a", extra="a")
    zeros_u, dim_u = _locus_report(rep, "P_a codim-1 cell (U coordinates)", nf_u, w1, "P_a", 6)
    rep.require("codim-1 cell: y1 = 0 among the forced zeros", zeros_u is not None and "y1" in zeros_u, zeros_u)
    rep.require("codim-1 cell fixed locus has dimension 3", dim_u == 3, dim_u)

    prof = {}
    for q in primes:
        res = fixed_points(root_gens("G2", [BETA], q), "G2", "P_a", q, per_cell=True)
        prof[q] = res["per_cell"]
        rep.cross(f"U_b-fixed points on G/P_a per cell, q={q}", res["per_cell"])
    big, codim1 = cells_a[5].name, cells_a[4].name
    fit_big = _fit({q: prof[q][big] for q in primes})
    fit_c1 = _fit({q: prof[q][codim1] for q in primes})
    rep.cross("exponent fit on big cell of G/P_a", fit_big)
    rep.cross("exponent fit on codim-1 cell of G/P_a", fit_c1)
    rep.require("G/P_a fits are (empty, 3)", (fit_big, fit_c1) == ("empty", 3), [fit_big, fit_c1])
    rep.require("symbolic and counted codim-1 dimensions agree", fit_c1 == dim_u, [dim_u, fit_c1])

    # P = P_b
    nf, _ = _levi_expansion("P_b")
    rep.add("v^-1 u_b(x) v, v^-1 in P_b^u", nf)
    _check_published(rep, "levi/P_b", signs)
    nf_u, _ = _levi_expansion("P_b", extra="b")
    zeros, dim = _locus_report(rep, "P_b big cell (U coordinates)", nf_u, w0, "P_b", 6)
    rep.require("P_b big cell: y1 = y2 = 0", zeros is not None and {"y1", "y2"} <= zeros, zeros)
    rep.require("P_b big cell fixed locus has dimension 3", dim == 3, dim)
    zeros, _ = _locus_report(rep, "P_b s_a w0 cell (U coordinates)", nf_u, sa_w0, "P_b", 6)
    rep.require("P_b s_a w0 cell: no fixed points", zeros is None)
    prof = {}
    for q in primes:
        res = fixed_points(root_gens("G2", [BETA], q), "G2", "P_b", q, per_cell=True)
        prof[q] = res["per_cell"]
        rep.cross(f"U_b-fixed points on G/P_b per cell, q={q}", res["per_cell"])
    fit_big = _fit({q: prof[q][cells_b[5].name] for q in primes})
    fit_c1 = _fit({q: prof[q][cells_b[4].name] for q in primes})
    rep.cross("exponent fits on G/P_b (big, codim-1)", [fit_big, fit_c1])
    rep.require("G/P_b fits are (3, empty)", (fit_big, fit_c1) == (3, "empty"), [fit_big, fit_c1])
    return rep


# ---------------------------------------------------------------------------
# the two non-reductive subgroups in G2


_A_INV, _B_INV = Polynomial.unit("a", -1), Polynomial.unit("b", -1)

# (coordinates of u, letters conjugated, product order of the displayed result)
_SYSTEMS = {
    1: {
        "u": ["b", "a+b", "2a+b"],
        "y": ["a", "3a+b"],
        "order": ["b", "a+b", "2a+b", "3a+b", "3a+2b", "a"],
        "outside": ["b", "a+b", "2a+b", "3a+b"],
        "open_u": ["a+b", "2a+b", "3a+b"],
        "open_y": "b",
        "open_outside": ["b", "a+b", "2a+b", "3a+b"],
    },
    2: {
        "u": ["a", "3a+b", "3a+2b"],
        "y": ["b", "a+b"],
        "order": ["a", "3a+b", "3a+2b", "2a+b", "b", "a+b"],
        "outside": ["a", "3a+b", "3a+2b", "a+b"],
        "open_u": ["a+b", "3a+b", "3a+2b"],
        "open_y": "a",
        "open_outside": ["a", "a+b", "3a+b", "3a+2b"],
    },
}


def _conj_word(u_roots, y_roots):
    uu = word("G2", *[u(parse_root(r), f"x{i + 1}") for i, r in enumerate(u_roots)])
    x = word("G2", torus(_A_INV, _B_INV), *[u(parse_root(r), f"y{i + 1}") for i, r in enumerate(y_roots)])
    return uu, x


@lru_cache(maxsize=None)
def _other_system(n: int):
    """^u(t u(y1) u(y2)) = u X u^-1 collected in the displayed order, a = alpha(t^-1)."""
    s = _SYSTEMS[n]
    uu, x = _conj_word(s["u"], s["y"])
    nf = conjugate(x, invert(uu), order=[parse_root(r) for r in s["order"]])
    return nf, [nf.coeff(parse_root(r)) for r in s["outside"]]


@lru_cache(maxsize=None)
def _open_cell_system(n: int):
    s = _SYSTEMS[n]
    uu, x = _conj_word(s["open_u"], [s["open_y"]])
    nf = conjugate(x, invert(uu))
    return nf, [nf.coeff(parse_root(r)) for r in s["open_outside"]]


_UNKNOWNS = ["a", "b", "y1", "y2"]


def _grid(q: int, unknowns):
    axes = [np.arange(1, q) if v in TORUS_VARS else np.arange(q) for v in unknowns]
    return np.meshgrid(*axes, indexing="ij")


def count_solutions(polys: Sequence[Polynomial], unknowns, fixed: dict, q: int, return_points=False):
    """Number of (a, b) in (F_q^*)^2 and other unknowns in F_q solving every poly = 0."""
    grid = _grid(q, unknowns)
    names = list(unknowns) + list(fixed)
    args = list(grid) + [fixed[v] for v in fixed]
    ok = np.ones(grid[0].shape, dtype=bool)
    for f in polys:
        ok &= f.as_function(names, q)(*args) % q == 0
    if not return_points:
        return int(ok.sum())
    pts = np.stack([g[ok] for g in grid], axis=1)
    return int(ok.sum()), pts


def jacobian_determinant(polys: Sequence[Polynomial], unknowns) -> Polynomial:
    """Determinant of the Jacobian matrix d(polys)/d(unknowns)."""
    m = [[f.derivative(v) for v in unknowns] for f in polys]

    def det(rows):
        if len(rows) == 1:
            return rows[0][0]
        total = Polynomial.const(0)
        for j, entry in enumerate(rows[0]):
            if entry.is_zero():
                continue
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            term = entry * det(minor)
            total = total + (term if j % 2 == 0 else -term)
        return total

    return det(m)


def _degenerate(polys, jac, fixed: dict, q: int) -> bool:
    """True if some solution is a singular point of the system (Jacobian criterion)."""
    _, pts = count_solutions(polys, _UNKNOWNS, fixed, q, return_points=True)
    for p in pts:
        vals = dict(zip(_UNKNOWNS, (int(v) for v in p)))
        vals.update(fixed)
        if jac.evaluate(vals, q) == 0:
            return True
    return False


def _verify_other(n: int, primes: Sequence[int], seed: int) -> VerificationReport:
    primes = [check_prime(q) for q in primes]
    check = f"other-a{n}"
    rep = VerificationReport(check)
    signs = convention_signs()
    rep.convention_sign_vector = _sign_dict(signs)
    own, n_own, n_total = global_sign_search((check,))
    rep.add("best re-choice for these formulas alone", {"signs": _sign_dict(own), "matched": f"{n_own}/{n_total}"})
    nf, polys = _other_system(n)
    rep.add("collected conjugate", nf)
    for r, f in zip(_SYSTEMS[n]["outside"], polys):
        rep.add(f"computed A on {r}", f)
    _check_published(rep, check, signs)

    # general points of the codimension-1 cell
    rng = np.random.default_rng(seed)
    jac = jacobian_determinant(polys, _UNKNOWNS)
    rep.add("Jacobian determinant in (a, b, y1, y2)", jac)
    counts = {}
    for q in primes:
        triples = rng.integers(1, q, size=(GENERAL_SAMPLES, 3))
        counts[q] = [
            (tuple(int(v) for v in t), count_solutions(polys, _UNKNOWNS, dict(zip(("x1", "x2", "x3"), map(int, t))), q))
            for t in triples
        ]
    generic = Counter(c for q in primes for _, c in counts[q]).most_common(1)[0][0]
    rep.cross("generic solution count", generic)
    for q in primes:
        bad = [(t, c) for t, c in counts[q] if c != generic]
        excused = [(t, c) for t, c in bad if _degenerate(polys, jac, dict(zip(("x1", "x2", "x3"), t)), q)]
        unexcused = [x for x in bad if x not in excused]
        rep.cross(f"q={q}: counts of {GENERAL_SAMPLES} general triples", Counter(c for _, c in counts[q]))
        rep.cross(f"q={q}: triples on the singular locus (excused)", [list(t) + [c] for t, c in excused])
        rep.require(
            f"q={q}: at least {GENERAL_SAMPLES - 1} of {GENERAL_SAMPLES} general triples give the generic count",
            GENERAL_SAMPLES - len(unexcused) >= GENERAL_SAMPLES - 1,
            [list(t) + [c] for t, c in unexcused],
        )
    rep.require("generic count is finite and the same for every q", generic < min(primes))

    # two of x1, x2, x3 zero: positive-dimensional solution sets
    for i in range(3):
        fixed = {"x1": 0, "x2": 0, "x3": 0}
        fixed[f"x{i + 1}"] = 1
        prof = {q: count_solutions(polys, _UNKNOWNS, fixed, q) for q in primes}
        rep.cross(f"only x{i + 1} nonzero: solution counts", prof)
        fit = _fit(prof)
        rep.require(f"only x{i + 1} nonzero: counts grow with q", isinstance(fit, int) and fit >= 1, fit)

    # open cell: infinite only if two coordinates vanish
    nf_open, open_polys = _open_cell_system(n)
    rep.add("open cell: collected conjugate", nf_open)
    # the generic point of each stratum decides; maxima are shown for reference
    tallies: dict = {}
    for q in primes:
        for x in itertools.product(range(q), repeat=3):
            c = count_solutions(open_polys, ["a", "b", "y1"], dict(zip(("x1", "x2", "x3"), x)), q)
            pat = sum(v == 0 for v in x)
            tallies.setdefault(pat, {}).setdefault(q, Counter())[c] += 1
    by_pattern = {pat: {q: t.most_common(1)[0][0] for q, t in d.items()} for pat, d in tallies.items()}
    rep.cross("open cell: max solution count by number of zero coordinates",
              {pat: {q: max(t) for q, t in d.items()} for pat, d in tallies.items()})
    rep.cross("open cell: generic solution count by number of zero coordinates", by_pattern)
    # A curve of solutions has at least q - 1 points (one per value of a or
    # b); finite sets stay below that.  Sizes of finite sets may still move
    # with q, e.g. through cube roots of unity when q = 1 mod 3.
    for pat, prof in sorted(by_pattern.items()):
        small = all(c < q - 1 for q, c in prof.items())
        if pat <= 1:
            rep.require(f"open cell, {pat} zero coordinates: finitely many solutions", small, prof)
        else:
            big = all(c >= q - 1 for q, c in prof.items())
            rep.require(f"open cell, {pat} zero coordinates: infinitely many solutions", big, prof)
    return rep


def verify_other_alpha1_case(primes: Sequence[int] = (5, 7, 11), seed: int = DEFAULT_SEED) -> VerificationReport:
    return _verify_other(1, primes, seed)


def verify_other_alpha2_case(primes: Sequence[int] = (5, 7, 11), seed: int = DEFAULT_SEED) -> VerificationReport:
    return _verify_other(2, primes, seed)


# ---------------------------------------------------------------------------
# the Levi module P_a^u / U_{3a+2b}


def levi_elements(parabolic: str, q: int):
    """Adjoint matrices of every element of the Levi subgroup L(F_q) of ``parabolic``.

    L = T U_s  union  T U_s n_s U_s with s the simple root of the Levi.
    """
    ad = build_adjoint_rep("G2")
    s = "a" if parabolic == "P_a" else "b"
    r = ALPHA if s == "a" else BETA
    us = [ad.u(r, x, q) for x in range(q)]
    ns = ad.n(s, q)
    ts = [ad.h(lam, mu, q) for lam in range(1, q) for mu in range(1, q)]
    for t in ts:
        for ux in us:
            tu = t @ ux % q
            yield tu
            tun = tu @ ns % q
            for uy in us:
                yield tun @ uy % q


MODULE_ROOTS = {
    "P_a": [R("b"), R("a+b"), R("2a+b"), R("3a+b")],
    "P_b": [R("a"), R("a+b"), R("3a+b"), R("3a+2b")],
}


def _module_action(parabolic: str, q: int) -> np.ndarray:
    """Stack of 4x4 matrices of L(F_q) on p^u modulo the one-dimensional summand."""
    ad = build_adjoint_rep("G2")
    idx = [ad.index(g) for g in MODULE_ROOTS[parabolic]]
    mats = [m[np.ix_(idx, idx)] for m in levi_elements(parabolic, q)]
    return np.array(mats, dtype=np.int64)


def stabilizer_count(v: Sequence[int], mats: np.ndarray, q: int) -> int:
    v = np.asarray(v, dtype=np.int64) % q
    img = np.einsum("nij,j->ni", mats, v) % q
    return int(np.all(img == v, axis=1).sum())


def orbit_size(v: Sequence[int], mats: np.ndarray, q: int) -> int:
    v = np.asarray(v, dtype=np.int64) % q
    img = np.einsum("nij,j->ni", mats, v) % q
    return len(np.unique(img, axis=0))


def gl2_cubic_stabilizer(q: int, f=(0, 1, 1, 0)) -> int:
    """Stabiliser of a binary cubic in GL2(F_q) acting on Sym^3 (x) det^-1.

    ``f`` lists the coefficients of x^3, x^2 y, x y^2, y^3; the default is
    xy(x+y).  Independent of the Chevalley model.
    """
    f = np.array(f) % q
    a, b, c, d = np.meshgrid(*[np.arange(q)] * 4, indexing="ij")
    a, b, c, d = (z.ravel() for z in (a, b, c, d))
    det = (a * d - b * c) % q
    keep = det != 0
    a, b, c, d, det = a[keep], b[keep], c[keep], d[keep], det[keep]
    # substitute x -> a x + c y, y -> b x + d y
    lin = [(a, c), (b, d)]
    out = np.zeros((len(a), 4), dtype=np.int64)
    for k, coef in enumerate(f):
        if not coef:
            continue
        # monomial x^(3-k) y^k
        poly = np.zeros((len(a), 4), dtype=np.int64)
        poly[:, 0] = 1
        for factor in [lin[0]] * (3 - k) + [lin[1]] * k:
            new = np.zeros_like(poly)
            new[:, :-1] += poly[:, :-1] * factor[0][:, None]
            new[:, 1:] += poly[:, :-1] * factor[1][:, None]
            poly = new % q
        out = (out + coef * poly) % q
    detinv = np.array([pow(int(x), -1, q) for x in det])
    out = out * detinv[:, None] % q
    return int(np.all(out == f, axis=1).sum())


def verify_sym3_open_orbit(primes: Sequence[int] = (5, 7, 11, 13)) -> VerificationReport:
    primes = [check_prime(q) for q in primes]
    rep = VerificationReport("sym3")
    point = [0, 1, 1, 0]  # e_{a+b} + e_{2a+b}, i.e. e1 e2 (e1 + e2)
    rep.add("module for P_a: roots of P_a^u modulo U_{3a+2b}", MODULE_ROOTS["P_a"])
    rep.add("point", "e_{a+b} + e_{2a+b} = e1 e2 (e1 + e2)")
    stab, orbit, degenerate, order, gl2 = {}, {}, {}, {}, {}
    for q in primes:
        mats = _module_action("P_a", q)
        order[q] = len(mats)
        stab[q] = stabilizer_count(point, mats, q)
        orbit[q] = orbit_size(point, mats, q)
        degenerate[q] = stabilizer_count([1, 0, 0, 0], mats, q)
        gl2[q] = gl2_cubic_stabilizer(q)
        rep.require(f"q={q}: v = 0 is fixed by all of L", stabilizer_count([0, 0, 0, 0], mats, q) == order[q])
        rep.require(f"q={q}: orbit-stabiliser", orbit[q] * stab[q] == order[q], [orbit[q], stab[q], order[q]])
    rep.add("|L(F_q)|", order)
    rep.add("stabiliser of e1 e2 (e1 + e2)", stab)
    rep.add("orbit size", orbit)
    rep.add("stabiliser of e1^3", degenerate)
    rep.cross("stabiliser of xy(x+y) in GL2 on Sym^3 (x) det^-1", gl2)
    rep.require("stabiliser count is the same for every q", len(set(stab.values())) == 1, stab)
    rep.require("GL2 model gives the same stabiliser", gl2 == stab, gl2)
    rep.require("orbit exponent fit is 4", _fit(orbit) == 4, _fit(orbit))
    rep.require("stabiliser of e1^3 grows with q", isinstance(_fit(degenerate), int) and _fit(degenerate) >= 1, degenerate)

    # P_b: two copies of the standard module; the pairs with distinct lines
    # form one geometric orbit, whose F_q-points may split into a few orbits
    split = {}
    for q in primes[:2]:
        sizes = module_orbit_sizes("P_b", q)
        top = sizes[0]
        n_top = sizes.count(top)
        expected = (q * q - 1) * (q * q - q)
        split[q] = {"largest orbit": top, "number of largest orbits": n_top}
        rep.require(
            f"q={q}: largest orbits fill the (q^2-1)(q^2-q) independent pairs",
            top * n_top == expected,
            [top, n_top, expected],
        )
    rep.cross("P_b module, F_q-orbits on the open set (heuristic: rational splitting of one geometric orbit)", split)
    rep.require(
        "P_b module: number of F_q-orbits on the open set is the same for every q",
        len({v["number of largest orbits"] for v in split.values()}) == 1,
    )
    return rep


def _module_generators(parabolic: str, q: int) -> list[np.ndarray]:
    """Generators h_a(z), h_b(z), u_s(1), n_s of L(F_q) acting on the module."""
    ad = build_adjoint_rep("G2")
    idx = [ad.index(g) for g in MODULE_ROOTS[parabolic]]
    s = "a" if parabolic == "P_a" else "b"
    z = primitive_root(q)
    full = [ad.h(z, 1, q), ad.h(1, z, q), ad.u(ALPHA if s == "a" else BETA, 1, q), ad.n(s, q)]
    return [m[np.ix_(idx, idx)] for m in full]


def module_orbit_sizes(parabolic: str, q: int) -> list[int]:
    """Sizes of all L(F_q)-orbits on the 4-dimensional module, largest first."""
    pts = np.array(list(itertools.product(range(q), repeat=4)), dtype=np.int64)
    weights = q ** np.arange(3, -1, -1)
    idx = pts @ weights
    rows, cols = [], []
    for g in _module_generators(parabolic, q):
        rows.append(idx)
        cols.append((pts @ g.T) % q @ weights)
    r, c = np.concatenate(rows), np.concatenate(cols)
    n = q ** 4
    graph = coo_matrix((np.ones(len(r)), (r, c)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return sorted(np.bincount(labels).tolist(), reverse=True)


CHECKS = ("normal-generation", "levi", "other-a1", "other-a2", "sym3")


def run_check(name: str, primes: Sequence[int] | None = None, seed: int = DEFAULT_SEED, kind: str | None = None) -> list[VerificationReport]:
    if name == "normal-generation":
        kinds = [kind] if kind else list(KINDS)
        return [verify_normal_generation(k) for k in kinds]
    if name == "levi":
        return [verify_levi_alpha2_case(primes or (5, 7))]
    if name == "other-a1":
        return [verify_other_alpha1_case(primes or (5, 7, 11), seed)]
    if name == "other-a2":
        return [verify_other_alpha2_case(primes or (5, 7, 11), seed)]
    if name == "sym3":
        return [verify_sym3_open_orbit(primes or (5, 7, 11, 13))]
    raise ValueError(f"unknown check {name!r}")
