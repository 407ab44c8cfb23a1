"""Rank-2 root systems, Weyl groups and Chevalley structure constants.

Roots are stored as integer coordinates ``(c_alpha, c_beta)`` in the basis of
simple roots.  Simple roots follow Bourbaki numbering: ``alpha = alpha_1`` and
``beta = alpha_2``, so alpha is long in B2 and short in G2.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import NamedTuple

KINDS = ("A1xA1", "A2", "B2", "G2")
SIMPLE = ("a", "b")


class Root(NamedTuple):
    a: int
    b: int

    def __add__(self, other):
        return Root(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return Root(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return Root(-self.a, -self.b)

    def scale(self, k: int) -> "Root":
        return Root(k * self.a, k * self.b)

    @property
    def height(self) -> int:
        return self.a + self.b

    def is_positive(self) -> bool:
        return self.a >= 0 and self.b >= 0

    def __str__(self):
        if self == (0, 0):
            return "0"
        parts = []
        for c, name in ((self.a, "a"), (self.b, "b")):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(("-" if c < 0 else "+") + mag + name)
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s

    __repr__ = __str__


ALPHA = Root(1, 0)
BETA = Root(0, 1)


def parse_root(text: str) -> Root:
    """Parse strings such as ``"3a+2b"``, ``"-a-b"`` or ``"b"``."""
    s = text.replace(" ", "").replace("α", "a").replace("β", "b")
    if s in ("a", "alpha"):
        return ALPHA
    if s in ("b", "beta"):
        return BETA
    ca = cb = 0
    i = 0
    while i < len(s):
        sign = 1
        if s[i] in "+-":
            sign = -1 if s[i] == "-" else 1
            i += 1
        j = i
        while j < len(s) and s[j].isdigit():
            j += 1
        coef = int(s[i:j]) if j > i else 1
        if j >= len(s) or s[j] not in "ab":
            raise ValueError(f"cannot parse root {text!r}")
        if s[j] == "a":
            ca += sign * coef
        else:
            cb += sign * coef
        i = j + 1
    return Root(ca, cb)


# Cartan integers <alpha_i, alpha_j^vee> and a W-invariant form (integral).
_CARTAN = {
    "A1xA1": ((2, 0), (0, 2)),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((2, -1), (-2, 2)),
    "G2": ((2, -1), (-3, 2)),
}
# rows: <alpha, alpha^v>, <alpha, beta^v> / <beta, alpha^v>, <beta, beta^v>
_FORM = {
    "A1xA1": ((2, 0), (0, 2)),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((4, -2), (-2, 2)),
    "G2": ((2, -3), (-3, 6)),
}
_BRAID = {"A1xA1": 2, "A2": 3, "B2": 4, "G2": 6}


@dataclass(frozen=True)
class WeylElement:
    word: tuple[str, ...]
    matrix: tuple[tuple[int, int], tuple[int, int]]

    @property
    def length(self) -> int:
        return len(self.word)

    def apply(self, r: Root) -> Root:
        (m00, m01), (m10, m11) = self.matrix
        return Root(m00 * r.a + m01 * r.b, m10 * r.a + m11 * r.b)

    @property
    def name(self) -> str:
        return "e" if not self.word else "".join("s" + s for s in self.word)

    def __str__(self):
        return self.name


def _matmul2(x, y):
    return tuple(
        tuple(sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


@dataclass(frozen=True, eq=False)
class RootSystem:
    kind: str
    cartan: tuple
    form: tuple
    braid_order: int
    positive_roots: tuple[Root, ...]
    weyl_elements: tuple[WeylElement, ...]
    _index: dict = field(repr=False)

    @property
    def roots(self) -> tuple[Root, ...]:
        return self.positive_roots + tuple(-r for r in self.positive_roots)

    @property
    def simple_roots(self) -> tuple[Root, Root]:
        return ALPHA, BETA

    @property
    def longest_element(self) -> WeylElement:
        return max(self.weyl_elements, key=lambda w: w.length)

    @property
    def identity(self) -> WeylElement:
        return self.weyl_elements[0]

    def is_root(self, r) -> bool:
        return tuple(r) in self._index

    def check_root(self, r) -> Root:
        r = Root(*r)
        if not self.is_root(r):
            raise ValueError(f"{r} is not a root of {self.kind}")
        return r

    def order_key(self, r: Root) -> int:
        """Position of a positive root in the canonical order."""
        return self.positive_roots.index(r)

    def pairing(self, r: Root, s: Root) -> int:
        """The integer <r, s^vee>."""
        num = 2 * self.inner(r, s)
        den = self.inner(s, s)
        if num % den:
            raise ValueError(f"non-integral pairing <{r},{s}^v>")
        return num // den

    def inner(self, r: Root, s: Root) -> int:
        f = self.form
        return (
            r.a * s.a * f[0][0] + (r.a * s.b + r.b * s.a) * f[0][1] + r.b * s.b * f[1][1]
        )

    def reflect(self, s, r) -> Root:
        """Apply the reflection in simple root ``s`` ('a' or 'b') to ``r``."""
        r = self.check_root(r)
        sr = _simple(s)
        return r - sr.scale(self.pairing(r, sr))

    def weyl(self, word) -> WeylElement:
        """Weyl element given by a word in 'a'/'b' (need not be reduced)."""
        m = ((1, 0), (0, 1))
        for s in word:
            m = _matmul2(m, self._reflection_matrix(s))
        for w in self.weyl_elements:
            if w.matrix == m:
                return w
        raise AssertionError("word does not give a Weyl element")

    def multiply(self, x: WeylElement, y: WeylElement) -> WeylElement:
        return self.weyl(x.word + y.word)

    def inverse(self, x: WeylElement) -> WeylElement:
        return self.weyl(tuple(reversed(x.word)))

    def inversion_roots(self, w: WeylElement) -> list[Root]:
        """Positive roots sent to negative roots by ``w``."""
        return [r for r in self.positive_roots if not w.apply(r).is_positive()]

    def _reflection_matrix(self, s):
        sr = _simple(s)
        cols = []
        for e in (ALPHA, BETA):
            img = e - sr.scale(self.pairing(e, sr))
            cols.append(img)
        return ((cols[0].a, cols[1].a), (cols[0].b, cols[1].b))

    def parabolic_roots(self, parabolic: str) -> set[Root]:
        """Root set of the standard parabolic 'B', 'P_a' or 'P_b'."""
        rs = set(self.positive_roots)
        if parabolic == "P_a":
            rs.add(-ALPHA)
        elif parabolic == "P_b":
            rs.add(-BETA)
        elif parabolic != "B":
            raise ValueError(f"unknown parabolic {parabolic!r}")
        return rs

    def parabolic_weyl(self, parabolic: str) -> list[WeylElement]:
        if parabolic == "B":
            return [self.identity]
        s = parabolic[-1]
        return [self.identity, self.weyl((s,))]

    def min_coset_reps(self, parabolic: str) -> list[WeylElement]:
        """Minimal-length representatives of W / W_P, sorted by (length, word)."""
        reps = []
        for w in self.weyl_elements:
            if all(self.multiply(w, v).length >= w.length for v in self.parabolic_weyl(parabolic)):
                reps.append(w)
        return reps

    def poincare(self, q: int, parabolic: str = "B") -> int:
        return sum(q ** w.length for w in self.min_coset_reps(parabolic))


def _simple(s) -> Root:
    if s in ("a", ALPHA):
        return ALPHA
    if s in ("b", BETA):
        return BETA
    raise ValueError(f"not a simple root tag: {s!r}")


_CACHE: dict[str, RootSystem] = {}


def build_root_system(kind: str) -> RootSystem:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if kind in _CACHE:
        return _CACHE[kind]
    cartan = _CARTAN[kind]
    form = _FORM[kind]

    def pair(r, s):
        ip = r.a * s.a * form[0][0] + (r.a * s.b + r.b * s.a) * form[0][1] + r.b * s.b * form[1][1]
        ss = s.a * s.a * form[0][0] + 2 * s.a * s.b * form[0][1] + s.b * s.b * form[1][1]
        return 2 * ip // ss

    # reflection closure of the simple roots
    roots = {ALPHA, BETA}
    frontier = [ALPHA, BETA]
    while frontier:
        r = frontier.pop()
        for s in (ALPHA, BETA):
            img = r - s.scale(pair(r, s))
            if img not in roots:
                roots.add(img)
                frontier.append(img)
    positive = sorted((r for r in roots if r.is_positive()), key=lambda r: (r.height, -r.a))

    def refl_matrix(s):
        sr = _simple(s)
        cols = [e - sr.scale(pair(e, sr)) for e in (ALPHA, BETA)]
        return ((cols[0].a, cols[1].a), (cols[0].b, cols[1].b))

    mats = {s: refl_matrix(s) for s in SIMPLE}
    ident = ((1, 0), (0, 1))
    elements = {ident: ()}
    layer = [ident]
    while layer:
        nxt = []
        for m in layer:
            for s in SIMPLE:
                m2 = _matmul2(m, mats[s])
                if m2 not in elements:
                    elements[m2] = elements[m] + (s,)
                    nxt.append(m2)
        layer = nxt
    weyl = tuple(
        sorted((WeylElement(w, m) for m, w in elements.items()), key=lambda w: (len(w.word), w.word))
    )
    index = {tuple(r): i for i, r in enumerate(positive + [-r for r in positive])}
    rs = RootSystem(kind, cartan, form, _BRAID[kind], tuple(positive), weyl, index)
    _CACHE[kind] = rs
    return rs


def reflect(rs: RootSystem, s, gamma) -> Root:
    return rs.reflect(s, gamma)


# ---------------------------------------------------------------------------
# Structure constants


class StructureConstantError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class StructureConstantTable:
    """Chevalley-basis constants for one root system.

    ``N[(r, s)]`` gives ``[e_r, e_s] = N e_{r+s}``.  ``commutators[(g, d)]``
    lists ``(i, j, i*g + j*d, C)`` with

        u_d(y)^-1 u_g(x)^-1 u_d(y) u_g(x) = prod u_{i g + j d}(C (-x)^i y^j)

    taken in order of increasing ``i + j``.  ``eta[(s, g)]`` is the sign with
    ``n_s u_g(x) n_s^-1 = u_{s(g)}(eta x)``.
    """

    rs: RootSystem
    N: dict
    commutators: dict
    eta: dict
    extraspecial: tuple


def _string_p(rs: RootSystem, r: Root, s: Root) -> int:
    """Largest p with s - p r a root."""
    p = 0
    while rs.is_root(s - r.scale(p + 1)):
        p += 1
    return p


def _extraspecial_pairs(rs: RootSystem) -> list[tuple[Root, Root]]:
    pos = rs.positive_roots
    pairs = []
    for xi in pos:
        special = [
            (r, s) for r in pos for s in pos
            if pos.index(r) < pos.index(s) and r + s == xi
        ]
        if special:
            pairs.append(min(special, key=lambda rs_: pos.index(rs_[0])))
    return pairs


def _solve_N(rs: RootSystem, extraspecial) -> dict:
    roots = rs.roots
    keys = [(r, s) for r in roots for s in roots if rs.is_root(r + s)]
    mag = {(r, s): _string_p(rs, r, s) + 1 for r, s in keys}
    sign: dict = {}

    def setv(k, v):
        if k in sign:
            if sign[k] != v:
                raise StructureConstantError(f"sign conflict at N{k}")
            return False
        sign[k] = v
        return True

    for r, s in extraspecial:
        setv((r, s), 1)

    def nn(r, s) -> Fraction:
        return Fraction(sign[(r, s)] * mag[(r, s)])

    ln = {r: rs.inner(r, r) for r in roots}
    triples = [(r, s, -(r + s)) for r, s in keys]
    quads = []
    for r, s, t in itertools.product(roots, repeat=3):
        u = -(r + s + t)
        if not rs.is_root(u):
            continue
        group = (r, s, t, u)
        if any(x == -y for x, y in itertools.combinations(group, 2)):
            continue
        quads.append(group)

    changed = True
    while changed:
        changed = False
        for (r, s) in list(sign):
            v = sign[(r, s)]
            changed |= setv((s, r), -v)
            changed |= setv((-r, -s), -v)
        for r, s, t in triples:
            # N_rs/(t,t) = N_st/(r,r) = N_tr/(s,s)
            known = [(k, w) for k, w in (((r, s), ln[t]), ((s, t), ln[r]), ((t, r), ln[s])) if k in sign]
            if known:
                k0, w0 = known[0]
                ratio = Fraction(sign[k0] * mag[k0], w0)
                for k, w in (((r, s), ln[t]), ((s, t), ln[r]), ((t, r), ln[s])):
                    val = ratio * w
                    if abs(val) != mag[k]:
                        raise StructureConstantError(f"magnitude mismatch at N{k}")
                    changed |= setv(k, 1 if val > 0 else -1)
        for r, s, t, u in quads:
            terms = []
            for (x, y), (z, w) in (((r, s), (t, u)), ((s, t), (r, u)), ((t, r), (s, u))):
                if rs.is_root(x + y) and rs.is_root(z + w):
                    terms.append(((x, y), (z, w), ln[x + y]))
            unknown = [tm for tm in terms if tm[0] not in sign or tm[1] not in sign]
            if len(unknown) != 1 or not terms:
                continue
            (a, b, w) = unknown[0]
            if a not in sign and b not in sign:
                continue
            rest = sum(nn(*x) * nn(*y) / wt for x, y, wt in terms if (x, y, wt) != unknown[0])
            known_k, unk_k = (a, b) if a in sign else (b, a)
            need = -rest * w / nn(*known_k)
            if abs(need) != mag[unk_k]:
                raise StructureConstantError(f"four-term rule inconsistent at N{unk_k}")
            changed |= setv(unk_k, 1 if need > 0 else -1)
    missing = [k for k in keys if k not in sign]
    if missing:
        raise StructureConstantError(f"undetermined structure constants: {missing[:4]}")
    return {k: sign[k] * mag[k] for k in keys}


def coroot_coords(rs: RootSystem, r: Root) -> tuple[Fraction, Fraction]:
    """Coordinates of r^vee in the basis (alpha^vee, beta^vee)."""
    rr = rs.inner(r, r)
    return (
        Fraction(r.a * rs.inner(ALPHA, ALPHA), rr),
        Fraction(r.b * rs.inner(BETA, BETA), rr),
    )


def abstract_lie_algebra(rs: RootSystem, N: dict):
    """Bracket on the basis ``[('e', r) ...] + [('h','a'), ('h','b')]``.

    Returns ``(basis, bracket)`` where ``bracket(x, y)`` gives a dict
    basis-element -> Fraction.
    """
    basis = [("e", r) for r in rs.roots] + [("h", "a"), ("h", "b")]

    def bracket(x, y):
        if x[0] == "h" and y[0] == "h":
            return {}
        if x[0] == "h":
            return {k: -v for k, v in bracket(y, x).items()}
        r = x[1]
        if y[0] == "h":
            # [e_r, h_i] = -<r, alpha_i^v> e_r
            c = rs.pairing(r, _simple(y[1]))
            return {x: Fraction(-c)} if c else {}
        s = y[1]
        if r + s == Root(0, 0):
            ca, cb = coroot_coords(rs, r)
            out = {}
            if ca:
                out[("h", "a")] = ca
            if cb:
                out[("h", "b")] = cb
            return out
        if rs.is_root(r + s):
            return {("e", r + s): Fraction(N[(r, s)])}
        return {}

    return basis, bracket


def check_jacobi(rs: RootSystem, N: dict) -> None:
    basis, br = abstract_lie_algebra(rs, N)

    def br_vec(vec, y):
        out: dict = {}
        for k, c in vec.items():
            for k2, c2 in br(k, y).items():
                out[k2] = out.get(k2, 0) + c * c2
        return out

    for x, y, z in itertools.combinations(basis, 3):
        total: dict = {}
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            for k, v in br_vec(br(a, b), c).items():
                total[k] = total.get(k, 0) + v
        if any(v != 0 for v in total.values()):
            raise StructureConstantError(f"Jacobi identity fails on {x},{y},{z}")


def _M(N, r, s, i):
    prod = Fraction(1)
    cur = s
    for k in range(i):
        prod *= N[(r, cur)]
        cur = cur + r
    return prod / factorial(i)


def _commutator_table(rs: RootSystem, N: dict) -> dict:
    table = {}
    for g in rs.roots:
        for d in rs.roots:
            if g == d or g == -d:
                continue
            terms = []
            for i in range(1, 4):
                for j in range(1, 4):
                    t = g.scale(i) + d.scale(j)
                    if not rs.is_root(t):
                        continue
                    if j == 1:
                        c = _M(N, g, d, i)
                    elif i == 1:
                        c = (-1) ** j * _M(N, d, g, j)
                    elif (i, j) == (3, 2):
                        c = Fraction(1, 3) * _M(N, g + d, g, 2)
                    elif (i, j) == (2, 3):
                        c = Fraction(-2, 3) * _M(N, d + g, d, 2)
                    else:
                        raise StructureConstantError(f"unexpected commutator term {(i, j)}")
                    if c.denominator != 1:
                        raise StructureConstantError(f"non-integral C_{i}{j} for {g},{d}")
                    terms.append((i, j, t, int(c)))
            terms.sort(key=lambda x: (x[0] + x[1], -x[0]))
            table[(g, d)] = terms
    return table


def _eta_table(rs: RootSystem, N: dict) -> dict:
    """Signs of n_s e_g n_s^-1 computed in the abstract adjoint representation."""
    basis, br = abstract_lie_algebra(rs, N)

    def ad_exp(root, t, vec):
        # exp(t ad e_root) applied to vec; nilpotent of order <= 4
        out = dict(vec)
        term = dict(vec)
        for k in range(1, 5):
            nxt: dict = {}
            for key, c in term.items():
                for k2, c2 in br(("e", root), key).items():
                    nxt[k2] = nxt.get(k2, 0) + c * c2 * t / k
            term = {k_: v for k_, v in nxt.items() if v}
            for key, c in term.items():
                out[key] = out.get(key, 0) + c
        return {k_: v for k_, v in out.items() if v}

    eta = {}
    for s in SIMPLE:
        sr = _simple(s)
        for g in rs.roots:
            vec = {("e", g): Fraction(1)}
            # Ad(n_s) with n_s = u_s(1) u_-s(-1) u_s(1)
            vec = ad_exp(sr, 1, vec)
            vec = ad_exp(-sr, -1, vec)
            vec = ad_exp(sr, 1, vec)
            target = ("e", rs.reflect(s, g))
            if set(vec) != {target} or abs(vec[target]) != 1:
                raise StructureConstantError(f"Ad(n_{s}) e_{g} is not +-e_{target[1]}")
            eta[(s, g)] = int(vec[target])
    return eta


_SC_CACHE: dict = {}


def derive_structure_constants(rs: RootSystem) -> StructureConstantTable:
    if rs.kind in _SC_CACHE:
        return _SC_CACHE[rs.kind]
    extra = tuple(_extraspecial_pairs(rs))
    N = _solve_N(rs, extra)
    check_jacobi(rs, N)
    table = StructureConstantTable(rs, N, _commutator_table(rs, N), _eta_table(rs, N), extra)
    _SC_CACHE[rs.kind] = table
    return table


def commutator_coefficients(rs: RootSystem, gamma, delta) -> list[tuple[int, int, Root, int]]:
    g, d = rs.check_root(gamma), rs.check_root(delta)
    if g == d or g == -d:
        raise ValueError(f"roots {g} and {d} are parallel")
    return list(derive_structure_constants(rs).commutators[(g, d)])
