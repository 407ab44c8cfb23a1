"""Integral matrix models of the rank-2 Chevalley groups.

Each kind gets a small faithful representation built from explicit matrices
for the simple root vectors; the remaining root vectors are produced by
brackets along extraspecial pairs, so that the matrices realise the same
Chevalley basis as :func:`derive_structure_constants`.  The adjoint
representation, built from the abstract structure constants alone, serves as
a second model.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .rootsys2 import (
    ALPHA,
    BETA,
    Root,
    RootSystem,
    abstract_lie_algebra,
    build_root_system,
    derive_structure_constants,
)


def _E(i, j, n):
    m = np.zeros((n, n), dtype=np.int64)
    m[i, j] = 1
    return m


def _simple_generators(kind: str):
    """(dim, e_a, e_b, f_a, f_b) in a basis ordered by decreasing weight."""
    if kind == "A1xA1":
        n = 4
        ea, eb = _E(0, 1, n), _E(2, 3, n)
    elif kind == "A2":
        n = 3
        ea, eb = _E(0, 1, n), _E(1, 2, n)
    elif kind == "B2":
        # spin representation of Sp4; alpha long, beta short
        n = 4
        ea, eb = _E(1, 2, n), _E(0, 1, n) + _E(2, 3, n)
    elif kind == "G2":
        # V(omega_1), weights 2a+b, a+b, a, 0, -a, -a-b, -2a-b
        n = 7
        ea = _E(0, 1, n) + 2 * _E(2, 3, n) + _E(3, 4, n) + _E(5, 6, n)
        eb = _E(1, 2, n) + _E(4, 5, n)
        fa = _E(1, 0, n) + _E(3, 2, n) + 2 * _E(4, 3, n) + _E(6, 5, n)
        fb = eb.T.copy()
        return n, ea, eb, fa, fb
    else:
        raise ValueError(kind)
    return n, ea, eb, ea.T.copy(), eb.T.copy()


def _br(x, y):
    return x @ y - y @ x


class RepresentationError(RuntimeError):
    pass


@dataclass(eq=False)
class MatrixRep:
    kind: str
    dimension: int
    e: dict  # Root -> integer matrix of the Chevalley basis vector
    divided: dict  # Root -> list of e^k / k!, k = 0..
    weights: list  # (<mu, a^v>, <mu, b^v>) per basis vector

    @property
    def rs(self) -> RootSystem:
        return build_root_system(self.kind)

    def u(self, root, x, q: int | None = None) -> np.ndarray:
        root = Root(*root)
        out = np.zeros((self.dimension, self.dimension), dtype=np.int64)
        for k, m in enumerate(self.divided[root]):
            out = out + (x ** k) * m if q is None else (out + pow(int(x), k, q) * m) % q
        return out if q is None else out % q

    def n(self, s: str, q: int | None = None) -> np.ndarray:
        r = ALPHA if s == "a" else BETA
        m = self.u(r, 1, q) @ self.u(-r, -1, q) @ self.u(r, 1, q)
        return m if q is None else m % q

    def n_w(self, word, q: int | None = None) -> np.ndarray:
        m = np.eye(self.dimension, dtype=np.int64)
        for s in word:
            m = m @ self.n(s, q)
            if q is not None:
                m %= q
        return m

    def h(self, lam: int, mu: int, q: int) -> np.ndarray:
        """h_a(lam) h_b(mu) over F_q."""
        d = [pow(lam, wa, q) * pow(mu, wb, q) % q for wa, wb in self.weights]
        return np.diag(np.array(d, dtype=np.int64))

    def center(self, q: int) -> list[tuple[int, int]]:
        rs = self.rs
        out = []
        for lam in range(1, q):
            for mu in range(1, q):
                if all(
                    pow(lam, rs.pairing(g, ALPHA), q) * pow(mu, rs.pairing(g, BETA), q) % q == 1
                    for g in (ALPHA, BETA)
                ):
                    out.append((lam, mu))
        return out

    def torus_for_characters(self, va: int, vb: int, q: int) -> tuple[int, int] | None:
        """Some (lam, mu) with alpha(t) = va, beta(t) = vb, or None."""
        rs = self.rs
        for lam in range(1, q):
            for mu in range(1, q):
                if (
                    pow(lam, rs.pairing(ALPHA, ALPHA), q) * pow(mu, rs.pairing(ALPHA, BETA), q) % q == va % q
                    and pow(lam, rs.pairing(BETA, ALPHA), q) * pow(mu, rs.pairing(BETA, BETA), q) % q == vb % q
                ):
                    return lam, mu
        return None

    def weight_entry(self, root: Root) -> tuple[int, int, int]:
        """A matrix position (i, j) and value where e_root is nonzero, preferring +-1."""
        m = self.e[root]
        best = None
        for i, j in zip(*np.nonzero(m)):
            v = int(m[i, j])
            if best is None or abs(v) < abs(best[2]):
                best = (int(i), int(j), v)
        return best


_REP_CACHE: dict = {}


def build_matrix_rep(kind: str) -> MatrixRep:
    if kind in _REP_CACHE:
        return _REP_CACHE[kind]
    rs = build_root_system(kind)
    sc = derive_structure_constants(rs)
    n, ea, eb, fa, fb = _simple_generators(kind)
    e = {ALPHA: ea, BETA: eb, -ALPHA: fa, -BETA: fb}
    for r, s in sc.extraspecial:
        N = sc.N[(r, s)]
        for sign, (x, y) in ((1, (e[r], e[s])), (-1, (e[-r], e[-s]))):
            m = _br(x, y)
            if np.any(m % N):
                raise RepresentationError(f"bracket for {r + s} not divisible by {N}")
            e[(r + s).scale(sign)] = sign * (m // N)
    hs = {ALPHA: _br(ea, fa), BETA: _br(eb, fb)}
    for h in hs.values():
        if np.count_nonzero(h - np.diag(np.diag(h))):
            raise RepresentationError("coroots are not diagonal")
    weights = [(int(hs[ALPHA][i, i]), int(hs[BETA][i, i])) for i in range(n)]
    divided = {}
    for r, m in e.items():
        powers = [np.eye(n, dtype=np.int64)]
        k = 1
        cur = m.copy()
        while np.any(cur):
            if np.any(cur % factorial(k)):
                raise RepresentationError(f"divided power e_{r}^{k}/{k}! not integral")
            powers.append(cur // factorial(k))
            cur = cur @ m
            k += 1
        divided[r] = powers
    rep = MatrixRep(kind, n, e, divided, weights)
    _check_against_constants(rep, rs, sc)
    _REP_CACHE[kind] = rep
    return rep


def _check_against_constants(rep: MatrixRep, rs: RootSystem, sc) -> None:
    """Every bracket of root vectors must reproduce the abstract table."""
    e = rep.e
    for r in rs.roots:
        for s in rs.roots:
            m = _br(e[r], e[s])
            if r == -s:
                ca = Fraction(r.a * rs.inner(ALPHA, ALPHA), rs.inner(r, r))
                cb = Fraction(r.b * rs.inner(BETA, BETA), rs.inner(r, r))
                target = np.diag([int(ca * wa + cb * wb) for wa, wb in rep.weights])
                if not np.array_equal(m, target):
                    raise RepresentationError(f"[e_{r}, e_{s}] is not h_{r}")
            elif rs.is_root(r + s):
                if not np.array_equal(m, sc.N[(r, s)] * e[r + s]):
                    raise RepresentationError(f"[e_{r}, e_{s}] disagrees with N")
            elif r != s and np.any(m):
                raise RepresentationError(f"[e_{r}, e_{s}] should vanish")


@dataclass(eq=False)
class AdjointRep:
    """Adjoint action built from the abstract structure constants only."""

    kind: str
    basis: list
    ad: dict  # Root -> integer matrix of ad(e_root)

    def u(self, root, x, q: int) -> np.ndarray:
        m = self.ad[Root(*root)]
        n = len(self.basis)
        out = np.eye(n, dtype=np.int64)
        cur = np.eye(n, dtype=object)
        for k in range(1, 6):
            cur = cur.dot(m.astype(object))
            if not np.any(cur):
                break
            dp = cur // factorial(k)
            out = (out + pow(int(x), k, q) * (dp % q).astype(np.int64)) % q
        return out % q

    def n(self, s: str, q: int) -> np.ndarray:
        r = ALPHA if s == "a" else BETA
        return self.u(r, 1, q) @ self.u(-r, -1, q) % q @ self.u(r, 1, q) % q

    def h(self, lam: int, mu: int, q: int) -> np.ndarray:
        rs = build_root_system(self.kind)
        d = []
        for key in self.basis:
            if key[0] == "h":
                d.append(1)
            else:
                g = key[1]
                d.append(pow(lam, rs.pairing(g, ALPHA) % (q - 1), q) * pow(mu, rs.pairing(g, BETA) % (q - 1), q) % q)
        return np.diag(np.array(d, dtype=np.int64))

    def index(self, root) -> int:
        return self.basis.index(("e", Root(*root)))


def build_adjoint_rep(kind: str) -> AdjointRep:
    rs = build_root_system(kind)
    sc = derive_structure_constants(rs)
    basis, br = abstract_lie_algebra(rs, sc.N)
    idx = {b: i for i, b in enumerate(basis)}
    ad = {}
    for r in rs.roots:
        m = np.zeros((len(basis), len(basis)), dtype=np.int64)
        for j, y in enumerate(basis):
            for k, c in br(("e", r), y).items():
                if c.denominator != 1:
                    raise RepresentationError("non-integral adjoint action")
                m[idx[k], j] = int(c)
        ad[r] = m
    return AdjointRep(kind, basis, ad)
