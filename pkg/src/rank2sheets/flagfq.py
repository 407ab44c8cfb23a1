"""Finite-field evaluation: matrices, Bruhat form, flag varieties and counting.

Points of ``G/P`` over F_q are stored as subspaces of the faithful
representation (``P`` is the stabiliser of a span of top weight vectors) and
keyed by normalised Pluecker coordinates, so equality of flags is equality of
keys.  Every point also carries its Bruhat cell and cell coordinates from the
enumeration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .poly import Polynomial
from .reps import MatrixRep, build_matrix_rep
from .rootsys2 import ALPHA, BETA, Root, WeylElement, build_root_system
from .symchev import GroupWord, RootElt, TorusElt, UNormalForm, WeylRep

PRIMES = (3, 5, 7, 11, 13)
DEFAULT_POINT_BOUND = 10 ** 6

# basis indices spanning the subspace whose stabiliser is P_a / P_b
_SPANS = {
    "A1xA1": {"P_a": (2,), "P_b": (0,)},
    "A2": {"P_a": (0, 1), "P_b": (0,)},
    "B2": {"P_a": (0,), "P_b": (0, 1)},
    "G2": {"P_a": (0, 1), "P_b": (0,)},
}


class BoundExceeded(RuntimeError):
    pass


class InconsistentDimension(ValueError):
    pass


def check_prime(q: int) -> int:
    if q < 3 or any(q % d == 0 for d in range(2, int(q ** 0.5) + 1)):
        raise ValueError(f"q = {q} must be an odd prime")
    return q


# ---------------------------------------------------------------------------
# evaluation of symbolic words


def _eval_poly(f: Polynomial, values, q: int) -> int:
    return int(f.evaluate(values, q))


def eval_letter(rep: MatrixRep, letter, values, q: int) -> np.ndarray:
    if isinstance(letter, RootElt):
        return rep.u(letter.root, _eval_poly(letter.arg, values, q), q)
    if isinstance(letter, WeylRep):
        return rep.n(letter.s, q)
    if isinstance(letter, TorusElt):
        va = _eval_poly(letter.val_alpha, values, q)
        vb = _eval_poly(letter.val_beta, values, q)
        lm = rep.torus_for_characters(va, vb, q)
        if lm is None:
            raise ValueError("torus letter has no F_q-point with these characters")
        return rep.h(lm[0], lm[1], q)
    raise TypeError(letter)


def eval_word(w: GroupWord | UNormalForm, values, q: int) -> np.ndarray:
    """Matrix of a word (torus letters realised up to the centre)."""
    if isinstance(w, UNormalForm):
        w = w.to_word()
    rep = build_matrix_rep(w.kind)
    m = np.eye(rep.dimension, dtype=np.int64)
    for letter in w.letters:
        m = m @ eval_letter(rep, letter, values, q) % q
    return m


def equal_mod_center(kind: str, m1: np.ndarray, m2: np.ndarray, q: int) -> bool:
    rep = build_matrix_rep(kind)
    for lam, mu in rep.center(q):
        if np.array_equal(m1 % q, rep.h(lam, mu, q) @ m2 % q):
            return True
    return False


# ---------------------------------------------------------------------------
# unipotent coordinates and Bruhat form


def unipotent_coords(kind: str, m: np.ndarray, q: int) -> dict:
    """Canonical-order coordinates of a unipotent upper-triangular matrix."""
    rep = build_matrix_rep(kind)
    rs = rep.rs
    cur = m % q
    out = {}
    for g in rs.positive_roots:
        i, j, v = rep.weight_entry(g)
        c = int(cur[i, j]) * pow(v, -1, q) % q
        if c:
            out[g] = c
            cur = rep.u(g, (-c) % q, q) @ cur % q
    if not np.array_equal(cur, np.eye(rep.dimension, dtype=np.int64)):
        raise ValueError("matrix is not in U")
    return out


@dataclass
class BruhatForm:
    u: dict  # root -> F_q coordinate, canonical order
    w: WeylElement
    u_prime: dict
    torus: tuple  # (lam, mu) with t = h_a(lam) h_b(mu)

    def matrix(self, kind: str, q: int) -> np.ndarray:
        rep = build_matrix_rep(kind)
        return (
            product_matrix(kind, self.u, q)
            @ rep.h(*self.torus, q) % q
            @ rep.n_w(self.w.word, q) % q
            @ product_matrix(kind, self.u_prime, q)
            % q
        )


def product_matrix(kind: str, coords: dict, q: int) -> np.ndarray:
    rep = build_matrix_rep(kind)
    m = np.eye(rep.dimension, dtype=np.int64)
    for g in rep.rs.positive_roots:
        if coords.get(g, 0) % q:
            m = m @ rep.u(g, coords[g], q) % q
    return m


def bruhat_form(g: np.ndarray, kind: str, q: int) -> BruhatForm:
    """Write ``g = u t n_w u'`` with ``u'`` on the inversion roots of ``w``."""
    rep = build_matrix_rep(kind)
    rs = rep.rs
    space = flag_space(kind, "B", q)
    ginv = _inverse_mod(g, q)
    idx = space.locate(ginv)
    if idx is None:
        raise ValueError("matrix does not lie in the group")
    point = space.point(idx)
    winv = point.weyl
    w = rs.inverse(winv)
    # g^-1 B = x n_{w^-1} B with x = u'^-1
    x = product_matrix(kind, dict(zip(space.cells[point.cell].roots, point.coords)), q)
    u_prime = unipotent_coords(kind, _inverse_mod(x, q), q)
    ut = g @ x % q @ _inverse_mod(rep.n_w(w.word, q), q) % q
    diag = [int(ut[i, i]) for i in range(rep.dimension)]
    lam_mu = None
    for lam in range(1, q):
        for mu in range(1, q):
            if all(pow(lam, wa % (q - 1), q) * pow(mu, wb % (q - 1), q) % q == d
                   for (wa, wb), d in zip(rep.weights, diag)):
                lam_mu = (lam, mu)
                break
        if lam_mu:
            break
    if lam_mu is None:
        raise ValueError("Borel part has no torus factor")
    uu = ut @ _inverse_mod(rep.h(*lam_mu, q), q) % q
    return BruhatForm(unipotent_coords(kind, uu, q), w, u_prime, lam_mu)


def _inverse_mod(m: np.ndarray, q: int) -> np.ndarray:
    n = m.shape[0]
    a = np.concatenate([m % q, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r, col] % q), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[[col, piv]] = a[[piv, col]]
        a[col] = a[col] * pow(int(a[col, col]), -1, q) % q
        for r in range(n):
            if r != col and a[r, col]:
                a[r] = (a[r] - a[r, col] * a[col]) % q
    return a[:, n:]


# ---------------------------------------------------------------------------
# flag varieties


@dataclass(frozen=True)
class FlagPoint:
    parabolic: str
    weyl: WeylElement
    coords: tuple  # F_q values, one per inversion root (canonical order)
    cell: int = 0

    @property
    def dimension(self) -> int:
        return len(self.coords)


@dataclass
class Cell:
    weyl: WeylElement
    roots: list  # positive roots gamma with w^-1(gamma) < 0
    start: int
    stop: int


def _normalise_rows(v: np.ndarray, q: int) -> np.ndarray:
    """Scale each row so its first nonzero entry is 1."""
    nz = v != 0
    first = np.argmax(nz, axis=1)
    lead = v[np.arange(len(v)), first]
    inv = np.array([0] + [pow(i, -1, q) for i in range(1, q)], dtype=np.int64)
    return v * inv[lead][:, None] % q


def _pluecker(cols: np.ndarray, q: int) -> np.ndarray:
    """Normalised Pluecker vectors of spans of 1 or 2 columns; shape (N, n, k)."""
    k = cols.shape[2]
    if k == 1:
        return _normalise_rows(cols[:, :, 0] % q, q)
    if k == 2:
        n = cols.shape[1]
        ii, jj = np.triu_indices(n, 1)
        v = cols[:, ii, 0] * cols[:, jj, 1] - cols[:, jj, 0] * cols[:, ii, 1]
        return _normalise_rows(v % q, q)
    raise ValueError("only spans of dimension 1 or 2 are needed")


class FlagSpace:
    """All F_q-points of G/P with Bruhat-cell coordinates."""

    def __init__(self, kind: str, parabolic: str, q: int, bound: int = DEFAULT_POINT_BOUND):
        check_prime(q)
        self.kind, self.parabolic, self.q = kind, parabolic, q
        self.rep = build_matrix_rep(kind)
        self.rs = self.rep.rs
        if parabolic == "B":
            parts = [_SPANS[kind]["P_a"], _SPANS[kind]["P_b"]]
        else:
            parts = [_SPANS[kind][parabolic]]
        cols = sorted(set().union(*parts))
        self._cols = cols
        self._parts = [[cols.index(i) for i in p] for p in parts]
        total = self.rs.poincare(q, parabolic)
        if total > bound:
            raise BoundExceeded(f"{total} points exceed the bound {bound}")
        self.cells: list[Cell] = []
        blocks, coords = [], []
        start = 0
        width = len(self.rs.positive_roots)
        for w in self.rs.min_coset_reps(parabolic):
            winv = self.rs.inverse(w)
            roots = [g for g in self.rs.positive_roots if not winv.apply(g).is_positive()]
            base = self.rep.n_w(w.word, q)[:, cols] % q
            pts = base[None, :, :]
            cc = np.zeros((1, 0), dtype=np.int64)
            for g in reversed(roots):
                ups = [self.rep.u(g, c, q) for c in range(q)]
                pts = np.concatenate([np.einsum("ij,njk->nik", m, pts) % q for m in ups])
                vals = np.repeat(np.arange(q), len(cc))
                cc = np.concatenate([vals[:, None], np.tile(cc, (q, 1))], axis=1)
            self.cells.append(Cell(w, roots, start, start + len(pts)))
            start += len(pts)
            blocks.append(pts)
            pad = np.zeros((len(cc), width), dtype=np.int64)
            pad[:, : cc.shape[1]] = cc
            coords.append(pad)
        self._points = np.concatenate(blocks)
        self._coords = np.concatenate(coords)
        self._cell_of = np.concatenate(
            [np.full(c.stop - c.start, i, dtype=np.int64) for i, c in enumerate(self.cells)]
        )
        keys = self._keys(self._points)
        self._index = {k: i for i, k in enumerate(keys)}
        if len(self._index) != len(keys):
            raise AssertionError("Bruhat cells overlap: repeated flag")

    def __len__(self):
        return len(self._points)

    def _keys(self, pts: np.ndarray) -> list[bytes]:
        parts = [_pluecker(pts[:, :, p], self.q) for p in self._parts]
        arr = np.concatenate(parts, axis=1).astype(np.uint8)
        return [row.tobytes() for row in arr]

    def point(self, i: int) -> FlagPoint:
        c = self._cell_of[i]
        cell = self.cells[c]
        return FlagPoint(self.parabolic, cell.weyl, tuple(int(x) for x in self._coords[i, : len(cell.roots)]), int(c))

    def points(self) -> Iterable[FlagPoint]:
        for i in range(len(self)):
            yield self.point(i)

    def index_of(self, x: FlagPoint) -> int:
        cell = next(i for i, c in enumerate(self.cells) if c.weyl == x.weyl)
        m = product_matrix(self.kind, dict(zip(self.cells[cell].roots, x.coords)), self.q)
        return self.locate(m @ self.rep.n_w(x.weyl.word, self.q) % self.q)

    def locate(self, g: np.ndarray) -> int | None:
        """Index of the flag g * (base flag)."""
        pts = (g @ np.eye(self.rep.dimension, dtype=np.int64)[:, self._cols] % self.q)[None]
        return self._index.get(self._keys(pts)[0])

    def permutation(self, g: np.ndarray) -> np.ndarray:
        """Image index of every point under g."""
        imgs = np.einsum("ij,njk->nik", g % self.q, self._points) % self.q
        keys = self._keys(imgs)
        try:
            return np.array([self._index[k] for k in keys], dtype=np.int64)
        except KeyError as exc:
            raise ValueError("matrix does not preserve the flag variety") from exc

    def act(self, g: np.ndarray, x: FlagPoint) -> FlagPoint:
        i = self.index_of(x)
        pts = np.einsum("ij,njk->nik", g % self.q, self._points[i: i + 1]) % self.q
        return self.point(self._index[self._keys(pts)[0]])

    def cell_name(self, c: int) -> str:
        return self.cells[c].weyl.name

    def projection_keys(self, parabolic: str) -> list[bytes]:
        """Keys of pi(x) in G/P_parabolic for every point (G/B only)."""
        if self.parabolic != "B":
            raise ValueError("projection needs G/B")
        part = 0 if parabolic == "P_a" else 1
        arr = _pluecker(self._points[:, :, self._parts[part]], self.q).astype(np.uint8)
        return [row.tobytes() for row in arr]


@lru_cache(maxsize=32)
def flag_space(kind: str, parabolic: str, q: int) -> FlagSpace:
    return FlagSpace(kind, parabolic, q)


def enumerate_flags(kind: str, parabolic: str, q: int) -> Iterable[FlagPoint]:
    return flag_space(kind, parabolic, q).points()


def act(g: np.ndarray, x: FlagPoint, kind: str, q: int) -> FlagPoint:
    return flag_space(kind, x.parabolic, q).act(g, x)


# ---------------------------------------------------------------------------
# counting


def fixed_mask(gens: Sequence[np.ndarray], space: FlagSpace) -> np.ndarray:
    mask = np.ones(len(space), dtype=bool)
    for g in gens:
        mask &= space.permutation(g) == np.arange(len(space))
    return mask


def fixed_points(gens: Sequence[np.ndarray], kind: str, parabolic: str, q: int, per_cell: bool = False):
    """Number of flags fixed by all generators, optionally per Bruhat cell."""
    space = flag_space(kind, parabolic, q)
    mask = fixed_mask(gens, space)
    total = int(mask.sum())
    if not per_cell:
        return total
    cells = {c.weyl.name: int(mask[c.start: c.stop].sum()) for c in space.cells}
    return {"total": total, "per_cell": cells}


@dataclass
class OrbitPartition:
    kind: str
    parabolic: str
    q: int
    labels: np.ndarray  # orbit id per point, ids ordered by first point
    sizes: list

    @property
    def count(self) -> int:
        return len(self.sizes)


def orbits(gens: Sequence[np.ndarray], kind: str, parabolic: str, q: int,
           max_gens: int = 16, bound: int = DEFAULT_POINT_BOUND) -> OrbitPartition:
    if len(gens) > max_gens:
        raise BoundExceeded(f"{len(gens)} generators exceed the bound {max_gens}")
    if build_root_system(kind).poincare(q, parabolic) > bound:
        raise BoundExceeded("too many points")
    space = flag_space(kind, parabolic, q)
    n = len(space)
    rows, cols = [], []
    for g in gens:
        rows.append(np.arange(n))
        cols.append(space.permutation(g))
    if rows:
        r, c = np.concatenate(rows), np.concatenate(cols)
    else:
        r = c = np.arange(n)
    graph = coo_matrix((np.ones(len(r)), (r, c)), shape=(n, n))
    _, raw = connected_components(graph, directed=True, connection="weak")
    # relabel by first occurrence for deterministic output
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    labels = relabel[raw]
    sizes = np.bincount(labels).tolist()
    return OrbitPartition(kind, parabolic, q, labels, sizes)


def estimate_dimension(profile: dict) -> int | None:
    """Exponent d with count(q) ~ c q^d across all primes of the profile.

    Returns None when every count is zero.  Two estimates are combined: the
    rounded slope of log count against log q (which must agree for every
    pair of consecutive primes) and floor(log_q count) (which must agree for
    every q).  Large positive lower-order terms drag the slope down at small
    q, while negative ones (q - 1) push the floor down, so the larger of the
    available estimates is returned.  InconsistentDimension if neither exists.
    """
    if len(profile) < 2:
        raise ValueError("need at least two primes")
    qs = sorted(profile)
    counts = [profile[q] for q in qs]
    if all(c == 0 for c in counts):
        return None
    if any(c <= 0 for c in counts):
        raise InconsistentDimension(f"mixed empty and nonempty counts: {profile}")
    slopes = {
        round(math.log(c2 / c1) / math.log(q2 / q1))
        for (q1, c1), (q2, c2) in zip(zip(qs, counts), zip(qs[1:], counts[1:]))
    }
    floors = set()
    for q, c in zip(qs, counts):
        d = 0
        while q ** (d + 1) <= c:
            d += 1
        floors.add(d)
    estimates = []
    if len(slopes) == 1 and min(slopes) >= 0:
        estimates.append(slopes.pop())
    if len(floors) == 1:
        estimates.append(floors.pop())
    if not estimates:
        raise InconsistentDimension(f"no consistent exponent for {profile}")
    return max(estimates)


# ---------------------------------------------------------------------------
# group generators


def root_gens(kind: str, roots: Iterable, q: int) -> list[np.ndarray]:
    """u_g(1) for each root; generates U_g(F_q) since q is prime."""
    rep = build_matrix_rep(kind)
    return [rep.u(Root(*g), 1, q) for g in roots]


def torus_gens(kind: str, q: int, which: str = "both") -> list[np.ndarray]:
    rep = build_matrix_rep(kind)
    z = primitive_root(q)
    gens = []
    if which in ("both", "a"):
        gens.append(rep.h(z, 1, q))
    if which in ("both", "b"):
        gens.append(rep.h(1, z, q))
    return gens


def primitive_root(q: int) -> int:
    for z in range(2, q):
        if all(pow(z, (q - 1) // p, q) != 1 for p in _prime_factors(q - 1)):
            return z
    return 1


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return sorted(set(out))


def subgroup_gens(kind: str, name: str, q: int) -> list[np.ndarray]:
    """Named subgroups used by the CLI and the sheet fixtures."""
    rs = build_root_system(kind)
    rep = build_matrix_rep(kind)
    if name == "borel":
        return torus_gens(kind, q) + root_gens(kind, rs.positive_roots, q)
    if name == "unipotent":
        return root_gens(kind, rs.positive_roots, q)
    if name == "torus":
        return torus_gens(kind, q)
    if name == "full":
        return root_gens(kind, [ALPHA, BETA, -ALPHA, -BETA], q)
    if name == "trivial":
        return [np.eye(rep.dimension, dtype=np.int64)]
    if name == "u_beta":
        return root_gens(kind, [BETA], q)
    if kind == "A1xA1" and name == "diagonal":
        # SL2 embedded diagonally: u_a(1)u_b(1), u_-a(1)u_-b(1)
        return [
            rep.u(ALPHA, 1, q) @ rep.u(BETA, 1, q) % q,
            rep.u(-ALPHA, 1, q) @ rep.u(-BETA, 1, q) % q,
        ]
    if kind == "A1xA1" and name == "torus_x_sl2":
        # T of the first factor times the whole second factor.  The torus
        # is taken in GL2 (alpha(t) a primitive root): over F_q the SL2
        # torus only reaches squares and would split its orbit on P^1 in two.
        t = np.eye(rep.dimension, dtype=np.int64)
        t[0, 0] = primitive_root(q)
        return [t] + root_gens(kind, [BETA, -BETA], q)
    raise ValueError(f"unknown subgroup {name!r} for {kind}")


def profile_for(fn, primes: Iterable[int]) -> dict:
    return {q: fn(q) for q in primes}
