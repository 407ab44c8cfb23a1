"""Symbolic words in rank-2 Chevalley groups and their collection.

A word is a sequence of root elements ``u_g(f)`` (``f`` a polynomial),
torus elements and Weyl representatives ``n_s = u_s(1) u_-s(-1) u_s(1)``.
Torus letters are recorded by their values on the simple roots,
``(alpha(t), beta(t))``; this determines ``t`` modulo the centre, which is all
the collection needs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .poly import Polynomial, coefficients_in
from .rootsys2 import (
    ALPHA,
    BETA,
    Root,
    RootSystem,
    WeylElement,
    build_root_system,
    derive_structure_constants,
)

MAX_COLLECTION_STEPS = 200_000


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, int):
        return Polynomial.const(x)
    if isinstance(x, str):
        return Polynomial.var(x)
    raise TypeError(f"cannot use {x!r} as a polynomial")


@dataclass(frozen=True)
class RootElt:
    root: Root
    arg: Polynomial

    def __str__(self):
        return f"u_{self.root}({self.arg})"


@dataclass(frozen=True)
class TorusElt:
    val_alpha: Polynomial
    val_beta: Polynomial

    def character(self, r: Root) -> Polynomial:
        return self.val_alpha ** r.a * self.val_beta ** r.b

    def __mul__(self, other: "TorusElt") -> "TorusElt":
        return TorusElt(self.val_alpha * other.val_alpha, self.val_beta * other.val_beta)

    def inverse(self) -> "TorusElt":
        return TorusElt(self.val_alpha.inverse_monomial(), self.val_beta.inverse_monomial())

    def is_trivial(self) -> bool:
        return self.val_alpha == 1 and self.val_beta == 1

    def __str__(self):
        return f"t[{self.val_alpha}, {self.val_beta}]"


@dataclass(frozen=True)
class WeylRep:
    s: str

    def __str__(self):
        return f"n_{self.s}"


Letter = Union[RootElt, TorusElt, WeylRep]


def u(root, arg) -> RootElt:
    return RootElt(Root(*root), _as_poly(arg))


def torus(val_alpha, val_beta) -> TorusElt:
    return TorusElt(_as_poly(val_alpha), _as_poly(val_beta))


TRIVIAL_TORUS = TorusElt(Polynomial.const(1), Polynomial.const(1))


@dataclass(frozen=True)
class GroupWord:
    letters: tuple
    kind: str

    def __post_init__(self):
        rs = build_root_system(self.kind)
        for letter in self.letters:
            if isinstance(letter, RootElt):
                rs.check_root(letter.root)
            elif isinstance(letter, WeylRep) and letter.s not in ("a", "b"):
                raise ValueError(f"bad Weyl letter {letter.s!r}")

    def __add__(self, other: "GroupWord") -> "GroupWord":
        if self.kind != other.kind:
            raise ValueError("words over different root systems")
        return GroupWord(self.letters + other.letters, self.kind)

    __mul__ = __add__

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return " ".join(str(x) for x in self.letters) or "1"


def word(kind: str, *letters: Letter) -> GroupWord:
    return GroupWord(tuple(letters), kind)


@dataclass(frozen=True, eq=False)
class UNormalForm:
    """``torus * prod u_g(coeffs[g])`` with the product in ``order``."""

    kind: str
    coeffs: tuple  # ((Root, Polynomial), ...) in order, zeros dropped
    torus_part: TorusElt | None = None
    order: tuple = ()

    def coeff(self, r) -> Polynomial:
        r = Root(*r)
        for g, f in self.coeffs:
            if g == r:
                return f
        return Polynomial.const(0)

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    @property
    def support(self) -> list[Root]:
        return [g for g, _ in self.coeffs]

    def __eq__(self, other):
        if not isinstance(other, UNormalForm):
            return NotImplemented
        t1 = self.torus_part or TRIVIAL_TORUS
        t2 = other.torus_part or TRIVIAL_TORUS
        return (
            self.kind == other.kind
            and self.as_dict() == other.as_dict()
            and t1 == t2
            and tuple(self.order) == tuple(other.order)
        )

    def __hash__(self):
        return hash((self.kind, frozenset(self.as_dict().items())))

    def to_word(self) -> GroupWord:
        letters = []
        if self.torus_part is not None:
            letters.append(self.torus_part)
        letters.extend(RootElt(g, f) for g, f in self.coeffs)
        return GroupWord(tuple(letters), self.kind)

    def reduce(self, p: int) -> "UNormalForm":
        t = self.torus_part
        if t is not None:
            t = TorusElt(t.val_alpha.reduce(p), t.val_beta.reduce(p))
        coeffs = tuple((g, f.reduce(p)) for g, f in self.coeffs if not f.reduce(p).is_zero())
        return UNormalForm(self.kind, coeffs, t, self.order)

    def __str__(self):
        parts = [str(self.torus_part)] if self.torus_part is not None else []
        parts += [f"u_{g}({f})" for g, f in self.coeffs]
        return " ".join(parts) or "1"


def _check_order(rs: RootSystem, order) -> tuple:
    if order is None:
        return rs.positive_roots
    order = tuple(Root(*r) for r in order)
    if sorted(order) != sorted(rs.positive_roots):
        raise ValueError("order must list every positive root exactly once")
    return order


def collect(w: GroupWord, order: Sequence | None = None, strategy: str = "left") -> UNormalForm:
    """Collect a word of positive-root and torus letters into normal form.

    ``order`` is the target order of positive roots (canonical by default);
    ``strategy`` picks the leftmost ('left') or rightmost ('right') disorder
    first.  Both give the same result by uniqueness of normal forms.
    """
    rs = build_root_system(w.kind)
    sc = derive_structure_constants(rs)
    order = _check_order(rs, order)
    pos = {r: i for i, r in enumerate(order)}

    t_acc = None
    letters: list[list] = []
    for letter in w.letters:
        if isinstance(letter, WeylRep):
            raise ValueError("collect does not accept Weyl letters; use conjugate_by_weyl")
        if isinstance(letter, TorusElt):
            # U t = t (t^-1 U t),  t^-1 u_g(x) t = u_g(g(t)^-1 x)
            letters = [[g, letter.character(g).inverse_monomial() * f] for g, f in letters]
            t_acc = letter if t_acc is None else t_acc * letter
            continue
        if not letter.root.is_positive():
            raise ValueError(f"negative root letter u_{letter.root} cannot be collected")
        if not letter.arg.is_zero():
            letters.append([letter.root, letter.arg])

    steps = 0
    while True:
        steps += 1
        if steps > MAX_COLLECTION_STEPS:
            raise RuntimeError("collection did not terminate")
        idx = None
        rng = range(len(letters) - 1)
        if strategy == "right":
            rng = reversed(rng)
        elif strategy != "left":
            raise ValueError(f"unknown strategy {strategy!r}")
        for i in rng:
            if pos[letters[i][0]] >= pos[letters[i + 1][0]]:
                idx = i
                break
        if idx is None:
            break
        (d, g_arg), (g, f_arg) = letters[idx], letters[idx + 1]
        if d == g:
            s = f_arg + g_arg
            letters[idx: idx + 2] = [[d, s]] if not s.is_zero() else []
            continue
        # u_d(y) u_g(x) = u_g(x) u_d(y) [u_d(y), u_g(x)]
        corr = []
        for i, j, r, c in sc.commutators[(g, d)]:
            arg = c * (-f_arg) ** i * g_arg ** j
            if not arg.is_zero():
                corr.append([r, arg])
        letters[idx: idx + 2] = [[g, f_arg], [d, g_arg]] + corr

    torus_part = None if (t_acc is None or t_acc.is_trivial()) else t_acc
    return UNormalForm(w.kind, tuple((g, f) for g, f in letters), torus_part, order)


def _torus_h(rs: RootSystem, s: str, value: int) -> TorusElt:
    """Torus letter of h_s(value) for value = +-1."""
    sr = ALPHA if s == "a" else BETA
    return torus(value ** (rs.pairing(ALPHA, sr) % 2), value ** (rs.pairing(BETA, sr) % 2))


def invert(w: GroupWord) -> GroupWord:
    rs = build_root_system(w.kind)
    out: list = []
    for letter in reversed(w.letters):
        if isinstance(letter, RootElt):
            out.append(RootElt(letter.root, -letter.arg))
        elif isinstance(letter, TorusElt):
            out.append(letter.inverse())
        else:
            # n_s^-1 = n_s h_s(-1)
            out.append(letter)
            out.append(_torus_h(rs, letter.s, -1))
    return GroupWord(tuple(out), w.kind)


def conjugate(w: GroupWord, by: GroupWord, order: Sequence | None = None) -> UNormalForm:
    """Normal form of ``by^-1 * w * by``."""
    return collect(invert(by) + w + by, order=order)


def weyl_conjugate_letter(rs: RootSystem, s: str, letter: Letter) -> Letter:
    """``n_s * letter * n_s^-1`` for a root or torus letter."""
    sc = derive_structure_constants(rs)
    if isinstance(letter, RootElt):
        return RootElt(rs.reflect(s, letter.root), sc.eta[(s, letter.root)] * letter.arg)
    if isinstance(letter, TorusElt):
        return TorusElt(
            letter.character(rs.reflect(s, ALPHA)), letter.character(rs.reflect(s, BETA))
        )
    raise ValueError("cannot conjugate a Weyl letter")


def conjugate_by_weyl(nf: UNormalForm, s: str) -> GroupWord:
    """Word for ``n_s * nf * n_s^-1``; roots may become negative."""
    rs = build_root_system(nf.kind)
    return GroupWord(
        tuple(weyl_conjugate_letter(rs, s, x) for x in nf.to_word().letters), nf.kind
    )


def membership_support_test(nf: UNormalForm, w: WeylElement, parabolic: str) -> list[Polynomial]:
    """Obstructions to ``nf`` lying in ``n_w P n_w^-1``.

    Returns the nonzero coefficients of ``nf`` on positive roots outside
    ``w(R_P)``; the element lies in the conjugate parabolic exactly when all of
    them vanish.
    """
    rs = build_root_system(nf.kind)
    if tuple(nf.order) != rs.positive_roots:
        raise ValueError("membership test needs the canonical root order")
    allowed = {w.apply(r) for r in rs.parabolic_roots(parabolic)}
    return [f for g, f in nf.coeffs if g not in allowed and not f.is_zero()]


__all__ = [
    "GroupWord",
    "Polynomial",
    "RootElt",
    "TorusElt",
    "UNormalForm",
    "WeylRep",
    "coefficients_in",
    "collect",
    "conjugate",
    "conjugate_by_weyl",
    "invert",
    "membership_support_test",
    "torus",
    "u",
    "word",
]
