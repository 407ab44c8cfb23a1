"""Sparse exact multivariate polynomials over Z (or F_p).

Monomials are sorted tuples of ``(variable, exponent)`` pairs.  Variables
named in ``units`` are Laurent variables and may carry negative exponents;
all other variables are ordinary.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Monomial = tuple  # tuple[tuple[str, int], ...]


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e))


class Polynomial:
    __slots__ = ("terms", "units", "modulus", "_hash")

    def __init__(self, terms=None, units: Iterable[str] = (), modulus: int | None = None):
        self.units = frozenset(units)
        self.modulus = modulus
        clean = {}
        for mono, c in (terms or {}).items():
            if modulus is not None:
                c %= modulus
            if c:
                clean[mono] = c
        for mono in clean:
            for v, e in mono:
                if e < 0 and v not in self.units:
                    raise ValueError(f"negative exponent on ordinary variable {v!r}")
        self.terms = clean
        self._hash = None

    # constructors ---------------------------------------------------------
    @classmethod
    def const(cls, c: int, modulus=None) -> "Polynomial":
        return cls({(): c}, modulus=modulus)

    @classmethod
    def var(cls, name: str, modulus=None) -> "Polynomial":
        return cls({((name, 1),): 1}, modulus=modulus)

    @classmethod
    def unit(cls, name: str, exp: int = 1, modulus=None) -> "Polynomial":
        return cls({((name, exp),): 1}, units=(name,), modulus=modulus)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int):
            return Polynomial.const(other, self.modulus)
        return NotImplemented

    def _join(self, other: "Polynomial"):
        if self.modulus is None:
            mod = other.modulus
        elif other.modulus is None or other.modulus == self.modulus:
            mod = self.modulus
        else:
            raise ValueError("polynomials over different moduli")
        return self.units | other.units, mod

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        units, mod = self._join(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out, units, mod)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()}, self.units, self.modulus)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        units, mod = self._join(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out, units, mod)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            inv = self.inverse_monomial()
            return inv ** (-n)
        result = Polynomial.const(1, self.modulus)
        result = Polynomial(result.terms, self.units, self.modulus)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse_monomial(self) -> "Polynomial":
        """Inverse of a unit monomial +-m (m a product of Laurent variables)."""
        if len(self.terms) != 1:
            raise ValueError("only monomials are invertible")
        (mono, c), = self.terms.items()
        if self.modulus is None and c not in (1, -1):
            raise ValueError(f"coefficient {c} is not a unit in Z")
        if any(v not in self.units for v, _ in mono):
            raise ValueError("monomial involves ordinary variables")
        cinv = c if self.modulus is None else pow(c, -1, self.modulus)
        return Polynomial({tuple((v, -e) for v, e in mono): cinv}, self.units, self.modulus)

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.const(other, self.modulus)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms and self.modulus == other.modulus

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.terms.items()), self.modulus))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.terms.get((), 0)

    # structure ------------------------------------------------------------
    @property
    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e for _, e in m) for m in self.terms)
        return max(dict(m).get(var, 0) for m in self.terms)

    def reduce(self, p: int) -> "Polynomial":
        return Polynomial(self.terms, self.units, p)

    def lift(self) -> "Polynomial":
        return Polynomial(self.terms, self.units, None)

    def map_coefficients(self, f) -> "Polynomial":
        return Polynomial({m: f(c) for m, c in self.terms.items()}, self.units, self.modulus)

    def coefficients_in(self, vars: Iterable[str]) -> dict:
        """Group terms by their monomial in ``vars``.

        Returns ``{monomial_in_vars: coefficient polynomial}``.
        """
        vs = set(vars)
        out: dict = {}
        for m, c in self.terms.items():
            inner = tuple((v, e) for v, e in m if v in vs)
            rest = tuple((v, e) for v, e in m if v not in vs)
            out.setdefault(inner, {})
            out[inner][rest] = out[inner].get(rest, 0) + c
        return {k: Polynomial(v, self.units, self.modulus) for k, v in out.items()}

    def derivative(self, var: str) -> "Polynomial":
        out: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(var, 0)
            if not e:
                continue
            d[var] = e - 1
            mono = tuple(sorted((v, x) for v, x in d.items() if x))
            out[mono] = out.get(mono, 0) + c * e
        return Polynomial(out, self.units, self.modulus)

    def subs(self, values: Mapping[str, object]) -> "Polynomial":
        """Substitute integers or polynomials for variables."""
        result = Polynomial({}, self.units - set(values), self.modulus)
        for m, c in self.terms.items():
            term = Polynomial({(): c}, self.units - set(values), self.modulus)
            keep = []
            for v, e in m:
                if v in values:
                    val = values[v]
                    if not isinstance(val, Polynomial):
                        if e < 0:
                            val = _inverse_scalar(val, self.modulus)
                            e = -e
                        term = term * Polynomial.const(val ** e if isinstance(val, int) else val, self.modulus)
                        continue
                    term = term * val ** e
                else:
                    keep.append((v, e))
            if keep:
                term = term * Polynomial({tuple(keep): 1}, self.units, self.modulus)
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, int], modulus: int | None = None):
        """Numeric value; reduce mod ``modulus`` (or the polynomial's modulus)."""
        p = modulus if modulus is not None else self.modulus
        total = 0 if p is not None else Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                x = values[v]
                if p is not None:
                    t = t * pow(x, e, p) % p
                else:
                    t = t * Fraction(x) ** e
            total += t
        if p is not None:
            return total % p
        return int(total) if total.denominator == 1 else total

    def as_function(self, variables: list[str], p: int):
        """Vectorisable evaluator f(*arrays) mod p (non-negative exponents only)."""
        idx = {v: i for i, v in enumerate(variables)}
        terms = [(c % p, [(idx[v], e) for v, e in m]) for m, c in self.terms.items()]

        def f(*xs):
            total = 0
            for c, mono in terms:
                t = c
                for i, e in mono:
                    t = t * (xs[i] ** e % p) % p
                total = (total + t) % p
            return total

        return f

    # display --------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"

        def mono_key(item):
            m, _ = item
            return (-sum(abs(e) for _, e in m), m)

        parts = []
        for m, c in sorted(self.terms.items(), key=mono_key):
            body = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not body:
                s = str(abs(c))
            elif abs(c) == 1:
                s = body
            else:
                s = f"{abs(c)}*{body}"
            parts.append((" - " if c < 0 else " + ") + s)
        out = "".join(parts)
        return ("-" + out[3:]) if out.startswith(" - ") else out[3:]

    def __repr__(self):
        return f"Polynomial({self})"


def _inverse_scalar(x, modulus):
    if modulus is not None:
        return pow(x, -1, modulus)
    return Fraction(1, 1) / x


def coefficients_in(f: Polynomial, vars: Iterable[str]) -> list[Polynomial]:
    """Coefficient polynomials of ``f`` with respect to the monomials in ``vars``.

    ``f`` vanishes identically in ``vars`` iff every returned coefficient is 0.
    The list is ordered by decreasing total degree of the ``vars`` monomial.
    """
    groups = f.coefficients_in(vars)
    keys = sorted(groups, key=lambda m: (-sum(e for _, e in m), m))
    return [groups[k] for k in keys if not groups[k].is_zero()]


def parse_poly(text: str, units: Iterable[str] = ()) -> Polynomial:
    """Parse a polynomial written with ``+ - * ^`` and integer constants."""
    import ast

    units = set(units)
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), node.right
            if isinstance(node.op, ast.Pow):
                exp = ev(b)
                exp = exp.constant_value() if isinstance(exp, Polynomial) else exp
                return a ** exp
            b = ev(b)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Polynomial.const(node.value)
        if isinstance(node, ast.Name):
            return Polynomial.unit(node.id) if node.id in units else Polynomial.var(node.id)
        raise ValueError(f"cannot parse polynomial {text!r}")

    out = ev(tree)
    return out if isinstance(out, Polynomial) else Polynomial.const(out)
