"""Exact scalars and commuting polynomials.

Rationals are plain :class:`fractions.Fraction`. :class:`Poly` is a sparse
polynomial in a few named commuting indeterminates (``N``, ``t``, ``s``) with
rational coefficients; it is the coefficient ring for the dot-operation
polynomials and for the power series with a time parameter.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; anything else (floats, empty) is rejected."""
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ValueError(f"malformed rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(x: Scalar) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Poly:
    """Immutable sparse polynomial over Q in named commuting variables.

    Terms are stored as ``{exponent tuple: Fraction}`` aligned with ``vars``.
    Zero coefficients are never stored. Polynomials over different variable
    sets combine by embedding both into the union of their variables.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple, Scalar] | None = None):
        self.vars = tuple(vars)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"repeated variable in {self.vars}")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(self.vars) or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent {exps} for variables {self.vars}")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls((name,), {(1,): 1})

    @classmethod
    def const(cls, c: Scalar, vars: Sequence[str] = ()) -> "Poly":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def from_coeffs(cls, name: str, coeffs: Iterable[Scalar]) -> "Poly":
        """Univariate polynomial from a coefficient list indexed by exponent."""
        return cls((name,), {(k,): c for k, c in enumerate(coeffs)})

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``. The zero polynomial has degree -1."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def coeffs(self, var: str | None = None) -> list[Fraction]:
        """Coefficient list of a univariate polynomial (no trailing zeros)."""
        free = self.used_vars()
        if var is None:
            if len(free) > 1:
                raise ValueError(f"not univariate: {free}")
            var = free[0] if free else (self.vars[0] if self.vars else "t")
        elif any(v != var for v in free):
            raise ValueError(f"depends on variables other than {var}: {free}")
        out = [Fraction(0)] * (self.degree(var) + 1)
        if var in self.vars:
            i = self.vars.index(var)
            for e, c in self.terms.items():
                out[e[i]] += c
        else:
            out = [self.constant_term()] if self.terms else []
        return out

    def coefficient(self, **powers: int) -> Fraction:
        """Coefficient of the monomial given by ``var=power`` keywords."""
        exps = tuple(powers.get(v, 0) for v in self.vars)
        extra = [v for v, p in powers.items() if v not in self.vars and p]
        if extra:
            return Fraction(0)
        return self.terms.get(exps, Fraction(0))

    def used_vars(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    # -- alignment --------------------------------------------------------
    def _embed(self, vars: tuple[str, ...]) -> dict:
        idx = [vars.index(v) for v in self.vars]
        out = {}
        for e, c in self.terms.items():
            new = [0] * len(vars)
            for j, k in zip(idx, e):
                new[j] = k
            out[tuple(new)] = c
        return out

    def _union(self, other: "Poly") -> tuple[str, ...]:
        return self.vars + tuple(v for v in other.vars if v not in self.vars)

    @staticmethod
    def _coerce(x) -> "Poly | None":
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return Poly.const(x)
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        vars = self._union(other)
        a, b = self._embed(vars), other._embed(vars)
        for e, c in b.items():
            a[e] = a.get(e, 0) + c
        return Poly(vars, a)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        vars = self._union(other)
        a, b = self._embed(vars), other._embed(vars)
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return Poly(vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- calculus and evaluation -------------------------------------------
    def diff(self, var: str) -> "Poly":
        if var not in self.vars:
            return Poly(self.vars)
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return Poly(self.vars, out)

    def subs(self, **values) -> "Poly":
        """Substitute scalars or polynomials for variables."""
        rest = tuple(v for v in self.vars if v not in values)
        result = Poly(rest)
        keep = [i for i, v in enumerate(self.vars) if v not in values]
        for e, c in self.terms.items():
            term = Poly(rest, {tuple(e[i] for i in keep): c})
            for i, v in enumerate(self.vars):
                if v in values and e[i]:
                    val = values[v]
                    term = term * (val ** e[i] if isinstance(val, Poly) else Fraction(val) ** e[i])
            result = result + term
        return result

    def __call__(self, *args: Scalar, **kwargs: Scalar):
        """Evaluate; positional arguments follow ``vars`` order."""
        values = dict(zip(self.vars, args))
        values.update(kwargs)
        p = self.subs(**values)
        return p.constant_term() if p.is_constant() else p

    # -- comparison -------------------------------------------------------
    def _normal(self) -> frozenset:
        used = sorted(self.used_vars())
        idx = [self.vars.index(v) for v in used]
        return frozenset(
            (tuple((v, e[i]) for v, i in zip(used, idx) if e[i]), c)
            for e, c in self.terms.items()
        )

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._normal() == other._normal()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._normal())
        return self._hash

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- serialization ----------------------------------------------------
    def to_json(self):
        used = self.used_vars()
        if len(used) <= 1:
            var = used[0] if used else (self.vars[0] if self.vars else "t")
            return {var: [format_rational(c) for c in self.coeffs(var)]}
        key = ",".join(self.vars)
        return {key: {",".join(map(str, e)): format_rational(c) for e, c in sorted(self.terms.items())}}

    @classmethod
    def from_json(cls, obj) -> "Poly":
        if not isinstance(obj, dict) or len(obj) != 1:
            raise ValueError(f"malformed polynomial: {obj!r}")
        (key, body), = obj.items()
        if isinstance(body, list):
            return cls.from_coeffs(key, [parse_rational(c) for c in body])
        vars = key.split(",")
        return cls(vars, {tuple(int(x) for x in e.split(",")): parse_rational(c) for e, c in body.items()})


def lagrange_interpolate(points: Sequence[tuple[int, Scalar]], var: str = "N") -> Poly:
    """Unique polynomial of degree < len(points) through the given points.

    Newton divided differences over Q; exact for any distinct integer nodes.
    """
    if not points:
        raise ValueError("need at least one point")
    xs = [int(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError(f"duplicate interpolation nodes: {xs}")
    coef = [Fraction(y) if not isinstance(y, Poly) else y for _, y in points]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * Fraction(1, xs[i] - xs[i - j])
    # Horner on the Newton form
    x = Poly.var(var)
    result = Poly.const(0, (var,)) + coef[-1]
    for i in range(n - 2, -1, -1):
        result = result * (x - xs[i]) + coef[i]
    return result


def poly_derivative(p: Poly, wrt: str) -> Poly:
    return p.diff(wrt)


def binomial_poly(var: str, k: int) -> Poly:
    """``var choose k`` as a polynomial in ``var``."""
    x = Poly.var(var)
    out = Poly.const(1, (var,))
    for i in range(k):
        out = out * (x - i) * Fraction(1, i + 1)
    return out
