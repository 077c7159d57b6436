"""Truncated power series in non-commuting generators z_1..z_r.

Coefficients are Fractions or :class:`Poly` in a time parameter. All
identities are checked by exact coefficient comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .cumulants import CumulantFunctional, cumulants_from_moments
from .exactalg import Poly, format_rational, parse_rational
from .independence import phi_t
from .moments import MomentDataError, MomentFunctional, parse_word, word_key, words


def _is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, Poly) else c == 0


@dataclass(frozen=True)
class NCSeries:
    r: int
    D: int
    coeffs: Mapping[tuple, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.r < 1 or self.D < 0:
            raise ValueError("need r >= 1 and D >= 0")
        clean = {}
        for w, c in self.coeffs.items():
            w = tuple(w)
            if any(not 1 <= i <= self.r for i in w):
                raise ValueError(f"word {w} uses a generator outside 1..{self.r}")
            if len(w) <= self.D and not _is_zero(c):
                clean[w] = c
        object.__setattr__(self, "coeffs", clean)

    # -- constructors -----------------------------------------------------
    @classmethod
    def one(cls, r: int, D: int) -> "NCSeries":
        return cls(r, D, {(): Fraction(1)})

    @classmethod
    def gen(cls, i: int, r: int, D: int) -> "NCSeries":
        return cls(r, D, {(i,): Fraction(1)})

    @classmethod
    def from_function(cls, r: int, D: int, fn: Callable[[tuple], object], constant=Fraction(0)) -> "NCSeries":
        table = {w: fn(w) for w in words(r, D)}
        table[()] = constant
        return cls(r, D, table)

    # -- access -----------------------------------------------------------
    def __getitem__(self, w) -> object:
        return self.coeffs.get(tuple(w), Fraction(0))

    def constant(self):
        return self[()]

    def _check(self, other: "NCSeries") -> None:
        if not isinstance(other, NCSeries):
            raise TypeError(f"expected NCSeries, got {type(other).__name__}")
        if (self.r, self.D) != (other.r, other.D):
            raise ValueError(f"mismatched series shapes (r={self.r}, D={self.D}) vs (r={other.r}, D={other.D})")

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, NCSeries):
            return self + NCSeries(self.r, self.D, {(): other})
        self._check(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out[w] + c if w in out else c
        return NCSeries(self.r, self.D, out)

    __radd__ = __add__

    def __neg__(self):
        return NCSeries(self.r, self.D, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "NCSeries":
        return NCSeries(self.r, self.D, {w: c * v for w, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, NCSeries):
            return self.scale(other)
        self._check(other)
        by_len: dict[int, list] = {}
        for w, c in other.coeffs.items():
            by_len.setdefault(len(w), []).append((w, c))
        out: dict = {}
        for u, a in self.coeffs.items():
            room = self.D - len(u)
            for k, terms in by_len.items():
                if k > room:
                    continue
                for v, b in terms:
                    w = u + v
                    out[w] = out[w] + a * b if w in out else a * b
        return NCSeries(self.r, self.D, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, NCSeries):
            return NotImplemented
        return (self.r, self.D) == (other.r, other.D) and self.difference(other) is None

    __hash__ = None

    def difference(self, other: "NCSeries"):
        """First word (shortest, then lexicographic) where the coefficients differ, else None."""
        self._check(other)
        keys = sorted(set(self.coeffs) | set(other.coeffs), key=lambda w: (len(w), w))
        for w in keys:
            if not _is_zero(self[w] - other[w]):
                return w
        return None

    def is_zero(self) -> bool:
        return not self.coeffs

    def map_coeffs(self, fn) -> "NCSeries":
        return NCSeries(self.r, self.D, {w: fn(c) for w, c in self.coeffs.items()})

    def truncate(self, D: int) -> "NCSeries":
        return NCSeries(self.r, D, {w: c for w, c in self.coeffs.items() if len(w) <= D})

    def left_derivative(self, i: int) -> "NCSeries":
        """Series of words w with z_i w in self (drops the leading z_i)."""
        return NCSeries(self.r, self.D, {w[1:]: c for w, c in self.coeffs.items() if w and w[0] == i})

    def __repr__(self):
        return f"NCSeries(r={self.r}, D={self.D}, terms={len(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for w in sorted(self.coeffs, key=lambda w: (len(w), w)):
            c = self.coeffs[w]
            cs = str(c) if isinstance(c, Poly) else format_rational(c)
            mono = "".join(f"z{i}" for i in w)
            if isinstance(c, Poly) and len(c.terms) > 1:
                cs = f"({cs})"
            parts.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        return " + ".join(parts)

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        def enc(c):
            return c.to_json() if isinstance(c, Poly) else format_rational(c)

        keys = sorted(self.coeffs, key=lambda w: (len(w), w))
        return {"r": self.r, "D": self.D, "coeffs": {word_key(w): enc(self.coeffs[w]) for w in keys}}

    @classmethod
    def from_json(cls, obj: dict) -> "NCSeries":
        def dec(c):
            return Poly.from_json(c) if isinstance(c, dict) else parse_rational(c)

        return cls(obj["r"], obj["D"], {parse_word(k): dec(v) for k, v in obj["coeffs"].items()})


def series_mul(a: NCSeries, b: NCSeries) -> NCSeries:
    return a * b


def series_add(a: NCSeries, b: NCSeries) -> NCSeries:
    return a + b


def substitute(P: NCSeries, T: Sequence[NCSeries]) -> NCSeries:
    """P(T_1, ..., T_r): each monomial z_{i_1}...z_{i_k} becomes T_{i_1}...T_{i_k}.

    Every T_i must have zero constant term. Evaluated by the recursion
    P(T) = p_0 + sum_i T_i * (d_i P)(T) with d_i P the left derivative.
    """
    T = list(T)
    if len(T) != P.r:
        raise ValueError(f"need {P.r} substitution series, got {len(T)}")
    for i, t in enumerate(T, 1):
        P._check(t)
        if not _is_zero(t.constant()):
            raise ValueError(f"substitution target {i} has nonzero constant term")

    def rec(Q: NCSeries, depth: int) -> NCSeries:
        # Q(T) up to degree `depth` of Q's words; longer words cannot survive truncation
        out = NCSeries(P.r, P.D, {(): Q.constant()})
        if depth == 0:
            return out
        for i in range(1, P.r + 1):
            dQ = Q.left_derivative(i).truncate(depth - 1)
            if not dQ.is_zero():
                out = out + T[i - 1] * rec(NCSeries(P.r, P.D, dQ.coeffs), depth - 1)
        return out

    return rec(P, P.D)


# ---------------------------------------------------------------------------
# generating functions


def moment_series(phi: MomentFunctional, D: int) -> NCSeries:
    if D > phi.max_len:
        raise MomentDataError((1,) * D)
    return NCSeries.from_function(phi.r, D, phi.moment, constant=Fraction(1))


def cumulant_series(K: CumulantFunctional, D: int) -> NCSeries:
    if D > K.max_order:
        raise MomentDataError((1,) * D, "insufficient cumulant data")
    return NCSeries.from_function(K.r, D, K.cumulant)


def moment_series_t(flavor: str, phi: MomentFunctional, D: int, var: str = "t") -> NCSeries:
    """Series whose w-coefficient is phi_t(w) as a polynomial in ``var``."""
    if D > phi.max_len:
        raise MomentDataError((1,) * D)
    cache: dict = {}
    return NCSeries.from_function(
        phi.r, D, lambda w: phi_t(flavor, phi, w, var=var, cache=cache), constant=Poly.const(1, (var,))
    )


def muraki_compose(MX: NCSeries, MY: NCSeries) -> NCSeries:
    """M_Y * M_X(z_1 M_Y, ..., z_r M_Y): moment series of X + Y for monotone X < Y."""
    MX._check(MY)
    return MY * substitute(MX, mu_vector(MY))


def mu_vector(M: NCSeries) -> list[NCSeries]:
    """(z_1 M, ..., z_r M), truncated at the series degree."""
    return [NCSeries.gen(i, M.r, M.D) * M for i in range(1, M.r + 1)]


def mu_compose(U: Sequence[NCSeries], V: Sequence[NCSeries]) -> list[NCSeries]:
    """Componentwise U_i(V_1, ..., V_r)."""
    return [substitute(u, V) for u in U]


def identity_vector(r: int, D: int) -> list[NCSeries]:
    return [NCSeries.gen(i, r, D) for i in range(1, r + 1)]


@dataclass
class FlowReport:
    ok: bool
    first_difference: tuple | None
    lhs: object = None
    rhs: object = None


def flow_check(phi: MomentFunctional, D: int, flavor: str = "monotone") -> FlowReport:
    """Compare mu(t + s) with mu(t) o mu(s) as series with coefficients in Q[t, s]."""
    if flavor != "monotone":
        raise ValueError("the flow identity is stated for monotone independence")
    Mt = moment_series_t("monotone", phi, D, var="t")
    Ms = Mt.map_coeffs(lambda c: c.subs(t=Poly.var("s")))
    Mts = Mt.map_coeffs(lambda c: c.subs(t=Poly.var("t") + Poly.var("s")))
    lhs = mu_vector(Mts)
    rhs = mu_compose(mu_vector(Mt), mu_vector(Ms))
    for i, (a, b) in enumerate(zip(lhs, rhs), 1):
        w = a.difference(b)
        if w is not None:
            return FlowReport(False, (i, w), a[w], b[w])
    return FlowReport(True, None)


def ode_residual(phi: MomentFunctional, D: int, K: CumulantFunctional | None = None) -> NCSeries:
    """d/dt M(t) - M(t) K(z_1 M(t), ..., z_r M(t)); zero for monotone cumulants K."""
    Mt = moment_series_t("monotone", phi, D, var="t")
    if K is None:
        K = cumulants_from_moments("monotone", phi, D)
    Kt = cumulant_series(K, D).map_coeffs(lambda c: Poly.const(c, ("t",)))
    dM = Mt.map_coeffs(lambda c: c.diff("t"))
    return dM - Mt * substitute(Kt, mu_vector(Mt))


def r_transform(phi: MomentFunctional, D: int) -> NCSeries:
    """The R with zero constant term solving M - 1 = R(z_1 M, ..., z_r M), degree by degree."""
    M = moment_series(phi, D)
    mu = mu_vector(M)
    R = NCSeries(phi.r, D)
    for n in range(1, D + 1):
        # z_{w_1} M ... z_{w_n} M has lowest term z_w with coefficient 1, so R_w
        # enters the degree-n part linearly and only lower R terms are needed
        lower = substitute(R, mu)
        new = dict(R.coeffs)
        for w in words(phi.r, n, n):
            new[w] = M[w] - lower[w]
        R = NCSeries(phi.r, D, new)
    return R


def a_transform(K: CumulantFunctional) -> dict[int, Fraction]:
    """Coefficients of A(z) = -z K(1/z) for one variable: {power: coefficient}.

    K(z) = sum k_n z^n gives A(z) = sum -k_n z^(1-n); zero terms are omitted.
    """
    if K.r != 1:
        raise ValueError("the A-transform is defined for a single variable (r = 1)")
    out = {}
    for n in range(1, K.max_order + 1):
        k = K.cumulant((1,) * n)
        if k:
            out[1 - n] = -k
    return out


def format_laurent(coeffs: Mapping[int, Fraction], var: str = "z") -> str:
    if not coeffs:
        return "0"
    parts = []
    for p in sorted(coeffs, reverse=True):
        c = coeffs[p]
        if p == 0:
            parts.append(format_rational(c))
            continue
        mono = var if p == 1 else (f"{var}^{p}" if p > 0 else None)
        if mono is None:
            den = var if p == -1 else f"{var}^{-p}"
            num = format_rational(abs(c)) if abs(c) != 1 else "1"
            parts.append(("-" if c < 0 else "") + f"{num}/{den}")
        else:
            parts.append(mono if c == 1 else f"{format_rational(c)}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def save_series(S: NCSeries, path) -> None:
    Path(path).write_text(json.dumps(S.to_json(), indent=1) + "\n", encoding="utf-8")


def load_series(path) -> NCSeries:
    return NCSeries.from_json(json.loads(Path(path).read_text(encoding="utf-8")))
