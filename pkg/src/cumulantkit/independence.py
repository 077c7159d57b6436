"""Mixed moments under the four natural independences and the dot operation.

A labeled word is a sequence of ``(label, var)`` pairs: ``var`` indexes a
variable of the algebra ``label``. Adjacent letters with equal labels are
one algebra element, so every evaluator first merges them into runs.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .exactalg import Poly, lagrange_interpolate
from .moments import MomentFunctional, Word, subword
from .partitions import _all_partitions, complement_decomposition

FLAVORS = ("tensor", "free", "boolean", "monotone")
UNIVERSAL = ("tensor", "free", "boolean")

Run = tuple  # (label, tuple of vars)


def check_flavor(flavor: str) -> None:
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")


def to_runs(lw) -> tuple[Run, ...]:
    runs: list[list] = []
    for label, var in lw:
        if runs and runs[-1][0] == label:
            runs[-1][1].append(var)
        else:
            runs.append([label, [var]])
    return tuple((lab, tuple(vs)) for lab, vs in runs)


def _merge(runs) -> tuple[Run, ...]:
    out: list[Run] = []
    for lab, vs in runs:
        if out and out[-1][0] == lab:
            out[-1] = (lab, out[-1][1] + vs)
        else:
            out.append((lab, vs))
    return tuple(out)


def _prod(xs, one=Fraction(1)):
    out = one
    for x in xs:
        out = out * x
    return out


def _lookup(fam: Mapping, label, vs):
    try:
        phi = fam[label]
    except KeyError:
        raise KeyError(f"no algebra registered under label {label!r}") from None
    return phi.moment(vs)


def _tensor(fam, runs):
    per_label: dict = {}
    for lab, vs in runs:
        per_label[lab] = per_label.get(lab, ()) + vs
    return _prod(_lookup(fam, lab, vs) for lab, vs in per_label.items())


def _boolean(fam, runs):
    return _prod(_lookup(fam, lab, vs) for lab, vs in runs)


def _monotone(fam, runs, peak: str = "left"):
    runs = list(runs)
    for lab, _ in runs:
        if not isinstance(lab, int) or isinstance(lab, bool):
            raise TypeError(f"monotone evaluation needs integer labels, got {lab!r}")
    acc = Fraction(1)
    while len(runs) > 1:
        order = range(len(runs)) if peak == "left" else range(len(runs) - 1, -1, -1)
        for i in order:
            lab = runs[i][0]
            if (i == 0 or runs[i - 1][0] < lab) and (i == len(runs) - 1 or runs[i + 1][0] < lab):
                break
        else:  # adjacent runs have distinct labels, so the largest is a peak
            raise AssertionError("no peak found")
        acc = acc * _lookup(fam, *runs[i])
        del runs[i]
        if 0 < i < len(runs) and runs[i - 1][0] == runs[i][0]:
            runs[i - 1] = (runs[i][0], runs[i - 1][1] + runs[i][1])
            del runs[i]
    return acc * _lookup(fam, *runs[0])


def _free(fam, runs, cache: dict):
    # phi((a_1 - m_1)...(a_k - m_k)) = 0 for alternating runs; solve for phi(a_1...a_k)
    if len(runs) == 1:
        return _lookup(fam, *runs[0])
    hit = cache.get(runs)
    if hit is not None:
        return hit
    k = len(runs)
    means = [_lookup(fam, *run) for run in runs]
    total = Fraction(0)
    for mask in range((1 << k) - 1):
        coef = Fraction(1)
        for j in range(k):
            if not mask >> j & 1:
                coef = coef * -means[j]
        if mask == 0:
            total = total + coef
            continue
        sub = _merge(runs[j] for j in range(k) if mask >> j & 1)
        total = total + coef * _free(fam, sub, cache)
    value = -total
    cache[runs] = value
    return value


def mixed_moment(flavor: str, fam: Mapping, lw, *, peak: str = "left", cache: dict | None = None):
    """phi(X_1 ... X_n) for X_i in algebra ``lw[i][0]`` under the given independence.

    ``fam`` maps labels to :class:`MomentFunctional`; for monotone the
    integer label order is the order of the algebras. ``cache`` may be
    shared across calls with the same family (free flavor only).
    """
    check_flavor(flavor)
    runs = to_runs(lw)
    if not runs:
        return Fraction(1)
    if flavor == "tensor":
        return _tensor(fam, runs)
    if flavor == "boolean":
        return _boolean(fam, runs)
    if flavor == "monotone":
        return _monotone(fam, runs, peak)
    return _free(fam, runs, {} if cache is None else cache)


# ---------------------------------------------------------------------------
# dot operation


def dot_moment_brute(flavor: str, phi: MomentFunctional, w, N: int):
    """phi(N.X_{w_1} ... N.X_{w_n}) by expanding all N^n copy assignments."""
    check_flavor(flavor)
    w = tuple(w)
    if N < 0:
        raise ValueError("N must be >= 0")
    if not w:
        return Fraction(1)
    fam = {j: phi for j in range(1, N + 1)}
    cache: dict = {}
    total = Fraction(0)
    for labels in itertools.product(range(1, N + 1), repeat=len(w)):
        total = total + mixed_moment(flavor, fam, tuple(zip(labels, w)), cache=cache)
    return total


def pattern_sums(flavor: str, phi: MomentFunctional, w, cache: dict | None = None) -> list:
    """S_k = sum of mixed moments over copy patterns using exactly k copies.

    A pattern is a surjection from positions onto copies 1..k. Its mixed
    moment does not change under order-preserving relabelling of copies
    (any relabelling for the universal flavors), so
    phi(N.X_{w_1} ... N.X_{w_n}) = sum_k C(N, k) S_k.

    ``cache`` memoizes free evaluations and may be reused for the same ``phi``.
    """
    check_flavor(flavor)
    w = tuple(w)
    n = len(w)
    sums = [Fraction(0)] * (n + 1)
    cache = {} if cache is None else cache
    if not n:
        sums[0] = Fraction(1)
        return sums
    for blocks in _all_partitions(n):
        k = len(blocks)
        fam = {j: phi for j in range(1, k + 1)}
        perms = [tuple(range(1, k + 1))] if flavor in UNIVERSAL else itertools.permutations(range(1, k + 1))
        value = Fraction(0)
        for perm in perms:
            labels = [0] * n
            for b, lab in zip(blocks, perm):
                for pos in b:
                    labels[pos - 1] = lab
            value = value + mixed_moment(flavor, fam, tuple(zip(labels, w)), cache=cache)
        if flavor in UNIVERSAL:
            value = value * math.factorial(k)
        sums[k] = sums[k] + value
    return sums


def dot_moment(flavor: str, phi: MomentFunctional, w, N: int, *, method: str = "pattern"):
    """phi(N.X_{w_1} ... N.X_{w_n}) with N copies of ``phi``; copy j carries order j."""
    if N < 0:
        raise ValueError("N must be >= 0")
    if method == "brute":
        return dot_moment_brute(flavor, phi, w, N)
    if method != "pattern":
        raise ValueError(f"unknown method {method!r}")
    sums = pattern_sums(flavor, phi, w)
    return sum((math.comb(N, k) * s for k, s in enumerate(sums)), Fraction(0))


def phi_t(flavor: str, phi: MomentFunctional, w, var: str = "t", cache: dict | None = None) -> Poly:
    """The polynomial N -> phi(N.X_{w_1}...N.X_{w_n}), recovered from N = 0..n."""
    w = tuple(w)
    if w:
        phi.moment(w)  # raises MomentDataError naming the word if out of range
    sums = pattern_sums(flavor, phi, w, cache)
    points = [(N, sum((math.comb(N, k) * s for k, s in enumerate(sums)), Fraction(0))) for N in range(len(w) + 1)]
    return lagrange_interpolate(points, var)


def dot_functional(flavor: str, phi: MomentFunctional, N: int, max_len: int | None = None) -> MomentFunctional:
    """The moment table of N.X, i.e. w -> phi(N.X_{w_1} ... N.X_{w_n})."""
    max_len = phi.max_len if max_len is None else max_len
    return MomentFunctional.from_function(phi.r, max_len, lambda w: dot_moment(flavor, phi, w, N))


# ---------------------------------------------------------------------------
# sums of monotone independent families


def subset_expansion(x_moment: Callable[[Word], object], y_moment: Callable[[Word], object], w, one=Fraction(1)):
    """sum over V of x(w_V) * prod_j y(w_{V_j}), V_j the gaps of V.

    With x, y the moment maps of monotone independent X < Y this is the
    moment of (X + Y)-products; x and y may also return polynomials.
    """
    w = tuple(w)
    n = len(w)
    total = 0 * one
    for r in range(n + 1):
        for v in itertools.combinations(range(1, n + 1), r):
            term = x_moment(subword(w, v)) if v else one
            for gap in complement_decomposition(n, v):
                term = term * y_moment(subword(w, gap))
            total = total + term
    return total


def prop51_expansion(fam: Mapping, w):
    """Moment of (X_{w_1}+Y_{w_1})...(X_{w_n}+Y_{w_n}) for monotone X < Y, by subset sum.

    ``fam`` has exactly two labels; the smaller one is X.
    """
    if len(fam) != 2:
        raise ValueError("prop51_expansion needs a two-label family")
    lx, ly = sorted(fam)
    return subset_expansion(fam[lx].moment, fam[ly].moment, w)


def sum_moment(flavor: str, fam: Mapping, w, cache: dict | None = None):
    """Moment of the product of (sum over labels of X^label_{w_i}), by direct expansion."""
    labels = sorted(fam)
    cache = {} if cache is None else cache
    total = Fraction(0)
    for ls in itertools.product(labels, repeat=len(w)):
        total = total + mixed_moment(flavor, fam, tuple(zip(ls, w)), cache=cache)
    return total


def sum_functional(flavor: str, fam: Mapping, max_len: int) -> MomentFunctional:
    """Moment table of the componentwise sum of the family's variables."""
    rs = {phi.r for phi in fam.values()}
    if len(rs) != 1:
        raise ValueError("all algebras must have the same number of variables")
    cache: dict = {}
    return MomentFunctional.from_function(rs.pop(), max_len, lambda w: sum_moment(flavor, fam, w, cache))


def mixed_functional(flavor: str, fam: Mapping, letters: Sequence[tuple], max_len: int) -> MomentFunctional:
    """Joint moment table of the given (label, var) letters, renumbered 1..len(letters)."""
    letters = tuple(letters)
    cache: dict = {}
    return MomentFunctional.from_function(
        len(letters), max_len,
        lambda w: mixed_moment(flavor, fam, tuple(letters[i - 1] for i in w), cache=cache),
    )

