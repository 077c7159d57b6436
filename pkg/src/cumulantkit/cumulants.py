"""Joint cumulants: the coefficient of N in the dot-operation polynomial, and
the partition-sum moment-cumulant formulas in both directions."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Mapping

from .exactalg import format_rational
from .independence import FLAVORS, check_flavor, mixed_functional, phi_t
from .moments import MomentDataError, MomentFileError, MomentFunctional, _read_table, subword, word_key, words
from .partitions import (
    SetPartition,
    complement_decomposition,
    enumerate_monotone_partitions,
    enumerate_partitions,
    highest_coefficient,
    interval_blocks,
    monotone_weight,
)


@dataclass(frozen=True)
class CumulantFunctional:
    flavor: str
    r: int
    max_order: int
    table: Mapping[tuple, object] = field(repr=False)

    def __post_init__(self):
        check_flavor(self.flavor)
        object.__setattr__(self, "table", dict(self.table))

    def cumulant(self, w) -> object:
        w = tuple(w)
        if not w:
            raise ValueError("cumulants are indexed by nonempty words")
        if len(w) > self.max_order or any(not 1 <= i <= self.r for i in w):
            raise MomentDataError(w, "insufficient cumulant data")
        try:
            return self.table[w]
        except KeyError:
            raise MomentDataError(w, "insufficient cumulant data") from None

    __call__ = cumulant

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "num_vars": self.r,
            "max_order": self.max_order,
            "cumulants": {word_key(w): format_rational(self.table[w]) for w in words(self.r, self.max_order)},
        }


def cumulants_from_json(obj: dict) -> CumulantFunctional:
    if not isinstance(obj, dict) or obj.get("flavor") not in FLAVORS:
        raise MomentFileError(f"flavor must be one of {FLAVORS}")
    r, max_order, table = _read_table(obj, "num_vars", "max_order", "cumulants")
    return CumulantFunctional(obj["flavor"], r, max_order, table)


def load_cumulants(path) -> CumulantFunctional:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MomentFileError(f"{path}: invalid JSON: {exc}") from None
    return cumulants_from_json(obj)


def save_cumulants(K: CumulantFunctional, path) -> None:
    Path(path).write_text(json.dumps(K.to_json(), indent=1) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# definition route


def cumulant_dot(flavor: str, phi: MomentFunctional, w, cache: dict | None = None):
    """Coefficient of N in phi(N.X_{w_1} ... N.X_{w_n})."""
    return phi_t(flavor, phi, w, var="N", cache=cache).coefficient(N=1)


def cumulants_dot(flavor: str, phi: MomentFunctional, max_order: int | None = None) -> CumulantFunctional:
    max_order = phi.max_len if max_order is None else max_order
    cache: dict = {}
    return CumulantFunctional(
        flavor, phi.r, max_order, {w: cumulant_dot(flavor, phi, w, cache) for w in words(phi.r, max_order)}
    )


# ---------------------------------------------------------------------------
# partition route


@lru_cache(maxsize=None)
def partition_weights(flavor: str, n: int, monotone_path: str = "count") -> tuple[tuple[SetPartition, Fraction], ...]:
    """Nonzero weights d(pi) of the moment-cumulant formula on partitions of n.

    Monotone weights are (#admissible block orders)/|pi|!; ``monotone_path``
    ``"explicit"`` sums 1/|pi|! over the enumerated monotone partitions instead.
    """
    check_flavor(flavor)
    if flavor == "monotone":
        if monotone_path == "explicit":
            acc: dict[SetPartition, Fraction] = {}
            for op in enumerate_monotone_partitions(n):
                acc[op.partition] = acc.get(op.partition, Fraction(0)) + Fraction(1, math.factorial(len(op.partition)))
            pairs = [(p, acc[p]) for p in enumerate_partitions(n, "noncrossing") if p in acc]
        else:
            pairs = [(p, monotone_weight(p)) for p in enumerate_partitions(n, "noncrossing")]
    else:
        kind = {"tensor": "all", "free": "noncrossing", "boolean": "interval"}[flavor]
        pairs = [(p, highest_coefficient(flavor, p)) for p in enumerate_partitions(n, kind)]
    return tuple((p, wt) for p, wt in pairs if wt)


def cumulant_of_partition(K, p: SetPartition, w):
    """Product over blocks V of K(w restricted to V)."""
    w = tuple(w)
    if p.n != len(w):
        raise ValueError(f"partition of {p.n} does not match word length {len(w)}")
    kfun = K.cumulant if isinstance(K, CumulantFunctional) else K
    out = Fraction(1)
    for b in p.blocks:
        out = out * kfun(subword(w, b))
    return out


def moments_from_cumulants(flavor: str, K: CumulantFunctional, max_order: int | None = None) -> MomentFunctional:
    check_flavor(flavor)
    max_order = K.max_order if max_order is None else max_order
    table = {}
    for w in words(K.r, max_order):
        table[w] = sum(
            (wt * cumulant_of_partition(K, p, w) for p, wt in partition_weights(flavor, len(w))), Fraction(0)
        )
    return MomentFunctional(K.r, max_order, table)


def cumulants_from_moments(flavor: str, phi: MomentFunctional, max_order: int | None = None) -> CumulantFunctional:
    """Invert the moment-cumulant formula order by order.

    K(w) = phi(w) - sum over non-maximal partitions of d(pi) K_pi(w);
    the one-block partition always has weight 1.
    """
    check_flavor(flavor)
    max_order = phi.max_len if max_order is None else max_order
    table: dict = {}
    for w in words(phi.r, max_order):
        n = len(w)
        acc = phi.moment(w)
        for p, wt in partition_weights(flavor, n):
            if len(p) == 1:
                continue
            acc = acc - wt * cumulant_of_partition(table.__getitem__, p, w)
        table[w] = acc
    return CumulantFunctional(flavor, phi.r, max_order, table)


# ---------------------------------------------------------------------------
# vanishing on mixed independent arguments


def mixed_cumulant(flavor: str, fam: Mapping, lw):
    """Cumulant of the labeled word's letters under the family's joint law."""
    lw = tuple(lw)
    letters = tuple(dict.fromkeys(lw))
    phi = mixed_functional(flavor, fam, letters, len(lw))
    index = {x: i + 1 for i, x in enumerate(letters)}
    return cumulant_dot(flavor, phi, tuple(index[x] for x in lw))


def check_mk3(flavor: str, fam: Mapping, lw):
    """Cumulant of a word that mixes independent algebras; zero for tensor/free/boolean."""
    if flavor == "monotone":
        raise ValueError("monotone cumulants do not vanish on mixed arguments; use mixed_cumulant")
    if len({lab for lab, _ in lw}) < 2:
        raise ValueError("word must use at least two labels")
    return mixed_cumulant(flavor, fam, lw)


# ---------------------------------------------------------------------------
# monotone recurrences in t


def recurrence_rhs(K, phit, w, form: int = 1):
    """Right-hand sides of the differential recurrences for d/dt phi_t(w).

    ``K`` maps words to monotone cumulants, ``phit`` maps words to phi_t
    polynomials (empty word -> 1). Form 1 sums over all nonempty subsets V,
    form 2 over interval blocks only.
    """
    w = tuple(w)
    n = len(w)
    total = Fraction(0)
    if form == 1:
        subsets = (v for r in range(1, n + 1) for v in itertools.combinations(range(1, n + 1), r))
        for v in subsets:
            term = K(subword(w, v))
            for gap in complement_decomposition(n, v):
                term = term * phit(subword(w, gap))
            total = total + term
    elif form == 2:
        for v in interval_blocks(n):
            rest = tuple(i for i in range(1, n + 1) if i not in v)
            total = total + K(subword(w, v)) * phit(subword(w, rest))
    else:
        raise ValueError("form must be 1 or 2")
    return total


__all__ = [
    "CumulantFunctional",
    "check_mk3",
    "cumulant_dot",
    "cumulant_of_partition",
    "cumulants_dot",
    "cumulants_from_json",
    "cumulants_from_moments",
    "load_cumulants",
    "mixed_cumulant",
    "moments_from_cumulants",
    "partition_weights",
    "recurrence_rhs",
    "save_cumulants",
]
