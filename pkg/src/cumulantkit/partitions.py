"""Set partitions of {1..n} and the subclasses used by the moment-cumulant formulas.

Blocks are sorted tuples of 1-based positions; a :class:`SetPartition`
stores its blocks ordered by their minima so equality is structural.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

Block = tuple  # sorted tuple of distinct positive ints

KINDS = ("all", "noncrossing", "interval")

DEFAULT_MAX_N = 10


def max_n() -> int:
    """Enumeration cap; ``CUMULANTKIT_MAX_N`` overrides the default of 10."""
    env = os.environ.get("CUMULANTKIT_MAX_N")
    return int(env) if env else DEFAULT_MAX_N


def _check_n(n: int, limit: int | None) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    limit = max_n() if limit is None else limit
    if n > limit:
        raise ValueError(f"n={n} exceeds enumeration cap {limit} (set CUMULANTKIT_MAX_N to raise it)")


@dataclass(frozen=True)
class SetPartition:
    n: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else 0))
        object.__setattr__(self, "blocks", blocks)
        seen = [x for b in blocks for x in b]
        if any(not b for b in blocks):
            raise ValueError("empty block")
        if sorted(seen) != list(range(1, self.n + 1)):
            raise ValueError(f"blocks {blocks} do not partition 1..{self.n}")

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return "{" + "|".join("".join(map(str, b)) if self.n < 10 else ",".join(map(str, b)) for b in self.blocks) + "}"

    @classmethod
    def from_string(cls, text: str) -> "SetPartition":
        """Parse the compact form ``"13|24"`` (single-digit elements)."""
        blocks = [tuple(int(c) for c in part) for part in text.strip("{}").split("|")]
        return cls(sum(len(b) for b in blocks), tuple(blocks))

    def to_json(self) -> dict:
        return {"n": self.n, "blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, obj: dict) -> "SetPartition":
        return cls(obj["n"], tuple(tuple(b) for b in obj["blocks"]))


@dataclass(frozen=True)
class OrderedPartition:
    """A set partition plus a total order on its blocks.

    ``order[k]`` is the index (into ``partition.blocks``) of the k-th block
    in the sequence.
    """

    partition: SetPartition
    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.partition))):
            raise ValueError(f"order {self.order} is not a permutation of the blocks")

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def sequence(self) -> tuple[Block, ...]:
        return tuple(self.partition.blocks[i] for i in self.order)

    @classmethod
    def from_sequence(cls, n: int, seq: Sequence[Block]) -> "OrderedPartition":
        p = SetPartition(n, tuple(seq))
        idx = {b: i for i, b in enumerate(p.blocks)}
        return cls(p, tuple(idx[tuple(sorted(b))] for b in seq))

    def __str__(self) -> str:
        return "(" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.sequence) + ")"

    def to_json(self) -> dict:
        d = self.partition.to_json()
        d["order"] = list(self.order)
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "OrderedPartition":
        return cls(SetPartition.from_json(obj), tuple(obj["order"]))


# ---------------------------------------------------------------------------
# enumeration


def _all_partitions(n: int) -> Iterator[tuple[Block, ...]]:
    # restricted growth strings: a[0]=0, a[i] <= max(a[:i]) + 1
    a = [0] * n

    def rec(i: int, m: int):
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(m + 1)]
            for pos, lab in enumerate(a):
                blocks[lab].append(pos + 1)
            yield tuple(tuple(b) for b in blocks)
            return
        for lab in range(m + 2):
            a[i] = lab
            yield from rec(i + 1, max(m, lab))

    a[0] = 0
    yield from rec(1, 0)


def _nc_partitions(elems: tuple[int, ...]) -> Iterator[tuple[Block, ...]]:
    # block of the first element, then independent NC fillings of each gap
    if not elems:
        yield ()
        return
    first, rest = elems[0], elems[1:]
    m = len(rest)
    for mask in range(1 << m):
        chosen = [rest[i] for i in range(m) if mask >> i & 1]
        block = (first,) + tuple(chosen)
        gaps, prev = [], 0
        for c in chosen:
            j = rest.index(c)
            gaps.append(rest[prev:j])
            prev = j + 1
        gaps.append(rest[prev:])
        yield from _combine(block, [g for g in gaps if g])


def _combine(block, gaps):
    if not gaps:
        yield (block,)
        return
    for head in _nc_partitions(gaps[0]):
        for tail in _combine(block, gaps[1:]):
            yield head + tail


def _interval_partitions(n: int) -> Iterator[tuple[Block, ...]]:
    for mask in range(1 << (n - 1)):
        blocks, start = [], 1
        for i in range(1, n):
            if mask >> (i - 1) & 1:
                blocks.append(tuple(range(start, i + 1)))
                start = i + 1
        blocks.append(tuple(range(start, n + 1)))
        yield tuple(blocks)


@lru_cache(maxsize=None)
def _enumerate(n: int, kind: str) -> tuple[SetPartition, ...]:
    if kind == "all":
        gen = _all_partitions(n)
    elif kind == "noncrossing":
        gen = _nc_partitions(tuple(range(1, n + 1)))
    elif kind == "interval":
        gen = _interval_partitions(n)
    else:
        raise ValueError(f"unknown partition kind {kind!r}; expected one of {KINDS}")
    parts = [SetPartition(n, b) for b in gen]
    parts.sort(key=lambda p: (len(p), p.blocks))
    return tuple(parts)


def enumerate_partitions(n: int, kind: str = "all", limit: int | None = None) -> list[SetPartition]:
    """All partitions of {1..n} of the given kind, sorted by (#blocks, blocks)."""
    if kind not in KINDS:
        raise ValueError(f"unknown partition kind {kind!r}; expected one of {KINDS}")
    _check_n(n, limit)
    return list(_enumerate(n, kind))


# ---------------------------------------------------------------------------
# predicates


def is_crossing(p: SetPartition) -> bool:
    """True iff a < b < c < d exist with a, c in one block and b, d in another."""
    owner = {x: i for i, b in enumerate(p.blocks) for x in b}
    # a crossing exists iff some pair of blocks interleaves; check adjacent
    # element pairs of each block against the others' spans
    for i, v in enumerate(p.blocks):
        for a, c in zip(v, v[1:]):
            inside = {owner[x] for x in range(a + 1, c)}
            for j in inside:
                w = p.blocks[j]
                if w[0] < a or w[-1] > c:
                    return True
    return False


def is_interval(p: SetPartition) -> bool:
    return all(b[-1] - b[0] + 1 == len(b) for b in p.blocks)


def is_interval_block(block: Sequence[int]) -> bool:
    b = sorted(block)
    return bool(b) and b[-1] - b[0] + 1 == len(b) and len(set(b)) == len(b)


def nesting_order(p: SetPartition) -> set[tuple[Block, Block]]:
    """Pairs ``(V, W)`` with V strictly inside W: i, j in W with i < k < j for every k in V."""
    if is_crossing(p):
        raise ValueError(f"nesting order is defined only for non-crossing partitions, got {p}")
    out = set()
    for v in p.blocks:
        for w in p.blocks:
            if v is w:
                continue
            if any(i < v[0] for i in w) and any(j > v[-1] for j in w):
                out.add((v, w))
    return out


def linear_extensions(p: SetPartition) -> list[tuple[int, ...]]:
    """Block orderings (as index tuples) in which inner blocks come later.

    Backtracking in lexicographic order of block indices.
    """
    k = len(p)
    idx = {b: i for i, b in enumerate(p.blocks)}
    # must_precede[v] = blocks that have to be placed before v (its outer blocks)
    must_precede = [0] * k
    for v, w in nesting_order(p):
        must_precede[idx[v]] |= 1 << idx[w]
    out: list[tuple[int, ...]] = []
    seq: list[int] = []

    def rec(placed: int):
        if len(seq) == k:
            out.append(tuple(seq))
            return
        for i in range(k):
            if not placed >> i & 1 and must_precede[i] & placed == must_precede[i]:
                seq.append(i)
                rec(placed | 1 << i)
                seq.pop()

    rec(0)
    return out


@lru_cache(maxsize=None)
def count_linear_extensions(p: SetPartition) -> int:
    k = len(p)
    idx = {b: i for i, b in enumerate(p.blocks)}
    must_precede = [0] * k
    for v, w in nesting_order(p):
        must_precede[idx[v]] |= 1 << idx[w]

    @lru_cache(maxsize=None)
    def rec(placed: int) -> int:
        if placed == (1 << k) - 1:
            return 1
        return sum(
            rec(placed | 1 << i)
            for i in range(k)
            if not placed >> i & 1 and must_precede[i] & placed == must_precede[i]
        )

    return rec(0)


def enumerate_monotone_partitions(n: int, limit: int | None = None) -> list[OrderedPartition]:
    """Non-crossing partitions with every block ordering that puts inner blocks later."""
    return [
        OrderedPartition(p, order)
        for p in enumerate_partitions(n, "noncrossing", limit)
        for order in linear_extensions(p)
    ]


def interval_blocks(n: int) -> list[Block]:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return [tuple(range(i, j + 1)) for i in range(1, n + 1) for j in range(i, n + 1)]


def complement_decomposition(n: int, block: Sequence[int]) -> list[Block]:
    """Maximal runs of {1..n} minus ``block``, left to right.

    Each run fills one gap k_{i-1}+1 < k_i of the sorted block padded with
    k_0 = 0 and k_{m+1} = n + 1.
    """
    ks = sorted(block)
    if len(set(ks)) != len(ks) or any(k < 1 or k > n for k in ks):
        raise ValueError(f"block {tuple(block)} is not a subset of 1..{n}")
    padded = [0] + ks + [n + 1]
    return [
        tuple(range(a + 1, b))
        for a, b in zip(padded, padded[1:])
        if a + 1 < b
    ]


def highest_coefficient(flavor: str, p: SetPartition) -> Fraction:
    """c(pi; pi) for the three universal products."""
    if flavor == "tensor":
        return Fraction(1)
    if flavor == "free":
        return Fraction(0 if is_crossing(p) else 1)
    if flavor == "boolean":
        return Fraction(1 if is_interval(p) else 0)
    if flavor == "monotone":
        raise ValueError("monotone independence is not a universal product; no highest coefficients")
    raise ValueError(f"unknown flavor {flavor!r}")


def monotone_weight(p: SetPartition) -> Fraction:
    """Total weight of pi in the monotone formula: (#admissible orderings) / |pi|!."""
    if is_crossing(p):
        return Fraction(0)
    return Fraction(count_linear_extensions(p), math.factorial(len(p)))
