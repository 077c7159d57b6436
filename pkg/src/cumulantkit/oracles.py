"""Brute-force enumerations used to cross-check the partition module.

Deliberately naive: they share no code with :mod:`cumulantkit.partitions`
beyond the value types.
"""

from __future__ import annotations

import itertools


def brute_set_partitions(n: int) -> set[frozenset]:
    """All partitions of {1..n} as frozensets of frozensets, by element insertion."""
    parts: list[list[set]] = [[]]
    for x in range(1, n + 1):
        nxt = []
        for p in parts:
            for i in range(len(p)):
                q = [set(b) for b in p]
                q[i].add(x)
                nxt.append(q)
            nxt.append([set(b) for b in p] + [{x}])
        parts = nxt
    return {frozenset(frozenset(b) for b in p) for p in parts}


def brute_crossing(blocks) -> bool:
    blocks = [sorted(b) for b in blocks]
    for v, w in itertools.permutations(blocks, 2):
        for a, c in itertools.combinations(v, 2):
            for b, d in itertools.combinations(w, 2):
                if a < b < c < d:
                    return True
    return False


def brute_interval(blocks) -> bool:
    return all(max(b) - min(b) + 1 == len(b) for b in blocks)


def brute_inside(v, w) -> bool:
    """V lies inside W: some i, j in W with i < k < j for every k in V."""
    return any(i < min(v) for i in w) and any(j > max(v) for j in w)


def brute_monotone_partitions(n: int) -> set[tuple]:
    """Ordered partitions (as tuples of sorted tuples) that are non-crossing with inner blocks later."""
    out = set()
    for p in brute_set_partitions(n):
        if brute_crossing(p):
            continue
        for seq in itertools.permutations(sorted(tuple(sorted(b)) for b in p)):
            ok = all(
                not brute_inside(seq[i], seq[j])
                for i in range(len(seq))
                for j in range(i + 1, len(seq))
            )
            if ok:
                out.add(seq)
    return out


def canonical(blocks) -> frozenset:
    return frozenset(frozenset(b) for b in blocks)
