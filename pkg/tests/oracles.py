"""Naive reference evaluators written straight from the definitions.

Partitions are plain ``(frozenset, frozenset)`` pairs and every quantity is
computed by enumeration with itertools; nothing here uses bitmasks or the
package's fast paths.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

Pair = tuple[frozenset, frozenset]


def as_pairs(family) -> list[Pair]:
    return [(frozenset(p.side1), frozenset(p.side2)) for p in family]


def subsets(items):
    items = sorted(items)
    for k in range(len(items) + 1):
        for c in itertools.combinations(items, k):
            yield frozenset(c)


def covering_partitions(e) -> list[Pair]:
    e = sorted(e)
    out = []
    for side in itertools.product((1, 2), repeat=len(e)):
        out.append((frozenset(x for x, s in zip(e, side) if s == 1), frozenset(x for x, s in zip(e, side) if s == 2)))
    return out


def all_partitions(m) -> list[Pair]:
    out = []
    for side in itertools.product((0, 1, 2), repeat=m):
        out.append((frozenset(j for j in range(m) if side[j] == 1), frozenset(j for j in range(m) if side[j] == 2)))
    return out


def projection(pairs: list[Pair], e) -> set[Pair]:
    e = frozenset(e)
    return {(a & e, b & e) for a, b in pairs}


def shattered(pairs: list[Pair], e) -> bool:
    proj = projection(pairs, e)
    return all(c in proj for c in covering_partitions(e))


def vc(pairs: list[Pair], m: int) -> int:
    return max((len(e) for e in subsets(range(m)) if shattered(pairs, e)), default=-1)


def count_shattered(pairs: list[Pair], m: int) -> int:
    return sum(1 for e in subsets(range(m)) if shattered(pairs, e))


def alpha(pairs: list[Pair], m: int) -> Fraction:
    worst = None
    for s1, s2 in all_partitions(m):
        size = len(s1) + len(s2)
        if size == 0:
            continue
        best = max(Fraction(len(s1 & t1) + len(s2 & t2), size) for t1, t2 in pairs)
        if worst is None or best < worst:
            worst = best
    return worst


def classical_vc(sets: list[frozenset], m: int) -> int:
    def shat(e):
        return {z & e for z in sets} == set(subsets(e))

    return max((len(e) for e in subsets(range(m)) if shat(e)), default=-1)


def dist(p: Pair, q: Pair) -> int:
    return len(p[0] & q[1]) + len(q[0] & p[1])


def opt_welfare(v1, v2, m: int) -> int:
    """Best welfare over every general partition (not just covering ones)."""
    return max(v1(a) + v2(b) for a, b in all_partitions(m))
