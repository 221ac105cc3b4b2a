"""Shattering, VC dimension and approximation quality of partition families.

Everything here is exact.  A set ``E`` is shattered by a family ``R`` when
every covering partition of ``E`` appears among the projections ``R|E``
(partitions of ``E`` that leave items unassigned are not required).
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .budget import Budget, resolve
from .errors import (
    EmptyFamily,
    InvalidPairing,
    NotCoveringError,
    RangeError,
    TooFewEntries,
    VerificationFailure,
)
from .partitions import (
    Items,
    Partition,
    PartitionFamily,
    Universe,
    all_partition_masks,
    as_universe,
    covering_masks,
    is_covering,
    sorted_items,
)


def fraction_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


# Reports ---------------------------------------------------------------------


@dataclass(frozen=True)
class ShatterReport:
    target: frozenset[int]
    shattered: bool
    witnesses: Mapping[Partition, int] | None = None

    def to_json(self) -> dict:
        out = {"target": sorted(self.target), "shattered": self.shattered}
        if self.witnesses is not None:
            out["witnesses"] = [{"partition": p.to_json(), "index": i} for p, i in self.witnesses.items()]
        return out


@dataclass(frozen=True)
class VcReport:
    dimension: int
    witness_set: frozenset[int]

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "witness_set": sorted(self.witness_set)}


@dataclass(frozen=True)
class AlphaReport:
    """Worst-case side-respecting overlap ratio of a family.

    In ``"sampled"`` mode ``alpha`` is the minimum over the sampled
    partitions only, hence an upper bound on the exact value.
    """

    alpha: Fraction
    worst_s: Partition
    best_t_index: int
    mode: str
    samples: int | None = None

    def to_json(self) -> dict:
        return {
            "alpha": fraction_json(self.alpha),
            "worst_s": self.worst_s.to_json(),
            "best_t_index": self.best_t_index,
            "mode": self.mode,
            "samples": self.samples,
        }


@dataclass(frozen=True)
class FarFamilyReport:
    epsilon: Fraction
    k: int
    min_distance: int

    def to_json(self) -> dict:
        return {"epsilon": fraction_json(self.epsilon), "k": self.k, "min_distance": self.min_distance}


@dataclass(frozen=True)
class SplitWitness:
    element: int
    pair_count: int
    pairing: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {"element": self.element, "pair_count": self.pair_count, "pairing": [list(p) for p in self.pairing]}


@dataclass(frozen=True)
class SetFamily:
    """A classical family of subsets, entries stored as bitmasks."""

    universe: Universe
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        for z in self.entries:
            self.universe.check_mask(z)

    @classmethod
    def of(cls, m: Universe | int, sets: Iterable[Items]) -> SetFamily:
        u = as_universe(m)
        return cls(u, tuple(u.mask(s) for s in sets))

    @property
    def m(self) -> int:
        return self.universe.m

    def __len__(self) -> int:
        return len(self.entries)

    def distinct(self) -> set[int]:
        return set(self.entries)


def side1_sets(r: PartitionFamily) -> SetFamily:
    """The sets bidder 1 receives across the family (R1), with repeats."""
    return SetFamily(r.universe, tuple(p.bits1 for p in r))


# Shattering ------------------------------------------------------------------


def _shattered(masks: Sequence[tuple[int, int]], e: int) -> bool:
    need = 1 << e.bit_count()
    seen = set()
    for a, b in masks:
        pa = a & e
        if (pa | (b & e)) == e:
            seen.add(pa)
            if len(seen) == need:
                return True
    return False


def is_shattered(r: PartitionFamily, e: Items, budget: Budget | None = None) -> ShatterReport:
    mask = r.universe.mask(e)
    resolve(budget).check_pow2(mask.bit_count(), "shattering check")
    target = frozenset(sorted_items(mask))
    if not _shattered(r.masks(), mask):
        return ShatterReport(target, False)
    first: dict[int, int] = {}
    for i, (a, b) in enumerate(r.masks()):
        if ((a | b) & mask) == mask:
            first.setdefault(a & mask, i)
    witnesses = {Partition(r.m, a, b): first[a] for a, b in covering_masks(mask)}
    return ShatterReport(target, True, witnesses)


def _shattered_levels(m: int, test) -> list[list[int]]:
    """Level-wise enumeration of a downward-closed collection of subsets.

    ``test(mask)`` decides membership; only candidates whose every
    one-smaller subset is a member get tested.
    """
    if not test(0):
        return []
    levels = [[0]]
    while True:
        prev = set(levels[-1])
        nxt = []
        for e in levels[-1]:
            top = e.bit_length()
            for x in range(top, m):
                cand = e | (1 << x)
                rest = cand
                ok = True
                while rest:
                    low = rest & -rest
                    rest ^= low
                    if (cand ^ low) not in prev:
                        ok = False
                        break
                if ok and test(cand):
                    nxt.append(cand)
        if not nxt:
            return levels
        levels.append(nxt)


def _canonical_first(masks: Iterable[int]) -> int:
    return min(masks, key=sorted_items)


def vc_dimension(r: PartitionFamily, budget: Budget | None = None) -> VcReport:
    """Largest shattered set, found level by level (sizes ascending)."""
    if len(r) == 0:
        raise EmptyFamily("VC dimension of an empty family is undefined")
    resolve(budget).check_pow2(r.m, "VC dimension")
    masks = r.masks()
    levels = _shattered_levels(r.m, lambda e: _shattered(masks, e))
    best = _canonical_first(levels[-1])
    return VcReport(len(levels) - 1, frozenset(sorted_items(best)))


def count_shattered_sets(r: PartitionFamily, budget: Budget | None = None) -> int:
    """Number of subsets of the universe shattered by ``r`` (0 for an empty family)."""
    resolve(budget).check_pow2(r.m, "shattered-set count")
    masks = r.masks()
    return sum(len(level) for level in _shattered_levels(r.m, lambda e: _shattered(masks, e)))


def shattered_sets(r: PartitionFamily, budget: Budget | None = None) -> list[frozenset[int]]:
    resolve(budget).check_pow2(r.m, "shattered sets")
    masks = r.masks()
    levels = _shattered_levels(r.m, lambda e: _shattered(masks, e))
    return [frozenset(sorted_items(e)) for level in levels for e in level]


# Classical (set-family) VC -----------------------------------------------------


def _classically_shattered(entries: Iterable[int], e: int) -> bool:
    need = 1 << e.bit_count()
    traces = set()
    for z in entries:
        traces.add(z & e)
        if len(traces) == need:
            return True
    return False


def classical_is_shattered(z: SetFamily, e: Items) -> bool:
    return _classically_shattered(z.distinct(), z.universe.mask(e))


def classical_vc(z: SetFamily, budget: Budget | None = None) -> VcReport:
    if len(z) == 0:
        raise EmptyFamily("VC dimension of an empty set family is undefined")
    resolve(budget).check_pow2(z.m, "classical VC dimension")
    entries = z.distinct()
    levels = _shattered_levels(z.m, lambda e: _classically_shattered(entries, e))
    best = _canonical_first(levels[-1])
    return VcReport(len(levels) - 1, frozenset(sorted_items(best)))


def sauer_shelah_bound(m: int, d: int) -> int:
    return sum(math.comb(m, i) for i in range(d + 1))


def sauer_shelah_check(z: SetFamily, d: int, budget: Budget | None = None) -> bool:
    """Whether ``|z| > sum_{i<=d} C(m, i)`` implies classical VC >= d+1 on this instance."""
    if len(z.distinct()) <= sauer_shelah_bound(z.m, d):
        return True
    return classical_vc(z, budget).dimension >= d + 1


def covering_vc_lower_bound(r: PartitionFamily, budget: Budget | None = None) -> tuple[float, int]:
    """``(log|R1| / log m, VC(R))`` for a family of covering partitions.

    Only meaningful for ``m >= 2``; the log ratio carries no exactness claim.
    """
    for i, p in enumerate(r):
        if not is_covering(p):
            raise NotCoveringError(f"entry {i} does not cover the universe")
    if r.m < 2:
        raise RangeError("log ratio needs a universe of at least 2 items")
    r1 = len({p.bits1 for p in r})
    return math.log(r1) / math.log(r.m), vc_dimension(r, budget).dimension


# Approximation quality ------------------------------------------------------------


def _best_overlap(masks: Sequence[tuple[int, int]], s1: int, s2: int) -> tuple[int, int]:
    best, best_i = -1, -1
    for i, (t1, t2) in enumerate(masks):
        score = (s1 & t1).bit_count() + (s2 & t2).bit_count()
        if score > best:
            best, best_i = score, i
    return best, best_i


def alpha_of(
    r: PartitionFamily,
    mode: str = "exact",
    sample_count: int = 1000,
    seed: int | None = None,
    budget: Budget | None = None,
) -> AlphaReport:
    """Largest ``alpha`` for which ``r`` is alpha-approximate.

    Minimises, over every partition ``S`` other than ``(∅, ∅)``, the best
    ratio ``(|S1∩T1| + |S2∩T2|) / (|S1| + |S2|)`` achieved by an entry ``T``.
    Ties go to the first ``S`` in canonical order and the lowest entry index.
    """
    if len(r) == 0:
        raise EmptyFamily("alpha of an empty family is undefined")
    masks = r.masks()
    if mode == "exact":
        candidates: Iterable[tuple[int, int]] = all_partition_masks(r.m, budget)[1:]
        samples = None
    elif mode == "sampled":
        if seed is None:
            raise ValueError("sampled mode requires a seed")
        candidates = sample_nonempty_partitions(r.m, sample_count, random.Random(seed))
        samples = sample_count
    else:
        raise ValueError(f"unknown mode {mode!r}")

    worst_num, worst_den = 2, 1
    worst = None
    for s1, s2 in candidates:
        size = (s1 | s2).bit_count()
        best, best_i = _best_overlap(masks, s1, s2)
        if best * worst_den < worst_num * size:
            worst_num, worst_den, worst = best, size, (s1, s2, best_i)
    assert worst is not None
    s1, s2, best_i = worst
    return AlphaReport(Fraction(worst_num, worst_den), Partition(r.m, s1, s2), best_i, mode, samples)


def sample_nonempty_partitions(m: int, count: int, rng: random.Random) -> list[tuple[int, int]]:
    """Uniform draws from P(U) minus (∅, ∅), by rejection."""
    out = []
    while len(out) < count:
        a = b = 0
        for j in range(m):
            d = rng.randrange(3)
            if d == 1:
                a |= 1 << j
            elif d == 2:
                b |= 1 << j
        if a | b:
            out.append((a, b))
    return out


# Distances ---------------------------------------------------------------------


def _dist(a: tuple[int, int], b: tuple[int, int]) -> int:
    return (a[0] & b[1]).bit_count() + (b[0] & a[1]).bit_count()


def min_pairwise_distance(r: PartitionFamily) -> FarFamilyReport:
    if len(r) < 2:
        raise TooFewEntries("need at least two entries")
    masks = r.masks()
    best = r.m + 1
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            d = _dist(masks[i], masks[j])
            if d < best:
                best = d
    return FarFamilyReport(Fraction(best, r.m), len(r), best)


def extract_far_subfamily(r: PartitionFamily, d: int) -> PartitionFamily:
    """Greedy pass in index order keeping entries at distance >= ``d`` from all kept ones."""
    if d < 1:
        raise ValueError("d must be >= 1")
    kept: list[tuple[int, int]] = []
    for mk in r.masks():
        if all(_dist(mk, other) >= d for other in kept):
            kept.append(mk)
    out = PartitionFamily.from_masks(r.universe, kept)
    if len(out) >= 2 and min_pairwise_distance(out).min_distance < d:
        raise VerificationFailure("greedy far subfamily is not pairwise far", {"d": d})
    return out


# Splitting-element machinery ----------------------------------------------------------


def _validate_pairing(r: PartitionFamily, pairing: Sequence[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    pairs = tuple((int(i), int(j)) for i, j in pairing)
    if len(pairs) != len(r) // 2:
        raise InvalidPairing(f"expected {len(r) // 2} pairs, got {len(pairs)}")
    used: set[int] = set()
    masks = r.masks()
    for i, j in pairs:
        for x in (i, j):
            if not 0 <= x < len(r):
                raise InvalidPairing(f"index {x} out of range")
            if x in used:
                raise InvalidPairing(f"index {x} used twice")
            used.add(x)
        if _dist(masks[i], masks[j]) < 1:
            raise InvalidPairing(f"pair ({i}, {j}) is at distance 0")
    return pairs


def consecutive_pairing(r: PartitionFamily) -> list[tuple[int, int]]:
    return [(2 * i, 2 * i + 1) for i in range(len(r) // 2)]


def find_splitting_element(
    r: PartitionFamily,
    pairing: Sequence[tuple[int, int]],
    epsilon: Fraction | None = None,
) -> SplitWitness:
    """Item that separates the most pairs (lowest index on ties).

    The crossed sets of a pair are disjoint, so the per-item counts sum to the
    total pair distance; pigeonhole then gives count >= ceil(total / m), which
    is asserted.  With ``epsilon`` the pairs must be at least ``epsilon*m``
    apart and count >= ceil(floor(k/2) * epsilon) is asserted as well.
    """
    pairs = _validate_pairing(r, pairing)
    masks = r.masks()
    m = r.m
    counts = Counter()
    total = 0
    for i, j in pairs:
        (a1, a2), (b1, b2) = masks[i], masks[j]
        crossed = (a1 & b2) | (b1 & a2)
        total += crossed.bit_count()
        for x in sorted_items(crossed):
            counts[x] += 1
    element = min(range(m), key=lambda x: (-counts[x], x))
    count = counts[element]
    if count * m < total:
        raise VerificationFailure("pigeonhole bound violated", {"count": count, "total": total})
    if epsilon is not None:
        epsilon = Fraction(epsilon)
        for i, j in pairs:
            if _dist(masks[i], masks[j]) < epsilon * m:
                raise InvalidPairing(f"pair ({i}, {j}) is closer than epsilon*m")
        if count < math.ceil(len(pairs) * epsilon):
            raise VerificationFailure("splitting-element bound violated", {"count": count})
    return SplitWitness(element, count, pairs)


def split_family(r: PartitionFamily, e: int) -> tuple[PartitionFamily, PartitionFamily]:
    """Entries holding ``e`` on side 1 (resp. side 2), with ``e`` removed.

    The outputs keep the original index space; ``e`` simply appears in no
    entry, so no set containing it can be shattered and shattered-set counts
    coincide with those over ``U \\ {e}``.
    """
    if isinstance(e, bool) or not isinstance(e, int) or not 0 <= e < r.m:
        raise RangeError(f"item {e!r} outside universe of size {r.m}")
    bit = 1 << e
    first = [(a ^ bit, b) for a, b in r.masks() if a & bit]
    second = [(a, b ^ bit) for a, b in r.masks() if b & bit]
    return PartitionFamily.from_masks(r.universe, first), PartitionFamily.from_masks(r.universe, second)
