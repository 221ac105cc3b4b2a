"""Partitions of a finite item universe.

Items are the indices ``0..m-1``.  Item sets are stored as integer bitmasks
(bit ``j`` set means item ``j`` is present); the public constructors accept
any iterable of indices and the ``side1``/``side2`` properties hand back
frozensets.

A partition here is an ordered pair of *disjoint* item sets that need not
exhaust the universe.  Canonical enumeration orders are base-3 (resp. base-2)
counting with item 0 as the most significant digit, i.e. the order of
``itertools.product`` with the last item varying fastest.  For general
partitions the digit of an item is 0 = unassigned, 1 = side1, 2 = side2; for
covering partitions it is 0 = side1, 1 = side2.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .budget import Budget, resolve
from .errors import OverlapError, RangeError, SchemaError, UniverseMismatch

Items = Iterable[int]


def items_of(mask: int) -> frozenset[int]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return frozenset(out)


def sorted_items(mask: int) -> list[int]:
    return sorted(items_of(mask))


@dataclass(frozen=True)
class Universe:
    m: int

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 1:
            raise RangeError(f"universe size must be an integer >= 1, got {self.m!r}")

    @property
    def full(self) -> int:
        return (1 << self.m) - 1

    def mask(self, items: Items) -> int:
        """Bitmask of ``items``; raises RangeError on any index outside ``0..m-1``."""
        mask = 0
        for j in items:
            if isinstance(j, bool) or not isinstance(j, int) or not 0 <= j < self.m:
                raise RangeError(f"item {j!r} outside universe of size {self.m}")
            mask |= 1 << j
        return mask

    def check_mask(self, mask: int) -> int:
        if mask < 0 or mask >> self.m:
            raise RangeError(f"mask {mask:#x} outside universe of size {self.m}")
        return mask


def as_universe(u: Universe | int) -> Universe:
    return u if isinstance(u, Universe) else Universe(u)


@dataclass(frozen=True)
class Partition:
    """An ordered pair of disjoint item sets, stored as bitmasks."""

    m: int
    bits1: int
    bits2: int

    def __post_init__(self):
        Universe(self.m)
        for b in (self.bits1, self.bits2):
            if b < 0 or b >> self.m:
                raise RangeError(f"side {b:#x} outside universe of size {self.m}")
        if self.bits1 & self.bits2:
            raise OverlapError(f"sides overlap on {sorted_items(self.bits1 & self.bits2)}")

    @property
    def side1(self) -> frozenset[int]:
        return items_of(self.bits1)

    @property
    def side2(self) -> frozenset[int]:
        return items_of(self.bits2)

    @property
    def support(self) -> int:
        return self.bits1 | self.bits2

    def __repr__(self) -> str:
        return f"Partition(m={self.m}, side1={sorted_items(self.bits1)}, side2={sorted_items(self.bits2)})"

    def to_json(self) -> dict:
        return {"side1": sorted_items(self.bits1), "side2": sorted_items(self.bits2)}


def make_partition(u: Universe | int, s1: Items, s2: Items) -> Partition:
    u = as_universe(u)
    return Partition(u.m, u.mask(s1), u.mask(s2))


def is_covering(p: Partition) -> bool:
    return (p.bits1 | p.bits2) == (1 << p.m) - 1


def covers(p: Partition, e: Items) -> bool:
    """True iff ``p`` restricted to ``e`` assigns every item of ``e``."""
    mask = Universe(p.m).mask(e)
    return ((p.bits1 | p.bits2) & mask) == mask


def project(p: Partition, e: Items) -> Partition:
    """``(side1 & e, side2 & e)``, kept in the original index space."""
    mask = Universe(p.m).mask(e)
    return Partition(p.m, p.bits1 & mask, p.bits2 & mask)


def distance(p: Partition, q: Partition) -> int:
    """Number of items the two partitions assign to opposite sides."""
    if p.m != q.m:
        raise UniverseMismatch(f"universe sizes differ: {p.m} vs {q.m}")
    return (p.bits1 & q.bits2).bit_count() + (q.bits1 & p.bits2).bit_count()


@dataclass(frozen=True)
class PartitionFamily:
    """An ordered, index-addressable collection of partitions of one universe.

    Duplicates are allowed; entry indices serve as tie-breaking keys.
    """

    universe: Universe
    entries: tuple[Partition, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        for p in self.entries:
            if not isinstance(p, Partition):
                raise SchemaError(f"family entries must be Partition, got {type(p).__name__}")
            if p.m != self.universe.m:
                raise UniverseMismatch(f"entry over m={p.m} in family over m={self.universe.m}")

    @classmethod
    def of(cls, m: Universe | int, pairs: Iterable[tuple[Items, Items] | Partition]) -> PartitionFamily:
        u = as_universe(m)
        entries = [p if isinstance(p, Partition) else make_partition(u, p[0], p[1]) for p in pairs]
        return cls(u, tuple(entries))

    @classmethod
    def from_masks(cls, m: Universe | int, pairs: Iterable[tuple[int, int]]) -> PartitionFamily:
        u = as_universe(m)
        return cls(u, tuple(Partition(u.m, a, b) for a, b in pairs))

    @property
    def m(self) -> int:
        return self.universe.m

    def masks(self) -> list[tuple[int, int]]:
        return [(p.bits1, p.bits2) for p in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Partition]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> Partition:
        return self.entries[i]

    def index(self, p: Partition) -> int:
        return self.entries.index(p)

    def to_json(self) -> dict:
        return {"m": self.m, "entries": [p.to_json() for p in self.entries]}


def project_family(r: PartitionFamily, e: Items) -> PartitionFamily:
    """Distinct projections of the entries on ``e``, in first-occurrence order."""
    mask = r.universe.mask(e)
    seen: dict[tuple[int, int], None] = {}
    for a, b in r.masks():
        seen.setdefault((a & mask, b & mask), None)
    return PartitionFamily.from_masks(r.universe, seen)


def dedup(r: PartitionFamily) -> PartitionFamily:
    return PartitionFamily(r.universe, tuple(dict.fromkeys(r.entries)))


@lru_cache(maxsize=32)
def _all_partition_masks(m: int) -> tuple[tuple[int, int], ...]:
    out = []
    for digits in itertools.product((0, 1, 2), repeat=m):
        a = b = 0
        for j, d in enumerate(digits):
            if d == 1:
                a |= 1 << j
            elif d == 2:
                b |= 1 << j
        out.append((a, b))
    return tuple(out)


def all_partition_masks(m: int, budget: Budget | None = None) -> tuple[tuple[int, int], ...]:
    """Every (side1, side2) mask pair over ``m`` items in canonical base-3 order."""
    resolve(budget).check_pow3(m, "all partitions")
    return _all_partition_masks(m)


def covering_masks(e_mask: int) -> Iterator[tuple[int, int]]:
    """Covering (side1, side2) mask pairs of the set ``e_mask`` in canonical base-2 order."""
    bits = [1 << j for j in sorted_items(e_mask)]
    for digits in itertools.product((0, 1), repeat=len(bits)):
        a = b = 0
        for bit, d in zip(bits, digits):
            if d:
                b |= bit
            else:
                a |= bit
        yield a, b


def enumerate_all_partitions(u: Universe | int, budget: Budget | None = None) -> Iterator[Partition]:
    u = as_universe(u)
    masks = all_partition_masks(u.m, budget)
    return (Partition(u.m, a, b) for a, b in masks)


def enumerate_covering_partitions(
    u: Universe | int, e: Items | None = None, budget: Budget | None = None
) -> Iterator[Partition]:
    """Covering partitions of ``e`` (default: the whole universe), 2^|e| of them."""
    u = as_universe(u)
    mask = u.full if e is None else u.mask(e)
    resolve(budget).check_pow2(mask.bit_count(), "covering partitions")
    return (Partition(u.m, a, b) for a, b in covering_masks(mask))


def covering_family(u: Universe | int) -> PartitionFamily:
    """C(U): all covering partitions of the universe."""
    u = as_universe(u)
    return PartitionFamily(u, tuple(enumerate_covering_partitions(u)))


def bundle_family(u: Universe | int) -> PartitionFamily:
    """The two-entry range that gives everything to one bidder."""
    u = as_universe(u)
    return PartitionFamily.from_masks(u, [(u.full, 0), (0, u.full)])


# JSON -------------------------------------------------------------------------


def _int_list(obj, key: str) -> list[int]:
    value = obj.get(key) if isinstance(obj, dict) else None
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise SchemaError(f"{key!r} must be a list of integers")
    return value


def partition_from_json(obj, u: Universe | int) -> Partition:
    if not isinstance(obj, dict) or set(obj) != {"side1", "side2"}:
        raise SchemaError('partition must be an object with exactly "side1" and "side2"')
    return make_partition(u, _int_list(obj, "side1"), _int_list(obj, "side2"))


def family_from_json(obj) -> PartitionFamily:
    if not isinstance(obj, dict) or set(obj) != {"m", "entries"}:
        raise SchemaError('family must be an object with exactly "m" and "entries"')
    m = obj["m"]
    if isinstance(m, bool) or not isinstance(m, int):
        raise SchemaError('"m" must be an integer')
    if not isinstance(obj["entries"], list):
        raise SchemaError('"entries" must be a list')
    u = Universe(m)
    return PartitionFamily(u, tuple(partition_from_json(e, u) for e in obj["entries"]))


def load_family(path) -> PartitionFamily:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: {exc}") from None
    return family_from_json(obj)
