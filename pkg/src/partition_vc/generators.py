"""Seeded random families, planted ranges and small instances."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from .partitions import PartitionFamily, Universe, as_universe, covering_masks
from .reductions import BlockDesign
from .valuations import CappedAdditiveValuation, ZeroOneAdditiveValuation
from .mechanisms import AuctionInstance


def random_partition_masks(m: int, rng: random.Random, covering: bool = False) -> tuple[int, int]:
    if covering:
        a = rng.getrandbits(m)
        return a, ((1 << m) - 1) ^ a
    a = b = 0
    for j in range(m):
        d = rng.randrange(3)
        if d == 1:
            a |= 1 << j
        elif d == 2:
            b |= 1 << j
    return a, b


def random_family(m: int, k: int, rng: random.Random, covering: bool = False) -> PartitionFamily:
    return PartitionFamily.from_masks(m, [random_partition_masks(m, rng, covering) for _ in range(k)])


def _fill_outside(a: int, b: int, outside: int, rng: random.Random, covering: bool) -> tuple[int, int]:
    for j in range(outside.bit_length()):
        if not outside >> j & 1:
            continue
        d = rng.randrange(2) + 1 if covering else rng.randrange(3)
        if d == 1:
            a |= 1 << j
        elif d == 2:
            b |= 1 << j
    return a, b


def planted_shattered_range(m: int, e_mask: int, noise: int, rng: random.Random) -> PartitionFamily:
    """C(E) with arbitrary extensions outside E, plus ``noise`` random partitions, shuffled."""
    u = Universe(m)
    outside = u.full ^ e_mask
    entries = [_fill_outside(a, b, outside, rng, False) for a, b in covering_masks(e_mask)]
    entries += [random_partition_masks(m, rng) for _ in range(noise)]
    rng.shuffle(entries)
    return PartitionFamily.from_masks(u, entries)


def planted_block_range(design: BlockDesign, noise: int, rng: random.Random) -> PartitionFamily:
    """Covering range whose side-1 sets realise every 0/1 pattern on the blocks.

    Pattern ``f`` gets a partition holding one item of ``Q_j`` on side 1 iff
    ``f(j) = 1``; the other items of the block go to side 2 and items outside
    the blocks are placed at random.
    """
    u = design.universe
    in_blocks = 0
    for b in design.blocks:
        in_blocks |= b
    outside = u.full ^ in_blocks
    entries = []
    for f in itertools.product((0, 1), repeat=design.q):
        a = 0
        for bit, b in zip(f, design.blocks):
            if bit:
                a |= b & -b
        a, _ = _fill_outside(a, 0, outside, rng, True)
        entries.append((a, u.full ^ a))
    entries += [random_partition_masks(u.m, rng, covering=True) for _ in range(noise)]
    rng.shuffle(entries)
    return PartitionFamily.from_masks(u, entries)


def random_capped_additive(m: int, rng: random.Random, max_item: int = 5, max_cap: int = 10) -> CappedAdditiveValuation:
    return CappedAdditiveValuation.of([rng.randint(0, max_item) for _ in range(m)], rng.randint(0, max_cap))


def random_capped_instance(m: int, rng: random.Random, max_item: int = 5, max_cap: int = 10) -> AuctionInstance:
    return AuctionInstance(
        Universe(m), random_capped_additive(m, rng, max_item, max_cap), random_capped_additive(m, rng, max_item, max_cap)
    )


def zero_one_instance(m: int, a: int, b: int) -> AuctionInstance:
    return AuctionInstance(Universe(m), ZeroOneAdditiveValuation(m, a), ZeroOneAdditiveValuation(m, b))


def far_family(
    m: int, k: int, epsilon: Fraction, rng: random.Random, max_attempts: int = 20000
) -> PartitionFamily:
    """Up to ``k`` partitions pairwise at least ``epsilon * m`` apart, by rejection.

    Draws alternate between covering and general partitions.
    """
    need = math.ceil(Fraction(epsilon) * m)
    kept: list[tuple[int, int]] = []
    for attempt in range(max_attempts):
        if len(kept) >= k:
            break
        cand = random_partition_masks(m, rng, covering=attempt % 2 == 0)
        if all(
            (cand[0] & o[1]).bit_count() + (o[0] & cand[1]).bit_count() >= need for o in kept
        ):
            kept.append(cand)
    return PartitionFamily.from_masks(as_universe(m), kept)
