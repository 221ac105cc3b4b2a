"""Embedding a small auction into a big one whose range shatters the image.

Two lifts are provided: item-to-item (``lift_valuation``, used with a set
shattered by the range) and item-to-block (``lift_valuation_blocks``, used with
a random block design that the range's bidder-1 sets block-shatter).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .budget import Budget, resolve
from .errors import (
    InfeasibleDesign,
    InvalidDesign,
    InvalidEmbedding,
    NotRegular,
    NotShattered,
    VerificationFailure,
)
from .mechanisms import AuctionInstance, MirMechanism, Outcome, mir_allocate, opt_allocation
from .partitions import Items, Partition, PartitionFamily, Universe, as_universe, sorted_items
from .valuations import (
    AdditiveValuation,
    CappedAdditiveValuation,
    DoubleCappedAdditiveValuation,
    TableValuation,
    Valuation,
    ZeroOneAdditiveValuation,
)
from .vc import SetFamily, _shattered, side1_sets


def _embedding(embed: Sequence[int] | Mapping[int, int], d: int, m: int) -> tuple[int, ...]:
    if isinstance(embed, Mapping):
        if set(embed) != set(range(d)):
            raise InvalidEmbedding(f"embedding must map exactly the items 0..{d - 1}")
        image = tuple(embed[i] for i in range(d))
    else:
        image = tuple(embed)
        if len(image) != d:
            raise InvalidEmbedding(f"embedding has {len(image)} targets for {d} items")
    for x in image:
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < m:
            raise InvalidEmbedding(f"target {x!r} outside universe of size {m}")
    if len(set(image)) != d:
        raise InvalidEmbedding("embedding is not injective")
    return image


def _spread(values: Sequence[int], image: Sequence[int], m: int) -> tuple[int, ...]:
    out = [0] * m
    for i, x in enumerate(image):
        out[x] = values[i]
    return tuple(out)


def _map_mask(mask: int, image: Sequence[int]) -> int:
    out = 0
    for i in sorted_items(mask):
        out |= 1 << image[i]
    return out


def preimage_mask(mask: int, image: Sequence[int]) -> int:
    out = 0
    for i, x in enumerate(image):
        if mask >> x & 1:
            out |= 1 << i
    return out


def lift_valuation(small: Valuation, embed: Sequence[int] | Mapping[int, int], m: int) -> Valuation:
    """Valuation over ``m`` items that sees only the embedded copy of ``small``.

    Items outside the image are worth nothing.  Parametric classes keep their
    class (a capped-additive input lifts to capped-additive with zeros off the
    image); tables lift to tables.
    """
    image = _embedding(embed, small.m, m)
    if isinstance(small, AdditiveValuation):
        return AdditiveValuation(_spread(small.per_item, image, m))
    if isinstance(small, CappedAdditiveValuation):
        return CappedAdditiveValuation(AdditiveValuation(_spread(small.per_item, image, m)), small.cap)
    if isinstance(small, ZeroOneAdditiveValuation):
        return ZeroOneAdditiveValuation(m, _map_mask(small.indicator, image))
    if isinstance(small, DoubleCappedAdditiveValuation):
        blocks = [_map_mask(b, image) for b in small.blocks]
        caps = list(small.block_caps)
        leftover = ((1 << m) - 1) ^ _map_mask((1 << small.m) - 1, image)
        if leftover:
            blocks.append(leftover)
            caps.append(0)
        return DoubleCappedAdditiveValuation(
            tuple(blocks), AdditiveValuation(_spread(small.base.per_item, image, m)), tuple(caps), small.global_cap
        )
    t = small.table()
    return TableValuation(m, tuple(t[preimage_mask(s, image)] for s in range(1 << m)))


@dataclass(frozen=True)
class ReductionReport:
    embedding: tuple[int, ...]
    outcome: Outcome
    projected: Partition
    projected_welfare: int
    opt_welfare: int

    @property
    def equal(self) -> bool:
        return self.projected_welfare == self.opt_welfare

    def to_json(self) -> dict:
        return {
            "embedding": list(self.embedding),
            "outcome": self.outcome.to_json(),
            "projected": self.projected.to_json(),
            "projected_welfare": self.projected_welfare,
            "opt_welfare": self.opt_welfare,
        }


def run_reduction(
    rng: PartitionFamily, e: Items, small_inst: AuctionInstance, budget: Budget | None = None
) -> ReductionReport:
    """Solve ``small_inst`` exactly with the MIR mechanism over ``rng``.

    Small item ``i`` is identified with the ``i``-th smallest item of ``e``.
    Because ``rng`` shatters ``e`` and the lifted valuations ignore items
    outside ``e``, the projected allocation must be optimal for the small
    instance; a mismatch raises :class:`VerificationFailure`.
    """
    mask = rng.universe.mask(e)
    image = tuple(sorted_items(mask))
    if len(image) != small_inst.m:
        raise InvalidEmbedding(f"|E| = {len(image)} but the small auction has {small_inst.m} items")
    resolve(budget).check_pow2(len(image), "reduction")
    if not _shattered(rng.masks(), mask):
        raise NotShattered(f"{list(image)} is not shattered by the range")
    big = AuctionInstance(
        rng.universe, lift_valuation(small_inst.v1, image, rng.m), lift_valuation(small_inst.v2, image, rng.m)
    )
    outcome = mir_allocate(MirMechanism(rng), big)
    a = outcome.allocation
    projected = Partition(small_inst.m, preimage_mask(a.bits1, image), preimage_mask(a.bits2, image))
    got = small_inst.v1.value_mask(projected.bits1) + small_inst.v2.value_mask(projected.bits2)
    _, opt = opt_allocation(small_inst, budget)
    report = ReductionReport(image, outcome, projected, got, opt)
    if not report.equal:
        raise VerificationFailure(
            f"projected welfare {got} != small optimum {opt}",
            {"range": rng.to_json(), "e": list(image), "instance": small_inst.to_json()},
        )
    return report


# Block designs ------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockDesign:
    universe: Universe
    blocks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "universe", as_universe(self.universe))
        seen = 0
        sizes = set()
        for b in self.blocks:
            self.universe.check_mask(b)
            if b & seen:
                raise InvalidDesign("blocks must be pairwise disjoint")
            seen |= b
            sizes.add(b.bit_count())
        if len(sizes) > 1:
            raise InvalidDesign("blocks must all have the same size")

    @classmethod
    def of(cls, m: Universe | int, blocks: Sequence[Items]) -> BlockDesign:
        u = as_universe(m)
        return cls(u, tuple(u.mask(b) for b in blocks))

    @property
    def q(self) -> int:
        return len(self.blocks)

    @property
    def block_size(self) -> int:
        return self.blocks[0].bit_count() if self.blocks else 0

    def to_json(self) -> dict:
        return {"m": self.universe.m, "blocks": [sorted_items(b) for b in self.blocks]}


def sample_blocks(u: Universe | int, q: int, l: int, rng: random.Random) -> BlockDesign:
    """``q`` uniformly random pairwise-disjoint blocks of ``l`` items each."""
    u = as_universe(u)
    if q < 0 or l < 1:
        raise InvalidDesign("need q >= 0 and l >= 1")
    if q * l > u.m:
        raise InfeasibleDesign(f"{q} blocks of size {l} do not fit in {u.m} items")
    picked = rng.sample(range(u.m), q * l)
    blocks = tuple(u.mask(picked[t * l : (t + 1) * l]) for t in range(q))
    return BlockDesign(u, blocks)


def is_block_shattered(
    z: SetFamily, design: BlockDesign, require_regular: bool = False, budget: Budget | None = None
) -> bool:
    """Whether every 0/1 pattern over the blocks is hit exactly by some member.

    A member ``Z'`` realises pattern ``f`` when ``|Z' ∩ Q_j| = f(j)`` for all j.
    """
    if z.m != design.universe.m:
        raise InvalidDesign("design and family live in different universes")
    if require_regular and len({s.bit_count() for s in z.entries}) > 1:
        raise NotRegular("family members differ in size")
    resolve(budget).check_pow2(design.q, "block patterns")
    need = 1 << design.q
    seen = set()
    for s in z.distinct():
        pattern = 0
        for j, b in enumerate(design.blocks):
            c = (s & b).bit_count()
            if c > 1:
                break
            pattern |= c << j
        else:
            seen.add(pattern)
            if len(seen) == need:
                return True
    return len(seen) == need


def lift_valuation_blocks(
    small: CappedAdditiveValuation | AdditiveValuation, design: BlockDesign
) -> DoubleCappedAdditiveValuation:
    """Double-capped valuation where small item ``j`` becomes block ``Q_j``.

    Every item of ``Q_j`` carries the small value ``a_j`` and the block cap is
    ``a_j`` too, so any nonempty part of the block is worth exactly ``a_j``.
    Leftover items form one zero-valued block.  The global cap is the small
    cap (or the total value for an uncapped input).
    """
    if small.m != design.q:
        raise InvalidDesign(f"design has {design.q} blocks for {small.m} small items")
    m = design.universe.m
    a = small.per_item
    per_item = [0] * m
    for j, b in enumerate(design.blocks):
        for x in sorted_items(b):
            per_item[x] = a[j]
    blocks = list(design.blocks)
    caps = list(a)
    leftover = design.universe.full
    for b in blocks:
        leftover ^= b
    if leftover:
        blocks.append(leftover)
        caps.append(0)
    cap = small.cap if isinstance(small, CappedAdditiveValuation) else sum(a)
    return DoubleCappedAdditiveValuation(tuple(blocks), AdditiveValuation(tuple(per_item)), tuple(caps), cap)


def decode_blocks(p: Partition, design: BlockDesign) -> Partition:
    """Small allocation: item j to bidder 1 iff bidder 1 holds part of ``Q_j``."""
    s1 = 0
    for j, b in enumerate(design.blocks):
        if p.bits1 & b:
            s1 |= 1 << j
    return Partition(design.q, s1, ((1 << design.q) - 1) ^ s1)


def run_block_reduction(
    rng: PartitionFamily, design: BlockDesign, small_inst: AuctionInstance, budget: Budget | None = None
) -> ReductionReport:
    """Allocate-all-items reduction through a block-shattered design.

    The range must consist of covering partitions whose bidder-1 sets
    block-shatter ``design``.  Only singleton blocks give an exact welfare
    correspondence (with larger blocks a witness holding one item of a block
    leaves the rest to bidder 2, so both bidders value the block), so
    ``design.block_size`` must be 1.
    """
    mech = MirMechanism(rng, allocate_all_items=True)
    if design.block_size != 1:
        raise InvalidDesign("exact block reduction needs blocks of size 1")
    if small_inst.m != design.q:
        raise InvalidDesign(f"design has {design.q} blocks for {small_inst.m} small items")
    if not is_block_shattered(side1_sets(rng), design, budget=budget):
        raise NotShattered("range does not block-shatter the design")
    for v in (small_inst.v1, small_inst.v2):
        if not isinstance(v, (CappedAdditiveValuation, AdditiveValuation)):
            raise InvalidDesign("block lift needs (capped) additive small valuations")
    big = AuctionInstance(
        rng.universe, lift_valuation_blocks(small_inst.v1, design), lift_valuation_blocks(small_inst.v2, design)
    )
    outcome = mir_allocate(mech, big)
    projected = decode_blocks(outcome.allocation, design)
    got = small_inst.v1.value_mask(projected.bits1) + small_inst.v2.value_mask(projected.bits2)
    _, opt = opt_allocation(small_inst, budget)
    image = tuple(sorted_items(b)[0] for b in design.blocks)
    report = ReductionReport(image, outcome, projected, got, opt)
    if not report.equal or outcome.welfare != opt:
        raise VerificationFailure(
            f"block reduction welfare {got} (big {outcome.welfare}) != small optimum {opt}",
            {"range": rng.to_json(), "design": design.to_json(), "instance": small_inst.to_json()},
        )
    return report
