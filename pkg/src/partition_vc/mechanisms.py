"""Two-bidder auctions: welfare, the brute-force optimum, maximal-in-range
allocation with VCG (Clarke pivot) payments, and approximation ratios.

Ratios follow the ALG/OPT <= 1 convention.  A "2 - eps" guarantee in the
OPT/ALG convention is the same statement as ALG/OPT >= 1/(2 - eps).
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .budget import Budget, resolve
from .errors import EmptyRange, InputError, NotCoveringError, NotInRange, SchemaError, UniverseMismatch
from .partitions import (
    Partition,
    PartitionFamily,
    Universe,
    all_partition_masks,
    as_universe,
    bundle_family,
    is_covering,
    partition_from_json,
)
from .valuations import (
    CappedAdditiveValuation,
    Valuation,
    ZeroOneAdditiveValuation,
    valuation_from_json,
)
from .vc import fraction_json


@dataclass(frozen=True)
class AuctionInstance:
    universe: Universe
    v1: Valuation
    v2: Valuation

    def __post_init__(self):
        object.__setattr__(self, "universe", as_universe(self.universe))
        for v in (self.v1, self.v2):
            if v.m != self.universe.m:
                raise UniverseMismatch(f"valuation over m={v.m} in auction over m={self.universe.m}")

    @property
    def m(self) -> int:
        return self.universe.m

    def swapped(self) -> AuctionInstance:
        return AuctionInstance(self.universe, self.v2, self.v1)

    def to_json(self) -> dict:
        return {"m": self.m, "v1": self.v1.to_json(), "v2": self.v2.to_json()}


def instance_from_json(obj) -> AuctionInstance:
    if not isinstance(obj, dict) or not {"m", "v1", "v2"} <= set(obj):
        raise SchemaError('instance must have "m", "v1" and "v2"')
    return AuctionInstance(Universe(obj["m"]), valuation_from_json(obj["v1"]), valuation_from_json(obj["v2"]))


def load_instance(path) -> AuctionInstance:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: {exc}") from None
    return instance_from_json(obj)


@dataclass(frozen=True)
class Outcome:
    allocation: Partition
    welfare: int
    payment1: int
    payment2: int
    index: int | None = None

    def to_json(self) -> dict:
        out = {
            "allocation": self.allocation.to_json(),
            "welfare": self.welfare,
            "payment1": self.payment1,
            "payment2": self.payment2,
        }
        if self.index is not None:
            out["index"] = self.index
        return out


def outcome_from_json(obj, u: Universe | int) -> Outcome:
    if not isinstance(obj, dict):
        raise SchemaError("outcome must be a JSON object")
    try:
        return Outcome(partition_from_json(obj["allocation"], u), obj["welfare"], obj["payment1"], obj["payment2"], obj.get("index"))
    except KeyError as exc:
        raise SchemaError(f"outcome missing {exc}") from None


def welfare(inst: AuctionInstance, p: Partition) -> int:
    if p.m != inst.m:
        raise UniverseMismatch(f"allocation over m={p.m} in auction over m={inst.m}")
    return inst.v1.value_mask(p.bits1) + inst.v2.value_mask(p.bits2)


def opt_allocation(inst: AuctionInstance, budget: Budget | None = None) -> tuple[Partition, int]:
    """Welfare-maximal allocation by exhaustive search over covering partitions.

    Restricting to covering partitions is lossless because valuations are
    nondecreasing.  Ties go to the first partition in canonical base-2 order
    (item 0 most significant, 0 = bidder 1).
    """
    m = inst.m
    resolve(budget).check_pow2(m, "optimal allocation")
    full = (1 << m) - 1
    t1, t2 = inst.v1.table(), inst.v2.table()
    best, best_s2 = -1, 0
    # canonical order: side-2 bits read with item 0 as most significant digit
    for code in range(1 << m):
        s2 = _reverse_bits(code, m)
        w = t1[full ^ s2] + t2[s2]
        if w > best:
            best, best_s2 = w, s2
    return Partition(m, full ^ best_s2, best_s2), best


def _reverse_bits(x: int, m: int) -> int:
    out = 0
    for j in range(m):
        if x >> j & 1:
            out |= 1 << (m - 1 - j)
    return out


@dataclass(frozen=True)
class MirMechanism:
    """Maximal-in-range mechanism: exact welfare maximisation over a fixed range.

    Ties go to the lowest range index.  ``allocate_all_items`` demands a range
    of covering partitions only.
    """

    range: PartitionFamily
    allocate_all_items: bool = False

    def __post_init__(self):
        if len(self.range) == 0:
            raise EmptyRange("a maximal-in-range mechanism needs a nonempty range")
        if self.allocate_all_items:
            for i, p in enumerate(self.range):
                if not is_covering(p):
                    raise NotCoveringError(f"range entry {i} leaves items unallocated")

    def argmax(self, inst: AuctionInstance) -> tuple[int, int]:
        if inst.m != self.range.m:
            raise UniverseMismatch(f"range over m={self.range.m}, auction over m={inst.m}")
        t1, t2 = inst.v1.table(), inst.v2.table()
        best, best_i = -1, -1
        for i, (a, b) in enumerate(self.range.masks()):
            w = t1[a] + t2[b]
            if w > best:
                best, best_i = w, i
        return best_i, best

    def run(self, inst: AuctionInstance) -> Outcome:
        return mir_allocate(self, inst)


def mir_allocate(mech: MirMechanism, inst: AuctionInstance) -> Outcome:
    i, w = mech.argmax(inst)
    chosen = mech.range[i]
    p1, p2 = vcg_payments(mech.range, inst, chosen)
    return Outcome(chosen, w, p1, p2, i)


def vcg_payments(rng: PartitionFamily, inst: AuctionInstance, chosen: Partition) -> tuple[int, int]:
    """Clarke pivot payments computed within the range.

    Bidder 1 pays the best bidder-2 value attainable in the range minus what
    bidder 2 gets under ``chosen``; symmetrically for bidder 2.
    """
    if chosen not in rng.entries:
        raise NotInRange(f"{chosen!r} is not a range entry")
    if inst.m != rng.m:
        raise UniverseMismatch(f"range over m={rng.m}, auction over m={inst.m}")
    t1, t2 = inst.v1.table(), inst.v2.table()
    masks = rng.masks()
    p1 = max(t2[b] for _, b in masks) - t2[chosen.bits2]
    p2 = max(t1[a] for a, _ in masks) - t1[chosen.bits1]
    return p1, p2


def bundle_mechanism(inst: AuctionInstance) -> Outcome:
    """All items to the bidder valuing the grand bundle more; bidder 1 wins ties."""
    return mir_allocate(MirMechanism(bundle_family(inst.universe)), inst)


# Profiles and ratios ------------------------------------------------------------


def disjoint_zero_one_profiles(m: int, budget: Budget | None = None) -> Iterator[AuctionInstance]:
    """Pairs of 0/1-additive valuations with disjoint indicators, one per general partition."""
    u = Universe(m)
    for a, b in all_partition_masks(m, budget):
        yield AuctionInstance(u, ZeroOneAdditiveValuation(m, a), ZeroOneAdditiveValuation(m, b))


def all_zero_one_profiles(m: int, budget: Budget | None = None) -> Iterator[AuctionInstance]:
    """All 4^m pairs of 0/1-additive valuations."""
    resolve(budget).check_pow2(2 * m, "0/1 profiles")
    u = Universe(m)
    for a in range(1 << m):
        for b in range(1 << m):
            yield AuctionInstance(u, ZeroOneAdditiveValuation(m, a), ZeroOneAdditiveValuation(m, b))


def capped_additive_grid(m: int, max_item: int, max_cap: int) -> list[CappedAdditiveValuation]:
    """Every capped-additive valuation with per-item values <= max_item and cap <= max_cap."""
    return [
        CappedAdditiveValuation.of(items, cap)
        for items in itertools.product(range(max_item + 1), repeat=m)
        for cap in range(max_cap + 1)
    ]


def distinct_valuations(vals: Iterable[Valuation]) -> list[Valuation]:
    """First valuation of each distinct value table, in input order."""
    seen: dict[tuple[int, ...], Valuation] = {}
    for v in vals:
        seen.setdefault(v.table(), v)
    return list(seen.values())


def _sample_profiles(kind: str, m: int, count: int, rng: random.Random) -> Iterator[AuctionInstance]:
    u = Universe(m)
    for _ in range(count):
        if kind == "disjoint01":
            a = b = 0
            for j in range(m):
                d = rng.randrange(3)
                if d == 1:
                    a |= 1 << j
                elif d == 2:
                    b |= 1 << j
        elif kind == "all01":
            a, b = rng.getrandbits(m), rng.getrandbits(m)
        else:
            raise InputError(f"sampled mode does not support profile source {kind!r}")
        yield AuctionInstance(u, ZeroOneAdditiveValuation(m, a), ZeroOneAdditiveValuation(m, b))


PROFILE_SOURCES: dict[str, Callable[..., Iterator[AuctionInstance]]] = {
    "disjoint01": disjoint_zero_one_profiles,
    "all01": all_zero_one_profiles,
}


@dataclass(frozen=True)
class RatioReport:
    ratio: Fraction
    witness: AuctionInstance | None
    mode: str
    profiles: int
    skipped: int

    def to_json(self) -> dict:
        return {
            "ratio": fraction_json(self.ratio),
            "witness": None if self.witness is None else self.witness.to_json(),
            "mode": self.mode,
            "profiles": self.profiles,
            "skipped": self.skipped,
        }


def measure_ratio(
    rng: PartitionFamily,
    profile_source: str | Iterable[AuctionInstance] = "disjoint01",
    mode: str = "exact",
    seed: int | None = None,
    samples: int = 1000,
    budget: Budget | None = None,
) -> RatioReport:
    """Worst MIR-welfare / OPT-welfare over a set of profiles.

    ``profile_source`` is ``"disjoint01"`` (3^m profiles), ``"all01"`` (4^m)
    or any iterable of instances.  Profiles with OPT = 0 are skipped; the
    first profile attaining the minimum is the witness.
    """
    mech = MirMechanism(rng)
    if mode == "exact":
        profiles = PROFILE_SOURCES[profile_source](rng.m, budget) if isinstance(profile_source, str) else profile_source
    elif mode == "sampled":
        if seed is None or not isinstance(profile_source, str):
            raise InputError("sampled mode needs a named profile source and a seed")
        profiles = _sample_profiles(profile_source, rng.m, samples, random.Random(seed))
    else:
        raise InputError(f"unknown mode {mode!r}")

    worst_num, worst_den, witness = 1, 1, None
    count = skipped = 0
    for inst in profiles:
        count += 1
        _, opt = opt_allocation(inst, budget)
        if opt == 0:
            skipped += 1
            continue
        _, alg = mech.argmax(inst)
        if witness is None or alg * worst_den < worst_num * opt:
            worst_num, worst_den, witness = alg, opt, inst
    return RatioReport(Fraction(worst_num, worst_den), witness, mode, count, skipped)


# Truthfulness -----------------------------------------------------------------------


@dataclass(frozen=True)
class Deviation:
    bidder: int
    true_value: Valuation
    report: Valuation
    other: Valuation
    gain: int

    def to_json(self) -> dict:
        return {
            "bidder": self.bidder,
            "true_value": self.true_value.to_json(),
            "report": self.report.to_json(),
            "other": self.other.to_json(),
            "gain": self.gain,
        }


def find_profitable_deviation(rng: PartitionFamily, valuations: Sequence[Valuation]) -> Deviation | None:
    """Exhaustive misreport search for MIR + VCG over ``rng``.

    For each bidder, each report of the other bidder, each true valuation and
    each misreport drawn from ``valuations``, compare utility (value of the
    received bundle minus payment) of the misreport against truth-telling.
    Returns the first strictly profitable deviation found, or None.
    """
    if len(rng) == 0:
        raise EmptyRange("empty range")
    vals = list(valuations)
    masks = rng.masks()
    side = {1: [a for a, _ in masks], 2: [b for _, b in masks]}
    # values[bidder][v, j]: value of valuation v for bidder's side of entry j
    values = {
        k: np.array([[v.table()[s] for s in side[k]] for v in vals], dtype=np.int64) for k in (1, 2)
    }
    n = len(vals)
    diag = np.arange(n)
    for bidder, other in ((1, 2), (2, 1)):
        mine, theirs = values[bidder], values[other]
        for o in range(n):
            other_row = theirs[o]
            pay = other_row.max() - other_row  # Clarke pivot per entry
            chosen = np.argmax(mine + other_row[None, :], axis=1)  # first max = lowest index
            utility = mine[:, chosen] - pay[chosen][None, :]  # [true, report]
            gain = utility - utility[diag, diag][:, None]
            t, r = np.unravel_index(np.argmax(gain), gain.shape)
            if gain[t, r] > 0:
                return Deviation(bidder, vals[t], vals[r], vals[o], int(gain[t, r]))
    return None
