"""Lemma-verification suites.

Each suite takes a master seed, a budget and optional overrides and returns
one :class:`ResultRecord`.  A failing record carries the first offending
instance as a replayable witness.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Callable

from ..budget import Budget
from ..codes import CodeSpec, construct_code
from ..errors import VerificationFailure
from ..generators import (
    far_family,
    planted_block_range,
    planted_shattered_range,
    random_capped_instance,
    random_family,
)
from ..mechanisms import (
    AuctionInstance,
    bundle_mechanism,
    capped_additive_grid,
    disjoint_zero_one_profiles,
    distinct_valuations,
    find_profitable_deviation,
    measure_ratio,
    opt_allocation,
)
from ..partitions import PartitionFamily, Universe, bundle_family, covering_family
from ..reductions import is_block_shattered, run_block_reduction, run_reduction, sample_blocks
from ..valuations import ZeroOneAdditiveValuation
from ..vc import (
    SetFamily,
    alpha_of,
    count_shattered_sets,
    find_splitting_element,
    min_pairwise_distance,
    sauer_shelah_check,
    split_family,
)
from .records import ResultRecord, derive_seed


def split_inequality(seed: int, budget: Budget, trials: int = 200, max_m: int = 6) -> ResultRecord:
    rec = ResultRecord("split-inequality", "count(R) >= count(R') + count(R'') for every element",
                       {"seed": seed, "trials": trials, "max_m": max_m})
    rng = random.Random(derive_seed(seed, "split-inequality"))
    checks = 0
    for t in range(trials):
        m = rng.randint(1, max_m)
        r = random_family(m, rng.randint(1, 24), rng, covering=rng.random() < 0.3)
        total = count_shattered_sets(r, budget)
        for e in range(m):
            r1, r2 = split_family(r, e)
            c1, c2 = count_shattered_sets(r1, budget), count_shattered_sets(r2, budget)
            checks += 1
            if total < c1 + c2:
                rec.fail({"trial": t, "family": r.to_json(), "element": e, "counts": [total, c1, c2]})
    rec.measured = {"checks": checks}
    return rec


def splitting_element(seed: int, budget: Budget, trials: int = 200, max_m: int = 14, max_k: int = 64) -> ResultRecord:
    rec = ResultRecord("splitting-element", "max element count >= ceil(floor(k/2) * eps)",
                       {"seed": seed, "trials": trials, "max_m": max_m, "max_k": max_k})
    rng = random.Random(derive_seed(seed, "splitting-element"))
    sizes = []
    for t in range(trials):
        eps = rng.choice([Fraction(1, 4), Fraction(1, 2)])
        m = rng.randint(4, max_m)
        r = far_family(m, rng.randint(2, max_k), eps, rng)
        if len(r) < 2:
            continue
        order = list(range(len(r)))
        rng.shuffle(order)
        pairing = [(order[2 * i], order[2 * i + 1]) for i in range(len(r) // 2)]
        try:
            w = find_splitting_element(r, pairing, eps)
        except VerificationFailure as exc:
            rec.fail({"trial": t, "family": r.to_json(), "pairing": pairing, "epsilon": eps, "error": str(exc)})
            continue
        sizes.append(len(r))
        if w.pair_count < math.ceil(len(pairing) * eps):
            rec.fail({"trial": t, "family": r.to_json(), "pairing": pairing, "epsilon": eps})
    rec.measured = {"families": len(sizes), "max_k": max(sizes, default=0)}
    return rec


def sauer_shelah(seed: int, budget: Budget, trials: int = 500, m: int = 8) -> ResultRecord:
    rec = ResultRecord("sauer-shelah", "|Z| > sum_{i<=d} C(m,i) implies classical VC >= d+1",
                       {"seed": seed, "trials": trials, "m": m, "d": [1, 2]})
    rng = random.Random(derive_seed(seed, "sauer-shelah"))
    nonvacuous = 0
    for t in range(trials):
        z = SetFamily(Universe(m), tuple(rng.getrandbits(m) for _ in range(rng.randint(1, 80))))
        for d in (1, 2):
            if len(z.distinct()) > sum(math.comb(m, i) for i in range(d + 1)):
                nonvacuous += 1
            if not sauer_shelah_check(z, d, budget):
                rec.fail({"trial": t, "sets": list(z.entries), "m": m, "d": d})
    rec.measured = {"nonvacuous_checks": nonvacuous}
    return rec


def code_distance(seed: int, budget: Budget, ms: tuple[int, ...] = tuple(range(12, 25)),
                  delta: Fraction = Fraction(1, 5), attempts: int = 20000) -> ResultRecord:
    rec = ResultRecord("code-distance", "min pairwise distance >= ceil((1-delta)/2 * m)",
                       {"seed": seed, "m": list(ms), "delta": delta, "max_attempts": attempts})
    sizes = {}
    for m in ms:
        spec = CodeSpec(Universe(m), delta, 10**9, attempts, derive_seed(seed, f"code-{m}"))
        build = construct_code(spec)
        sizes[m] = len(build.family)
        if len(build.family) >= 2 and min_pairwise_distance(build.family).min_distance < spec.threshold:
            rec.fail({"m": m, "family": build.family.to_json()})
    rec.measured = {"achieved_sizes": sizes}
    return rec


def bundle_half(seed: int, budget: Budget, m: int = 4, max_item: int = 2, max_cap: int = 3) -> ResultRecord:
    rec = ResultRecord("bundle-half", "2 * bundle welfare >= OPT; worst ratio is exactly 1/2",
                       {"m": m, "max_item": max_item, "max_cap": max_cap})
    worst, witness = Fraction(1), None
    grid = distinct_valuations(capped_additive_grid(m, max_item, max_cap))
    u = Universe(m)
    profiles = itertools.chain(
        disjoint_zero_one_profiles(m, budget),
        (AuctionInstance(u, v1, v2) for v1 in grid for v2 in grid),
    )
    count = 0
    for inst in profiles:
        count += 1
        _, opt = opt_allocation(inst, budget)
        w = bundle_mechanism(inst).welfare
        if 2 * w < opt:
            rec.fail({"instance": inst.to_json(), "bundle": w, "opt": opt})
        if opt and Fraction(w, opt) < worst:
            worst, witness = Fraction(w, opt), inst
    if worst != Fraction(1, 2):
        rec.fail({"worst_ratio": worst})
    rec.measured = {"profiles": count, "worst_ratio": worst, "witness": witness}
    return rec


def truthfulness_ranges(m: int, rng: random.Random, count: int) -> list[PartitionFamily]:
    ranges = [bundle_family(m), covering_family(m)]
    for _ in range(count):
        ranges.append(random_family(m, rng.randint(1, 8), rng, covering=rng.random() < 0.3))
    return ranges


def truthfulness_valuations(m: int, max_item: int = 3, max_cap: int = 3):
    zero_one = [ZeroOneAdditiveValuation(m, a) for a in range(1 << m)]
    return distinct_valuations(zero_one + capped_additive_grid(m, max_item, max_cap))


def truthfulness(seed: int, budget: Budget, m: int = 3, random_ranges: int = 40) -> ResultRecord:
    rec = ResultRecord("truthfulness", "no profitable misreport under MIR + VCG",
                       {"seed": seed, "m": m, "random_ranges": random_ranges})
    rng = random.Random(derive_seed(seed, "truthfulness"))
    vals = truthfulness_valuations(m)
    ranges = truthfulness_ranges(m, rng, random_ranges)
    for r in ranges:
        dev = find_profitable_deviation(r, vals)
        if dev is not None:
            rec.fail({"range": r.to_json(), "deviation": dev.to_json()})
    rec.measured = {"ranges": len(ranges), "valuations": len(vals)}
    return rec


def reduction(seed: int, budget: Budget, trials: int = 100, m: int = 8, e_size: int = 3,
              max_noise: int = 32) -> ResultRecord:
    rec = ResultRecord("reduction", "projected MIR welfare equals small-instance OPT",
                       {"seed": seed, "trials": trials, "m": m, "e_size": e_size, "max_noise": max_noise})
    rng = random.Random(derive_seed(seed, "reduction"))
    for t in range(trials):
        e = sorted(rng.sample(range(m), e_size))
        r = planted_shattered_range(m, Universe(m).mask(e), rng.randint(0, max_noise), rng)
        small = random_capped_instance(e_size, rng)
        try:
            run_reduction(r, e, small, budget)
        except VerificationFailure as exc:
            rec.fail({"trial": t, **exc.witness})
    return rec


def block_shattering(seed: int, budget: Budget, designs: int = 100, trials: int = 50, m: int = 8,
                     q: int = 2, l: int = 1) -> ResultRecord:
    rec = ResultRecord("block-shattering",
                       "size-m/2 subsets block-shatter >= 95% of random designs; block reduction is exact",
                       {"seed": seed, "designs": designs, "trials": trials, "m": m, "q": q, "l": l})
    rng = random.Random(derive_seed(seed, "block-shattering"))
    z = SetFamily.of(m, itertools.combinations(range(m), m // 2))
    hits = sum(is_block_shattered(z, sample_blocks(m, q, l, rng), require_regular=True, budget=budget)
               for _ in range(designs))
    if hits < 0.95 * designs:
        rec.fail({"hits": hits, "designs": designs})
    for t in range(trials):
        design = sample_blocks(m, q, l, rng)
        r = planted_block_range(design, rng.randint(0, 16), rng)
        small = random_capped_instance(q, rng)
        try:
            run_block_reduction(r, design, small, budget)
        except VerificationFailure as exc:
            rec.fail({"trial": t, **exc.witness})
    rec.measured = {"block_shattered": hits}
    return rec


def bridge(seed: int, budget: Budget, trials: int = 100, max_m: int = 6) -> ResultRecord:
    rec = ResultRecord("bridge", "worst disjoint 0/1 profile ratio equals alpha of the range",
                       {"seed": seed, "trials": trials, "max_m": max_m})
    rng = random.Random(derive_seed(seed, "bridge"))
    for t in range(trials):
        m = rng.randint(1, max_m)
        r = random_family(m, rng.randint(1, 12), rng, covering=rng.random() < 0.3)
        ratio = measure_ratio(r, "disjoint01", budget=budget).ratio
        alpha = alpha_of(r, budget=budget).alpha
        if ratio != alpha:
            rec.fail({"trial": t, "range": r.to_json(), "ratio": ratio, "alpha": alpha})
    return rec


SUITES: dict[str, Callable[..., ResultRecord]] = {
    "split-inequality": split_inequality,
    "splitting-element": splitting_element,
    "sauer-shelah": sauer_shelah,
    "code-distance": code_distance,
    "bundle-half": bundle_half,
    "truthfulness": truthfulness,
    "reduction": reduction,
    "block-shattering": block_shattering,
    "bridge": bridge,
}
