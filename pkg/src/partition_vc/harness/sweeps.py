"""Measurement sweeps that write one CSV row per grid point.

Rows are produced in grid order from per-point seeds, so a fixed master seed
gives byte-identical files.
"""

from __future__ import annotations

import csv
import io
import random
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ..budget import Budget
from ..errors import VerificationFailure
from ..codes import CSV_HEADER as CODE_HEADER
from ..codes import CodeSpec, construct_code
from ..generators import random_family
from ..mechanisms import measure_ratio
from ..partitions import PartitionFamily, Universe, all_partition_masks, bundle_family, sorted_items
from ..vc import alpha_of, vc_dimension
from .records import derive_seed


def _witness_str(inst) -> str:
    if inst is None:
        return ""
    return f"v1={sorted_items(inst.v1.indicator)};v2={sorted_items(inst.v2.indicator)}"


def ratio_sweep(ms: Sequence[int], seed: int, count: int = 3, budget: Budget | None = None):
    header = ["m", "range_id", "worst_ratio_num", "worst_ratio_den", "witness"]
    rows = []
    for m in ms:
        ranges = [("bundle", bundle_family(m))]
        rng = random.Random(derive_seed(seed, f"ratio-{m}"))
        for i in range(count):
            ranges.append((f"random-{i}", random_family(m, rng.randint(2, 2 * m + 2), rng)))
        for name, r in ranges:
            rep = measure_ratio(r, "disjoint01", budget=budget)
            rows.append([m, name, rep.ratio.numerator, rep.ratio.denominator, _witness_str(rep.witness)])
    return header, rows


def code_growth_sweep(ms: Sequence[int], seed: int, delta: Fraction = Fraction(1, 5), seeds: int = 3,
                      attempts: int = 20000, budget: Budget | None = None):
    header = ["seed"] + CODE_HEADER
    rows = []
    for s in range(seeds):
        for m in ms:
            spec = CodeSpec(Universe(m), Fraction(delta), 10**9, attempts, derive_seed(seed, f"code-{s}-{m}"))
            rows.append([s] + construct_code(spec).csv_row())
    return header, rows


def alpha_vs_vc_sweep(ms: Sequence[int], seed: int, count: int = 20, mode: str = "exact",
                      samples: int = 2000, budget: Budget | None = None):
    header = ["m", "family_id", "size", "covering", "alpha_num", "alpha_den", "alpha_mode", "vc"]
    rows = []
    for m in ms:
        rng = random.Random(derive_seed(seed, f"alpha-vc-{m}"))
        for i in range(count):
            covering = rng.random() < 0.5
            r = random_family(m, rng.randint(1, 4 * m), rng, covering=covering)
            rep = alpha_of(r, mode, samples, derive_seed(seed, f"alpha-vc-{m}-{i}"), budget)
            rows.append([m, i, len(r), int(covering), rep.alpha.numerator, rep.alpha.denominator, mode,
                         vc_dimension(r, budget).dimension])
    return header, rows


class _CoverageTable:
    """All nonempty partitions S of the universe with vectorised overlap scores."""

    def __init__(self, m: int, budget: Budget | None):
        masks = np.array(all_partition_masks(m, budget)[1:], dtype=np.int64)
        self.s1, self.s2 = masks[:, 0], masks[:, 1]
        self.pop = np.array([bin(i).count("1") for i in range(1 << m)], dtype=np.int64)
        self.size = self.pop[self.s1 | self.s2]

    def scores(self, t1: int, t2: int, idx: np.ndarray | None = None) -> np.ndarray:
        s1 = self.s1 if idx is None else self.s1[idx]
        s2 = self.s2 if idx is None else self.s2[idx]
        return self.pop[s1 & t1] + self.pop[s2 & t2]


def exact_alpha_numpy(r: PartitionFamily, budget: Budget | None = None) -> Fraction:
    """Same quantity as ``alpha_of(r).alpha``, vectorised over all S."""
    table = _CoverageTable(r.m, budget)
    best = np.zeros_like(table.size)
    for a, b in r.masks():
        np.maximum(best, table.scores(a, b), out=best)
    return min(Fraction(int(best[table.size == s].min()), s) for s in range(1, r.m + 1))


def greedy_covering_family(m: int, epsilon: Fraction, rng: random.Random, pool: int = 32,
                           budget: Budget | None = None) -> PartitionFamily:
    """Covering family that is (1/2 + epsilon)-approximate, built greedily.

    Each step draws ``pool`` random covering partitions and keeps the one that
    satisfies the most still-unsatisfied S.  The size is an upper bound on the
    minimum for this (m, epsilon).
    """
    eps = Fraction(epsilon)
    num, den = eps.denominator + 2 * eps.numerator, 2 * eps.denominator  # 1/2 + eps = num/den
    table = _CoverageTable(m, budget)
    full = (1 << m) - 1
    open_idx = np.arange(len(table.size))
    need = table.size * num  # satisfied iff den * score >= num * |S|
    kept: list[int] = []
    while open_idx.size:
        best_gain, best_t = -1, 0
        for _ in range(pool):
            t = rng.getrandbits(m)
            gain = int(np.count_nonzero(den * table.scores(t, full ^ t, open_idx) >= need[open_idx]))
            if gain > best_gain:
                best_gain, best_t = gain, t
        if best_gain == 0:
            continue
        kept.append(best_t)
        ok = den * table.scores(best_t, full ^ best_t, open_idx) >= need[open_idx]
        open_idx = open_idx[~ok]
    return PartitionFamily.from_masks(m, [(t, full ^ t) for t in kept])


def covering_size_sweep(ms: Sequence[int], seed: int, epsilons: Sequence[Fraction] = (Fraction(1, 10),),
                        pool: int = 32, budget: Budget | None = None):
    header = ["m", "eps_num", "eps_den", "size", "alpha_num", "alpha_den", "pool"]
    rows = []
    for m in ms:
        for eps in epsilons:
            eps = Fraction(eps)
            rng = random.Random(derive_seed(seed, f"covering-{m}-{eps}"))
            r = greedy_covering_family(m, eps, rng, pool, budget)
            alpha = exact_alpha_numpy(r, budget)
            if alpha < Fraction(1, 2) + eps:
                raise VerificationFailure(f"greedy family is not (1/2+{eps})-approximate at m={m}")
            rows.append([m, eps.numerator, eps.denominator, len(r), alpha.numerator, alpha.denominator, pool])
    return header, rows


SWEEPS = {
    "ratio": ratio_sweep,
    "code-growth": code_growth_sweep,
    "alpha-vs-vc": alpha_vs_vc_sweep,
    "covering-size": covering_size_sweep,
}


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()
