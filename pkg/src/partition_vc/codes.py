"""Large pairwise-far families of covering partitions by random rejection.

Random draws use :class:`random.Random` (Mersenne Twister) through
``getrandbits``, whose output for a given seed is stable across Python
releases.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, TargetUnreached, VerificationFailure
from .partitions import Partition, PartitionFamily, Universe, as_universe
from .vc import min_pairwise_distance


@dataclass(frozen=True)
class CodeSpec:
    universe: Universe
    delta: Fraction
    target_size: int
    max_attempts: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "universe", as_universe(self.universe))
        object.__setattr__(self, "delta", Fraction(self.delta))
        if not 0 < self.delta < 1:
            raise InputError(f"delta must lie in (0, 1), got {self.delta}")
        if self.target_size < 1 or self.max_attempts < 1:
            raise InputError("target_size and max_attempts must be positive")

    @property
    def threshold(self) -> int:
        """Required pairwise distance, ``ceil((1 - delta) / 2 * m)``."""
        return math.ceil((1 - self.delta) / 2 * self.universe.m)


@dataclass(frozen=True)
class CodeBuild:
    spec: CodeSpec
    family: PartitionFamily
    attempts: int
    min_distance: int | None

    @property
    def reached(self) -> bool:
        return len(self.family) >= self.spec.target_size

    def csv_row(self) -> list:
        md = "" if self.min_distance is None else self.min_distance
        return [self.spec.universe.m, str(self.spec.delta), len(self.family), md, self.attempts]


CSV_HEADER = ["m", "delta", "achieved_size", "min_distance", "attempts"]


def sample_covering_partition(u: Universe | int, rng: random.Random) -> Partition:
    u = as_universe(u)
    side1 = rng.getrandbits(u.m)
    return Partition(u.m, side1, u.full ^ side1)


def construct_code(spec: CodeSpec) -> CodeBuild:
    """Run the rejection sampler and verify the result exactly."""
    u = spec.universe
    thr = spec.threshold
    rng = random.Random(spec.seed)
    kept: list[int] = []
    attempts = 0
    while attempts < spec.max_attempts and len(kept) < spec.target_size:
        attempts += 1
        x = sample_covering_partition(u, rng).bits1
        # covering partitions: distance is the size of the side-1 symmetric difference
        if all((x ^ y).bit_count() >= thr for y in kept):
            kept.append(x)
    family = PartitionFamily.from_masks(u, [(x, u.full ^ x) for x in kept])
    md = min_pairwise_distance(family).min_distance if len(family) >= 2 else None
    if md is not None and md < thr:
        raise VerificationFailure("code family violates its distance threshold", {"spec": str(spec)})
    return CodeBuild(spec, family, attempts, md)


def build_code_family(spec: CodeSpec, strict: bool = False) -> PartitionFamily:
    """Family of covering partitions, pairwise at least ``spec.threshold`` apart.

    Stops at ``target_size`` entries or after ``max_attempts`` draws.  With
    ``strict=True`` an unreached target raises :class:`TargetUnreached`
    carrying the partial family.
    """
    build = construct_code(spec)
    if strict and not build.reached:
        raise TargetUnreached(
            f"reached {len(build.family)} of {spec.target_size} after {build.attempts} attempts",
            build.family,
            build.attempts,
        )
    return build.family
