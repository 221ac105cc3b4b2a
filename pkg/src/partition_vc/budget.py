"""Limits on exhaustive enumeration.

``max_pow3_m`` caps ``m`` for anything that walks all ``3**m`` general
partitions; ``max_subset_size`` caps ``n`` for anything that walks ``2**n``
subsets or covering partitions.  Defaults can be overridden through the
``PARTITION_VC_MAX_POW3_M`` and ``PARTITION_VC_MAX_SUBSET_SIZE`` environment
variables.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import BudgetExceeded, InputError

ENV_POW3 = "PARTITION_VC_MAX_POW3_M"
ENV_SUBSET = "PARTITION_VC_MAX_SUBSET_SIZE"


@dataclass(frozen=True)
class Budget:
    max_pow3_m: int = 10
    max_subset_size: int = 16

    @classmethod
    def from_env(cls) -> Budget:
        kwargs = {}
        for field, var in (("max_pow3_m", ENV_POW3), ("max_subset_size", ENV_SUBSET)):
            raw = os.environ.get(var)
            if raw is None:
                continue
            try:
                kwargs[field] = int(raw)
            except ValueError:
                raise InputError(f"{var} must be an integer, got {raw!r}") from None
        return cls(**kwargs)

    def check_pow3(self, m: int, what: str = "enumeration") -> None:
        if m > self.max_pow3_m:
            raise BudgetExceeded(f"{what}: 3^{m} exceeds cap 3^{self.max_pow3_m}")

    def check_pow2(self, n: int, what: str = "enumeration") -> None:
        if n > self.max_subset_size:
            raise BudgetExceeded(f"{what}: 2^{n} exceeds cap 2^{self.max_subset_size}")


def resolve(budget: Budget | None) -> Budget:
    return Budget.from_env() if budget is None else budget
