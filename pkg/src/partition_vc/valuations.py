"""Integer-valued, nondecreasing bundle valuations.

Every class exposes ``value(items)`` for public use and ``value_mask(mask)``
for the bitmask hot paths.  ``table()`` materialises all ``2**m`` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InputError, NonMonotoneValuation, SchemaError
from .partitions import Items, Universe, sorted_items


def _nonneg_ints(values: Iterable, what: str) -> tuple[int, ...]:
    out = tuple(values)
    for v in out:
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise InputError(f"{what} must be nonnegative integers, got {v!r}")
    return out


class Valuation:
    m: int

    def value_mask(self, mask: int) -> int:
        raise NotImplementedError

    def value(self, bundle: Items) -> int:
        return self.value_mask(Universe(self.m).mask(bundle))

    def table(self) -> tuple[int, ...]:
        return self._table

    @cached_property
    def _table(self) -> tuple[int, ...]:
        return tuple(self.value_mask(s) for s in range(1 << self.m))

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class AdditiveValuation(Valuation):
    per_item: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "per_item", _nonneg_ints(self.per_item, "per-item values"))
        Universe(len(self.per_item))

    @property
    def m(self) -> int:
        return len(self.per_item)

    def value_mask(self, mask: int) -> int:
        return sum(self.per_item[j] for j in sorted_items(mask))

    def to_json(self) -> dict:
        return {"kind": "additive", "per_item": list(self.per_item)}


@dataclass(frozen=True)
class CappedAdditiveValuation(Valuation):
    base: AdditiveValuation
    cap: int

    def __post_init__(self):
        _nonneg_ints([self.cap], "cap")

    @classmethod
    def of(cls, per_item: Sequence[int], cap: int) -> CappedAdditiveValuation:
        return cls(AdditiveValuation(tuple(per_item)), cap)

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def per_item(self) -> tuple[int, ...]:
        return self.base.per_item

    def value_mask(self, mask: int) -> int:
        return min(self.base.value_mask(mask), self.cap)

    def to_json(self) -> dict:
        return {"kind": "capped_additive", "per_item": list(self.per_item), "cap": self.cap}


@dataclass(frozen=True)
class ZeroOneAdditiveValuation(Valuation):
    m: int
    indicator: int

    def __post_init__(self):
        Universe(self.m).check_mask(self.indicator)

    @classmethod
    def of(cls, m: int, items: Items) -> ZeroOneAdditiveValuation:
        return cls(m, Universe(m).mask(items))

    @property
    def per_item(self) -> tuple[int, ...]:
        return tuple((self.indicator >> j) & 1 for j in range(self.m))

    def value_mask(self, mask: int) -> int:
        return (mask & self.indicator).bit_count()

    def to_json(self) -> dict:
        return {"kind": "zero_one_additive", "m": self.m, "indicator": sorted_items(self.indicator)}


@dataclass(frozen=True)
class DoubleCappedAdditiveValuation(Valuation):
    """``min(sum_t min(a(S ∩ S_t), B_t), B)`` over a partition of the items into blocks."""

    blocks: tuple[int, ...]
    base: AdditiveValuation
    block_caps: tuple[int, ...]
    global_cap: int

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "block_caps", _nonneg_ints(self.block_caps, "block caps"))
        _nonneg_ints([self.global_cap], "global cap")
        u = Universe(self.base.m)
        seen = 0
        for b in self.blocks:
            u.check_mask(b)
            if b & seen:
                raise InputError("blocks must be pairwise disjoint")
            seen |= b
        if seen != u.full:
            raise InputError("blocks must cover every item")
        if len(self.block_caps) != len(self.blocks):
            raise InputError("one cap per block required")

    @property
    def m(self) -> int:
        return self.base.m

    def value_mask(self, mask: int) -> int:
        total = sum(min(self.base.value_mask(mask & b), cap) for b, cap in zip(self.blocks, self.block_caps))
        return min(total, self.global_cap)

    def to_json(self) -> dict:
        return {
            "kind": "double_capped_additive",
            "per_item": list(self.base.per_item),
            "blocks": [sorted_items(b) for b in self.blocks],
            "block_caps": list(self.block_caps),
            "cap": self.global_cap,
        }


@dataclass(frozen=True)
class TableValuation(Valuation):
    """Explicit value for each bundle, indexed by bundle bitmask."""

    m: int
    values: tuple[int, ...]

    def __post_init__(self):
        Universe(self.m)
        object.__setattr__(self, "values", _nonneg_ints(self.values, "table values"))
        if len(self.values) != 1 << self.m:
            raise InputError(f"table needs {1 << self.m} values, got {len(self.values)}")
        for s in range(1 << self.m):
            for j in range(self.m):
                if not s >> j & 1 and self.values[s] > self.values[s | 1 << j]:
                    raise NonMonotoneValuation(f"value drops when adding item {j} to {sorted_items(s)}")

    def value_mask(self, mask: int) -> int:
        return self.values[mask]

    def to_json(self) -> dict:
        return {"kind": "table", "m": self.m, "values": list(self.values)}


def is_nondecreasing(v: Valuation) -> bool:
    """Exhaustive check over all (S, S + j) pairs, which covers every S ⊆ T."""
    t = v.table()
    return all(t[s] <= t[s | 1 << j] for s in range(1 << v.m) for j in range(v.m))


def zero_valuation(m: int) -> AdditiveValuation:
    return AdditiveValuation((0,) * m)


def _get(obj: dict, key: str):
    if key not in obj:
        raise SchemaError(f"valuation missing {key!r}")
    return obj[key]


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"{what} must be an integer")
    return x


def _ints(x, what: str) -> list[int]:
    if not isinstance(x, list):
        raise SchemaError(f"{what} must be a list")
    return [_int(v, what) for v in x]


def valuation_from_json(obj) -> Valuation:
    if not isinstance(obj, dict):
        raise SchemaError("valuation must be a JSON object")
    kind = obj.get("kind")
    if kind == "additive":
        return AdditiveValuation(tuple(_ints(_get(obj, "per_item"), "per_item")))
    if kind == "capped_additive":
        return CappedAdditiveValuation.of(_ints(_get(obj, "per_item"), "per_item"), _int(_get(obj, "cap"), "cap"))
    if kind == "zero_one_additive":
        return ZeroOneAdditiveValuation.of(_int(_get(obj, "m"), "m"), _ints(_get(obj, "indicator"), "indicator"))
    if kind == "double_capped_additive":
        base = AdditiveValuation(tuple(_ints(_get(obj, "per_item"), "per_item")))
        u = Universe(base.m)
        blocks = _get(obj, "blocks")
        if not isinstance(blocks, list):
            raise SchemaError("blocks must be a list")
        return DoubleCappedAdditiveValuation(
            tuple(u.mask(_ints(b, "block")) for b in blocks),
            base,
            tuple(_ints(_get(obj, "block_caps"), "block_caps")),
            _int(_get(obj, "cap"), "cap"),
        )
    if kind == "table":
        return TableValuation(_int(_get(obj, "m"), "m"), tuple(_ints(_get(obj, "values"), "values")))
    raise SchemaError(f"unknown valuation kind {kind!r}")
