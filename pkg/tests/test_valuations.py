import itertools

import pytest
from hypothesis import given, settings, strategies as st

from partition_vc import (
    AdditiveValuation,
    CappedAdditiveValuation,
    DoubleCappedAdditiveValuation,
    TableValuation,
    ZeroOneAdditiveValuation,
)
from partition_vc.errors import InputError, NonMonotoneValuation, SchemaError
from partition_vc.valuations import is_nondecreasing, valuation_from_json, zero_valuation


def test_additive():
    v = AdditiveValuation((1, 2, 3))
    assert v.value({0, 2}) == 4
    assert v.value(set()) == 0
    assert v.table() == (0, 1, 2, 3, 3, 4, 5, 6)


def test_capped():
    v = CappedAdditiveValuation.of([2, 2, 2], 3)
    assert v.value({0}) == 2
    assert v.value({0, 1}) == 3
    assert v.value({0, 1, 2}) == 3
    assert v.per_item == (2, 2, 2)


def test_zero_one():
    v = ZeroOneAdditiveValuation.of(4, {1, 3})
    assert v.value({0, 1, 2, 3}) == 2
    assert v.value({0, 2}) == 0
    assert v.per_item == (0, 1, 0, 1)


def test_double_capped():
    v = DoubleCappedAdditiveValuation((0b0011, 0b1100), AdditiveValuation((3, 3, 1, 1)), (4, 2), 5)
    assert v.value({0, 1}) == 4
    assert v.value({2, 3}) == 2
    assert v.value({0, 1, 2, 3}) == 5
    assert v.value({0, 2}) == 4


def test_double_capped_validation():
    base = AdditiveValuation((1, 1, 1))
    with pytest.raises(InputError):
        DoubleCappedAdditiveValuation((0b011, 0b110), base, (1, 1), 2)
    with pytest.raises(InputError):
        DoubleCappedAdditiveValuation((0b011,), base, (1,), 2)
    with pytest.raises(InputError):
        DoubleCappedAdditiveValuation((0b011, 0b100), base, (1,), 2)


def test_negative_values_rejected():
    with pytest.raises(InputError):
        AdditiveValuation((1, -1))
    with pytest.raises(InputError):
        CappedAdditiveValuation.of([1, 1], -2)


def test_table_monotonicity():
    TableValuation(2, (0, 1, 1, 2))
    with pytest.raises(NonMonotoneValuation):
        TableValuation(2, (0, 2, 1, 1))
    with pytest.raises(InputError):
        TableValuation(2, (0, 1, 2))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda m: st.tuples(st.lists(st.integers(0, 6), min_size=m, max_size=m), st.integers(0, 20))))
def test_capped_is_monotone(data):
    per_item, cap = data
    v = CappedAdditiveValuation.of(per_item, cap)
    assert is_nondecreasing(v)
    # nondecreasing on every nested pair, checked directly
    m = len(per_item)
    for s, t in itertools.product(range(1 << m), repeat=2):
        if s & t == s:
            assert v.value_mask(s) <= v.value_mask(t)


@pytest.mark.parametrize(
    "v",
    [
        AdditiveValuation((1, 0, 2)),
        CappedAdditiveValuation.of([1, 2, 3], 4),
        ZeroOneAdditiveValuation.of(3, {0, 2}),
        DoubleCappedAdditiveValuation((0b001, 0b110), AdditiveValuation((1, 2, 3)), (1, 4), 4),
        TableValuation(2, (0, 1, 2, 2)),
        zero_valuation(3),
    ],
)
def test_json_roundtrip(v):
    w = valuation_from_json(v.to_json())
    assert w.table() == v.table()
    assert type(w) is type(v)


@pytest.mark.parametrize(
    "obj",
    [
        {"kind": "additive"},
        {"kind": "magic", "per_item": [1]},
        {"kind": "capped_additive", "per_item": [1, "2"], "cap": 3},
        {"kind": "table", "m": 1, "values": [0, True]},
        [1, 2],
    ],
)
def test_json_rejects_bad_input(obj):
    with pytest.raises(SchemaError):
        valuation_from_json(obj)
