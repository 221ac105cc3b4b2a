import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import families
from partition_vc import (
    AuctionInstance,
    CappedAdditiveValuation,
    MirMechanism,
    PartitionFamily,
    ZeroOneAdditiveValuation,
    bundle_family,
    bundle_mechanism,
    covering_family,
    find_profitable_deviation,
    make_partition,
    measure_ratio,
    mir_allocate,
    opt_allocation,
    vcg_payments,
    welfare,
)
from partition_vc.errors import EmptyRange, NotCoveringError, NotInRange, SchemaError, UniverseMismatch
from partition_vc.generators import random_capped_instance, random_family
from partition_vc.mechanisms import capped_additive_grid, distinct_valuations, instance_from_json, outcome_from_json


def capped(per_item, cap):
    return CappedAdditiveValuation.of(per_item, cap)


def inst(v1, v2):
    return AuctionInstance(v1.m, v1, v2)


def test_opt_allocation_example():
    i = inst(capped([3, 1], 3), capped([1, 2], 10))
    p, w = opt_allocation(i)
    assert w == 5
    assert p == make_partition(2, {0}, {1})


def test_opt_tie_break_is_canonical():
    # all allocations tie; the first covering partition gives everything to bidder 1
    i = inst(capped([1, 1], 1), capped([1, 1], 1))
    p, w = opt_allocation(i)
    assert w == 2 and p == make_partition(2, {0}, {1})
    z = inst(capped([0, 0], 0), capped([0, 0], 0))
    assert opt_allocation(z)[0] == make_partition(2, {0, 1}, set())


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10**6))
def test_opt_matches_oracle(m, seed):
    i = random_capped_instance(m, random.Random(seed))
    p, w = opt_allocation(i)
    assert w == welfare(i, p)
    assert w == oracles.opt_welfare(i.v1.value, i.v2.value, m)


def test_mir_tie_break_lowest_index():
    r = PartitionFamily.of(2, [({1}, {0}), ({0}, {1}), ({0, 1}, set())])
    i = inst(capped([1, 1], 5), capped([1, 1], 5))
    out = mir_allocate(MirMechanism(r), i)
    assert out.index == 0 and out.welfare == 2


def test_mir_errors():
    with pytest.raises(EmptyRange):
        MirMechanism(PartitionFamily.of(2, []))
    with pytest.raises(NotCoveringError):
        MirMechanism(PartitionFamily.of(2, [({0}, set())]), allocate_all_items=True)
    with pytest.raises(UniverseMismatch):
        mir_allocate(MirMechanism(bundle_family(3)), inst(capped([1, 1], 2), capped([1, 1], 2)))


def test_vcg_payments_example():
    i = inst(capped([2, 2], 3), capped([1, 1], 2))
    out = bundle_mechanism(i)
    assert out.allocation == make_partition(2, {0, 1}, set())
    assert (out.payment1, out.payment2) == (2, 0)
    with pytest.raises(NotInRange):
        vcg_payments(bundle_family(2), i, make_partition(2, {0}, {1}))


@settings(max_examples=60, deadline=None)
@given(families(max_m=4, max_k=8), st.integers(0, 10**6))
def test_mir_and_vcg_match_oracle(r, seed):
    i = random_capped_instance(r.m, random.Random(seed))
    out = mir_allocate(MirMechanism(r), i)
    pairs = oracles.as_pairs(r)
    ws = [i.v1.value(a) + i.v2.value(b) for a, b in pairs]
    assert out.welfare == max(ws)
    assert out.index == ws.index(max(ws))
    a, b = pairs[out.index]
    assert out.payment1 == max(i.v2.value(t2) for _, t2 in pairs) - i.v2.value(b)
    assert out.payment2 == max(i.v1.value(t1) for t1, _ in pairs) - i.v1.value(a)
    assert out.payment1 >= 0 and out.payment2 >= 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10**6))
def test_bundle_half_approximation(m, seed):
    i = random_capped_instance(m, random.Random(seed))
    assert 2 * bundle_mechanism(i).welfare >= opt_allocation(i)[1]


@pytest.mark.parametrize("m", [2, 3, 4])
def test_bundle_worst_ratio_is_half(m):
    rep = measure_ratio(bundle_family(m))
    assert rep.ratio == Fraction(1, 2)
    assert rep.profiles == 3**m and rep.skipped == 1


def test_full_range_ratio_is_one():
    assert measure_ratio(covering_family(3), "all01").ratio == 1


def test_ratio_sampled_needs_seed():
    with pytest.raises(Exception):
        measure_ratio(bundle_family(3), mode="sampled")
    rep = measure_ratio(bundle_family(3), mode="sampled", seed=1, samples=200)
    assert rep.ratio >= Fraction(1, 2) and rep.profiles == 200


def naive_deviation(r, vals):
    """Loop-based misreport search using mir_allocate for every profile."""
    mech = MirMechanism(r)
    for bidder in (1, 2):
        for o in vals:
            for t in vals:
                for rep in vals:
                    def utility(report):
                        i = inst(report, o) if bidder == 1 else inst(o, report)
                        out = mir_allocate(mech, i)
                        got = out.allocation.side1 if bidder == 1 else out.allocation.side2
                        pay = out.payment1 if bidder == 1 else out.payment2
                        return t.value(got) - pay

                    if utility(rep) > utility(t):
                        return True
    return False


def test_truthfulness_search_matches_naive():
    vals = distinct_valuations(capped_additive_grid(2, 2, 2))
    rng = random.Random(5)
    ranges = [bundle_family(2), covering_family(2)] + [random_family(2, rng.randint(1, 5), rng) for _ in range(6)]
    for r in ranges:
        assert (find_profitable_deviation(r, vals) is not None) == naive_deviation(r, vals)
        assert find_profitable_deviation(r, vals) is None


def test_instance_and_outcome_json():
    i = inst(capped([1, 2], 3), ZeroOneAdditiveValuation.of(2, {1}))
    assert instance_from_json(i.to_json()).to_json() == i.to_json()
    out = bundle_mechanism(i)
    assert outcome_from_json(out.to_json(), 2) == out
    with pytest.raises(SchemaError):
        instance_from_json({"m": 2, "v1": {}})
