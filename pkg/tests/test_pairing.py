import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noma_pairlab import (
    FeasibilityError,
    PairPlan,
    SplitPolicy,
    UserChannel,
    alpha_lower_positivity,
    alpha_upper,
    evaluate_plan,
    msd,
    oma_plan,
    oma_rate,
    pair_aup,
    pair_near_far,
    pair_ucgd,
    run_algorithm,
    select_alpha,
    split_groups,
)
from noma_pairlab.errors import ConfigError
from noma_pairlab.pairing import aup

from oracles import log_rates, oma, pairable_closed_form

MID = SplitPolicy("midpoint")


def users_from(gammas, shuffle_seed=None):
    users = [UserChannel(f"U{i + 1}", g) for i, g in enumerate(gammas)]
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(users)
    return users


def ids(seq):
    return [u.user_id for u in seq]


# Pairing-case fixtures (linear SINR, ascending so U1 is weakest)
CASE1 = [0.5, 1.0, 1.5, 2.0, 10.0, 12.0, 14.0, 16.0]
CASE2 = [0.5, 0.8, 1.0, 2.0, 3.0, 10.0, 12.0, 14.0]
CASE3 = [0.5, 0.8, 1.0, 20.0, 21.0, 22.0, 23.0, 24.0]


def ok(g, w, s):
    return pairable_closed_form(g[s - 1], g[w - 1])


def test_fixture_msd_patterns():
    g = CASE1
    assert all(ok(g, w, s) for w, s in [(4, 5), (3, 6), (2, 7), (1, 8)])
    g = CASE2
    assert not ok(g, 4, 5) and ok(g, 4, 6)
    assert all(ok(g, w, s) for w, s in [(3, 5), (2, 7), (1, 8)])
    g = CASE3
    assert not any(ok(g, 4, s) for s in (5, 6, 7, 8))
    assert all(ok(g, w, s) for w, s in [(3, 6), (2, 7), (1, 8)])
    # U3 could take U5, but that would strand U8
    assert ok(g, 3, 5)


def test_split_groups():
    g1, g2, med = split_groups([UserChannel(i, float(i)) for i in range(1, 9)])
    assert ids(g1) == [4, 3, 2, 1] and ids(g2) == [5, 6, 7, 8] and med is None
    g1, g2, med = split_groups([UserChannel("b", 2.0), UserChannel("a", 1.0)])
    assert ids(g1) == ["a"] and ids(g2) == ["b"]
    g1, g2, med = split_groups([UserChannel(i, float(i)) for i in range(7, 0, -1)])
    assert med.user_id == 4 and ids(g1) == [3, 2, 1] and ids(g2) == [5, 6, 7]


def test_split_groups_tie_break():
    us = [UserChannel(i, 1.0) for i in (3, 1, 2, 0)]
    g1, g2, _ = split_groups(us)
    assert ids(g1) == [1, 0] and ids(g2) == [2, 3]


@pytest.mark.parametrize("seed", [None, 1, 2])
def test_aup_case1(seed):
    plan = aup(users_from(CASE1, seed), policy=MID)
    assert plan.pair_ids() == [("U4", "U5"), ("U3", "U6"), ("U2", "U7"), ("U1", "U8")]
    assert plan.singles == []


def test_aup_case2():
    plan = aup(users_from(CASE2, 3), policy=MID)
    assert sorted(plan.pair_ids()) == sorted([("U4", "U6"), ("U3", "U5"), ("U2", "U7"), ("U1", "U8")])
    assert plan.singles == []


def test_aup_case3():
    plan = aup(users_from(CASE3, 4), policy=MID)
    assert sorted(plan.pair_ids()) == sorted([("U3", "U6"), ("U2", "U7"), ("U1", "U8")])
    assert sorted(plan.single_ids()) == ["U4", "U5"]


def test_aup_nothing_pairable():
    users = users_from([5.0, 5.0, 5.0, 5.0])
    plan = aup(users)
    assert plan.pairs == [] and plan.covers(users)


def test_pair_aup_direct_stacks():
    g1, g2, _ = split_groups(users_from(CASE1))
    plan = pair_aup(g1, g2, 0.0, MID)
    assert len(plan.pairs) == 4


def test_near_far():
    us = [UserChannel(i, float(i)) for i in range(1, 9)]
    assert sorted(pair_near_far(us).pair_ids()) == [(1, 8), (2, 7), (3, 6), (4, 5)]
    assert pair_near_far(us[:2]).pair_ids() == [(1, 2)]
    p = pair_near_far(us[:7])
    assert sorted(p.pair_ids()) == [(1, 7), (2, 6), (3, 5)] and p.single_ids() == [4]


def test_ucgd():
    us = [UserChannel(i, float(i)) for i in range(1, 9)]
    assert pair_ucgd(us).pair_ids() == [(1, 5), (2, 6), (3, 7), (4, 8)]
    assert pair_ucgd(us[:4]).pair_ids() == [(1, 3), (2, 4)]
    p = pair_ucgd(us[:7])
    assert p.pair_ids() == [(1, 5), (2, 6), (3, 7)] and p.single_ids() == [4]


def test_baseline_clamp_on_empty_interval():
    us = [UserChannel("w", 4.0), UserChannel("s", 4.5)]
    p = pair_near_far(us, 0.1, MID).pairs[0]
    assert p.split.alpha_s == pytest.approx(alpha_upper(4.0) * (1 - 1e-6))


def test_select_alpha_midpoint():
    a = select_alpha(11.17, 2.945, 0.0, MID).alpha_s
    assert a == pytest.approx((alpha_lower_positivity(11.17, 2.945) + alpha_upper(2.945)) / 2)
    assert a == pytest.approx(0.293, abs=1e-3)


def test_select_alpha_infeasible():
    with pytest.raises(FeasibilityError):
        select_alpha(3.0, 3.0, 0.0, MID)


def test_select_alpha_grid_two_points():
    gs, gw, beta = 11.17, 2.945, 0.05
    lo, hi = alpha_lower_positivity(gs, gw), alpha_upper(gw)
    a1, a2 = lo + (hi - lo) / 3, lo + 2 * (hi - lo) / 3
    best = max((a1, a2), key=lambda a: sum(log_rates(gs, gw, a, beta)))
    assert select_alpha(gs, gw, beta, SplitPolicy("grid-argmax", 2)).alpha_s == pytest.approx(best)


def test_split_policy_parse():
    assert SplitPolicy.parse("midpoint") == MID
    assert SplitPolicy.parse("grid:7") == SplitPolicy("grid-argmax", 7)
    for bad in ("grid:1", "grid:x", "best"):
        with pytest.raises(ConfigError):
            SplitPolicy.parse(bad)


def test_evaluate_all_singles():
    us = users_from([0.3, 2.0, 9.0])
    rep = evaluate_plan(oma_plan(us))
    assert rep.total == pytest.approx(sum(oma(u.gamma) for u in us))
    assert rep.total == rep.total_oma


def test_evaluate_one_pair():
    from noma_pairlab.pairing import Pair
    from noma_pairlab import PowerSplit

    w, s = UserChannel("w", 2.945), UserChannel("s", 11.17)
    plan = PairPlan([Pair(w, s, PowerSplit(0.32))], [])
    rep = evaluate_plan(plan, 0.02)
    assert rep.rates["s"] == pytest.approx(2.0366843629836193, rel=1e-12)
    assert rep.rates["w"] == pytest.approx(1.0221849735325012, rel=1e-12)
    rep = evaluate_plan(plan, 0.2)
    assert rep.rates["s"] < rep.oma_rates["s"] == pytest.approx(oma_rate(11.17))


def test_evaluate_dr():
    us = users_from([1.0, 1000.0])
    rep = evaluate_plan(oma_plan(us), rate_model="dr")
    assert rep.rates["U2"] == pytest.approx(5.5547 / 2)
    with pytest.raises(ConfigError):
        evaluate_plan(oma_plan(us), rate_model="shannon")


def test_run_algorithm_unknown():
    with pytest.raises(ConfigError):
        run_algorithm("greedy", [])


# ---- properties

db_lists = st.lists(st.floats(-10, 30), min_size=0, max_size=16)


def channels(dbs):
    return [UserChannel.from_db(i, d) for i, d in enumerate(dbs)]


@settings(max_examples=150, deadline=None)
@given(db_lists, st.sampled_from(["aup", "nf", "ucgd", "oma"]), st.floats(0, 1))
def test_partition(dbs, alg, beta):
    us = channels(dbs)
    plan = run_algorithm(alg, us, beta, MID)
    assert plan.covers(us)
    assert len(plan.users()) == len(us)


@settings(max_examples=150, deadline=None)
@given(db_lists, st.floats(0, 1))
def test_aup_soundness(dbs, beta):
    plan = aup(channels(dbs), beta)
    for p in plan.pairs:
        assert p.strong.gamma > p.weak.gamma
        assert p.strong.gamma - p.weak.gamma > msd(p.strong.gamma, p.weak.gamma)
        assert alpha_lower_positivity(p.strong.gamma, p.weak.gamma) < p.split.alpha_s < alpha_upper(p.weak.gamma)


@settings(max_examples=150, deadline=None)
@given(db_lists)
def test_aup_rate_guarantee_perfect_sic(dbs):
    plan = aup(channels(dbs), 0.0, MID)
    rep = evaluate_plan(plan, 0.0)
    for p in plan.pairs:
        for u in (p.weak, p.strong):
            assert rep.rates[u.user_id] > rep.oma_rates[u.user_id]


@settings(max_examples=60, deadline=None)
@given(db_lists, st.sampled_from(["aup", "nf", "ucgd"]))
def test_determinism(dbs, alg):
    a = run_algorithm(alg, channels(dbs), 0.1)
    b = run_algorithm(alg, channels(dbs), 0.1)
    assert a == b
