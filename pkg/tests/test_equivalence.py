import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from leakcap import INF, JointPmf, LeakagePair, LiftReport, blackwell, deterministic_reduction_holds
from leakcap import confidential_lift, named_region_polytope, reduction_suite, secret_pair_lift
from leakcap.channel import random_channel
from leakcap.equivalence import (
    CheckResult,
    SuiteReport,
    deterministic_check,
    lift_lambda,
    lift_suite_confidential,
    lift_suite_secret_pair,
    sd_substitution_battery,
)


def test_lift_lambda_examples():
    assert lift_lambda(0.7, 0.0) == 1.0
    assert lift_lambda(0.7, 0.7) == 0.0
    assert lift_lambda(0.8, 0.4) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        lift_lambda(0.0, 0.3)
    with pytest.raises(ValueError):
        lift_lambda(0.5, 0.9)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 5.0), st.floats(0, 1), st.floats(0, 1))
def test_lift_lambda_decreases_with_slack(gap, a, b):
    g1, g2 = sorted((a * gap, b * gap))
    l1, l2 = lift_lambda(gap, g1), lift_lambda(gap, g2)
    assert 0.0 <= l2 <= l1 <= 1.0


def test_lift_report_rejects_bad_weight():
    d = JointPmf([("X", 1)], [1.0])
    with pytest.raises(ValueError):
        LiftReport(1.5, 0.0, 0.0, (0, 0), d, True, 0.0, 0.0, "ck")


def _wvx(rng, c):
    for _ in range(500):
        dist = JointPmf([("W", 2), ("V", 2), ("X", 3)], rng.dirichlet(np.ones(12)).reshape(2, 2, 3))
        src = named_region_polytope("m2secret_alt", dist, c)
        if not src.is_empty:
            return dist, src
    raise AssertionError("no nonempty source region found")


def test_secret_pair_lift_on_vertices():
    c = blackwell()
    rng = np.random.default_rng(21)
    for _ in range(10):
        dist, src = _wvx(rng, c)
        for v in src.vertices():
            rep = secret_pair_lift(dist, v, c)
            assert rep.member and rep.margin >= -1e-9
            assert rep.markov_dev <= 1e-9
            assert 0 <= rep.lam <= 1


def test_zero_slack_lift_keeps_the_common_variable():
    c = blackwell()
    dist, src = _wvx(np.random.default_rng(22), c)
    # the point on the secrecy bound has no slack
    top = max(src.vertices(), key=lambda v: v[1])
    rep = secret_pair_lift(dist, top, c)
    assert rep.gamma == pytest.approx(0.0, abs=1e-12) and rep.lam == 1.0
    assert rep.lifted_dist.size_of("W") == dist.size_of("W")


def test_lift_rejects_points_outside_the_source():
    c = blackwell()
    dist, src = _wvx(np.random.default_rng(23), c)
    with pytest.raises(ValueError, match="outside"):
        secret_pair_lift(dist, [5.0, 5.0], c)


def test_confidential_lift_on_random_channels():
    rng = np.random.default_rng(24)
    done = 0
    while done < 10:
        c = random_channel(rng, 3, 2, 2)
        pwu = rng.dirichlet(np.ones(4)).reshape(2, 2)
        pxu = rng.dirichlet(np.ones(3), size=2)
        dist = JointPmf([("W", 2), ("U", 2), ("X", 3)], pwu[:, :, None] * pxu[None])
        src = named_region_polytope("dm0", dist, c)
        if src.is_empty:
            continue
        for v in src.vertices():
            rep = confidential_lift(dist, v, c)
            assert rep.member and rep.markov_dev <= 1e-9
        done += 1


def test_lift_suites_pass():
    for res in (lift_suite_secret_pair(30, seed=4), lift_suite_confidential(30, seed=4)):
        assert res.passed, res.detail
        assert res.detail.startswith("30 lifts")


def test_deterministic_reduction_examples():
    c = blackwell()
    assert deterministic_reduction_holds(c, [1 / 3, 1 / 3, 1 / 3], LeakagePair(0, 0))
    assert deterministic_reduction_holds(c, np.full(3, 1 / 3), LeakagePair(INF, INF))
    assert deterministic_reduction_holds(c, [0.2, 0.5, 0.3], LeakagePair(0.1, 0.4))
    noisy = random_channel(np.random.default_rng(1), 3, 2, 2)
    with pytest.raises(ValueError):
        deterministic_check(noisy, np.full(3, 1 / 3), LeakagePair(0, 0))


def test_sd_substitution_battery_passes():
    res = sd_substitution_battery(40, seed=2)
    assert res.passed, res.detail


def test_reduction_suite_small_run():
    rep = reduction_suite(trials=4, seed=1, lift_trials=8)
    assert rep.passed, rep.failing
    names = {ch.name for ch in rep.checks}
    assert {"lift_secret_pair", "lift_confidential", "deterministic_reduction"} <= names


def test_suite_report_serialises_infinity():
    rep = SuiteReport([CheckResult("a", 1, math.inf, False, "boom"), CheckResult("b", 2, 0.0, True)], seed=3)
    d = json.loads(rep.to_json())
    assert d["checks"][0]["max_deviation"] == "inf"
    assert d["passed"] is False and rep.failing == ["a"]
