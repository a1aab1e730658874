import math

import numpy as np
import pytest

from leakcap import (
    INF,
    BlackwellParams,
    JointPmf,
    LeakagePair,
    SearchBudget,
    blackwell,
    bwc_frontier,
    bwc_lstar,
    bwc_polytope,
    bwc_saturation_threshold,
    bwc_shapes,
    bwc_sumrate_curve,
    conditional_mutual_information,
    frontier_distance,
    frontier_dominates,
    induce_joint,
    named_region_polytope,
    union_frontier,
)
from leakcap.blackwell import lstar_closed_form_check
from leakcap.polytope import direction_fan, rows_max_deviation

HB_THIRD = 0.918296
LOG2_3 = 1.584963


def random_params(rng, n):
    out = []
    for _ in range(n):
        a, b, _ = rng.dirichlet(np.ones(3))
        out.append(BlackwellParams(a, b))
    return out


def test_params_validation():
    with pytest.raises(ValueError):
        BlackwellParams(0.7, 0.5)
    with pytest.raises(ValueError):
        BlackwellParams(-0.1, 0.5)
    assert BlackwellParams(0.5, 0.5).px.tolist() == [0.5, 0.5, 0.0]


def test_polytope_examples():
    p = BlackwellParams(1 / 3, 1 / 3)
    free = bwc_polytope(p, LeakagePair(INF, INF))
    assert free.rhs("r1") == pytest.approx(HB_THIRD, abs=1e-6)
    assert free.rhs("r2") == pytest.approx(HB_THIRD, abs=1e-6)
    assert free.rhs("sum") == pytest.approx(LOG2_3, abs=1e-6)
    assert free.support_value([1, 1]) == pytest.approx(math.log2(3), abs=1e-12)
    tight = bwc_polytope(p, LeakagePair(0, 0))
    assert tight.support_value([1, 0]) == pytest.approx(0.666667, abs=1e-6)
    assert tight.support_value([0, 1]) == pytest.approx(0.666667, abs=1e-6)
    assert bwc_polytope(BlackwellParams(0.4, 0.0), LeakagePair(INF, INF)).support_value([1, 0]) == 0.0


def test_closed_form_matches_generic_region():
    rng = np.random.default_rng(31)
    c = blackwell()
    for p in random_params(rng, 200):
        L = LeakagePair(*(float(rng.choice([0.0, INF, rng.uniform(0, 1)])) for _ in range(2)))
        closed = bwc_polytope(p, L)
        generic = named_region_polytope("det", JointPmf([("X", 3)], p.px), c, L)
        assert set(closed.labels) == set(generic.labels)
        assert rows_max_deviation(closed, generic) <= 1e-9


def test_lstar_matches_joint_summation():
    rng = np.random.default_rng(32)
    c = blackwell()
    for p in random_params(rng, 200):
        j = induce_joint(JointPmf([("X", 3)], p.px), c)
        assert bwc_lstar(p) == pytest.approx(conditional_mutual_information(j, ["Y1"], ["Y2"]), abs=1e-9)
        assert bwc_lstar(p) == pytest.approx(lstar_closed_form_check(p.alpha, p.beta), abs=1e-9)


def test_lstar_examples():
    assert bwc_lstar(BlackwellParams(1 / 3, 1 / 3)) == pytest.approx(0.251630, abs=1e-6)
    assert bwc_lstar(BlackwellParams(0.4, 0.0)) == 0.0
    assert bwc_lstar(BlackwellParams(0.0, 0.4)) == pytest.approx(0.0, abs=1e-12)


def test_shapes():
    grid = np.stack(np.meshgrid(np.linspace(0, 1, 41), np.linspace(0, 1, 41)), -1).reshape(-1, 2)
    for a, b in [(1 / 3, 1 / 3), (0.2, 0.5), (0.5, 0.1)]:
        s = bwc_shapes(BlackwellParams(a, b))
        # the doubly secret region is the intersection of the single-secrecy ones
        for r in grid:
            inter = s["m1_secret"].contains(r) and s["m2_secret"].contains(r)
            assert s["both_secret"].contains(r) == inter
        for k in ("both_secret", "m1_secret", "m2_secret"):
            assert all(s["no_secrecy"].contains(v) for v in s[k].vertices())
    sym = bwc_shapes(BlackwellParams(0.3, 0.3))
    for w in direction_fan(13, 2):
        assert sym["no_secrecy"].support_value(w) == pytest.approx(sym["no_secrecy"].support_value(w[::-1]))
        assert sym["m1_secret"].support_value(w) == pytest.approx(sym["m2_secret"].support_value(w[::-1]))


def test_frontier_intercepts():
    f = bwc_frontier(LeakagePair(INF, INF), resolution=5e-3)
    assert f.max_r1 == pytest.approx(1.0, abs=1e-9)
    assert f.max_r2 == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        bwc_frontier(LeakagePair(0, 0), resolution=0.05)


def test_symmetric_frontier_is_swap_invariant():
    # the staircase is sampled along r1 only, so the swapped copy is coarse
    # where the curve is steep; the mismatch shrinks linearly with the grid
    for L in (0.0, 0.1):
        for res in (5e-3, 1e-3):
            f = bwc_frontier(LeakagePair(L, L), resolution=res)
            assert frontier_distance(f, f.swapped()) <= 2 * res


def test_frontier_grows_with_leakage():
    f0 = bwc_frontier(LeakagePair(0, 0), resolution=5e-3)
    f1 = bwc_frontier(LeakagePair(0.4, 0.4), resolution=5e-3)
    assert frontier_dominates(f1, f0, 1e-3)


def test_secret_m1_frontier_matches_region_union():
    c = blackwell()
    closed = bwc_frontier(LeakagePair(0, INF), resolution=2e-3)
    union = union_frontier("m1secret", c, LeakagePair(INF, INF), SearchBudget(4, 200, 20, 0))
    # sampled union points never beat the closed form by more than its grid spacing
    assert union.distance_to(closed).max() <= 3e-3
    assert union.max_r1 == pytest.approx(closed.max_r1, abs=1e-6)
    assert union.max_r2 == pytest.approx(closed.max_r2, abs=1e-6)


def test_sumrate_curve_shape():
    grid = np.round(np.arange(0.0, 0.2, 0.01), 6)
    s = bwc_sumrate_curve(grid, resolution=1e-3)
    assert np.all(np.diff(s.sum_rates) >= -1e-9)
    low = grid <= 0.07
    slope = np.diff(s.sum_rates[low]) / np.diff(grid[low])
    np.testing.assert_allclose(slope, 2.0, atol=1e-6)
    assert s.plateau == pytest.approx(math.log2(3), abs=1e-4)
    assert s.sum_rates[-1] == pytest.approx(s.plateau, abs=1e-5)
    with pytest.raises(ValueError):
        bwc_sumrate_curve([0.2, 0.1])


def test_saturation_threshold_preconditions():
    with pytest.raises(ValueError):
        bwc_saturation_threshold(0.1, resolution=1e-2)
    with pytest.raises(ValueError):
        bwc_saturation_threshold(INF)
    with pytest.raises(ValueError):
        bwc_saturation_threshold(-0.1)
