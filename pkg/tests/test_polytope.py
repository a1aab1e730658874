import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from leakcap import RatePolytope
from leakcap.polytope import UnboundedDirection, direction_fan, rows_max_deviation


def pentagon(a=0.9, b=0.8, s=1.2):
    return RatePolytope(("R1", "R2"), [[1, 0], [0, 1], [1, 1]], [a, b, s], ["r1", "r2", "sum"])


def test_pentagon_vertices():
    V = pentagon().vertices()
    want = {(0, 0), (0.9, 0), (0, 0.8), (0.9, 0.3), (0.4, 0.8)}
    assert {tuple(np.round(v, 12)) for v in V} == want


def test_zero_polytope_support():
    z = RatePolytope(("R0", "R1", "R2"), [[1, 1, 1]], [0.0])
    assert z.support_value([1, 0, 0]) == 0.0
    np.testing.assert_allclose(z.vertices(), [[0, 0, 0]])


def test_support_homogeneous():
    p = pentagon()
    assert p.support_value([2, 2]) == pytest.approx(2 * p.support_value([1, 1]))
    assert p.support_value([1, 1]) == pytest.approx(1.2)


def test_empty_polytope():
    p = RatePolytope(("R1", "R2"), [[1, 0]], [-0.1])
    assert p.is_empty
    assert p.support_value([1, 1]) == -math.inf
    assert not p.contains([0, 0])


def test_unbounded_direction_raises():
    p = RatePolytope(("R1", "R2"), [[1, 0]], [1.0])
    with pytest.raises(UnboundedDirection):
        p.support_value([0, 1])
    assert p.support_value([1, 0]) == pytest.approx(1.0)


def test_contains_and_margin():
    p = pentagon()
    assert p.contains([0, 0])
    assert p.contains([0.4, 0.8])
    assert not p.contains([0.5, 0.8])
    assert p.margin([0.4, 0.8]) == pytest.approx(0.0, abs=1e-12)
    assert p.contains({"R1": 0.1})


def test_section_and_rows():
    cube = RatePolytope(("R0", "R1", "R2"), [[1, 1, 0], [1, 0, 1]], [1.0, 0.5], ["a", "b"])
    s = cube.section({"R0": 0.2})
    assert s.axes == ("R1", "R2")
    assert s.support_value([1, 0]) == pytest.approx(0.8)
    assert s.support_value([0, 1]) == pytest.approx(0.3)
    assert cube.section({"R0": 0.7}).is_empty
    assert rows_max_deviation(cube, cube) == 0.0


def test_direction_fan_shapes():
    f2 = direction_fan(26, 2)
    assert f2.shape == (26, 2) and np.all(f2 >= 0)
    np.testing.assert_allclose(np.linalg.norm(f2, axis=1), 1.0)
    f3 = direction_fan(26, 3)
    assert f3.shape == (26, 3) and np.all(f3 >= 0)


def test_json_export():
    d = pentagon().to_dict()
    assert d["axes"] == ["R1", "R2"] and not d["empty"]
    assert {h["label"] for h in d["halfspaces"]} >= {"r1", "r2", "sum"}


caps = st.floats(0.0, 2.0)


@settings(max_examples=150, deadline=None)
@given(caps, caps, caps, st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_support_dominates_every_vertex(a, b, s, w1, w2):
    p = pentagon(a, b, s)
    V = p.vertices()
    w = np.array([w1, w2])
    h = p.support_value(w)
    assert np.all(V @ w <= h + 1e-12)
    assert all(p.contains(v) for v in V)


@settings(max_examples=100, deadline=None)
@given(caps, caps, caps, st.floats(0, 1), st.floats(0, 1))
def test_support_matches_lp(a, b, s, w1, w2):
    from scipy.optimize import linprog

    p = pentagon(a, b, s)
    res = linprog([-w1, -w2], A_ub=p.A, b_ub=p.b, bounds=[(None, None)] * 2, method="highs")
    # the LP solver works to a feasibility tolerance of about 1e-7
    assert p.support_value([w1, w2]) == pytest.approx(-res.fun, abs=1e-6)
