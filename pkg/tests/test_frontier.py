import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from leakcap import FrontierCurve, frontier_distance, frontier_dominates


def curve(xs, f):
    xs = np.asarray(xs, dtype=float)
    return FrontierCurve(np.stack([xs, f(xs)], axis=1))


QUARTER = np.linspace(0, 1, 101)


def test_dominates_examples():
    a = curve(QUARTER, lambda x: 1 - x**2)
    assert not frontier_dominates(a, a, 0.0)
    up = FrontierCurve(a.points + [0.0, 0.01])
    assert frontier_dominates(up, a, 0.005)
    assert not frontier_dominates(a, up, 0.0)
    assert frontier_distance(a, up) == pytest.approx(0.01, abs=1e-12)


def test_nondominated_filtering():
    c = FrontierCurve([[0, 1], [0.5, 0.5], [0.4, 0.4], [1, 0], [0.5, 0.2]], ["a", "b", "c", "d", "e"])
    assert c.points.tolist() == [[0, 1], [0.5, 0.5], [1, 0]]
    assert c.provenance == ("a", "b", "d")
    with pytest.raises(ValueError):
        FrontierCurve([[-1, 0]])


def test_csv_round_trip():
    c = curve(QUARTER, lambda x: 1 - x)
    text = c.to_csv(["invocation: test"])
    assert text.startswith("# invocation: test\n")
    back = FrontierCurve.from_csv(text)
    np.testing.assert_allclose(back.points, c.points, atol=1e-10)


def test_envelope_is_concave_and_covering():
    c = FrontierCurve([[0, 1], [0.2, 0.5], [0.6, 0.45], [1, 0]])
    e = c.envelope()
    # the envelope is a polyline through hull vertices: compare by interpolation
    assert np.all(np.interp(c.r1, e.r1, e.r2) >= c.r2 - 1e-12)
    assert e.points.tolist() == [[0, 1], [0.6, 0.45], [1, 0]]
    slopes = np.diff(e.r2) / np.diff(e.r1)
    assert np.all(np.diff(slopes) <= 1e-12)


def test_staircase_and_swap():
    c = FrontierCurve([[0, 1], [0.5, 0.5], [1, 0]])
    np.testing.assert_allclose(c.staircase([0, 0.3, 0.5, 0.9, 1.1]), [1, 0.5, 0.5, 0, -np.inf])
    assert c.swapped().points.tolist() == [[0, 1], [0.5, 0.5], [1, 0]]


pts = st.lists(st.tuples(st.floats(0, 2), st.floats(0, 2)), min_size=1, max_size=30)


@settings(max_examples=200, deadline=None)
@given(pts)
def test_frontier_invariants(p):
    c = FrontierCurve(p)
    assert np.all(np.diff(c.r1) > 0)
    assert np.all(np.diff(c.r2) < 0)
    # every input point is covered by the staircase
    assert np.all(c.covers(np.array(p)))


@settings(max_examples=150, deadline=None)
@given(pts, pts)
def test_distance_symmetric_and_zero_on_self(p, q):
    a, b = FrontierCurve(p), FrontierCurve(q)
    assert frontier_distance(a, a) == 0.0
    assert frontier_distance(a, b) == pytest.approx(frontier_distance(b, a))
    if frontier_dominates(a, b, 0.0):
        assert np.all(a.covers(b.points))


@settings(max_examples=150, deadline=None)
@given(pts, st.floats(0.001, 0.5))
def test_shift_dominates(p, d):
    a = FrontierCurve(p)
    up = FrontierCurve(a.points + d)
    assert frontier_dominates(up, a, d / 2)
    assert frontier_distance(up, a) == pytest.approx(d, abs=1e-9)


def test_near_tie_in_r1_keeps_the_larger_r2():
    c = FrontierCurve([(0.0, 1.0), (2.220446049250313e-16, 0.0)], ["a", "b"])
    assert c.provenance == ("a",)
    assert np.all(c.covers(np.array([[0.0, 1.0], [2.2e-16, 0.0]])))
