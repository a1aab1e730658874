import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from leakcap.fme import (
    AUX_ORDER,
    ONE,
    I,
    Inequality,
    IneqSystem,
    L,
    ParseError,
    achievability_system,
    canonical_equal,
    eliminate_all,
    fme_eliminate,
    inner_bound_reference,
    parse_inequality,
    parse_system,
    prune_redundant,
    render_system,
    substitute,
)
from leakcap.fme.battery import fme_membership, random_system, soundness_battery, witness_membership
from leakcap.fme.ops import prune_implied
from leakcap.fme.system import render_inequality

# ------------------------------------------------------------------ parsing


def test_parse_examples():
    q = parse_inequality("R1 + R2 <= I(U0,U1;Y1) + I(U2;Y2|U0) - I(U1;U2|U0)")
    assert q.variables == {"R1", "R2"} and not q.strict
    q = parse_inequality("Rp1 + Rp2 > I(U1;U2|U0)")
    assert q.strict
    # stored as  -Rp1 - Rp2 < -I(...)
    assert q.coef("Rp1") == -1 and q.rhs_dict()[I(["U1"], ["U2"], ["U0"])] == -1
    a = parse_inequality("R1 <= I(U2;U1|U0)")
    b = parse_inequality("R1 <= I(U1;U2|U0)")
    assert a == b


@pytest.mark.parametrize("text, col", [
    ("R1 <= I(A;", 11),
    ("R1 + <= I(A;B)", None),
    ("R1 = I(A;B)", 4),
    ("R1 I(A;B)", None),
    ("R1 <= I(A;B) <= 2", None),
])
def test_parse_errors_report_position(text, col):
    with pytest.raises(ParseError) as ei:
        parse_inequality(text, line=3)
    assert ei.value.line == 3
    if col is not None:
        assert ei.value.col == col


def test_parse_system_reads_variables_and_labels():
    s = parse_system("variables: x, r\n# comment\nx <= I(A;B)  # cap\n0 <= x\n")
    assert s.variables == ("x", "r")
    assert s.inequalities[0].label == "cap"
    with pytest.raises(ParseError) as ei:
        parse_system("variables: x\nx <= I(A;B)\nx <=\n")
    assert ei.value.line == 3


names = st.sampled_from(["R0", "R1", "R2", "Rp1", "x"])
syms = st.sampled_from([I(["U1"], ["U2"], ["U0"]), I(["U0", "U1"], ["Y1"]), L(1), L(2), ONE])
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda f: f != 0)


@st.composite
def inequalities(draw):
    lhs = draw(st.dictionaries(names, fracs, min_size=1, max_size=3))
    rhs = draw(st.dictionaries(syms, fracs, max_size=3))
    return Inequality.build(lhs, rhs, draw(st.booleans()))


@settings(max_examples=200, deadline=None)
@given(inequalities())
def test_render_parse_round_trip(q):
    assert parse_inequality(render_inequality(q)) == q


@settings(max_examples=50, deadline=None)
@given(st.lists(inequalities(), min_size=1, max_size=6))
def test_system_round_trip(rows):
    s = IneqSystem([], rows)
    back = parse_system(render_system(s))
    assert back.inequalities == s.inequalities
    assert back.variables == s.variables


# -------------------------------------------------------------- elimination

A, B = I(["A"], ["B"]), I(["C"], ["D"])


def test_toy_elimination():
    s = parse_system("x <= I(A;B)\n0 <= x\nr - x <= I(C;D)\n")
    out = fme_eliminate(s, "x")
    assert set(out.variables) == {"r"}
    assert set(out.inequalities) == {Inequality.build({"r": 1}, {A: 1, B: 1}), Inequality.build({}, {A: 1})}


def test_eliminating_absent_variable_is_identity():
    s = parse_system("variables: x, y\nx <= I(A;B)\n")
    out = fme_eliminate(s, "y")
    assert out.inequalities == s.inequalities


@settings(max_examples=100, deadline=None)
@given(st.booleans(), st.booleans(), fracs, fracs)
def test_child_strict_iff_a_parent_strict(s1, s2, a, b):
    up = Inequality.build({"x": abs(a), "r": 1}, {ONE: 1}, s1)
    lo = Inequality.build({"x": -abs(b)}, {ONE: 2}, s2)
    out = fme_eliminate(IneqSystem(["x", "r"], [up, lo]), "x")
    assert len(out) == 1
    assert out.inequalities[0].strict == (s1 or s2)


def test_zero_strict_witness_survives():
    s = parse_system("x < 0\n0 <= x\n")
    out = fme_eliminate(s, "x")
    assert len(out) == 1 and out.inequalities[0].strict and not out.inequalities[0].lhs


def test_prune_examples():
    q = parse_inequality("R1 <= I(A;B)")
    assert len(prune_redundant(IneqSystem([], [q, q]))) == 1
    dom = parse_system("R1 <= I(A;B)\nR1 <= I(A;B) + L1\n")
    out = prune_redundant(dom)
    assert len(out) == 1 and out.inequalities[0] == q
    taut = IneqSystem(["R1"], [parse_inequality("0 <= I(A;B)")])
    assert len(prune_redundant(taut)) == 0


def test_canonical_equal_examples():
    ref = inner_bound_reference()
    rows = list(ref.inequalities)
    perm = IneqSystem(ref.variables, rows[::-1])
    assert canonical_equal(ref, perm)
    scaled = IneqSystem(ref.variables, [rows[0].scaled(3)] + rows[1:])
    assert canonical_equal(ref, scaled)
    # leakage-free rows only: not the finite-leakage system
    marton = IneqSystem(ref.variables, [q for q in rows if L(1) not in q.rhs_dict() and L(2) not in q.rhs_dict()])
    assert not canonical_equal(marton, ref)


def test_canonical_equal_is_an_equivalence():
    ref = inner_bound_reference()
    rows = list(ref.inequalities)
    rng = np.random.default_rng(0)
    variants = [IneqSystem(ref.variables, [rows[i].scaled(int(rng.integers(1, 4)))
                                           for i in rng.permutation(len(rows))]) for _ in range(4)]
    other = IneqSystem(ref.variables, rows[1:])
    pool = variants + [other]
    for a in pool:
        assert canonical_equal(a, a)
        for b in pool:
            assert canonical_equal(a, b) == canonical_equal(b, a)
            for c in pool:
                if canonical_equal(a, b) and canonical_equal(b, c):
                    assert canonical_equal(a, c)


def test_achievability_system_contents():
    s = achievability_system()
    assert set(s.variables) == {"R0", "R1", "R2", "R10", "R20", "R11", "R22", "Rp1", "Rp2", "Rt1", "Rt2"}
    assert parse_inequality("Rp1 + Rp2 > I(U1;U2|U0)") in s.inequalities
    assert parse_inequality("R10 <= L1") in s.inequalities


def test_derivation_matches_reference():
    derived = prune_implied(eliminate_all(achievability_system(), AUX_ORDER))
    assert canonical_equal(derived, inner_bound_reference())
    assert set(derived.variables) == {"R0", "R1", "R2"}


def test_substitute_examples():
    ref = inner_bound_reference()
    zeros = {s: 0.0 for s in ref.symbols if s != ONE}
    p = substitute(ref, zeros, axes=("R0", "R1", "R2"))
    np.testing.assert_allclose(p.vertices(), [[0, 0, 0]], atol=1e-12)
    vals = {s: (math.inf if s.is_leakage else 1.0) for s in ref.symbols if s != ONE}
    p = substitute(ref, vals, axes=("R0", "R1", "R2"))
    labels = {lab for lab in p.labels if not str(lab).startswith("nonneg")}
    assert labels == {"r01", "r02", "sum_common_y1", "sum_common_y2", "double_common", "codebook_condition"}
    with pytest.raises((KeyError, ValueError)):
        substitute(ref, {}, axes=("R0", "R1", "R2"))


# ------------------------------------------------------- projection soundness


def interval_oracle(rows, keep, var, pt):
    """Brute force: is the feasible interval of ``var`` at ``pt`` nonempty?"""
    lo, lo_strict, hi, hi_strict = -math.inf, False, math.inf, False
    for q in rows:
        a = float(q.coef(var))
        rest = float(q.rhs_dict().get(ONE, 0)) - sum(float(q.coef(v)) * x for v, x in zip(keep, pt))
        if a == 0:
            if rest < -1e-9 or (q.strict and rest <= 1e-9):
                return False
        elif a > 0:
            b = rest / a
            if b < hi - 1e-12 or (abs(b - hi) <= 1e-12 and q.strict):
                hi, hi_strict = b, q.strict or (abs(b - hi) <= 1e-12 and hi_strict)
        else:
            b = rest / a
            if b > lo + 1e-12 or (abs(b - lo) <= 1e-12 and q.strict):
                lo, lo_strict = b, q.strict or (abs(b - lo) <= 1e-12 and lo_strict)
    if lo_strict or hi_strict:
        return lo < hi - 1e-9
    return lo <= hi + 1e-9


def test_single_variable_projection_matches_interval_oracle():
    bad = 0
    for t in range(200):
        rng = np.random.default_rng([77, t])
        n_keep = int(rng.integers(1, 6))
        sys, keep, elim = random_system(rng, n_keep, 1, int(rng.integers(2, 11)))
        proj = fme_eliminate(sys, elim[0])
        pts = rng.uniform(-3, 3, size=(200, n_keep))
        got = fme_membership(proj, keep, pts)
        for p, g in zip(pts, got):
            want = interval_oracle(sys.inequalities, keep, elim[0], p)
            bad += bool(g) != want
    assert bad == 0


def test_multi_variable_battery_small():
    res = soundness_battery(n_systems=30, n_points=200, seed=3)
    assert res.passed, res.examples


def test_battery_detects_a_dropped_row():
    # removing a row from the projection must be noticed on some system
    caught = 0
    for t in range(40):
        rng = np.random.default_rng([9, t])
        sys, keep, elim = random_system(rng, 2, 2, 6)
        proj = prune_implied(eliminate_all(sys, elim))
        if len(proj) < 1:
            continue
        cut = proj.with_inequalities(proj.inequalities[1:])
        pts = rng.uniform(-3, 3, size=(300, 2))
        if np.any(fme_membership(cut, keep, pts) != witness_membership(sys, keep, elim, pts)):
            caught += 1
    assert caught > 5


def test_rationals_stay_exact():
    s = parse_system("3*x <= 1\n-x <= -1/3\n")
    out = fme_eliminate(s, "x")
    assert all(isinstance(v, Fraction) for q in out for _, v in q.rhs)
