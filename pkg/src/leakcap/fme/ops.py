"""Fourier-Motzkin elimination, pruning, numeric substitution and comparison."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from fractions import Fraction
from typing import Iterable, Mapping

from .symbols import ONE, InfoSymbol
from .system import Inequality, IneqSystem

# Default elimination order for the coding-scheme system.
AUX_ORDER = ("Rt1", "Rt2", "Rp1", "Rp2", "R11", "R22", "R10", "R20")


# --------------------------------------------------------------- elimination


def _combine(up: Inequality, lo: Inequality, var: str) -> Inequality:
    """Positive combination of an upper (coef > 0) and lower (coef < 0) bound."""
    a = up.coef(var)
    b = -lo.coef(var)
    lhs: dict = defaultdict(Fraction)
    rhs: dict = defaultdict(Fraction)
    for k, v in up.lhs:
        lhs[k] += v * b
    for k, v in lo.lhs:
        lhs[k] += v * a
    for k, v in up.rhs:
        rhs[k] += v * b
    for k, v in lo.rhs:
        rhs[k] += v * a
    lhs.pop(var, None)
    return Inequality.build(lhs, rhs, up.strict or lo.strict).primitive()


def fme_eliminate(sys: IneqSystem, var: str) -> IneqSystem:
    """Project ``var`` out of ``sys``.

    Every upper bound on ``var`` is paired with every lower bound; rows not
    mentioning ``var`` pass through untouched. A child is strict when either
    parent is. No pruning happens here.
    """
    keep, ups, los = [], [], []
    for q in sys.inequalities:
        c = q.coef(var)
        if c > 0:
            ups.append(q)
        elif c < 0:
            los.append(q)
        else:
            keep.append(q)
    out = list(keep)
    for u in ups:
        for lo in los:
            child = _combine(u, lo, var)
            if not child.is_trivial():
                out.append(child)
    variables = [v for v in sys.variables if v != var]
    return IneqSystem(variables, out)


def eliminate_all(sys: IneqSystem, order: Iterable[str], prune: bool = True) -> IneqSystem:
    """Eliminate ``order`` one at a time, pruning after each step by default."""
    for v in order:
        sys = fme_eliminate(sys, v)
        if prune:
            sys = prune_redundant(sys)
    return sys


# ------------------------------------------------------------------- pruning


def entropy_basis(rhs) -> dict:
    """Rewrite a symbol combination over joint entropies ``H(S)``.

    Keys are frozensets of axis names, plus the leakage and unit symbols kept
    as themselves. Two combinations are identical as functions of every joint
    law iff their entropy-basis forms are equal, so chain-rule rewrites such
    as ``I(A,B;C) = I(A;C) + I(B;C|A)`` compare equal here.
    """
    out: dict = defaultdict(Fraction)
    items = rhs.items() if isinstance(rhs, Mapping) else rhs
    for sym, c in items:
        if sym.kind in ("L", "1"):
            out[sym] += c
        elif sym.kind == "H":
            a, cond = sym.groups
            out[frozenset(a + cond)] += c
            if cond:
                out[frozenset(cond)] -= c
        else:
            a, b, cond = sym.groups
            out[frozenset(a + cond)] += c
            out[frozenset(b + cond)] += c
            out[frozenset(a + b + cond)] -= c
            if cond:
                out[frozenset(cond)] -= c
    return {k: v for k, v in out.items() if v != 0}


def _nonneg_combo(rhs: Mapping) -> bool:
    """True when every coefficient is >= 0 (all symbols are nonnegative)."""
    return all(c >= 0 for c in rhs.values())


def _provably_nonneg(diff: Mapping) -> bool:
    if _nonneg_combo(diff):
        return True
    return not entropy_basis(diff)


def _var_normalised(q: Inequality) -> Inequality:
    """Scale so the variable part is a primitive integer vector."""
    coeffs = [v for _, v in q.lhs] or [v for _, v in q.rhs]
    if not coeffs:
        return q
    den = math.lcm(*(c.denominator for c in coeffs))
    num = math.gcd(*(abs(c.numerator) * (den // c.denominator) for c in coeffs))
    return q.scaled(Fraction(den, num))


def _sub(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) - v
    return {k: v for k, v in out.items() if v != 0}


def _constant_only(rhs: Mapping) -> bool:
    return all(s == ONE for s in rhs)


def is_tautology(q: Inequality) -> bool:
    """``0 <= nonnegative combination``.

    Strictness is honoured exactly when the right-hand side is a plain
    number (``0 < 0`` is kept as an infeasibility witness); with information
    symbols present the closure is used and strictness is ignored.
    """
    if q.lhs:
        return False
    rhs = q.rhs_dict()
    if q.strict and _constant_only(rhs):
        return rhs.get(ONE, Fraction(0)) > 0
    return _provably_nonneg(rhs)


def prune_redundant(sys: IneqSystem) -> IneqSystem:
    """Drop duplicates, tautologies and rows dominated by a sibling.

    Row ``a`` is dominated by row ``b`` when both have the same variable part
    and ``rhs(a) - rhs(b)`` is a nonnegative combination of symbols, or is
    identically zero in the entropy basis. On exact ties the strict row is
    kept. First occurrence order is preserved.
    """
    rows = []
    seen = set()
    for q in sys.inequalities:
        n = _var_normalised(q)
        if is_tautology(n):
            continue
        key = (n.lhs, n.rhs, n.strict)
        if key in seen:
            continue
        seen.add(key)
        rows.append(n)

    groups: dict = defaultdict(list)
    for i, q in enumerate(rows):
        groups[q.lhs].append(i)

    dead = set()
    for idxs in groups.values():
        if len(idxs) < 2:
            continue
        rhs = {i: rows[i].rhs_dict() for i in idxs}
        for i in idxs:
            if i in dead:
                continue
            for j in idxs:
                if j == i or j in dead:
                    continue
                # does j make i redundant?  need rhs_i - rhs_j >= 0
                d = _sub(rhs[i], rhs[j])
                if not _provably_nonneg(d):
                    continue
                tie = not entropy_basis(d)
                if tie and rows[i].strict and not rows[j].strict:
                    continue  # i is the tighter (strict) copy
                if tie and rows[i].strict == rows[j].strict and j > i:
                    continue  # keep the earlier of two equal rows
                dead.add(i)
                break
    kept = [q for i, q in enumerate(rows) if i not in dead]
    return IneqSystem(sys.variables, kept)


# -------------------------------------------------------------- comparison


def _canon_key(q: Inequality):
    n = _var_normalised(q)
    eb = entropy_basis(n.rhs)

    def order(k):
        if isinstance(k, InfoSymbol):
            return (0,) + k.sort_key()
        return (1, tuple(sorted(k)))

    return (n.lhs, tuple(sorted(eb.items(), key=lambda kv: order(kv[0]))))


def canonical_equal(a: IneqSystem, b: IneqSystem) -> bool:
    """Equal as multisets of rows after pruning and canonical scaling.

    Strictness is ignored (regions are closures) and right-hand sides are
    compared in the entropy basis.
    """
    if set(a.variables) != set(b.variables):
        return False
    ka = Counter(_canon_key(q) for q in prune_redundant(a))
    kb = Counter(_canon_key(q) for q in prune_redundant(b))
    return ka == kb


def diff_systems(a: IneqSystem, b: IneqSystem) -> tuple[list, list]:
    """Rows of pruned ``a`` missing from ``b`` and vice versa."""
    pa, pb = prune_redundant(a), prune_redundant(b)
    ka = {_canon_key(q): q for q in pa}
    kb = {_canon_key(q): q for q in pb}
    return [q for k, q in ka.items() if k not in kb], [q for k, q in kb.items() if k not in ka]


# ------------------------------------------------------------- substitution


def evaluate_rhs(q: Inequality, values: Mapping) -> float:
    """Numeric rhs of ``q``; ``math.inf`` if a positive term is infinite."""
    total = 0.0
    for sym, c in q.rhs:
        if sym == ONE:
            total += float(c)
            continue
        if sym not in values:
            raise KeyError(f"no value supplied for symbol {sym}")
        v = float(values[sym])
        if math.isinf(v):
            if v < 0 or c < 0:
                raise ValueError(f"symbol {sym} is infinite with a negative coefficient")
            return math.inf
        total += float(c) * v
    return total


def substitute(sys: IneqSystem, values: Mapping, axes=None, label=None):
    """Numeric polytope over ``axes`` (default: the system's variables).

    Rows whose rhs contains an infinite leakage value with a positive
    coefficient are dropped; every remaining symbol must have a value.
    """
    from ..polytope import RatePolytope

    axes = tuple(axes) if axes is not None else tuple(sys.variables)
    A, b, labels = [], [], []
    for q in sys.inequalities:
        extra = q.variables - set(axes)
        if extra:
            raise ValueError(f"row '{q}' uses variables {sorted(extra)} outside axes {axes}")
        r = evaluate_rhs(q, values)
        if math.isinf(r):
            continue
        A.append([float(q.coef(v)) for v in axes])
        b.append(r)
        labels.append(q.label)
    return RatePolytope(axes, A, b, labels=labels, label=label)


# ----------------------------------------------------- implication pruning


def _implication_certificate(target: Inequality, others: list, coords: list):
    """Nonnegative multipliers proving ``target`` from ``others``, or None.

    Seeks ``lam >= 0`` with ``sum(lam_i * lhs_i) == lhs(target)`` and
    ``rhs(target) - sum(lam_i * rhs_i)`` a nonnegative symbol combination. The
    LP is solved in floating point and the certificate is then rationalised
    and re-checked exactly, so a returned certificate is always valid.
    """
    import numpy as np
    from scipy.optimize import linprog

    if not others:
        return None
    vars_ = sorted({v for q in others for v, _ in q.lhs} | set(target.variables))
    vi = {v: k for k, v in enumerate(vars_)}
    si = {s: k for k, s in enumerate(coords)}
    n = len(others)
    A_eq = np.zeros((len(vars_), n))
    A_ub = np.zeros((len(coords), n))
    for j, q in enumerate(others):
        for v, c in q.lhs:
            A_eq[vi[v], j] = float(c)
        for s, c in q.rhs:
            A_ub[si[s], j] = float(c)
    b_eq = np.zeros(len(vars_))
    for v, c in target.lhs:
        b_eq[vi[v]] = float(c)
    b_ub = np.zeros(len(coords))
    for s, c in target.rhs:
        b_ub[si[s]] = float(c)
    res = linprog(np.ones(n), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * n, method="highs")
    if res.status != 0:
        return None
    lam = [Fraction(float(x)).limit_denominator(1000) if x > 1e-9 else Fraction(0) for x in res.x]
    lhs: dict = defaultdict(Fraction)
    rhs: dict = defaultdict(Fraction)
    for j, q in enumerate(others):
        if lam[j] == 0:
            continue
        for v, c in q.lhs:
            lhs[v] += lam[j] * c
        for s, c in q.rhs:
            rhs[s] += lam[j] * c
    if {k: v for k, v in lhs.items() if v != 0} != target.lhs_dict():
        return None
    gap = _sub(target.rhs_dict(), rhs)
    if not _nonneg_combo(gap):
        return None
    if target.strict and _constant_only(target.rhs_dict()):
        # a strict numeric row needs strict evidence: a strict parent or a positive gap
        if not (gap.get(ONE, Fraction(0)) > 0 or any(lam[j] > 0 and others[j].strict for j in range(n))):
            return None
    return {j: lam[j] for j in range(n) if lam[j] != 0}


def prune_implied(sys: IneqSystem) -> IneqSystem:
    """Remove rows implied by a nonnegative combination of the remaining rows.

    Runs :func:`prune_redundant` first, then visits rows from last to first
    and drops each one whose implication certificate exists. Symbols are
    treated as independent nonnegative unknowns; strictness is ignored
    except on rows whose right-hand side is a plain number.
    """
    sys = prune_redundant(sys)
    rows = list(sys.inequalities)
    coords = sorted({s for q in rows for s, _ in q.rhs}, key=lambda s: s.sort_key())
    if ONE not in coords:
        coords.insert(0, ONE)
    i = len(rows) - 1
    while i >= 0:
        others = rows[:i] + rows[i + 1:]
        if _implication_certificate(rows[i], others, coords) is not None:
            rows.pop(i)
        i -= 1
    return IneqSystem(sys.variables, rows)
