"""Soundness battery: FME projections against an independent witness search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ops import eliminate_all, prune_implied
from .symbols import ONE
from .system import Inequality, IneqSystem

BOX = 1e4
WITNESS_TOL = 1e-9


def random_system(rng: np.random.Generator, n_keep: int, n_elim: int, n_rows: int,
                  coef_range: int = 3, strict_prob: float = 0.3) -> tuple[IneqSystem, list, list]:
    """Random system over ``x0..`` (kept) and ``z0..`` (to eliminate).

    Coefficients are small integers and right-hand sides small fractions.
    Now and then a row is paired with its reversal, which produces
    degenerate (flat) witness sets and exercises strictness.
    """
    keep = [f"x{i}" for i in range(n_keep)]
    elim = [f"z{i}" for i in range(n_elim)]
    names = keep + elim
    rows = []
    while len(rows) < n_rows:
        c = rng.integers(-coef_range, coef_range + 1, size=len(names))
        if not np.any(c[n_keep:]):
            c[n_keep + rng.integers(n_elim)] = rng.choice([-1, 1])
        rhs = Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4)))
        lhs = {n: int(v) for n, v in zip(names, c) if v}
        rows.append(Inequality.build(lhs, {ONE: rhs}, rng.random() < strict_prob))
        if rng.random() < 0.1 and len(rows) < n_rows:
            rows.append(Inequality.build({n: -v for n, v in lhs.items()}, {ONE: -rhs},
                                         rng.random() < strict_prob))
    return IneqSystem(names, rows), keep, elim


def _matrix(rows, names):
    A = np.array([[float(q.coef(n)) for n in names] for q in rows]).reshape(len(rows), len(names))
    b = np.array([float(q.rhs_dict().get(ONE, 0)) for q in rows])
    strict = np.array([q.strict for q in rows], dtype=bool)
    return A, b, strict


def fme_membership(proj: IneqSystem, keep: list, pts: np.ndarray) -> np.ndarray:
    """Evaluate a projected system (kept variables only) at each point."""
    out = np.ones(len(pts), dtype=bool)
    for q in proj.inequalities:
        c = q.rhs_dict().get(ONE, Fraction(0))
        if not q.lhs:
            ok = c > 0 if q.strict else c >= 0
            if not ok:
                out[:] = False
            continue
        a = np.array([float(q.coef(n)) for n in keep])
        v = pts @ a
        out &= (v < float(c)) if q.strict else (v <= float(c))
    return out


def witness_membership(sys: IneqSystem, keep: list, elim: list, pts: np.ndarray) -> np.ndarray:
    """For each kept-variable point, does some ``z`` satisfy the full system?

    The witness set is intersected with a large box, its vertices are
    enumerated from every ``len(elim)``-subset of rows, and the vertex
    centroid (a relative-interior point) decides the strict rows.
    """
    rows = list(sys.inequalities)
    A, b, strict = _matrix(rows, keep + elim)
    Ax, Az = A[:, :len(keep)], A[:, len(keep):]
    k = len(elim)
    box = np.vstack([np.eye(k), -np.eye(k)])
    Zrows = np.vstack([Az, box])
    combos = [c for c in itertools.combinations(range(len(Zrows)), k)
              if abs(np.linalg.det(Zrows[list(c)])) > 1e-12]
    inv = np.array([np.linalg.inv(Zrows[list(c)]) for c in combos])  # (n_combo, k, k)
    cidx = np.array(combos)
    # rhs per point for every witness row
    B = b[None, :] - pts @ Ax.T  # (n_pts, m)
    Bfull = np.hstack([B, np.full((len(pts), 2 * k), BOX)])
    Z = np.einsum("cij,pcj->pci", inv, Bfull[:, cidx])  # (n_pts, n_combo, k)
    lhs = np.einsum("rk,pck->pcr", Az, Z)
    feas = np.all(lhs <= B[:, None, :] + WITNESS_TOL, axis=2) & np.all(np.abs(Z) <= BOX + 1e-6, axis=2)
    out = np.zeros(len(pts), dtype=bool)
    for p in range(len(pts)):
        V = Z[p][feas[p]]
        if len(V) == 0:
            continue
        if not np.any(strict):
            out[p] = True
            continue
        c = V.mean(axis=0)
        slack = B[p] - Az @ c
        out[p] = bool(np.all(slack[strict] > WITNESS_TOL))
    return out


@dataclass
class BatteryResult:
    systems: int = 0
    points: int = 0
    disagreements: int = 0
    examples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.disagreements == 0


def soundness_battery(n_systems: int = 200, n_points: int = 500, seed: int = 0,
                      implied: bool = True) -> BatteryResult:
    """Compare FME membership with witness search on random small systems.

    System ``t`` draws from ``default_rng([seed, t])``. With ``implied`` the
    LP implication pruning runs on top of the syntactic pruning.
    """
    res = BatteryResult()
    for t in range(n_systems):
        rng = np.random.default_rng([int(seed), t])
        n_keep = int(rng.integers(1, 4))
        n_elim = int(rng.integers(1, 3))
        n_rows = int(rng.integers(3, 9))
        sys, keep, elim = random_system(rng, n_keep, n_elim, n_rows)
        proj = eliminate_all(sys, elim)
        if implied:
            proj = prune_implied(proj)
        pts = rng.uniform(-3.0, 3.0, size=(n_points, n_keep))
        a = fme_membership(proj, keep, pts)
        w = witness_membership(sys, keep, elim, pts)
        bad = int(np.sum(a != w))
        res.systems += 1
        res.points += n_points
        res.disagreements += bad
        if bad and len(res.examples) < 5:
            res.examples.append({"system": t, "disagreements": bad, "text": str(sys)})
    return res
