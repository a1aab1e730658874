"""Low-dimensional numeric rate polytopes in halfspace form."""

from __future__ import annotations

import itertools
import json
import math

import numpy as np

MEMBER_TOL = 1e-9


class UnboundedDirection(ValueError):
    pass


class RatePolytope:
    """``{r >= 0 : A r <= b}`` over named rate axes (2 or 3 of them).

    Nonnegativity rows are appended automatically when missing. The set may
    be empty: a fixed distribution can give a leakage-penalised row a
    negative right-hand side, which no nonnegative rate satisfies.

    Parameters
    ----------
    axes : sequence of str
        Rate axis names, e.g. ``("R1", "R2")``.
    A, b : array_like
        Halfspace rows and right-hand sides in bits.
    labels : sequence, optional
        One label per row, kept for row-by-row comparisons.
    label : str, optional
        Name of the region this polytope belongs to.
    """

    def __init__(self, axes, A, b, labels=None, label=None):
        self.axes = tuple(axes)
        d = len(self.axes)
        if d < 1 or d > 3:
            raise ValueError(f"RatePolytope supports 1 to 3 axes, got {d}")
        A = np.asarray(A, dtype=float).reshape(-1, d)
        b = np.asarray(b, dtype=float).ravel()
        if A.shape[0] != b.size:
            raise ValueError("row count mismatch between A and b")
        if not np.all(np.isfinite(b)):
            raise ValueError("right-hand sides must be finite (drop infinite rows first)")
        labels = list(labels) if labels is not None else [None] * b.size
        rows = [tuple(r) for r in A]
        for k in range(d):
            e = tuple(-1.0 if i == k else 0.0 for i in range(d))
            present = any(rows[i] == e and b[i] == 0.0 for i in range(len(rows)))
            if not present:
                A = np.vstack([A, e])
                b = np.append(b, 0.0)
                labels.append(f"nonneg_{self.axes[k]}")
        A.flags.writeable = False
        b.flags.writeable = False
        self.A, self.b = A, b
        self.labels = tuple(labels)
        self.label = label
        self._vertices = None
        self._bounded = None

    @property
    def dim(self) -> int:
        return len(self.axes)

    def __repr__(self):
        return f"RatePolytope(label={self.label!r}, axes={self.axes}, rows={len(self.b)})"

    def _point(self, r) -> np.ndarray:
        if isinstance(r, dict):
            return np.array([float(r.get(a, 0.0)) for a in self.axes])
        if hasattr(r, "as_dict"):
            return self._point(r.as_dict())
        arr = np.asarray(r, dtype=float).ravel()
        if arr.size != self.dim:
            raise ValueError(f"point has {arr.size} coordinates, polytope has axes {self.axes}")
        return arr

    def contains(self, r, tol: float = MEMBER_TOL) -> bool:
        x = self._point(r)
        return bool(np.all(self.A @ x <= self.b + tol))

    def slack(self, r) -> np.ndarray:
        """``b - A r`` per row (negative means violated)."""
        return self.b - self.A @ self._point(r)

    def margin(self, r) -> float:
        return float(np.min(self.slack(r)))

    def vertices(self) -> np.ndarray:
        """Feasible intersections of ``dim`` rows, deduplicated; shape ``(k, dim)``."""
        if self._vertices is None:
            d = self.dim
            m = len(self.b)
            combos = np.array(list(itertools.combinations(range(m), d)), dtype=np.int64).reshape(-1, d)
            M = self.A[combos]
            ok = np.abs(np.linalg.det(M)) > 1e-12
            arr = np.zeros((0, d))
            if np.any(ok):
                X = np.linalg.solve(M[ok], self.b[combos[ok]][..., None])[..., 0]
                feas = np.all(X @ self.A.T <= self.b + 1e-9, axis=1)
                X = X[feas]
                if len(X):
                    X = np.where(np.abs(X) < 1e-13, 0.0, X)
                    _, first = np.unique(np.round(X, 10), axis=0, return_index=True)
                    X = X[np.sort(first)]
                    arr = X[np.lexsort(X.T[::-1])]
            arr.flags.writeable = False
            self._vertices = arr
        return self._vertices

    @property
    def is_empty(self) -> bool:
        return self.vertices().shape[0] == 0

    def _check_bounded(self, w: np.ndarray) -> None:
        from scipy.optimize import linprog

        res = linprog(-w, A_ub=self.A, b_ub=self.b, bounds=[(None, None)] * self.dim, method="highs")
        if res.status == 3:
            raise UnboundedDirection(f"{self.label or 'polytope'} is unbounded in direction {w.tolist()}")

    def support_value(self, direction) -> float:
        """``max w . r`` over the polytope; ``-inf`` for an empty polytope."""
        w = np.asarray(direction, dtype=float).ravel()
        if w.size != self.dim:
            raise ValueError(f"direction has {w.size} entries, polytope has {self.dim} axes")
        V = self.vertices()
        if V.shape[0] == 0:
            return -math.inf
        # vertices alone cannot see a recession direction; only check when needed
        if np.any(w > 0) and not self._bounded_cached():
            self._check_bounded(w)
        return float(np.max(V @ w))

    def _bounded_cached(self) -> bool:
        if self._bounded is None:
            from scipy.optimize import linprog

            # a row with nonnegative coefficients caps every axis it touches
            capped = np.any((self.A > 0) & np.all(self.A >= 0, axis=1)[:, None], axis=0)
            if np.all(capped):
                self._bounded = True
                return True
            ok = True
            for k in range(self.dim):
                c = np.zeros(self.dim)
                c[k] = -1.0
                res = linprog(c, A_ub=self.A, b_ub=self.b, bounds=[(None, None)] * self.dim, method="highs")
                if res.status == 3:
                    ok = False
                    break
            self._bounded = ok
        return self._bounded

    def rhs(self, label) -> float:
        """Right-hand side of the row labelled ``label``."""
        for lab, v in zip(self.labels, self.b):
            if lab == label:
                return float(v)
        raise KeyError(f"no row labelled {label!r} in {self.label}")

    def rows(self) -> list:
        return [(lab, self.A[i].tolist(), float(self.b[i])) for i, lab in enumerate(self.labels)]

    def section(self, fixed: dict, label=None) -> "RatePolytope":
        """Restrict to ``axis = value`` for the axes in ``fixed``."""
        keep = [i for i, a in enumerate(self.axes) if a not in fixed]
        shift = np.zeros(len(self.b))
        for a, v in fixed.items():
            if a not in self.axes:
                raise KeyError(f"axis {a!r} not in {self.axes}")
            shift += self.A[:, self.axes.index(a)] * float(v)
        A = self.A[:, keep]
        b = self.b - shift
        # rows that lost every variable become constant checks
        const = np.all(A == 0.0, axis=1)
        if np.any(b[const] < -MEMBER_TOL):
            return _infeasible(tuple(self.axes[i] for i in keep), label or self.label)
        labels = [lab for lab, c in zip(self.labels, const) if not c]
        return RatePolytope([self.axes[i] for i in keep], A[~const], b[~const], labels, label or self.label)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "axes": list(self.axes),
            "halfspaces": [
                {"label": lab, "coeffs": coeffs, "rhs_bits": rhs} for lab, coeffs, rhs in self.rows()
            ],
            "vertices": self.vertices().tolist(),
            "empty": self.is_empty,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _infeasible(axes, label) -> RatePolytope:
    d = len(axes)
    return RatePolytope(axes, [[1.0] * d], [-1.0], ["infeasible_section"], label)


def rows_max_deviation(p: RatePolytope, q: RatePolytope) -> float:
    """Largest rhs difference between rows that share a label in both polytopes."""
    qmap = dict(zip(q.labels, q.b))
    dev = 0.0
    shared = 0
    for lab, v in zip(p.labels, p.b):
        if lab in qmap:
            shared += 1
            dev = max(dev, abs(float(v) - float(qmap[lab])))
    if shared == 0:
        raise ValueError("polytopes share no row labels")
    return dev


def direction_fan(n: int, dim: int = 2) -> np.ndarray:
    """``n`` nonnegative unit directions.

    In two dimensions the angles are evenly spaced on ``[0, pi/2]``. In three
    dimensions a triangular grid on the simplex is normalised, using the
    smallest grid with at least ``n`` points, truncated to ``n``.
    """
    if dim == 2:
        t = np.linspace(0.0, np.pi / 2, n)
        out = np.stack([np.cos(t), np.sin(t)], axis=1)
        out[np.abs(out) < 1e-15] = 0.0
        return out
    if dim == 3:
        k = 1
        while (k + 1) * (k + 2) // 2 < n:
            k += 1
        pts = [(i, j, k - i - j) for i in range(k + 1) for j in range(k + 1 - i)]
        arr = np.array(pts, dtype=float)[:n]
        return arr / np.linalg.norm(arr, axis=1, keepdims=True)
    raise ValueError("dim must be 2 or 3")
