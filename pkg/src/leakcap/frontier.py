"""Nondominated rate-pair staircases and their comparison."""

from __future__ import annotations

import csv
import io
import math

import numpy as np

TIE_TOL = 1e-12


class FrontierCurve:
    """Nondominated ``(r1, r2)`` points, ``r1`` ascending and ``r2`` strictly descending.

    ``provenance`` holds one identifier per point naming the distribution
    that produced it.
    """

    __slots__ = ("points", "provenance", "label")

    def __init__(self, points, provenance=None, label=None, _trusted=False):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        prov = list(provenance) if provenance is not None else [""] * len(pts)
        if len(prov) != len(pts):
            raise ValueError("provenance length differs from point count")
        if not _trusted:
            pts, prov = _nondominated(pts, prov)
        pts.flags.writeable = False
        self.points = pts
        self.provenance = tuple(prov)
        self.label = label

    @classmethod
    def from_points(cls, points, provenance=None, label=None) -> "FrontierCurve":
        return cls(points, provenance, label)

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"FrontierCurve(label={self.label!r}, n={len(self)})"

    @property
    def r1(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def r2(self) -> np.ndarray:
        return self.points[:, 1]

    @property
    def max_r1(self) -> float:
        return float(self.points[-1, 0]) if len(self) else -math.inf

    @property
    def max_r2(self) -> float:
        return float(self.points[0, 1]) if len(self) else -math.inf

    def staircase(self, r1) -> np.ndarray:
        """Largest ``r2`` of a point with first coordinate ``>= r1`` (``-inf`` if none)."""
        x = np.atleast_1d(np.asarray(r1, dtype=float))
        idx = np.searchsorted(self.points[:, 0], x - TIE_TOL, side="left")
        out = np.full(x.shape, -math.inf)
        ok = idx < len(self.points)
        out[ok] = self.points[idx[ok], 1]
        return out

    def swapped(self) -> "FrontierCurve":
        return FrontierCurve(self.points[:, ::-1], self.provenance, self.label)

    def covers(self, pts, tol: float = TIE_TOL) -> np.ndarray:
        """Per point: weakly dominated by some frontier point (within ``tol``)."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        return self.staircase(pts[:, 0] - tol) >= pts[:, 1] - tol

    def excess_over(self, other: "FrontierCurve") -> np.ndarray:
        """Per point of ``self``: largest coordinate by which it clears ``other``'s staircase.

        Zero or negative means the point is weakly dominated by ``other``.
        """
        p = self.points
        if len(other) == 0:
            return p.max(axis=1)
        up = p[:, 1] - other.staircase(p[:, 0])
        right = p[:, 0] - other.swapped().staircase(p[:, 1])
        # no point of other reaches p in some coordinate: measure against the extremes
        both_inf = np.isinf(up) & np.isinf(right)
        up = np.where(np.isinf(up), p[:, 0] - other.max_r1, up)
        right = np.where(np.isinf(right), p[:, 1] - other.max_r2, right)
        e = np.maximum(up, right)
        return np.where(both_inf, np.maximum(p[:, 0] - other.max_r1, p[:, 1] - other.max_r2), e)

    def distance_to(self, other: "FrontierCurve") -> np.ndarray:
        """Per point: sup-norm distance to ``other``'s dominated set (0 inside)."""
        p = self.points
        if len(other) == 0:
            return p.max(axis=1)
        q = other.points
        d = np.maximum(p[:, None, 0] - q[None, :, 0], p[:, None, 1] - q[None, :, 1])
        return np.maximum(d.min(axis=1), 0.0)

    def envelope(self) -> "FrontierCurve":
        """Upper concave envelope of the downward closure (time-sharing hull)."""
        if len(self) == 0:
            return self
        pts = np.vstack([[0.0, self.max_r2], self.points, [self.max_r1, 0.0]])
        prov = ["axis"] + list(self.provenance) + ["axis"]
        hull: list[int] = []
        for i in range(len(pts)):
            while len(hull) >= 2:
                o, a = pts[hull[-2]], pts[hull[-1]]
                b = pts[i]
                cross = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
                if cross >= -1e-15:
                    hull.pop()
                else:
                    break
            hull.append(i)
        sel = [i for i in hull if prov[i] != "axis" or i in (0, len(pts) - 1)]
        label = f"{self.label} (envelope)" if self.label else "envelope"
        return FrontierCurve(pts[sel], [prov[i] for i in sel], label)

    def to_csv(self, header_lines=()) -> str:
        buf = io.StringIO()
        for line in header_lines:
            buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r1_bits", "r2_bits", "provenance_id"])
        for (a, b), pid in zip(self.points, self.provenance):
            w.writerow([f"{a:.10f}", f"{b:.10f}", pid])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, label=None) -> "FrontierCurve":
        rows = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        rd = csv.DictReader(rows)
        pts, prov = [], []
        for r in rd:
            pts.append((float(r["r1_bits"]), float(r["r2_bits"])))
            prov.append(r["provenance_id"])
        return cls(pts, prov, label)


def _nondominated(pts: np.ndarray, prov: list):
    if len(pts) == 0:
        return np.zeros((0, 2)), []
    if np.any(pts < -1e-12):
        raise ValueError("frontier coordinates must be nonnegative")
    pts = np.maximum(pts, 0.0)
    # r1 descending, then r2 descending; ties in r1 keep the larger r2
    order = np.lexsort((-pts[:, 1], -pts[:, 0]))
    keep = []
    best = -math.inf
    last_r1 = math.inf
    for i in order:
        r1, r2 = pts[i]
        if r2 > best + TIE_TOL:
            if keep and last_r1 - r1 <= TIE_TOL:
                # r1 tied within tolerance: the larger r2 replaces the kept point
                keep[-1] = i
            else:
                keep.append(i)
                last_r1 = r1
            best = r2
    keep = keep[::-1]
    return pts[keep].copy(), [prov[i] for i in keep]


def frontier_dominates(a: FrontierCurve, b: FrontierCurve, margin: float) -> bool:
    """``a`` weakly covers every point of ``b`` and beats it by more than ``margin`` somewhere."""
    if len(b) and not bool(np.all(a.covers(b.points))):
        return False
    if len(a) == 0:
        return False
    return bool(np.any(a.excess_over(b) > margin))


def frontier_distance(a: FrontierCurve, b: FrontierCurve) -> float:
    """Hausdorff-style sup-norm distance between the two dominated sets."""
    ea = a.distance_to(b) if len(a) else np.zeros(1)
    eb = b.distance_to(a) if len(b) else np.zeros(1)
    return float(max(0.0, ea.max(initial=0.0), eb.max(initial=0.0)))
