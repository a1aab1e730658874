"""Closed-form leakage-capacity machinery for the Blackwell channel.

With ``P_X = (alpha, beta, 1 - alpha - beta)`` the deterministic outputs give
``H(Y1) = Hb(beta)``, ``H(Y2) = Hb(alpha)``, ``H(Y1|Y2) = (1-alpha) Hb(beta/(1-alpha))``,
``H(Y2|Y1) = (1-beta) Hb(alpha/(1-beta))`` and ``H(Y1,Y2) = H(X)``. Every
function here works on those five numbers, vectorised over parameter grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frontier import FrontierCurve
from .pmf import JointPmf, binary_entropy
from .polytope import RatePolytope
from .regions import INF, LeakagePair

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
TIE_TOL = 1e-12

# published saturation thresholds of the symmetric (L, L) study, in bits
REFERENCE_THRESHOLDS = {0.0: 0.15897, 0.05: 0.15897, 0.1: 0.20101, 0.4: 0.38317}


@dataclass(frozen=True)
class BlackwellParams:
    """Input law ``P_X(0) = alpha``, ``P_X(1) = beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if a < -1e-12 or b < -1e-12 or a + b > 1 + 1e-12:
            raise ValueError(f"invalid Blackwell input law alpha={a}, beta={b}")
        object.__setattr__(self, "alpha", min(max(a, 0.0), 1.0))
        object.__setattr__(self, "beta", min(max(b, 0.0), 1.0 - min(max(a, 0.0), 1.0)))

    @property
    def px(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, max(0.0, 1.0 - self.alpha - self.beta)])

    def joint(self) -> JointPmf:
        return JointPmf([("X", 3)], self.px)

    def tag(self) -> str:
        return f"bwc:a={self.alpha:.6f}:b={self.beta:.6f}"


def _hb(p):
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p)
    return np.where((p <= 1e-15) | (p >= 1.0 - 1e-15), 0.0, h)


def _ratio(num, den):
    den = np.asarray(den, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(den > 0, np.asarray(num, dtype=float) / np.where(den > 0, den, 1.0), 0.0)
    return np.clip(r, 0.0, 1.0)


def _plogp(p):
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = -p * np.log2(p)
    return np.where(p > 1e-15, v, 0.0)


def entropy_terms(alpha, beta):
    """``(H(Y1), H(Y2), H(Y1|Y2), H(Y2|Y1), H(Y1,Y2))`` for arrays of parameters."""
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    g = np.clip(1.0 - a - b, 0.0, 1.0)
    h1 = _hb(b)
    h2 = _hb(a)
    h1g2 = (1.0 - a) * _hb(_ratio(b, 1.0 - a))
    h2g1 = (1.0 - b) * _hb(_ratio(a, 1.0 - b))
    hj = _plogp(a) + _plogp(b) + _plogp(g)
    return h1, h2, h1g2, h2g1, hj


def _caps(alpha, beta, l1, l2):
    """Per-parameter (r1 cap, r2 cap, sum cap) of the pentagon."""
    h1, h2, h1g2, h2g1, hj = entropy_terms(alpha, beta)
    a = h1 if math.isinf(l1) else np.minimum(h1, h1g2 + l1)
    b = h2 if math.isinf(l2) else np.minimum(h2, h2g1 + l2)
    return a, b, hj


def bwc_polytope(p: BlackwellParams, L: LeakagePair) -> RatePolytope:
    """Pentagon (or rectangle) of rate pairs for one input law."""
    h1, h2, h1g2, h2g1, hj = (float(v) for v in entropy_terms(p.alpha, p.beta))
    rows, rhs, labels = [], [], []
    rows.append([1.0, 0.0]); rhs.append(h1); labels.append("r1")
    if not math.isinf(L.l1):
        rows.append([1.0, 0.0]); rhs.append(h1g2 + L.l1); labels.append("r1_leak")
    rows.append([0.0, 1.0]); rhs.append(h2); labels.append("r2")
    if not math.isinf(L.l2):
        rows.append([0.0, 1.0]); rhs.append(h2g1 + L.l2); labels.append("r2_leak")
    rows.append([1.0, 1.0]); rhs.append(hj); labels.append("sum")
    return RatePolytope(("R1", "R2"), rows, rhs, labels, label=f"bwc{p.tag()[3:]}")


def bwc_lstar(p) -> float:
    """``I(Y1;Y2) = Hb(beta) - (1-alpha) Hb(beta/(1-alpha))``."""
    if isinstance(p, BlackwellParams):
        a, b = p.alpha, p.beta
    else:
        a, b = p
    h1, _, h1g2, _, _ = entropy_terms(a, b)
    return float(max(0.0, h1 - h1g2))


def _lstar_arr(alpha, beta):
    h1, _, h1g2, _, _ = entropy_terms(alpha, beta)
    return np.maximum(h1 - h1g2, 0.0)


def simplex_grid(step: float):
    """All ``(alpha, beta)`` with ``alpha + beta <= 1`` on a grid of spacing ``step``."""
    n = int(round(1.0 / step))
    if n < 1:
        raise ValueError("grid step must be <= 1")
    i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    m = i + j <= n
    return i[m] / n, j[m] / n


def _pentagon_support(w1, w2, a, b, s):
    """``max w1 r1 + w2 r2`` over ``r1 <= a, r2 <= b, r1 + r2 <= s`` (nonneg rates)."""
    if w1 >= w2:
        x = a
        y = np.minimum(b, np.maximum(s - a, 0.0))
    else:
        y = b
        x = np.minimum(a, np.maximum(s - b, 0.0))
    return w1 * x + w2 * y, x, y


def _golden_max(f, lo, hi, iters=60):
    """Golden-section maximisation of a scalar function on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def _refine(obj, alpha, beta, step, iters=60, sweeps=2):
    """Coordinate golden-section refinement of ``obj(alpha, beta)`` near a grid point.

    A move is accepted only on strict improvement, so flat objectives stay put.
    """
    best = obj(alpha, beta)
    for _ in range(sweeps):
        lo, hi = max(0.0, alpha - step), min(1.0 - beta, alpha + step)
        if hi > lo:
            x, v = _golden_max(lambda t: obj(t, beta), lo, hi, iters)
            if v > best + 1e-15:
                alpha, best = x, v
        lo, hi = max(0.0, beta - step), min(1.0 - alpha, beta + step)
        if hi > lo:
            y, v = _golden_max(lambda t: obj(alpha, t), lo, hi, iters)
            if v > best + 1e-15:
                beta, best = y, v
    return alpha, beta, best


# --------------------------------------------------------- saturation values


@dataclass(frozen=True)
class SaturationResult:
    leakage: float
    threshold: float
    directions: np.ndarray
    params: tuple
    lstars: np.ndarray

    @property
    def argmax(self) -> tuple:
        """Input law ``(alpha, beta)`` attaining the threshold."""
        return self.params[int(np.argmax(self.lstars))]

    @property
    def alpha(self) -> float:
        return self.argmax[0]

    @property
    def beta(self) -> float:
        return self.argmax[1]


def bwc_saturation_details(L: float, resolution: float = 1e-3, n_dirs: int = 181) -> SaturationResult:
    """Trace the symmetric ``(L, L)`` region boundary and collect its supporting laws.

    For each of ``n_dirs`` directions on the quarter circle the support
    function is maximised over the grid; ties within 1e-12 go to the point
    with the larger rate orthogonal to the dominant weight (the Pareto-optimal
    one), then to the lowest grid index. The winner is refined by coordinate
    golden-section search.
    """
    if not (L >= 0) or math.isinf(L):
        raise ValueError("L must be a finite nonnegative number")
    if resolution > 1e-3 + 1e-15:
        raise ValueError("resolution must be <= 1e-3")
    al, be = simplex_grid(resolution)
    a, b, s = _caps(al, be, L, L)
    thetas = np.linspace(0.0, math.pi / 2, n_dirs)
    params, lst = [], []
    for th in thetas:
        w1, w2 = math.cos(th), math.sin(th)
        v, x, y = _pentagon_support(w1, w2, a, b, s)
        vmax = v.max()
        ties = np.flatnonzero(v >= vmax - TIE_TOL)
        if len(ties) > 1:
            other = y[ties] if w1 >= w2 else x[ties]
            ties = ties[other >= other.max() - TIE_TOL]
        k = int(ties[0])

        def obj(p, q, w1=w1, w2=w2):
            ca, cb, cs = _caps(p, q, L, L)
            return float(_pentagon_support(w1, w2, ca, cb, cs)[0])

        pa, pb, _ = _refine(obj, float(al[k]), float(be[k]), resolution)
        params.append((pa, pb))
        lst.append(bwc_lstar((pa, pb)))
    lst = np.array(lst)
    return SaturationResult(float(L), float(lst.max()), thetas, tuple(params), lst)


def bwc_saturation_threshold(L: float, resolution: float = 1e-3, n_dirs: int = 181) -> float:
    """Largest ``I(Y1;Y2)`` among the laws supporting the ``(L, L)`` boundary."""
    return bwc_saturation_details(L, resolution, n_dirs).threshold


# ------------------------------------------------------------- sum rate


@dataclass(frozen=True)
class SumRateCurve:
    leakages: np.ndarray
    sum_rates: np.ndarray
    argmax: tuple
    sum_row_binds: np.ndarray
    breakpoint: float
    plateau: float

    def to_csv(self, header_lines=()) -> str:
        out = [f"# {h}\n" for h in header_lines]
        out.append(f"# breakpoint_bits={self.breakpoint:.8f} plateau_bits={self.plateau:.8f}\n")
        out.append("L_bits,sum_rate_bits\n")
        out.extend(f"{l:.6f},{r:.10f}\n" for l, r in zip(self.leakages, self.sum_rates))
        return "".join(out)


def _sumrate_opt(L: float, al, be, step):
    a, b, s = _caps(al, be, L, L)
    v = np.minimum(a + b, s)
    k = int(np.argmax(v))

    def obj(p, q):
        ca, cb, cs = _caps(p, q, L, L)
        return float(np.minimum(ca + cb, cs))

    pa, pb, best = _refine(obj, float(al[k]), float(be[k]), step)
    ca, cb, cs = (float(t) for t in _caps(pa, pb, L, L))
    return best, (pa, pb), ca + cb >= cs - 1e-12


def bwc_sumrate_curve(l_grid, resolution: float = 1e-3, bisect_tol: float = 1e-7) -> SumRateCurve:
    """Maximum sum rate of the symmetric ``(L, L)`` region for each ``L`` in ``l_grid``.

    The breakpoint is the smallest ``L`` at which the joint-entropy row
    binds at the optimiser, located by bisection between the last grid value
    where it is slack and the first where it binds.
    """
    l_grid = np.asarray(l_grid, dtype=float)
    if np.any(np.diff(l_grid) < 0):
        raise ValueError("l_grid must be sorted ascending")
    al, be = simplex_grid(resolution)
    vals, args, binds = [], [], []
    for L in l_grid:
        v, arg, bd = _sumrate_opt(float(L), al, be, resolution)
        vals.append(v)
        args.append(arg)
        binds.append(bd)
    binds = np.array(binds)
    plateau = float(_sumrate_opt(64.0, al, be, resolution)[0])
    hits = np.flatnonzero(binds)
    if len(hits) == 0:
        bp = math.nan
    elif hits[0] == 0:
        bp = float(l_grid[0])
    else:
        lo, hi = float(l_grid[hits[0] - 1]), float(l_grid[hits[0]])
        while hi - lo > bisect_tol:
            mid = 0.5 * (lo + hi)
            if _sumrate_opt(mid, al, be, resolution)[2]:
                hi = mid
            else:
                lo = mid
        bp = 0.5 * (lo + hi)
    return SumRateCurve(l_grid, np.array(vals), tuple(args), binds, bp, plateau)


# ------------------------------------------------------------- frontiers


def bwc_frontier(L: LeakagePair, resolution: float = 2e-3, refine: bool = True) -> FrontierCurve:
    """Union over input laws of the Blackwell pentagons, as a staircase.

    For each ``r1`` on a grid of spacing ``resolution`` the largest
    achievable ``r2`` is found over the parameter grid, then improved by a
    shrinking local search around the winning law.
    """
    if resolution > 1e-2 + 1e-15:
        raise ValueError("resolution must be <= 1e-2")
    al, be = simplex_grid(resolution)
    a, b, s = _caps(al, be, L.l1, L.l2)
    top = float(a.max())
    n = int(math.ceil(top / resolution)) + 1
    r1s = np.linspace(0.0, top, n)
    best = np.empty(n)
    arg = np.empty(n, dtype=np.int64)
    chunk = max(1, int(4e6 // max(len(al), 1)))
    for i0 in range(0, n, chunk):
        r = r1s[i0 : i0 + chunk, None]
        val = np.where(a[None, :] >= r - 1e-15, np.minimum(b[None, :], s[None, :] - r), -np.inf)
        arg[i0 : i0 + chunk] = np.argmax(val, axis=1)
        best[i0 : i0 + chunk] = val[np.arange(val.shape[0]), arg[i0 : i0 + chunk]]
    pa, pb = al[arg].copy(), be[arg].copy()
    if refine:
        step = resolution
        offs = np.array([(u, v) for u in (-1, -0.5, 0, 0.5, 1) for v in (-1, -0.5, 0, 0.5, 1)])
        for _ in range(6):
            step *= 0.5
            ca = np.clip(pa[:, None] + offs[None, :, 0] * step, 0.0, 1.0)
            cb = np.clip(pb[:, None] + offs[None, :, 1] * step, 0.0, 1.0)
            cb = np.minimum(cb, 1.0 - ca)
            xa, xb, xs = _caps(ca, cb, L.l1, L.l2)
            r = r1s[:, None]
            val = np.where(xa >= r - 1e-15, np.minimum(xb, xs - r), -np.inf)
            k = np.argmax(val, axis=1)
            v = val[np.arange(n), k]
            better = v > best + 1e-15
            best = np.where(better, v, best)
            pa = np.where(better, ca[np.arange(n), k], pa)
            pb = np.where(better, cb[np.arange(n), k], pb)
    pts = np.stack([r1s, np.maximum(best, 0.0)], axis=1)
    prov = [BlackwellParams(x, y).tag() for x, y in zip(pa, pb)]
    return FrontierCurve(pts, prov, label=f"bwc L=({L.l1},{L.l2})")


def bwc_shapes(p: BlackwellParams) -> dict:
    """The four regions of one input law: no secrecy, either message secret, both secret."""
    return {
        "no_secrecy": bwc_polytope(p, LeakagePair(INF, INF)),
        "m1_secret": bwc_polytope(p, LeakagePair(0.0, INF)),
        "m2_secret": bwc_polytope(p, LeakagePair(INF, 0.0)),
        "both_secret": bwc_polytope(p, LeakagePair(0.0, 0.0)),
    }


def blackwell_joint(p: BlackwellParams) -> JointPmf:
    """Input law as a single-axis joint, ready for the generic evaluators."""
    return p.joint()


def lstar_closed_form_check(alpha: float, beta: float) -> float:
    """Scalar reference via :func:`binary_entropy`, for cross-checks."""
    r = 0.0 if alpha >= 1.0 else beta / (1.0 - alpha)
    return binary_entropy(beta) - (1.0 - alpha) * binary_entropy(min(r, 1.0))
