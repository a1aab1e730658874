"""Executable checks that alternative region descriptions coincide.

The lift constructions turn a rate pair of one description into an explicit
input law under which the pair belongs to the other description. The
reduction suite compares special cases of the general regions against their
stand-alone forms, either row by row or through support values.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import Dmbc, blackwell, classify, induce_joint, output_map, random_channel
from .pmf import JointPmf, Pmf, conditional_mutual_information, mutual_information
from .polytope import MEMBER_TOL, RatePolytope, direction_fan
from .regions import (
    INF,
    LeakagePair,
    inner_bound_polytope,
    leakage_threshold,
    named_region_polytope,
    private_section,
    saturation_deviation,
)

ROW_TOL = 1e-9
GAMMA_TOL = 1e-12
N_FAN = 26

# salts keep the per-check random streams apart under one suite seed
_SALT = {
    "lift_secret": 1, "lift_conf": 2, "deterministic": 3, "marton": 4, "liu": 5, "sd_corners": 6,
    "dm_ck": 7, "dm_degmsg": 8, "saturation": 9, "sd_substitution": 10,
}


def _rng(seed: int, check: str, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), _SALT[check], int(trial)])


# ------------------------------------------------------------------ lifts


@dataclass(frozen=True)
class LiftReport:
    """Outcome of one lift.

    Attributes
    ----------
    lam : float
        Weight of the branch that keeps the original common variable.
    gamma : float
        Slack of the secrecy bound at the source point.
    gap : float
        The secrecy difference the mixing weight scales.
    margin : float
        Smallest row slack of the point in the target polytope.
    markov_dev : float
        Conditional mutual information measuring the target Markov chain.
    """

    lam: float
    gamma: float
    gap: float
    source_point: tuple
    lifted_dist: JointPmf
    member: bool
    margin: float
    markov_dev: float
    target: str

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"mixing weight {self.lam} outside [0, 1]")


def lift_lambda(gap: float, gamma: float) -> float:
    """``(gap - gamma) / gap``; the identity weight 1 when ``gamma`` vanishes."""
    if gamma <= GAMMA_TOL:
        return 1.0
    if gap <= 0:
        raise ValueError(f"positive slack {gamma} with nonpositive gap {gap}")
    lam = (gap - gamma) / gap
    if lam < -1e-12 or lam > 1 + 1e-12:
        raise ValueError(f"mixing weight {lam} outside [0, 1]")
    return min(1.0, max(0.0, lam))


def _point(p) -> np.ndarray:
    return np.asarray(p, dtype=float).ravel()


def _source_check(poly: RatePolytope, pt, name: str) -> None:
    if not poly.contains(pt, MEMBER_TOL):
        raise ValueError(f"point {tuple(pt)} is outside the {name} region for this distribution")


def _cmi(joint, a, b, c=()):
    return conditional_mutual_information(joint, a, b, c)


def secret_pair_lift(dist: JointPmf, point, c: Dmbc) -> LiftReport:
    """Lift a pair of the sum-bounded secret-M2 region into the common-variable form.

    ``dist`` is a law over (W, V, X) and ``point`` is ``(R1, R2)``. With
    positive slack ``gamma`` the new common variable is ``(Theta, Wt)`` where
    ``Wt = W`` with probability ``lam`` and ``Wt = (W, V)`` otherwise; the new
    ``V`` is the pair ``(W, V)``.
    """
    dist = dist.transpose(("W", "V", "X"))
    pt = _point(point)
    src = named_region_polytope("m2secret_alt", dist, c)
    _source_check(src, pt, "m2secret_alt")
    j = induce_joint(dist, c)
    gap = _cmi(j, ["V"], ["Y2"], ["W"]) - _cmi(j, ["V"], ["Y1"], ["W"])
    gamma = max(0.0, gap - pt[1])
    lam = lift_lambda(gap, gamma)
    p = dist.tensor
    nw, nv, nx = p.shape
    pair = p.reshape(nw * nv, nx)
    if gamma <= GAMMA_TOL:
        t = np.zeros((nw, nw * nv, nx))
        for w in range(nw):
            t[w, w * nv:(w + 1) * nv] = p[w]
    else:
        t = np.zeros((nw + nw * nv, nw * nv, nx))
        for w in range(nw):
            t[w, w * nv:(w + 1) * nv] = lam * p[w]
        t[nw + np.arange(nw * nv), np.arange(nw * nv)] = (1.0 - lam) * pair
    lifted = JointPmf([("W", t.shape[0]), ("V", t.shape[1]), ("X", nx)], t)
    dev = _cmi(lifted, ["W"], ["X"], ["V"])
    tgt = named_region_polytope("m2secret", lifted, c)
    margin = tgt.margin(pt)
    return LiftReport(lam, gamma, gap, tuple(pt), lifted, margin >= -MEMBER_TOL, margin, dev, "m2secret")


def confidential_lift(dist: JointPmf, point, c: Dmbc) -> LiftReport:
    """Lift a pair of the sum-bounded confidential-message region into the
    two-decoder common-message form.

    ``dist`` is a law over (W, U, X) with ``W - U - X``; ``point`` is
    ``(R0, R1)``. With positive slack the common variable becomes
    ``(Theta, Wt)`` with ``Wt = W`` with probability ``lam`` and ``Wt = U``
    otherwise.
    """
    dist = dist.transpose(("W", "U", "X"))
    pt = _point(point)
    src = named_region_polytope("dm0", dist, c)
    _source_check(src, pt, "dm0")
    j = induce_joint(dist, c)
    gap = _cmi(j, ["U"], ["Y1"], ["W"]) - _cmi(j, ["U"], ["Y2"], ["W"])
    gamma = max(0.0, gap - pt[1])
    lam = lift_lambda(gap, gamma)
    p = dist.tensor
    nw, nu, nx = p.shape
    if gamma <= GAMMA_TOL:
        t = p.copy()
    else:
        t = np.zeros((nw + nu, nu, nx))
        t[:nw] = lam * p
        t[nw + np.arange(nu), np.arange(nu)] = (1.0 - lam) * p.sum(axis=0)
    lifted = JointPmf([("W", t.shape[0]), ("U", nu), ("X", nx)], t)
    dev = _cmi(lifted, ["W"], ["X"], ["U"])
    tgt = named_region_polytope("ck", lifted, c)
    margin = tgt.margin(pt)
    return LiftReport(lam, gamma, gap, tuple(pt), lifted, margin >= -MEMBER_TOL, margin, dev, "ck")


# ------------------------------------------------- deterministic channels


# deterministic-channel rows each row of the semi-deterministic region maps to,
# with the leakage index whose allowance the mapped row carries on top
SD0_TO_DET = {
    "r1_leak": ("r1_leak", 0),
    "r1": ("r1", 0),
    "r2_leak": ("r2_leak", 0),
    "r2": ("r2", 0),
    "sum_leak1": ("sum", 1),
    "sum_y1": ("sum", 0),
    "sum_y2": ("sum", 0),
}


def _row_gaps(sd0: RatePolytope, det: RatePolytope, L: LeakagePair) -> list:
    """``sd0 row - det counterpart`` for every mapped row present in both."""
    dmap = dict(zip(det.labels, det.b))
    out = []
    for lab, v in zip(sd0.labels, sd0.b):
        if lab not in SD0_TO_DET:
            continue
        dl, j = SD0_TO_DET[lab]
        if dl not in dmap:
            continue
        extra = L[j] if j else 0.0
        out.append((lab, float(v) - extra - float(dmap[dl])))
    return out


def det_as_sd_dist(c: Dmbc, px) -> JointPmf:
    """(W, V, X) law with constant W and ``V = Y2``."""
    px = np.asarray(px.probs if isinstance(px, Pmf) else px, dtype=float)
    f2 = output_map(c, 2)
    t = np.zeros((1, c.y2_size, c.x_size))
    t[0, f2, np.arange(c.x_size)] = px
    return JointPmf([("W", 1), ("V", c.y2_size), ("X", c.x_size)], t)


def deterministic_check(c: Dmbc, px, L: LeakagePair, trials: int = 50, seed: int = 0) -> float:
    """Largest violation of the deterministic-channel reduction.

    Measures how far the semi-deterministic rows at ``W = const, V = Y2``
    deviate from the deterministic rows, and how far any row under a random
    (W, V) augmentation of ``px`` exceeds its deterministic counterpart.
    """
    if not classify(c).deterministic:
        raise ValueError("the deterministic-channel reduction needs a deterministic channel")
    px = np.asarray(px.probs if isinstance(px, Pmf) else px, dtype=float)
    det = named_region_polytope("det", JointPmf([("X", c.x_size)], px), c, L)
    sd0 = named_region_polytope("sd0", det_as_sd_dist(c, px), c, L)
    gaps = _row_gaps(sd0, det, L)
    mapped = {lab for lab, _ in gaps}
    # every det row must be hit by some mapped sd0 row
    needed = {SD0_TO_DET[lab][0] for lab in mapped}
    missing = [lab for lab in det.labels if lab not in needed and not lab.startswith("nonneg")]
    if missing:
        return INF
    worst = max((abs(g) for _, g in gaps), default=0.0)
    for t in range(trials):
        rng = _rng(seed, "deterministic", t)
        nw, nv = (int(v) for v in rng.integers(2, 4, size=2))
        cond = rng.dirichlet(np.ones(nw * nv), size=c.x_size).T.reshape(nw, nv, c.x_size)
        dist = JointPmf([("W", nw), ("V", nv), ("X", c.x_size)], cond * px[None, None, :])
        sd = named_region_polytope("sd0", dist, c, L)
        for _, g in _row_gaps(sd, det, L):
            worst = max(worst, g)
    return worst


def deterministic_reduction_holds(c: Dmbc, px, L: LeakagePair, trials: int = 50, seed: int = 0) -> bool:
    """True when the deterministic region is the semi-deterministic one at
    ``W = const, V = Y2`` and bounds it under random augmentations."""
    return deterministic_check(c, px, L, trials, seed) <= ROW_TOL


# ---------------------------------------------------------------- reports


@dataclass
class CheckResult:
    name: str
    trials: int
    max_deviation: float
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    checks: list = field(default_factory=list)
    seed: int = 0

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    @property
    def failing(self) -> list:
        return [ch.name for ch in self.checks if not ch.passed]

    def to_dict(self) -> dict:
        def enc(d):
            v = d["max_deviation"]
            d["max_deviation"] = "inf" if math.isinf(v) else v
            return d

        return {"seed": self.seed, "passed": self.passed,
                "checks": [enc(asdict(ch)) for ch in self.checks]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _run(name, trials, fn, tol=ROW_TOL) -> CheckResult:
    """Wrap a check body; exceptions count as failures with their message."""
    try:
        dev, detail = fn()
    except Exception as exc:  # a check that cannot run has failed
        return CheckResult(name, trials, INF, False, f"{type(exc).__name__}: {exc}")
    return CheckResult(name, trials, float(dev), bool(dev <= tol), detail)


def _support_gap(p: RatePolytope, q: RatePolytope, fan) -> float:
    """``max_w |h_p(w) - h_q(w)|`` with two empty polytopes counted as equal."""
    worst = 0.0
    for w in fan:
        a, b = p.support_value(w), q.support_value(w)
        if math.isinf(a) and math.isinf(b) and a == b:
            continue
        worst = max(worst, abs(a - b))
    return worst


def _support_excess(p: RatePolytope, q: RatePolytope, fan) -> float:
    """``max_w h_p(w) - h_q(w)``, clipped at zero (how far ``p`` leaves ``q``)."""
    worst = 0.0
    for w in fan:
        a, b = p.support_value(w), q.support_value(w)
        if math.isinf(a) and a < 0:
            continue
        worst = max(worst, a - b)
    return worst


def _random_joint(rng, names, sizes) -> JointPmf:
    t = rng.dirichlet(np.ones(int(np.prod(sizes)))).reshape(sizes)
    return JointPmf(list(zip(names, sizes)), t)


def _markov_joint(rng, nw, nu, nx) -> JointPmf:
    """Random (W, U, X) law with ``W - U - X``."""
    pwu = rng.dirichlet(np.ones(nw * nu)).reshape(nw, nu)
    pxu = rng.dirichlet(np.ones(nx), size=nu)
    return JointPmf([("W", nw), ("U", nu), ("X", nx)], pwu[:, :, None] * pxu[None, :, :])


def _draw_nonempty(rng, make, attempts: int = 2000):
    """Call ``make(rng)`` until the polytope it returns last is nonempty.

    ``make`` returns a tuple whose final entry is the polytope deciding
    acceptance. Returns None when every attempt gives an empty set.
    """
    for _ in range(attempts):
        out = make(rng)
        if not out[-1].is_empty:
            return out
    return None


def _secret_aux(rng, nx: int) -> JointPmf:
    """(U0, U1, U2, X) with U1, U2 independent given U0 and a peaked input map."""
    p0 = rng.dirichlet(np.ones(2))
    p1 = rng.dirichlet(np.ones(2), size=2)
    p2 = rng.dirichlet(np.ones(2), size=2)
    px = rng.dirichlet(0.3 * np.ones(nx), size=(2, 2, 2))
    t = np.einsum("a,ab,ac,abcx->abcx", p0, p1, p2, px)
    return JointPmf([("U0", 2), ("U1", 2), ("U2", 2), ("X", nx)], t)


def _peaked_channel(rng, nx: int) -> Dmbc:
    return Dmbc(rng.dirichlet(0.3 * np.ones(4), size=nx).reshape(nx, 2, 2))


def _interior_point(poly: RatePolytope, rng) -> np.ndarray:
    V = poly.vertices()
    wts = rng.dirichlet(np.ones(len(V)))
    return wts @ V


def _merge_common(dist: JointPmf) -> JointPmf:
    """(W, V, X) -> (constant W, V' = (W, V), X)."""
    d = dist.transpose(("W", "V", "X"))
    nw, nv, nx = d.shape
    return JointPmf([("W", 1), ("V", nw * nv), ("X", nx)], d.tensor.reshape(1, nw * nv, nx))


def _pair_only(dist: JointPmf) -> JointPmf:
    """(W, V, X) -> (V' = (W, V), X)."""
    d = dist.transpose(("W", "V", "X"))
    nw, nv, nx = d.shape
    return JointPmf([("V", nw * nv), ("X", nx)], d.tensor.reshape(nw * nv, nx))


# ------------------------------------------------------------ the suites


def lift_suite_secret_pair(trials: int = 100, seed: int = 0, c: Dmbc | None = None) -> CheckResult:
    """Random (W, V, X) laws on a semi-deterministic channel, interior points lifted."""
    c = c or blackwell()

    def body():
        worst, fails, used = 0.0, 0, 0
        for t in range(trials):
            rng = _rng(seed, "lift_secret", t)
            for _ in range(200):
                nw, nv = (int(v) for v in rng.integers(2, 4, size=2))
                dist = _random_joint(rng, ("W", "V", "X"), (nw, nv, c.x_size))
                src = named_region_polytope("m2secret_alt", dist, c)
                if not src.is_empty:
                    break
            else:
                continue
            pt = _interior_point(src, rng)
            rep = secret_pair_lift(dist, pt, c)
            used += 1
            worst = max(worst, -rep.margin, rep.markov_dev)
            fails += not rep.member
        return (worst if fails == 0 else INF), f"{used} lifts, {fails} non-members"

    return _run("lift_secret_pair", trials, body)


def lift_suite_confidential(trials: int = 100, seed: int = 0) -> CheckResult:
    """Random channels and Markov (W, U, X) laws, interior points lifted."""

    def body():
        worst, fails, used = 0.0, 0, 0
        for t in range(trials):
            rng = _rng(seed, "lift_conf", t)
            for _ in range(200):
                c = random_channel(rng, int(rng.integers(2, 4)), 2, 2)
                nw, nu = (int(v) for v in rng.integers(2, 4, size=2))
                dist = _markov_joint(rng, nw, nu, c.x_size)
                src = named_region_polytope("dm0", dist, c)
                if not src.is_empty:
                    break
            else:
                continue
            pt = _interior_point(src, rng)
            rep = confidential_lift(dist, pt, c)
            used += 1
            worst = max(worst, -rep.margin, rep.markov_dev)
            fails += not rep.member
        return (worst if fails == 0 else INF), f"{used} lifts, {fails} non-members"

    return _run("lift_confidential", trials, body)


def _leak_choice(rng) -> float:
    return float(rng.choice([0.0, INF, rng.uniform(0.0, 1.0)]))


def deterministic_suite(trials: int = 20, seed: int = 0, c: Dmbc | None = None) -> CheckResult:
    def body():
        worst = 0.0
        for t in range(trials):
            rng = _rng(seed, "deterministic", 10_000 + t)
            ch = c if c is not None else (blackwell() if t % 2 == 0 else
                                          random_channel(rng, 3, 2, 2, kind="det"))
            px = rng.dirichlet(np.ones(ch.x_size))
            L = LeakagePair(_leak_choice(rng), _leak_choice(rng))
            worst = max(worst, deterministic_check(ch, px, L, trials=10, seed=seed + t))
        return worst, ""

    return _run("deterministic_reduction", trials, body)


def marton_suite(trials: int = 20, seed: int = 0) -> CheckResult:
    """Inner bound without leakage limits against Marton's rows computed directly."""

    def body():
        worst = 0.0
        for t in range(trials):
            rng = _rng(seed, "marton", t)
            c = random_channel(rng, int(rng.integers(2, 4)), 2, 2)
            aux = _random_joint(rng, ("U0", "U1", "U2", "X"), (2, 2, 2, c.x_size))
            p = inner_bound_polytope(aux, c, LeakagePair(INF, INF))
            j = induce_joint(aux, c)
            mi, cmi = mutual_information, conditional_mutual_information
            i12 = cmi(j, ["U1"], ["U2"], ["U0"])
            ref = {
                "r01": mi(j, ["U0", "U1"], ["Y1"]),
                "r02": mi(j, ["U0", "U2"], ["Y2"]),
                "sum_common_y1": mi(j, ["U0", "U1"], ["Y1"]) + cmi(j, ["U2"], ["Y2"], ["U0"]) - i12,
                "sum_common_y2": cmi(j, ["U1"], ["Y1"], ["U0"]) + mi(j, ["U0", "U2"], ["Y2"]) - i12,
                "double_common": mi(j, ["U0", "U1"], ["Y1"]) + mi(j, ["U0", "U2"], ["Y2"]) - i12,
            }
            labels = [lab for lab in p.labels if not lab.startswith("nonneg")]
            if sorted(labels) != sorted(ref):
                return INF, f"rows {labels}"
            for lab, v in ref.items():
                worst = max(worst, abs(p.rhs(lab) - v))
        return worst, ""

    return _run("marton_rows", trials, body)


def liu_suite(trials: int = 20, seed: int = 0) -> CheckResult:
    """Inner bound at zero leakage and no common message against the secrecy region."""

    def body():
        fan = direction_fan(N_FAN, 2)
        worst, used = 0.0, 0

        def make(rng):
            c = blackwell() if rng.random() < 0.5 else _peaked_channel(rng, int(rng.integers(2, 4)))
            aux = _secret_aux(rng, c.x_size)
            return c, aux, named_region_polytope("liu", aux, c)

        for t in range(trials):
            got = _draw_nonempty(_rng(seed, "liu", t), make)
            if got is None:
                continue
            c, aux, q = got
            p = private_section(inner_bound_polytope(aux, c, LeakagePair(0, 0)))
            worst = max(worst, _support_gap(p, q, fan))
            used += 1
        if used < trials:
            return INF, f"only {used} of {trials} draws gave a nonempty region"
        return worst, f"{used} nonempty regions"

    return _run("liu_secrecy", trials, body)


# (leakage pair, target region, does the target use the merged V only)
SD_CORNERS = {
    "gp_nosecrecy": (LeakagePair(INF, INF), True),
    "m1secret": (LeakagePair(0, INF), True),
    "m2secret_alt": (LeakagePair(INF, 0), False),
    "bothsecret": (LeakagePair(0, 0), False),
}


def sd_corner_suite(target: str, trials: int = 20, seed: int = 0, c: Dmbc | None = None) -> CheckResult:
    """The semi-deterministic region at a leakage corner against its special form.

    For each (W, V, X) law: the region at that law stays inside the target
    (evaluated at the law, or at ``V' = (W, V)`` for targets without W), and
    the best of the law and its merged version ``(const, (W, V))`` reaches
    the target's support value in every fan direction.
    """
    L, merged_only = SD_CORNERS[target]

    def body():
        fan = direction_fan(N_FAN, 2)
        worst, used = 0.0, 0
        for t in range(trials):
            rng = _rng(seed, "sd_corners", 100 * list(SD_CORNERS).index(target) + t)
            ch = c if c is not None else (blackwell() if t % 2 == 0 else
                                          random_channel(rng, 3, 2, 2, kind="sd"))

            def make(rng):
                nw, nv = (int(v) for v in rng.integers(2, 4, size=2))
                dist = _random_joint(rng, ("W", "V", "X"), (nw, nv, ch.x_size))
                return dist, named_region_polytope(target, _pair_only(dist) if merged_only else dist, ch)

            got = _draw_nonempty(rng, make)
            if got is None:
                continue
            dist, tgt = got
            used += 1
            sd = private_section(named_region_polytope("sd", dist, ch, L))
            sd_m = private_section(named_region_polytope("sd", _merge_common(dist), ch, L))
            worst = max(worst, _support_excess(sd, tgt, fan))
            for w in fan:
                best = max(sd.support_value(w), sd_m.support_value(w))
                h = tgt.support_value(w)
                if math.isinf(h) and h < 0:
                    continue
                worst = max(worst, h - best)
        if used < trials:
            return INF, f"only {used} of {trials} draws gave a nonempty region"
        return worst, f"{used} nonempty regions"

    return _run(f"sd_corner_{target}", trials, body)


def dm_ck_suite(trials: int = 20, seed: int = 0) -> CheckResult:
    """Degraded-message-set region at zero leakage against the two-decoder form.

    Per law: the two-decoder region stays inside, and for every fan
    direction the maximising vertex lifts to a law whose two-decoder region
    reaches the same support value.
    """

    def body():
        fan = direction_fan(N_FAN, 2)
        worst, used = 0.0, 0

        def make(rng):
            c = random_channel(rng, int(rng.integers(2, 4)), 2, 2)
            dist = _markov_joint(rng, int(rng.integers(2, 4)), int(rng.integers(2, 4)), c.x_size)
            return c, dist, named_region_polytope("dm", dist, c, LeakagePair(0, INF))

        for t in range(trials):
            got = _draw_nonempty(_rng(seed, "dm_ck", t), make)
            if got is None:
                continue
            c, dist, dm = got
            used += 1
            ck = named_region_polytope("ck", dist, c)
            worst = max(worst, _support_excess(ck, dm, fan))
            V = dm.vertices()
            if len(V) == 0:
                continue
            for w in fan:
                k = int(np.argmax(V @ w))
                rep = confidential_lift(dist, np.maximum(V[k], 0.0), c)
                lifted = named_region_polytope("ck", rep.lifted_dist, c)
                worst = max(worst, float(V[k] @ w) - lifted.support_value(w))
        if used < trials:
            return INF, f"only {used} of {trials} draws gave a nonempty region"
        return worst, f"{used} nonempty regions"

    return _run("dm_vs_ck", trials, body)


def dm_degmsg_suite(trials: int = 20, seed: int = 0) -> CheckResult:
    """Degraded-message-set region, no leakage limit and ``U = X``, against the
    degraded message set capacity rows."""
    pairs = {"r0": "r0", "r01_y1": "r01", "r01_y2": "r01_via_w"}

    def body():
        worst = 0.0
        for t in range(trials):
            rng = _rng(seed, "dm_degmsg", t)
            c = random_channel(rng, int(rng.integers(2, 4)), 2, 2)
            wx = _random_joint(rng, ("W", "X"), (int(rng.integers(2, 4)), c.x_size))
            nx = c.x_size
            t3 = wx.tensor[:, :, None] * np.eye(nx)[None, :, :]
            dist = JointPmf([("W", wx.size_of("W")), ("U", nx), ("X", nx)], t3)
            dm = named_region_polytope("dm", dist, c, LeakagePair(INF, INF))
            dg = named_region_polytope("degmsg", wx, c)
            for a, b in pairs.items():
                worst = max(worst, abs(dm.rhs(a) - dg.rhs(b)))
        return worst, ""

    return _run("dm_vs_degmsg", trials, body)


def saturation_battery(trials: int = 200, seed: int = 0) -> CheckResult:
    """Above the saturation threshold a leakage limit leaves the private slice unchanged."""

    def body():
        worst, checked = 0.0, 0
        for t in range(trials):
            rng = _rng(seed, "saturation", t)
            sizes = tuple(int(v) for v in rng.integers(2, 4, size=4))
            c = random_channel(rng, sizes[3], int(rng.integers(2, 4)), int(rng.integers(2, 4)))
            aux = _random_joint(rng, ("U0", "U1", "U2", "X"), sizes)
            thr = [leakage_threshold(aux, c, j) for j in (1, 2)]
            ls = []
            for j in (1, 2):
                u = rng.random()
                if u < 0.15:
                    ls.append(thr[j - 1])
                elif u < 0.8:
                    ls.append(thr[j - 1] + rng.uniform(0.0, 0.5))
                else:
                    ls.append(rng.uniform(0.0, max(thr[j - 1], 1e-3)))
            L = LeakagePair(*ls)
            for j in (1, 2):
                if L[j] >= thr[j - 1]:
                    checked += 1
                    worst = max(worst, saturation_deviation(aux, c, L, j, n_dirs=N_FAN))
        return worst, f"{checked} saturated indices"

    return _run("saturation", trials, body)


def sd_substitution_battery(trials: int = 100, seed: int = 0, c: Dmbc | None = None) -> CheckResult:
    """Inner bound with ``U0 = W, U1 = Y1, U2 = V`` against the semi-deterministic rows.

    Shared rows must agree; the extra inner-bound sum row must not be tighter
    than the semi-deterministic sum row whose common term is taken at Y2.
    """
    c = c or blackwell()

    def body():
        f1 = output_map(c, 1)
        worst = 0.0
        for t in range(trials):
            rng = _rng(seed, "sd_substitution", t)
            nw, nv = (int(v) for v in rng.integers(2, 4, size=2))
            dist = _random_joint(rng, ("W", "V", "X"), (nw, nv, c.x_size))
            aux = sd_aux_chain(dist, f1, c.y1_size)
            L = LeakagePair(_leak_choice(rng), _leak_choice(rng))
            p = inner_bound_polytope(aux, c, L)
            q = named_region_polytope("sd", dist, c, L)
            qmap = dict(zip(q.labels, q.b))
            for lab, v in zip(p.labels, p.b):
                if lab in qmap:
                    worst = max(worst, abs(float(v) - float(qmap[lab])))
                elif lab == "sum_leak2":
                    worst = max(worst, float(qmap["sum_common_y2"]) - float(v))
                else:
                    return INF, f"unmatched row {lab}"
            missing = set(qmap) - set(p.labels)
            if missing:
                return INF, f"rows {sorted(missing)} missing from the inner bound"
        return worst, ""

    return _run("sd_substitution", trials, body)


def sd_aux_chain(dist: JointPmf, f1, y1_size: int) -> JointPmf:
    """(U0, U1, U2, X) law with ``U0 = W``, ``U1 = f1(X)`` and ``U2 = V``."""
    d = dist.transpose(("W", "V", "X"))
    nw, nv, nx = d.shape
    t = np.zeros((nw, y1_size, nv, nx))
    for x in range(nx):
        t[:, f1[x], :, x] = d.tensor[:, :, x]
    return JointPmf([("U0", nw), ("U1", y1_size), ("U2", nv), ("X", nx)], t)


def reduction_suite(trials: int = 20, seed: int = 0, lift_trials: int = 100) -> SuiteReport:
    """Every special-case and lift check, one :class:`CheckResult` each."""
    rep = SuiteReport(seed=seed)
    rep.checks.append(marton_suite(trials, seed))
    rep.checks.append(liu_suite(trials, seed))
    for tgt in SD_CORNERS:
        rep.checks.append(sd_corner_suite(tgt, trials, seed))
    rep.checks.append(dm_ck_suite(trials, seed))
    rep.checks.append(dm_degmsg_suite(trials, seed))
    rep.checks.append(lift_suite_secret_pair(lift_trials, seed))
    rep.checks.append(lift_suite_confidential(lift_trials, seed))
    rep.checks.append(deterministic_suite(trials, seed))
    return rep
