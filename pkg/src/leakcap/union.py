"""Approximate union-over-distributions regions by sampling and local search."""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .channel import Dmbc, induce_joint
from .fme.catalog import REGIONS
from .frontier import FrontierCurve
from .pmf import JointPmf
from .polytope import direction_fan
from .regions import LeakagePair, _as_id, evaluate_region, named_region_polytope

MAX_GRID_POINTS = 20000


@dataclass(frozen=True)
class SearchBudget:
    """Sampling effort for a union search.

    ``grid_steps`` is the number of mass quanta per simplex (0 disables the
    grid), ``random_samples`` the number of flat-Dirichlet draws,
    ``refine_iters`` the rounds of local search per restart (0 disables it).
    """

    grid_steps: int = 4
    random_samples: int = 200
    refine_iters: int = 20
    seed: int = 0

    def __post_init__(self):
        for name in ("grid_steps", "random_samples", "refine_iters"):
            if int(getattr(self, name)) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.grid_steps == 0 and self.random_samples == 0:
            raise ValueError("budget samples no distribution at all")


# ------------------------------------------------------------ parametrisation


@dataclass(frozen=True)
class _Layout:
    """How a region's input law is assembled from independent simplices.

    Unconstrained signatures use one simplex over the whole joint. With a
    Markov chain ``source - via - X`` the law is ``P(source, via) P(x | via)``.
    """

    axes: tuple
    sizes: tuple
    via: tuple | None

    @property
    def head_axes(self) -> tuple:
        return tuple(a for a in self.axes if a != "X") if self.via is not None else self.axes

    def factor_sizes(self) -> list:
        size = dict(zip(self.axes, self.sizes))
        if self.via is None:
            return [int(np.prod(self.sizes))]
        n_via = int(np.prod([size[a] for a in self.via]))
        head = int(np.prod([size[a] for a in self.head_axes]))
        return [head] + [size["X"]] * n_via

    def build(self, factors) -> JointPmf:
        size = dict(zip(self.axes, self.sizes))
        if self.via is None:
            return JointPmf(list(zip(self.axes, self.sizes)), factors[0])
        head = self.head_axes
        ph = np.asarray(factors[0]).reshape([size[a] for a in head])
        cond = np.array(factors[1:]).reshape([size[a] for a in self.via] + [size["X"]])
        # broadcast P(x | via) over the head axes
        letters = "abcdefgh"
        hl = "".join(letters[i] for i in range(len(head)))
        vl = "".join(hl[head.index(a)] for a in self.via)
        t = np.einsum(f"{hl},{vl}z->{hl}z", ph, cond)
        return JointPmf([(a, size[a]) for a in head] + [("X", size["X"])], t)


def _layout(tag: str, sizes: dict, markov_via=None) -> _Layout:
    entry = REGIONS[tag]
    axes = entry.signature
    via = entry.markov[1] if entry.markov is not None else None
    if markov_via is not None:
        if via is not None:
            raise ValueError(f"region {tag} already fixes its input chain through {via}")
        markov_via = tuple(markov_via)
        bad = [a for a in markov_via if a not in axes or a == "X"]
        if bad or not markov_via:
            raise ValueError(f"markov_via must name auxiliary axes of {axes}, got {markov_via}")
        via = markov_via
    return _Layout(axes, tuple(int(sizes[a]) for a in axes), via)


def default_sizes(tag: str, c: Dmbc, aux_size: int = 2) -> dict:
    return {a: (c.x_size if a == "X" else aux_size) for a in REGIONS[tag].signature}


def _compositions(n: int, k: int):
    """All k-tuples of nonnegative integers summing to n (stars and bars)."""
    for bars in itertools.combinations(range(n + k - 1), k - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(n + k - 1 - prev - 1)
        yield out


def simplex_grid_points(k: int, steps: int, limit: int = MAX_GRID_POINTS) -> np.ndarray:
    if steps <= 0:
        return np.zeros((0, k))
    pts = []
    for comp in _compositions(steps, k):
        pts.append(np.array(comp, dtype=float) / steps)
        if len(pts) >= limit:
            break
    return np.array(pts)


def _rng(seed: int, k: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(k)])


def _random_factors(layout: _Layout, seed: int, k: int) -> list:
    rng = _rng(seed, k)
    return [rng.dirichlet(np.ones(n)) for n in layout.factor_sizes()]


def _grid_factors(layout: _Layout, steps: int):
    fs = layout.factor_sizes()
    if layout.via is None:
        for p in simplex_grid_points(fs[0], steps):
            yield [p]
        return
    # Markov layouts: grid the head law, deterministic maps for P(x | via)
    n_via = len(fs) - 1
    x = fs[1]
    maps = itertools.product(range(x), repeat=n_via) if x**n_via <= 64 else [tuple(range(n_via))]
    maps = list(maps)
    count = 0
    for p in simplex_grid_points(fs[0], steps):
        for m in maps:
            rows = [np.eye(x)[i % x] for i in m]
            yield [p] + rows
            count += 1
            if count >= MAX_GRID_POINTS:
                return


def sample_aux_chains(sizes, budget: SearchBudget, axes=None, tag=None, markov_via=None):
    """Deterministic stream of ``(sample_id, JointPmf)`` pairs.

    Grid points of the simplex come first, then ``random_samples``
    flat-Dirichlet draws; draw ``k`` depends only on ``(seed, k)``.

    Parameters
    ----------
    sizes : sequence of int or dict
        Axis sizes, in the order of ``axes`` when a sequence.
    axes : sequence of str, optional
        Axis names; default ``U0, U1, U2, X`` (or single-axis ``A0...``).
    tag : str, optional
        Region tag whose Markov structure the samples must respect.
    markov_via : tuple of str, optional
        Extra restriction to laws where X depends on the other auxiliaries
        only through these axes, e.g. ``("V",)`` for ``W - V - X``. Needs
        ``tag``; by default the sampler is unrestricted.
    """
    if isinstance(sizes, dict):
        axes = tuple(sizes)
        sz = dict(sizes)
    else:
        sizes = [int(s) for s in sizes]
        if axes is None:
            axes = ("U0", "U1", "U2", "X") if len(sizes) == 4 else tuple(f"A{i}" for i in range(len(sizes)))
        sz = dict(zip(axes, sizes))
    if any(s <= 0 for s in sz.values()):
        raise ValueError("axis sizes must be positive")
    if tag is not None:
        layout = _layout(tag, sz, markov_via)
    elif markov_via is not None:
        raise ValueError("markov_via needs a region tag")
    else:
        layout = _Layout(tuple(axes), tuple(sz[a] for a in axes), None)
    for g, f in enumerate(_grid_factors(layout, budget.grid_steps)):
        yield f"g{g}", layout.build(f)
    for k in range(budget.random_samples):
        yield f"s{k}", layout.build(_random_factors(layout, budget.seed, k))


# ------------------------------------------------------------------ search


def _frontier_axes(tag: str) -> tuple:
    ax = REGIONS[tag].rate_axes
    return ("R1", "R2") if len(ax) == 3 else ax


def _plane_vertices(poly, tag: str) -> np.ndarray:
    if len(poly.axes) == 3:
        poly = poly.section({"R0": 0.0})
    return poly.vertices()


def _evaluate(tag: str, joint: JointPmf, c: Dmbc, L: LeakagePair):
    return evaluate_region(tag, induce_joint(joint, c), L)


def _perturb_search(tag, layout, factors, c, L, w, iters, restarts=3, step0=0.25):
    """Coordinate perturbation maximising the support value in direction ``w``."""

    def score(fs):
        p = _evaluate(tag, layout.build(fs), c, L)
        if len(p.axes) == 3:
            p = p.section({"R0": 0.0})
        return p.support_value(w)

    best_f = [np.array(f, dtype=float) for f in factors]
    best = score(best_f)
    for r in range(restarts):
        step = step0 * (0.5**r)
        for _ in range(iters):
            improved = False
            for fi, f in enumerate(best_f):
                if len(f) < 2:
                    continue
                for i in range(len(f)):
                    for sgn in (1.0, -1.0):
                        g = f.copy()
                        g[i] = max(0.0, g[i] + sgn * step)
                        tot = g.sum()
                        if tot <= 0:
                            continue
                        g /= tot
                        cand = list(best_f)
                        cand[fi] = g
                        v = score(cand)
                        if v > best + 1e-13:
                            best, best_f, f, improved = v, cand, g, True
            if not improved:
                step *= 0.5
                if step < 1e-7:
                    break
    return best_f, best


def fingerprint(joint: JointPmf) -> str:
    h = hashlib.sha1()
    h.update(repr(joint.axes).encode())
    h.update(np.round(joint.tensor, 12).tobytes())
    return h.hexdigest()[:12]


def union_frontier(rid, c: Dmbc, L: LeakagePair, budget: SearchBudget, sizes=None, markov_via=None) -> FrontierCurve:
    """Nondominated staircase of a region's union over sampled input laws."""
    return union_search(rid, c, L, budget, sizes, markov_via=markov_via).curve


def union_search(rid, c: Dmbc, L: LeakagePair, budget: SearchBudget, sizes=None,
                 n_refine_dirs: int = 9, check_class: bool = True, markov_via=None) -> "UnionResult":
    """Sample, evaluate and locally refine; keep the nondominated vertices.

    Three-axis regions are cut at ``R0 = 0`` and reported over ``(R1, R2)``;
    two-axis regions use their own axes. The result keeps the laws behind
    every frontier point so each can be re-evaluated. ``markov_via``
    restricts the sampled laws as in :func:`sample_aux_chains`.
    """
    rid = _as_id(rid)
    tag = rid.tag
    sz = dict(sizes) if sizes is not None else default_sizes(tag, c)
    layout = _layout(tag, sz, markov_via)
    if check_class:
        # one evaluation validates signature, class and Markov structure
        first = next(iter(sample_aux_chains(sz, SearchBudget(0, 1, 0, budget.seed), tag=tag,
                                            markov_via=markov_via)))[1]
        named_region_polytope(rid, first, c, L)

    pts, prov = [], []
    dists: dict = {}
    supports: list = []
    dirs = direction_fan(n_refine_dirs, 2)
    for sid, joint in sample_aux_chains(sz, budget, tag=tag, markov_via=markov_via):
        poly = _evaluate(tag, joint, c, L)
        V = _plane_vertices(poly, tag)
        if V.shape[0] == 0:
            continue
        dists[sid] = joint
        for v in V:
            pts.append(v)
            prov.append(sid)
        plane = poly.section({"R0": 0.0}) if len(poly.axes) == 3 else poly
        supports.append((sid, [plane.support_value(w) for w in dirs]))

    if budget.refine_iters > 0 and supports:
        for d, w in enumerate(dirs):
            sid = max(supports, key=lambda s: (s[1][d], -list(dists).index(s[0])))[0]
            start = _factors_of(layout, dists[sid])
            fs, _ = _perturb_search(tag, layout, start, c, L, w, budget.refine_iters)
            joint = layout.build(fs)
            rid_ = f"{sid}r{d}"
            V = _plane_vertices(_evaluate(tag, joint, c, L), tag)
            if V.shape[0]:
                dists[rid_] = joint
                for v in V:
                    pts.append(v)
                    prov.append(rid_)

    curve = FrontierCurve(np.array(pts).reshape(-1, 2), prov, label=f"{tag} L={L}")
    used = set(curve.provenance)
    return UnionResult(curve, {k: v for k, v in dists.items() if k in used}, _frontier_axes(tag), tag, L, budget)


def _factors_of(layout: _Layout, joint: JointPmf) -> list:
    """Invert :meth:`_Layout.build` for a law built by that layout."""
    if layout.via is None:
        return [joint.transpose(layout.axes).tensor.ravel().copy()]
    head = layout.head_axes
    ph = joint.marginal(head).ravel()
    pvx = joint.marginal(list(layout.via) + ["X"])
    size_x = joint.size_of("X")
    pvx = pvx.reshape(-1, size_x)
    rows = []
    for r in pvx:
        s = r.sum()
        rows.append(r / s if s > 0 else np.full(size_x, 1.0 / size_x))
    return [ph.copy()] + rows


@dataclass
class UnionResult:
    curve: FrontierCurve
    sources: dict
    axes: tuple
    tag: str
    leakage: LeakagePair
    budget: SearchBudget

    @property
    def envelope(self) -> FrontierCurve:
        return self.curve.envelope()

    def provenance_table(self) -> dict:
        return {
            "region": self.tag,
            "axes": list(self.axes),
            "leakage": [self.leakage.l1, self.leakage.l2],
            "seed": self.budget.seed,
            "sources": {
                k: {"fingerprint": fingerprint(j), **j.to_dict()} for k, j in sorted(self.sources.items())
            },
        }

    def provenance_json(self) -> str:
        def enc(o):
            if isinstance(o, float) and math.isinf(o):
                return "inf"
            return o

        t = self.provenance_table()
        t["leakage"] = [enc(v) for v in t["leakage"]]
        return json.dumps(t, indent=1, sort_keys=True)
