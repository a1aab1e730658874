"""Per-distribution evaluation of every rate region, and leakage saturation."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .channel import AuxChain, Dmbc, OuterChain, _unwrap, classify, induce_joint
from .fme.catalog import REGIONS, region_system
from .pmf import JointPmf, conditional_mutual_information, mutual_information
from .polytope import RatePolytope, direction_fan

INF = math.inf
MARKOV_TOL = 1e-9


def parse_leak(text) -> float:
    """Read a leakage value; ``inf`` (any case) is the no-constraint sentinel."""
    if isinstance(text, (int, float)):
        v = float(text)
    else:
        s = str(text).strip().lower()
        v = INF if s in ("inf", "infinity", "+inf") else float(s)
    if math.isnan(v) or v < 0:
        raise ValueError(f"leakage must be >= 0 or 'inf', got {text!r}")
    return v


@dataclass(frozen=True)
class LeakagePair:
    """Leakage allowances in bits per use; ``math.inf`` means unconstrained."""

    l1: float = 0.0
    l2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "l1", parse_leak(self.l1))
        object.__setattr__(self, "l2", parse_leak(self.l2))

    def __getitem__(self, j: int) -> float:
        if j == 1:
            return self.l1
        if j == 2:
            return self.l2
        raise IndexError(f"leakage index must be 1 or 2, got {j}")

    def replace(self, j: int, value) -> "LeakagePair":
        return LeakagePair(value, self.l2) if j == 1 else LeakagePair(self.l1, value)

    def __str__(self):
        return f"({self.l1}, {self.l2})"


UNCONSTRAINED = LeakagePair(INF, INF)


@dataclass(frozen=True)
class RatePoint:
    r0: float = 0.0
    r1: float = 0.0
    r2: float = 0.0

    def __post_init__(self):
        for name in ("r0", "r1", "r2"):
            if getattr(self, name) < 0:
                raise ValueError(f"rate {name} must be >= 0")

    def as_dict(self) -> dict:
        return {"R0": self.r0, "R1": self.r1, "R2": self.r2}


@dataclass(frozen=True)
class RegionId:
    """Region tag; ``RegionId.parse("det")`` and ``RegionId.parse("det(37)")`` agree."""

    tag: str

    def __post_init__(self):
        if self.tag not in REGIONS:
            raise ValueError(f"unknown region id {self.tag!r}; choose from {', '.join(REGIONS)}")

    @classmethod
    def parse(cls, text: str) -> "RegionId":
        tag = re.sub(r"\(.*\)$", "", str(text).strip())
        return cls(tag)

    @property
    def entry(self):
        return REGIONS[self.tag]

    @property
    def signature(self) -> tuple:
        return self.entry.signature

    @property
    def rate_axes(self) -> tuple:
        return self.entry.rate_axes

    def __str__(self):
        return self.tag


def _as_id(rid) -> RegionId:
    return rid if isinstance(rid, RegionId) else RegionId.parse(rid)


def _check_markov(joint: JointPmf, source, via, tol=MARKOV_TOL) -> None:
    dev = conditional_mutual_information(joint, list(source), ["X"], list(via))
    if dev > tol:
        raise ValueError(
            f"Markov chain {','.join(source)} - {','.join(via)} - X violated (I = {dev:.3g} bits)"
        )


def symbol_values(sys, joint: JointPmf, L: LeakagePair) -> dict:
    """Numeric value of every symbol in ``sys`` on ``joint``."""
    out = {}
    for s in sys.symbols:
        if s.kind == "L":
            out[s] = L[s.index]
        elif s.kind != "1":
            out[s] = s.evaluate(joint)
    return out


@dataclass(frozen=True)
class _Compiled:
    """Float matrices of a region system, for fast repeated substitution."""

    A: np.ndarray
    info: tuple  # information symbols, column order of C
    C: np.ndarray  # rows x info coefficients
    const: np.ndarray
    leak: np.ndarray  # rows x 2 leakage coefficients
    labels: tuple


_COMPILED: dict = {}


def _compiled(tag: str) -> _Compiled:
    comp = _COMPILED.get(tag)
    if comp is None:
        sys = region_system(tag)
        axes = REGIONS[tag].rate_axes
        info = tuple(sorted((s for s in sys.symbols if s.kind in ("H", "I")), key=lambda s: s.sort_key()))
        col = {s: k for k, s in enumerate(info)}
        n = len(sys.inequalities)
        A = np.zeros((n, len(axes)))
        C = np.zeros((n, len(info)))
        const = np.zeros(n)
        leak = np.zeros((n, 2))
        for i, q in enumerate(sys.inequalities):
            for v, c in q.lhs:
                A[i, axes.index(v)] = float(c)
            for s, c in q.rhs:
                if s.kind == "1":
                    const[i] += float(c)
                elif s.kind == "L":
                    leak[i, s.index - 1] += float(c)
                else:
                    C[i, col[s]] += float(c)
        if np.any(leak < 0):
            raise ValueError(f"region {tag} has a leakage term with a negative coefficient")
        comp = _Compiled(A, info, C, const, leak, tuple(q.label for q in sys.inequalities))
        _COMPILED[tag] = comp
    return comp


def evaluate_region(tag: str, joint: JointPmf, L: LeakagePair = UNCONSTRAINED) -> RatePolytope:
    """Substitute ``joint`` (already carrying Y1, Y2) into region ``tag``.

    Rows carrying an infinite leakage allowance are dropped. Numerically this
    agrees with :func:`leakcap.fme.substitute` on the region's system.
    """
    entry = REGIONS[tag]
    if not entry.uses_leakage:
        L = UNCONSTRAINED
    comp = _compiled(tag)
    vals = np.array([s.evaluate(joint) for s in comp.info])
    b = comp.const + (comp.C @ vals if len(vals) else 0.0)
    keep = np.ones(len(b), dtype=bool)
    for j in (0, 1):
        lj = L[j + 1]
        used = comp.leak[:, j] != 0
        if math.isinf(lj):
            keep &= ~used
        else:
            b = b + comp.leak[:, j] * lj
    labels = [lab for lab, k in zip(comp.labels, keep) if k]
    return RatePolytope(entry.rate_axes, comp.A[keep], b[keep], labels, label=tag)


def inner_bound_polytope(aux, c: Dmbc, L: LeakagePair) -> RatePolytope:
    """Leakage-constrained Marton inner bound for one (U0, U1, U2, X) law."""
    if not isinstance(aux, AuxChain):
        aux = AuxChain(_unwrap(aux))
    return evaluate_region("inner", induce_joint(aux, c), L)


def outer_bound_polytope(aux, c: Dmbc, L: LeakagePair) -> RatePolytope:
    """Outer bound for one (W, U, V, X) law; the Markov condition is enforced."""
    if not isinstance(aux, OuterChain):
        aux = OuterChain(_unwrap(aux))
    return evaluate_region("outer", induce_joint(aux, c), L)


def named_region_polytope(rid, dist, c: Dmbc, L: LeakagePair = UNCONSTRAINED) -> RatePolytope:
    """Evaluate any catalogued region on ``dist`` (axes = the id's signature).

    Raises
    ------
    ValueError
        On a signature mismatch, a violated input Markov chain, or a channel
        lacking the structural property the region needs.
    """
    rid = _as_id(rid)
    entry = rid.entry
    joint = _unwrap(dist)
    if set(joint.names) != set(entry.signature):
        raise ValueError(
            f"region {rid} needs auxiliary axes {entry.signature}, distribution has {joint.names}"
        )
    if entry.requires is not None:
        cls = classify(c)
        if not getattr(cls, entry.requires):
            raise ValueError(f"region {rid} requires a {entry.requires.replace('_', '-')} channel")
    if entry.markov is not None:
        _check_markov(joint, *entry.markov)
    return evaluate_region(rid.tag, induce_joint(joint, c), L)


# ----------------------------------------------------------- saturation


def leakage_threshold(aux, c: Dmbc, j: int) -> float:
    """``I(U0;Yj) + I(Uj; U_other, Y_other | U0)``: above it, ``Lj`` stops mattering."""
    if j not in (1, 2):
        raise ValueError(f"leakage index must be 1 or 2, got {j}")
    if not isinstance(aux, AuxChain):
        aux = AuxChain(_unwrap(aux))
    joint = induce_joint(aux, c)
    o = 3 - j
    return mutual_information(joint, ["U0"], [f"Y{j}"]) + conditional_mutual_information(
        joint, [f"U{j}"], [f"U{o}", f"Y{o}"], ["U0"]
    )


def private_section(p: RatePolytope) -> RatePolytope:
    """The ``R0 = 0`` slice of a polytope with a common-rate axis."""
    return p.section({"R0": 0.0}) if "R0" in p.axes else p


def saturation_check(aux, c: Dmbc, L: LeakagePair) -> tuple[bool, bool]:
    """Per index ``j``: is ``Lj`` at or above its saturation threshold?"""
    out = []
    for j in (1, 2):
        lj = L[j]
        out.append(math.isinf(lj) or lj >= leakage_threshold(aux, c, j))
    return tuple(out)


def saturation_deviation(aux, c: Dmbc, L: LeakagePair, j: int, n_dirs: int = 26) -> float:
    """Max support-value gap on the ``R0 = 0`` slice between ``Lj`` and ``Lj = inf``."""
    p = private_section(inner_bound_polytope(aux, c, L))
    q = private_section(inner_bound_polytope(aux, c, L.replace(j, INF)))
    dev = 0.0
    for w in direction_fan(n_dirs, 2):
        a, b = p.support_value(w), q.support_value(w)
        if math.isinf(a) and math.isinf(b) and a == b:
            continue
        dev = max(dev, abs(a - b))
    return dev


def leak_rows_dominated(aux, c: Dmbc, L: LeakagePair, j: int, tol: float = 1e-12) -> bool:
    """Row-wise redundancy argument on the ``R0 = 0`` slice.

    With R0 = 0 both private ``Lj`` rows are dominated by the leakage-free
    row ``R_j <= I(U0,Uj;Yj)``, and the ``Lj`` sum row by the sum row whose
    common term is taken at ``Yj``.
    """
    if math.isinf(L[j]):
        return True
    r = inner_bound_polytope(aux, c, L).rhs
    private = min(r(f"r{j}_leak"), r(f"r0{j}_leak")) >= r(f"r0{j}") - tol
    summed = r(f"sum_leak{j}") >= r(f"sum_common_y{j}") - tol
    return bool(private and summed)


def zero_polytope_values(p: RatePolytope) -> bool:
    """True when the polytope is exactly the origin."""
    V = p.vertices()
    return V.shape[0] == 1 and bool(np.allclose(V[0], 0.0, atol=1e-12))
