"""Finite-alphabet probability objects and the information measures built on them.

All logarithms are base 2, so every quantity is in bits.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-9
# probabilities below this are exact zeros inside log terms
ZERO_TOL = 1e-15


def _plogp(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > ZERO_TOL]
    # a marginal summing to 1 + eps would otherwise give -0.0000...
    return max(0.0, float(-np.sum(p * np.log2(p))))


def binary_entropy(p: float) -> float:
    """Binary entropy H_b(p) in bits, with 0 log 0 = 0."""
    if not (-1e-12 <= p <= 1 + 1e-12):
        raise ValueError(f"binary_entropy: probability {p!r} outside [0, 1]")
    p = min(max(float(p), 0.0), 1.0)
    if p <= ZERO_TOL or p >= 1.0 - ZERO_TOL:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def _check_probs(arr: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what}: non-finite entry")
    if np.any(arr < 0):
        idx = np.unravel_index(int(np.argmin(arr)), arr.shape)
        raise ValueError(f"{what}: negative entry {arr[idx]!r} at index {tuple(int(i) for i in idx)}")
    total = float(arr.sum())
    if abs(total - 1.0) > NORM_TOL:
        raise ValueError(f"{what}: entries sum to {total!r}, not 1 (tolerance {NORM_TOL})")
    return arr / total


class Pmf:
    """A probability vector over ``range(alphabet_size)``."""

    __slots__ = ("probs",)

    def __init__(self, probs: Sequence[float]):
        arr = np.array(probs, dtype=float).ravel()
        if arr.size == 0:
            raise ValueError("Pmf: empty alphabet")
        arr = _check_probs(arr, "Pmf")
        arr.flags.writeable = False
        self.probs = arr

    @property
    def alphabet_size(self) -> int:
        return int(self.probs.size)

    def entropy(self) -> float:
        return _plogp(self.probs)

    def __repr__(self):
        return f"Pmf({self.probs.tolist()!r})"


class JointPmf:
    """Dense joint distribution over named finite axes.

    Parameters
    ----------
    axes : sequence of (name, size)
        Axis names must be unique; order fixes the tensor layout.
    tensor : array_like
        Nonnegative entries, either already shaped by the axis sizes or a
        flat row-major vector of matching length.

    The tensor is renormalised when its total mass is within ``1e-9`` of one
    and rejected otherwise. Instances are immutable and cache the marginal
    entropies they have been asked for.
    """

    __slots__ = ("axes", "tensor", "_index", "_hcache")

    def __init__(self, axes: Sequence[tuple[str, int]], tensor):
        axes = tuple((str(n), int(s)) for n, s in axes)
        names = [n for n, _ in axes]
        if len(set(names)) != len(names):
            raise ValueError(f"JointPmf: duplicate axis names in {names}")
        if any(s <= 0 for _, s in axes):
            raise ValueError(f"JointPmf: axis sizes must be positive, got {axes}")
        shape = tuple(s for _, s in axes)
        arr = np.array(tensor, dtype=float)
        if arr.size != int(np.prod(shape, dtype=np.int64)):
            raise ValueError(
                f"JointPmf: tensor has {arr.size} entries, axes {axes} need {int(np.prod(shape))}"
            )
        arr = _check_probs(arr.reshape(shape), "JointPmf")
        arr.flags.writeable = False
        self.axes = axes
        self.tensor = arr
        self._index = {n: i for i, n in enumerate(names)}
        self._hcache: dict[frozenset, float] = {}

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.tensor.shape

    def size_of(self, name: str) -> int:
        return self.tensor.shape[self._axis(name)]

    def _axis(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown axis {name!r}; joint has {list(self.names)}") from None

    def marginal(self, names: Iterable[str]) -> np.ndarray:
        """Marginal tensor over ``names``, with axes in the order given."""
        names = list(names)
        idx = [self._axis(n) for n in names]
        if len(set(idx)) != len(idx):
            raise ValueError(f"repeated axis in {names}")
        drop = tuple(i for i in range(self.tensor.ndim) if i not in idx)
        m = self.tensor.sum(axis=drop) if drop else self.tensor
        kept = [i for i in range(self.tensor.ndim) if i in idx]
        return np.transpose(m, [kept.index(i) for i in idx])

    def marginal_pmf(self, names: Iterable[str]) -> "JointPmf":
        names = list(names)
        return JointPmf([(n, self.size_of(n)) for n in names], self.marginal(names))

    def entropy(self, names: Iterable[str]) -> float:
        key = frozenset(names)
        for n in key:
            self._axis(n)
        if not key:
            return 0.0
        h = self._hcache.get(key)
        if h is None:
            h = _plogp(self.marginal(sorted(key)))
            self._hcache[key] = h
        return h

    def rename(self, mapping: dict[str, str]) -> "JointPmf":
        return JointPmf([(mapping.get(n, n), s) for n, s in self.axes], self.tensor)

    def transpose(self, names: Sequence[str]) -> "JointPmf":
        """Same law with axes reordered to ``names`` (which must be a permutation)."""
        if sorted(names) != sorted(self.names):
            raise ValueError(f"transpose: {list(names)} is not a permutation of {list(self.names)}")
        return JointPmf([(n, self.size_of(n)) for n in names], self.marginal(names))

    def to_dict(self) -> dict:
        return {
            "axes": [{"name": n, "size": s} for n, s in self.axes],
            "tensor": self.tensor.ravel().tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "JointPmf":
        try:
            axes = [(a["name"], a["size"]) for a in data["axes"]]
            tensor = data["tensor"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"distribution file: missing field {exc}") from None
        return cls(axes, tensor)

    def __repr__(self):
        return f"JointPmf(axes={list(self.axes)!r})"


def _names(group) -> list[str]:
    if isinstance(group, str):
        return [group]
    return list(group)


def entropy(joint: JointPmf, axes) -> float:
    """Entropy in bits of the marginal of ``joint`` over ``axes``."""
    names = _names(axes)
    if not names:
        raise ValueError("entropy: need at least one axis")
    return joint.entropy(names)


def conditional_entropy(joint: JointPmf, a, c=()) -> float:
    a, c = _names(a), _names(c)
    return joint.entropy(a + c) - joint.entropy(c)


def conditional_mutual_information(joint: JointPmf, a, b, c=()) -> float:
    """I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C); ``c`` may be empty."""
    a, b, c = _names(a), _names(b), _names(c)
    if not a or not b:
        raise ValueError("conditional_mutual_information: groups a and b must be nonempty")
    sa, sb, sc = set(a), set(b), set(c)
    if sa & sb or sa & sc or sb & sc:
        raise ValueError(f"overlapping axis groups: {a} ; {b} | {c}")
    if len(sa) != len(a) or len(sb) != len(b) or len(sc) != len(c):
        raise ValueError("repeated axis inside a group")
    # sorted keys make I(A;B|C) and I(B;A|C) follow the same arithmetic path
    t1, t2 = sorted([joint.entropy(a + c), joint.entropy(b + c)])
    return t1 + t2 - joint.entropy(a + b + c) - joint.entropy(c)


def mutual_information(joint: JointPmf, a, b) -> float:
    return conditional_mutual_information(joint, a, b, ())
