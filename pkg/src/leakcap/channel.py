"""Broadcast channel kernels, structural classification and joint construction."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .pmf import NORM_TOL, JointPmf

PD_TOL = 1e-8
_BINARY_TOL = 1e-12


class ChannelError(ValueError):
    pass


class Dmbc:
    """Two-receiver broadcast channel ``P(y1, y2 | x)``.

    ``kernel`` is indexed ``[x, y1, y2]``; a flat row-major vector is
    accepted as well when the three sizes are given.
    """

    __slots__ = ("kernel",)

    def __init__(self, kernel, x_size=None, y1_size=None, y2_size=None, validate=True):
        arr = np.array(kernel, dtype=float)
        if x_size is not None:
            shape = (int(x_size), int(y1_size), int(y2_size))
            if arr.size != shape[0] * shape[1] * shape[2]:
                raise ChannelError(f"kernel has {arr.size} entries, sizes {shape} need {np.prod(shape)}")
            arr = arr.reshape(shape)
        if arr.ndim != 3 or 0 in arr.shape:
            raise ChannelError(f"kernel must be a nonempty 3-d array [x, y1, y2], got shape {arr.shape}")
        arr.flags.writeable = False
        self.kernel = arr
        if validate:
            validate_channel(self)

    @property
    def x_size(self) -> int:
        return self.kernel.shape[0]

    @property
    def y1_size(self) -> int:
        return self.kernel.shape[1]

    @property
    def y2_size(self) -> int:
        return self.kernel.shape[2]

    def y1_kernel(self) -> np.ndarray:
        """Marginal kernel ``P(y1|x)`` as an ``[x, y1]`` array."""
        return self.kernel.sum(axis=2)

    def y2_kernel(self) -> np.ndarray:
        return self.kernel.sum(axis=1)

    def to_dict(self) -> dict:
        return {
            "x_size": self.x_size,
            "y1_size": self.y1_size,
            "y2_size": self.y2_size,
            "kernel": self.kernel.ravel().tolist(),
        }

    def __repr__(self):
        return f"Dmbc(x_size={self.x_size}, y1_size={self.y1_size}, y2_size={self.y2_size})"


def validate_channel(c: Dmbc) -> None:
    """Raise :class:`ChannelError` unless every row ``P(.,.|x)`` is a distribution."""
    k = c.kernel
    if not np.all(np.isfinite(k)):
        raise ChannelError("kernel contains non-finite entries")
    for x in range(k.shape[0]):
        row = k[x]
        if np.any(row < 0):
            raise ChannelError(f"kernel row x={x} has a negative entry ({row.min()!r})")
        s = float(row.sum())
        if abs(s - 1.0) > NORM_TOL:
            raise ChannelError(f"kernel row x={x} sums to {s!r}, not 1")


@dataclass(frozen=True)
class ChannelClass:
    deterministic: bool
    semi_deterministic: bool
    physically_degraded: bool


def _is_01(a: np.ndarray) -> bool:
    return bool(np.all((np.abs(a) <= _BINARY_TOL) | (np.abs(a - 1.0) <= _BINARY_TOL)))


def degrading_kernel(c: Dmbc, tol: float = PD_TOL):
    """Return ``T[y1, y2]`` with ``P(y1,y2|x) = P(y1|x) T(y2|y1)``, or None.

    Each ``y1`` column is fitted by least squares over the inputs that reach
    it, then checked for stochasticity and residual within ``tol``.
    """
    k = c.kernel
    p1 = c.y1_kernel()
    T = np.full((c.y1_size, c.y2_size), 1.0 / c.y2_size)
    for y1 in range(c.y1_size):
        w = p1[:, y1]
        denom = float(w @ w)
        if denom <= 0.0:
            continue  # unreachable output, any row works
        t = (w @ k[:, y1, :]) / denom
        if np.any(t < -tol) or abs(t.sum() - 1.0) > tol:
            return None
        resid = k[:, y1, :] - np.outer(w, t)
        if np.max(np.abs(resid)) > tol:
            return None
        T[y1] = np.clip(t, 0.0, None)
    return T


def classify(c: Dmbc) -> ChannelClass:
    det = _is_01(c.kernel)
    sd = _is_01(c.y1_kernel())
    pd = degrading_kernel(c) is not None
    return ChannelClass(deterministic=det, semi_deterministic=sd, physically_degraded=pd)


def blackwell() -> Dmbc:
    """Blackwell channel: X=0 -> (0,1), X=1 -> (1,0), X=2 -> (0,0)."""
    k = np.zeros((3, 2, 2))
    k[0, 0, 1] = 1.0
    k[1, 1, 0] = 1.0
    k[2, 0, 0] = 1.0
    return Dmbc(k)


def from_marginals(q1, t) -> Dmbc:
    """Physically degraded channel ``Q(y1|x) T(y2|y1)``."""
    q1 = np.asarray(q1, dtype=float)
    t = np.asarray(t, dtype=float)
    return Dmbc(q1[:, :, None] * t[None, :, :])


class AuxChain:
    """Joint law of (U0, U1, U2, X) feeding the inner bound."""

    AXES = ("U0", "U1", "U2", "X")
    __slots__ = ("joint",)

    def __init__(self, joint: JointPmf):
        if set(joint.names) != set(self.AXES) or len(joint.names) != 4:
            raise ValueError(f"AuxChain needs axes {self.AXES}, got {joint.names}")
        self.joint = joint.transpose(self.AXES)

    @classmethod
    def from_tensor(cls, tensor):
        t = np.asarray(tensor, dtype=float)
        return cls(JointPmf(list(zip(cls.AXES, t.shape)), t))


class OuterChain:
    """Joint law of (W, U, V, X) with ``X`` depending on ``W`` only through (U, V)."""

    AXES = ("W", "U", "V", "X")
    __slots__ = ("joint",)

    def __init__(self, joint: JointPmf, tol: float = 1e-9):
        if set(joint.names) != set(self.AXES) or len(joint.names) != 4:
            raise ValueError(f"OuterChain needs axes {self.AXES}, got {joint.names}")
        joint = joint.transpose(self.AXES)
        p = joint.tensor
        puv = p.sum(axis=(0, 3))
        pwuv = p.sum(axis=3)
        puvx = p.sum(axis=0)
        # P(w,u,v,x) P(u,v) == P(w,u,v) P(u,v,x)
        lhs = p * puv[None, :, :, None]
        rhs = pwuv[:, :, :, None] * puvx[None, :, :, :]
        dev = float(np.max(np.abs(lhs - rhs)))
        if dev > tol:
            raise ValueError(f"OuterChain: W - (U,V) - X Markov chain violated (deviation {dev:.3g})")
        self.joint = joint

    @classmethod
    def from_tensor(cls, tensor):
        t = np.asarray(tensor, dtype=float)
        return cls(JointPmf(list(zip(cls.AXES, t.shape)), t))


def _unwrap(aux) -> JointPmf:
    return aux.joint if isinstance(aux, (AuxChain, OuterChain)) else aux


def induce_joint(aux, c: Dmbc, y_names=("Y1", "Y2")) -> JointPmf:
    """Append the channel outputs to an input law that carries an ``X`` axis."""
    joint = _unwrap(aux)
    if "X" not in joint.names:
        raise ValueError(f"induce_joint: distribution has no X axis ({joint.names})")
    if joint.size_of("X") != c.x_size:
        raise ValueError(
            f"induce_joint: X axis has size {joint.size_of('X')}, channel expects {c.x_size}"
        )
    xi = joint.names.index("X")
    p = np.moveaxis(joint.tensor, xi, -1)
    out = p[..., :, None, None] * c.kernel
    out = np.moveaxis(out, p.ndim - 1, xi)
    axes = list(joint.axes) + [(y_names[0], c.y1_size), (y_names[1], c.y2_size)]
    return JointPmf(axes, out)


def _load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ChannelError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise ChannelError(f"{path}: top-level value must be an object")
    return data


def load_channel(path) -> Dmbc:
    data = _load_json(path)
    for field in ("x_size", "y1_size", "y2_size", "kernel"):
        if field not in data:
            raise ChannelError(f"{path}: missing field '{field}'")
    try:
        return Dmbc(data["kernel"], data["x_size"], data["y1_size"], data["y2_size"])
    except ChannelError as exc:
        raise ChannelError(f"{path}: field 'kernel': {exc}") from None


def save_channel(c: Dmbc, path) -> None:
    Path(path).write_text(json.dumps(c.to_dict(), indent=2) + "\n")


def load_distribution(path) -> JointPmf:
    data = _load_json(path)
    for field in ("axes", "tensor"):
        if field not in data:
            raise ChannelError(f"{path}: missing field '{field}'")
    try:
        return JointPmf.from_dict(data)
    except ValueError as exc:
        raise ChannelError(f"{path}: field 'tensor': {exc}") from None


def save_distribution(joint: JointPmf, path) -> None:
    Path(path).write_text(json.dumps(joint.to_dict(), indent=2) + "\n")


def random_channel(rng: np.random.Generator, x_size: int = 3, y1_size: int = 2, y2_size: int = 2,
                   kind: str = "general") -> Dmbc:
    """Random kernel of the requested class.

    ``kind`` is ``"general"`` (Dirichlet rows), ``"sd"`` (Y1 a random function
    of X, Y2 noisy) or ``"det"`` (both outputs functions of X).
    """
    k = np.zeros((x_size, y1_size, y2_size))
    for x in range(x_size):
        if kind == "general":
            k[x] = rng.dirichlet(np.ones(y1_size * y2_size)).reshape(y1_size, y2_size)
        elif kind == "sd":
            k[x, rng.integers(y1_size)] = rng.dirichlet(np.ones(y2_size))
        elif kind == "det":
            k[x, rng.integers(y1_size), rng.integers(y2_size)] = 1.0
        else:
            raise ValueError(f"unknown channel kind {kind!r}")
    return Dmbc(k)


def output_map(c: Dmbc, which: int) -> np.ndarray:
    """``y = f(x)`` for a deterministic output (``which`` is 1 or 2)."""
    k = c.y1_kernel() if which == 1 else c.y2_kernel()
    if not _is_01(k):
        raise ChannelError(f"output Y{which} is not a deterministic function of X")
    return np.argmax(k, axis=1)
