"""Named information quantities used as constants in rate inequalities."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..pmf import JointPmf

_KIND_ORDER = {"1": 0, "H": 1, "I": 2, "L": 3}


@dataclass(frozen=True)
class InfoSymbol:
    """An entropy ``H(A|C)``, a mutual information ``I(A;B|C)``, a leakage
    threshold ``L1``/``L2``, or the unit constant.

    Build instances with :func:`H`, :func:`I`, :func:`L` or :func:`parse_symbol`;
    those canonicalise the axis groups so equal quantities compare equal.
    """

    kind: str
    groups: tuple = ()
    index: int = 0

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.index, self.groups)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if self.kind == "1":
            return "1"
        if self.kind == "L":
            return f"L{self.index}"
        if self.kind == "H":
            a, c = self.groups
            body = ",".join(a)
            return f"H({body}|{','.join(c)})" if c else f"H({body})"
        a, b, c = self.groups
        body = f"{','.join(a)};{','.join(b)}"
        return f"I({body}|{','.join(c)})" if c else f"I({body})"

    __repr__ = __str__

    @property
    def is_leakage(self) -> bool:
        return self.kind == "L"

    @property
    def is_constant(self) -> bool:
        return self.kind == "1"

    def axes(self) -> frozenset:
        return frozenset(n for g in self.groups for n in g)

    def evaluate(self, joint: JointPmf) -> float:
        """Numeric value on ``joint``; leakage symbols cannot be evaluated here."""
        if self.kind == "1":
            return 1.0
        if self.kind == "L":
            raise ValueError(f"{self} is a leakage threshold, not a function of the joint")
        if self.kind == "H":
            a, c = self.groups
            return joint.entropy(a + c) - joint.entropy(c)
        a, b, c = self.groups
        t1, t2 = sorted([joint.entropy(a + c), joint.entropy(b + c)])
        return t1 + t2 - joint.entropy(a + b + c) - joint.entropy(c)


ONE = InfoSymbol("1")


def _group(names) -> tuple:
    if isinstance(names, str):
        names = [n for n in names.split(",") if n]
    g = tuple(sorted(set(names)))
    if len(g) != len(list(names)):
        raise ValueError(f"repeated axis name in group {list(names)}")
    return g


def H(a, c=()) -> InfoSymbol:
    a, c = _group(a), _group(c)
    if not a:
        raise ValueError("entropy symbol needs a nonempty group")
    if set(a) & set(c):
        raise ValueError(f"H({a}|{c}): groups overlap")
    return InfoSymbol("H", (a, c))


def I(a, b, c=()) -> InfoSymbol:  # noqa: E743
    a, b, c = _group(a), _group(b), _group(c)
    if not a or not b:
        raise ValueError("mutual information symbol needs two nonempty groups")
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise ValueError(f"I({a};{b}|{c}): groups overlap")
    if b < a:
        a, b = b, a
    return InfoSymbol("I", (a, b, c))


def L(j: int) -> InfoSymbol:
    if j not in (1, 2):
        raise ValueError(f"leakage index must be 1 or 2, got {j}")
    return InfoSymbol("L", (), j)


_SYM_RE = re.compile(r"\s*([HI])\s*\(([^()]*)\)\s*$")


def parse_symbol(text: str) -> InfoSymbol:
    text = text.strip()
    if text in ("L1", "L2"):
        return L(int(text[1]))
    m = _SYM_RE.match(text)
    if not m:
        raise ValueError(f"unknown symbol form {text!r}")
    kind, body = m.groups()
    body = body.replace(" ", "")
    main, _, cond = body.partition("|")
    if kind == "H":
        if ";" in main:
            raise ValueError(f"entropy symbol {text!r} must not contain ';'")
        return H(main, cond)
    parts = main.split(";")
    if len(parts) != 2:
        raise ValueError(f"mutual information symbol {text!r} needs exactly one ';'")
    return I(parts[0], parts[1], cond)
