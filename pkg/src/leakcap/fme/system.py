"""Linear inequalities over rate variables with information-symbol constants.

Text format, one inequality per line::

    R0 + R1 <= I(U0,U1;Y1) - I(U1;U2|U0) + L1   # optional label
    Rp1 + Rp2 > I(U1;U2|U0)
    variables: R0, R1, R2                          # optional declaration

Terms are ``[rational*]Name``; bare rationals are constants. Either side may
mix rate variables and symbols; everything is normalised to
``sum(a_v * v) (<=|<) sum(c_s * s)``. ``#`` starts a comment, and a comment
that trails an inequality becomes its label.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .symbols import ONE, parse_symbol


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.msg, self.line, self.col = msg, line, col
        loc = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(loc + msg)


def _frac_items(d: Mapping) -> tuple:
    items = [(k, Fraction(v)) for k, v in d.items() if Fraction(v) != 0]
    return tuple(sorted(items, key=lambda kv: _key_order(kv[0])))


def _key_order(k):
    if isinstance(k, str):
        return (0, k)
    return (1,) + k.sort_key()


@dataclass(frozen=True)
class Inequality:
    """``sum(lhs[v] * v)  <=  sum(rhs[s] * s)`` (``<`` when ``strict``).

    ``lhs`` and ``rhs`` are sorted tuples of ``(key, Fraction)`` pairs with no
    zero coefficients. ``label`` is carried along but ignored by equality.
    """

    lhs: tuple
    rhs: tuple
    strict: bool = False
    label: str | None = field(default=None, compare=False)

    @classmethod
    def build(cls, lhs: Mapping, rhs: Mapping, strict=False, label=None) -> "Inequality":
        return cls(_frac_items(lhs), _frac_items(rhs), bool(strict), label)

    @property
    def variables(self) -> frozenset:
        return frozenset(k for k, _ in self.lhs)

    @property
    def symbols(self) -> frozenset:
        return frozenset(k for k, _ in self.rhs)

    def coef(self, var: str) -> Fraction:
        for k, v in self.lhs:
            if k == var:
                return v
        return Fraction(0)

    def lhs_dict(self) -> dict:
        return dict(self.lhs)

    def rhs_dict(self) -> dict:
        return dict(self.rhs)

    def scaled(self, f) -> "Inequality":
        f = Fraction(f)
        if f <= 0:
            raise ValueError("inequalities can only be scaled by positive factors")
        return Inequality(
            tuple((k, v * f) for k, v in self.lhs),
            tuple((k, v * f) for k, v in self.rhs),
            self.strict,
            self.label,
        )

    def primitive(self) -> "Inequality":
        """Positive rescaling to coprime integer coefficients."""
        coeffs = [v for _, v in self.lhs] + [v for _, v in self.rhs]
        if not coeffs:
            return self
        den = math.lcm(*(c.denominator for c in coeffs))
        num = math.gcd(*(abs(c.numerator) * (den // c.denominator) for c in coeffs))
        return self.scaled(Fraction(den, num))

    def with_label(self, label) -> "Inequality":
        return Inequality(self.lhs, self.rhs, self.strict, label)

    def is_trivial(self) -> bool:
        """``0 <= 0``; the strict ``0 < 0`` is an infeasibility and not trivial."""
        return not self.lhs and not self.rhs and not self.strict

    def __str__(self):
        return render_inequality(self)


@dataclass(frozen=True)
class IneqSystem:
    variables: tuple
    inequalities: tuple

    def __init__(self, variables: Iterable[str] = (), inequalities: Iterable[Inequality] = ()):
        ineqs = tuple(inequalities)
        seen = list(dict.fromkeys(variables))
        for q in ineqs:
            for v, _ in q.lhs:
                if v not in seen:
                    seen.append(v)
        object.__setattr__(self, "variables", tuple(seen))
        object.__setattr__(self, "inequalities", ineqs)

    def __len__(self):
        return len(self.inequalities)

    def __iter__(self):
        return iter(self.inequalities)

    @property
    def symbols(self) -> frozenset:
        out = set()
        for q in self.inequalities:
            out |= q.symbols
        return frozenset(out)

    def with_inequalities(self, ineqs, variables=None) -> "IneqSystem":
        return IneqSystem(self.variables if variables is None else variables, ineqs)

    def labelled(self, label: str) -> list[Inequality]:
        return [q for q in self.inequalities if q.label == label]

    def __str__(self):
        return render_system(self)


# ---------------------------------------------------------------- rendering


def _fmt_coef(c: Fraction, name: str, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if name == "":
        body = str(a)
    elif a == 1:
        body = name
    else:
        body = f"{a}*{name}"
    if first:
        return body if sign == "+" else "-" + body
    return f" {sign} {body}"


def _fmt_side(items, negate=False) -> str:
    if not items:
        return "0"
    out = []
    for i, (k, v) in enumerate(items):
        name = "" if k == ONE else str(k)
        out.append(_fmt_coef(-v if negate else v, name, i == 0))
    return "".join(out)


def render_inequality(q: Inequality) -> str:
    flip = bool(q.lhs) and all(v < 0 for _, v in q.lhs)
    if flip:
        op = ">" if q.strict else ">="
        text = f"{_fmt_side(q.lhs, True)} {op} {_fmt_side(q.rhs, True)}"
    else:
        op = "<" if q.strict else "<="
        text = f"{_fmt_side(q.lhs)} {op} {_fmt_side(q.rhs)}"
    if q.label:
        text += f"  # {q.label}"
    return text


def render_system(sys: IneqSystem) -> str:
    lines = []
    if sys.variables:
        lines.append("variables: " + ", ".join(sys.variables))
    lines.extend(render_inequality(q) for q in sys.inequalities)
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ parsing

_OPS = ("<=", ">=", "<", ">")
_NUM = r"\d+(?:\.\d+)?(?:/\d+)?"
_TERM_RE = re.compile(
    rf"^(?:(?P<coef>{_NUM})\s*\*\s*)?(?P<name>[HI]\s*\([^()]*\)|[A-Za-z_][A-Za-z0-9_']*)$|^(?P<const>{_NUM})$"
)


def _split_terms(expr: str, base_col: int, line: int):
    """Yield (sign, term_text, column) for a +/- separated affine expression."""
    terms = []
    depth = 0
    start = 0
    sign = 1
    i = 0
    s = expr
    pending_sign_only = True
    while i <= len(s):
        ch = s[i] if i < len(s) else None
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", line, base_col + i)
        if ch is None or (depth == 0 and ch in "+-"):
            chunk = s[start:i]
            if chunk.strip():
                col = base_col + start + (len(chunk) - len(chunk.lstrip()))
                terms.append((sign, chunk.strip(), col))
                pending_sign_only = False
            elif ch is not None and not pending_sign_only:
                raise ParseError(f"missing term before '{ch}'", line, base_col + i)
            if ch is None:
                break
            if chunk.strip():
                sign = 1 if ch == "+" else -1
            else:
                sign = sign * (1 if ch == "+" else -1)
            pending_sign_only = True
            start = i + 1
        i += 1
    if depth != 0:
        raise ParseError("unbalanced '('", line, base_col + len(s))
    if pending_sign_only and terms and s.strip().endswith(("+", "-")):
        raise ParseError("expression ends with an operator", line, base_col + len(s))
    return terms


def _parse_side(expr: str, base_col: int, line: int, variables: dict, symbols: dict, sign: int):
    stripped = expr.strip()
    if not stripped:
        raise ParseError("empty expression", line, base_col)
    for tsign, text, col in _split_terms(expr, base_col, line):
        m = _TERM_RE.match(text)
        if not m:
            raise ParseError(f"cannot parse term {text!r}", line, col)
        if m.group("const") is not None:
            c = Fraction(m.group("const"))
            symbols[ONE] = symbols.get(ONE, 0) + sign * tsign * c
            continue
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        name = m.group("name").replace(" ", "")
        c = sign * tsign * coef
        if name.startswith(("H(", "I(")) or name in ("L1", "L2"):
            try:
                sym = parse_symbol(name)
            except ValueError as exc:
                raise ParseError(str(exc), line, col) from None
            symbols[sym] = symbols.get(sym, 0) + c
        else:
            variables[name] = variables.get(name, 0) + c


def parse_inequality(text: str, line: int = 1, label=None) -> Inequality:
    body, _, comment = text.partition("#")
    if label is None and comment.strip():
        label = comment.strip()
    op_pos, op = None, None
    depth = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "<>":
            op = body[i : i + 2] if body[i : i + 2] in _OPS else ch
            op_pos = i
            break
        elif depth == 0 and ch == "=":
            raise ParseError("equalities are not supported; use two inequalities", line, i + 1)
    if op is None:
        raise ParseError("expected one of <=, <, >=, >", line, len(body.rstrip()) + 1)
    left = body[:op_pos]
    right = body[op_pos + len(op) :]
    if any(o in right for o in "<>"):
        raise ParseError("more than one comparison operator", line, op_pos + len(op) + 1)
    variables: dict = {}
    symbols: dict = {}
    # a <= b  <=>  vars(a) - vars(b) <= syms(b) - syms(a)
    _parse_side(left, 1, line, variables, symbols, sign=1)
    _parse_side(right, op_pos + len(op) + 1, line, variables, symbols, sign=-1)
    strict = op in ("<", ">")
    lhs = {v: c for v, c in variables.items()}
    rhs = {s: -c for s, c in symbols.items()}
    if op.startswith(">"):
        lhs = {v: -c for v, c in lhs.items()}
        rhs = {s: -c for s, c in rhs.items()}
    q = Inequality.build(lhs, rhs, strict, label)
    if q.is_trivial():
        raise ParseError("inequality has no nonzero coefficient", line, 1)
    return q


def parse_system(text: str) -> IneqSystem:
    """Parse the line-oriented inequality format into an :class:`IneqSystem`."""
    declared: list[str] = []
    ineqs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("variables:"):
            names = [n.strip() for n in body[len("variables:") :].split(",") if n.strip()]
            for n in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", n) or n in ("L1", "L2"):
                    raise ParseError(f"invalid variable name {n!r}", lineno, raw.index(n) + 1)
            declared.extend(names)
            continue
        ineqs.append(parse_inequality(raw, lineno))
    return IneqSystem(declared, ineqs)
