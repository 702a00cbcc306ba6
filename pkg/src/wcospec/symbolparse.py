"""Weight-symbol expressions: grammar, AST, evaluation, series expansion,
and the boundary-modulus analysis that feeds the spectral predictions.

Grammar (see docs/grammar.md):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' ['-'] INTEGER)?
    atom   := NUMBER ['i'] | 'i' | 'z' | '(' expr ')'
            | 'exp' '(' expr ')' | 'log' '(' expr ')'
            | 'pow' '(' const '-' 'z' ',' const ')'

Numbers are decimal floats; an ``i`` suffix (or bare ``i``) makes them
imaginary. ``pow(c - z, s)`` is the boundary-power atom (c - z)^s with
|c| = 1, principal branch.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    ArityError,
    IllConditioned,
    NotInvertible,
    SymbolSyntaxError,
    ZeroOnCircle,
)
from .mobius import Automorphism
from .series import (
    TaylorSeries,
    check_conditioning,
    div,
    exp as series_exp,
    fractional_power,
    log as series_log,
    mul,
    pow_int,
)

# sampling ladder for boundary moduli (all deterministic)
LADDER_DEPTH = 20
CIRCLE_SAMPLES = 4096
FAN_ANGLES = 64
LIMIT_RUNGS = 5
DEFAULT_INVERTIBILITY_THRESHOLD = 1e-8


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

class WeightExpr:
    """Base class: every node evaluates at points and expands as a series."""

    def eval(self, z):
        raise NotImplementedError

    def series(self, order) -> TaylorSeries:
        raise NotImplementedError

    def to_text(self) -> str:
        raise NotImplementedError

    def walk(self):
        yield self

    def __str__(self):
        return self.to_text()


def _fmt_complex(v: complex) -> str:
    if v.imag == 0.0:
        return repr(v.real)
    if v.real == 0.0:
        return f"{v.imag!r}i"
    sign = "+" if v.imag >= 0 else "-"
    return f"({v.real!r} {sign} {abs(v.imag)!r}i)"


@dataclass(frozen=True)
class Const(WeightExpr):
    value: complex

    def eval(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return np.full(z.shape, self.value)

    def series(self, order):
        return TaylorSeries.constant(self.value, order)

    def to_text(self):
        return _fmt_complex(complex(self.value))


@dataclass(frozen=True)
class Var(WeightExpr):
    def eval(self, z):
        return np.asarray(z, dtype=np.complex128)

    def series(self, order):
        return TaylorSeries.identity(max(order, 1)).truncate(order) if order >= 1 \
            else TaylorSeries.zero(0)

    def to_text(self):
        return "z"


@dataclass(frozen=True)
class Neg(WeightExpr):
    operand: WeightExpr

    def eval(self, z):
        return -self.operand.eval(z)

    def series(self, order):
        return self.operand.series(order).scale(-1.0)

    def to_text(self):
        return f"-({self.operand.to_text()})"

    def walk(self):
        yield self
        yield from self.operand.walk()


@dataclass(frozen=True)
class BinOp(WeightExpr):
    op: str
    left: WeightExpr
    right: WeightExpr

    def eval(self, z):
        lv = self.left.eval(z)
        rv = self.right.eval(z)
        if self.op == "+":
            return lv + rv
        if self.op == "-":
            return lv - rv
        if self.op == "*":
            return lv * rv
        return lv / rv

    def series(self, order):
        ls = self.left.series(order)
        rs = self.right.series(order)
        if self.op == "+":
            return ls + rs
        if self.op == "-":
            return ls - rs
        if self.op == "*":
            return mul(ls, rs)
        return div(ls, rs)

    def to_text(self):
        return f"({self.left.to_text()} {self.op} {self.right.to_text()})"

    def walk(self):
        yield self
        yield from self.left.walk()
        yield from self.right.walk()


@dataclass(frozen=True)
class PowInt(WeightExpr):
    base: WeightExpr
    exponent: int

    def eval(self, z):
        return self.base.eval(z) ** self.exponent

    def series(self, order):
        return pow_int(self.base.series(order), self.exponent)

    def to_text(self):
        return f"({self.base.to_text()})^{self.exponent}"

    def walk(self):
        yield self
        yield from self.base.walk()


@dataclass(frozen=True)
class Func(WeightExpr):
    name: str  # 'exp' or 'log'
    operand: WeightExpr

    def eval(self, z):
        v = self.operand.eval(z)
        return np.exp(v) if self.name == "exp" else np.log(v)

    def series(self, order):
        s = self.operand.series(order)
        return series_exp(s) if self.name == "exp" else series_log(s)

    def to_text(self):
        return f"{self.name}({self.operand.to_text()})"

    def walk(self):
        yield self
        yield from self.operand.walk()


@dataclass(frozen=True)
class BoundaryPow(WeightExpr):
    """(c - z)^s with |c| = 1, principal branch through log(1 - z/c)."""

    c: complex
    s: complex

    def eval(self, z):
        z = np.asarray(z, dtype=np.complex128)
        w = np.exp(self.s * (cmath.log(self.c) + np.log(1.0 - z / self.c)))
        return w

    def series(self, order):
        return fractional_power(self.c, self.s, order)

    def to_text(self):
        return f"pow({_fmt_complex(complex(self.c))} - z, {_fmt_complex(complex(self.s))})"


# ---------------------------------------------------------------------------
# Lexer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i\b)?"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^(),]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise SymbolSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group("number") is not None:
            value = float(m.group("number"))
            tokens.append(("num", 1j * value if m.group("imag") else complex(value), m.start()))
        elif m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), m.start()))
        else:
            op = m.group("op")
            tokens.append(("op", "^" if op == "**" else op, m.start()))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise SymbolSyntaxError(f"expected {op!r}", pos)

    def parse(self) -> WeightExpr:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise SymbolSyntaxError(f"unexpected trailing input {val!r}", pos)
        return node

    def expr(self) -> WeightExpr:
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                node = BinOp(val, node, self.term())
            else:
                return node

    def term(self) -> WeightExpr:
        node = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                node = BinOp(val, node, self.factor())
            else:
                return node

    def factor(self) -> WeightExpr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.next()
            inner = self.factor()
            if isinstance(inner, Const):
                return Const(-inner.value)
            return Neg(inner)
        return self.power()

    def power(self) -> WeightExpr:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.next()
            exponent = self.integer_exponent()
            return PowInt(base, exponent)
        return base

    def integer_exponent(self) -> int:
        sign = 1
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.next()
            sign = -1
        kind, val, pos = self.next()
        if kind != "num" or val.imag != 0 or val.real != int(val.real):
            raise SymbolSyntaxError("exponent must be an integer literal", pos)
        return sign * int(val.real)

    def atom(self) -> WeightExpr:
        kind, val, pos = self.next()
        if kind == "num":
            return Const(val)
        if kind == "ident":
            if val == "z":
                return Var()
            if val == "i":
                return Const(1j)
            if val in ("exp", "log"):
                self.expect_op("(")
                arg = self.expr()
                k2, v2, p2 = self.next()
                if k2 == "op" and v2 == ",":
                    raise ArityError(f"{val}() takes exactly one argument")
                if k2 != "op" or v2 != ")":
                    raise SymbolSyntaxError("expected ')'", p2)
                return Func(val, arg)
            if val == "pow":
                return self.pow_atom(pos)
            raise SymbolSyntaxError(f"unknown identifier {val!r}", pos)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise SymbolSyntaxError(f"unexpected token {val!r}", pos)

    def pow_atom(self, call_pos) -> WeightExpr:
        self.expect_op("(")
        first = self.expr()
        kind, val, pos = self.next()
        if kind != "op" or val != ",":
            raise ArityError("pow() takes exactly two arguments: pow(c - z, s)")
        second = self.expr()
        kind, val, pos = self.next()
        if kind != "op" or val != ")":
            if kind == "op" and val == ",":
                raise ArityError("pow() takes exactly two arguments")
            raise SymbolSyntaxError("expected ')'", pos)
        c = self._as_c_minus_z(first)
        s = self._as_constant(second)
        if abs(abs(c) - 1.0) > 1e-10:
            raise ArityError(f"pow() base must be c - z with |c| = 1, got |c| = {abs(c)}")
        return BoundaryPow(c, s)

    @staticmethod
    def _as_c_minus_z(node: WeightExpr) -> complex:
        if isinstance(node, BinOp) and node.op == "-" \
                and isinstance(node.left, Const) and isinstance(node.right, Var):
            return complex(node.left.value)
        raise ArityError("pow() first argument must have the form c - z")

    @staticmethod
    def _as_constant(node: WeightExpr) -> complex:
        if any(isinstance(n, Var) for n in node.walk()):
            raise ArityError("pow() exponent must be a constant expression")
        return complex(node.eval(np.complex128(0.0)))


def parse(text: str) -> WeightExpr:
    """Parse a weight expression; raises SymbolSyntaxError / ArityError."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightSymbol:
    """A weight u: evaluator, series, and boundary-modulus estimates.

    ``A_plus/A_minus`` are the sampled limsup/liminf of |u| at the attractive
    fixed point, ``B_plus/B_minus`` at the repulsive one. ``expr`` is present
    when the weight came from the text grammar; synthesized weights (isometry
    normalizers, twisted weights, inverse weights) carry only an evaluator.
    """

    source: str
    evaluate: Callable
    series: TaylorSeries
    sup_norm_est: float
    inf_modulus_est: float
    A_plus: float
    A_minus: float
    B_plus: float
    B_minus: float
    expr: Optional[WeightExpr] = None
    diagnostics: dict = field(default_factory=dict)

    def __call__(self, z):
        return self.evaluate(z)


def _fan_points(c: complex, j: int) -> np.ndarray:
    eps = 2.0 ** (-j)
    theta = -np.pi / 2 + np.pi * (np.arange(FAN_ANGLES) + 0.5) / FAN_ANGLES
    pts = c * (1.0 - eps * np.exp(1j * theta))
    return pts[np.abs(pts) < 1.0 - 1e-12]


def _check_denominators(expr: WeightExpr, points: np.ndarray):
    for node in expr.walk():
        if isinstance(node, BinOp) and node.op == "/":
            vals = np.abs(np.asarray(node.right.eval(points)))
            if np.any(vals < 1e-14):
                raise NotInvertible("division by (near-)zero inside the disk")


def analyze_callable(evaluate: Callable, series: TaylorSeries, psi: Automorphism,
                     source: str, expr: Optional[WeightExpr] = None,
                     threshold: float = DEFAULT_INVERTIBILITY_THRESHOLD) -> WeightSymbol:
    """Boundary-modulus analysis shared by parsed and synthesized weights.

    Samples |u| on the circle ladder rho_j = 1 - 2^-j (maximum-modulus
    principle justifies circle sampling for holomorphic u) and on
    nontangential fans shrinking to each fixed point. limsup/liminf are
    reported as max/min over the last LIMIT_RUNGS rungs.
    """
    check_conditioning(series, "weight series expansion")
    theta = 2.0 * np.pi * np.arange(CIRCLE_SAMPLES) / CIRCLE_SAMPLES
    unit = np.exp(1j * theta)

    circle_max = np.empty(LADDER_DEPTH)
    circle_min = np.empty(LADDER_DEPTH)
    outer_vals = None
    for j in range(1, LADDER_DEPTH + 1):
        complex_vals = np.asarray(evaluate((1.0 - 2.0 ** (-j)) * unit))
        vals = np.abs(complex_vals)
        if not np.all(np.isfinite(vals)):
            raise IllConditioned("weight evaluation produced non-finite values on a sample circle")
        circle_max[j - 1] = vals.max()
        circle_min[j - 1] = vals.min()
        outer_vals = complex_vals

    # circle minima only bound |u| away from zero when u is zero-free inside;
    # the argument principle on the outermost rung certifies that
    if np.min(np.abs(outer_vals)) > 1e-12:
        winding = int(round(float(np.sum(np.angle(np.roll(outer_vals, -1) / outer_vals)))
                            / (2.0 * np.pi)))
        if winding != 0:
            raise NotInvertible(
                f"weight has winding number {winding} on |z| = 1 - 2^-{LADDER_DEPTH}: "
                "zeros inside the disk"
            )

    def fan_extrema(c):
        top = np.empty(LADDER_DEPTH)
        bot = np.empty(LADDER_DEPTH)
        for j in range(1, LADDER_DEPTH + 1):
            vals = np.abs(np.asarray(evaluate(_fan_points(c, j))))
            if vals.size == 0 or not np.all(np.isfinite(vals)):
                raise IllConditioned("weight evaluation failed on a boundary fan")
            top[j - 1] = vals.max()
            bot[j - 1] = vals.min()
        return top, bot

    a_top, a_bot = fan_extrema(psi.a)
    b_top, b_bot = fan_extrema(psi.b)

    A_plus = float(a_top[-LIMIT_RUNGS:].max())
    A_minus = float(a_bot[-LIMIT_RUNGS:].min())
    B_plus = float(b_top[-LIMIT_RUNGS:].max())
    B_minus = float(b_bot[-LIMIT_RUNGS:].min())

    sup_est = float(max(circle_max.max(), a_top.max(), b_top.max()))
    inf_est = float(min(circle_min.min(), a_bot.min(), b_bot.min()))
    if inf_est < threshold:
        raise NotInvertible(
            f"inf |u| estimate {inf_est:.3e} below invertibility threshold {threshold:.1e}"
        )

    heuristic = False
    if expr is not None:
        for node in expr.walk():
            if isinstance(node, BoundaryPow) and (
                abs(node.c - psi.a) < 1e-9 or abs(node.c - psi.b) < 1e-9
            ):
                heuristic = True

    def _monotone(seq):
        d = np.diff(seq[-LIMIT_RUNGS:])
        return bool(np.all(d <= 0) or np.all(d >= 0))

    diagnostics = {
        "ladder_depth": LADDER_DEPTH,
        "circle_samples": CIRCLE_SAMPLES,
        "fan_angles": FAN_ANGLES,
        "limit_rungs": LIMIT_RUNGS,
        "a_limsup_monotone": _monotone(a_top),
        "b_limsup_monotone": _monotone(b_top),
        "heuristic_boundary_moduli": heuristic,
    }
    return WeightSymbol(
        source=source,
        evaluate=evaluate,
        series=series,
        sup_norm_est=sup_est,
        inf_modulus_est=inf_est,
        A_plus=A_plus,
        A_minus=A_minus,
        B_plus=B_plus,
        B_minus=B_minus,
        expr=expr,
        diagnostics=diagnostics,
    )


def analyze(expr: WeightExpr, psi: Automorphism, order: int,
            threshold: float = DEFAULT_INVERTIBILITY_THRESHOLD) -> WeightSymbol:
    """Expand a parsed weight to the working order and estimate its moduli."""
    probe = 0.7 * np.exp(1j * 2.0 * np.pi * np.arange(64) / 64)
    _check_denominators(expr, probe)
    series = expr.series(order)
    return analyze_callable(expr.eval, series, psi, expr.to_text(), expr=expr,
                            threshold=threshold)


def analyze_text(text: str, psi: Automorphism, order: int,
                 threshold: float = DEFAULT_INVERTIBILITY_THRESHOLD) -> WeightSymbol:
    return analyze(parse(text), psi, order, threshold=threshold)


def winding_check(expr: WeightExpr, rho: float, samples: int = CIRCLE_SAMPLES) -> int:
    """Winding number of u on |z| = rho; 0 certifies zero-freeness in |z| < rho."""
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0,1)")
    z = rho * np.exp(1j * 2.0 * np.pi * np.arange(samples) / samples)
    vals = np.asarray(expr.eval(z))
    if np.min(np.abs(vals)) < 1e-12:
        raise ZeroOnCircle(f"|u| < 1e-12 at a sample point on |z| = {rho}")
    ratios = np.roll(vals, -1) / vals
    total = float(np.sum(np.angle(ratios)))
    return int(round(total / (2.0 * np.pi)))
