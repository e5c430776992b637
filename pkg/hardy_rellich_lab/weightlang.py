# -*- coding: utf-8 -*-

"""
A tiny language for radial weights ``r -> V(r)``.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom (("^" | "**") unary)?
    atom   := NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")"

``NAME`` is the variable ``r`` or one of the parameters ``N``, ``R``, ``b``,
``c``; ``FUNC`` is ``exp`` or ``log``. Parameters are late bound through a
:class:`ParamBinding`, so one parsed expression serves a whole sweep.

The printer emits a fully parenthesized form and ``parse(str(expr))`` gives
back a structurally equal tree.
"""

import typing as T
import re
import math
import dataclasses
from functools import singledispatch

import numpy as np
import scipy.special

from .exc import (
    WeightSyntaxError,
    UnknownIdentifierError,
    UnboundParameterError,
    EvaluationError,
    CatalogError,
)
from .importer import sympy
from .grid import RadialDomain
from .utils import T_DATA, T_RADIUS

VARIABLE = "r"
PARAMETERS = ("N", "R", "b", "c")
FUNCTIONS = ("exp", "log")

# first positive zero of the Bessel function J_0
Z0 = float(scipy.special.jn_zeros(0, 1)[0])


# ------------------------------------------------------------------------------
# Expression tree
# ------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class Node:
    """
    Base class of expression tree nodes. Nodes are immutable and compare
    structurally.
    """


@dataclasses.dataclass(frozen=True)
class Number(Node):
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"number literal must be finite, got {self.value!r}")
        object.__setattr__(self, "value", float(self.value))

    def __str__(self):
        s = repr(self.value)
        if s.startswith("-"):
            return f"({s})"
        return s


@dataclasses.dataclass(frozen=True)
class Symbol(Node):
    name: str

    def __str__(self):
        return self.name


@dataclasses.dataclass(frozen=True)
class Neg(Node):
    operand: Node

    def __str__(self):
        if isinstance(self.operand, Number):
            return f"(-({self.operand}))"
        return f"(-{self.operand})"


@dataclasses.dataclass(frozen=True)
class BinaryOp(Node):
    left: Node
    right: Node

    op_symbol: T.ClassVar[str] = "?"

    def __str__(self):
        return f"({self.left} {self.op_symbol} {self.right})"


@dataclasses.dataclass(frozen=True)
class Add(BinaryOp):
    op_symbol: T.ClassVar[str] = "+"


@dataclasses.dataclass(frozen=True)
class Sub(BinaryOp):
    op_symbol: T.ClassVar[str] = "-"


@dataclasses.dataclass(frozen=True)
class Mul(BinaryOp):
    op_symbol: T.ClassVar[str] = "*"


@dataclasses.dataclass(frozen=True)
class Div(BinaryOp):
    op_symbol: T.ClassVar[str] = "/"


@dataclasses.dataclass(frozen=True)
class Pow(BinaryOp):
    op_symbol: T.ClassVar[str] = "^"


@dataclasses.dataclass(frozen=True)
class Func(Node):
    name: str
    arg: Node

    def __str__(self):
        return f"{self.name}({self.arg})"


# ------------------------------------------------------------------------------
# Simplifying constructors, used by the derivative and by code that builds
# expressions. The parser does not simplify.
# ------------------------------------------------------------------------------
ZERO = Number(0.0)
ONE = Number(1.0)


def _is_num(node: Node, value: T.Optional[float] = None) -> bool:
    if not isinstance(node, Number):
        return False
    return value is None or node.value == value


def neg(a: Node) -> Node:
    if isinstance(a, Number):
        return Number(-a.value)
    if isinstance(a, Neg):
        return a.operand
    return Neg(a)


def add(a: Node, b: Node) -> Node:
    if _is_num(a, 0.0):
        return b
    if _is_num(b, 0.0):
        return a
    if _is_num(a) and _is_num(b):
        return Number(a.value + b.value)
    return Add(a, b)


def sub(a: Node, b: Node) -> Node:
    if _is_num(b, 0.0):
        return a
    if _is_num(a, 0.0):
        return neg(b)
    if _is_num(a) and _is_num(b):
        return Number(a.value - b.value)
    return Sub(a, b)


def mul(a: Node, b: Node) -> Node:
    if _is_num(a, 0.0) or _is_num(b, 0.0):
        return ZERO
    if _is_num(a, 1.0):
        return b
    if _is_num(b, 1.0):
        return a
    if _is_num(a) and _is_num(b):
        return Number(a.value * b.value)
    return Mul(a, b)


def div(a: Node, b: Node) -> Node:
    if _is_num(b, 1.0):
        return a
    if _is_num(a, 0.0) and not _is_num(b, 0.0):
        return ZERO
    if _is_num(a) and _is_num(b) and b.value != 0.0:
        return Number(a.value / b.value)
    return Div(a, b)


def power(a: Node, b: Node) -> Node:
    if _is_num(b, 0.0):
        return ONE
    if _is_num(b, 1.0):
        return a
    if _is_num(a) and _is_num(b):
        if a.value > 0 or float(b.value).is_integer():
            if a.value != 0 or b.value > 0:
                return Number(a.value**b.value)
    return Pow(a, b)


def exp_(a: Node) -> Node:
    if _is_num(a, 0.0):
        return ONE
    return Func("exp", a)


def log_(a: Node) -> Node:
    if _is_num(a, 1.0):
        return ZERO
    return Func("log", a)


# ------------------------------------------------------------------------------
# Parser
# ------------------------------------------------------------------------------
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
    |(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    |(?P<name>[A-Za-z_][A-Za-z_0-9]*)
    |(?P<op>\*\*|[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclasses.dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> T.List[_Token]:
    tokens = list()
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise WeightSyntaxError(
                f"unexpected character {text[pos]!r}", text, pos
            )
        kind = m.lastgroup
        if kind != "ws":
            value = m.group(kind)
            if value == "**":
                value = "^"
            tokens.append(_Token(kind, value, pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> _Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        if self.tok.text != text or self.tok.kind == "end":
            found = self.tok.text or "end of input"
            raise WeightSyntaxError(
                f"expected {text!r} but found {found!r}", self.text, self.tok.pos
            )
        return self.advance()

    def parse(self) -> Node:
        if self.tok.kind == "end":
            raise WeightSyntaxError("empty expression", self.text, 0)
        node = self.expr()
        if self.tok.kind != "end":
            raise WeightSyntaxError(
                f"unexpected token {self.tok.text!r}", self.text, self.tok.pos
            )
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            right = self.term()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            right = self.unary()
            node = Mul(node, right) if op == "*" else Div(node, right)
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text == "-":
            # a minus sign directly in front of a literal is part of it
            if self.peek().kind == "number" and self.peek(2).text != "^":
                self.advance()
                return Number(-float(self.advance().text))
            self.advance()
            return Neg(self.unary())
        if self.tok.kind == "op" and self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return Pow(base, self.unary())
        return base

    def atom(self) -> Node:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return Number(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(tok.text, arg)
            if tok.text == VARIABLE or tok.text in PARAMETERS:
                return Symbol(tok.text)
            raise UnknownIdentifierError(
                f"unknown identifier {tok.text!r}", self.text, tok.pos
            )
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of input"
        raise WeightSyntaxError(f"unexpected token {found!r}", self.text, tok.pos)


# ------------------------------------------------------------------------------
# Parameter binding
# ------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class ParamBinding:
    """
    Values of the free parameters of a weight expression.

    :param N: dimension.
    :param R: radius, ``math.inf`` for the whole space.
    :param b: exponent of the Caffarelli-Kohn-Nirenberg families.
    :param c: generic multiplier.
    """

    N: T.Optional[float] = None
    R: T.Optional[float] = None
    b: T.Optional[float] = None
    c: T.Optional[float] = None

    def get(self, name: str) -> float:
        value = getattr(self, name, None) if name in PARAMETERS else None
        if value is None:
            raise UnboundParameterError(name)
        return float(value)

    def with_defaults(self, **kwargs) -> "ParamBinding":
        """
        Fill the parameters that are still unbound, keep the bound ones.
        """
        updates = {
            k: v
            for k, v in kwargs.items()
            if v is not None and getattr(self, k) is None
        }
        return dataclasses.replace(self, **updates)

    def to_dict(self) -> T_DATA:
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}


# ------------------------------------------------------------------------------
# Evaluation
# ------------------------------------------------------------------------------
def _first_bad(r: np.ndarray, mask) -> T.Optional[float]:
    mask = np.broadcast_to(np.asarray(mask), r.shape)
    idx = np.flatnonzero(mask)
    if len(idx):
        return float(r.flat[idx[0]])
    return None


@singledispatch
def _eval(node: Node, r: np.ndarray, env: T.Dict[str, float]) -> np.ndarray:
    raise TypeError(f"can not evaluate {node!r}")  # pragma: no cover


@_eval.register
def _(node: Number, r, env):
    return np.full_like(r, node.value)


@_eval.register
def _(node: Symbol, r, env):
    if node.name == VARIABLE:
        return r
    return np.full_like(r, env[node.name])


@_eval.register
def _(node: Neg, r, env):
    return -_eval(node.operand, r, env)


@_eval.register
def _(node: Add, r, env):
    return _eval(node.left, r, env) + _eval(node.right, r, env)


@_eval.register
def _(node: Sub, r, env):
    return _eval(node.left, r, env) - _eval(node.right, r, env)


@_eval.register
def _(node: Mul, r, env):
    return _eval(node.left, r, env) * _eval(node.right, r, env)


@_eval.register
def _(node: Div, r, env):
    num = _eval(node.left, r, env)
    den = _eval(node.right, r, env)
    zero = den == 0
    if np.any(zero):
        raise EvaluationError(f"division by zero in {node}", _first_bad(r, zero))
    return num / den


@_eval.register
def _(node: Pow, r, env):
    base = _eval(node.left, r, env)
    exponent = _eval(node.right, r, env)
    non_integer = np.mod(exponent, 1.0) != 0
    bad = (base < 0) & non_integer
    if np.any(bad):
        raise EvaluationError(
            f"negative base with non integer exponent in {node}",
            _first_bad(r, bad),
        )
    singular = (base == 0) & (exponent < 0)
    if np.any(singular):
        raise EvaluationError(f"division by zero in {node}", _first_bad(r, singular))
    return np.power(base, exponent)


@_eval.register
def _(node: Func, r, env):
    arg = _eval(node.arg, r, env)
    if node.name == "exp":
        return np.exp(arg)
    bad = arg <= 0
    if np.any(bad):
        raise EvaluationError(
            f"logarithm of non positive value in {node}", _first_bad(r, bad)
        )
    return np.log(arg)


@singledispatch
def _symbols(node: Node) -> T.FrozenSet[str]:
    return frozenset()


@_symbols.register
def _(node: Symbol):
    return frozenset([node.name])


@_symbols.register
def _(node: Neg):
    return _symbols(node.operand)


@_symbols.register
def _(node: BinaryOp):
    return _symbols(node.left) | _symbols(node.right)


@_symbols.register
def _(node: Func):
    return _symbols(node.arg)


@singledispatch
def _substitute(node: Node, env: T.Dict[str, float]) -> Node:
    return node


@_substitute.register
def _(node: Symbol, env):
    if node.name in env:
        return Number(env[node.name])
    return node


@_substitute.register
def _(node: Neg, env):
    return neg(_substitute(node.operand, env))


@_substitute.register
def _(node: BinaryOp, env):
    build = {Add: add, Sub: sub, Mul: mul, Div: div, Pow: power}[type(node)]
    return build(_substitute(node.left, env), _substitute(node.right, env))


@_substitute.register
def _(node: Func, env):
    arg = _substitute(node.arg, env)
    return exp_(arg) if node.name == "exp" else log_(arg)


# ------------------------------------------------------------------------------
# Derivative
# ------------------------------------------------------------------------------
@singledispatch
def differentiate(node: Node) -> Node:
    """
    Symbolic ``d/dr`` of an expression tree.
    """
    raise TypeError(f"can not differentiate {node!r}")  # pragma: no cover


@differentiate.register
def _(node: Number):
    return ZERO


@differentiate.register
def _(node: Symbol):
    return ONE if node.name == VARIABLE else ZERO


@differentiate.register
def _(node: Neg):
    return neg(differentiate(node.operand))


@differentiate.register
def _(node: Add):
    return add(differentiate(node.left), differentiate(node.right))


@differentiate.register
def _(node: Sub):
    return sub(differentiate(node.left), differentiate(node.right))


@differentiate.register
def _(node: Mul):
    f, g = node.left, node.right
    return add(mul(differentiate(f), g), mul(f, differentiate(g)))


@differentiate.register
def _(node: Div):
    f, g = node.left, node.right
    return div(
        sub(mul(differentiate(f), g), mul(f, differentiate(g))),
        power(g, Number(2.0)),
    )


@differentiate.register
def _(node: Pow):
    f, g = node.left, node.right
    if VARIABLE not in _symbols(g):
        return mul(mul(g, power(f, sub(g, ONE))), differentiate(f))
    # f^g = exp(g log f)
    return mul(
        node,
        add(mul(differentiate(g), log_(f)), div(mul(g, differentiate(f)), f)),
    )


@differentiate.register
def _(node: Func):
    inner = differentiate(node.arg)
    if node.name == "exp":
        return mul(node, inner)
    return div(inner, node.arg)


# ------------------------------------------------------------------------------
# Public API
# ------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class WeightExpr:
    """
    A radial weight ``r -> V(r)`` with late bound parameters.
    """

    root: Node

    def __str__(self):
        return str(self.root)

    @property
    def free_symbols(self) -> T.FrozenSet[str]:
        return _symbols(self.root)

    @property
    def parameters(self) -> T.FrozenSet[str]:
        return self.free_symbols - {VARIABLE}

    def depends_on_r(self) -> bool:
        return VARIABLE in self.free_symbols

    def is_zero(self) -> bool:
        return _is_num(self.root, 0.0)

    def evaluate(self, r: T_RADIUS, binding: "ParamBinding" = None) -> T_RADIUS:
        return evaluate(self, r, binding)

    def derivative(self) -> "WeightExpr":
        return derivative(self)

    def __add__(self, other) -> "WeightExpr":
        return WeightExpr(add(self.root, as_weight(other).root))

    def __sub__(self, other) -> "WeightExpr":
        return WeightExpr(sub(self.root, as_weight(other).root))

    def __mul__(self, other) -> "WeightExpr":
        return WeightExpr(mul(self.root, as_weight(other).root))

    def __rmul__(self, other) -> "WeightExpr":
        return WeightExpr(mul(as_weight(other).root, self.root))

    def __truediv__(self, other) -> "WeightExpr":
        return WeightExpr(div(self.root, as_weight(other).root))

    def __neg__(self) -> "WeightExpr":
        return WeightExpr(neg(self.root))


def parse(text: str) -> WeightExpr:
    """
    Parse weight expression text into a :class:`WeightExpr`.

    Example::

        >>> str(parse("N^2/(4*r^2)"))
        '((N ^ 2.0) / (4.0 * (r ^ 2.0)))'
    """
    return WeightExpr(_Parser(text).parse())


def as_weight(value: T.Union[str, float, int, WeightExpr]) -> WeightExpr:
    """
    Accept expression text, a number or an already parsed expression.
    """
    if isinstance(value, WeightExpr):
        return value
    if isinstance(value, str):
        return parse(value)
    if isinstance(value, (int, float, np.integer, np.floating)):
        return WeightExpr(Number(float(value)))
    raise TypeError(f"can not interpret {value!r} as a weight")


def evaluate(
    expr: WeightExpr,
    r: T_RADIUS,
    binding: T.Optional[ParamBinding] = None,
) -> T_RADIUS:
    """
    Evaluate ``expr`` at a radius or an array of radii. Signed results are
    returned as they are, nothing is clamped.

    :raises UnboundParameterError: a free parameter has no value.
    :raises EvaluationError: division by zero, negative base to a non integer
        power, logarithm of a non positive value, non finite result.
    """
    binding = binding or ParamBinding()
    env = {name: binding.get(name) for name in expr.parameters}
    scalar = np.ndim(r) == 0
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(~(r_arr > 0)):
        raise EvaluationError(
            "radius must be positive", _first_bad(r_arr, ~(r_arr > 0))
        )
    with np.errstate(all="ignore"):
        values = np.asarray(_eval(expr.root, r_arr, env), dtype=float)
    values = np.broadcast_to(values, r_arr.shape)
    finite = np.isfinite(values)
    if not np.all(finite):
        raise EvaluationError(
            f"non finite value of {expr}", _first_bad(r_arr, ~finite)
        )
    if scalar:
        return float(values[0])
    return np.array(values)


def derivative(expr: WeightExpr) -> WeightExpr:
    """
    Symbolic ``d/dr``. The result is again a :class:`WeightExpr`.
    """
    return WeightExpr(differentiate(expr.root))


def bind(expr: WeightExpr, binding: ParamBinding) -> WeightExpr:
    """
    Replace the parameters that ``binding`` fixes by their values and fold
    the constants. Unbound and infinite parameters stay symbolic.

    Example::

        >>> str(bind(parse("(N-2)^2/(4*r^2)"), ParamBinding(N=5)))
        '(9.0 / (4.0 * (r ^ 2.0)))'
    """
    env = {
        name: float(getattr(binding, name))
        for name in expr.parameters
        if getattr(binding, name) is not None
        and math.isfinite(getattr(binding, name))
    }
    if not env:
        return expr
    return WeightExpr(_substitute(expr.root, env))


@singledispatch
def _to_sympy(node: Node):
    raise TypeError(f"can not convert {node!r}")  # pragma: no cover


@_to_sympy.register
def _(node: Number):
    return sympy.Float(node.value)


@_to_sympy.register
def _(node: Symbol):
    return sympy.Symbol(node.name, positive=True)


@_to_sympy.register
def _(node: Neg):
    return -_to_sympy(node.operand)


@_to_sympy.register
def _(node: BinaryOp):
    left, right = _to_sympy(node.left), _to_sympy(node.right)
    if isinstance(node, Add):
        return left + right
    if isinstance(node, Sub):
        return left - right
    if isinstance(node, Mul):
        return left * right
    if isinstance(node, Div):
        return left / right
    return left**right


@_to_sympy.register
def _(node: Func):
    fn = sympy.exp if node.name == "exp" else sympy.log
    return fn(_to_sympy(node.arg))


def to_sympy(expr: WeightExpr):
    """
    Convert to a sympy expression, useful for cross checking derivatives.
    Requires the optional ``sympy`` dependency.
    """
    return _to_sympy(expr.root)


# ------------------------------------------------------------------------------
# Catalog
# ------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class CatalogEntry:
    """
    A Bessel pair ``(V, W)`` together with the dimension in which it is a
    pair and its interval. ``V`` and ``W`` carry the values of ``binding``, so
    ``N`` always means the base dimension of the family, also when ``dim``
    is ``N + 2``.
    """

    name: str
    V: WeightExpr
    W: WeightExpr
    dim: int
    domain: RadialDomain
    description: str = ""
    binding: ParamBinding = dataclasses.field(default_factory=ParamBinding)
    formula: T.Tuple[str, str] = ("", "")

    def __iter__(self):
        return iter((self.V, self.W, self.dim, self.domain))

    def to_dict(self) -> T_DATA:
        return dict(
            name=self.name,
            V=str(self.V),
            W=str(self.W),
            dim=self.dim,
            domain=self.domain.to_dict(),
            description=self.description,
            binding=self.binding.to_dict(),
            formula=dict(V=self.formula[0], W=self.formula[1]),
        )


@dataclasses.dataclass(frozen=True)
class _CatalogRecipe:
    V: str
    W: str
    dim_shift: int
    ball: bool
    description: str
    needs_b: T.Optional[str] = None


_CATALOG: T.Dict[str, _CatalogRecipe] = {
    "hardy": _CatalogRecipe(
        V="1",
        W="(N-2)^2/(4*r^2)",
        dim_shift=0,
        ball=False,
        description="classical Hardy pair, sharp constant (N-2)^2/4",
    ),
    "hardy_rellich": _CatalogRecipe(
        V="1",
        W="N^2/(4*r^2)",
        dim_shift=2,
        ball=False,
        description="Hardy-Rellich pair, sharp constant N^2/4 for N >= 5",
    ),
    "hr_ball_boundary": _CatalogRecipe(
        V="1",
        W="N^2/4*1/(r^2*(1-(R/r)^(-N))^2)",
        dim_shift=2,
        ball=True,
        description="Hardy-Rellich pair with boundary term on the ball",
    ),
    "hr_brezis_vazquez": _CatalogRecipe(
        V="1",
        W=f"N^2/(4*r^2)+{Z0!r}^2/R^2",
        dim_shift=2,
        ball=True,
        description="Hardy-Rellich pair with Brezis-Vazquez remainder z0^2/R^2",
    ),
    "heisenberg2": _CatalogRecipe(
        V="1",
        W="N+2-r^2",
        dim_shift=2,
        ball=False,
        description="second order Heisenberg pair, phi = exp(-r^2/2)",
    ),
    "hydrogen2": _CatalogRecipe(
        V="1",
        W="(N+1)/r-1",
        dim_shift=2,
        ball=False,
        description="second order hydrogen pair, phi = exp(-r)",
    ),
    "ckn_blt1": _CatalogRecipe(
        V="1",
        W="(N+1-b)/r^(b+1)-1/r^(2*b)",
        dim_shift=2,
        ball=False,
        description="Caffarelli-Kohn-Nirenberg pair for b < 1",
        needs_b="lt1",
    ),
    "ckn_bgt1": _CatalogRecipe(
        V="1",
        W="(N+b-1)/r^(b+1)-1/r^(2*b)",
        dim_shift=2,
        ball=False,
        description="Caffarelli-Kohn-Nirenberg pair for b > 1",
        needs_b="gt1",
    ),
    "rellich": _CatalogRecipe(
        V="1",
        W="N^2*(N-4)^2/16*1/r^4",
        dim_shift=0,
        ball=False,
        description="Rellich weight, sharp constant N^2(N-4)^2/16",
    ),
}


def catalog_names() -> T.List[str]:
    return list(_CATALOG)


def catalog(name: str, binding: ParamBinding) -> CatalogEntry:
    """
    Look up a named weight pair.

    :raises CatalogError: unknown name or a parameter outside the family's
        range.
    :raises UnboundParameterError: ``N`` missing, ``R`` missing (or infinite)
        for ball entries, ``b`` missing for the CKN entries.
    """
    try:
        recipe = _CATALOG[name]
    except KeyError:
        raise CatalogError(
            f"unknown catalog entry {name!r}, choose from {catalog_names()}"
        )
    N = int(binding.get("N"))
    if recipe.ball:
        R = binding.get("R")
        if not math.isfinite(R):
            raise UnboundParameterError("R")
        domain = RadialDomain(dim=N + recipe.dim_shift, radius=R)
    else:
        domain = RadialDomain(dim=N + recipe.dim_shift, radius=math.inf)
    if recipe.needs_b is not None:
        b = binding.get("b")
        if recipe.needs_b == "lt1" and not b < 1:
            raise CatalogError(f"{name} requires b < 1, got b={b}")
        if recipe.needs_b == "gt1" and not b > 1:
            raise CatalogError(f"{name} requires b > 1, got b={b}")
    return CatalogEntry(
        name=name,
        V=bind(parse(recipe.V), binding),
        W=bind(parse(recipe.W), binding),
        dim=domain.dim,
        domain=domain,
        description=recipe.description,
        binding=binding,
        formula=(recipe.V, recipe.W),
    )
