"""Expression DSL and evaluable maps.

Grammar (whitespace is insignificant)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" unary)?
    primary := NUMBER | VARIABLE | FUNC "(" expr ("," expr)* ")" | "(" expr ")"

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``; it is
right-associative.  Multiplication must be written explicitly: ``x1(1+x2)``
is rejected.  Variables are ``x1`` .. ``xn`` (``x`` is accepted for unary
maps).  Functions: ``sin cos abs sqrt`` (one argument), ``max min`` (one or
more arguments).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping, Sequence, Union

from .errors import ArityError, EvaluationError, ExprSyntaxError


# --------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 1-based
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...]


Expr = Union[Num, Var, Neg, BinOp, Call]

UNARY_FUNCS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "abs": abs,
    "sqrt": math.sqrt,
}
VARIADIC_FUNCS: dict[str, Callable[..., float]] = {"max": max, "min": min}


# --------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^])
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


# --------------------------------------------------------------------------
# Parser

def default_variables(arity: int) -> dict[str, int]:
    names = {f"x{i}": i for i in range(1, arity + 1)}
    if arity == 1:
        names["x"] = 1
    return names


class _Parser:
    def __init__(self, text: str, variables: Mapping[str, int], arity: int):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.variables = variables
        self.arity = arity

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.tok
        raise ExprSyntaxError(message, self.text, tok.offset)

    def expect(self, kind: str, what: str) -> _Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            self.error(f"expected {what}, found {found!r}")
        return self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            if self.tok.kind in ("lparen", "num", "ident"):
                self.error("implicit multiplication is not supported; use '*'")
            self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "lparen":
            self.advance()
            node = self.expr()
            self.expect("rparen", "')'")
            return node
        if tok.kind == "ident":
            return self.identifier()
        found = tok.text or "end of input"
        self.error(f"expected a number, variable, function or '(', found {found!r}")

    def identifier(self) -> Expr:
        tok = self.advance()
        name = tok.text
        if name in UNARY_FUNCS or name in VARIADIC_FUNCS:
            self.expect("lparen", f"'(' after {name}")
            args = [self.expr()]
            while self.tok.kind == "comma":
                self.advance()
                args.append(self.expr())
            self.expect("rparen", "')'")
            if name in UNARY_FUNCS and len(args) != 1:
                self.error(f"{name} takes exactly one argument", tok)
            return Call(name, tuple(args))
        if name in self.variables:
            return Var(self.variables[name], name)
        m = re.fullmatch(r"x(\d+)", name)
        if m:
            self.error(f"variable {name} out of range for arity {self.arity}", tok)
        self.error(f"unknown identifier {name!r}", tok)


def parse_expr(text: str, arity: int, variables: Sequence[str] | None = None) -> Expr:
    """Parse ``text`` into an AST over ``arity`` variables.

    ``variables`` overrides the default ``x1..xn`` naming, e.g. ``("x", "y", "z")``
    for ternary distance expressions.
    """
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", text, 0)
    if arity < 0:
        raise ValueError("arity must be nonnegative")
    if variables is None:
        names = default_variables(arity)
    else:
        if len(variables) != arity:
            raise ValueError("one variable name per argument is required")
        names = {v: i for i, v in enumerate(variables, start=1)}
    return _Parser(text, names, arity).parse()


def to_text(node: Expr) -> str:
    """Fully parenthesised rendering that parses back to the same AST."""
    match node:
        case Num(value):
            s = repr(float(value))
            return f"({s})" if value < 0 else s
        case Var(name=name):
            return name
        case Neg(operand):
            return f"(-{to_text(operand)})"
        case BinOp(op, left, right):
            return f"({to_text(left)} {op} {to_text(right)})"
        case Call(func, args):
            return f"{func}({', '.join(to_text(a) for a in args)})"
    raise TypeError(f"not an expression node: {node!r}")


def max_variable_index(node: Expr) -> int:
    match node:
        case Var(index=i):
            return i
        case Neg(operand):
            return max_variable_index(operand)
        case BinOp(left=left, right=right):
            return max(max_variable_index(left), max_variable_index(right))
        case Call(args=args):
            return max((max_variable_index(a) for a in args), default=0)
    return 0


def _eval(node: Expr, args: Sequence[float]) -> float:
    match node:
        case Num(value):
            return value
        case Var(index=i):
            return args[i - 1]
        case Neg(operand):
            return -_eval(operand, args)
        case BinOp(op, left, right):
            a = _eval(left, args)
            b = _eval(right, args)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "/":
                return a / b
            r = a ** b
            if isinstance(r, complex):
                raise EvaluationError(f"{a!r} ^ {b!r} is not real")
            return r
        case Call(func, call_args):
            values = [_eval(a, args) for a in call_args]
            if func in UNARY_FUNCS:
                return UNARY_FUNCS[func](values[0])
            return VARIADIC_FUNCS[func](values)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node: Expr, args: Sequence[float]) -> float:
    try:
        value = _eval(node, args)
    except ZeroDivisionError as exc:
        raise EvaluationError(f"division by zero in {to_text(node)}") from exc
    except (OverflowError, ValueError) as exc:
        raise EvaluationError(f"{exc} in {to_text(node)} at {tuple(args)!r}") from exc
    value = float(value)
    if not math.isfinite(value):
        raise EvaluationError(f"non-finite result {value!r} from {to_text(node)} at {tuple(args)!r}")
    return value


# --------------------------------------------------------------------------
# Maps

Point = Hashable


@dataclass(frozen=True)
class NTupleMap:
    """A map F: X^n -> X backed by an expression or a plain callable.

    Callable bodies take the n arguments positionally; they are how table maps on
    finite carriers are expressed.
    """

    arity: int
    body: Expr | Callable[..., Point]
    name: str = "F"

    def __post_init__(self):
        if self.arity < 1:
            raise ArityError(f"arity must be positive, got {self.arity}")
        if not callable(self.body) and max_variable_index(self.body) > self.arity:
            raise ArityError(f"{self.name}: expression uses a variable beyond arity {self.arity}")

    @property
    def expr(self) -> Expr | None:
        return None if callable(self.body) else self.body

    def __call__(self, *args: Point) -> Point:
        if len(args) != self.arity:
            raise ArityError(f"{self.name} expects {self.arity} arguments, got {len(args)}")
        if callable(self.body):
            try:
                value = self.body(*args)
            except (ZeroDivisionError, OverflowError, ValueError) as exc:
                raise EvaluationError(f"{self.name}{args!r}: {exc}") from exc
            if isinstance(value, float) and not math.isfinite(value):
                raise EvaluationError(f"{self.name}{args!r} is not finite")
            return value
        return evaluate(self.body, args)

    def __str__(self) -> str:
        return self.name


class SelfMap(NTupleMap):
    """A unary map g: X -> X."""

    def __init__(self, body: Expr | Callable[[Point], Point], name: str = "g"):
        super().__init__(1, body, name)

    def __call__(self, x: Point) -> Point:  # type: ignore[override]
        return super().__call__(x)


def eval_map(F: NTupleMap, args: Sequence[Point]) -> Point:
    return F(*args)


def rotate_left(X: Sequence[Point], k: int) -> tuple:
    k %= len(X)
    return tuple(X[k:]) + tuple(X[:k])


def cyclic_apply(F: NTupleMap, X: Sequence[Point]) -> tuple:
    """Return (F(X), F(rot X), ..., F(rot^{n-1} X)).

    Component i is F applied to the tuple rotated so that x^i leads.
    """
    if len(X) != F.arity:
        raise ArityError(f"{F.name} has arity {F.arity}, tuple has {len(X)} components")
    return tuple(F(*rotate_left(X, i)) for i in range(len(X)))


# --------------------------------------------------------------------------
# Builtins

def sine_perturbed(n: int) -> NTupleMap:
    """F(x1, ..., xn) = x1 + |sin(x1 x2 ... xn)|."""
    if n < 2:
        raise ArityError("sine_perturbed needs n >= 2")
    product = "*".join(f"x{i}" for i in range(1, n + 1))
    return NTupleMap(n, parse_expr(f"x1 + abs(sin({product}))", n), f"sine_perturbed({n})")


def linear(k: float) -> SelfMap:
    k = float(k)
    return SelfMap(parse_expr(f"{k!r}*x", 1), f"linear({k:g})")


def paper_f3() -> NTupleMap:
    """F(x, y, z) = x (1 + y) (2 + z)."""
    return NTupleMap(3, parse_expr("x1*(1+x2)*(2+x3)", 3), "paper_f3")


_BUILTIN_RE = re.compile(r"\s*(?P<name>sine_perturbed|linear|paper_f3)\s*(?:\(\s*(?P<arg>[^)]*?)\s*\))?\s*$")


def parse_map(spec: str, arity: int, name: str | None = None) -> NTupleMap:
    """Build a map from a builtin identifier or a DSL expression."""
    m = _BUILTIN_RE.match(spec)
    if m:
        kind, arg = m.group("name"), m.group("arg")
        try:
            if kind == "paper_f3" and arg is None:
                built: NTupleMap = paper_f3()
            elif kind == "sine_perturbed" and arg is not None:
                built = sine_perturbed(int(arg))
            elif kind == "linear" and arg is not None:
                built = linear(float(arg))
            else:
                raise ValueError
        except ValueError as exc:
            raise ExprSyntaxError(f"bad builtin map {spec!r}", spec, 0) from exc
        if built.arity != arity:
            raise ArityError(f"{spec} has arity {built.arity}, expected {arity}")
        return built
    expr = parse_expr(spec, arity)
    if arity == 1:
        return SelfMap(expr, name or spec)
    return NTupleMap(arity, expr, name or spec)


def table_map(table: Mapping[tuple, Point], arity: int, name: str = "F") -> NTupleMap:
    """Map on a finite carrier given by an explicit lookup table."""

    def lookup(*args):
        try:
            return table[args]
        except KeyError:
            raise EvaluationError(f"{name}: no table entry for {args!r}") from None

    if arity == 1:
        return SelfMap(lambda x: lookup(x), name)
    return NTupleMap(arity, lookup, name)
