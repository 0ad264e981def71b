"""
Generator expressions in n and m.

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := '-' unary | power
    power   := postfix ('^' unary)?          right associative
    postfix := atom '!'*
    atom    := INTEGER | 'n' | 'm' | '(' expr ')'

There is no division. Values are exact integers while they stay under
the configured bit limit and become `Magnitude`s (sign plus an arb
enclosure of ln|x|) beyond it, so towers like 2^(n*2^n) stay usable
at n = 20.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import flint
import sympy

from algebra.ball import Ball
from cli.errors import ExpressionError
from criteria.errors import ExpressionTooLarge
from utils.config import get_config

VARIABLES = ("n", "m")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")
_LN2 = math.log(2)


@dataclass(frozen=True)
class Magnitude:
    """Nonzero real number known by its sign and an enclosure of ln|x|."""
    sign: int
    log_abs: flint.arb

    def ball(self) -> Ball:
        return Ball.from_arb(self.sign * self.log_abs.exp())


Value = Union[int, Magnitude]


@dataclass(frozen=True)
class Node:
    op: str          # int, var, neg, +, -, *, ^, !
    args: tuple
    column: int


@dataclass(frozen=True)
class Expression:
    text: str
    root: Node

    def variables(self) -> set:
        found = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.op == "var":
                found.add(node.args[0])
            elif node.op != "int":
                stack.extend(node.args)
        return found

    def value(self, env: Dict[str, int], bits_limit: Optional[int] = None) -> Value:
        limit = bits_limit or get_config().criteria.exact_bits_limit
        return _Evaluator(self.text, env, limit).value(self.root)

    def exact(self, env: Dict[str, int], bits_limit: Optional[int] = None) -> int:
        v = self.value(env, bits_limit)
        if isinstance(v, Magnitude):
            raise ExpressionTooLarge(f"'{self.text}' at {env} exceeds the exact bit limit",
                                     operation="expression", coordinates=env)
        return v

    def ball(self, env: Dict[str, int]) -> Ball:
        """Real Ball at the current working precision."""
        v = self.value(env)
        return v.ball() if isinstance(v, Magnitude) else Ball.exact(v)

    def log_abs(self, env: Dict[str, int]) -> Optional[flint.arb]:
        """ln|value|, or None for zero."""
        v = self.value(env)
        if isinstance(v, Magnitude):
            return v.log_abs
        return None if v == 0 else flint.arb(abs(v)).log()

    def sign(self, env: Dict[str, int]) -> int:
        v = self.value(env)
        if isinstance(v, Magnitude):
            return v.sign
        return (v > 0) - (v < 0)

    def power_form(self, env: Dict[str, int], bits_limit: Optional[int] = None) -> Optional[Tuple[int, int]]:
        """|value| = base^exponent with base not a perfect power, when both are exact."""
        limit = bits_limit or get_config().criteria.exact_bits_limit
        evaluator = _Evaluator(self.text, env, limit)
        node = self.root
        while node.op == "neg":
            node = node.args[0]
        if node.op == "^":
            base, exponent = evaluator.value(node.args[0]), evaluator.value(node.args[1])
            if isinstance(base, Magnitude) or isinstance(exponent, Magnitude):
                return None
            return _normalize(abs(base), exponent)
        v = evaluator.value(node)
        if isinstance(v, Magnitude):
            return None
        return _normalize(abs(v), 1)

    def __str__(self) -> str:
        return self.text


def _normalize(base: int, exponent: int) -> Tuple[int, int]:
    if exponent == 0 or base == 1:
        return 1, 1
    if base == 0:
        return 0, 1
    found = sympy.perfect_power(base)
    if found:
        root, k = found
        return int(root), int(k) * exponent
    return base, exponent


class _Evaluator:
    def __init__(self, text: str, env: Dict[str, int], limit: int):
        self.text = text
        self.env = env
        self.limit = limit

    def fail(self, message: str, node: Node):
        raise ExpressionError(message, node.column, self.text)

    def too_large(self, what: str):
        raise ExpressionTooLarge(f"{what} in '{self.text}' at {self.env}", operation="expression",
                                 coordinates=self.env)

    def value(self, node: Node) -> Value:
        op = node.op
        if op == "int":
            return node.args[0]
        if op == "var":
            name = node.args[0]
            if name not in self.env:
                self.fail(f"variable '{name}' is not bound here", node)
            return self.env[name]
        if op == "neg":
            v = self.value(node.args[0])
            return Magnitude(-v.sign, v.log_abs) if isinstance(v, Magnitude) else -v
        if op == "!":
            return self.factorial(self.value(node.args[0]), node)
        a, b = self.value(node.args[0]), self.value(node.args[1])
        if op == "+":
            return self.add(a, b)
        if op == "-":
            return self.add(a, Magnitude(-b.sign, b.log_abs) if isinstance(b, Magnitude) else -b)
        if op == "*":
            return self.mul(a, b)
        return self.pow(a, b, node)

    def _demote(self, v: int) -> Value:
        if v.bit_length() > self.limit:
            return _to_magnitude(v)
        return v

    def add(self, a: Value, b: Value) -> Value:
        if isinstance(a, int) and isinstance(b, int):
            return self._demote(a + b)
        if a == 0:
            return b
        if b == 0:
            return a
        a, b = _to_magnitude(a), _to_magnitude(b)
        if a.log_abs.mid() < b.log_abs.mid():
            a, b = b, a
        ratio = (b.log_abs - a.log_abs).exp()
        if a.sign == b.sign:
            return Magnitude(a.sign, a.log_abs + (1 + ratio).log())
        if a.log_abs > b.log_abs:
            return Magnitude(a.sign, a.log_abs + (1 - ratio).log())
        self.too_large("cannot separate the terms of a difference")

    def mul(self, a: Value, b: Value) -> Value:
        if a == 0 or b == 0:
            return 0
        if isinstance(a, int) and isinstance(b, int):
            if a.bit_length() + b.bit_length() <= self.limit + 1:
                return self._demote(a * b)
        a, b = _to_magnitude(a), _to_magnitude(b)
        return Magnitude(a.sign * b.sign, a.log_abs + b.log_abs)

    def pow(self, base: Value, exponent: Value, node: Node) -> Value:
        if isinstance(exponent, int):
            if exponent < 0:
                self.fail("negative exponent", node)
            if exponent == 0:
                return 1
            if isinstance(base, int):
                if base in (0, 1):
                    return base
                if base == -1:
                    return -1 if exponent % 2 else 1
                if (abs(base).bit_length() - 1) * exponent <= self.limit:
                    return self._demote(base ** exponent)
            base = _to_magnitude(base)
            sign = base.sign if exponent % 2 else 1
            return Magnitude(sign, exponent * base.log_abs)
        if exponent.sign < 0:
            self.fail("negative exponent", node)
        if base == 0 or base == 1:
            return base
        base = _to_magnitude(base)
        if base.sign < 0:
            self.too_large("parity of a huge exponent of a negative base")
        return Magnitude(1, exponent.log_abs.exp() * base.log_abs)

    def factorial(self, v: Value, node: Node) -> Value:
        if isinstance(v, Magnitude):
            self.too_large("factorial of a huge argument")
        if v < 0:
            self.fail("factorial of a negative number", node)
        if math.lgamma(v + 1) / _LN2 > self.limit:
            return Magnitude(1, flint.arb(v + 1).lgamma())
        return math.factorial(v)


def _to_magnitude(v: Value) -> Magnitude:
    if isinstance(v, Magnitude):
        return v
    return Magnitude(1 if v > 0 else -1, flint.arb(abs(v)).log())


class _Parser:
    def __init__(self, text: str, allowed: Tuple[str, ...]):
        self.text = text
        self.allowed = allowed
        self.tokens: List[Tuple[str, object, int]] = []
        for match in _TOKEN.finditer(text):
            number, ident, other = match.groups()
            column = match.start(match.lastindex) + 1
            if number is not None:
                self.tokens.append(("int", int(number), column))
            elif ident is not None:
                self.tokens.append(("ident", ident, column))
            else:
                if other not in "+-*^!()":
                    raise ExpressionError(f"unexpected character '{other}'", column, text)
                self.tokens.append((other, other, column))
        self.tokens.append(("end", None, len(text) + 1))
        self.i = 0

    def peek(self) -> Tuple[str, object, int]:
        return self.tokens[self.i]

    def take(self) -> Tuple[str, object, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, column: int):
        raise ExpressionError(message, column, self.text)

    def parse(self) -> Node:
        if self.peek()[0] == "end":
            self.error("empty expression", 1)
        node = self.expr()
        kind, _, column = self.peek()
        if kind != "end":
            self.error(f"unexpected '{self.peek()[1]}'", column)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op, _, column = self.take()
            node = Node(op, (node, self.term()), column)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[0] == "*":
            _, _, column = self.take()
            node = Node("*", (node, self.unary()), column)
        return node

    def unary(self) -> Node:
        if self.peek()[0] == "-":
            _, _, column = self.take()
            return Node("neg", (self.unary(),), column)
        return self.power()

    def power(self) -> Node:
        node = self.postfix()
        if self.peek()[0] == "^":
            _, _, column = self.take()
            node = Node("^", (node, self.unary()), column)
        return node

    def postfix(self) -> Node:
        node = self.atom()
        while self.peek()[0] == "!":
            _, _, column = self.take()
            node = Node("!", (node,), column)
        return node

    def atom(self) -> Node:
        kind, value, column = self.take()
        if kind == "int":
            return Node("int", (value,), column)
        if kind == "ident":
            if value not in self.allowed:
                self.error(f"unknown variable '{value}'", column)
            return Node("var", (value,), column)
        if kind == "(":
            node = self.expr()
            closing, _, close_col = self.take()
            if closing != ")":
                self.error("expected ')'", close_col)
            return node
        if kind == "end":
            self.error("unexpected end of expression", column)
        self.error(f"unexpected '{value}'", column)


def parse_expression(text: str, variables: Tuple[str, ...] = VARIABLES) -> Expression:
    if not isinstance(text, str):
        text = str(text)
    return Expression(text, _Parser(text, variables).parse())


def split_ratio(text: str) -> Tuple[str, Optional[str], int]:
    """Split 'p/q' at its single top-level slash; returns (p, q or None, column of q)."""
    depth = 0
    cut = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            if cut is not None:
                raise ExpressionError("more than one '/'", i + 1, text)
            cut = i
    if cut is None:
        return text, None, 0
    return text[:cut], text[cut + 1:], cut + 2


@dataclass(frozen=True)
class RatioExpression:
    numerator: Expression
    denominator: Optional[Expression]

    def fraction(self, env: Dict[str, int]) -> Fraction:
        num = self.numerator.exact(env)
        if self.denominator is None:
            return Fraction(num)
        den = self.denominator.exact(env)
        if den == 0:
            raise ExpressionError("division by zero", 1, f"{self.numerator}/{self.denominator}")
        return Fraction(num, den)

    def __str__(self) -> str:
        return str(self.numerator) if self.denominator is None else f"{self.numerator}/{self.denominator}"


def parse_ratio(text: str, variables: Tuple[str, ...] = VARIABLES) -> RatioExpression:
    """'p' or 'p/q' with p, q generator expressions; used for rational parameters and hints."""
    text = str(text)
    num, den, den_column = split_ratio(text)
    try:
        numerator = parse_expression(num, variables)
        denominator = parse_expression(den, variables) if den is not None else None
    except ExpressionError as e:
        offset = den_column - 1 if den is not None and e.text == den else 0
        raise ExpressionError(e.message, e.column + offset, text) from e
    return RatioExpression(numerator, denominator)


def parse_fraction(text) -> Fraction:
    """Constant rational such as '1/2', '3' or '-7/4'."""
    return parse_ratio(str(text), ()).fraction({})
