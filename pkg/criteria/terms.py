"""
Term generators: the alpha and b families of a spec, indexed by (n,) or (n, m).

IntegerTerm evaluates a grammar expression and stays exact while the
value is small, switching to the log domain for towers. TemplateTerm
builds a non-rational algebraic integer from coefficient expressions and
a root hint. ExplicitTerm is a finite list of constant generators.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

import flint

from algebra.arith import exact_real_part
from algebra.ball import Ball, holds, Verdict, working_precision
from algebra.number import AlgebraicNumber, RootRegion, approximate, from_hint, make_algebraic, rational
from algebra.polynomial import IntegerPolynomial
from cli.grammar import Expression, Magnitude, RatioExpression
from criteria.errors import ExpressionTooLarge
from heights.measures import house
from utils.config import get_config

Index = Tuple[int, ...]


def env_of(index: Index) -> Dict[str, int]:
    if len(index) == 1:
        return {"n": index[0]}
    return {"n": index[0], "m": index[1]}


def _sign_of(ball: Ball) -> Optional[int]:
    if ball.is_exact and ball.real.is_zero():
        return 0
    zero = Ball.exact(0)
    if holds(ball, zero, ">") is Verdict.VERIFIED:
        return 1
    if holds(ball, zero, "<") is Verdict.VERIFIED:
        return -1
    return None


class TermGenerator(ABC):
    """One algebraic number per index."""

    kind = "generator"

    @abstractmethod
    def number(self, index: Index, precision: Optional[int] = None) -> AlgebraicNumber:
        ...

    @abstractmethod
    def ball(self, index: Index, precision: int) -> Ball:
        ...

    def log_abs(self, index: Index, precision: int) -> flint.arb:
        with working_precision(precision):
            modulus = abs(self.ball(index, precision))
            if modulus.contains_zero():
                raise ValueError(f"{self} vanishes (or nearly) at {index}")
            return modulus.real.log()

    def house_log(self, index: Index, precision: int) -> flint.arb:
        h = house(self.number(index, precision), precision)
        with working_precision(precision):
            return h.real.log()

    def degree(self, index: Index) -> int:
        return self.number(index).degree

    def is_integer(self, index: Index) -> bool:
        return self.number(index).is_integer

    def exact_value(self, index: Index) -> Optional[Fraction]:
        return None

    def real_part(self, index: Index) -> Optional[Fraction]:
        return None

    def imag_square(self, index: Index) -> Optional[Fraction]:
        return None

    def sign(self, index: Index) -> Optional[int]:
        """Sign of a real value, None when non-real or undecided."""
        return None

    def imag_sign(self, index: Index, precision: int) -> Optional[int]:
        return 0

    def power_form(self, index: Index) -> Optional[Tuple[int, Fraction]]:
        return None

    @property
    def length(self) -> Optional[int]:
        """Number of terms for finite generators."""
        return None


@dataclass(frozen=True)
class IntegerTerm(TermGenerator):
    expression: Expression
    kind = "expression"

    def value(self, index: Index):
        return self.expression.value(env_of(index))

    def number(self, index: Index, precision: Optional[int] = None) -> AlgebraicNumber:
        v = self.value(index)
        if isinstance(v, Magnitude):
            raise ExpressionTooLarge(f"'{self.expression}' at {index} is too large for an exact number",
                                     operation="number", coordinates=index)
        return rational(v)

    def ball(self, index: Index, precision: int) -> Ball:
        with working_precision(precision):
            return self.expression.ball(env_of(index))

    def log_abs(self, index: Index, precision: int) -> flint.arb:
        with working_precision(precision):
            value = self.expression.log_abs(env_of(index))
        if value is None:
            raise ValueError(f"'{self.expression}' is zero at {index}")
        return value

    def house_log(self, index: Index, precision: int) -> flint.arb:
        return self.log_abs(index, precision)

    def degree(self, index: Index) -> int:
        return 1

    def is_integer(self, index: Index) -> bool:
        return True

    def exact_value(self, index: Index) -> Optional[Fraction]:
        v = self.value(index)
        return None if isinstance(v, Magnitude) else Fraction(v)

    def real_part(self, index: Index) -> Optional[Fraction]:
        return self.exact_value(index)

    def imag_square(self, index: Index) -> Optional[Fraction]:
        return Fraction(0)

    def sign(self, index: Index) -> Optional[int]:
        return self.expression.sign(env_of(index))

    def power_form(self, index: Index) -> Optional[Tuple[int, Fraction]]:
        form = self.expression.power_form(env_of(index))
        if form is None:
            return None
        return form[0], Fraction(form[1])

    def __str__(self) -> str:
        return str(self.expression)


@lru_cache(maxsize=2048)
def _template_number(term: "TemplateTerm", index: Index, precision: int) -> AlgebraicNumber:
    env = env_of(index)
    poly = IntegerPolynomial(tuple(c.exact(env) for c in term.coefficients))
    re = term.center_re.fraction(env)
    im = term.center_im.fraction(env)
    if term.half_width is not None:
        return make_algebraic(poly, RootRegion(re, im, term.half_width.fraction(env)), precision)
    return from_hint(poly, re, im, precision)


@dataclass(frozen=True)
class TemplateTerm(TermGenerator):
    """Root of sum_k c_k(n, m) x^k nearest to (center_re, center_im)."""
    coefficients: Tuple[Expression, ...]
    center_re: RatioExpression
    center_im: RatioExpression
    half_width: Optional[RatioExpression] = None
    kind = "template"

    def polynomial(self, index: Index) -> IntegerPolynomial:
        env = env_of(index)
        return IntegerPolynomial(tuple(c.exact(env) for c in self.coefficients))

    def number(self, index: Index, precision: Optional[int] = None) -> AlgebraicNumber:
        return _template_number(self, index, precision or get_config().precision.start_bits)

    def ball(self, index: Index, precision: int) -> Ball:
        return approximate(self.number(index), precision)

    def exact_value(self, index: Index) -> Optional[Fraction]:
        alpha = self.number(index)
        return alpha.as_fraction() if alpha.is_rational else None

    def real_part(self, index: Index) -> Optional[Fraction]:
        return exact_real_part(self.number(index))

    def imag_square(self, index: Index) -> Optional[Fraction]:
        alpha = self.number(index)
        if alpha.is_rational:
            return Fraction(0)
        if alpha.degree == 2:
            c, b, a = alpha.minpoly.coefficients
            disc = b * b - 4 * a * c
            return Fraction(-disc, 4 * a * a) if disc < 0 else Fraction(0)
        return None

    def sign(self, index: Index) -> Optional[int]:
        alpha = self.number(index)
        if alpha.is_rational:
            q = alpha.as_fraction()
            return (q > 0) - (q < 0)
        z = approximate(alpha)
        return _sign_of(z) if z.is_real else None

    def imag_sign(self, index: Index, precision: int) -> Optional[int]:
        z = self.ball(index, precision)
        if z.is_real:
            return 0
        return _sign_of(z.im)

    def __str__(self) -> str:
        return "template(" + ", ".join(str(c) for c in self.coefficients) + ")"


@dataclass(frozen=True)
class ExplicitTerm(TermGenerator):
    """Finite list of constant generators, item k at index (k,)."""
    items: Tuple[TermGenerator, ...]
    kind = "explicit"

    def item(self, index: Index) -> TermGenerator:
        n = index[0]
        if len(index) != 1 or not 1 <= n <= len(self.items):
            raise IndexError(f"explicit generator has {len(self.items)} terms, index {index} requested")
        return self.items[n - 1]

    @property
    def length(self) -> Optional[int]:
        return len(self.items)

    def number(self, index, precision=None):
        return self.item(index).number(index, precision)

    def ball(self, index, precision):
        return self.item(index).ball(index, precision)

    def log_abs(self, index, precision):
        return self.item(index).log_abs(index, precision)

    def house_log(self, index, precision):
        return self.item(index).house_log(index, precision)

    def degree(self, index):
        return self.item(index).degree(index)

    def is_integer(self, index):
        return self.item(index).is_integer(index)

    def exact_value(self, index):
        return self.item(index).exact_value(index)

    def real_part(self, index):
        return self.item(index).real_part(index)

    def imag_square(self, index):
        return self.item(index).imag_square(index)

    def sign(self, index):
        return self.item(index).sign(index)

    def imag_sign(self, index, precision):
        return self.item(index).imag_sign(index, precision)

    def power_form(self, index):
        return self.item(index).power_form(index)

    def __str__(self) -> str:
        return "[" + ", ".join(str(i) for i in self.items) + "]"


# b / alpha


def ratio_fraction(alpha: TermGenerator, b: TermGenerator, index: Index) -> Optional[Fraction]:
    """b/alpha as an exact Fraction when both values are small rationals."""
    a, c = alpha.exact_value(index), b.exact_value(index)
    if a is None or c is None:
        return None
    if a == 0:
        raise ValueError(f"alpha vanishes at {index}")
    return c / a


def ratio_log(alpha: TermGenerator, b: TermGenerator, index: Index, precision: int) -> flint.arb:
    """ln |b/alpha|."""
    lb, la = b.log_abs(index, precision), alpha.log_abs(index, precision)
    with working_precision(precision):
        return lb - la


def ratio_ball(alpha: TermGenerator, b: TermGenerator, index: Index, precision: int) -> Ball:
    exact = ratio_fraction(alpha, b, index)
    if exact is not None:
        return Ball.exact(exact)
    if alpha.degree(index) == 1:
        sign = alpha.sign(index) * b.sign(index)
        log = ratio_log(alpha, b, index, precision)
        with working_precision(precision):
            return Ball.from_arb(sign * log.exp())
    with working_precision(precision):
        return b.ball(index, precision) / alpha.ball(index, precision)


def real_ratio_sign(alpha: TermGenerator, b: TermGenerator, index: Index, shift: Fraction,
                    precision: int) -> Tuple[Optional[int], bool]:
    """(sign of Re(alpha/b) - shift, decided exactly)."""
    re, bv = alpha.real_part(index), b.exact_value(index)
    if re is not None and bv is not None:
        diff = re / bv - shift
        return (diff > 0) - (diff < 0), True
    for bits in (precision, min(2 * precision, get_config().precision.cap_bits)):
        if alpha.degree(index) == 1:
            s = alpha.sign(index)
            if shift == 0 or s * shift < 0:
                return s, False
            log = ratio_log(b, alpha, index, bits)
            with working_precision(bits):
                threshold = flint.arb(abs(shift.numerator)).log() - flint.arb(shift.denominator).log()
                if log > threshold:
                    return s, False
                if log < threshold:
                    return -s, False
            continue
        with working_precision(bits):
            value = alpha.ball(index, bits).re / b.ball(index, bits) - shift
            sign = _sign_of(value)
        if sign is not None:
            return sign, False
    return None, False
