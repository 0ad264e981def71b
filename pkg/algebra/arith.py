"""
Exact sum, product and reciprocal of algebraic numbers.

Annihilating polynomials come from bivariate resultants (sympy); the
minimal polynomial of the result is the unique integer factor whose
value Ball at the combined operand Ball contains zero.
"""

from fractions import Fraction
from typing import Callable, Optional

import sympy

from algebra.ball import Ball, precision_ladder, working_precision
from algebra.errors import DegreeCapExceeded, FactorSelectionAmbiguous, ZeroReciprocal
from algebra.number import (
    AlgebraicNumber,
    RootRegion,
    approximate,
    complex_conjugate,
    make_algebraic,
    rational,
)
from algebra.polynomial import IntegerPolynomial
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)

X, Y = sympy.symbols("x y")

OPERATIONS = ("sum", "product", "reciprocal")


def sum_annihilator(f: IntegerPolynomial, g: IntegerPolynomial, s: int = 1) -> IntegerPolynomial:
    """Res_y(f(y), g(x - s*y)): vanishes at beta + s*gamma for f(gamma) = g(beta) = 0."""
    r = sympy.resultant(f.as_expr(Y), sympy.expand(g.as_expr(X - s * Y)), Y)
    return IntegerPolynomial.from_sympy(sympy.Poly(r, X))


def product_annihilator(f: IntegerPolynomial, g: IntegerPolynomial) -> IntegerPolynomial:
    """Res_y(f(y), y^m g(x/y)): vanishes at every product of roots."""
    m = g.degree
    h = sum(c * X ** k * Y ** (m - k) for k, c in enumerate(g.coefficients))
    r = sympy.resultant(f.as_expr(Y), sympy.expand(h), Y)
    return IntegerPolynomial.from_sympy(sympy.Poly(r, X))


def _check_cap(degree: int, operation: str) -> None:
    cap = get_config().algebra.degree_cap
    if degree > cap:
        raise DegreeCapExceeded(f"result degree bound {degree} exceeds cap {cap}", operation=operation)


def _region_for(poly: IntegerPolynomial, z: Ball, bits: int) -> Optional[RootRegion]:
    if poly.degree == 1:
        return RootRegion(Fraction(-poly.constant, poly.leading), 0, 1)
    roots = poly.roots(bits)
    near = [r for r in roots if r.overlaps(z)]
    if len(near) != 1:
        return None
    others = [r for r in roots if r is not near[0]]
    return RootRegion.around(near[0], others, Fraction(1, 1 << bits))


def select_root(candidate: IntegerPolynomial, value: Callable[[int], Ball],
                operation: str, precision: Optional[int] = None) -> AlgebraicNumber:
    """
    Pick the irreducible factor of `candidate` that vanishes at `value(bits)`,
    doubling precision until exactly one factor's value Ball contains zero.
    """
    factors = [p for p, _ in candidate.factor()]
    start = precision or get_config().precision.start_bits
    for bits in precision_ladder(start):
        with working_precision(bits):
            z = value(bits)
            vanishing = [p for p in factors if p.evaluate(z).contains_zero()]
        if not vanishing:
            raise FactorSelectionAmbiguous(f"no factor of {candidate} vanishes at {z}", operation=operation)
        if len(vanishing) == 1:
            region = _region_for(vanishing[0], z, bits)
            if region is not None:
                return make_algebraic(vanishing[0], region, bits)
        logger.debug(f"{operation}: {len(vanishing)} candidate factors at {bits} bits, refining")
    raise FactorSelectionAmbiguous(
        f"{len(vanishing)} factors of {candidate} stay compatible at the precision cap", operation=operation
    )


def negate(alpha: AlgebraicNumber) -> AlgebraicNumber:
    s = alpha.selector
    return AlgebraicNumber(alpha.minpoly.negated_argument().primitive(),
                           RootRegion(-s.center_re, -s.center_im, s.half_width))


def scale(alpha: AlgebraicNumber, s: int) -> AlgebraicNumber:
    """s * alpha for a nonzero integer s."""
    if s == 0:
        return rational(0)
    sel = alpha.selector
    return AlgebraicNumber(alpha.minpoly.scaled_roots(s).primitive(),
                           RootRegion(s * sel.center_re, s * sel.center_im, abs(s) * sel.half_width))


def add(alpha: AlgebraicNumber, beta: AlgebraicNumber, precision: Optional[int] = None) -> AlgebraicNumber:
    if alpha.is_rational and beta.is_rational:
        return rational(alpha.as_fraction() + beta.as_fraction())
    if alpha.is_zero:
        return beta
    if beta.is_zero:
        return alpha
    _check_cap(alpha.degree * beta.degree, "arith.sum")
    candidate = sum_annihilator(alpha.minpoly, beta.minpoly)
    return select_root(candidate, lambda bits: approximate(alpha, bits) + approximate(beta, bits),
                       "arith.sum", precision)


def multiply(alpha: AlgebraicNumber, beta: AlgebraicNumber, precision: Optional[int] = None) -> AlgebraicNumber:
    if alpha.is_rational and beta.is_rational:
        return rational(alpha.as_fraction() * beta.as_fraction())
    if alpha.is_zero or beta.is_zero:
        return rational(0)
    _check_cap(alpha.degree * beta.degree, "arith.product")
    candidate = product_annihilator(alpha.minpoly, beta.minpoly)
    return select_root(candidate, lambda bits: approximate(alpha, bits) * approximate(beta, bits),
                       "arith.product", precision)


def reciprocal(alpha: AlgebraicNumber, precision: Optional[int] = None) -> AlgebraicNumber:
    if alpha.is_zero:
        raise ZeroReciprocal("0 has no reciprocal", operation="arith.reciprocal")
    if alpha.is_rational:
        return rational(1 / alpha.as_fraction())
    candidate = alpha.minpoly.reversed().primitive()
    return select_root(candidate, lambda bits: 1 / approximate(alpha, bits), "arith.reciprocal", precision)


def difference(alpha: AlgebraicNumber, beta: AlgebraicNumber, precision: Optional[int] = None) -> AlgebraicNumber:
    return add(alpha, negate(beta), precision)


def arith(op: str, alpha: AlgebraicNumber, beta: Optional[AlgebraicNumber] = None,
          precision: Optional[int] = None) -> AlgebraicNumber:
    """Exact alpha + beta, alpha * beta or 1 / alpha."""
    if op == "reciprocal":
        return reciprocal(alpha, precision)
    if beta is None:
        raise ValueError(f"arith '{op}' needs two operands")
    if op == "sum":
        return add(alpha, beta, precision)
    if op == "product":
        return multiply(alpha, beta, precision)
    raise ValueError(f"Unknown arith operation: {op}. Must be one of {', '.join(OPERATIONS)}")


def exact_real_part(alpha: AlgebraicNumber, precision: Optional[int] = None) -> Optional[Fraction]:
    """Re(alpha) as a Fraction when it is rational and decidable, else None."""
    if alpha.is_rational:
        return alpha.as_fraction()
    if alpha.degree == 2:
        c, b, a = alpha.minpoly.coefficients
        if b * b - 4 * a * c < 0:
            return Fraction(-b, 2 * a)
        return None
    if approximate(alpha, precision).is_real:
        return None
    if alpha.degree * alpha.degree > get_config().algebra.degree_cap:
        return None
    twice = add(alpha, complex_conjugate(alpha), precision)
    if twice.is_rational:
        return twice.as_fraction() / 2
    return None
