from fractions import Fraction

import flint
import pytest

from algebra.arith import add, arith, difference, exact_real_part, multiply, negate, reciprocal
from algebra.ball import Ball, Verdict, ball_max, ball_min, compare, decide, holds, precision_ladder
from algebra.errors import DegreeCapExceeded, Reducible, ZeroPolynomial, ZeroReciprocal
from algebra.number import (
    RootRegion,
    approximate,
    complex_conjugate,
    conjugate_enclosures,
    from_hint,
    from_polynomial,
    make_algebraic,
    rational,
)
from algebra.polynomial import IntegerPolynomial
from algebra.tower import degree_over, primitive_element
from utils.config import AlgebraConfig, Config, set_config

X2_MINUS_2 = IntegerPolynomial((-2, 0, 1))
X2_MINUS_3 = IntegerPolynomial((-3, 0, 1))


def sqrt2():
    return from_hint(X2_MINUS_2, Fraction(7, 5))


def sqrt3():
    return from_hint(X2_MINUS_3, Fraction(7, 4))


def close(ball: Ball, value: float, tol: float = 1e-10) -> bool:
    return abs(float(ball.real.mid()) - value) < tol


# polynomials


def test_polynomial_normalization():
    assert IntegerPolynomial((3, 2, 0, 0)).coefficients == (3, 2)
    assert IntegerPolynomial((-4, 0, -2)).primitive().coefficients == (2, 0, 1)
    assert IntegerPolynomial((1, 2, 3)).reversed().coefficients == (3, 2, 1)
    assert str(IntegerPolynomial((1, 0, -10, 0, 1))) == "x^4 - 10x^2 + 1"


def test_zero_polynomial_rejected():
    with pytest.raises(ZeroPolynomial):
        IntegerPolynomial((0, 0))


def test_factor_and_irreducibility():
    assert not IntegerPolynomial((-4, 0, 1)).is_irreducible()
    assert X2_MINUS_2.is_irreducible()
    assert not IntegerPolynomial((4, -4, 1)).is_squarefree()


# construction and approximation


def test_rational_integer():
    five = make_algebraic(IntegerPolynomial((-5, 1)), RootRegion(5, 0, 1))
    assert five.degree == 1
    assert five.as_fraction() == 5
    assert approximate(five, 64).is_exact


def test_sqrt2_approximation():
    alpha = make_algebraic(X2_MINUS_2, RootRegion(Fraction(7, 5), 0, Fraction(1, 2)))
    assert alpha.degree == 2
    z = approximate(alpha, 64)
    assert close(z, 1.41421356237)
    assert z.rad <= flint.arb(2) ** -60


def test_reducible_minimal_polynomial():
    with pytest.raises(Reducible):
        make_algebraic(IntegerPolynomial((-4, 0, 1)), RootRegion(2, 0, 1))


def test_region_must_isolate_one_root():
    from algebra.errors import AmbiguousSelector
    with pytest.raises(AmbiguousSelector):
        make_algebraic(X2_MINUS_2, RootRegion(0, 0, 2))


def test_golden_ratio():
    phi = from_hint(IntegerPolynomial((-1, -1, 1)), Fraction(8, 5))
    assert close(approximate(phi, 64), 1.61803398875)


def test_from_polynomial_orders_real_roots_first():
    roots = [approximate(from_polynomial(IntegerPolynomial((-2, 0, 0, 1)), i), 64) for i in range(3)]
    assert roots[0].is_real
    assert not roots[1].is_real and not roots[2].is_real


def test_conjugates_of_cube_root():
    conjugates = conjugate_enclosures(from_polynomial(IntegerPolynomial((-2, 0, 0, 1)), 0), 64)
    assert len(conjugates) == 3
    assert sum(1 for c in conjugates if c.is_real) == 1
    for c in conjugates:
        assert close(abs(c), 2 ** (1 / 3))


def test_conjugates_of_i():
    conjugates = conjugate_enclosures(from_hint(IntegerPolynomial((1, 0, 1)), 0, 1), 64)
    imag = sorted(float(c.imag.mid()) for c in conjugates)
    assert imag == pytest.approx([-1.0, 1.0])



def test_complex_conjugate():
    i = from_hint(IntegerPolynomial((1, 0, 1)), 0, 1)
    conjugate = complex_conjugate(i)
    assert conjugate.minpoly == i.minpoly
    assert float(approximate(conjugate, 64).imag.mid()) == pytest.approx(-1.0)
    assert close(approximate(complex_conjugate(sqrt2()), 64), 1.41421356237)


# exact arithmetic


def test_sum_of_opposites_is_zero():
    minus = from_hint(X2_MINUS_2, Fraction(-7, 5))
    assert add(sqrt2(), minus).is_zero


def test_product_of_equal_roots():
    two = multiply(sqrt2(), sqrt2())
    assert two.is_rational and two.as_fraction() == 2


def test_sum_of_square_roots():
    gamma = arith("sum", sqrt2(), sqrt3())
    assert gamma.minpoly.coefficients == (1, 0, -10, 0, 1)
    assert close(approximate(gamma, 64), 3.14626436994)


def test_negate_and_difference():
    assert close(approximate(negate(sqrt2()), 64), -1.41421356237)
    assert difference(sqrt2(), sqrt2()).is_zero


def test_reciprocal():
    assert reciprocal(rational(Fraction(1, 2))).as_fraction() == 2
    inverse = reciprocal(sqrt2())
    assert inverse.minpoly.coefficients == (-1, 0, 2)
    with pytest.raises(ZeroReciprocal):
        reciprocal(rational(0))


def test_degree_cap():
    set_config(Config(algebra=AlgebraConfig(degree_cap=3)))
    with pytest.raises(DegreeCapExceeded):
        add(sqrt2(), sqrt3())


def test_exact_real_part():
    i = from_hint(IntegerPolynomial((1, 0, 1)), 0, 1)
    assert exact_real_part(i) == 0
    assert exact_real_part(rational(Fraction(3, 4))) == Fraction(3, 4)
    assert exact_real_part(sqrt2()) is None


def test_unknown_operation():
    with pytest.raises(ValueError):
        arith("quotient", sqrt2(), sqrt3())


# towers


def test_degree_over():
    assert degree_over(sqrt2(), []) == 2
    assert degree_over(sqrt2(), [sqrt2()]) == 1
    assert degree_over(sqrt3(), [sqrt2()]) == 2


def test_primitive_element_degree():
    _, degree = primitive_element([sqrt2(), sqrt3(), rational(5)])
    assert degree == 4


# balls


def test_precision_ladder():
    assert list(precision_ladder(64, 512)) == [64, 128, 256, 512]


def test_tri_state_comparison():
    one, two = Ball.exact(1), Ball.exact(2)
    assert holds(one, two, "<") is Verdict.VERIFIED
    assert holds(two, one, "<=") is Verdict.VIOLATED
    assert holds(one, one, "<=") is Verdict.VERIFIED
    assert compare(one, one) == 0
    wide = Ball.around(1, Fraction(1, 2))
    assert holds(wide, Ball.exact(Fraction(5, 4)), "<") is Verdict.INCONCLUSIVE


def test_decide_refines_with_precision():
    def sides(bits):
        third = Ball.exact(1) / 3
        return third * 3, Ball.exact(2)

    verdict, lhs, rhs = decide(sides, "<", 64)
    assert verdict is Verdict.VERIFIED


def test_ball_max_and_min():
    values = [Ball.exact(1), Ball.exact(3), Ball.exact(2)]
    assert ball_max(values).contains(3)
    assert ball_min(values).contains(1)
    with pytest.raises(ValueError):
        ball_max([])
