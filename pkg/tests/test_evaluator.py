from fractions import Fraction

import pytest

from algebra.ball import Ball, Verdict, arb_to_fraction
from cli.spec_loader import parse_document
from criteria.errors import MajorantUnverified
from criteria.signs import sign_condition_check
from evaluator.errors import BudgetExhausted, FactorNearZero, TermMagnitude
from evaluator.evaluate import evaluate
from evaluator.products import (exact_partial_product, inner_factors, partial_product, partial_product_2d,
                                pivot_identity, xi_value)
from evaluator.tails import inner_floor, tail_bound_2d, tail_bound_thm1, tail_sum_thm1


def product(**fields):
    data = {"kind": "product", "alpha": "2^(2^n)", "b": "1", "epsilon": "1/2", "a": "1/2", "e": 1, "D": 1}
    data.update(fields)
    return parse_document(data).spec


def array(**fields):
    data = {"kind": "product_of_series", "alpha": "2^(2^(n+m))", "b": "1", "epsilon": "1/2", "e": 1, "D": 1,
            "majorant": {"kind": "geometric", "c": "1", "r": "1/16", "start": 3}}
    data.update(fields)
    return parse_document(data).spec


def test_partial_products(spec_document, precision):
    spec = spec_document("double_exponential.json").spec
    assert partial_product(spec, 0, precision).contains(1)
    x3 = partial_product(spec, 3, precision)
    assert x3.is_exact
    assert x3.contains(Fraction(5, 4) * Fraction(17, 16) * Fraction(257, 256))
    assert exact_partial_product(spec, 1) == Fraction(5, 4)
    with pytest.raises(ValueError):
        partial_product(spec, -1)


def test_finite_partial_products(spec_document, precision):
    spec = spec_document("finite_product.json").spec
    assert partial_product(spec, 1, precision).contains(Fraction(3, 2))
    assert exact_partial_product(spec, 3) == Fraction(255, 128)


def test_array_partial_products(precision):
    spec = array()
    assert partial_product_2d(spec, 0, precision).contains(1)
    assert partial_product_2d(spec, 1, precision).contains(Fraction(17, 16))
    expected = (1 + Fraction(1, 16) + Fraction(1, 256)) * (1 + Fraction(1, 256))
    assert partial_product_2d(spec, 2, precision).contains(expected)
    assert [f.contains(v) for f, v in zip(inner_factors(spec, 2, precision),
                                           (1 + Fraction(1, 16) + Fraction(1, 256), 1 + Fraction(1, 256)))] == [
        True, True]


def test_term_must_be_small(precision):
    with pytest.raises(TermMagnitude):
        partial_product(product(alpha="1"), 2, precision)


def test_infinite_tail_needs_majorant(precision):
    with pytest.raises(MajorantUnverified):
        tail_sum_thm1(product(), 3, precision)


def test_truncation_bound(spec_document, precision):
    spec = spec_document("double_exponential.json").spec
    x5 = partial_product(spec, 5, precision)
    bound = tail_bound_thm1(spec, 5, x5, precision)
    # the limit is 4/3 and 4/3 - x_5 = (4/3) 2^-64
    assert arb_to_fraction(bound.upper()) >= Fraction(4, 3 * 2 ** 64)
    assert float(bound.real.mid()) < 1e-19
    finite = spec_document("finite_product.json").spec
    assert tail_bound_thm1(finite, 3, partial_product(finite, 3, precision), precision).contains(0)


def test_double_exponential_value(spec_document):
    enclosure = evaluate(spec_document("double_exponential.json").spec, "1e-30")
    assert not enclosure.exhausted
    assert enclosure.terms_used == 6
    assert float(enclosure.radius) <= 1e-30
    assert enclosure.contains(Fraction(4, 3))


def test_enclosure_holds_later_partial_products(spec_document):
    spec = spec_document("double_exponential.json").spec
    enclosure = evaluate(spec, "1e-30")
    later = exact_partial_product(spec, enclosure.terms_used + 6)
    assert later is not None
    assert enclosure.contains(later)


def test_finite_product_is_exact(spec_document):
    enclosure = evaluate(spec_document("finite_product.json").spec, "1e-40")
    assert enclosure.exact == Fraction(255, 128)
    assert enclosure.terms_used == 3
    assert enclosure.provenance == "finite"
    assert enclosure.value.is_exact


def test_factorial_exponents_match_deep_prefix():
    spec = product(alpha="10^(n!)", majorant={"kind": "geometric", "c": "1", "r": "1/10"})
    enclosure = evaluate(spec, "1e-20")
    assert float(enclosure.radius) <= 1e-20
    assert enclosure.value.overlaps(partial_product(spec, 25, 256))


def test_array_value(precision):
    spec = array()
    enclosure = evaluate(spec, "1e-6", precision)
    assert float(enclosure.radius) <= 1e-6
    assert enclosure.mode_floor == 1
    assert float(enclosure.inner_floor.real.mid()) > 0.5
    assert enclosure.contains(partial_product_2d(spec, 8, 512))


def test_budget_exhausted(spec_document):
    spec = spec_document("double_exponential.json").spec
    enclosure = evaluate(spec, "1e-30", max_terms=3)
    assert enclosure.exhausted
    assert enclosure.terms_used == 3
    with pytest.raises(BudgetExhausted) as info:
        evaluate(spec, "1e-30", max_terms=3, strict=True)
    assert info.value.enclosure.exhausted


def test_target_radius_must_be_positive(spec_document):
    with pytest.raises(ValueError):
        evaluate(spec_document("finite_product.json").spec, "0")


def test_xi_values(precision):
    xi = xi_value(array(), 2, 1, precision)
    assert xi.sign == 1
    assert xi.value.contains(272)
    with pytest.raises(ValueError):
        xi_value(array(), 2, 3, precision)


def test_pivot_identity():
    for xi in (Ball.exact(2), Ball.exact(Fraction(-1, 2), 1), Ball.exact(-3, Fraction(1, 3))):
        lhs, rhs = pivot_identity(xi)
        assert lhs.overlaps(rhs)
    lhs, rhs = pivot_identity(Ball.exact(Fraction(-1, 2), 1))
    assert lhs.contains(0) and rhs.contains(0)
    with pytest.raises(FactorNearZero):
        pivot_identity(Ball.exact(0))


def test_inner_floor(precision):
    assert inner_floor([], precision).contains(1)
    floor = inner_floor([Ball.exact(Fraction(3, 2)), Ball.exact(Fraction(5, 4))], precision)
    assert float(floor.real.mid()) == pytest.approx(1.25)
    with pytest.raises(FactorNearZero):
        inner_floor([Ball.around(0, 1)], precision)


HALVES = {"kind": "geometric", "c": "1", "r": "1/2", "start": 1}
# alpha_n = 1 +/- i 2^n: Re(alpha) + 1/2 > 0
COMPLEX_RIGHT = {"template": ["1+4^n", "-2", "1"], "center": ["1", "2^n"]}
# alpha_n = -1 +/- i 2^n: Re(alpha) + 1/2 < 0
COMPLEX_LEFT = {"template": ["1+4^n", "2", "1"], "center": ["-1", "2^n"]}


def sequence_specs():
    return {
        "double exponential": product(majorant={"kind": "geometric", "c": "1", "r": "1/65536", "start": 7}),
        "complex, e = 1": product(alpha=COMPLEX_RIGHT, majorant=HALVES),
        "complex, e = -1": product(alpha=COMPLEX_LEFT, e=-1, majorant=HALVES),
    }


@pytest.mark.parametrize("name", ["double exponential", "complex, e = 1", "complex, e = -1"])
def test_partial_product_moduli_are_monotone(name, precision):
    spec = sequence_specs()[name]
    moduli = [abs(partial_product(spec, N, precision)).real for N in range(9)]
    for previous, current in zip(moduli, moduli[1:]):
        if spec.e == 1:
            assert not current < previous
        else:
            assert not current > previous
    if spec.e == -1:
        assert moduli[8] < moduli[0]


@pytest.mark.parametrize("name", ["double exponential", "complex, e = 1", "complex, e = -1"])
@pytest.mark.parametrize("N", [2, 5])
def test_truncation_bound_covers_later_partial_products(name, N, precision):
    spec = sequence_specs()[name]
    x_N = partial_product(spec, N, precision)
    bound = tail_bound_thm1(spec, N, x_N, precision)
    distance = abs(partial_product(spec, N + 10, precision) - x_N)
    assert distance.upper() <= bound.upper()


def array_specs():
    return {
        # alpha = (1 + 2i) 4^(n+m)
        "I": array(alpha={"template": ["5*16^(n+m)", "-2*4^(n+m)", "1"], "center": ["4^(n+m)", "2*4^(n+m)"]},
                   sign_mode="I", majorant=HALVES),
        # alpha = -1/2 + i sqrt(16^(n+m) + 3/4)
        "II": array(alpha={"template": ["1+16^(n+m)", "1", "1"], "center": ["-1", "4^(n+m)"]},
                    sign_mode="II", majorant=HALVES),
        # alpha = (2 + i) 4^(n+m)
        "III": array(alpha={"template": ["5*16^(n+m)", "-4*4^(n+m)", "1"], "center": ["2*4^(n+m)", "4^(n+m)"]},
                     sign_mode="III", majorant=HALVES),
    }


@pytest.mark.parametrize("mode", ["I", "II", "III"])
def test_array_truncation_bound_with_complex_terms(mode, precision):
    spec = array_specs()[mode]
    N = 3
    signs = sign_condition_check(spec, N, precision)
    assert signs.verdict is Verdict.VERIFIED
    factors = inner_factors(spec, N, precision)
    x_N = partial_product_2d(spec, N, precision)
    estimate = tail_bound_2d(spec, N, x_N, factors, signs.floor, precision)
    distance = abs(partial_product_2d(spec, N + 6, precision) - x_N)
    assert distance.upper() <= estimate.bound.upper()


def exact_parts(ball):
    return tuple(arb_to_fraction(part) for part in (ball.real, ball.real.rad(), ball.imag, ball.imag.rad()))


@pytest.mark.parametrize("make", [
    lambda: sequence_specs()["double exponential"],
    lambda: sequence_specs()["complex, e = -1"],
    lambda: array(),
])
def test_enclosures_are_reproducible(make):
    first = evaluate(make(), "1e-8")
    second = evaluate(make(), "1e-8")
    assert exact_parts(first.value) == exact_parts(second.value)
    assert (first.terms_used, first.precision, first.provenance) == \
           (second.terms_used, second.precision, second.provenance)
