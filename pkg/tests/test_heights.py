from fractions import Fraction

import pytest

from algebra.ball import Ball, Verdict
from algebra.errors import FactorSelectionAmbiguous
from algebra.number import from_hint, from_polynomial, rational
from algebra.polynomial import IntegerPolynomial
from heights.errors import ConjugatePair
from heights.liouville import liouville_gap
from heights.measures import height_report, house, mahler, weil_height
from heights.suite import _inequality, inequality_suite


def sqrt2():
    return from_hint(IntegerPolynomial((-2, 0, 1)), Fraction(7, 5))


def sqrt3():
    return from_hint(IntegerPolynomial((-3, 0, 1)), Fraction(7, 4))


def golden():
    return from_hint(IntegerPolynomial((-1, -1, 1)), Fraction(8, 5))


def i():
    return from_hint(IntegerPolynomial((1, 0, 1)), 0, 1)


def approx(ball):
    return float(ball.real.mid())


def test_house():
    assert house(rational(5)).contains(5)
    assert approx(house(sqrt2())) == pytest.approx(1.41421356, rel=1e-8)
    # phi, not its conjugate -0.618
    assert approx(house(golden())) == pytest.approx(1.61803399, rel=1e-8)


def test_mahler_measure():
    assert mahler(rational(3)).contains(3)
    assert mahler(i()).contains(1)
    assert approx(mahler(golden())) == pytest.approx(1.61803399, rel=1e-8)


def test_weil_height():
    assert weil_height(rational(7)).contains(7)
    report = height_report(sqrt2(), 128)
    assert report.mahler.contains(2)
    assert approx(report.weil) == pytest.approx(1.41421356, rel=1e-8)
    half = rational(Fraction(1, 2))
    assert mahler(half).contains(2)
    assert weil_height(half).contains(2)


def test_height_measure_identity_is_tight(precision):
    for poly in ((-2, 0, 0, 1), (-1, -1, 1), (1, 1, 1, 1, 1), (-3, 0, 0, 2)):
        alpha = from_polynomial(IntegerPolynomial(poly), 0, precision)
        report = height_report(alpha, precision)
        lhs = report.weil ** report.degree
        assert lhs.overlaps(report.mahler)
        assert float(report.mahler.rad) < 1e-20


def test_liouville_gap_sqrt2_and_one():
    gap = liouville_gap(sqrt2(), rational(1))
    assert gap.holds is Verdict.VERIFIED
    assert gap.bound.contains(Fraction(1, 8))
    assert approx(gap.distance) == pytest.approx(0.41421356, rel=1e-8)


def test_liouville_gap_rationals():
    gap = liouville_gap(rational(Fraction(1, 2)), rational(0))
    assert gap.holds is Verdict.VERIFIED
    assert gap.bound.contains(Fraction(1, 4))
    assert gap.distance.contains(Fraction(1, 2))


def test_liouville_gap_rejects_conjugates():
    minus = from_hint(IntegerPolynomial((-2, 0, 1)), Fraction(-7, 5))
    with pytest.raises(ConjugatePair):
        liouville_gap(sqrt2(), minus)


def test_suite_on_rational_integer():
    report = inequality_suite([rational(5)])
    assert {c.check_id for c in report.checks} == {"height_measure", "house_lower", "house_upper", "reciprocal"}
    assert all(c.verdict is Verdict.VERIFIED for c in report.checks)


def test_suite_on_i_is_tight_at_both_ends():
    report = inequality_suite([i()])
    chain = [c for c in report.checks if c.check_id in ("house_lower", "house_upper")]
    assert len(chain) == 2
    assert all(c.tight and c.verdict is Verdict.INCONCLUSIVE for c in chain)


def test_suite_on_square_roots():
    report = inequality_suite([sqrt2(), sqrt3()], 128)
    assert not report.violated
    sums = [c for c in report.checks if c.check_id == "sum_bound"]
    assert sums[0].verdict is Verdict.VERIFIED
    assert approx(sums[0].rhs) == pytest.approx(4 * 2 ** 0.5 * 3 ** 0.5, rel=1e-8)
    assert any(c.check_id == "liouville" and c.verdict is Verdict.VERIFIED for c in report.checks)


def test_suite_needs_numbers():
    with pytest.raises(ValueError):
        inequality_suite([])


def test_suite_inequality_retries_at_doubled_precision():
    calls = []

    def sides(bits):
        calls.append(bits)
        # 1 <= 1 + 2^-40, unresolved while the radius 2^-bits swallows the gap
        return Ball.exact(1), Ball.around(1 + Fraction(1, 2 ** 40), Fraction(1, 2 ** bits))

    check = _inequality("house_upper", ("x",), sides, 32)
    assert calls == [32, 64]
    assert check.verdict is Verdict.VERIFIED
    assert not check.tight


def test_suite_survives_failed_reciprocal(monkeypatch):
    def ambiguous(alpha, precision=None):
        raise FactorSelectionAmbiguous("two factors stay compatible", operation="arith.reciprocal")

    monkeypatch.setattr("heights.suite.reciprocal", ambiguous)
    report = inequality_suite([sqrt2(), sqrt3()], 128)
    inverses = [c for c in report.checks if c.check_id == "reciprocal"]
    assert len(inverses) == 2
    assert all(c.verdict is Verdict.INCONCLUSIVE and c.lhs is None for c in inverses)
    assert "FactorSelectionAmbiguous" in inverses[0].note
    assert any(c.check_id == "sum_bound" for c in report.checks)
