import math
import random
from fractions import Fraction

import pytest

from cli.errors import ExpressionError
from cli.grammar import Magnitude, parse_expression, parse_fraction, parse_ratio
from criteria.errors import ExpressionTooLarge


def test_factorial():
    assert parse_expression("n!").exact({"n": 5}) == 120


def test_double_caret_column():
    with pytest.raises(ExpressionError) as info:
        parse_expression("2^^n")
    assert info.value.column == 3


@pytest.mark.parametrize("text, column", [
    ("n/2", 2),
    ("(n+1", 5),
    ("", 1),
    ("2 ** n", 4),
    ("k+1", 1),
])
def test_syntax_errors(text, column):
    with pytest.raises(ExpressionError) as info:
        parse_expression(text)
    assert info.value.column == column


def test_unknown_variable_for_sequences():
    with pytest.raises(ExpressionError):
        parse_expression("n+m", ("n",))


def test_right_associative_power():
    assert parse_expression("2^3^2").exact({}) == 512
    assert parse_expression("-2^2").exact({}) == -4
    assert parse_expression("(n+m)*2^(n+m)").exact({"n": 1, "m": 2}) == 24


def test_huge_values_become_magnitudes():
    value = parse_expression("2^(n*2^n)").value({"n": 20})
    assert isinstance(value, Magnitude)
    assert value.sign == 1
    assert float(value.log_abs.mid()) == pytest.approx(20 * 2 ** 20 * math.log(2), rel=1e-12)


def test_bit_limit_switches_to_logs():
    expression = parse_expression("3^100")
    assert expression.value({}) == 3 ** 100
    small = expression.value({}, bits_limit=64)
    assert isinstance(small, Magnitude)
    assert float(small.log_abs.mid()) == pytest.approx(100 * math.log(3), rel=1e-12)
    with pytest.raises(ExpressionTooLarge):
        expression.exact({}, bits_limit=64)


def test_factorial_of_huge_value():
    with pytest.raises(ExpressionTooLarge):
        parse_expression("(2^(2^20))!").value({})


def test_power_forms():
    assert parse_expression("2^(2^n)").power_form({"n": 3}) == (2, 8)
    assert parse_expression("4^n").power_form({"n": 3}) == (2, 6)
    assert parse_expression("12").power_form({}) == (12, 1)
    assert parse_expression("1").power_form({}) == (1, 1)


def test_ratios_and_fractions():
    assert parse_ratio("1/2^n").fraction({"n": 3}) == Fraction(1, 8)
    assert parse_fraction("-7/4") == Fraction(-7, 4)
    assert parse_fraction(3) == 3
    with pytest.raises(ExpressionError):
        parse_ratio("1/2/3")
    with pytest.raises(ExpressionError):
        parse_fraction("1/0")


def test_ratio_error_column_points_into_denominator():
    with pytest.raises(ExpressionError) as info:
        parse_ratio("1/(n+", ("n",))
    assert info.value.column == 6


def _random_expression(rng: random.Random, depth: int):
    """(text, value at n = 3) built independently of the parser."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.3:
            return "n", 3
        k = rng.randint(0, 9)
        return str(k), k
    op = rng.choice("+-*^!~")
    if op == "!":
        k = rng.randint(0, 6)
        return f"({k})!", math.factorial(k)
    left_text, left = _random_expression(rng, depth - 1)
    if op == "~":
        return f"-({left_text})", -left
    if op == "^":
        k = rng.randint(0, 3)
        return f"({left_text})^{k}", left ** k
    right_text, right = _random_expression(rng, depth - 1)
    value = {"+": left + right, "-": left - right, "*": left * right}[op]
    return f"({left_text}){op}({right_text})", value


def test_evaluation_matches_integer_oracle():
    rng = random.Random(20240611)
    for _ in range(1000):
        text, expected = _random_expression(rng, 4)
        assert parse_expression(text, ("n",)).exact({"n": 3}) == expected, text
