from dataclasses import replace
from fractions import Fraction

import pytest

from algebra.ball import Verdict
from cli.spec_loader import parse_document
from criteria.certificate import CheckVerdict, Conclusion
from criteria.errors import MajorantUnverified, MissingDegrees, ModeParamsMissing
from criteria.growth import growth_exponents, growth_sequence
from criteria.majorant import TailMajorant, verify_majorant
from criteria.signs import ASSERTED_REQUIRED, sign_condition_check
from criteria.specs import ArraySpec
from criteria.theorem1 import check_theorem1
from criteria.theorem2 import check_range, check_theorem2
from criteria.tower import DECLARED, VERIFIED, tower_info
from utils.config import AlgebraConfig, Config, set_config


def product(**fields):
    data = {"kind": "product", "alpha": "2^(n*2^n)", "b": "1", "epsilon": "1/2", "a": "1/2", "e": 1, "D": 1}
    data.update(fields)
    return parse_document(data).spec


def array(**fields):
    data = {"kind": "product_of_series", "alpha": "2^(2^(n+m))", "b": "1", "epsilon": "1/2", "e": 1, "D": 1}
    data.update(fields)
    return parse_document(data).spec


# roots sqrt(3), sqrt(5), sqrt(7), ...
ODD_ROOTS = {"template": ["-(2*n+1)", "0", "1"], "center": ["n+1", "0"]}


def test_tower_sequence_is_certified(spec_document, precision):
    spec = spec_document("tower_sequence.json").spec
    certificate = check_theorem1(spec, 20, precision)
    assert certificate.conclusion is Conclusion.CERTIFIED
    for check_id in ("h1", "h2", "h3", "h4"):
        assert certificate.check(check_id).verdict is CheckVerdict.VERIFIED
    assert certificate.check("h5").verdict is CheckVerdict.ASSERTED


def test_double_exponential_fails_growth_only(spec_document, precision):
    spec = spec_document("double_exponential.json").spec
    certificate = check_theorem1(spec, 20, precision)
    assert certificate.conclusion is Conclusion.NOT_CERTIFIED
    assert certificate.failed() == ["h5"]
    assert "does not increase" in certificate.check("h5").note


def test_growth_forms_are_exact(spec_document, precision):
    spec = spec_document("double_exponential.json").spec
    assert growth_exponents(spec, 6) == [(2, Fraction(2))] * 6
    for H in growth_sequence(spec, 6, precision):
        assert H.contains(4)


def test_slow_alpha_fails_power_bound(precision):
    certificate = check_theorem1(product(alpha="n+1", epsilon="1"), 6, precision)
    assert "h3" in certificate.failed()
    assert certificate.check("h3").coordinates == (2,)


def test_validity_start_skips_early_indices(precision):
    check = check_theorem1(product(alpha="n+1", epsilon="1", validity_start=3), 6, precision).check("h3")
    assert check.skipped == 2
    assert check.verdict is CheckVerdict.FAILED


def test_negative_e_flips_sign_condition(precision):
    certificate = check_theorem1(product(e=-1), 4, precision)
    assert certificate.check("h4").verdict is CheckVerdict.FAILED


def test_constant_real_part_is_never_strict(precision):
    # alpha = -1 + i sqrt(2), b = 2: Re(alpha/b) + 1/2 = 0 at every n
    spec = product(alpha={"template": ["3", "2", "1"], "center": ["-1", "1"]}, b="2")
    check = check_theorem1(spec, 3, precision).check("h4")
    assert check.strict_count == 0
    assert check.verdict is CheckVerdict.INCONCLUSIVE
    asserted = replace(spec, asserted=frozenset({"h4"}))
    assert check_theorem1(asserted, 3, precision).check("h4").verdict is CheckVerdict.ASSERTED


def test_prefix_must_reach_two(spec_document):
    with pytest.raises(ValueError):
        check_theorem1(spec_document("tower_sequence.json").spec, 1)
    with pytest.raises(ValueError):
        check_theorem2(spec_document("array_tower.json").spec, 1)


def test_explicit_prefix_cannot_exceed_length(spec_document):
    with pytest.raises(ValueError):
        check_theorem1(spec_document("finite_product.json").spec, 4)


def test_degree_range(spec_document, precision):
    certificates = check_range(spec_document("tower_sequence.json").spec, 20, 2, precision)
    assert [c.D for c in certificates] == [1, 2]
    assert certificates[0].certified
    assert certificates[1].failed() == ["h5"]


def test_degree_range_needs_positive_bound(spec_document):
    with pytest.raises(ValueError):
        check_range(spec_document("tower_sequence.json").spec, 4, 0)


def test_array_tower_is_certified(spec_document, precision):
    certificate = check_theorem2(spec_document("array_tower.json").spec, 10, precision)
    assert certificate.conclusion is Conclusion.CERTIFIED
    assert certificate.check("g5").verdict is CheckVerdict.ASSERTED
    assert certificate.check("g2").skipped == 7
    assert certificate.extras["sign_mode"] == "main"


def test_rational_tower_has_degree_one(spec_document, precision):
    info = tower_info(spec_document("tower_sequence.json").spec, 5, precision)
    assert info.d == (1,) * 5
    assert info.D == (1,) * 5
    assert info.verified_upto == 5


def test_quadratic_tower_degrees(precision):
    info = tower_info(product(alpha=ODD_ROOTS), 3, precision)
    assert info.d == (2, 2, 2)
    assert info.D == (2, 4, 8)
    assert info.source == (VERIFIED,) * 3


def test_declared_degrees_take_over_past_the_cap(precision):
    set_config(Config(algebra=AlgebraConfig(degree_cap=3)))
    with pytest.raises(MissingDegrees):
        tower_info(product(alpha=ODD_ROOTS), 3, precision)
    info = tower_info(product(alpha=ODD_ROOTS, declared_degrees=[2, 2, 2]), 3, precision)
    assert info.D == (2, 4, 8)
    assert info.source == (VERIFIED, DECLARED, DECLARED)


def test_main_sign_mode(spec_document, precision):
    signs = sign_condition_check(spec_document("array_tower.json").spec, 4, precision)
    assert signs.verdict is Verdict.VERIFIED
    assert signs.floor == 1


def test_sign_mode_two_without_strictness():
    spec = array(alpha={"template": ["1+(n+m)^2", "2", "1"], "center": ["-1", "n+m"]}, b="2", sign_mode="II")
    signs = sign_condition_check(spec, 3)
    assert signs.strict_count == 0
    assert signs.status == ASSERTED_REQUIRED
    assert signs.floor == Fraction(1, 2)


def test_sign_mode_four():
    spec = array(alpha="-2^(2^(n+m))", sign_mode="IV", mode_params={"X": "1/2", "R": "1"})
    signs = sign_condition_check(spec, 4)
    assert signs.verdict is Verdict.VERIFIED
    assert signs.floor == Fraction(1, 2)


def test_sign_mode_four_column_sum_too_large():
    spec = array(alpha="-(2*m+n)", sign_mode="IV", mode_params={"X": "1/2", "R": "1"})
    signs = sign_condition_check(spec, 4)
    assert signs.verdict is Verdict.VIOLATED


def test_sign_mode_four_needs_parameters():
    with pytest.raises(ModeParamsMissing):
        sign_condition_check(array(sign_mode="IV"), 3)


def test_array_parameter_ranges():
    spec = array()
    with pytest.raises(ValueError):
        replace(spec, sign_mode="V")
    with pytest.raises(ValueError):
        replace(spec, X=Fraction(1, 2), R=Fraction(3))
    with pytest.raises(ValueError):
        replace(spec, tail_majorant=TailMajorant("power", epsilon=Fraction(1)))
    with pytest.raises(ValueError):
        replace(spec, declared_degrees=(2, 1))


def test_majorant_parameters():
    with pytest.raises(ValueError):
        TailMajorant("geometric", r=Fraction(3, 2))
    with pytest.raises(ValueError):
        TailMajorant("polynomial", p=Fraction(1))
    with pytest.raises(ValueError):
        TailMajorant("power")
    with pytest.raises(ValueError):
        TailMajorant("harmonic")


def test_majorant_tails():
    geometric = TailMajorant("geometric", r=Fraction(1, 2))
    assert float(geometric.tail_from(3).mid()) == pytest.approx(0.25)
    polynomial = TailMajorant("polynomial", c=Fraction(1), p=Fraction(2))
    assert float(polynomial.tail_from(1).mid()) == pytest.approx(2.0)
    explicit = TailMajorant("explicit", start=2, bounds=(Fraction(1, 2), Fraction(1, 4)))
    assert float(explicit.tail_from(3).mid()) == pytest.approx(0.25)
    assert explicit.term_bound(9) == 0
    with pytest.raises(ValueError):
        TailMajorant("geometric", start=5, r=Fraction(1, 2)).tail_from(2)
    with pytest.raises(ValueError):
        TailMajorant("power", epsilon=Fraction(1)).tail_from(1)


def test_declared_majorant_is_checked(spec_document, precision):
    spec = spec_document("double_exponential.json").spec
    assert verify_majorant(spec.tail_majorant, spec.probe, 10, precision) == 4
    too_small = TailMajorant("geometric", start=1, r=Fraction(1, 65536))
    with pytest.raises(MajorantUnverified) as info:
        verify_majorant(too_small, spec.probe, 10, precision)
    assert info.value.coordinates == 1


def test_array_triangle_order():
    assert ArraySpec.antidiagonal(3) == [(3, 1), (2, 2), (1, 3)]
    assert len(ArraySpec.triangle(4)) == 10
