import math
from fractions import Fraction

import pytest

from criteria.majorant import TailMajorant
from lemmalab.cases import LemmaCase, RealSequence
from lemmalab.diagnostics import LOWER_BOUND_1, Z_N, diagnostic_series, xn_height_bound
from lemmalab.errors import PreconditionFailed
from lemmalab.lemmas import LemmaVerdict, verify_all, verify_lemma


@pytest.fixture
def lemma_reports(spec_document, precision):
    cases = spec_document("lemma_cases.json").cases
    return {case.case_id: report for case, report in zip(cases, verify_all(cases, precision))}


def test_every_fixture_case_verifies(lemma_reports):
    assert len(lemma_reports) == 7
    for case_id, report in lemma_reports.items():
        assert report.verdict is LemmaVerdict.VERIFIED, f"{case_id}: {report.note}"


def test_series_upper_bound(lemma_reports):
    report = lemma_reports["inverse squares"]
    # sum_{n>=1} 1/(2 n^2) = pi^2/12
    assert report.lhs.contains(Fraction(822467, 1000000))
    assert float(report.rhs.real.mid()) == pytest.approx(3 / math.sqrt(2), rel=1e-12)


def test_series_tails(lemma_reports):
    general = lemma_reports["double exponential, general"]
    fast = lemma_reports["double exponential, fast"]
    assert float(general.lhs.real.mid()) == pytest.approx(2.1223e-5, rel=1e-3)
    assert float(general.rhs.real.mid()) == pytest.approx(0.0625, rel=1e-12)
    assert float(fast.rhs.real.mid()) == pytest.approx(2.5473e-5, rel=1e-3)


def test_search_lemmas_report_first_index(lemma_reports):
    assert lemma_reports["powers of two"].coordinates == 2
    assert lemma_reports["factorial tower"].coordinates == 2
    assert [c.label for c in lemma_reports["factorial tower"].comparisons] == ["bound_max", "bound_prod"]


def test_jump_not_found_is_inconclusive(precision):
    case = LemmaCase("jump", {"a": RealSequence.parse("1")}, prefix_N=10)
    report = verify_lemma(case, precision)
    assert report.verdict is LemmaVerdict.INCONCLUSIVE
    assert not report.passed


def test_intervals_agree_with_full_tail(spec_document, precision):
    fast = next(c for c in spec_document("lemma_cases.json").cases if c.lemma_id == "series_fast")
    corollary = LemmaCase("corollary_fast", {"a": fast.params["a"], "epsilon": fast.params["epsilon"],
                                             "intervals": ((4, 9),)}, prefix_N=10)
    finite = verify_lemma(corollary, precision)
    infinite = verify_lemma(fast, precision)
    assert finite.passed and infinite.passed
    assert finite.rhs.overlaps(infinite.rhs)
    assert finite.lhs.upper() <= infinite.lhs.upper()


def test_size_of_product_encloses_the_product(lemma_reports):
    report = lemma_reports["halves"]
    prefix = Fraction(1)
    for n in range(1, 61):
        prefix *= 1 + Fraction(1, 2 ** n)
    assert report.lhs.contains(prefix - 1)
    assert float(report.rhs.real.mid()) == pytest.approx(2.3842, abs=1e-3)


def test_failed_hypothesis(precision):
    case = LemmaCase("series_upper", {"a": RealSequence.parse("n"), "epsilon": Fraction(1),
                                      "majorant": TailMajorant("polynomial", p=Fraction(2))}, prefix_N=5)
    with pytest.raises(PreconditionFailed) as info:
        verify_lemma(case, precision)
    assert info.value.coordinates == ("series_upper", 1)


def test_case_validation():
    a = RealSequence.parse("2^n")
    with pytest.raises(ValueError):
        LemmaCase("unknown", {"a": a})
    with pytest.raises(ValueError):
        LemmaCase("series_upper", {"a": a})
    with pytest.raises(ValueError):
        LemmaCase("jump", {"a": a, "epsilon": Fraction(1)})
    with pytest.raises(ValueError):
        LemmaCase("jump", {"a": a}, prefix_N=1)
    with pytest.raises(ValueError):
        LemmaCase("series_general", {"a": a, "epsilon": Fraction(1), "N": 30,
                                     "majorant": TailMajorant("geometric", r=Fraction(1, 2))}, prefix_N=20)
    with pytest.raises(ValueError):
        LemmaCase("corollary_fast", {"a": a, "epsilon": Fraction(1), "intervals": ((1, 3), (3, 5))})
    with pytest.raises(ValueError):
        LemmaCase("prod_huge", {"a": a, "delta": Fraction(1)})


def test_case_defaults():
    case = LemmaCase("prod_huge", {"a": RealSequence.parse("2^(n*n!)")}, prefix_N=12)
    assert case.params["D"] == 1
    assert case.params["delta"] == 0
    assert case.case_id == "prod_huge"
    assert LemmaCase("jump", {"a": RealSequence.parse("2^n")}).params["k"] is None


def test_ratio_sequences():
    a = RealSequence.parse("1/2^n")
    assert a.exact(3) == Fraction(1, 8)
    assert a.sign(3) == 1
    assert a.probe(2, 64)[0] == Fraction(1, 4)
    with pytest.raises(ValueError):
        RealSequence.parse("1/(n-1)").exact(1)


def test_array_diagnostic_falls(spec_document, precision):
    # the tower array 2^((n+m) 2^(n+m)) shows no falling Z_N in a reachable prefix; this one drops by N=3
    diagnostic = diagnostic_series(spec_document("factorial_array.json").spec, N_max=3, precision=precision)
    assert diagnostic.kind == Z_N
    first, second, third = (float(log.real.mid()) for log in diagnostic.logs)
    assert -14 < first < -12
    assert third < second < first
    assert third < -8000
    assert diagnostic.reached


def test_sequence_diagnostic(spec_document, precision):
    diagnostic = diagnostic_series(spec_document("tower_sequence.json").spec, N_max=5, precision=precision)
    assert diagnostic.kind == LOWER_BOUND_1
    assert len(diagnostic.values) == len(diagnostic.running_min) == 5
    assert diagnostic.to_dict()["factor"] == 1000


def test_diagnostic_prefix_limits(spec_document):
    with pytest.raises(ValueError):
        diagnostic_series(spec_document("tower_sequence.json").spec, N_max=-1)
    with pytest.raises(ValueError):
        diagnostic_series(spec_document("finite_product.json").spec, N_max=4)


def test_xn_height_bound(spec_document, precision):
    bound = xn_height_bound(spec_document("tower_sequence.json").spec, 3, precision)
    # 2^4 * 2^2 * 2^8 * 2^24
    assert float(bound.real.mid()) == pytest.approx(38 * math.log(2), rel=1e-12)
    with pytest.raises(ValueError):
        xn_height_bound(spec_document("tower_sequence.json").spec, 0)
