from fractions import Fraction

import pytest

from algebra.ball import Ball
from algebra.errors import Reducible
from cli.errors import ExpressionError, ParseError, SchemaError
from cli.report import Report, compact, parse_report, render
from cli.run import ERROR, FAILED, OK, RunOptions, run
from cli.spec_loader import load_spec, parse_document
from criteria.specs import ArraySpec, SequenceSpec
from criteria.terms import ExplicitTerm, TemplateTerm

DOUBLE_EXPONENTIAL = {
    "schema_version": 1,
    "kind": "product",
    "meta": {"name": "double exponential"},
    "alpha": "2^(2^n)",
    "b": "1",
    "epsilon": "1/2",
    "a": "1/2",
    "e": 1,
    "D": 1,
    "majorant": {"kind": "geometric", "c": "1", "r": "1/2", "start": 1},
}


def with_fields(**fields):
    data = dict(DOUBLE_EXPONENTIAL)
    data.update(fields)
    return data


def test_product_document():
    document = parse_document(DOUBLE_EXPONENTIAL)
    assert document.kind == "product"
    assert document.name == "double exponential"
    assert isinstance(document.spec, SequenceSpec)
    assert document.spec.tail_majorant.r == Fraction(1, 2)
    assert document.spec.a == Fraction(1, 2)
    assert document.prefix is None


def test_fixture_documents(spec_document):
    assert isinstance(spec_document("array_tower.json").spec, ArraySpec)
    assert isinstance(spec_document("finite_product.json").spec.alpha, ExplicitTerm)
    assert len(spec_document("lemma_cases.json").cases) == 7
    assert len(spec_document("heights_small.json").numbers) == 4
    assert spec_document("factorial_array.json").spec.diagnostic_majorant.start == 2


def test_template_generator():
    document = parse_document(with_fields(alpha={"template": ["-(2*n+1)", "0", "1"], "center": ["n+1", "0"]}))
    assert isinstance(document.spec.alpha, TemplateTerm)
    assert document.spec.alpha.degree((2,)) == 2


@pytest.mark.parametrize("fields, path", [
    ({"alpha": None}, "alpha"),
    ({"foo": 1}, "foo"),
    ({"schema_version": 2}, "schema_version"),
    ({"kind": "series"}, "kind"),
    ({"epsilon": True}, "epsilon"),
    ({"asserted": ["h9"]}, "asserted"),
    ({"asserted": [5]}, "asserted[0]"),
    ({"majorant": {"kind": "geometric", "r": "3/2"}}, "majorant"),
    ({"majorant": {"kind": "geometric", "r": 1.5}}, "majorant.r"),
    ({"prefix": 1}, "prefix"),
    ({"D": 0}, "D"),
    ({"declared_degrees": [1, 0]}, "declared_degrees[1]"),
    ({"alpha": {"template": ["1"], "center": ["0", "0"]}}, "alpha.template"),
    ({"alpha": {"values": []}}, "alpha"),
    ({"a": "3/2"}, "product"),
])
def test_schema_error_paths(fields, path):
    data = with_fields(**fields)
    if fields.get("alpha", "") is None:
        del data["alpha"]
    with pytest.raises(SchemaError) as info:
        parse_document(data)
    assert info.value.path == path


def test_array_schema_errors():
    base = {"kind": "product_of_series", "alpha": "2^(2^(n+m))", "epsilon": "1/2"}
    with pytest.raises(SchemaError) as info:
        parse_document(dict(base, alpha={"explicit": ["2"]}))
    assert info.value.path == "alpha"
    with pytest.raises(SchemaError) as info:
        parse_document(dict(base, sign_mode="V"))
    assert info.value.path == "product_of_series"
    with pytest.raises(SchemaError) as info:
        parse_document(dict(base, asserted=["h1"]))
    assert info.value.path == "asserted"


def test_lemma_and_heights_schema_errors():
    with pytest.raises(SchemaError) as info:
        parse_document({"kind": "lemma", "cases": [{"lemma": "jump", "params": {"a": 1.5}}]})
    assert info.value.path == "cases[0].params.a"
    with pytest.raises(SchemaError) as info:
        parse_document({"kind": "lemma", "cases": [{"lemma": "jump", "params": {"a": "2^n", "k": 0}}]})
    assert info.value.path == "cases[0]"
    with pytest.raises(SchemaError) as info:
        parse_document({"kind": "lemma", "cases": []})
    assert info.value.path == "cases"
    with pytest.raises(SchemaError) as info:
        parse_document({"kind": "heights", "numbers": [{"poly": [1]}]})
    assert info.value.path == "numbers[0].poly"
    with pytest.raises(Reducible):
        parse_document({"kind": "heights", "numbers": [{"poly": [-4, 0, 1], "center": ["2", "0"]}]})


def test_expression_errors_carry_the_field():
    with pytest.raises(ExpressionError) as info:
        parse_document(with_fields(alpha="2^^n"))
    assert info.value.column == 3
    assert info.value.render().startswith("error: cli.expression at alpha: column 3")
    with pytest.raises(ExpressionError) as info:
        parse_document(with_fields(alpha="2^(n+m)"))
    assert "unknown variable 'm'" in info.value.render()


def test_parse_error_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "kind": "product",\n  "alpha": }\n', encoding="utf-8")
    with pytest.raises(ParseError) as info:
        load_spec(str(path))
    assert (info.value.line, info.value.column) == (3, 12)
    assert "line 3, column 12" in info.value.render()


def test_missing_spec_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_spec(str(tmp_path / "absent.json"))


def sample_report() -> Report:
    report = Report("check", "product", "double exponential")
    report.add("h1", "verified", Ball.exact(Fraction(3, 2)), Ball.exact(2))
    report.add("h5", "asserted", Ball.exact(4))
    report.add("conclusion", "certified-conditional")
    return report


@pytest.mark.parametrize("fmt", ["text", "structured"])
def test_report_round_trip(fmt):
    report = sample_report()
    assert parse_report(render(report, fmt)) == report.verdicts()


def test_text_report_layout():
    lines = render(sample_report(), "text").splitlines()
    assert lines[0] == '# prodcert check product "double exponential"'
    assert lines[3] == "CHECK conclusion certified-conditional - -"
    assert all(len(line.split()) == 5 for line in lines[1:])


def test_report_edge_cases():
    assert compact(None) == "-"
    assert " " not in compact(Ball.exact(1, 2))
    with pytest.raises(ValueError):
        render(sample_report(), "yaml")
    with pytest.raises(ValueError):
        parse_report("CHECK h1 verified\n")


def test_check_dispatch(spec_document):
    status, report = run("check", spec_document("tower_sequence.json"), RunOptions(prefix=8))
    assert status == OK
    verdicts = report.verdicts()
    assert verdicts["conclusion"] == "certified-conditional"
    assert verdicts["h5"] == "asserted"
    status, report = run("check", spec_document("double_exponential.json"), RunOptions(prefix=8))
    assert status == FAILED
    assert report.verdicts()["h5"] == "failed"


def test_degree_range_dispatch(spec_document):
    status, report = run("check", spec_document("tower_sequence.json"), RunOptions(prefix=8, d_max=3))
    verdicts = report.verdicts()
    assert status == OK
    assert verdicts["D1.conclusion"] == "certified-conditional"
    assert verdicts["D2.conclusion"] == "not-certified"
    assert verdicts["D2.h5"] == "failed"


def test_eval_dispatch(spec_document):
    status, report = run("eval", spec_document("finite_product.json"))
    assert status == OK
    assert report.verdicts() == {"enclosure": "verified"}
    assert report.details[0]["enclosure"]["exact"] == "255/128"


def test_lemmas_dispatch(spec_document):
    status, report = run("lemmas", spec_document("lemma_cases.json"))
    assert status == OK
    assert report.verdicts()["powers_of_two"] == "verified"
    assert parse_report(render(report, "text")) == report.verdicts()


def test_heights_dispatch(spec_document):
    status, report = run("heights", spec_document("heights_small.json"))
    assert status == OK
    assert "violated" not in report.verdicts().values()
    assert report.details[0]["counts"]["violated"] == 0


def test_combined_report(spec_document):
    status, report = run("report", spec_document("tower_sequence.json"), RunOptions(prefix=6))
    verdicts = report.verdicts()
    assert status == OK
    assert verdicts["check.conclusion"] == "certified-conditional"
    assert verdicts["eval.enclosure"] == "verified"
    assert "lemmas.diagnostic" in verdicts
    assert [d["section"] for d in report.details] == ["check", "eval", "lemmas"]


def test_dispatch_errors(spec_document):
    with pytest.raises(ValueError):
        run("heights", spec_document("tower_sequence.json"))
    with pytest.raises(ValueError):
        run("check", spec_document("heights_small.json"))
    with pytest.raises(ValueError):
        run("plot", spec_document("tower_sequence.json"))
    assert ERROR == 2
