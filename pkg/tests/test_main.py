import json

import pytest

from cli.report import parse_report
from main import main


def test_check_certified(fixtures_dir, capsys):
    assert main(["check", str(fixtures_dir / "tower_sequence.json"), "--prefix", "8"]) == 0
    out = capsys.readouterr().out
    assert out.startswith('# prodcert check product "tower"')
    assert parse_report(out)["conclusion"] == "certified-conditional"


def test_check_not_certified(fixtures_dir, capsys):
    assert main(["check", str(fixtures_dir / "double_exponential.json"), "--prefix", "8"]) == 1
    assert parse_report(capsys.readouterr().out)["h5"] == "failed"


def test_missing_spec_file(tmp_path, capsys):
    assert main(["check", str(tmp_path / "absent.json")]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_malformed_spec_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"kind": "product", "alpha": }', encoding="utf-8")
    assert main(["eval", str(path)]) == 2
    assert "line 1, column 30" in capsys.readouterr().err


def test_schema_error_names_the_field(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"kind": "product", "alpha": "2^(2^n)", "epsilon": "1/2", "a": "2"}),
                    encoding="utf-8")
    assert main(["check", str(path)]) == 2
    assert "error: cli.load_spec at product" in capsys.readouterr().err


def test_structured_report_to_file(fixtures_dir, tmp_path):
    out = tmp_path / "report.json"
    assert main(["eval", str(fixtures_dir / "finite_product.json"), "--format", "structured",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["schema_version"] == 1
    assert data["results"] == [{"id": "enclosure", "verdict": "verified", "lhs": data["results"][0]["lhs"],
                                "rhs": "-"}]
    assert data["details"][0]["enclosure"]["exact"] == "255/128"


def test_combined_report_is_structured(fixtures_dir, capsys):
    assert main(["report", str(fixtures_dir / "heights_small.json"), "--format", "text"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["command"] == "report"
    assert all(item["id"].startswith("heights.") for item in data["results"])


def test_wrong_document_kind(fixtures_dir, capsys):
    assert main(["heights", str(fixtures_dir / "tower_sequence.json")]) == 2
    assert "heights document" in capsys.readouterr().err


def test_unknown_command(fixtures_dir):
    with pytest.raises(SystemExit) as info:
        main(["plot", str(fixtures_dir / "tower_sequence.json")])
    assert info.value.code == 2


@pytest.mark.parametrize("bits", ["0", "8", "15", "70000"])
def test_precision_outside_configured_range(fixtures_dir, capsys, bits):
    with pytest.raises(SystemExit) as info:
        main(["eval", str(fixtures_dir / "finite_product.json"), "--precision", bits])
    assert info.value.code == 2
    assert "--precision must be between 16 and 65536 bits" in capsys.readouterr().err


def test_precision_at_configured_minimum(fixtures_dir, capsys):
    assert main(["eval", str(fixtures_dir / "finite_product.json"), "--precision", "16"]) == 0
    assert parse_report(capsys.readouterr().out) == {"enclosure": "verified"}
