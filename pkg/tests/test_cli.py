import csv
import io
import json
import subprocess
import sys

import pytest

from resforge.cli import Config, load_errata, main, report_from_dict, report_to_dict
from resforge.errors import DomainError
from resforge.verify import verify_id


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_pass_exit_zero(capsys):
    code, out, _ = run(capsys, "verify", "--id", "eq2.1")
    assert code == 0 and "eq2.1" in out and "pass" in out


def test_erratum_exit_codes(capsys, tmp_path):
    assert run(capsys, "verify", "--id", "sec2.5-ex1")[0] == 1
    assert run(capsys, "verify", "--id", "sec2.5-ex1", "--expect-errata", "known")[0] == 0
    listed = tmp_path / "errata.json"
    listed.write_text(json.dumps([{"id": "sec2.5-ex1", "accepted_status": "coefficient_mismatch"}]))
    # the accepted status must match the observed one
    assert run(capsys, "verify", "--id", "sec2.5-ex1", "--expect-errata", str(listed))[0] == 1


def test_usage_errors_exit_two(capsys):
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", "--suite", "nonsense")[0] == 2
    assert run(capsys, "verify", "--id", "eq9.9")[0] == 2
    assert run(capsys, "verify", "--id", "eq2.1", "--grid", "0,4")[0] == 2
    assert run(capsys, "sum", "--term", "n^2 +* 3")[0] == 2
    assert run(capsys, "sum", "--term", "cos(n theta)/sinh(pi n)")[0] == 2  # theta missing


def test_json_roundtrip(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "theorems", "--format", "json", "--expect-errata", "known")
    assert code == 0
    data = json.loads(out)
    assert [d["id"] for d in data] == [f"eq2.{k}" for k in range(1, 9)]
    back = report_from_dict(data[0])
    assert report_to_dict(back) == data[0]


def test_residual_strings_read_back_exactly():
    r = verify_id("eq2.1")
    back = report_from_dict(report_to_dict(r))
    assert back.residuals == r.residuals and back.theta_samples == r.theta_samples


def test_csv_and_latex(capsys):
    code, out, _ = run(capsys, "verify", "--id", "sec3.1-n3-sinh", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["id"] == "sec3.1-n3-sinh" and rows[0]["status"] == "pass"
    code, out, _ = run(capsys, "verify", "--id", "sec3.1-n3-sinh", "--format", "latex")
    assert code == 0 and "\\begin{tabular}" in out


def test_text_output_lists_errata(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "closed32", "--expect-errata", "known")
    assert code == 0
    assert "sec3.2-odd6-sinhh-alt" in out and "-27/4096" in out


def test_bits_flag_and_environment(capsys, monkeypatch):
    code, out, _ = run(capsys, "verify", "--id", "eq2.2", "--format", "json", "--bits", "128")
    assert json.loads(out)[0]["precision_bits"] == 128
    monkeypatch.setenv("RESFORGE_BITS", "160")
    code, out, _ = run(capsys, "verify", "--id", "eq2.2", "--format", "json")
    assert json.loads(out)[0]["precision_bits"] == 160
    monkeypatch.setenv("RESFORGE_BITS", "lots")
    assert run(capsys, "verify", "--id", "eq2.2")[0] == 2


def test_sum_command(capsys):
    code, out, _ = run(capsys, "sum", "--term", "(-1)^(n-1)/cosh(pi n)", "--target", "1e-30")
    assert code == 0 and "0.082686579162963406859285133600" in out
    code, _, err = run(capsys, "sum", "--term", "cosh(n theta)/sinh(pi n)", "--theta", "3.2")
    assert code == 1 and "DivergentTerm" in err


def test_generate_command(capsys):
    code, out, _ = run(capsys, "generate", "--function", "g2")
    assert code == 0 and "structurally equal to eq2.6: yes" in out
    code, out, _ = run(capsys, "generate", "--function", "F", "--theta2", "0")
    assert code == 0 and "structurally equal to eq2.1: yes" in out
    code, out, _ = run(capsys, "generate", "--expr", "pi/cos(pi z) * pi^2 sinh(theta z)/cosh(pi z)^2", "--latex")
    assert code == 0 and out.startswith("\\[")
    code, _, err = run(capsys, "generate", "--expr", "pi/sin(pi z) * pi^2 cos(theta1 z) cos(theta2 z)/sinh(pi z)^2")
    assert code == 2 and "cosh(theta1 z) cos(theta2 z)" in err


def test_registry_export(capsys, tmp_path):
    target = tmp_path / "reg.json"
    assert run(capsys, "registry", "--output", str(target))[0] == 0
    data = json.loads(target.read_text())
    assert len(data["closed_forms"]) == 31


def test_config_validation():
    with pytest.raises(DomainError):
        Config(precision_bits=32)
    with pytest.raises(DomainError):
        Config(output_format="yaml")


def test_known_errata_file():
    errata = load_errata("known")
    assert errata["sec2.5-ex1"] == "sign_flip"
    assert errata["sec3.2-odd6-sinhh-alt"] == "coefficient_mismatch"
    assert len(errata) == 6


def test_console_script_runs():
    p = subprocess.run([sys.executable, "-m", "resforge.cli", "verify", "--id", "eq2.5"],
                       capture_output=True, text=True)
    assert p.returncode == 0, p.stderr
