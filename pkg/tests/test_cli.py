import csv
import io
import json
import math

import pytest

from latgreen import chain1d, cli, square2d
from latgreen.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_chain_closed(capsys):
    code, out, _ = run(capsys, "eval", "--family", "chain1d", "--r", "2", "--t", "2",
                       "--method", "closed")
    assert code == 0
    rec = json.loads(out)
    assert rec["value"]["re"] == pytest.approx(chain1d.h1_closed(2, 2).real, abs=1e-15)
    assert rec["value"]["im"] == 0


@pytest.mark.parametrize("method", ["series", "hyp", "branch", "oracle"])
def test_eval_chain_methods_agree(capsys, method):
    code, out, _ = run(capsys, "eval", "--family", "chain1d", "--r", "3", "--t", "1,2",
                       "--method", method)
    assert code == 0
    v = json.loads(out)["value"]
    assert abs(complex(v["re"], v["im"]) - chain1d.h1_closed(3, 1 + 2j)) < 1e-10


def test_lambda_is_equivalent_to_t(capsys):
    _, a, _ = run(capsys, "eval", "--family", "square", "--r", "2,0", "--t", "2")
    _, b, _ = run(capsys, "eval", "--family", "square", "--r", "2,0", "--lambda", "8")
    assert json.loads(a)["value"] == json.loads(b)["value"]


def test_square_eval_uses_contour_indices(capsys):
    _, out, _ = run(capsys, "eval", "--family", "square", "--r", "1,1", "--t", "2",
                    "--method", "oracle")
    v = json.loads(out)["value"]["re"]
    assert v == pytest.approx(square2d.h2_gamma_series(1, 1, 2).value.real, abs=1e-10)


def test_square_closed_only_at_origin(capsys):
    code, out, _ = run(capsys, "eval", "--family", "square", "--r", "0,0", "--t", "2",
                       "--method", "closed")
    assert code == 0
    assert json.loads(out)["value"]["re"] == pytest.approx(0.1341478, abs=1e-6)
    code, _, err = run(capsys, "eval", "--family", "square", "--r", "1,1", "--t", "2",
                       "--method", "closed")
    assert code == 2 and "closed form" in err


def test_trihex_refusal_below_gate(capsys):
    code, _, err = run(capsys, "eval", "--family", "trihex-honeycomb", "--r", "0,0", "--t", "5")
    assert code == 2 and "gate" in err


def test_trihex_oracle_factor(capsys):
    _, a, _ = run(capsys, "eval", "--family", "trihex-honeycomb", "--r", "1,0", "--t", "12")
    _, b, _ = run(capsys, "eval", "--family", "trihex-honeycomb", "--r", "1,0", "--t", "12",
                  "--method", "oracle")
    assert json.loads(a)["value"]["re"] == pytest.approx(json.loads(b)["value"]["re"], abs=1e-9)


def test_bcc_mixed_parity(capsys):
    _, out, _ = run(capsys, "eval", "--family", "bcc", "--dim", "3", "--r", "1,0,0", "--t", "2")
    assert json.loads(out)["value"] == {"re": 0.0, "im": 0.0}


def test_nnn_needs_tau(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--family", "nnn", "--r", "0"])
    assert exc.value.code == 2
    code, out, _ = run(capsys, "eval", "--family", "nnn", "--r", "1", "--tau", "0.5,0")
    assert code == 0
    assert json.loads(out)["value"]["re"] == pytest.approx(chain1d.h1_closed(1, 2).real)


@pytest.mark.parametrize("argv", [
    ["eval", "--family", "chain1d", "--r", "x", "--t", "2"],
    ["eval", "--family", "chain1d", "--r", "0"],
    ["eval", "--family", "chain1d", "--r", "0,1", "--t", "2"],
    ["eval", "--family", "chain1d", "--r", "0", "--t", "0.5"],
    ["eval", "--family", "chain1d", "--r", "0", "--t", "a,b"],
    ["table", "--family", "chain1d", "--range", "3:1", "--t", "2"],
    ["eval", "--family", "bcc", "--r", "0,0,0", "--t", "2", "--method", "hyp"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("latgreen: error:")


def test_table_square_is_symmetric(capsys, tmp_path):
    path = tmp_path / "square.csv"
    code, _, _ = run(capsys, "table", "--family", "square", "--range=-2:2", "--t", "3",
                     "--out", str(path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert tuple(rows[0]) == cli.CSV_HEADER
    assert len(rows) == 25
    vals = {(int(r["i1"]), int(r["i2"])): float(r["value_re"]) for r in rows}
    for (p, q), v in vals.items():
        assert v == pytest.approx(vals[(q, p)], rel=1e-11)
        assert v == pytest.approx(vals[(-p, q)], rel=1e-11)
    # (1,1) and (1,0) in physical p,q differ in parity of the site
    assert vals[(0, 0)] == pytest.approx(square2d.h2_gamma_series(0, 0, 3).value.real, rel=1e-11)


def test_table_chain_stdout(capsys):
    code, out, _ = run(capsys, "table", "--family", "chain1d", "--range", "0:3", "--t", "2",
                       "--method", "closed")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5
    assert rows[1][1:4] == ["0", "", ""]


def test_correlation_routes(capsys):
    code, out, _ = run(capsys, "correlation", "--family", "square", "--r", "1,0")
    rec = json.loads(out)
    assert code == 0
    assert rec["value"] == pytest.approx(-0.25, abs=1e-6)
    assert rec["difference"] < 1e-6
    _, out, _ = run(capsys, "correlation", "--family", "chain1d", "--r", "3")
    assert json.loads(out)["value"] == pytest.approx(-1.5, abs=1e-8)


def test_calibrate(capsys):
    code, out, _ = run(capsys, "calibrate", "--family", "honeycomb-form")
    rec = json.loads(out)
    assert code == 0
    assert rec["constant"]["re"] == pytest.approx(2, rel=1e-9)
    code, out, _ = run(capsys, "calibrate", "--family", "chain1d", "--ts", "1.5;2;1,1",
                       "--indices", "0;1;2")
    assert code == 0 and json.loads(out)["constant"]["re"] == pytest.approx(1, abs=1e-9)


def test_validate_bad_config(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"colour": 1}')
    code, _, err = run(capsys, "validate", "--config", str(path))
    assert code == 2 and "unknown config keys" in err


def test_validate_strict_writes_report(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "validate", "--strict-paper", "--out", str(path))
    assert code == 1 and out.startswith("FAIL")
    data = json.loads(path.read_text())
    assert data["strict_paper"] and data["findings"]
    assert not math.isnan(data["summary"]["failed"])
