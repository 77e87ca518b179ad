import csv
import json
import re

import pytest

import lcbound.cli as cli
from lcbound import lb_bound


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bound_csv(capsys):
    code, out, _ = run(capsys, "bound", "-L", "11", "-k", "6", "--format", "csv")
    assert code == 0
    header, row = [r for r in csv.reader(out.splitlines())]
    assert header == ["L", "k", "mode", "delta", "seconds"]
    assert row[:4] == ["11", "6", "rotational", "231"]
    float(row[4])


def test_bound_json_shape(capsys):
    code, out, _ = run(capsys, "bound", "-L", "11", "-k", "6", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["L"] == 11
    assert payload["k"] == 6
    assert payload["mode"] == "rotational"
    assert payload["n_l"] == 5
    assert payload["initial_delta"] == 55
    assert payload["delta"] == 231
    assert payload["nondegenerate_coset_count"] == 21
    assert len(payload["sets"]) == 25
    first = payload["sets"][0]
    assert set(first) == {"i", "j", "d", "mask_hex", "M", "m_star", "contribution"}
    assert first["mask_hex"].startswith("0x")


def test_bound_human(capsys):
    code, out, _ = run(capsys, "bound", "-L", "11", "-k", "6")
    assert code == 0
    assert "lower bound delta = 231 (21 guaranteed cosets)" in out
    assert out.count("family (i=") == 25


def test_bound_both_modes(capsys):
    code, out, _ = run(capsys, "bound", "-L", "11", "-k", "6", "--mode", "both")
    assert code == 0
    assert "modes differ: strict=176 rotational=231" in out


def test_bound_both_modes_json(capsys):
    code, out, _ = run(capsys, "bound", "-L", "11", "-k", "6",
                       "--mode", "both", "--format", "json")
    payload = json.loads(out)
    assert code == 0
    assert payload["differ"] is True
    assert payload["strict"]["delta"] == 176
    assert payload["rotational"]["delta"] == 231


def test_bound_invalid_sizes_exit_1(capsys):
    code, _, err = run(capsys, "bound", "-L", "11", "-k", "9")
    assert code == 1
    assert "need 2 < k < L-2" in err


def test_missing_required_argument_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bound", "-L", "11"])
    assert exc.value.code == 1


def test_table_stdout(capsys):
    code, out, _ = run(capsys, "table", "--pairs", "7:3,7:4")
    assert code == 0
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["L", "k", "mode", "delta", "seconds"]
    assert rows[1][:4] == ["7", "3", "rotational", str(lb_bound(7, 3).delta)]
    assert rows[2][:4] == ["7", "4", "rotational", str(lb_bound(7, 4).delta)]


def test_table_keeps_going_after_bad_pair(capsys):
    code, out, err = run(capsys, "table", "--pairs", "11:9,7:3")
    assert code == 0
    rows = list(csv.reader(out.splitlines()))
    assert rows[1][3] == "NA"
    assert rows[2][3] == str(lb_bound(7, 3).delta)
    assert "(11,9) failed" in err


def test_table_writes_csv_and_figure(tmp_path, capsys):
    code, out, _ = run(capsys, "table", "--pairs", "7:3,9:4,11:5",
                       "-o", str(tmp_path))
    assert code == 0
    table = tmp_path / "table.csv"
    figure = tmp_path / "bounds.png"
    assert table.is_file() and figure.is_file()
    assert figure.stat().st_size > 1000
    rows = list(csv.reader(table.read_text().splitlines()))
    assert len(rows) == 4
    assert str(table) in out and str(figure) in out


def test_verify_explicit_taps(capsys):
    code, out, _ = run(capsys, "verify", "-L", "7", "-k", "4",
                       "--taps", "0,1,2,3")
    assert code == 0
    assert "measured 98 >= bound 21: ok" in out
    assert out.rstrip().endswith("PASS")


def test_verify_sampled_taps(capsys):
    code, out, _ = run(capsys, "verify", "-L", "7", "-k", "4",
                       "--samples", "2", "--seed", "9")
    assert code == 0
    assert out.count("ok") == 2


def test_verify_tap_count_mismatch(capsys):
    code, _, err = run(capsys, "verify", "-L", "7", "-k", "4", "--taps", "0,1")
    assert code == 1
    assert "need 4 phases" in err


def test_verify_violation_exits_2(capsys, monkeypatch):
    monkeypatch.setattr(cli, "global_lc", lambda *a, **kw: 0)
    code, out, err = run(capsys, "verify", "-L", "7", "-k", "4",
                         "--taps", "0,1,2,3")
    assert code == 2
    assert "VIOLATION" in out and "FAIL" in out
    assert "invariant" in err


def test_coset_test_nondegenerate(capsys):
    code, out, _ = run(capsys, "coset-test", "-L", "7",
                       "--taps", "0,2,5", "--coset", "0,1,2")
    assert code == 0
    assert "nondegenerate (determinant 0x19)" in out


def test_coset_test_degenerate_hex_coset(capsys):
    code, out, _ = run(capsys, "coset-test", "-L", "7", "--poly", "0x83",
                       "--taps", "0,1,2,4", "--coset", "0x1d")
    assert code == 0
    assert "degenerate (determinant 0x0)" in out
    assert "nondegenerate" not in out


def test_extrapolate_default_series(capsys):
    code, out, _ = run(capsys, "extrapolate")
    assert code == 0
    m = re.search(r"extrapolated bound at L=89: (\d+)", out)
    assert m and int(m.group(1)) > 500_000
    assert "not a computed bound" in out


def test_extrapolate_two_point_line(capsys):
    code, out, _ = run(capsys, "extrapolate", "--points", "10:100,20:200",
                       "--degree", "1", "--target", "30", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["rms_residual"] < 1e-6
    assert abs(payload["prediction"] - 300.0) < 1e-6


def test_extrapolate_underdetermined_exits_1(capsys):
    code, _, err = run(capsys, "extrapolate", "--points", "11:231")
    assert code == 1
    assert "at least" in err


def test_extrapolate_writes_outputs(tmp_path, capsys):
    code, out, _ = run(capsys, "extrapolate", "--degree", "2",
                       "-o", str(tmp_path))
    assert code == 0
    fit_csv = tmp_path / "fit.csv"
    fit_png = tmp_path / "fit.png"
    assert fit_csv.is_file() and fit_png.is_file()
    assert fit_png.stat().st_size > 1000
    rows = list(csv.reader(fit_csv.read_text().splitlines()))
    assert rows[0] == ["L", "delta", "fitted"]
    assert rows[-1][0] == "89"
