import json

import numpy as np
import pytest

from nonclass.cli import SWEEP_COLUMNS, build_parser, main
from nonclass.core import random_density, save_density


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_compute_bell(capsys):
    code, out, _ = run_cli(capsys, ["compute", "bell", "--restarts", "4"])
    assert code == 0
    report = json.loads(out)
    assert report["D"] == pytest.approx(1.0, abs=1e-9)
    assert report["dim_a"] == report["dim_b"] == 2
    assert report["method"] == "closed_form_2xN"
    assert "discord" in report and "horodecki_m" in report


def test_compute_werner_matches_formula(capsys):
    code, out, _ = run_cli(capsys, ["compute", "werner", "--d", "2", "--p", "0.6666666666666666"])
    report = json.loads(out)
    assert code == 0
    assert report["D"] == pytest.approx(1 / 9, abs=1e-9)
    assert report["D_formula"] == pytest.approx(1 / 9, abs=1e-12)
    assert report["lower_bound"] <= report["D"] + 1e-9 <= report["upper_bound"] + 2e-9


def test_compute_from_json_file(tmp_path, capsys):
    path = tmp_path / "state.json"
    save_density(random_density(2, 2, 4, seed=3), path)
    code, out, _ = run_cli(capsys, ["compute", str(path), "--restarts", "4"])
    assert code == 0
    report = json.loads(out)
    assert report["params"] == {"path": str(path)}
    assert 0.0 <= report["D"] <= 1.0


def test_compute_csv_format(capsys):
    code, out, _ = run_cli(capsys, ["compute", "bell", "--format", "csv", "--restarts", "4"])
    assert code == 0
    header, row = out.strip().split("\n")
    assert header.startswith("state,dim_a,dim_b,D,")
    assert len(header.split(",")) == len(row.split(","))


def test_compute_unknown_family_exits_2(capsys):
    code, _, err = run_cli(capsys, ["compute", "definitely-not-a-family"])
    assert code == 2
    assert "unknown family" in err


def test_compute_malformed_json_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{ this is not json")
    code, _, _ = run_cli(capsys, ["compute", str(path)])
    assert code == 2


def test_compute_invalid_density_exits_3(tmp_path, capsys):
    mat = np.eye(4) / 2  # trace 2
    cells = [[float(x.real), float(x.imag)] for x in mat.ravel()]
    path = tmp_path / "invalid.json"
    path.write_text(json.dumps({"dim_a": 2, "dim_b": 2, "matrix": cells}))
    code, _, err = run_cli(capsys, ["compute", str(path)])
    assert code == 3
    assert "invalid density" in err


def test_sweep_output_is_byte_identical(tmp_path, capsys):
    args = ["sweep", "werner", "--p", "0,0.5,1", "--restarts", "4"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_header_matches_documentation(capsys):
    code, out, _ = run_cli(capsys, ["sweep", "schmidt-pure", "--a", "0.5", "--restarts", "4"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("#")  # seed comment
    assert lines[1] == ",".join(SWEEP_COLUMNS["schmidt-pure"])
    assert len(lines) == 3
    # --help documents exactly the emitted columns
    help_text = build_parser()._subparsers._group_actions[0].choices["sweep"].format_help()
    for cols in SWEEP_COLUMNS.values():
        assert ",".join(cols) in help_text


def test_sweep_default_werner_grid(tmp_path):
    out = tmp_path / "w.csv"
    assert main(["sweep", "werner", "--restarts", "4", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 2 + 11  # comment + header + 11 default weights
    row = dict(zip(lines[1].split(","), lines[2].split(",")))
    assert row["family"] == "werner" and float(row["p"]) == 0.0
    assert float(row["D_formula"]) == pytest.approx(1.0, abs=1e-12)
    assert float(row["D_optimizer"]) == pytest.approx(1.0, abs=1e-6)


def test_sweep_random_uses_seed_list(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["sweep", "random", "--seed", "3,7", "--restarts", "4", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 4
    assert lines[2].split(",")[1] == "3" and lines[3].split(",")[1] == "7"


def test_sweep_json_format(capsys):
    code, out, _ = run_cli(capsys, ["sweep", "werner", "--p", "0.5", "--restarts", "4", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["columns"] == list(SWEEP_COLUMNS["werner"])
    assert len(payload["rows"]) == 1


def test_reproduce_single_check(capsys):
    code, out, _ = run_cli(capsys, ["reproduce", "--filter", "werner-zero-point"])
    assert code == 0
    assert "PASS  werner-zero-point" in out
    assert "1/1 checks passed" in out


def test_reproduce_unmatched_filter_fails(capsys):
    code, out, _ = run_cli(capsys, ["reproduce", "--filter", "no-such-check"])
    assert code == 1


def test_probe_conjecture_reports_best_found(capsys):
    code, out, _ = run_cli(capsys, ["probe-conjecture", "--restarts", "8", "--seed", "1"])
    assert code == 0
    report = json.loads(out)
    assert report["trials"] == 8
    assert report["rank2_maximum"] == 0.5
    for entry in report["best_found"].values():
        assert 0.0 <= entry["D"] <= 0.5  # conjecture: strictly below the rank-2 maximum


def test_probe_conjecture_deterministic(tmp_path):
    a, b = tmp_path / "p1.json", tmp_path / "p2.json"
    argv = ["probe-conjecture", "--restarts", "6", "--seed", "9"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
