import json
import subprocess
import sys

import pytest

from knr.cli import build_parser, main, read_config
from knr.sweep import CSV_COLUMNS, read_csv


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pn(capsys):
    code, out, _ = run(capsys, "pn", "--chi", "20", "--omega", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# analytic"
    probs = {int(n): float(v) for n, v in (line.split("\t") for line in lines[1:])}
    assert probs[0] == pytest.approx(0.5, abs=0.02) and probs[1] == pytest.approx(0.5, abs=0.02)


def test_mean_both_engines(capsys):
    code, out, _ = run(capsys, "mean", "--chi", "2", "--delta", "-35", "--omega", "20",
                       "--engine", "both")
    vals = dict(line.split("\t") for line in out.splitlines())
    assert code == 0 and set(vals) == {"analytic", "oracle"}
    assert float(vals["analytic"]) == pytest.approx(float(vals["oracle"]), rel=1e-8)


def test_g2_vacuum_is_nan(capsys):
    code, out, _ = run(capsys, "g2", "--chi", "5")
    assert code == 0 and out.strip() == "analytic\tnan"


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "point.cfg"
    cfg.write_text("# blockade point\nchi = 20\nomega = 5   # drive\ndelta = -20\nengine = oracle\n")
    assert read_config(cfg) == {"chi": "20", "omega": "5", "delta": "-20", "engine": "oracle"}
    _, from_file, _ = run(capsys, "mean", "--config", str(cfg))
    _, overridden, _ = run(capsys, "mean", "--config", str(cfg), "--delta", "0")
    _, direct, _ = run(capsys, "mean", "--chi", "20", "--omega", "5", "--delta", "0",
                       "--engine", "oracle")
    assert from_file.startswith("oracle\t")
    assert overridden == direct != from_file


def test_bad_config_line(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("chi 20\n")
    with pytest.raises(ValueError):
        read_config(cfg)


def test_missing_chi():
    with pytest.raises(SystemExit):
        main(["mean", "--omega", "1"])


def test_invalid_params_exit_code(capsys):
    code, _, err = run(capsys, "mean", "--chi", "0", "--omega", "1")
    assert code == 1 and "closed-form" in err


def test_sweep_csv(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--chi", "20", "--omega", "5", "--vary", "delta",
                     "--start", "-30", "--stop", "10", "--steps", "5", "--out", str(out))
    rows = read_csv(out)
    assert code == 0 and len(rows) == 5
    assert [r["delta_over_gamma"] for r in rows] == [-30, -20, -10, 0, 10]
    assert out.read_text().splitlines()[0] == ",".join(CSV_COLUMNS)


def test_sweep_2d_json_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--chi", "10", "--vary", "delta", "--start", "-5",
                       "--stop", "5", "--steps", "3", "--vary2", "omega", "--start2", "1",
                       "--stop2", "2", "--steps2", "2", "--format", "json",
                       "--observables", "p1,mean_n")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 6
    assert doc["spec"]["observables"] == ["P1", "MEAN_N"]


def test_sweep_needs_axis():
    with pytest.raises(SystemExit):
        main(["sweep", "--chi", "1"])


def test_preset_and_compare(capsys, tmp_path):
    out = tmp_path / "f.csv"
    assert run(capsys, "preset", "fig2b", "--out", str(out))[0] == 0
    assert len(read_csv(out)) == 5
    assert run(capsys, "compare", "fig2b", "--out", str(out))[0] == 0
    rows = read_csv(out)
    assert len(rows) == 10 and {r["engine"] for r in rows} == {"analytic", "oracle"}
    assert max(r["max_discrepancy"] for r in rows) < 1e-6


def test_compare_point(capsys):
    code, out, _ = run(capsys, "compare", "--chi", "20", "--omega", "20", "--delta", "-40")
    lines = [line.split("\t") for line in out.splitlines()]
    assert code == 0 and lines[0] == ["quantity", "analytic", "oracle", "abs_diff"]
    assert [r[0] for r in lines[1:]] == [f"p{n}" for n in range(10)] + ["mean_n", "g2"]
    assert max(float(r[3]) for r in lines[1:11]) < 1e-6


def test_unknown_preset(capsys):
    code, _, err = run(capsys, "preset", "fig42")
    assert code == 1 and "unknown preset" in err


def test_wigner(capsys, tmp_path):
    code, out, _ = run(capsys, "wigner", "--chi", "20", "--omega", "5",
                       "--resolution", "21", "21")
    info = json.loads(out)
    assert code == 0 and info["engine"] == "analytic" and info["min"] > -1e-6
    path = tmp_path / "w.csv"
    run(capsys, "wigner", "--chi", "20", "--omega", "5", "--resolution", "5", "4",
        "--window", "-1", "1", "-1", "1", "--engine", "both", "--out", str(path))
    for engine in ("analytic", "oracle"):
        lines = (tmp_path / f"w_{engine}.csv").read_text().splitlines()
        assert len(lines) == 21


def test_parser_lists_subcommands():
    text = build_parser().format_help()
    for cmd in ("pn", "mean", "g2", "wigner", "sweep", "preset", "compare"):
        assert cmd in text


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "knr.cli", "mean", "--chi", "20", "--omega", "5"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.startswith("analytic\t")
