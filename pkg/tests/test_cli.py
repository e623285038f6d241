import csv
import io
import json

import pytest

from zchannel.cli import BOUND_HEADER, CAPACITY_HEADER, main, parse_grid
from zchannel.codes import load_code


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def bal_file(tmp_path, capsys):
    path = tmp_path / "bal.json"
    assert main(["construct", "--kind", "balanced", "--m", "2", "--w", "1/2", "--out", str(path)]) == 0
    return path


def test_parse_grid():
    assert parse_grid("0.1,0.2") == [0.1, 0.2]
    assert parse_grid("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_grid("") == []
    assert parse_grid("1,2", int) == [1, 2]


def test_construct_and_certify(bal_file, capsys):
    code = load_code(bal_file)
    assert len(code) == 4 and code.n == 6
    rc, out, _ = run(capsys, "certify", str(bal_file), "--L", "2", "--tau", "1/6")
    rec = json.loads(out)
    assert rc == 0 and rec["radius"] == 2 and rec["pass"] is True and rec["t"] == 1


def test_certify_rejects_large_l(bal_file, capsys):
    rc, _, err = run(capsys, "certify", str(bal_file), "--L", "5")
    assert rc == 2 and "exceeds" in err


def test_construct_rejects_bad_ratio(capsys):
    rc, _, err = run(capsys, "construct", "--kind", "balanced", "--m", "2", "--w", "3/5")
    assert rc == 2 and "error" in err


def test_construct_is_byte_identical(tmp_path, capsys):
    outs = []
    for k in range(2):
        path = tmp_path / f"s{k}.json"
        assert main(["construct", "--kind", "stacked", "--m", "3", "--j-range", "0,1",
                     "--seed", "4", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "block", "m": 2, "j": 0}))
    rc, out, _ = run(capsys, "construct", "--config", str(cfg))
    assert rc == 0 and json.loads(out)["n"] == 6
    cfg.write_text(json.dumps({"kind": "block", "bogus": 1}))
    rc, _, err = run(capsys, "construct", "--config", str(cfg))
    assert rc == 2 and "bogus" in err


def test_sweep_bounds_csv(capsys):
    rc, out, _ = run(capsys, "sweep-bounds", "--L", "2", "--eps", "0.01,0.02")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert out.startswith(",".join(BOUND_HEADER) + "\r\n")
    general = [r for r in rows if r["name"] == "general_upper_bound"]
    assert [r["value"] for r in general] == ["794", "251"]
    assert rc in (0, 3)


def test_sweep_bounds_flags_failed_preconditions(capsys):
    rc, out, _ = run(capsys, "sweep-bounds", "--L", "2", "--eps", "0.1", "--n", "1000")
    assert rc == 3
    rows = list(csv.DictReader(io.StringIO(out)))
    row = next(r for r in rows if r["name"] == "unique_above_plotkin")
    assert row["value"] == "" and row["preconditions"].startswith("failed:")


def test_sweep_bounds_empty_grid(capsys):
    rc, out, _ = run(capsys, "sweep-bounds", "--eps", "")
    assert rc == 0 and out == ",".join(BOUND_HEADER) + "\r\n"


def test_sweep_capacity(capsys):
    rc, out, _ = run(capsys, "sweep-capacity", "--L", "2", "--w", "0.5", "--tau", "0.1,0.6")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == CAPACITY_HEADER
    assert float(rows[0]["rc_lower"]) == pytest.approx(0.27807190511263735)
    assert rows[1]["eb_upper"] == ""
    assert rc == 3


def test_sweep_capacity_json(capsys):
    rc, out, _ = run(capsys, "sweep-capacity", "--w", "0.5", "--tau", "0.1", "--format", "json")
    assert rc == 0 and json.loads(out)[0]["L"] == 2


def test_cover(tmp_path, capsys):
    code_out = tmp_path / "centers.json"
    rc, out, _ = run(capsys, "cover", "--n", "12", "--w", "1/2", "--v", "1/4", "--a", "1/4",
                     "--eps", "0.5", "--seed", "0", "--code-out", str(code_out))
    rec = json.loads(out)
    assert rc == 0 and rec["complete"] and rec["converse_lower"] == 11
    assert load_code(code_out).meta["target_weight"] == 6


def test_simulate(bal_file, capsys):
    rc, out, _ = run(capsys, "simulate", str(bal_file), "--tau", "1/6", "--trials", "50", "--seed", "3")
    rec = json.loads(out)
    assert rc == 0 and rec["violations"] == 0 and rec["mode"] == "adversarial"
    rc2, out2, _ = run(capsys, "simulate", str(bal_file), "--tau", "1/6", "--trials", "50", "--seed", "3")
    assert out == out2


def test_missing_file(capsys):
    rc, _, err = run(capsys, "certify", "/nonexistent/code.json")
    assert rc == 2


def test_console_script_entry_point():
    from importlib.metadata import entry_points

    eps = [e for e in entry_points(group="console_scripts") if e.name == "zchannel"]
    assert eps and eps[0].value == "zchannel.cli:main"
