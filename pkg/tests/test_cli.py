import json

import pytest

from recurrence_lab.cli import count, main, strip_timing
from recurrence_lab.experiments import pack_window, unpack_window
from recurrence_lab.windows import Window


def run(tmp_path, *argv, name="r.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_count_parser():
    assert count("1e7") == 10**7
    assert count("2^24") == 1 << 24
    assert count("10**8") == 10**8
    assert count("1_000") == 1000


def test_kneser_example(tmp_path):
    code, rep = run(tmp_path, "kriz", "kneser", "--d", "5", "--k", "1")
    assert code == 0
    assert rep["result"]["chi"] == 16 and rep["result"]["bound"] == 3
    assert rep["result"]["verdict"] == "pass"
    for key in ("schema", "tool_version", "full_config", "seed", "timing"):
        assert key in rep


def test_thmb_small_window(tmp_path):
    code, rep = run(tmp_path, "thmB", "--g", "table:100,1e4,1e8", "--k-max", "3", "--window", "1e5")
    assert code == 0 and rep["result"]["r_hits"] == 0
    assert main(["verify", "--report", str(tmp_path / "r.json"), "--out", str(tmp_path / "v.json")]) == 0


def test_verify_recomputes_instead_of_trusting(tmp_path):
    run(tmp_path, "thmB", "--g", "table:100,1e4,1e8", "--k-max", "3", "--window", "1e5")
    path = tmp_path / "r.json"
    rep = json.loads(path.read_text())
    a = unpack_window(rep["raw"]["A"])
    members = a.members().tolist()
    lo = rep["raw"]["intervals"][0][0]
    tampered = sorted(set(members) | {members[0] + lo})
    rep["raw"]["A"] = pack_window(Window.from_members(tampered, a.lo, a.hi))
    path.write_text(json.dumps(rep))
    assert rep["checks"]["r_hits_zero"] is True
    assert main(["verify", "--report", str(path), "--out", str(tmp_path / "v.json")]) == 2


def test_usage_errors(tmp_path, capsys):
    assert main(["thmB", "--bogus", "1"]) == 1
    err = capsys.readouterr().err
    assert "unrecognized arguments" in err and "--window" in err
    assert main([]) == 1
    assert main(["nosuch"]) == 1
    assert main(["kriz", "kneser", "--d", "99", "--out", str(tmp_path / "x.json")]) == 1


def test_key_value_config_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# witness run\nS = 1\nm=10\ndelta=7/20\naction=witness\n")
    code, rep = run(tmp_path, "kriz", "--config", str(cfg))
    assert code == 0 and rep["result"]["best_size"] == 4 and rep["result"]["found"]
    code, rep = run(tmp_path, "kriz", "--config", str(cfg), "--m", "12", name="b.json")
    assert rep["full_config"]["m"] == 12
    bad = tmp_path / "bad.cfg"
    bad.write_text("no_such_key=1\n")
    assert main(["kriz", "--config", str(bad)]) == 1


def test_rerun_from_report_is_identical(tmp_path):
    code, first = run(tmp_path, "tuples", "--H", "0,2,6", "--r", "2", "--n-max", "500")
    code2, second = run(tmp_path, "tuples", "--config", str(tmp_path / "r.json"), name="again.json")
    assert code == code2 == 0
    assert strip_timing(first) == strip_timing(second)


def test_threads_recorded_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("RECURRENCE_LAB_THREADS", "3")
    _, rep = run(tmp_path, "chen", "sum", "--N", "1000")
    assert rep["full_config"]["threads"] == 3
    _, rep = run(tmp_path, "chen", "sum", "--N", "1000", "--threads", "1", name="b.json")
    assert rep["full_config"]["threads"] == 1


def test_csv_projection(tmp_path):
    out = tmp_path / "t.csv"
    code = main([
        "bohr", "--family", "primes", "--prime-bound", "20",
        "--out", str(tmp_path / "b.json"), "--csv", "bound_trail,final_bound", "--csv-out", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "bound_trail,final_bound"
    assert len(lines) == 1 + 8
    assert lines[1] == "1/2,55296/323323"
    assert main(["bohr", "--out", str(tmp_path / "c.json"), "--csv", "nope"]) == 1


def test_failing_invariant_exits_two(tmp_path):
    code, rep = run(tmp_path, "chen", "recurrence", "--n-max", "30", "--subset-density", "0.05", "--seed", "4")
    assert rep["result"]["found"] == [None]
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["sieve", "--family", "primes", "--window", "2000", "--shifts", "2,6"],
        ["digit", "--window-exp", "12", "--a-max", "20", "--banach-n", "64"],
        ["color-gaps", "--window", "1e4"],
        ["bohr", "--family", "cubic-norm", "--prime-bound", "40"],
        ["chen", "recurrence", "--n-max", "2000", "--k", "2", "--trials", "3", "--subset-density", "0.5"],
        ["chen", "gowers", "--function", "indicator:primes", "--N", "11", "--k", "3"],
        ["kriz", "witness", "--S", "1,3", "--m", "20", "--delta", "1/4"],
        ["tuples", "--H", "0,2,6,8", "--r", "3", "--n-max", "300", "--delta-star-span", "12"],
    ],
)
def test_each_command_verifies(tmp_path, argv):
    code, rep = run(tmp_path, *argv)
    assert code == 0, rep["checks"]
    assert main(["verify", "--report", str(tmp_path / "r.json"), "--out", str(tmp_path / "v.json")]) == 0
