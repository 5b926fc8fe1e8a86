import io
import json

import pytest

from trirm.cli import run


def call(*argv, tmp_path=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def manifest(err):
    return json.loads(err.strip().splitlines()[-1])


def test_tables_2():
    code, out, err = call("tables", "--which", "2", "--p", "23")
    assert code == 0 and "[[17, 6, 3]]" in out
    man = manifest(err)
    assert man["command"] == "tables" and man["config"]["which"] == 2
    assert man["budgets"]["enumeration"] > 0 and "wall_time" in man and "version" in man


def test_tables_1_csv():
    code, out, _ = call("tables", "--which", "1", "--p", "5", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p,gamma0,t0"
    p, g, t0 = lines[1].split(",")
    assert p == "5" and abs(float(g) - 0.55914) <= 1e-4 and abs(float(t0) - 0.27868) <= 1e-4


def test_build_json_round_trip():
    code, out, _ = call("build", "--p", "3", "--m", "4", "--columns", "1")
    assert code == 0
    doc = json.loads(out)
    assert (doc["n"], doc["k"], doc["d"], doc["A_d"], doc["certainty"]) == ("80", "1", "5", "2080", "exact")


def test_build_manhattan_ball():
    code, out, _ = call("build", "--p", "3", "--m", "4", "--w", "1", "--format", "csv")
    assert code == 0 and out.splitlines()[1].startswith("3,76,5,")


def test_distance_upper_bound_flagged():
    code, out, _ = call("distance", "--punctures", "appc/p5_519.json", "--target-w", "5", "--format", "csv")
    assert code == 0 and out.splitlines()[1] == "5,519,106,5,upper_bound"


def test_enumerate():
    code, out, _ = call("enumerate", "--p", "5", "--m", "2", "--punctures", "p5_24.json")
    assert code == 0
    rows = dict((int(a), (int(b), int(c))) for a, b, c in (l.split(",") for l in out.splitlines()[1:]))
    assert rows[0] == (1, 1) and rows[3][0] - rows[3][1] == 96


def test_replay():
    code, out, _ = call("replay", "--file", "appc/p5_519.json")
    doc = json.loads(out)
    assert code == 0 and doc["n"] == "519" and doc["k"] == "106" and doc["certainty"] == "upper_bound"


def test_replay_mismatch(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"p": 3, "m": 4, "columns": [1], "expected": {"n": 80, "k": 1, "d": 6}}))
    code, _, err = call("replay", "--file", str(path))
    assert code == 4 and "mismatch" in err


def test_budget_exit_code():
    code, _, err = call("enumerate", "--p", "3", "--m", "4", "--columns", "1", "--budget", "100")
    assert code == 3 and "budget" in err


def test_usage_errors():
    assert call("nonsense")[0] == 2
    assert call("build", "--p", "3", "--m", "4")[0] == 2
    assert call("build", "--p", "4", "--m", "2", "--columns", "1")[0] == 2
    assert call("--version")[0] == 0


def test_env_budget(monkeypatch):
    monkeypatch.setenv("TRIRM_BUDGET", "100")
    code, _, err = call("enumerate", "--p", "3", "--m", "4", "--columns", "1")
    assert code == 3 and manifest(err)["budgets"]["enumeration"] == 100


def test_distill_fixed_point():
    code, out, _ = call("distill", "--code", "80-1-5", "--exact", "--fixed-point", "--format", "json")
    assert code == 0
    row = json.loads(out)[0]
    assert abs(float(row["error_rate_threshold"]) - 0.16) <= 0.01
    assert float(row["delta_threshold"]) == pytest.approx(1.5 * float(row["error_rate_threshold"]), abs=1e-5)


def test_distill_curve_csv():
    code, out, _ = call("distill", "--code", "80-1-5", "--exact", "--points", "5")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "delta,delta_out,accept,cost" and len(lines) == 6


def test_distill_estimate():
    code, out, _ = call("distill", "--p", "5", "--n", "519", "--k", "106", "--d", "5", "--A-d", "2180",
                        "--delta", "1e-3")
    delta, delta_out, accept, cost = map(float, out.splitlines()[1].split(","))
    assert code == 0 and 6.5e-18 < delta_out < 9.5e-18 and 7.0 < cost < 7.8


def test_asymptotics_figures():
    code, out, _ = call("asymptotics", "--figure", "6", "--count", "100")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "p,gamma0_t_sixth,large_p,rel_gap" and len(lines) == 101
    code, out, _ = call("asymptotics", "--figure", "5", "--points", "10")
    assert code == 0 and len(out.splitlines()) == 10
    code, out, _ = call("asymptotics", "--figure", "3", "--w", "40", "--points", "10")
    assert code == 0 and out.splitlines()[0] == "m,w,t,H3_2t,exact"


def test_search_cli(tmp_path):
    save = tmp_path / "best.json"
    man = tmp_path / "man.json"
    code, out, err = call("search", "--p", "3", "--m", "4", "--k-min", "1", "--iterations", "2",
                          "--seed", "5", "--save", str(save), "--manifest", str(man))
    assert code == 0 and err == ""
    assert json.loads(out)["best"]["n"] == "80"
    assert json.loads(save.read_text())["expected"]["d"] == 5
    m = json.loads(man.read_text())
    assert m["seed"] == 5 and m["config"]["search"]["iterations"] == 2
