import json

import pytest

from trirm.report import Certainty
from trirm.search import (
    Objective,
    SearchConfig,
    compare_expected,
    decode_column,
    load_puncture_file,
    random_search,
    replay,
    replay_file,
    stored_codes,
)
from trirm.triortho import check_triorthogonal, rm_generator
from trirm.reedmuller import RmSpec


def test_decode_column_reexport():
    assert decode_column(12, 3, 4) == (2, 0, 1, 0)


def test_config_validation():
    cfg = SearchConfig(3, 4, 2)
    assert cfg.k_max == 2 and cfg.objective is Objective.MIN_GAMMA
    with pytest.raises(ValueError):
        SearchConfig(3, 4, 3, k_max=2)
    with pytest.raises(ValueError):
        SearchConfig(3, 4, 1, objective="max_k")
    with pytest.raises(ValueError):
        SearchConfig(3, 4, 1, objective="min_cost")
    with pytest.raises(ValueError):
        SearchConfig(3, 4, 1, distance_budget=0)
    with pytest.raises(ValueError):
        SearchConfig(3, 4, 1, time_budget=-1.0)


def test_single_puncture_search():
    res = random_search(SearchConfig(3, 4, 1, iterations=3, seed=11))
    assert res.best.label() == "[[80, 1, 5]]_3"
    assert res.best.certainty is Certainty.EXACT and res.best.A_d == 2080
    assert len(res.columns) == 1


def test_max_d_search():
    res = random_search(SearchConfig(5, 2, 5, objective="max_d", iterations=200, seed=0))
    assert res.best.params == (20, 5, 2)


def test_zero_iterations_returns_initial_sample():
    res = random_search(SearchConfig(5, 2, 3, k_max=6, iterations=0, seed=4))
    assert len(res.trace) == 1 and res.trace[0]["iteration"] == 0
    assert list(res.columns) == res.trace[0]["columns"]
    assert 3 <= len(res.columns) <= 6


def test_max_k_search():
    res = random_search(SearchConfig(5, 2, 1, k_max=6, objective="max_k", target_d=2, iterations=150, seed=1))
    assert res.best.d >= 2 and res.best.k >= 4


@pytest.mark.parametrize("walkers", [1, 3])
def test_determinism(walkers):
    cfg = SearchConfig(3, 4, 2, k_max=9, iterations=40, seed=7, walkers=walkers)
    a, b = random_search(cfg), random_search(cfg)
    assert a == b
    assert a.trace == b.trace
    assert json.dumps(a.to_dict(), default=str) == json.dumps(b.to_dict(), default=str)


def test_trace_improves():
    res = random_search(SearchConfig(3, 4, 9, iterations=60, seed=0))
    its = [t["iteration"] for t in res.trace]
    assert its == sorted(its)
    assert res.best.provenance["search"]["seed"] == 0


def test_stored_codes_triorthogonal():
    codes = stored_codes()
    assert len(codes) == 14
    for doc in codes.values():
        assert check_triorthogonal(rm_generator(RmSpec.maximal(doc["p"], doc["m"])))


def test_replay_examples():
    docs = stored_codes()
    r = replay(3, 4, docs["p3_72"]["columns"])
    assert r.params == (72, 9, 3) and r.A_d == 648
    r = replay(5, 3, docs["p5_112"]["columns"])
    assert r.params == (112, 13, 3) and r.A_d == 512
    r, bad = replay_file("appc/p5_519.json")
    assert (r.n, r.k, r.d) == (519, 106, 5) and r.certainty is Certainty.UPPER_BOUND and not bad


def test_compare_expected():
    r = replay(5, 2, stored_codes()["p5_20"]["columns"])
    assert compare_expected(r, {"n": 20, "k": 5, "d": 2, "A_d": 760}) == []
    assert compare_expected(r, {"n": 20, "k": 5, "d": 3}) != []


def test_load_puncture_file(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"p": 3, "m": 2, "columns": [1]}))
    assert load_puncture_file(path)["columns"] == [1]
    assert load_puncture_file("p3_80.json")["expected"]["n"] == 80
    with pytest.raises(FileNotFoundError):
        load_puncture_file(tmp_path / "missing.json")
