"""Randomized search over puncture sets, and replay of stored puncture lists."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .reedmuller import PunctureSet, RmSpec, decode_column, encode_point
from .report import Certainty, CodeReport
from .triortho import (
    DEFAULT_EFFORT,
    BudgetExceeded,
    build_code,
    code_report,
    min_weight_upper_bound,
)

__all__ = [
    "Objective", "SearchConfig", "SearchResult", "decode_column", "encode_point",
    "load_puncture_file", "random_search", "replay", "replay_file", "stored_codes",
]


class Objective(str, Enum):
    MIN_GAMMA = "min_gamma"
    MAX_D = "max_d"
    MAX_K = "max_k"


@dataclass(frozen=True)
class SearchConfig:
    p: int
    m: int
    k_min: int
    k_max: int | None = None
    objective: Objective = Objective.MIN_GAMMA
    target_d: int | None = None
    seed: int = 0
    iterations: int = 200
    time_budget: float | None = None
    distance_budget: int = 10**5
    final_budget: int = 10**8
    isd_effort: int = 20
    jump_prob: float = 0.1
    restart_after: int = 40
    walkers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "objective", Objective(self.objective))
        k_max = self.k_min if self.k_max is None else self.k_max
        object.__setattr__(self, "k_max", k_max)
        if not 1 <= self.k_min <= k_max < self.p**self.m:
            raise ValueError(f"need 1 <= k_min <= k_max < {self.p**self.m}")
        if self.objective is Objective.MAX_K and self.target_d is None:
            raise ValueError("max_k objective needs target_d")
        if self.iterations < 0 or self.distance_budget < 1 or self.isd_effort < 1 or self.walkers < 1 or self.restart_after < 1:
            raise ValueError("iteration and budget settings must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive")

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["objective"] = self.objective.value
        return d


@dataclass
class _Eval:
    columns: tuple[int, ...]
    n: int
    k: int
    d: int
    certainty: Certainty
    multiplicity: int | None = None

    @property
    def gamma(self) -> float:
        if self.k < 1 or self.d < 2:
            return math.inf
        return math.log(self.n / self.k) / math.log(self.d)


@dataclass(frozen=True)
class SearchResult:
    best: CodeReport
    columns: tuple[int, ...]
    trace: tuple[dict[str, Any], ...] = field(default=())

    def to_dict(self) -> dict[str, Any]:
        return {"best": self.best.to_dict(), "columns": list(self.columns), "trace": list(self.trace)}


def _score(e: _Eval, cfg: SearchConfig) -> tuple:
    # fewer minimum-weight words breaks the remaining ties, which gives the
    # walk a gradient on plateaus of equal d
    mult = math.inf if e.multiplicity is None else e.multiplicity
    base = (e.gamma, e.n, -e.k, mult)
    if cfg.objective is Objective.MAX_D:
        return (-e.d,) + base
    if cfg.objective is Objective.MAX_K:
        short = 0 if e.d >= cfg.target_d else 1
        return (short, -e.d if short else 0, -e.k) + base
    return base


class _Walker:
    def __init__(self, cfg: SearchConfig, seed_seq: np.random.SeedSequence) -> None:
        self.cfg = cfg
        self.spec = RmSpec.maximal(cfg.p, cfg.m)
        self.rng = np.random.default_rng(seed_seq)
        self.N = cfg.p**cfg.m
        self.cache: dict[tuple[int, ...], _Eval] = {}

    def evaluate(self, cols: tuple[int, ...]) -> _Eval:
        got = self.cache.get(cols)
        if got is not None:
            return got
        pair = build_code(self.spec, PunctureSet(self.cfg.p, self.cfg.m, cols))
        isd_seed = int(self.rng.integers(1 << 62))
        if pair.k < 1:
            e = _Eval(cols, pair.n, pair.k, 0, Certainty.EXACT)
        else:
            mult = None
            try:
                W = pair.prm_enumerator(self.cfg.distance_budget)
                d = W.min_weight() or 0
                cert = Certainty.EXACT
                mult = W[d]
            except BudgetExceeded:
                d, _ = min_weight_upper_bound(None, 1, isd_seed, self.cfg.isd_effort, parity_check=pair.G0)
                cert = Certainty.UPPER_BOUND
            e = _Eval(cols, pair.n, pair.k, d, cert, mult)
        self.cache[cols] = e
        return e

    def propose(self, cols: tuple[int, ...]) -> tuple[int, ...]:
        cfg, rng = self.cfg, self.rng
        current = set(cols)
        size = len(cols)
        move = "swap"
        if cfg.k_max > cfg.k_min and rng.random() < cfg.jump_prob:
            if size == cfg.k_min:
                move = "add"
            elif size == cfg.k_max:
                move = "remove"
            else:
                move = "add" if rng.random() < 0.5 else "remove"
        if move in ("swap", "remove"):
            current.discard(int(rng.choice(sorted(current))))
        if move in ("swap", "add"):
            while True:
                c = int(rng.integers(1, self.N + 1))
                if c not in current and c not in cols or (move == "add" and c not in current):
                    current.add(c)
                    break
        return tuple(sorted(current))

    def sample(self) -> tuple[int, ...]:
        k0 = int(self.rng.integers(self.cfg.k_min, self.cfg.k_max + 1))
        return tuple(sorted(int(c) + 1 for c in self.rng.choice(self.N, size=k0, replace=False)))

    def run(self, deadline: float | None) -> tuple[_Eval, list[dict[str, Any]]]:
        cfg = self.cfg
        cur = best = self.evaluate(self.sample())
        trace = [_trace_entry(0, best)]
        stale = 0
        for it in range(1, cfg.iterations + 1):
            if deadline is not None and time.monotonic() > deadline:
                break
            if stale >= cfg.restart_after:
                cand, stale = self.evaluate(self.sample()), 0
                cur = cand
            else:
                cand = self.evaluate(self.propose(cur.columns))
                stale += 1
                if _score(cand, cfg) <= _score(cur, cfg):
                    if _score(cand, cfg) < _score(cur, cfg):
                        stale = 0
                    cur = cand
            if _score(cur, cfg) < _score(best, cfg):
                best = cur
                trace.append(_trace_entry(it, best))
        return best, trace


def _trace_entry(it: int, e: _Eval) -> dict[str, Any]:
    g = e.gamma
    return {"iteration": it, "n": e.n, "k": e.k, "d": e.d, "certainty": e.certainty.value,
            "gamma": None if math.isinf(g) else g, "columns": list(e.columns)}


def random_search(cfg: SearchConfig) -> SearchResult:
    """Propose-evaluate hill climbing over puncture sets of RM_p(r_max, m).

    Moves swap one column for another, or (with probability ``jump_prob``)
    add or remove one column within ``[k_min, k_max]``.  Sideways moves are
    accepted, and the walk restarts from a fresh random set after
    ``restart_after`` steps without strict improvement.  During the walk distances come from exact enumeration when
    within ``distance_budget`` and from a short randomized search otherwise;
    the winner is re-measured with ``final_budget``.  Independent walkers are
    seeded from ``seed`` and the lexicographically best result is kept.
    """
    spec = RmSpec.maximal(cfg.p, cfg.m)
    if not spec.is_triorthogonal_degree:
        raise ValueError(f"no triorthogonal RM space for p={cfg.p}, m={cfg.m}")
    deadline = None if cfg.time_budget is None else time.monotonic() + cfg.time_budget
    results = []
    for i, ss in enumerate(np.random.SeedSequence(cfg.seed).spawn(cfg.walkers)):
        best, trace = _Walker(cfg, ss).run(deadline)
        for t in trace:
            t["walker"] = i
        results.append((_score(best, cfg), i, best, trace))
    _, widx, best, trace = min(results, key=lambda r: (r[0], r[1]))
    pair = build_code(spec, PunctureSet(cfg.p, cfg.m, best.columns))
    report = code_report(
        pair, cfg.final_budget, seed=cfg.seed, target_w=1,
        extra={"search": cfg.to_dict(), "walker": widx},
    )
    return SearchResult(report, best.columns, tuple(trace))


# -- stored puncture lists ---------------------------------------------------

def _data_dir():
    return resources.files("trirm") / "data" / "appc"


def stored_codes() -> dict[str, dict[str, Any]]:
    """Bundled puncture lists keyed by file stem (e.g. ``p5_519``)."""
    out = {}
    for entry in sorted(_data_dir().iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out[entry.name[:-5]] = json.loads(entry.read_text())
    return out


def load_puncture_file(path: str | Path) -> dict[str, Any]:
    """Read a puncture JSON from disk, falling back to the bundled data."""
    path = Path(path)
    if path.exists():
        return json.loads(path.read_text())
    bundled = _data_dir() / path.name
    if bundled.is_file():
        return json.loads(bundled.read_text())
    raise FileNotFoundError(path)


def replay(
    p: int,
    m: int,
    columns,
    budget: int | None = None,
    *,
    seed: int = 0,
    effort: int = DEFAULT_EFFORT,
    target_w: int = 1,
    threads: int = 1,
) -> CodeReport:
    """Rebuild and measure the code of RM_p(r_max, m) punctured at ``columns``."""
    S = PunctureSet(p, m, tuple(columns))
    pair = build_code(RmSpec.maximal(p, m), S)
    return code_report(pair, budget, seed=seed, effort=effort, target_w=target_w, threads=threads)


def compare_expected(report: CodeReport, expected: dict[str, Any]) -> list[str]:
    """Mismatches between a replayed report and stored expectations.

    An upper-bound distance matches when it equals the expected value; ``A_d``
    is compared only when it was computed.
    """
    problems = []
    for key in ("n", "k"):
        if key in expected and getattr(report, key) != int(expected[key]):
            problems.append(f"{key}: got {getattr(report, key)}, expected {expected[key]}")
    if "d" in expected:
        want = int(expected["d"])
        if report.d != want:
            problems.append(f"d: got {report.d} ({report.certainty.value}), expected {want}")
    if expected.get("A_d") is not None and report.A_d is not None and report.A_d != int(expected["A_d"]):
        problems.append(f"A_d: got {report.A_d}, expected {expected['A_d']}")
    return problems


def replay_file(path: str | Path, budget: int | None = None, *, seed: int = 0,
                effort: int = DEFAULT_EFFORT, threads: int = 1) -> tuple[CodeReport, list[str]]:
    doc = load_puncture_file(path)
    expected = doc.get("expected", {})
    report = replay(doc["p"], doc["m"], doc["columns"], budget, seed=seed, effort=effort,
                    target_w=int(expected.get("d", 1)), threads=threads)
    return report, compare_expected(report, expected)
