"""Command-line front end.

Every command writes its result to stdout and a one-line JSON run manifest
(command, full configuration, seed, budgets, wall time, version) to stderr,
or to ``--manifest FILE``.  Exit codes: 0 ok, 2 usage, 3 budget exceeded,
4 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from . import __version__
from .asymptotics import (
    entropy_H,
    gamma0,
    gamma_large_p,
    large_p_gap,
    optimize_gamma0,
    primes,
    smallest_code_scan,
)
from .distill import (
    CURVE_HEADER,
    NoiseModel,
    code_threshold,
    curve_csv,
    curve_rows,
    estimate_curve,
    exact_curve,
    suppression_estimate,
    suppression_exact,
)
from .pnomial import pnomial_series
from .reedmuller import PunctureSet, RmSpec, manhattan_set
from .report import CodeReport, emit_report
from .search import (
    Objective,
    SearchConfig,
    compare_expected,
    load_puncture_file,
    random_search,
    replay,
    stored_codes,
)
from .triortho import (
    DEFAULT_EFFORT,
    BudgetExceeded,
    NotTriorthogonalError,
    build_code,
    code_report,
    default_budget,
    quantum_distance,
)

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_MISMATCH = 0, 2, 3, 4

TABLE_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23)


class VerificationMismatch(RuntimeError):
    pass


@dataclass
class RunManifest:
    command: str
    config: dict[str, Any]
    seed: int | None
    budgets: dict[str, Any]
    version: str = __version__
    wall_time: float = 0.0
    exit_code: int = 0
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, default=str)


# -- helpers -------------------------------------------------------------------

def _parse_columns(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.replace(" ", "").split(",") if c)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad column list {text!r}") from exc


def _puncture_set(args) -> PunctureSet:
    chosen = sum(x is not None for x in (args.punctures, args.columns, args.w))
    if chosen != 1:
        raise ValueError("give exactly one of --punctures, --columns, --w")
    if args.punctures is not None:
        doc = load_puncture_file(args.punctures)
        S = PunctureSet.from_dict(doc)
        if args.p is not None and args.p != S.p or args.m is not None and args.m != S.m:
            raise ValueError("--p/--m disagree with the puncture file")
        return S
    if args.p is None or args.m is None:
        raise ValueError("--p and --m are required")
    if args.columns is not None:
        return PunctureSet(args.p, args.m, args.columns)
    return manhattan_set(args.p, args.m, args.w)


def _spec(args, S: PunctureSet) -> RmSpec:
    if args.r is None:
        return RmSpec.maximal(S.p, S.m)
    return RmSpec(S.p, S.m, args.r)


def _write_table(header: Sequence[str], rows: list[Sequence[Any]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2, default=str) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    widths = [max(len(str(h)), *(len(str(r[i])) for r in rows)) if rows else len(str(h)) for i, h in enumerate(header)]
    lines = ["  ".join(str(h).rjust(wd) for h, wd in zip(header, widths))]
    lines += ["  ".join(str(v).rjust(wd) for v, wd in zip(r, widths)) for r in rows]
    return "\n".join(lines) + "\n"


def _report_text(report: CodeReport, fmt: str) -> str:
    return emit_report(report, fmt).rstrip("\n") + "\n"


# -- commands ------------------------------------------------------------------

def cmd_build(args, man: RunManifest) -> str:
    S = _puncture_set(args)
    pair = build_code(_spec(args, S), S)
    report = code_report(pair, args.budget, seed=args.seed, effort=args.effort, target_w=args.target_w,
                         count_logicals=not args.no_logicals, threads=args.threads)
    return _report_text(report, args.format)


def cmd_distance(args, man: RunManifest) -> str:
    S = _puncture_set(args)
    pair = build_code(_spec(args, S), S)
    d, cert = quantum_distance(pair, args.budget, seed=args.seed, effort=args.effort,
                               target_w=args.target_w, threads=args.threads)
    row = [pair.p, pair.n, pair.k, d, cert.value]
    return _write_table(("p", "n", "k", "d", "certainty"), [row], args.format)


def cmd_enumerate(args, man: RunManifest) -> str:
    S = _puncture_set(args)
    pair = build_code(_spec(args, S), S)
    prm = pair.prm_enumerator(args.budget, args.threads)
    srm = pair.srm_enumerator(args.budget, args.threads)
    if args.format == "json":
        return json.dumps({"prm": prm.to_dict(), "srm": srm.to_dict()}, indent=2) + "\n"
    rows = [(w, prm[w], srm[w]) for w in range(pair.n + 1) if prm[w] or srm[w]]
    return _write_table(("weight", "prm", "srm"), rows, args.format)


def cmd_tables(args, man: RunManifest) -> str:
    ps = [args.p] if args.p is not None else list(TABLE_PRIMES)
    if args.which == 1:
        rows = []
        for p in ps:
            g, t0 = optimize_gamma0(p)
            rows.append((p, f"{g:.5f}", f"{t0:.5f}"))
        return _write_table(("p", "gamma0", "t0"), rows, args.format)
    if args.which == 2:
        rows = []
        for p in ps:
            e = smallest_code_scan(p)
            if e is None:
                man.notes.append(f"no gamma<1 code found for p={p}")
                continue
            rows.append((p, e.m, e.w, e.n, e.k, e.d, f"{e.gamma:.5f}", f"[[{e.n}, {e.k}, {e.d}]]"))
        return _write_table(("p", "m", "w", "n", "k", "d", "gamma", "code"), rows, args.format)
    rows = []
    mismatched = []
    for name, doc in stored_codes().items():
        if args.p is not None and doc["p"] != args.p:
            continue
        expected = doc.get("expected", {})
        rep = replay(doc["p"], doc["m"], doc["columns"], args.budget, seed=args.seed, effort=args.effort,
                     target_w=int(expected.get("d", 1)), threads=args.threads)
        bad = compare_expected(rep, expected)
        if bad:
            mismatched.append(f"{name}: " + "; ".join(bad))
        rows.append((name, rep.p, rep.n, rep.k, rep.d, rep.certainty.value,
                     "" if rep.A_d is None else rep.A_d, f"{rep.gamma:.4f}", "ok" if not bad else "MISMATCH"))
    out = _write_table(("name", "p", "n", "k", "d", "certainty", "A_d", "gamma", "check"), rows, args.format)
    if mismatched:
        raise VerificationMismatch("\n".join(mismatched) + "\n" + out)
    return out


def cmd_asymptotics(args, man: RunManifest) -> str:
    n = args.points
    if args.figure == 3:
        # exact (1/m) log_3 pnomial(m, w, 3) against H_3(2t) with t = w / (2m)
        w = args.w if args.w is not None else 400
        m_max = 10 * w
        series = pnomial_series(w, 3, m_max)
        rows = []
        for m in range(w // 2 + 1, m_max + 1, max(1, (m_max - w // 2) // n)):
            t = w / (2 * m)
            exact = math.log(series[m]) / (m * math.log(3))
            rows.append((m, w, f"{t:.8f}", f"{entropy_H(3, 2 * t):.10f}", f"{exact:.10f}"))
        return _write_table(("m", "w", "t", "H3_2t", "exact"), rows, "csv" if args.format == "human" else args.format)
    if args.figure == 5:
        p = args.p or 3
        top = (p - 1) / 3
        rows = []
        for i in range(1, n):
            theta = top * i / n
            rows.append((p, f"{theta:.8f}", f"{theta / (p - 1):.8f}", f"{gamma0(p, theta):.10f}"))
        return _write_table(("p", "theta", "t", "gamma0"), rows, "csv" if args.format == "human" else args.format)
    rows = []
    for p in primes(args.count):
        g = gamma0(p, (p - 1) / 6)
        rows.append((p, f"{g:.10f}", f"{gamma_large_p(p):.10f}", f"{large_p_gap(p):.8f}"))
    return _write_table(("p", "gamma0_t_sixth", "large_p", "rel_gap"), rows, "csv" if args.format == "human" else args.format)


def _named_code(name: str) -> dict[str, Any]:
    n_k_d = name.replace("[", "").replace("]", "").replace(",", "-").split("-")
    codes = stored_codes()
    for key, doc in codes.items():
        e = doc.get("expected", {})
        if [str(e.get(x)) for x in ("n", "k", "d")] == n_k_d[:3]:
            if len(n_k_d) < 4 or str(doc["p"]) == n_k_d[3]:
                return doc
    raise ValueError(f"no stored code named {name!r}; known: {', '.join(sorted(codes))}")


def cmd_distill(args, man: RunManifest) -> str:
    if args.code is not None:
        doc = _named_code(args.code)
        p = doc["p"]
        exp = doc["expected"]
        n, k, d, A_d = int(exp["n"]), int(exp["k"]), int(exp["d"]), exp.get("A_d")
    else:
        if None in (args.p, args.n, args.k, args.d, args.a_d):
            raise ValueError("give --code, or all of --p --n --k --d --A-d")
        doc, p, n, k, d, A_d = None, args.p, args.n, args.k, args.d, args.a_d
    if args.exact:
        if doc is None:
            raise ValueError("--exact needs --code")
        pair = build_code(RmSpec.maximal(p, doc["m"]), PunctureSet.from_dict(doc))
        enums = (pair.prm_enumerator(args.budget, args.threads), pair.srm_enumerator(args.budget, args.threads))
        curve = exact_curve(enums, p)
        outcome = lambda delta: suppression_exact(enums, NoiseModel(p, delta))
    else:
        if A_d is None:
            raise ValueError("the estimate needs A_d")
        A_d = int(A_d)
        curve = estimate_curve(n, k, d, A_d, p)
        outcome = lambda delta: suppression_estimate(n, k, d, A_d, NoiseModel(p, delta))
    if args.fixed_point:
        th = code_threshold(curve, p)
        if th.delta is None:
            rows = [(p, n, k, d, "none", "none")]
        else:
            rows = [(p, n, k, d, f"{th.error_rate:.6f}", f"{th.delta:.6f}")]
        return _write_table(("p", "n", "k", "d", "error_rate_threshold", "delta_threshold"), rows, args.format)
    if args.delta is not None:
        deltas = [args.delta]
    else:
        deltas = [args.delta_max * (i + 1) / args.points for i in range(args.points)]
    rows = curve_rows(outcome, deltas)
    if args.format == "csv":
        return curve_csv(rows)
    return _write_table(CURVE_HEADER, [tuple(f"{v:.6g}" for v in r) for r in rows], args.format)


def cmd_search(args, man: RunManifest) -> str:
    cfg = SearchConfig(
        p=args.p, m=args.m, k_min=args.k_min, k_max=args.k_max, objective=Objective(args.objective),
        target_d=args.target_d, seed=args.seed, iterations=args.iterations, time_budget=args.time_budget,
        distance_budget=args.distance_budget, final_budget=args.budget or default_budget(),
        isd_effort=args.isd_effort, walkers=args.walkers,
    )
    man.config["search"] = cfg.to_dict()
    res = random_search(cfg)
    if args.save:
        doc = json.loads(PunctureSet(cfg.p, cfg.m, res.columns).to_json())
        doc["expected"] = {"n": res.best.n, "k": res.best.k, "d": res.best.d, "A_d": res.best.A_d}
        with open(args.save, "w") as fh:
            json.dump(doc, fh, indent=1)
    if args.format == "json":
        return json.dumps(res.to_dict(), indent=2, default=str) + "\n"
    return _report_text(res.best, args.format)


def cmd_replay(args, man: RunManifest) -> str:
    doc = load_puncture_file(args.file)
    expected = doc.get("expected", {})
    target = args.target_w if args.target_w is not None else int(expected.get("d", 1))
    rep = replay(doc["p"], doc["m"], doc["columns"], args.budget, seed=args.seed, effort=args.effort,
                 target_w=target, threads=args.threads)
    bad = compare_expected(rep, expected)
    text = _report_text(rep, args.format)
    if bad:
        raise VerificationMismatch("\n".join(bad) + "\n" + text)
    return text


# -- parser --------------------------------------------------------------------

def _common(sp: argparse.ArgumentParser, fmt_default: str = "json") -> None:
    sp.add_argument("--budget", type=int, default=None,
                    help="exhaustive enumeration budget in words (default TRIRM_BUDGET or 1e8)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--format", choices=("json", "csv", "human"), default=fmt_default)
    sp.add_argument("--manifest", metavar="FILE", help="write the run manifest here instead of stderr")


def _code_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--r", type=int, help="RM degree (default r_max)")
    sp.add_argument("--w", type=int, help="puncture the Manhattan ball of radius w")
    sp.add_argument("--punctures", metavar="FILE", help="puncture JSON {p, m, columns}")
    sp.add_argument("--columns", type=_parse_columns, help="comma-separated 1-based columns")
    sp.add_argument("--effort", type=int, default=DEFAULT_EFFORT, help="randomized distance search rounds")
    sp.add_argument("--target-w", type=int, default=1, help="stop the distance search at this weight")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trirm", description="Punctured Reed-Muller triorthogonal codes over F_p.")
    ap.add_argument("--version", action="version", version=f"trirm {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("build", help="build a punctured code and report [[n,k,d]] and A_d")
    _code_args(sp)
    sp.add_argument("--no-logicals", action="store_true", help="skip the A_d count")
    _common(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("distance", help="quantum distance only")
    _code_args(sp)
    _common(sp, "human")
    sp.set_defaults(func=cmd_distance)

    sp = sub.add_parser("enumerate", help="weight enumerators of PRM and SRM (columns weight,prm,srm)")
    _code_args(sp)
    _common(sp, "csv")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser(
        "tables", help="reproduce the reference tables",
        description="1: p,gamma0,t0 optimum.  2: p,m,w,n,k,d,gamma of the smallest Manhattan-punctured "
                    "code with gamma<1.  3: replay of the bundled puncture lists.",
    )
    sp.add_argument("--which", type=int, choices=(1, 2, 3), required=True)
    sp.add_argument("--p", type=int)
    sp.add_argument("--effort", type=int, default=DEFAULT_EFFORT)
    _common(sp, "human")
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser(
        "asymptotics", help="curve data as CSV",
        description="3: m,w,t,H3_2t,exact (exact = (1/m) log_3 pnomial(m,w,3)).  "
                    "5: p,theta,t,gamma0 over theta in (0,(p-1)/3).  "
                    "6: p,gamma0_t_sixth,large_p,rel_gap for the first --count primes.",
    )
    sp.add_argument("--figure", type=int, choices=(3, 5, 6), required=True)
    sp.add_argument("--p", type=int)
    sp.add_argument("--w", type=int)
    sp.add_argument("--points", type=int, default=200)
    sp.add_argument("--count", type=int, default=100)
    _common(sp, "csv")
    sp.set_defaults(func=cmd_asymptotics)

    sp = sub.add_parser(
        "distill", help="suppression curve (delta,delta_out,accept,cost) or threshold",
        description="Thresholds are printed both as the per-qudit error rate (p-1)delta/p and as delta.",
    )
    sp.add_argument("--code", help="stored code, e.g. 80-1-5 or 519-106-5")
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--A-d", dest="a_d", type=int)
    sp.add_argument("--exact", action="store_true", help="use the exact enumerators (k = 1 codes)")
    sp.add_argument("--fixed-point", action="store_true")
    sp.add_argument("--delta", type=float, help="single input delta")
    sp.add_argument("--delta-max", type=float, default=0.3)
    sp.add_argument("--points", type=int, default=60)
    _common(sp, "csv")
    sp.set_defaults(func=cmd_distill)

    sp = sub.add_parser("search", help="randomized puncture search")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k-min", type=int, required=True)
    sp.add_argument("--k-max", type=int)
    sp.add_argument("--objective", choices=[o.value for o in Objective], default="min_gamma")
    sp.add_argument("--target-d", type=int)
    sp.add_argument("--iterations", type=int, default=200)
    sp.add_argument("--time-budget", type=float)
    sp.add_argument("--distance-budget", type=int, default=10**5)
    sp.add_argument("--isd-effort", type=int, default=20)
    sp.add_argument("--walkers", type=int, default=1)
    sp.add_argument("--save", metavar="FILE", help="write the best puncture set as JSON")
    _common(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("replay", help="rebuild a stored puncture list and check its parameters")
    sp.add_argument("--file", required=True, help="path, or a bundled name such as appc/p5_519.json")
    sp.add_argument("--effort", type=int, default=DEFAULT_EFFORT)
    sp.add_argument("--target-w", type=int)
    _common(sp)
    sp.set_defaults(func=cmd_replay)
    return ap


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.budget is None:
        args.budget = default_budget()
    config = {k: v for k, v in vars(args).items() if k not in ("func", "manifest")}
    man = RunManifest(args.command, config, args.seed, {"enumeration": args.budget})
    t0 = time.monotonic()
    code = EXIT_OK
    try:
        stdout.write(args.func(args, man))
    except BudgetExceeded as exc:
        print(f"trirm: budget exceeded: {exc}", file=stderr)
        code = EXIT_BUDGET
    except VerificationMismatch as exc:
        print(f"trirm: verification mismatch:\n{exc}", file=stderr)
        code = EXIT_MISMATCH
    except (ValueError, NotTriorthogonalError, FileNotFoundError) as exc:
        print(f"trirm: {exc}", file=stderr)
        code = EXIT_USAGE
    man.wall_time = round(time.monotonic() - t0, 3)
    man.exit_code = code
    if args.manifest:
        with open(args.manifest, "w") as fh:
            fh.write(man.to_json() + "\n")
    else:
        print(man.to_json(), file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
