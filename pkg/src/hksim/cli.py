"""Command-line interface.

Exit codes: 0 on success, 1 on usage or input errors, 2 when a check suite
reports violations (so CI can gate on the theorem-backed invariants).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .core import Configuration
from .diagnostics import (
    attach_reports,
    auto_eps,
    cluster_time_bounds,
    clusters,
    run_energy_suite,
    run_friendly_suite,
    run_nd_lemma_suite,
    write_report_csv,
)
from .dynamics import FriendlinessViolation, NoiseSource, StopRule, run
from .experiments import (
    SweepSpec,
    WorkBudgetExceeded,
    aggregate,
    demo,
    run_sweep,
    write_aggregate_csv,
    write_results_csv,
)
from .graphs import GraphSchedule, SocialGraph, barabasi_albert, gnp, named_graph
from .spectral import spectral_report


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _parse_init(spec: str) -> Configuration:
    if spec.startswith("file:"):
        return Configuration.from_json_dict(_load_json(spec[5:]))
    if spec.startswith("uniform:"):
        parts = spec[8:].split(",")
        if len(parts) != 4:
            raise UsageError("--init uniform takes n,lo,hi,seed")
        n, lo, hi, seed = int(parts[0]), float(parts[1]), float(parts[2]), int(parts[3])
        rng = np.random.default_rng(seed)
        return Configuration(rng.uniform(lo, hi, n))
    raise UsageError(f"unknown init spec {spec!r} (use file:<path> or uniform:n,lo,hi,seed)")


def _parse_graph(spec: str, seed: int) -> SocialGraph:
    if spec.startswith("file:"):
        return SocialGraph.from_json_dict(_load_json(spec[5:]))
    try:
        kind, _, rest = spec.partition(":")
        if kind in ("complete", "path", "empty"):
            return named_graph(kind, int(rest))
        if kind == "gnp":
            n, p = rest.split(",")
            return gnp(int(n), float(p), seed)
        if kind == "ba":
            n, m = rest.split(",")
            return barabasi_albert(int(n), int(m), seed)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad graph spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown graph spec {spec!r}")


def _parse_schedule(path: str) -> GraphSchedule:
    data = _load_json(path)
    graphs = [SocialGraph.from_json_dict(g) for g in data["graphs"]]
    return GraphSchedule.sequence(graphs, declared_friendly=bool(data.get("friendly", False)))


def _parse_eps(value, n: int) -> float:
    if value is None:
        raise UsageError("this model needs --eps <value|auto>")
    if value == "auto":
        return auto_eps(n)
    try:
        return float(value)
    except ValueError as exc:
        raise UsageError(f"bad --eps value {value!r}") from exc


def _parse_noise(spec: str, eps_flag, n: int, mode: str) -> NoiseSource:
    if spec == "zero":
        eps = 0.0 if eps_flag is None else _parse_eps(eps_flag, n)
        return NoiseSource.zero(eps, mode=mode)
    if spec.startswith("uniform:"):
        return NoiseSource.uniform(_parse_eps(eps_flag, n), int(spec[8:]), mode=mode)
    if spec.startswith("file:"):
        source = NoiseSource.from_json_dict(_load_json(spec[5:]))
        if source.mode != mode:
            raise UsageError(f"noise file has mode {source.mode!r} but the model needs {mode!r}")
        return source
    raise UsageError(f"unknown noise spec {spec!r} (use zero, uniform:<seed> or file:<path>)")


def _cmd_simulate(args) -> int:
    x0 = _parse_init(args.init)
    schedule = noise = None
    if args.model == "social":
        if bool(args.graph) == bool(args.schedule):
            raise UsageError("the social model needs exactly one of --graph or --schedule")
        if args.graph:
            schedule = GraphSchedule.static(_parse_graph(args.graph, args.seed))
        else:
            schedule = _parse_schedule(args.schedule)
    else:
        if args.graph or args.schedule:
            raise UsageError(f"model {args.model!r} does not take a graph")
    if args.model in ("nd", "nd-pairwise"):
        mode = "per-agent" if args.model == "nd" else "per-pair"
        noise = _parse_noise(args.noise or "zero", args.eps, x0.n, mode)
    elif args.noise:
        raise UsageError(f"model {args.model!r} does not take noise")

    stop = StopRule(
        max_steps=args.steps,
        movement_threshold=args.threshold,
        cluster_rho=args.rho,
    )
    traj = run(args.model, x0, schedule=schedule, noise=noise, stop=stop)
    if args.out:
        traj.write_jsonl(args.out)
    if args.report or args.spectral:
        traj = attach_reports(traj, spectral=True, force=args.force)
    if args.report:
        write_report_csv(traj, args.report, provenance=_provenance(args))

    last = traj.configs[-1].positions
    summary = {
        "model": args.model,
        "steps": traj.steps,
        "stop": traj.stop_reason,
        "converged_at": traj.converged_at,
        "clustered_at": traj.clustered_at,
    }
    print(json.dumps(summary))
    if traj.reports:
        rep = traj.reports[-1]
        print(f"final energy {rep.energy!r}, lambda {rep.lam!r}")
    print("final positions", np.round(last[:, 0] if last.shape[1] == 1 else last, 6).tolist())
    return 0


def _provenance(args) -> dict:
    keys = ("model", "steps", "threshold", "rho", "eps", "seed", "init", "graph", "noise")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _cmd_sweep(args) -> int:
    spec = SweepSpec.from_json_dict(_load_json(args.spec))
    result = run_sweep(spec, jobs=args.jobs, force=args.force)
    prov = {"master_seed": spec.master_seed, "graph_model": spec.graph_model,
            "trials": spec.trials, "threshold": spec.threshold, "max_steps": spec.max_steps}
    write_results_csv(result, args.out, provenance=prov)
    if args.agg:
        write_aggregate_csv(aggregate(result), args.agg, provenance=prov)
    capped = sum(not r.converged for r in result.rows)
    print(f"wrote {len(result.rows)} rows to {args.out} ({capped} capped)")
    return 0


def _cmd_check(args) -> int:
    steps = args.steps
    if args.suite == "nd-lemmas":
        eps = None if args.eps in (None, "auto") else float(args.eps)
        report = run_nd_lemma_suite(
            [args.n], trials=args.trials, steps=steps or 500,
            master_seed=args.seed, eps=eps,
        )
        if args.rho:
            report.extras["cluster_time_bounds"] = cluster_time_bounds(
                args.n, eps if eps is not None else auto_eps(args.n), args.rho
            )
    elif args.suite == "energy":
        report = run_energy_suite(args.trials, steps or 200, args.seed, n_max=args.n)
    elif args.suite == "friendly":
        report = run_friendly_suite(args.trials, steps or 100, args.seed, n_max=args.n)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown suite {args.suite!r}")
    payload = json.dumps(report.to_json_dict(), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
    print(payload)
    return 0 if report.ok else 2


def _cmd_demo(args) -> int:
    result = demo(args.kind, delta=args.delta, eps=args.eps, seed=args.seed)
    print(f"demo {args.kind}: {result.narrative}")
    x0 = result.config
    print("before:", x0.positions[:, 0].tolist())
    if result.kind == "nofrz":
        traj = run("social", x0, schedule=result.graph, stop=StopRule(max_steps=args.steps))
        moves = traj.movements()
        print("per-step movement:", [float(f"{m:.3e}") for m in moves[:10]], "...")
        print("movement ratios:", np.round(moves[1:6] / moves[:5], 12).tolist())
    elif result.kind == "initdep":
        traj = run(
            "social", x0, schedule=result.graph,
            stop=StopRule(max_steps=args.steps, movement_threshold=1e-6),
        )
        print(f"converged at t={traj.converged_at} (movement < 1e-6)")
    elif result.kind == "noorder":
        print("graph edges:", result.graph.edges())
        print("after: ", result.expected["after"])
        print("swapped pair:", result.expected["swap_pair"])
    else:  # nondet
        traj = run("nd", x0, noise=result.noise, stop=StopRule(max_steps=1))
        after = traj.configs[-1].positions[:, 0]
        print("after: ", after.tolist())
        swapped = after[0] > after[1]
        print("order swapped:", bool(swapped))
    return 0


def _cmd_spectral_report(args) -> int:
    config = _parse_init(args.init)
    graph = _parse_graph(args.graph, args.seed) if args.graph else None
    report = spectral_report(config, graph)
    print(json.dumps(report.to_json_dict(), indent=2))
    if config.dimension == 1 and args.rho is not None:
        cl = clusters(config, args.rho)
        print(f"clusters: {cl.groups} extents {cl.extents} within rho: {cl.within}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="hksim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one trajectory")
    sim.add_argument("--model", required=True, choices=["classical", "social", "nd", "nd-pairwise"])
    sim.add_argument("--init", required=True, help="file:<path> or uniform:n,lo,hi,seed")
    sim.add_argument("--graph", help="gnp:n,p ba:n,m complete:n path:n empty:n file:<path>")
    sim.add_argument("--schedule", help="JSON file with a time-varying graph sequence")
    sim.add_argument("--noise", help="zero, uniform:<seed> or file:<path>")
    sim.add_argument("--eps", help="noise bound, a number or 'auto' (=1/(8n^2))")
    sim.add_argument("--steps", type=int, default=100)
    sim.add_argument("--threshold", type=float, help="stop when total movement drops below")
    sim.add_argument("--rho", type=float, help="stop when every cluster fits in rho")
    sim.add_argument("--spectral", action="store_true", help="attach spectral diagnostics")
    sim.add_argument("--out", help="trajectory JSONL path")
    sim.add_argument("--report", help="per-step report CSV path (implies --spectral)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--force", action="store_true")
    sim.set_defaults(fn=_cmd_simulate)

    sw = sub.add_parser("sweep", help="run a convergence-time sweep")
    sw.add_argument("--spec", required=True, help="SweepSpec JSON file")
    sw.add_argument("--out", required=True, help="results CSV path")
    sw.add_argument("--agg", help="aggregate CSV path")
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--force", action="store_true")
    sw.set_defaults(fn=_cmd_sweep)

    ck = sub.add_parser("check", help="run a theorem-backed check suite")
    ck.add_argument("--suite", required=True, choices=["nd-lemmas", "energy", "friendly"])
    ck.add_argument("--n", type=int, default=10)
    ck.add_argument("--trials", type=int, default=100)
    ck.add_argument("--steps", type=int)
    ck.add_argument("--eps", help="noise bound, a number or 'auto'")
    ck.add_argument("--rho", type=float, help="also report the contraction horizons")
    ck.add_argument("--seed", type=int, default=0)
    ck.add_argument("--out", help="write the JSON summary here as well")
    ck.set_defaults(fn=_cmd_check)

    dm = sub.add_parser("demo", help="show one of the qualitative phenomena")
    dm.add_argument("kind", choices=["nofrz", "initdep", "noorder", "nondet"])
    dm.add_argument("--delta", type=float, default=1e-2)
    dm.add_argument("--eps", type=float, default=0.1)
    dm.add_argument("--steps", type=int, default=100)
    dm.add_argument("--seed", type=int, default=0)
    dm.set_defaults(fn=_cmd_demo)

    sp = sub.add_parser("spectral-report", help="spectral diagnostics of one configuration")
    sp.add_argument("--init", required=True)
    sp.add_argument("--graph")
    sp.add_argument("--rho", type=float)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=_cmd_spectral_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, WorkBudgetExceeded, ValueError) as exc:
        print(f"hksim: error: {exc}", file=sys.stderr)
        return 1
    except FriendlinessViolation as exc:
        print(f"hksim: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
