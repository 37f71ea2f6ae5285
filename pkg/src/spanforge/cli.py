"""Batch command-line front end: build spanners, audit stretch, emit the
round-cost model, and run size/APSP studies.  All output is
machine-readable JSON (plus CSV for per-row data); reports validate
against report.schema.json shipped with the package.

Exit codes: 0 success/pass, 1 domain or audit failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

from .apsp import apsp_experiment
from .graph import DomainError, EdgeListError, load_edge_list, parse_generator_spec, write_edge_list
from .oracles import ALGORITHMS, Params, audit_stretch, size_study
from .spanner import SpannerBuild, epoch_count, stretch_exponent


@dataclass(frozen=True)
class CostModel:
    """Analytic round costs for the epoch schedule.

    epochs = ceil(ln k / ln(t+1)); iterations = epochs * t;
    mpc_rounds = ceil(iterations / gamma) models machines with n**gamma
    memory; clique_rounds = iterations.
    """

    k: int
    t: int
    gamma: float
    epochs: int
    iterations: int
    mpc_rounds: int
    clique_rounds: int

    def as_dict(self) -> dict:
        return {
            "type": "cost",
            "k": self.k,
            "t": self.t,
            "gamma": self.gamma,
            "epochs": self.epochs,
            "iterations": self.iterations,
            "mpc_rounds": self.mpc_rounds,
            "clique_rounds": self.clique_rounds,
        }


def cost_model(k: int, t: int, gamma: float = 1.0) -> CostModel:
    if not (0.0 < gamma <= 1.0):
        raise DomainError(f"gamma must be in (0, 1], got {gamma}")
    epochs = epoch_count(k, t)
    iterations = epochs * t
    return CostModel(
        k=k,
        t=t,
        gamma=gamma,
        epochs=epochs,
        iterations=iterations,
        mpc_rounds=math.ceil(iterations / gamma),
        clique_rounds=iterations,
    )


def _dump(report: dict, out: str | None) -> None:
    text = json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_graph(args) -> tuple[str, "WeightedGraph"]:
    if args.input:
        return args.input, load_edge_list(args.input)
    desc, make = parse_generator_spec(args.gen)
    return desc, make(args.seed if hasattr(args, "seed") else 0)


def build_report(source: str, algo: str, build: SpannerBuild, gamma: float) -> dict:
    report = {"type": "build", "algorithm": algo, "source": source}
    report.update(build.as_dict())
    report["cost"] = cost_model(build.k, build.t, gamma).as_dict()
    return report


def _default_bound(algo: str, build: SpannerBuild) -> float:
    if algo == "bs":
        return 2 * build.k - 1
    if algo == "twophase":
        t = build.t
        return 2 * t + (2 * t + 1) * (2 * t - 1) + 2 * t
    return 2 * build.k ** stretch_exponent(build.t)


def cmd_build(args) -> int:
    if args.t is not None and args.algo != "general":
        print("--t is only valid with --algo general", file=sys.stderr)
        return 2
    if args.audit is not None and args.audit != "auto":
        try:
            float(args.audit)
        except ValueError:
            print(f"--audit expects a number or 'auto', got {args.audit!r}", file=sys.stderr)
            return 2
    t = args.t if args.t is not None else 1
    try:
        source, g = _load_graph(args)
        build = ALGORITHMS[args.algo](g, args.k, t, args.seed)
    except (DomainError, EdgeListError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.spanner_out:
        sub_edges = [g.edges[eid] for eid in build.spanner_edges]
        from .graph import build_graph

        write_edge_list(build_graph(g.n, sub_edges), args.spanner_out)
    report = build_report(source, args.algo, build, args.gamma)
    status = 0
    if args.audit is not None:
        bound = _default_bound(args.algo, build) if args.audit == "auto" else float(args.audit)
        audit = audit_stretch(g, build.spanner_edges, bound)
        report["audit"] = audit.as_dict()
        status = 0 if audit.passed else 1
    _dump(report, args.out)
    return status


def _parse_auto_bound(spec: str) -> float:
    try:
        kind, rest = spec.split(":", 1)
        if kind == "bs":
            return 2 * int(rest) - 1
        if kind == "general":
            k_str, t_str = rest.split(",")
            return 2 * int(k_str) ** stretch_exponent(int(t_str))
    except (ValueError, DomainError):
        pass
    raise DomainError(f"bad --auto spec {spec!r} (use bs:K or general:K,T)")


def cmd_audit(args) -> int:
    try:
        g = load_edge_list(args.input)
        spanner_graph = load_edge_list(args.spanner)
    except (DomainError, EdgeListError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    index = {(u, v): eid for eid, (u, v, _) in enumerate(g.edges)}
    spanner_ids = []
    for u, v, w in spanner_graph.edges:
        eid = index.get((u, v))
        if eid is None or g.edges[eid][2] != w:
            print(f"error: spanner edge ({u},{v},{w}) not present in input graph", file=sys.stderr)
            return 2
        spanner_ids.append(eid)

    if args.bound is not None:
        bound = args.bound
    else:
        try:
            bound = _parse_auto_bound(args.auto)
        except DomainError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2

    audit = audit_stretch(g, spanner_ids, bound)
    report = {"type": "audit", "input": args.input, "spanner": args.spanner}
    report.update(audit.as_dict())
    _dump(report, args.out)
    if args.csv:
        rows = audit.csv_rows(g, set(spanner_ids))
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=["edge", "u", "v", "w", "in_spanner", "ratio"])
            writer.writeheader()
            writer.writerows(rows)
    return 0 if audit.passed else 1


def cmd_cost(args) -> int:
    try:
        model = cost_model(args.k, args.t, args.gamma)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _dump(model.as_dict(), args.out)
    return 0


def cmd_study(args) -> int:
    try:
        _, make = parse_generator_spec(args.gen)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.trials < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return 2

    try:
        if args.apsp:
            reports = []
            for trial in range(args.trials):
                g = make(args.seed0 + trial)
                rep = apsp_experiment(g, args.k, args.t, args.seed0 + trial)
                reports.append(rep)
            rows = [
                {
                    "trial": i,
                    "seed": r.seed,
                    "size": r.spanner_size,
                    "max_ratio": r.max_ratio,
                    "mean_ratio": r.mean_ratio,
                    "pairs": r.pairs,
                }
                for i, r in enumerate(reports)
            ]
            summary = {
                "type": "apsp_study",
                "generator": args.gen,
                "params": {"k": args.k, "t": args.t},
                "trials": args.trials,
                "mean_size": sum(r.spanner_size for r in reports) / len(reports),
                "max_ratio": max(r.max_ratio for r in reports),
                "mean_ratio": sum(r.mean_ratio for r in reports) / len(reports),
            }
            fieldnames = ["trial", "seed", "size", "max_ratio", "mean_ratio", "pairs"]
        else:
            stats = size_study(
                args.gen, Params(k=args.k, t=args.t), args.trials, args.seed0, args.algo
            )
            depth = max((len(tr) for tr in stats.epoch_clusters), default=0)
            rows = []
            for i, (size, traj) in enumerate(zip(stats.sizes, stats.epoch_clusters)):
                row = {"trial": i, "seed": args.seed0 + i, "size": size}
                for e in range(depth):
                    row[f"epoch{e + 1}_clusters"] = traj[e] if e < len(traj) else ""
                rows.append(row)
            summary = {"type": "study"}
            summary.update(stats.as_dict())
            fieldnames = ["trial", "seed", "size"] + [f"epoch{e + 1}_clusters" for e in range(depth)]
    except (DomainError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames)
            writer.writeheader()
            writer.writerows(rows)
    _dump(summary, args.json)
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spanforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct a spanner and write its report")
    src = p_build.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="edge-list file")
    src.add_argument("--gen", help="generator spec, e.g. gnp:100:0.1:unit")
    p_build.add_argument("--algo", required=True, choices=sorted(ALGORITHMS))
    p_build.add_argument("--k", type=int, required=True)
    p_build.add_argument("--t", type=int, default=None)
    p_build.add_argument("--seed", type=int, default=0)
    p_build.add_argument("--gamma", type=float, default=1.0)
    p_build.add_argument("--out", help="report JSON path (default stdout)")
    p_build.add_argument("--spanner-out", help="write the spanner as an edge-list file")
    p_build.add_argument("--audit", metavar="BOUND|auto", help="inline stretch audit of the result")
    p_build.set_defaults(func=cmd_build)

    p_audit = sub.add_parser("audit", help="audit a spanner file against a stretch bound")
    p_audit.add_argument("--input", required=True)
    p_audit.add_argument("--spanner", required=True)
    bound = p_audit.add_mutually_exclusive_group(required=True)
    bound.add_argument("--bound", type=float)
    bound.add_argument("--auto", help="bs:K or general:K,T")
    p_audit.add_argument("--out", help="report JSON path (default stdout)")
    p_audit.add_argument("--csv", help="per-edge ratio CSV path")
    p_audit.set_defaults(func=cmd_audit)

    p_cost = sub.add_parser("cost", help="print the analytic round-cost model")
    p_cost.add_argument("--k", type=int, required=True)
    p_cost.add_argument("--t", type=int, required=True)
    p_cost.add_argument("--gamma", type=float, default=1.0)
    p_cost.add_argument("--out")
    p_cost.set_defaults(func=cmd_cost)

    p_study = sub.add_parser("study", help="repeated-trial size or APSP study")
    p_study.add_argument("--gen", required=True)
    p_study.add_argument("--algo", default="general", choices=sorted(ALGORITHMS))
    p_study.add_argument("--k", type=int, required=True)
    p_study.add_argument("--t", type=int, default=1)
    p_study.add_argument("--trials", type=int, required=True)
    p_study.add_argument("--seed0", type=int, default=0)
    p_study.add_argument("--apsp", action="store_true", help="measure APSP ratios per trial")
    p_study.add_argument("--out", help="per-trial CSV path")
    p_study.add_argument("--json", help="summary JSON path (default stdout)")
    p_study.set_defaults(func=cmd_study)

    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
