"""Command-line front end: preprocess, cluster, evaluate, bench, sweep, synth.

Exit status: 0 success, 1 data/domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import art1, bench, features, logparse, quality, synth
from .baselines import KMeansParams, SomParams, kmeans_train, som_train
from .clustering import Clustering, clustering_from_assignments, read_assignments, write_assignments
from .errors import DataError

log = logging.getLogger("art1web")


class UsageError(Exception):
    pass


def _csv_list(kind):
    def parse(s):
        try:
            return [kind(x) for x in s.split(",") if x.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {s!r}") from None
    return parse


def _grid(s):
    try:
        w, h = (int(x) for x in s.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like WxH, got {s!r}") from None
    return w, h


def _emit(args, payload: dict, text: str | None = None):
    if args.json:
        print(json.dumps(payload))
    elif text is not None:
        print(text, end="" if text.endswith("\n") else "\n")


def _require_file(path):
    if not Path(path).is_file():
        raise UsageError(f"no such file: {path}")


# -- subcommands --------------------------------------------------------------

def cmd_preprocess(args):
    _require_file(args.log)
    records, stats = logparse.read_log(args.log)
    print(stats, file=sys.stderr)
    filt = logparse.RecordFilter(
        methods=frozenset(m.upper() for m in args.methods),
        status_max=args.status_max,
        ext_blocklist=tuple(args.ext_blocklist),
    )
    counts = logparse.aggregate(records, filt)
    base = features.build_base_vector(counts, args.min_url_support)
    matrix, dropped = features.binarize(counts, base, args.tau)
    if dropped:
        print(f"dropped {len(dropped)} host(s) with empty pattern vectors", file=sys.stderr)
    features.write_matrix(matrix, args.out)
    _emit(args, {"lines": stats.read, "parsed": stats.parsed, "skipped": stats.skipped,
                 "hosts": matrix.m, "urls": matrix.n, "dropped": dropped},
          f"wrote {matrix.m} x {matrix.n} pattern matrix to {args.out}")


def _proto_str(row, binary):
    if binary:
        return "".join(str(int(b)) for b in row)
    return " ".join(f"{x:.3f}" for x in row)


def cmd_cluster(args):
    if args.algo == "art1":
        if args.k is not None or args.grid is not None:
            raise UsageError("--k/--grid do not apply to art1")
        rho = 0.5 if args.rho is None else args.rho
        if not 0.0 <= rho <= 1.0:
            raise UsageError(f"--rho must lie in [0, 1], got {rho}")
    elif args.rho is not None:
        raise UsageError("--rho only applies to art1")
    if args.algo == "kmeans" and args.k is None:
        raise UsageError("kmeans needs --k")
    if args.algo == "som" and args.grid is None and args.k is None:
        raise UsageError("som needs --grid WxH (or --k)")

    _require_file(args.matrix)
    matrix = features.read_matrix(args.matrix)
    if args.algo == "art1":
        model, clustering = art1.train(matrix, art1.Art1Params(rho, args.max_epochs))
        model_doc = {"algorithm": "art1", **model.to_dict()}
    else:
        if args.algo == "kmeans":
            if args.k > matrix.m:
                raise UsageError(f"--k {args.k} exceeds the {matrix.m} patterns")
            clustering = kmeans_train(matrix, KMeansParams(args.k, args.max_iters, args.seed))
        else:
            w, h = args.grid or bench.som_shape(args.k)
            clustering = som_train(matrix, SomParams(w, h, args.iters, seed=args.seed))
        model_doc = {"algorithm": args.algo, "n": matrix.n, "params": clustering.params,
                     "prototypes": clustering.prototypes.tolist()}
    if args.out:
        Path(args.out).write_text(json.dumps(model_doc, indent=1))
    if args.assignments:
        write_assignments(clustering, args.assignments)

    binary = args.algo == "art1"
    sizes = clustering.sizes()
    lines = [f"{clustering.n_clusters} clusters ({args.algo})"]
    for c, row in enumerate(clustering.prototypes):
        lines.append(f"cluster {c} [{sizes[c]} hosts]: {_proto_str(row, binary)}")
    _emit(args, {"algorithm": args.algo, "clusters": clustering.n_clusters,
                 "sizes": sizes.tolist(), "prototypes": clustering.prototypes.tolist(),
                 "assignments": clustering.assignments}, "\n".join(lines))


def _load_prototypes(path, assignments):
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: {exc}") from None
    if doc.get("algorithm") == "art1":
        protos = art1.Art1Model.from_dict(doc).top_down
    else:
        protos = np.asarray(doc["prototypes"], dtype=np.float64)
    return Clustering(assignments, protos, doc.get("algorithm", ""))


def cmd_evaluate(args):
    if not 0.0 <= args.beta <= 1.0:
        raise UsageError("--beta must lie in [0, 1]")
    if args.sigma <= 0:
        raise UsageError("--sigma must be positive")
    _require_file(args.matrix)
    _require_file(args.assignments)
    matrix = features.read_matrix(args.matrix)
    assignments = read_assignments(args.assignments)
    if args.model:
        _require_file(args.model)
        clustering = _load_prototypes(args.model, assignments)
    else:
        clustering = clustering_from_assignments(assignments, matrix)
    if clustering.n_clusters < 2:
        raise quality.QualityError("inter-cluster distance undefined for fewer than 2 clusters")
    truth = None
    if args.truth:
        if matrix.ground_truth is None:
            raise DataError("--truth given but the matrix has no #truth section")
        truth = matrix.ground_truth
    report = quality.evaluate(clustering, matrix, args.sigma, args.beta, truth=truth)
    if args.out:
        Path(args.out).write_text(report.to_csv())
    _emit(args, json.loads(report.to_json()), report.to_csv())


def cmd_bench(args):
    cfg = bench.BenchConfig(host_counts=args.hosts, repetitions=args.reps, seed=args.seed)
    rows = bench.run_timing(cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "timings.csv").write_text(bench.timings_csv(rows))
    fits = bench.fit_scaling(rows) if len(set(cfg.host_counts)) >= 3 else {}
    lines = [f"{r.algorithm:7s} hosts={r.hosts:5d} median={r.median_seconds:.4f}s" for r in rows]
    lines += [f"{a:7s} slope={s:.3f} r2={r2:.3f}" for a, (s, r2) in fits.items()]
    _emit(args, {"timings": [r.__dict__ for r in rows],
                 "scaling": {a: {"slope": s, "r2": r2} for a, (s, r2) in fits.items()}},
          "\n".join(lines))


def cmd_sweep(args):
    rhos = bench.rho_range(args.rho_from, args.rho_to, args.rho_step)
    if any(not 0 <= r <= 1 for r in rhos):
        raise UsageError("rho range must stay within [0, 1]")
    algos = ["art1"] + (["kmeans", "som"] if args.k else [])
    cfg = bench.BenchConfig(rho_values=rhos, k_values=args.k or None, seed=args.seed,
                            quality_hosts=args.hosts)
    matrix = None
    if args.matrix:
        _require_file(args.matrix)
        matrix = features.read_matrix(args.matrix)
    reports = bench.run_quality_curves(cfg, algos, jobs=args.jobs, matrix=matrix)
    text = bench.quality_csv(reports)
    if args.out:
        Path(args.out).write_text(text)
    _emit(args, {"rows": [r.__dict__ for r in reports]}, text)


def cmd_synth(args):
    if args.kind == "log":
        text, matrix = synth.gen_log(args.hosts, args.urls, args.k, args.noise, args.seed,
                                     proto_density=args.density)
        Path(args.out).write_text(text)
        if args.matrix_out:
            features.write_matrix(matrix, args.matrix_out)
    else:
        sizes = np.full(args.k, args.hosts // args.k)
        sizes[: args.hosts % args.k] += 1
        matrix = synth.gen_planted(args.urls, args.k, sizes, args.density, args.noise, args.seed)
        features.write_matrix(matrix, args.out)
    _emit(args, {"hosts": matrix.m, "urls": matrix.n, "out": args.out},
          f"wrote synthetic {args.kind} ({matrix.m} hosts, {matrix.n} urls) to {args.out}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="art1web", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("preprocess", help="access log -> pattern matrix")
    s.add_argument("--log", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--tau", type=int, default=1)
    s.add_argument("--min-url-support", type=int, default=1)
    s.add_argument("--status-max", type=int, default=399)
    s.add_argument("--methods", type=_csv_list(str), default=["GET"])
    s.add_argument("--ext-blocklist", type=_csv_list(str), default=[])
    s.set_defaults(func=cmd_preprocess)

    s = sub.add_parser("cluster", help="cluster a pattern matrix")
    s.add_argument("--matrix", required=True)
    s.add_argument("--algo", choices=["art1", "kmeans", "som"], default="art1")
    s.add_argument("--rho", type=float)
    s.add_argument("--k", type=int)
    s.add_argument("--grid", type=_grid)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-epochs", type=int, default=100)
    s.add_argument("--max-iters", type=int, default=100)
    s.add_argument("--iters", type=int, help="SOM steps (default 10 x hosts)")
    s.add_argument("--out", help="model file (JSON)")
    s.add_argument("--assignments", help="host,cluster CSV")
    s.set_defaults(func=cmd_cluster)

    s = sub.add_parser("evaluate", help="quality report for an assignment")
    s.add_argument("--matrix", required=True)
    s.add_argument("--assignments", required=True)
    s.add_argument("--model", help="model file; prototypes default to member centroids")
    s.add_argument("--truth", action="store_true", help="add Rand index vs the matrix #truth")
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--beta", type=float, default=0.5)
    s.add_argument("--out")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("bench", help="runtime scaling on synthetic data")
    s.add_argument("--hosts", type=_csv_list(int), default=[100, 250, 500, 1000])
    s.add_argument("--reps", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", default=".")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("sweep", help="quality vs vigilance / cluster count")
    s.add_argument("--matrix", help="pattern matrix (default: pinned synthetic instance)")
    s.add_argument("--hosts", type=int, default=500, help="size of the synthetic instance")
    s.add_argument("--rho-from", type=float, default=0.3)
    s.add_argument("--rho-to", type=float, default=0.5)
    s.add_argument("--rho-step", type=float, default=0.05)
    s.add_argument("--k", type=_csv_list(int), help="also run kmeans/som at these k")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", help="quality.csv path")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("synth", help="generate planted-cluster data")
    s.add_argument("--kind", choices=["log", "matrix"], default="log")
    s.add_argument("--hosts", type=int, default=100)
    s.add_argument("--urls", type=int, default=50)
    s.add_argument("--k", type=int, default=5)
    s.add_argument("--density", type=float, default=0.25)
    s.add_argument("--noise", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.add_argument("--matrix-out", help="(log only) also write the planted matrix")
    s.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"art1web {args.command}: usage error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"art1web {args.command}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"art1web {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
