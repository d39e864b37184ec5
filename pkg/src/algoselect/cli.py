"""Batch experiment harness: every module exposed as a seeded subcommand.

All randomness derives from one root --seed via fixed labeled streams, so any
subcommand rerun with the same flags reproduces its output files byte for
byte.  Output files are written atomically; failures print one machine
readable JSON object to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import epm as epm_mod
from . import gdtune, greedy, online, sorter
from .core import MAXIMIZE, FiniteFamily, shatter_probe
from .utils import atomic_write_text, labeled_rng


def _csv(header: str, rows) -> str:
    lines = [header]
    lines.extend(
        ",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in row) for row in rows
    )
    return "\n".join(lines) + "\n"


def _load_instance_dir(path: str, problem: str):
    if not os.path.isdir(path):
        raise ValueError(f"instance directory not found: {path}")
    suffix = ".json" if problem == "mwis" else ".csv"
    names = sorted(name for name in os.listdir(path) if name.endswith(suffix))
    loader = greedy.load_mwis if problem == "mwis" else greedy.load_knapsack
    instances = [loader(os.path.join(path, name)) for name in names]
    if not instances:
        raise ValueError(f"no instances ({suffix} files) in {path}")
    return instances


def _train_holdout_split(instances, seed: int, frac: float):
    if len(instances) < 2 or frac <= 0:
        return instances, None
    order = labeled_rng(seed, "train-holdout-split").permutation(len(instances))
    cut = max(1, int(round(len(instances) * (1 - frac))))
    train = [instances[i] for i in order[:cut]]
    holdout = [instances[i] for i in order[cut:]]
    return train, holdout or None


def cmd_erm_greedy(args) -> int:
    instances = _load_instance_dir(args.instances, args.problem)
    n = max(getattr(x, "n") for x in instances)
    if args.problem == "mwis":
        family = greedy.mwis_family(n, (args.rho_lo, args.rho_hi), adaptive=args.variant == "adaptive")
    else:
        family = greedy.knapsack_family(n, (args.rho_lo, args.rho_hi))
    train, holdout = _train_holdout_split(instances, args.seed, args.holdout_frac)
    bset = greedy.breakpoints(family, train)
    rho_star, report = greedy.erm_breakpoint(family, train, holdout=holdout, bset=bset)
    text = _csv(
        "rho_star,breakpoint_count,train_mean,holdout_mean,estimated_error",
        [(float(rho_star), bset.count, report.train_mean, report.holdout_mean, report.estimated_error)],
    )
    atomic_write_text(args.out, text)
    return 0


def cmd_gd_tune(args) -> int:
    family = gdtune.GdFamily(args.rho_lo, args.rho_hi, args.L, args.m_sc, args.c, args.Z, args.nu)
    if args.instances:
        if not os.path.isdir(args.instances):
            raise ValueError(f"instance directory not found: {args.instances}")
        names = sorted(n for n in os.listdir(args.instances) if n.endswith(".json"))
        samples = [gdtune.load_gd_instance(os.path.join(args.instances, n)) for n in names]
        if not samples:
            raise ValueError(f"no instances (.json files) in {args.instances}")
    else:
        rng = labeled_rng(args.seed, "gd-instances")
        samples = [gdtune.random_instance(family, args.dim, rng) for _ in range(args.samples)]
    net = None
    if args.net:
        net = np.asarray([float(tok) for tok in args.net.split(",")])
    rho_star, report = gdtune.erm_stepsize(family, samples, net=net)
    net_size = (net.size if net is not None else gdtune.knet(family).size)
    text = _csv(
        "rho_star,mean_iterations,net_size,K,H",
        [(float(rho_star), report.train_mean, int(net_size), family.K, family.H)],
    )
    atomic_write_text(args.out, text)
    return 0


def cmd_online(args) -> int:
    intervals = tuple(
        tuple(float(v) for v in chunk.split(":")) for chunk in args.intervals.split(",")
    )
    spec = online.uniform_smooth_spec(args.n, args.sigma, intervals)
    generator = online.erdos_renyi_generator(args.n, args.p_er)
    trace = online.run_smoothed_online(
        spec, generator, args.T, args.d_exp, args.seed, net=args.net_size
    )
    atomic_write_text(args.out, trace.to_csv())
    return 0


def cmd_adversary(args) -> int:
    params = online.adversary_sequence(args.n_budget, args.T, args.seed)
    lines = [online.instance_to_jsonl(p) for p in params]
    atomic_write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _probe_family(args):
    rng = labeled_rng(args.seed, "pdim-instances")
    if args.family == "constant":
        indices = tuple(range(4))
        instances = [int(i) for i in range(args.sets * args.set_size)]
        return FiniteFamily(indices, lambda i, x: 0.5, orientation=MAXIMIZE), instances
    if args.family == "mwis":
        fam = greedy.mwis_family(args.n)
        instances = [greedy.random_mwis_instance(args.n, 0.5, rng) for _ in range(args.sets * args.set_size)]
    else:
        fam = greedy.knapsack_family(args.n, (0.0, 2.0))
        instances = [greedy.random_knapsack_instance(args.n, rng) for _ in range(args.sets * args.set_size)]
    reps = greedy.breakpoints(fam, instances).representatives
    finite = FiniteFamily(
        tuple(float(r) for r in reps),
        lambda rho, x: greedy.greedy_cost(fam, rho, x),
        orientation=MAXIMIZE,
    )
    return finite, instances


def cmd_pdim_probe(args) -> int:
    finite, instances = _probe_family(args)
    sets = [instances[i * args.set_size:(i + 1) * args.set_size] for i in range(args.sets)]
    reports = shatter_probe(finite, sets, size_cap=args.set_size_cap)
    payload = [
        {
            "set_size": r.set_size,
            "shattered": r.shattered,
            "labeling_count": r.labeling_count,
            "witnesses": list(r.witnesses) if r.witnesses else None,
        }
        for r in reports
    ]
    atomic_write_text(args.out, json.dumps({"family": args.family, "reports": payload}, indent=2) + "\n")
    return 0


def cmd_epm(args) -> int:
    rhos = [float(tok) for tok in args.rhos.split(",")]
    fam = greedy.mwis_family(args.n)
    fmap = epm_mod.mwis_feature_map()
    rng = labeled_rng(args.seed, "epm-instances")
    train = [greedy.random_mwis_instance(args.n, args.p_er, rng) for _ in range(args.samples)]
    holdout = [greedy.random_mwis_instance(args.n, args.p_er, rng) for _ in range(args.holdout)]
    epms = [
        epm_mod.fit_linear_epm(rho, train, [greedy.greedy_cost(fam, rho, x) for x in train], fmap)
        for rho in rhos
    ]
    hits = 0
    for x in holdout:
        predicted = epm_mod.select_per_instance(epms, x, fmap, MAXIMIZE)
        truth = max(rhos, key=lambda rho: (greedy.greedy_cost(fam, rho, x), -rho))
        hits += predicted == truth
    payload = {
        "epms": [epm_mod.epm_to_dict(e) for e in epms],
        "holdout_instances": len(holdout),
        "selection_matches_true_best": hits,
    }
    atomic_write_text(args.out, json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_sort_bench(args) -> int:
    rng = labeled_rng(args.seed, "sort-bench")
    if args.train_csv:
        train = sorter.load_arrays_csv(args.train_csv)
        tests = sorter.load_arrays_csv(args.test_csv) if args.test_csv else train
    else:
        def draw(count):
            if args.dist == "uniform":
                return [rng.uniform(0, 1, args.n) for _ in range(count)]
            centers = (np.arange(args.n) + 0.5) / args.n
            half = 0.3 / args.n
            return [np.clip(centers + rng.uniform(-half, half, args.n), 0, 1) for _ in range(count)]

        train = draw(args.train)
        tests = draw(args.test)
    trained = sorter.train_sorter(train, c_cap=args.c_cap, fallback_constant=args.fallback_constant)
    rows = []
    for i, arr in enumerate(tests):
        out, stats = sorter.sort(trained, arr)
        reference, merge_comparisons = sorter.mergesort_count(list(arr))
        rows.append((
            i, stats.comparisons, stats.routing_comparisons, stats.insertion_comparisons,
            stats.merge_comparisons, int(stats.fallback), int(list(out) == reference),
            merge_comparisons,
        ))
    text = _csv(
        "array_index,comparisons,routing,insertion,merge,fallback,matches_reference,mergesort_comparisons",
        rows,
    )
    atomic_write_text(args.out, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="algoselect",
        description="Seeded experiment harness for data-driven algorithm selection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="root seed for all randomness")
        p.add_argument("--out", required=True, help="output file path")

    p = sub.add_parser("erm-greedy", help="best greedy parameter via breakpoint ERM")
    p.add_argument("--problem", choices=["mwis", "knapsack"], default="mwis")
    p.add_argument("--variant", choices=["nonadaptive", "adaptive"], default="nonadaptive")
    p.add_argument("--instances", required=True, help="directory of instance files")
    p.add_argument("--rho-lo", type=float, default=0.0)
    p.add_argument("--rho-hi", type=float, default=1.0)
    p.add_argument("--holdout-frac", type=float, default=0.5)
    common(p)
    p.set_defaults(func=cmd_erm_greedy)

    p = sub.add_parser("gd-tune", help="best gradient descent step size over the net")
    p.add_argument("--rho-lo", type=float, default=0.1)
    p.add_argument("--rho-hi", type=float, default=0.4)
    p.add_argument("--L", type=float, default=4.0)
    p.add_argument("--m-sc", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.1)
    p.add_argument("--Z", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=0.01)
    p.add_argument("--instances", help="directory of instance JSON files (default: generate)")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--net", help="explicit comma-separated net (default: the K-net)")
    common(p)
    p.set_defaults(func=cmd_gd_tune)

    p = sub.add_parser("online", help="no-regret selection on smoothed instances")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--sigma", type=float, default=0.25)
    p.add_argument("--T", type=int, default=1000)
    p.add_argument("--p-er", type=float, default=0.3)
    p.add_argument("--intervals", default="0:1", help="weight support, e.g. 0.6:0.65,0.82:0.87")
    p.add_argument("--net-size", type=int, default=10000)
    p.add_argument("--d-exp", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_online)

    p = sub.add_parser("adversary", help="nested-window instance sequence (JSON lines)")
    p.add_argument("--n-budget", type=int, default=1500)
    p.add_argument("--T", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("pdim-probe", help="brute-force shattering probe")
    p.add_argument("--family", choices=["mwis", "knapsack", "constant"], default="mwis")
    p.add_argument("--n", type=int, default=6, help="instance size")
    p.add_argument("--sets", type=int, default=3, help="number of instance sets to probe")
    p.add_argument("--set-size", type=int, default=2)
    p.add_argument("--set-size-cap", type=int, default=4)
    common(p)
    p.set_defaults(func=cmd_pdim_probe)

    p = sub.add_parser("epm", help="fit per-algorithm linear performance models")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--p-er", type=float, default=0.3)
    p.add_argument("--rhos", default="0.0,0.5,1.0")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--holdout", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_epm)

    p = sub.add_parser("sort-bench", help="train a bucket sorter and benchmark it")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--train", type=int, default=200)
    p.add_argument("--test", type=int, default=100)
    p.add_argument("--dist", choices=["uniform", "skewed"], default="skewed")
    p.add_argument("--c-cap", type=float, default=0.5)
    p.add_argument("--fallback-constant", type=float, default=4.0)
    p.add_argument("--train-csv", help="training arrays CSV (overrides generation)")
    p.add_argument("--test-csv", help="test arrays CSV")
    common(p)
    p.set_defaults(func=cmd_sort_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, TypeError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "type": type(exc).__name__}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
