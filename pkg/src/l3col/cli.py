"""Command-line front end.

Exit codes: 0 YES (or success), 1 NO (or failed verification),
2 usage/parse error, 3 indeterminate or internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import gen
from .branch import FALLBACK, STRICT, BranchConfig, DiameterError, solve, solve_parallel
from .fileio import (
    ParseError,
    build_report,
    dump_report,
    emit_instance,
    emit_report,
    parse_certificate,
    parse_instance,
)
from .instance import Instance, coloring_violation
from .lemmalab import make_context, monte_carlo_lemma4
from .oracle import Indeterminate, brute_force

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_instance(path: str) -> Instance:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_instance(text)


def _write(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text)


def _config(args) -> BranchConfig:
    return BranchConfig(
        epsilon=args.epsilon,
        r4_cutoff=args.r4_cutoff,
        threshold_scale=args.threshold_scale,
        b5_t_size_scale=args.b5_t_scale,
        b5_s_size_scale=args.b5_s_scale,
        diameter_policy=args.diameter_policy,
        rng_seed=args.seed,
    )


def _profile(text: str):
    if text == "full":
        return gen.FULL_LISTS
    if text == "mixed":
        return gen.MIXED_LISTS
    try:
        parts = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad list profile {text!r}") from None
    if len(parts) != 3:
        raise UsageError("list profile needs three probabilities p1,p2,p3")
    return parts


def cmd_solve(args, out) -> int:
    inst = _read_instance(args.instance)
    cfg = _config(args)
    try:
        if args.jobs > 1:
            res = solve_parallel(inst, cfg, args.jobs)
        else:
            res = solve(inst, cfg)
    except DiameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    extra = {"diameter": res.diameter if res.diameter != math.inf else "infinite"}
    if args.timings:
        extra["timings"] = {"wall_time": res.stats.wall_time}
    if args.verify_certificate and res.coloring is not None:
        problem = coloring_violation(inst, res.coloring)
        extra["certificate_check"] = "pass" if problem is None else f"fail: {problem}"
        if problem is not None:
            print(f"error: certificate check failed: {problem}", file=sys.stderr)
            return EXIT_INTERNAL
    report = build_report(res.answer, inst, res.coloring, res.stats.as_dict(args.timings), cfg.as_dict(), extra)
    _write(args.stats_out, dump_report(report))
    out.write(emit_report(report, inst, res.coloring))
    if args.verify_certificate and res.coloring is not None:
        out.write("c certificate verified\n")
    return EXIT_YES if res.feasible else EXIT_NO


def cmd_oracle(args, out) -> int:
    inst = _read_instance(args.instance)
    try:
        res = brute_force(inst, args.budget)
    except Indeterminate as exc:
        out.write("s INDETERMINATE\n")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    answer = "YES" if res.feasible else "NO"
    report = build_report(answer, inst, res.certificate, None, None, {"nodes_explored": res.nodes_explored})
    _write(args.stats_out, dump_report(report))
    out.write(emit_report(report, inst, res.certificate))
    out.write(f"c nodes_explored {res.nodes_explored}\n")
    return EXIT_YES if res.feasible else EXIT_NO


def _generate_one(args, seed: int) -> Instance:
    if args.family == "random":
        g = gen.gen_diameter3(args.n, seed)
        return gen.gen_lists(g, _profile(args.profile), seed)
    if args.family == "planted":
        pg = gen.gen_planted_3col_diam3(args.n, seed)
        return gen.planted_lists(pg.graph, pg.coloring, _profile(args.profile), seed)
    if args.family == "gadget":
        return gen.gen_rule_gadget(args.rule, {"size": args.size}, seed)
    if args.family == "magic":
        pg = gen.gen_magic_precond(args.n, args.epsilon, seed)
        return Instance(pg.graph)
    raise UsageError(f"unknown family {args.family}")


def cmd_gen(args, out) -> int:
    for k in range(args.count):
        seed = args.seed + k
        inst = _generate_one(args, seed)
        text = emit_instance(inst, [f"family {args.family} n {inst.graph.n} seed {seed}"])
        if args.out_dir:
            d = Path(args.out_dir)
            d.mkdir(parents=True, exist_ok=True)
            (d / f"{args.family}_n{inst.graph.n}_s{seed}.l3c").write_text(text)
        else:
            out.write(text)
    return EXIT_YES


def cmd_verify(args, out) -> int:
    inst = _read_instance(args.instance)
    answer, col = parse_certificate(Path(args.certificate).read_text())
    if answer == "NO":
        out.write("c certificate claims NO; nothing to verify\n")
        return EXIT_NO
    problem = coloring_violation(inst, col)
    if problem is None:
        out.write("s VALID\n")
        return EXIT_YES
    out.write(f"s INVALID\nc {problem}\n")
    return EXIT_NO


def run_lemma_lab(mus: Sequence[int], trials: int, graphs: int, epsilon: float, seed: int) -> dict:
    rows = []
    for mu in mus:
        for k in range(graphs):
            pg = gen.gen_magic_precond(mu, epsilon, seed + 1000 * mu + k)
            ctx = make_context(pg.graph, epsilon, pg.coloring)
            rng = random.Random(f"{seed}:{mu}:{k}")
            rep = monte_carlo_lemma4(ctx, trials, rng).as_dict()
            rep["graph"] = k
            rows.append(rep)
    per_mu = {}
    for mu in mus:
        sub = [r for r in rows if r["mu"] == mu]
        per_mu[str(mu)] = {
            "dichotomy_rate": sum(r["dichotomy_rate"] for r in sub) / len(sub),
            "outcome2_rate": sum(r["outcome2_rate"] for r in sub) / len(sub),
            "small_witness_rate": sum(r["small_witness_rate"] for r in sub) / len(sub),
            "structural_violations": sum(r["structural_violations"] for r in sub),
        }
    rates = [per_mu[str(mu)]["dichotomy_rate"] for mu in mus]
    return {
        "schema": "l3col.lemma-lab/1",
        "epsilon": epsilon,
        "trials_per_graph": trials,
        "graphs_per_mu": graphs,
        "runs": rows,
        "per_mu": per_mu,
        "dichotomy_non_decreasing": all(a <= b + 1e-12 for a, b in zip(rates, rates[1:])),
        "structural_violations": sum(r["structural_violations"] for r in rows),
    }


def cmd_lemma_lab(args, out) -> int:
    mus = [int(x) for x in args.mu.split(",")]
    report = run_lemma_lab(mus, args.trials, args.graphs, args.epsilon, args.seed)
    _write(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    out.write("mu\tgraph\tmean_S\texpected_S\tsmall_S\toutcome2\tdichotomy\tstructural\n")
    for r in report["runs"]:
        out.write(f"{r['mu']}\t{r['graph']}\t{r['mean_S']:.3f}\t{r['expected_S']:.3f}\t{r['small_witness_rate']:.3f}\t"
                  f"{r['outcome2_rate']:.3f}\t{r['dichotomy_rate']:.3f}\t{r['structural_violations']}\n")
    return EXIT_YES if report["structural_violations"] == 0 else EXIT_INTERNAL


def run_bench(sizes: Sequence[int], seeds: int, family: str, cfg: BranchConfig, profile=gen.FULL_LISTS) -> dict:
    rows = []
    for n in sizes:
        for s in range(seeds):
            if family == "planted":
                pg = gen.gen_planted_3col_diam3(n, s)
                inst = gen.planted_lists(pg.graph, pg.coloring, profile, s)
            else:
                inst = gen.gen_lists(gen.gen_diameter3(n, s), profile, s)
            res = solve(inst, cfg)
            st = res.stats
            rows.append({
                "n": n, "seed": s, "m": inst.graph.m, "answer": res.answer,
                "instances": st.instances, "r4_nodes": st.r4_nodes, "total_nodes": st.total_nodes,
                "max_depth": st.max_depth, "fallback_free": st.fallback_enumerations == 0,
                "invariant_violations": st.invariant_violations,
            })
    means = {}
    for n in sizes:
        sub = [r["total_nodes"] for r in rows if r["n"] == n]
        means[n] = sum(sub) / len(sub)
    xs = list(sizes)
    ys = [math.log(max(means[n], 1.0)) for n in xs]
    if len(xs) > 1:
        mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
        slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    else:
        slope = 0.0
    ref = math.log(3) / 4
    return {
        "schema": "l3col.bench/1",
        "family": family,
        "config": cfg.as_dict(),
        "rows": rows,
        "mean_total_nodes": {str(n): means[n] for n in sizes},
        "reference_3_pow_n_over_4": {str(n): 3 ** (n / 4) for n in sizes},
        "log_slope": slope,
        "reference_log_slope": ref,
        "below_reference": all(means[n] < 3 ** (n / 4) for n in sizes) and slope < ref,
        "all_fallback_free": all(r["fallback_free"] for r in rows),
    }


def cmd_bench(args, out) -> int:
    sizes = [int(x) for x in args.sizes.split(",")]
    report = run_bench(sizes, args.seeds, args.family, _config(args), _profile(args.profile))
    _write(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    out.write("n\tseed\tm\tanswer\tinstances\tr4_nodes\ttotal_nodes\tmax_depth\n")
    for r in report["rows"]:
        out.write(f"{r['n']}\t{r['seed']}\t{r['m']}\t{r['answer']}\t{r['instances']}\t{r['r4_nodes']}\t"
                  f"{r['total_nodes']}\t{r['max_depth']}\n")
    out.write(f"c log_slope {report['log_slope']:.4f} reference {report['reference_log_slope']:.4f} "
              f"below_reference {report['below_reference']}\n")
    return EXIT_YES


def _solver_flags(p):
    p.add_argument("--epsilon", type=float, default=0.02)
    p.add_argument("--r4-cutoff", type=int, default=12)
    p.add_argument("--threshold-scale", type=float, default=1.0)
    p.add_argument("--b5-t-scale", type=float, default=0.1)
    p.add_argument("--b5-s-scale", type=float, default=1.0)
    p.add_argument("--diameter-policy", choices=(STRICT, FALLBACK), default=STRICT)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="l3col", description="LIST-3-COLOURING on graphs of diameter <= 3")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="run the branch-and-reduce solver")
    p.add_argument("instance")
    _solver_flags(p)
    p.add_argument("--stats-out", help="write the JSON report here")
    p.add_argument("--verify-certificate", action="store_true")
    p.add_argument("--timings", action="store_true", help="include wall time (report is then not reproducible)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force answer")
    p.add_argument("instance")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--stats-out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate instances")
    p.add_argument("--family", choices=("random", "planted", "gadget", "magic"), default="random")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--profile", default="full")
    p.add_argument("--rule", choices=("B1", "B2", "B3", "B4", "B5"), default="B1")
    p.add_argument("--size", type=int, default=4)
    p.add_argument("--epsilon", type=float, default=0.02)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("lemma-lab", help="Monte-Carlo checks of the B5 structural lemma")
    p.add_argument("--mu", default="30,60,90")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--graphs", type=int, default=4)
    p.add_argument("--epsilon", type=float, default=0.02)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lemma_lab)

    p = sub.add_parser("bench", help="node counts over generated families")
    p.add_argument("--sizes", default="20,30,40,60,80")
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--family", choices=("planted", "random"), default="planted")
    p.add_argument("--profile", default="full")
    _solver_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check a certificate file against an instance")
    p.add_argument("instance")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
