"""Command line front end.

Subcommands: run (one episode), compare (schemes side by side), hotboot
(pre-train learning tables), and solve-se (closed-form equilibrium of a
single pricing game). SPAD_LOG=debug raises log verbosity.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from typing import List, Optional

from .channel import ChannelParams
from .content import Content, PopularityParams, zipf_popularity
from .core import SCHEMES, ScenarioConfig, load_config, validate_config
from .economics import EconParams, SubscriberGroup
from .learning import (ActionGrid, DynamicGame, LearnParams, hotboot,
                       load_hotboot_cache, save_hotboot_cache)
from .sim import (compare_schemes, generate_scenario, run_episode,
                  scheme_config, summarize_comparison, write_comparison_csv,
                  write_episode_trace, write_metrics_csv,
                  write_reputation_series_csv)
from .stackelberg import GameInstance, solve_brute_force, solve_se

log = logging.getLogger("spadsim")

_PLOT_SCRIPT = """\
# Reads comparison.csv from this directory and plots the secure ratio
# per scheme. Requires matplotlib.
import csv
from collections import defaultdict

import matplotlib.pyplot as plt

means = {}
stds = {}
with open("comparison.csv", newline="") as fh:
    for row in csv.DictReader(fh):
        if row["metric"] == "secure_pubsub_ratio":
            means[row["scheme"]] = float(row["mean"])
            stds[row["scheme"]] = float(row["std"])

names = list(means)
plt.figure(figsize=(6, 4))
plt.bar(names, [means[n] for n in names],
        yerr=[stds[n] for n in names], capsize=4)
plt.ylabel("secure pub/sub ratio")
plt.ylim(0, 1.05)
plt.tight_layout()
plt.savefig("comparison.png", dpi=150)
print("wrote comparison.png")
"""


def _setup_logging() -> None:
    level = os.environ.get("SPAD_LOG", "warning").lower()
    numeric = {"debug": logging.DEBUG, "info": logging.INFO,
               "warning": logging.WARNING, "error": logging.ERROR}
    logging.basicConfig(level=numeric.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _load_cfg(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["rng_seed"] = args.seed
    if getattr(args, "scheme", None) is not None:
        overrides["scheme"] = args.scheme
    if getattr(args, "slots", None) is not None:
        overrides["num_time_slots"] = args.slots
    if overrides:
        cfg = replace(cfg, **overrides)
    problems = validate_config(cfg)
    if problems:
        raise ValueError("invalid config: " + "; ".join(problems))
    return cfg


def _cmd_run(args) -> int:
    cfg = _load_cfg(args)
    cache = load_hotboot_cache(args.cache) if args.cache else None
    world = generate_scenario(cfg)
    sch = scheme_config(cfg.scheme, cfg, world.role_catalog)
    log.info("running %s: %d vehicles, %d slots", sch.name,
             world.num_vehicles, cfg.num_time_slots)
    result = run_episode(world, sch, hotboot_cache=cache)
    os.makedirs(args.out, exist_ok=True)
    trace_path = os.path.join(args.out, "trace.csv")
    metrics_path = os.path.join(args.out, "metrics.csv")
    rep_path = os.path.join(args.out, "reputation.csv")
    write_episode_trace(result, trace_path)
    write_metrics_csv(result.metrics, metrics_path, sch.name)
    write_reputation_series_csv(result, rep_path)
    m = result.metrics
    print(f"scheme={sch.name} secure_ratio={m.secure_pubsub_ratio:.4f} "
          f"avg_qocs=({m.avg_qocs[0]:.4f},{m.avg_qocs[1]:.4f}) "
          f"convergence_slot={m.convergence_slot}")
    print(f"wrote {trace_path}, {metrics_path}, {rep_path}")
    return 0


def _cmd_compare(args) -> int:
    cfg = _load_cfg(args)
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    if not schemes:
        raise ValueError("no schemes given")
    for name in schemes:
        if name not in SCHEMES:
            raise ValueError(f"unknown scheme {name!r}")
    results = compare_schemes(cfg, schemes, reps=args.reps)
    rows = summarize_comparison(results)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "comparison.csv")
    write_comparison_csv(rows, csv_path)
    plot_path = os.path.join(args.out, "plot_comparison.py")
    with open(plot_path, "w", encoding="utf-8") as fh:
        fh.write(_PLOT_SCRIPT)
    for name in schemes:
        ratio = [r for r in rows
                 if r[0] == name and r[1] == "secure_pubsub_ratio"][0]
        print(f"{name}: secure_ratio = {ratio[2]:.4f} +/- {ratio[3]:.4f}")
    print(f"wrote {csv_path}, {plot_path}")
    return 0


def _desk_game(alpha: float) -> DynamicGame:
    """Small one-content game used by hotboot when no scenario is given."""
    group = SubscriberGroup("desk", {"s0"}, {"s1"})
    econ = EconParams(satisfaction_coeff=alpha)
    inst = GameInstance(group, econ, 0.8, 0.8,
                        zipf_popularity(1, PopularityParams()), 0.8)
    content = Content("desk", "desk-topic", "pub0", "camera", 5e5, 1e5, 1)
    return DynamicGame(inst, content, ChannelParams())


def _cmd_hotboot(args) -> int:
    x, y = args.grid
    grid = ActionGrid(payment_levels=x, qocs_levels=y)
    env = _desk_game(args.alpha)
    cache = hotboot(env, grid, LearnParams(), args.experiments, args.slots,
                    args.seed)
    save_hotboot_cache(cache, args.out)
    print(f"hotboot: {args.experiments} experiments x {args.slots} slots, "
          f"grid {x}x{y}, wrote {args.out}")
    return 0


def _cmd_solve_se(args) -> int:
    if args.j_raw <= 0 and args.j_result <= 0:
        raise ValueError("at least one part needs subscribers")
    raw_subs = {f"r{i}" for i in range(args.j_raw)}
    result_subs = {f"s{i}" for i in range(args.j_result)}
    group = SubscriberGroup("cli", raw_subs, result_subs)
    econ = EconParams(satisfaction_coeff=args.alpha,
                      raw_cost_param=args.eps_raw,
                      result_cost_param=args.eps_result)
    inst = GameInstance(group, econ, args.sensing, args.processing,
                        args.popularity, args.reputation)
    eq = solve_se(inst)
    print(f"p_raw={eq.price.raw_price:.6f} p_result={eq.price.result_price:.6f} "
          f"q_raw={eq.qocs.raw_quality:.6f} q_result={eq.qocs.result_quality:.6f} "
          f"flags={eq.case_flags[0]},{eq.case_flags[1]}")
    if args.verify:
        bf = solve_brute_force(inst, grid_n=args.grid)
        cell = inst.econ.price_cap / args.grid
        gap_p = max(abs(eq.price.raw_price - bf.price.raw_price),
                    abs(eq.price.result_price - bf.price.result_price))
        gap_q = max(abs(eq.qocs.raw_quality - bf.qocs.raw_quality),
                    abs(eq.qocs.result_quality - bf.qocs.result_quality))
        print(f"brute_force p=({bf.price.raw_price:.6f},"
              f"{bf.price.result_price:.6f}) q=({bf.qocs.raw_quality:.6f},"
              f"{bf.qocs.result_quality:.6f}) "
              f"gap_p={gap_p / cell:.3f} cells gap_q={gap_q * args.grid:.3f} cells")
    return 0


def _grid_pair(raw: str):
    parts = raw.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("grid expects X,Y")
    return int(parts[0]), int(parts[1])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spadsim",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one episode")
    p_run.add_argument("--config", help="scenario config file")
    p_run.add_argument("--seed", type=int, help="override rng_seed")
    p_run.add_argument("--scheme", choices=SCHEMES, help="override scheme")
    p_run.add_argument("--slots", type=int, help="override num_time_slots")
    p_run.add_argument("--cache", help="hotboot cache for learning schemes")
    p_run.add_argument("--out", default=".", help="output directory")
    p_run.set_defaults(func=_cmd_run)

    p_cmp = sub.add_parser("compare", help="compare schemes on paired seeds")
    p_cmp.add_argument("--config", help="scenario config file")
    p_cmp.add_argument("--seed", type=int, help="override rng_seed")
    p_cmp.add_argument("--slots", type=int, help="override num_time_slots")
    p_cmp.add_argument("--schemes", default="SPAD,BIT,SWR",
                       help="comma separated scheme names")
    p_cmp.add_argument("--reps", type=int, default=3,
                       help="repetitions per scheme")
    p_cmp.add_argument("--out", default=".", help="output directory")
    p_cmp.set_defaults(func=_cmd_compare)

    p_hot = sub.add_parser("hotboot", help="pre-train learning tables")
    p_hot.add_argument("--out", required=True, help="cache file to write")
    p_hot.add_argument("--experiments", type=int, default=5)
    p_hot.add_argument("--slots", type=int, default=1000,
                       help="slots per experiment")
    p_hot.add_argument("--seed", type=int, default=0)
    p_hot.add_argument("--alpha", type=float, default=42.0,
                       help="satisfaction coefficient of the desk game")
    p_hot.add_argument("--grid", type=_grid_pair, default=(16, 10),
                       help="payment,qocs grid levels")
    p_hot.set_defaults(func=_cmd_hotboot)

    p_se = sub.add_parser("solve-se", help="closed-form pricing equilibrium")
    p_se.add_argument("--alpha", type=float, default=28.0)
    p_se.add_argument("--popularity", type=float, default=1.0)
    p_se.add_argument("--reputation", type=float, default=0.8)
    p_se.add_argument("--j-raw", type=int, default=2)
    p_se.add_argument("--j-result", type=int, default=0)
    p_se.add_argument("--sensing", type=float, default=0.75)
    p_se.add_argument("--processing", type=float, default=0.75)
    p_se.add_argument("--eps-raw", type=float, default=0.4)
    p_se.add_argument("--eps-result", type=float, default=0.4)
    p_se.add_argument("--verify", action="store_true",
                      help="cross-check against the grid search")
    p_se.add_argument("--grid", type=int, default=1000,
                      help="grid points per axis for --verify")
    p_se.set_defaults(func=_cmd_solve_se)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
