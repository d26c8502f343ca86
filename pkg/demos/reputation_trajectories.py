"""Track how reputation separates honest and dishonest vehicles.

One generated road scenario is replayed under two trust models: the
hybrid one (social roles, time fading, punishment) and the plain beta
mean baseline. Averaged per behavior profile, legitimate vehicles
climb, speculative vehicles drift down as occasional cheating is
caught, and malicious vehicles collapse. The punishment factor makes
the hybrid model push misbehaving vehicles down faster and keep them
lower than the baseline does.

Gating is disabled for the comparison so both models score the same
delivery stream instead of censoring it.

Writes reputation_trajectories.png into the output directory.
"""

import argparse
import os
from dataclasses import replace

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from spadsim import (BEHAVIOR_PROFILES, ScenarioConfig, generate_scenario,
                     run_episode, scheme_config)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--vehicles", type=int, default=120)
    parser.add_argument("--slots", type=int, default=800)
    args = parser.parse_args()

    cfg = ScenarioConfig(num_road_segments=30, num_vehicles=args.vehicles,
                         num_time_slots=args.slots, rng_seed=11,
                         subscribe_prob=0.05)
    world = generate_scenario(cfg)
    runs = {}
    for name in ("SPAD", "BIT"):
        sch = replace(scheme_config(name, cfg, world.role_catalog),
                      gating=False)
        runs[name] = run_episode(world, sch, collect_trace=False)
        print(f"{name}: {runs[name].deliveries} deliveries, "
              f"{runs[name].honest_deliveries} honest")

    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6), sharey=True)
    for ax, name in zip(axes, ("SPAD", "BIT")):
        series = runs[name].reputation_series
        for profile in BEHAVIOR_PROFILES:
            ax.plot(series[profile], label=profile)
        ax.set_title(name)
        ax.set_xlabel("time slot")
        ax.set_ylim(0, 1)
    axes[0].set_ylabel("average reputation")
    axes[0].legend()
    fig.tight_layout()
    path = os.path.join(args.out, "reputation_trajectories.png")
    fig.savefig(path, dpi=150)
    print(f"wrote {path}")

    for name in ("SPAD", "BIT"):
        series = runs[name].reputation_series
        ends = ", ".join(f"{p} {series[p][-1]:.3f}"
                         for p in BEHAVIOR_PROFILES)
        print(f"{name} final averages: {ends}")


if __name__ == "__main__":
    main()
