"""Walk through the one-shot pricing game for a single content.

A subscriber group posts a per-unit payment for each content part and
the publisher answers with a quality of content service. The closed
form solves this in microseconds; a grid search over both strategy
spaces confirms the point. The script then sweeps the publisher's cost
parameter to show the standard market response: payments rise to keep
the publisher serving while the offered quality falls, and a popular,
well-reputed content sustains higher payment and quality everywhere.

Writes static_equilibrium.png next to the chosen output directory.
"""

import argparse
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from spadsim import (EconParams, GameInstance, PopularityParams,
                     SubscriberGroup, solve_brute_force, solve_se,
                     zipf_popularity)


def worked_point() -> GameInstance:
    group = SubscriberGroup("c", {"s0", "s1"}, set())
    econ = EconParams(satisfaction_coeff=28.0, raw_cost_param=0.4,
                      result_cost_param=0.4)
    return GameInstance(group, econ, 0.75, 0.75, 1.0, 0.8)


def sweep_instance(eps: float, rank: int, rep: float) -> GameInstance:
    group = SubscriberGroup("c", {"s0", "s1"}, set())
    econ = EconParams(satisfaction_coeff=28.0, raw_cost_param=eps,
                      result_cost_param=eps)
    return GameInstance(group, econ, 0.75, 0.75,
                        zipf_popularity(rank, PopularityParams()), rep)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=".", help="output directory")
    args = parser.parse_args()

    inst = worked_point()
    eq = solve_se(inst)
    bf = solve_brute_force(inst, grid_n=1000)
    print("worked point: two raw subscribers, satisfaction 28, cost 0.4")
    print(f"  closed form: p* = {eq.price.raw_price:.6f}, "
          f"q* = {eq.qocs.raw_quality:.6f} [{eq.case_flags[0]}]")
    print(f"  grid search: p  = {bf.price.raw_price:.6f}, "
          f"q  = {bf.qocs.raw_quality:.6f}")

    eps_grid = np.linspace(0.4, 2.0, 33)
    curves = {}
    for label, rank, rep in (("rank 1, R = 0.8", 1, 0.8),
                             ("rank 3, R = 0.6", 3, 0.6)):
        prices = []
        quals = []
        for eps in eps_grid:
            eq = solve_se(sweep_instance(float(eps), rank, rep))
            prices.append(eq.price.raw_price)
            quals.append(eq.qocs.raw_quality)
        curves[label] = (prices, quals)
        print(f"{label}: payment {prices[0]:.3f} -> {prices[-1]:.3f}, "
              f"qocs {quals[0]:.3f} -> {quals[-1]:.3f}")

    fig, (ax_p, ax_q) = plt.subplots(1, 2, figsize=(9, 3.6))
    for label, (prices, quals) in curves.items():
        ax_p.plot(eps_grid, prices, marker=".", label=label)
        ax_q.plot(eps_grid, quals, marker=".", label=label)
    ax_p.set_xlabel("publisher cost parameter")
    ax_p.set_ylabel("equilibrium payment")
    ax_q.set_xlabel("publisher cost parameter")
    ax_q.set_ylabel("equilibrium QoCS")
    ax_q.set_ylim(0, 1.05)
    ax_p.legend()
    fig.tight_layout()
    path = os.path.join(args.out, "static_equilibrium.png")
    fig.savefig(path, dpi=150)
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
