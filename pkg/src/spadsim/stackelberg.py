"""Closed-form Stackelberg equilibrium of the pricing game.

Subscriber groups lead with per-part payments p, the publisher follows
with per-part QoCS q. Parts decouple, so each side reduces to two scalar
problems. With J subscribers, price sensitivity theta, cost xi * eps,
and capacity kappa (sensing for the raw part, processing for the result
part), the follower's best response is

    q(p) = 1                      if p >= 2 xi eps kappa / (J theta)
         = J theta p / (2 xi eps kappa)   otherwise

and the leader's optimum splits on Psi = J alpha f R - 4 xi eps (kappa + 1):
Psi >= 0 gives the high-payment price 2 xi eps kappa / (J theta) with
q = 1; Psi < 0 gives the interior pair driven by
Upsilon = (xi eps)^2 + J alpha f R xi eps kappa. Prices clamp to
[0, price_cap], in which case q follows the clamped price.

The grid oracle solve_brute_force searches the same utilities without
using any of the closed forms; terms constant in (p, q), such as delay,
energy, and listing fees, shift neither argmax and are omitted from both
surfaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .content import QoCSVector
from .economics import EconParams, PriceVector, SubscriberGroup

HIGH_PAYMENT = "HIGH_PAYMENT"
INTERIOR = "INTERIOR"
EMPTY = "EMPTY"

_COMPOSE_TOL = 1e-12


@dataclass
class GameInstance:
    """One content's pricing game between its group and its publisher."""

    group: SubscriberGroup
    econ: EconParams
    sensing_capacity: float
    processing_capacity: float
    popularity: float
    reputation: float

    def __post_init__(self):
        if self.group.size == 0:
            raise ValueError("game requires at least one subscriber")
        for name in ("sensing_capacity", "processing_capacity"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if not 0.0 < self.popularity <= 1.0:
            raise ValueError("popularity must lie in (0, 1]")
        if not 0.0 <= self.reputation <= 1.0:
            raise ValueError("reputation must lie in [0, 1]")

    def part(self, u: int) -> Tuple[int, float, float, float]:
        """(J, theta, xi*eps, kappa) of part u in {0, 1}."""
        j = self.group.j_raw if u == 0 else self.group.j_result
        theta = self.econ.price_adjust[u]
        omega = self.econ.cost_adjust[u] * self.econ.cost_param(u)
        kappa = self.sensing_capacity if u == 0 else self.processing_capacity
        return j, theta, omega, kappa


@dataclass
class Equilibrium:
    price: PriceVector
    qocs: QoCSVector
    case_flags: Tuple[str, str]


def _check_part(j: int, theta: float, omega: float, kappa: float) -> None:
    if j > 0 and kappa == 0.0:
        raise ValueError("degenerate part: subscribers present but capacity is 0")
    if j > 0 and theta <= 0:
        raise ValueError("price_adjust must be positive for a served part")
    if omega <= 0:
        raise ValueError("cost parameters must be positive")


def best_response_qocs(price: PriceVector, inst: GameInstance) -> QoCSVector:
    """Publisher's optimal QoCS for a given payment vector."""
    price.validate(inst.econ.price_cap)
    out = []
    for u, p in enumerate(price.as_tuple()):
        j, theta, omega, kappa = inst.part(u)
        if j == 0:
            out.append(0.0)
            continue
        _check_part(j, theta, omega, kappa)
        # ratio-first association; must match the high-payment price in
        # _part_price so the equilibrium price sits exactly on the threshold
        threshold = 2.0 * kappa / (j * theta) * omega
        if p >= threshold:
            out.append(1.0)
        else:
            out.append(j * theta * p / (2.0 * omega * kappa))
    return QoCSVector(out[0], out[1])


def _part_price(inst: GameInstance, u: int) -> Tuple[float, str]:
    j, theta, omega, kappa = inst.part(u)
    if j == 0:
        return 0.0, EMPTY
    _check_part(j, theta, omega, kappa)
    market = j * inst.econ.satisfaction_coeff * inst.popularity * inst.reputation
    psi = market - 4.0 * omega * (kappa + 1.0)
    if psi >= 0.0:
        p = 2.0 * kappa / (j * theta) * omega
        flag = HIGH_PAYMENT
    else:
        upsilon = omega * omega + market * omega * kappa
        p = (math.sqrt(upsilon) - omega) / (j * theta)
        flag = INTERIOR
    return min(max(p, 0.0), inst.econ.price_cap), flag


def optimal_price(inst: GameInstance) -> PriceVector:
    """Leader-optimal payments, clamped to [0, price_cap]."""
    p1, _ = _part_price(inst, 0)
    p2, _ = _part_price(inst, 1)
    return PriceVector(p1, p2)


def solve_se(inst: GameInstance) -> Equilibrium:
    """Stackelberg equilibrium by backward induction, in closed form.

    The closed-form QoCS is cross-checked against composing the leader
    price with the follower best response; disagreement beyond 1e-12
    signals a broken invariant and raises.
    """
    prices = []
    flags = []
    for u in (0, 1):
        p, flag = _part_price(inst, u)
        prices.append(p)
        flags.append(flag)
    price = PriceVector(prices[0], prices[1])
    composed = best_response_qocs(price, inst)

    closed = []
    for u in (0, 1):
        j, theta, omega, kappa = inst.part(u)
        if flags[u] == EMPTY:
            closed.append(0.0)
            continue
        market = j * inst.econ.satisfaction_coeff * inst.popularity * inst.reputation
        capped = prices[u] >= inst.econ.price_cap
        if flags[u] == HIGH_PAYMENT and not capped:
            closed.append(1.0)
        elif flags[u] == INTERIOR and not capped:
            upsilon = omega * omega + market * omega * kappa
            closed.append(min(1.0, (math.sqrt(upsilon) - omega) / (2.0 * omega * kappa)))
        else:
            # Cap binding: the interior form no longer applies, fall back
            # to the best response at the capped price.
            closed.append(composed.as_tuple()[u])
    for u in (0, 1):
        if abs(closed[u] - composed.as_tuple()[u]) > _COMPOSE_TOL:
            raise RuntimeError("closed-form QoCS disagrees with the best response "
                               f"composition on part {u}")
    return Equilibrium(price, QoCSVector(closed[0], closed[1]), (flags[0], flags[1]))


def _part_surfaces(inst: GameInstance, u: int, grid_n: int):
    """Leader value of each grid price via the follower's grid argmax."""
    j, theta, omega, kappa = inst.part(u)
    p_grid = np.linspace(0.0, inst.econ.price_cap, grid_n + 1)
    q_grid = np.linspace(0.0, 1.0, grid_n + 1)
    market = j * inst.econ.satisfaction_coeff * inst.popularity * inst.reputation
    # Publisher part payoff: revenue J theta p q minus cost omega kappa q^2.
    pub = (j * theta) * np.outer(p_grid, q_grid) - omega * kappa * q_grid ** 2
    q_idx = np.argmax(pub, axis=1)
    q_best = q_grid[q_idx]
    grp = market * np.log1p(kappa * q_best) - (j * theta) * p_grid * q_best
    return p_grid, q_grid, q_idx, grp


def solve_brute_force(inst: GameInstance, grid_n: int = 1000) -> Equilibrium:
    """Grid-search oracle for the equilibrium, independent of the theory.

    For each leader price on a uniform grid the follower's QoCS is found
    by 1-D maximization of the publisher payoff, then the leader picks
    the price with the best group payoff. Ties resolve to the lowest
    grid index.
    """
    if grid_n < 100:
        raise ValueError("grid_n must be at least 100")
    prices = []
    qocs = []
    flags = []
    for u in (0, 1):
        j, _, _, _ = inst.part(u)
        if j == 0:
            prices.append(0.0)
            qocs.append(0.0)
            flags.append(EMPTY)
            continue
        p_grid, q_grid, q_idx, grp = _part_surfaces(inst, u, grid_n)
        best = int(np.argmax(grp))
        prices.append(float(p_grid[best]))
        q_star = float(q_grid[q_idx[best]])
        qocs.append(q_star)
        flags.append(HIGH_PAYMENT if q_star >= 1.0 else INTERIOR)
    return Equilibrium(PriceVector(prices[0], prices[1]),
                       QoCSVector(qocs[0], qocs[1]), (flags[0], flags[1]))
