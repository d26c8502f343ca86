"""Tests for the closed-form pricing equilibrium and its grid oracle."""

import math

import numpy as np
import pytest

from spadsim.core import fork_rng
from spadsim.economics import EconParams, PriceVector, SubscriberGroup
from spadsim.stackelberg import (EMPTY, HIGH_PAYMENT, INTERIOR, GameInstance,
                                 best_response_qocs, optimal_price,
                                 solve_brute_force, solve_se)


def worked_instance():
    econ = EconParams(raw_cost_param=0.4, result_cost_param=0.4)
    group = SubscriberGroup("c", {"a", "b"}, {"x", "y"})
    return GameInstance(group, econ, 0.75, 0.75, 1.0, 0.8)


def random_instance(rng):
    j_raw = int(rng.integers(1, 7))
    j_result = int(rng.integers(1, 7))
    group = SubscriberGroup("c",
                            {f"r{i}" for i in range(j_raw)},
                            {f"s{i}" for i in range(j_result)})
    econ = EconParams(
        satisfaction_coeff=float(rng.uniform(25.0, 45.0)),
        raw_cost_param=float(rng.uniform(0.4, 2.0)),
        result_cost_param=float(rng.uniform(0.4, 2.0)))
    return GameInstance(group, econ,
                        float(rng.uniform(0.3, 1.0)),
                        float(rng.uniform(0.3, 1.0)),
                        float(rng.uniform(0.05, 1.0)),
                        float(rng.uniform(0.2, 1.0)))


def leader_value(inst, u, p):
    """Group payoff at price p with the publisher best-responding."""
    j, theta, omega, kappa = inst.part(u)
    pair = PriceVector(p, p)
    q = best_response_qocs(pair, inst).as_tuple()[u]
    market = j * inst.econ.satisfaction_coeff * inst.popularity * inst.reputation
    return market * math.log1p(kappa * q) - j * theta * p * q


def test_instance_validation():
    econ = EconParams()
    with pytest.raises(ValueError, match="at least one subscriber"):
        GameInstance(SubscriberGroup("c"), econ, 0.5, 0.5, 0.5, 0.5)
    group = SubscriberGroup("c", {"a"})
    with pytest.raises(ValueError, match="popularity"):
        GameInstance(group, econ, 0.5, 0.5, 0.0, 0.5)
    with pytest.raises(ValueError, match="reputation"):
        GameInstance(group, econ, 0.5, 0.5, 0.5, 1.5)
    with pytest.raises(ValueError, match="sensing_capacity"):
        GameInstance(group, econ, 1.2, 0.5, 0.5, 0.5)


def test_worked_point_is_exact():
    inst = worked_instance()
    j, theta, omega, kappa = inst.part(0)
    assert (j, theta, omega, kappa) == (2, 0.75, 0.4, 0.75)
    # hand check: 2 * 28 * 1 * 0.8 - 4 * 0.4 * 1.75 = 44.8 - 2.8 = 42
    market = j * inst.econ.satisfaction_coeff * inst.popularity * inst.reputation
    psi = market - 4.0 * omega * (kappa + 1.0)
    assert psi == pytest.approx(42.0, abs=1e-12)
    assert psi >= 0.0
    eq = solve_se(inst)
    assert eq.price.as_tuple() == (0.4, 0.4)
    assert eq.qocs.as_tuple() == (1.0, 1.0)
    assert eq.case_flags == (HIGH_PAYMENT, HIGH_PAYMENT)


def test_best_response_below_threshold():
    inst = worked_instance()
    br = best_response_qocs(PriceVector(0.2, 0.2), inst)
    # 2 * 0.75 * 0.2 / (2 * 0.4 * 0.75) = 0.3 / 0.6
    assert br.as_tuple() == (0.5, 0.5)
    at = best_response_qocs(PriceVector(0.4, 0.4), inst)
    assert at.as_tuple() == (1.0, 1.0)
    above = best_response_qocs(PriceVector(3.0, 3.0), inst)
    assert above.as_tuple() == (1.0, 1.0)


def test_best_response_validates_price():
    inst = worked_instance()
    with pytest.raises(ValueError):
        best_response_qocs(PriceVector(-0.1, 0.2), inst)
    with pytest.raises(ValueError):
        best_response_qocs(PriceVector(0.2, 9.0), inst)


def test_branch_continuity_at_psi_zero():
    # J = 1, theta = 1, omega = 1, kappa = 1 puts the boundary at
    # satisfaction_coeff = 8 with every float exact, so a +/- 4e-12
    # nudge of the coefficient moves Psi by +/- 4e-12.
    def make(alpha):
        econ = EconParams(satisfaction_coeff=alpha, price_adjust=(1.0, 1.0),
                          raw_cost_param=1.0, result_cost_param=1.0)
        return GameInstance(SubscriberGroup("c", {"a"}, {"b"}), econ,
                            1.0, 1.0, 1.0, 1.0)

    high = solve_se(make(8.0))
    low = solve_se(make(8.0 - 4e-12))
    assert high.case_flags[0] == HIGH_PAYMENT
    assert low.case_flags[0] == INTERIOR
    assert high.price.raw_price == pytest.approx(2.0, abs=0)
    assert abs(high.price.raw_price - low.price.raw_price) < 1e-12
    assert abs(high.qocs.raw_quality - low.qocs.raw_quality) < 1e-12


def test_empty_part():
    inst = GameInstance(SubscriberGroup("c", {"a"}), EconParams(),
                        0.8, 0.8, 0.5, 0.7)
    eq = solve_se(inst)
    assert eq.case_flags[1] == EMPTY
    assert eq.price.result_price == 0.0
    assert eq.qocs.result_quality == 0.0
    assert eq.case_flags[0] != EMPTY
    brute = solve_brute_force(inst, grid_n=200)
    assert brute.case_flags[1] == EMPTY


def test_degenerate_capacity_raises():
    inst = GameInstance(SubscriberGroup("c", {"a"}, {"b"}), EconParams(),
                        0.0, 0.8, 0.5, 0.7)
    with pytest.raises(ValueError, match="degenerate"):
        solve_se(inst)
    with pytest.raises(ValueError, match="degenerate"):
        best_response_qocs(PriceVector(0.1, 0.1), inst)


def test_price_cap_clamps_high_branch():
    econ = EconParams(satisfaction_coeff=100.0, price_adjust=(0.5, 0.5),
                      raw_cost_param=10.0, result_cost_param=10.0)
    inst = GameInstance(SubscriberGroup("c", {"a"}, {"b"}), econ,
                        1.0, 1.0, 1.0, 1.0)
    eq = solve_se(inst)
    assert eq.price.as_tuple() == (5.0, 5.0)
    # q follows the best response at the capped price: 0.5*5 / (2*10)
    assert eq.qocs.raw_quality == pytest.approx(0.125)
    composed = best_response_qocs(eq.price, inst)
    assert eq.qocs.as_tuple() == pytest.approx(composed.as_tuple())


def test_optimal_price_matches_solve_se():
    rng = fork_rng(11, "price-match")
    for _ in range(50):
        inst = random_instance(rng)
        assert optimal_price(inst).as_tuple() == solve_se(inst).price.as_tuple()


def test_equilibrium_composes_with_best_response():
    rng = fork_rng(11, "compose")
    for _ in range(200):
        inst = random_instance(rng)
        eq = solve_se(inst)
        composed = best_response_qocs(eq.price, inst)
        for u in (0, 1):
            assert abs(eq.qocs.as_tuple()[u] - composed.as_tuple()[u]) <= 1e-12


def test_no_profitable_leader_deviation():
    rng = fork_rng(11, "deviation")
    for _ in range(40):
        inst = random_instance(rng)
        eq = solve_se(inst)
        for u in (0, 1):
            star = leader_value(inst, u, eq.price.as_tuple()[u])
            for p in np.linspace(0.0, inst.econ.price_cap, 201):
                assert star >= leader_value(inst, u, float(p)) - 1e-9


def test_comparative_statics_in_cost():
    """Costlier content raises the payment and lowers the served QoCS."""
    group = SubscriberGroup("c", {"a", "b"}, {"x", "y"})
    prev_p, prev_q = -1.0, 2.0
    for eps in np.linspace(0.4, 2.0, 17):
        econ = EconParams(raw_cost_param=float(eps), result_cost_param=0.4)
        inst = GameInstance(group, econ, 0.75, 0.75, 1.0, 0.8)
        eq = solve_se(inst)
        assert eq.price.raw_price >= prev_p - 1e-12
        assert eq.qocs.raw_quality <= prev_q + 1e-12
        prev_p, prev_q = eq.price.raw_price, eq.qocs.raw_quality


def test_leader_surface_concave_on_interior_segment():
    rng = fork_rng(11, "concave")
    checked = 0
    while checked < 1000:
        inst = random_instance(rng)
        u = int(rng.integers(0, 2))
        j, theta, omega, kappa = inst.part(u)
        threshold = 2.0 * kappa / (j * theta) * omega
        hi = min(threshold, inst.econ.price_cap)
        h = hi / 10.0
        p = float(rng.uniform(h, hi - h))
        second = (leader_value(inst, u, p - h) + leader_value(inst, u, p + h)
                  - 2.0 * leader_value(inst, u, p))
        assert second <= 1e-9
        checked += 1


def test_brute_force_agrees_on_worked_point():
    inst = worked_instance()
    eq = solve_se(inst)
    brute = solve_brute_force(inst, grid_n=1000)
    cell_p = inst.econ.price_cap / 1000
    for u in (0, 1):
        assert abs(eq.price.as_tuple()[u] - brute.price.as_tuple()[u]) <= 2 * cell_p
        assert abs(eq.qocs.as_tuple()[u] - brute.qocs.as_tuple()[u]) <= 2 / 1000


def test_brute_force_rejects_coarse_grid():
    with pytest.raises(ValueError):
        solve_brute_force(worked_instance(), grid_n=99)
