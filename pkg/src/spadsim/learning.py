"""Two-tier tabular learning over the dynamic pricing game.

Tier 1 is the subscriber group picking a joint payment pair, tier 2 the
publisher picking a joint QoCS pair. Both run policy hill climbing with
mixed-strategy tables; states are the opponent's previous joint action.
Hotbooting pre-trains the tables on perturbed copies of the scenario so
the live run starts from experience instead of zeros.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .channel import ChannelParams
from .content import Content, QoCSVector
from .core import Cav, fork_rng
from .economics import EconParams, PriceVector, SubscriberGroup, group_utility, publisher_utility
from .stackelberg import GameInstance, best_response_qocs

CACHE_MAGIC = b"SPADHBC1"
CACHE_VERSION = 1


@dataclass
class ActionGrid:
    """Uniform action grids: payments over [0, price_cap], QoCS over [0, 1]."""

    payment_levels: int = 16
    qocs_levels: int = 10
    price_cap: float = 5.0

    def __post_init__(self):
        if self.payment_levels < 1 or self.qocs_levels < 1:
            raise ValueError("grid levels must be at least 1")
        if self.price_cap <= 0:
            raise ValueError("price_cap must be positive")
        self.payment_values = np.linspace(0.0, self.price_cap,
                                          self.payment_levels + 1)
        self.qocs_values = np.linspace(0.0, 1.0, self.qocs_levels + 1)

    @property
    def n_payment_actions(self) -> int:
        return (self.payment_levels + 1) ** 2

    @property
    def n_qocs_actions(self) -> int:
        return (self.qocs_levels + 1) ** 2

    def payment_pair(self, action: int) -> Tuple[float, float]:
        base = self.payment_levels + 1
        return (float(self.payment_values[action // base]),
                float(self.payment_values[action % base]))

    def qocs_pair(self, action: int) -> Tuple[float, float]:
        base = self.qocs_levels + 1
        return (float(self.qocs_values[action // base]),
                float(self.qocs_values[action % base]))

    def payment_state(self, p_pair: Tuple[float, float]) -> int:
        base = self.payment_levels + 1
        i = quantize(p_pair[0], self.payment_levels, self.price_cap)
        j = quantize(p_pair[1], self.payment_levels, self.price_cap)
        return i * base + j

    def qocs_state(self, q_pair: Tuple[float, float]) -> int:
        base = self.qocs_levels + 1
        i = quantize(q_pair[0], self.qocs_levels, 1.0)
        j = quantize(q_pair[1], self.qocs_levels, 1.0)
        return i * base + j


def quantize(value: float, levels: int, cap: float) -> int:
    """Nearest grid index for value on [0, cap]; ties round down."""
    if levels < 1 or cap <= 0:
        raise ValueError("levels must be >= 1 and cap positive")
    clamped = min(max(value, 0.0), cap)
    scaled = clamped / cap * levels
    idx = int(np.ceil(scaled - 0.5))
    return min(max(idx, 0), levels)


@dataclass
class LearnParams:
    """Learning rates per tier: psi step, chi discount, delta policy step,
    lam reward scale, and the exploration rate of the Q-learning baseline."""

    psi1: float = 0.7
    chi1: float = 0.7
    delta1: float = 0.01
    lam1: float = 1.0
    psi2: float = 0.7
    chi2: float = 0.7
    delta2: float = 0.01
    lam2: float = 1.0
    epsilon: float = 0.1

    def __post_init__(self):
        for name in ("psi1", "chi1", "psi2", "chi2"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.delta1 <= 0 or self.delta2 <= 0:
            raise ValueError("policy steps must be positive")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")


def sample_action(policy_row: np.ndarray, rng: np.random.Generator) -> int:
    """Draw an action index from one policy row."""
    if np.any(policy_row < 0) or abs(float(policy_row.sum()) - 1.0) > 1e-6:
        raise ValueError("policy row must be a probability vector")
    return int(rng.choice(len(policy_row), p=policy_row))


class _PhcTable:
    """Q-table, value table, and mixed policy of one learning tier."""

    def __init__(self, n_states: int, n_actions: int, psi: float, chi: float,
                 delta: float, lam: float):
        self.n_states = n_states
        self.n_actions = n_actions
        self.psi = psi
        self.chi = chi
        self.delta = delta
        self.lam = lam
        self.q_table = np.zeros((n_states, n_actions))
        self.value_table = np.zeros(n_states)
        self.policy = np.full((n_states, n_actions), 1.0 / n_actions)

    def load(self, q_table: np.ndarray, policy: np.ndarray) -> None:
        if q_table.shape != self.q_table.shape or policy.shape != self.policy.shape:
            raise ValueError("table shapes do not match the action grid")
        self.q_table = q_table.copy()
        self.policy = policy.copy()
        self.value_table = np.zeros(self.n_states)

    def update(self, state: int, action: int, reward: float, next_state: int) -> None:
        """One Bellman step followed by the hill-climbing policy step."""
        q = self.q_table
        target = self.lam * reward + self.chi * self.value_table[next_state]
        q[state, action] += self.psi * (target - q[state, action])
        self.value_table[next_state] = q[next_state].max()
        row = self.policy[state]
        greedy = int(np.argmax(q[state]))
        row -= self.delta / (self.n_actions - 1)
        row[greedy] += self.delta + self.delta / (self.n_actions - 1)
        np.clip(row, 0.0, 1.0, out=row)
        row /= row.sum()

    def sample(self, state: int, rng: np.random.Generator) -> int:
        return sample_action(self.policy[state], rng)

    def greedy(self, state: int) -> int:
        return int(np.argmax(self.q_table[state]))

    def epsilon_greedy(self, state: int, epsilon: float,
                       rng: np.random.Generator) -> int:
        if rng.random() < epsilon:
            return int(rng.integers(self.n_actions))
        return self.greedy(state)


class SubscriberLearner(_PhcTable):
    """Tier 1: states are previous QoCS pairs, actions are payment pairs."""

    def __init__(self, grid: ActionGrid, params: LearnParams):
        super().__init__(grid.n_qocs_actions, grid.n_payment_actions,
                         params.psi1, params.chi1, params.delta1, params.lam1)
        self.grid = grid


class PublisherLearner(_PhcTable):
    """Tier 2: states are previous payment pairs, actions are QoCS pairs."""

    def __init__(self, grid: ActionGrid, params: LearnParams):
        super().__init__(grid.n_payment_actions, grid.n_qocs_actions,
                         params.psi2, params.chi2, params.delta2, params.lam2)
        self.grid = grid


@dataclass
class HotbootCache:
    """Pre-trained tables carried from the preparation stage."""

    sub_q: np.ndarray
    sub_policy: np.ndarray
    pub_q: np.ndarray
    pub_policy: np.ndarray
    experiments_run: int
    payment_levels: int
    qocs_levels: int
    price_cap: float

    def matches(self, grid: ActionGrid) -> bool:
        return (self.payment_levels == grid.payment_levels
                and self.qocs_levels == grid.qocs_levels
                and abs(self.price_cap - grid.price_cap) < 1e-12)


def empty_cache(grid: ActionGrid) -> HotbootCache:
    """Zero tables and uniform policies; what W = 0 hotbooting returns."""
    na, nq = grid.n_payment_actions, grid.n_qocs_actions
    return HotbootCache(
        sub_q=np.zeros((nq, na)),
        sub_policy=np.full((nq, na), 1.0 / na),
        pub_q=np.zeros((na, nq)),
        pub_policy=np.full((na, nq), 1.0 / nq),
        experiments_run=0,
        payment_levels=grid.payment_levels,
        qocs_levels=grid.qocs_levels,
        price_cap=grid.price_cap,
    )


class DynamicGame:
    """Repeated pricing game for one content between one group and its
    publisher; rewards come from the market utilities."""

    def __init__(self, inst: GameInstance, content: Content,
                 chan: ChannelParams, distance_m: float = 50.0):
        self.inst = inst
        self.content = content
        self.chan = chan
        self.distance_m = distance_m
        self.publisher = Cav(
            id=content.publisher_id,
            role_index=0,
            behavior_profile="legitimate",
            sensing_capacity={content.sensor_type: inst.sensing_capacity},
            processing_capacity=inst.processing_capacity,
        )

    def group_reward(self, p_pair: Tuple[float, float],
                     q_pair: Tuple[float, float]) -> float:
        return group_utility(self.inst.group, QoCSVector(*q_pair),
                             PriceVector(*p_pair), self.content, self.publisher,
                             self.inst.popularity, self.inst.reputation,
                             self.chan, self.inst.econ)

    def publisher_reward(self, p_pair: Tuple[float, float],
                         q_pair: Tuple[float, float]) -> float:
        item = (self.inst.group, QoCSVector(*q_pair), PriceVector(*p_pair),
                self.content, self.distance_m)
        return publisher_utility([item], self.publisher, self.chan,
                                 self.inst.econ)

    def perturbed(self, rng: np.random.Generator) -> "DynamicGame":
        """Jittered copy used for hotbooting experiments."""
        def jitter(value, lo, hi):
            return float(np.clip(value * rng.uniform(0.9, 1.1), lo, hi))

        inst = self.inst
        econ = EconParams(
            satisfaction_coeff=jitter(inst.econ.satisfaction_coeff, 1.0, 1e6),
            price_adjust=inst.econ.price_adjust,
            delay_adjust=inst.econ.delay_adjust,
            cost_adjust=inst.econ.cost_adjust,
            raw_cost_param=jitter(inst.econ.raw_cost_param, 0.05, 1e6),
            result_cost_param=jitter(inst.econ.result_cost_param, 0.05, 1e6),
            listing_fee=inst.econ.listing_fee,
            price_cap=inst.econ.price_cap,
        )
        new_inst = GameInstance(
            group=inst.group,
            econ=econ,
            sensing_capacity=jitter(inst.sensing_capacity, 0.01, 1.0),
            processing_capacity=jitter(inst.processing_capacity, 0.01, 1.0),
            popularity=jitter(inst.popularity, 1e-6, 1.0),
            reputation=jitter(inst.reputation, 0.0, 1.0),
        )
        return DynamicGame(new_inst, self.content, self.chan, self.distance_m)


@dataclass
class TraceBlock:
    """Per-slot joint actions and utilities of one dynamic-game run.

    strategy_payment and strategy_qocs hold the mean action value each
    tier's current decision rule would play in expectation at the
    visited state: the policy-weighted mean for mixed strategies, the
    epsilon-smoothed greedy value for epsilon-greedy, the greedy value
    for greedy. They track strategy movement without sampling noise;
    the p/q arrays remain the realized draws.
    """

    content_id: str
    scheme: str
    p1: np.ndarray
    p2: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    u_group: np.ndarray
    u_publisher: np.ndarray
    strategy_payment: np.ndarray = None
    strategy_qocs: np.ndarray = None

    def rows(self) -> List[Tuple]:
        out = []
        for t in range(len(self.p1)):
            out.append((t, self.content_id, float(self.p1[t]), float(self.p2[t]),
                        float(self.q1[t]), float(self.q2[t]),
                        float(self.u_group[t]), float(self.u_publisher[t]),
                        self.scheme))
        return out


TRACE_HEADER = ("slot", "content_id", "p1", "p2", "q1", "q2",
                "u_group", "u_publisher", "scheme")


def write_trace_csv(rows: Sequence[Tuple], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        for row in rows:
            writer.writerow(row)


def _two_tier_run(env: DynamicGame, grid: ActionGrid, params: LearnParams,
                  sub: _PhcTable, pub: _PhcTable, T: int, mode: str,
                  rng_sub: np.random.Generator, rng_pub: np.random.Generator,
                  scheme: str) -> TraceBlock:
    """Shared engine of the PHC, Q-learning, and greedy variants.

    Each tier observes the opponent's previous joint action as its state,
    acts, and updates from the realized utility. mode selects the action
    rule; table updates are identical across modes.
    """
    p_prev = (0.0, 0.0)
    q_prev = (0.0, 0.0)
    p1 = np.zeros(T)
    p2 = np.zeros(T)
    q1 = np.zeros(T)
    q2 = np.zeros(T)
    ug = np.zeros(T)
    up = np.zeros(T)
    sp = np.zeros(T)
    sq = np.zeros(T)
    p_mean = np.array([sum(grid.payment_pair(i)) / 2.0
                       for i in range(grid.n_payment_actions)])
    q_mean = np.array([sum(grid.qocs_pair(i)) / 2.0
                       for i in range(grid.n_qocs_actions)])
    eps = params.epsilon
    for t in range(T):
        z = grid.qocs_state(q_prev)
        z_pub = grid.payment_state(p_prev)
        if mode == "phc":
            sp[t] = float(sub.policy[z] @ p_mean)
            sq[t] = float(pub.policy[z_pub] @ q_mean)
            a = sub.sample(z, rng_sub)
            b = pub.sample(z_pub, rng_pub)
        elif mode == "qlearn":
            sp[t] = (1.0 - eps) * p_mean[sub.greedy(z)] + eps * p_mean.mean()
            sq[t] = (1.0 - eps) * q_mean[pub.greedy(z_pub)] + eps * q_mean.mean()
            a = sub.epsilon_greedy(z, eps, rng_sub)
            b = pub.epsilon_greedy(z_pub, eps, rng_pub)
        elif mode == "greedy":
            sp[t] = p_mean[sub.greedy(z)]
            sq[t] = q_mean[pub.greedy(z_pub)]
            a = sub.greedy(z)
            b = pub.greedy(z_pub)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        p_pair = grid.payment_pair(a)
        q_pair = grid.qocs_pair(b)
        u_group = env.group_reward(p_pair, q_pair)
        u_pub = env.publisher_reward(p_pair, q_pair)
        z_next = grid.qocs_state(q_pair)
        z_pub_next = grid.payment_state(p_pair)
        if mode == "phc":
            sub.update(z, a, u_group, z_next)
            pub.update(z_pub, b, u_pub, z_pub_next)
        else:
            bellman_update(sub, z, a, u_group, z_next)
            bellman_update(pub, z_pub, b, u_pub, z_pub_next)
        p1[t], p2[t] = p_pair
        q1[t], q2[t] = q_pair
        ug[t] = u_group
        up[t] = u_pub
        p_prev, q_prev = p_pair, q_pair
    return TraceBlock(env.content.id, scheme, p1, p2, q1, q2, ug, up, sp, sq)


def bellman_update(table: _PhcTable, state: int, action: int, reward: float,
                   next_state: int) -> None:
    """Value backup without the policy step; the non-PHC action rules use it."""
    q = table.q_table
    target = table.lam * reward + table.chi * table.value_table[next_state]
    q[state, action] += table.psi * (target - q[state, action])
    table.value_table[next_state] = q[next_state].max()


def hotboot(env: DynamicGame, grid: ActionGrid, params: LearnParams,
            experiments: int, slots_per_experiment: int,
            seed: int) -> HotbootCache:
    """Pre-train both tiers on perturbed scenario copies.

    Runs the PHC loop for the requested number of experiments, carrying
    the tables across experiments, and returns them as the cache. Zero
    experiments yield zero tables with uniform policies.
    """
    if experiments < 0:
        raise ValueError("experiments must be non-negative")
    cache = empty_cache(grid)
    if experiments == 0:
        return cache
    sub = SubscriberLearner(grid, params)
    pub = PublisherLearner(grid, params)
    for w in range(experiments):
        perturb_rng = fork_rng(seed, "hotboot-perturb", w)
        run_env = env.perturbed(perturb_rng)
        rng_sub = fork_rng(seed, "hotboot-sub", w)
        rng_pub = fork_rng(seed, "hotboot-pub", w)
        _two_tier_run(run_env, grid, params, sub, pub, slots_per_experiment,
                      "phc", rng_sub, rng_pub, "HOTBOOT")
    cache.sub_q = sub.q_table.copy()
    cache.sub_policy = sub.policy.copy()
    cache.pub_q = pub.q_table.copy()
    cache.pub_policy = pub.policy.copy()
    cache.experiments_run = experiments
    return cache


def run_dynamic_game(env: DynamicGame, grid: ActionGrid, params: LearnParams,
                     cache: Optional[HotbootCache], T: int, seed: int,
                     scheme: str = "SPAD") -> TraceBlock:
    """Live PHC run initialized from a hotboot cache (or from scratch)."""
    sub = SubscriberLearner(grid, params)
    pub = PublisherLearner(grid, params)
    if cache is not None:
        if not cache.matches(grid):
            raise ValueError("hotboot cache was built for a different action grid")
        sub.load(cache.sub_q, cache.sub_policy)
        pub.load(cache.pub_q, cache.pub_policy)
    rng_sub = fork_rng(seed, "dyn-sub")
    rng_pub = fork_rng(seed, "dyn-pub")
    return _two_tier_run(env, grid, params, sub, pub, T, "phc",
                         rng_sub, rng_pub, scheme)


def qlearning_baseline(env: DynamicGame, grid: ActionGrid, params: LearnParams,
                       T: int, seed: int) -> TraceBlock:
    """Epsilon-greedy Q-learning from zero tables, no hotbooting."""
    sub = SubscriberLearner(grid, params)
    pub = PublisherLearner(grid, params)
    rng_sub = fork_rng(seed, "ql-sub")
    rng_pub = fork_rng(seed, "ql-pub")
    return _two_tier_run(env, grid, params, sub, pub, T, "qlearn",
                         rng_sub, rng_pub, "QLEARN")


def greedy_baseline(env: DynamicGame, grid: ActionGrid, params: LearnParams,
                    T: int, seed: int) -> TraceBlock:
    """Pure greedy action selection from zero tables; ties take the
    lowest action index."""
    sub = SubscriberLearner(grid, params)
    pub = PublisherLearner(grid, params)
    rng_sub = fork_rng(seed, "greedy-sub")
    rng_pub = fork_rng(seed, "greedy-pub")
    return _two_tier_run(env, grid, params, sub, pub, T, "greedy",
                         rng_sub, rng_pub, "GREEDY")


def fixed_price_baseline(env: DynamicGame, T: int,
                         p_tilde: Tuple[float, float] = (1.2, 1.2)) -> TraceBlock:
    """Subscribers pay a fixed price; the publisher best-responds."""
    price = PriceVector(*p_tilde)
    qocs = best_response_qocs(price, env.inst)
    u_group = env.group_reward(p_tilde, qocs.as_tuple())
    u_pub = env.publisher_reward(p_tilde, qocs.as_tuple())
    ones = np.ones(T)
    return TraceBlock(env.content.id, "FIXED_PRICE",
                      ones * p_tilde[0], ones * p_tilde[1],
                      ones * qocs.raw_quality, ones * qocs.result_quality,
                      ones * u_group, ones * u_pub,
                      ones * (sum(p_tilde) / 2.0),
                      ones * (sum(qocs.as_tuple()) / 2.0))


def save_hotboot_cache(cache: HotbootCache, path: str) -> None:
    """Versioned length-prefixed binary cache format.

    Header: magic, u32 version, u32 payment_levels, u32 qocs_levels,
    f64 price_cap, u32 experiments_run. Then four arrays (sub_q,
    sub_policy, pub_q, pub_policy), each a u64 byte length followed by
    float64 little endian data.
    """
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<III", CACHE_VERSION, cache.payment_levels,
                             cache.qocs_levels))
        fh.write(struct.pack("<d", cache.price_cap))
        fh.write(struct.pack("<I", cache.experiments_run))
        for arr in (cache.sub_q, cache.sub_policy, cache.pub_q, cache.pub_policy):
            data = np.ascontiguousarray(arr, dtype="<f8").tobytes()
            fh.write(struct.pack("<Q", len(data)))
            fh.write(data)


def load_hotboot_cache(path: str) -> HotbootCache:
    """Read a cache file; wrong magic, version, or sizes raise ValueError."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:8] != CACHE_MAGIC:
        raise ValueError("not a hotboot cache file (bad magic)")
    version, x, y = struct.unpack_from("<III", blob, 8)
    if version != CACHE_VERSION:
        raise ValueError(f"hotboot cache version mismatch: file has {version}, "
                         f"expected {CACHE_VERSION}")
    (price_cap,) = struct.unpack_from("<d", blob, 20)
    (experiments,) = struct.unpack_from("<I", blob, 28)
    offset = 32
    na = (x + 1) ** 2
    nq = (y + 1) ** 2
    shapes = [(nq, na), (nq, na), (na, nq), (na, nq)]
    arrays = []
    for shape in shapes:
        if offset + 8 > len(blob):
            raise ValueError("truncated hotboot cache")
        (length,) = struct.unpack_from("<Q", blob, offset)
        offset += 8
        if offset + length > len(blob) or length != shape[0] * shape[1] * 8:
            raise ValueError("hotboot cache array size mismatch")
        arrays.append(np.frombuffer(blob[offset:offset + length],
                                    dtype="<f8").reshape(shape).copy())
        offset += length
    return HotbootCache(arrays[0], arrays[1], arrays[2], arrays[3],
                        experiments, x, y, price_cap)
