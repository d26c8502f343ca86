"""Scenario generation, episode simulation, and scheme comparison.

A scenario is a straight multi-segment road with MEC servers and one
vehicle fleet per populated segment. Episodes run the slotted loop:
vehicles move, publish content through their fleet broker, subscribers
join groups when the publisher clears the reputation gate, prices and
quality levels come from the configured mechanism, and dishonest
deliveries feed the reputation ledger through subscriber reports.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .channel import ChannelParams
from .content import (BrokerState, Content, PopularityParams, QoCSVector,
                      Subscription, build_metadata, publish, subscribe,
                      zipf_popularity)
from .core import (BEHAVIOR_PROFILES, LEGITIMATE, MALICIOUS, SCHEMES,
                   SPECULATIVE, Cav, Fleet, ScenarioConfig, TimeSlot,
                   fork_rng, validate_config)
from .economics import EconParams, PriceVector, group_utility, publisher_utility
from .learning import (ActionGrid, LearnParams, PublisherLearner,
                       SubscriberLearner, bellman_update, write_trace_csv)
from .mobility import BodyGeometry, ControlInput, VehicleState, step_bicycle
from .reputation import (BehaviorLedger, ReputationTracker, TrustParams,
                         bit_params, record_report)
from .stackelberg import GameInstance, best_response_qocs, solve_se

_SENSOR_NAMES = ("camera", "lidar", "radar")


@dataclass
class RoadSegment:
    index: int
    start_m: float
    length_m: float


@dataclass
class MecServer:
    index: int
    x_m: float
    radius_m: float


@dataclass
class World:
    """A generated scenario: road, servers, fleets, and vehicle traits."""

    cfg: ScenarioConfig
    segments: List[RoadSegment]
    mec_servers: List[MecServer]
    fleets: List[Fleet]
    vehicles: Dict[str, Cav]
    initial_states: Dict[str, VehicleState]
    fleet_of: Dict[str, str]
    role_catalog: List[float]
    epsilon_raw: Dict[Tuple[str, str], float]
    epsilon_result: Dict[str, float]
    sensor_types: List[str]

    @property
    def num_vehicles(self) -> int:
        return len(self.vehicles)

    def profile_members(self, profile: str) -> List[str]:
        return sorted(v.id for v in self.vehicles.values()
                      if v.behavior_profile == profile)


def _sensor_names(count: int) -> List[str]:
    names = list(_SENSOR_NAMES[:count])
    names += [f"sensor{i}" for i in range(len(names), count)]
    return names


def _role_bands(catalog_size: int) -> Dict[str, range]:
    """Role-index bands per profile over the ascending trust catalog.

    Malicious roles sit in the bottom sixth, speculative below the middle,
    legitimate in the top third. The middle band stays unassigned.
    """
    a = catalog_size
    mal_hi = max(1, a // 6)
    spec_lo = min(mal_hi, a - 1)
    spec_hi = min(max(spec_lo + 1, (5 * a) // 12), a)
    legit_lo = min(max((2 * a) // 3, spec_hi - 1), a - 1)
    return {
        MALICIOUS: range(0, mal_hi),
        SPECULATIVE: range(spec_lo, spec_hi),
        LEGITIMATE: range(legit_lo, a),
    }


def _profile_counts(n: int, mix: Sequence[float]) -> List[int]:
    """Largest-remainder apportionment of n vehicles over the mix."""
    raw = [m * n for m in mix]
    counts = [int(math.floor(r)) for r in raw]
    order = sorted(range(len(mix)), key=lambda i: raw[i] - counts[i],
                   reverse=True)
    for i in range(n - sum(counts)):
        counts[order[i]] += 1
    return counts


def generate_scenario(cfg: ScenarioConfig) -> World:
    """Build the deterministic world implied by the configuration."""
    problems = validate_config(cfg)
    if problems:
        raise ValueError("invalid config: " + "; ".join(problems))

    rng_road = fork_rng(cfg.rng_seed, "road")
    lengths = rng_road.uniform(cfg.segment_length_range_m[0],
                               cfg.segment_length_range_m[1],
                               cfg.num_road_segments)
    segments = []
    start = 0.0
    for i, length in enumerate(lengths):
        segments.append(RoadSegment(i, start, float(length)))
        start += float(length)
    total_length = start

    mec_servers = []
    x = cfg.mec_spacing_m / 2.0
    idx = 0
    while x < total_length + cfg.mec_spacing_m / 2.0:
        mec_servers.append(MecServer(idx, x, cfg.mec_radius_m))
        x += cfg.mec_spacing_m
        idx += 1

    sensor_types = _sensor_names(cfg.num_sensor_types)
    rng_fleet = fork_rng(cfg.rng_seed, "fleets")
    fleets: List[Fleet] = []
    fleet_of: Dict[str, str] = {}
    initial_states: Dict[str, VehicleState] = {}
    vehicle_ids: List[str] = []
    placements: Dict[str, Tuple[float, float]] = {}
    counter = 0
    remaining = cfg.num_vehicles if cfg.num_vehicles is not None else None
    for seg in segments:
        # One draw pair per segment regardless of the cap keeps the road
        # layout independent of num_vehicles.
        density = float(rng_fleet.uniform(*cfg.vehicle_density_range))
        v_kmh = float(rng_fleet.uniform(*cfg.fleet_velocity_range_kmh))
        n = int(round(density * seg.length_m / 1000.0))
        if remaining is not None:
            n = min(n, remaining)
        if n <= 0:
            continue
        spacing = 1000.0 / density
        fid = f"f{seg.index:03d}"
        member_ids = []
        for k in range(n):
            vid = f"v{counter:04d}"
            counter += 1
            member_ids.append(vid)
            fleet_of[vid] = fid
            placements[vid] = (seg.start_m + k * spacing, v_kmh / 3.6)
        fleets.append(Fleet(fid, member_ids[0], member_ids, v_kmh / 3.6,
                            spacing))
        vehicle_ids.extend(member_ids)
        if remaining is not None:
            remaining -= n
    if not vehicle_ids:
        raise ValueError("scenario produced no vehicles; densities too low")

    rng_catalog = fork_rng(cfg.rng_seed, "role-catalog")
    role_catalog = sorted(float(v) for v in
                          rng_catalog.uniform(1.0, 10.0, cfg.role_catalog_size))
    bands = _role_bands(cfg.role_catalog_size)

    counts = _profile_counts(len(vehicle_ids), cfg.behavior_mix)
    rng_profiles = fork_rng(cfg.rng_seed, "profiles")
    perm = rng_profiles.permutation(len(vehicle_ids))
    profile_of: Dict[str, str] = {}
    cursor = 0
    for profile, count in zip(BEHAVIOR_PROFILES, counts):
        for j in range(count):
            profile_of[vehicle_ids[perm[cursor + j]]] = profile
        cursor += count

    vehicles: Dict[str, Cav] = {}
    epsilon_raw: Dict[Tuple[str, str], float] = {}
    epsilon_result: Dict[str, float] = {}
    for vid in vehicle_ids:
        rng_v = fork_rng(cfg.rng_seed, "vehicle", vid)
        profile = profile_of[vid]
        if cfg.role_correlation:
            band = bands[profile]
            role_index = int(band[rng_v.integers(len(band))])
        else:
            role_index = int(rng_v.integers(cfg.role_catalog_size))
        sensing = {s: float(rng_v.uniform(0.0, 1.0)) for s in sensor_types}
        processing = float(rng_v.uniform(0.0, 1.0))
        for s in sensor_types:
            epsilon_raw[(vid, s)] = float(rng_v.uniform(0.4, 2.0))
        epsilon_result[vid] = float(rng_v.uniform(0.4, 2.0))
        vehicles[vid] = Cav(vid, role_index, profile, sensing, processing)
        x_m, v_mps = placements[vid]
        initial_states[vid] = VehicleState(x_m, 0.0, v_mps, 0.0)

    return World(cfg, segments, mec_servers, fleets, vehicles, initial_states,
                 fleet_of, role_catalog, epsilon_raw, epsilon_result,
                 sensor_types)


@dataclass
class SchemeConfig:
    """How one scheme handles trust, gating, and pricing."""

    name: str
    trust: Optional[TrustParams]
    gating: bool
    mechanism: str  # static, qlearn, greedy, or fixed
    fixed_price: Tuple[float, float] = (1.2, 1.2)


def scheme_config(name: str, cfg: ScenarioConfig,
                  role_catalog: Sequence[float]) -> SchemeConfig:
    if name not in SCHEMES:
        raise ValueError(f"unknown scheme {name!r}")
    catalog = list(role_catalog)
    hybrid = TrustParams(role_trust=catalog)
    if name == "SPAD":
        return SchemeConfig(name, hybrid, True, "static")
    if name == "BIT":
        return SchemeConfig(name, bit_params(catalog), True, "static")
    if name == "SWR":
        return SchemeConfig(name, None, False, "static")
    if name == "QLEARN":
        return SchemeConfig(name, hybrid, True, "qlearn")
    if name == "GREEDY":
        return SchemeConfig(name, hybrid, True, "greedy")
    return SchemeConfig(name, hybrid, True, "fixed")


@dataclass
class Metrics:
    secure_pubsub_ratio: float
    avg_qocs: Tuple[float, float]
    avg_group_utility: float
    avg_publisher_utility: float
    avg_reputation_by_profile: Dict[str, float]
    convergence_slot: int


@dataclass
class EpisodeResult:
    scheme: str
    metrics: Metrics
    reputation_series: Dict[str, np.ndarray]
    qocs_series: np.ndarray
    deliveries: int
    honest_deliveries: int
    trace_rows: List[Tuple] = field(default_factory=list)
    event_group_sizes: List[Tuple[int, int]] = field(default_factory=list)
    event_honest: List[bool] = field(default_factory=list)
    event_publishers: List[str] = field(default_factory=list)
    ledger: Optional[BehaviorLedger] = None


def moving_average(series: np.ndarray, window: int) -> np.ndarray:
    """Trailing moving average; shorter prefixes average what exists."""
    x = np.asarray(series, dtype=float)
    if window <= 0:
        raise ValueError("window must be positive")
    c = np.cumsum(np.insert(x, 0, 0.0))
    n = len(x)
    out = np.empty(n)
    for i in range(n):
        lo = max(0, i - window + 1)
        out[i] = (c[i + 1] - c[lo]) / (i + 1 - lo)
    return out


def convergence_slot(series: Sequence[float], window: int = 100,
                     rel_tol: float = 0.05, abs_tol: float = 0.05) -> int:
    """First 1-indexed slot after which the windowed mean stays near its
    final value; a constant series converges at slot 1.

    Nearness is rel_tol of the final mean, or abs_tol when the final
    mean is essentially zero.  Never exceeds len(series): the last
    window equals the final value by construction.
    """
    x = np.asarray(series, dtype=float)
    if len(x) == 0:
        return 0
    ma = moving_average(x, window)
    final = ma[-1]
    tol = rel_tol * abs(final) if abs(final) > 1e-9 else abs_tol
    bad = np.where(np.abs(ma - final) > tol)[0]
    return int(bad[-1] + 2) if len(bad) else 1


def run_episode(world: World, scheme: Optional[SchemeConfig] = None,
                num_slots: Optional[int] = None, collect_trace: bool = True,
                hotboot_cache=None) -> EpisodeResult:
    """Simulate one episode and aggregate its metrics.

    The world is not mutated; vehicle states are copied. Reputation
    snapshots are taken at slot start, so slot 0 shows initial values.
    """
    cfg = world.cfg
    sch = scheme if scheme is not None else scheme_config(
        cfg.scheme, cfg, world.role_catalog)
    T = num_slots if num_slots is not None else cfg.num_time_slots
    threshold = cfg.reputation_threshold if sch.gating else 0.0

    tracker = ReputationTracker(sch.trust) if sch.trust is not None else None
    ledger = BehaviorLedger()
    chan = ChannelParams()
    geom = BodyGeometry()
    coast = ControlInput()
    pop_params = PopularityParams()

    states = {vid: replace(vs) for vid, vs in world.initial_states.items()}
    roles = {vid: world.vehicles[vid].role_index for vid in world.vehicles}

    brokers: Dict[str, BrokerState] = {}
    for fleet in world.fleets:
        broker = BrokerState(fleet.broker_buffer_bytes,
                             cfg.retention_window_slots)
        for s in world.sensor_types:
            topic = f"{fleet.id}/{s}"
            broker.register_topic(topic)
            for vid in fleet.member_ids:
                broker.register_publisher(topic, vid)
        brokers[fleet.id] = broker

    rng_v = {vid: fork_rng(cfg.rng_seed, "episode", sch.name, vid)
             for vid in world.vehicles}

    learners = None
    if sch.mechanism in ("qlearn", "greedy"):
        grid = ActionGrid()
        lp = LearnParams()
        sub_learner = SubscriberLearner(grid, lp)
        pub_learner = PublisherLearner(grid, lp)
        if hotboot_cache is not None:
            if not hotboot_cache.matches(grid):
                raise ValueError("hotboot cache was built for a different "
                                 "action grid")
            sub_learner.load(hotboot_cache.sub_q, hotboot_cache.sub_policy)
            pub_learner.load(hotboot_cache.pub_q, hotboot_cache.pub_policy)
        learners = (sub_learner, pub_learner, grid, lp)
        prev_actions: Dict[str, Tuple[Tuple[float, float], Tuple[float, float]]] = {}
        rng_learn = fork_rng(cfg.rng_seed, "episode-learn", sch.name)

    profiles = list(BEHAVIOR_PROFILES)
    members_by_profile = {p: world.profile_members(p) for p in profiles}
    rep_series = {p: np.zeros(T) for p in profiles}
    qocs_series = np.zeros(T)

    trace_rows: List[Tuple] = []
    event_group_sizes: List[Tuple[int, int]] = []
    event_honest: List[bool] = []
    event_publishers: List[str] = []
    sum_q = np.zeros(2)
    sum_u_group = 0.0
    sum_u_pub = 0.0
    n_events = 0
    deliveries = 0
    honest_deliveries = 0

    for t in range(T):
        now = float(t)
        slot = TimeSlot(t, cfg.slot_length_s)
        for vid in states:
            states[vid] = step_bicycle(states[vid], coast, geom,
                                       cfg.slot_length_s)
        rep: Dict[str, float] = {}
        for vid in world.vehicles:
            if tracker is None:
                rep[vid] = 1.0
            else:
                rep[vid] = tracker.reputation(vid, roles[vid], now)
        for p in profiles:
            ids = members_by_profile[p]
            if ids:
                rep_series[p][t] = sum(rep[v] for v in ids) / len(ids)

        slot_q_sum = 0.0
        slot_q_n = 0
        for fi, fleet in enumerate(world.fleets):
            broker = brokers[fleet.id]
            published: List[Tuple[Content, float]] = []
            for vid in fleet.member_ids:
                rng = rng_v[vid]
                profile = world.vehicles[vid].behavior_profile
                if profile == LEGITIMATE:
                    honest = True
                elif profile == MALICIOUS:
                    honest = False
                else:
                    honest = rng.random() >= cfg.speculative_malicious_prob
                sensor = world.sensor_types[rng.integers(len(world.sensor_types))]
                raw_size = float(rng.uniform(1e5, 5e5))
                result_size = float(rng.uniform(1e3, 2e4))
                rank = int(rng.integers(1, pop_params.catalog_size + 1))
                alpha = float(rng.uniform(25.0, 45.0))
                topic = f"{fleet.id}/{sensor}"
                content = Content(f"c{t}-{vid}", topic, vid, sensor,
                                  raw_size, result_size, rank, honest)
                meta = build_metadata(content, slot,
                                      f"239.0.0.{fi % 256}")
                publish(broker, meta, content.id, topic, slot)
                published.append((content, alpha))

            for content, _alpha in published:
                pub_rep = rep[content.publisher_id]
                for other in fleet.member_ids:
                    if other == content.publisher_id:
                        continue
                    rng = rng_v[other]
                    if rng.random() >= cfg.subscribe_prob:
                        continue
                    sub = Subscription(other, content.id, rng.random() < 0.5)
                    subscribe(broker, sub, pub_rep, threshold)

            for content, alpha in published:
                group = broker.groups.get(content.id)
                if group is None or group.size == 0:
                    continue
                pub_id = content.publisher_id
                publisher = world.vehicles[pub_id]
                kappa_raw = publisher.sensing(content.sensor_type)
                if (group.j_raw > 0 and kappa_raw == 0.0) or \
                        (group.j_result > 0 and publisher.processing_capacity == 0.0):
                    continue
                econ = EconParams(
                    satisfaction_coeff=alpha,
                    raw_cost_param=world.epsilon_raw[(pub_id, content.sensor_type)],
                    result_cost_param=world.epsilon_result[pub_id],
                )
                r_price = rep[pub_id] if tracker is not None else 1.0
                inst = GameInstance(group, econ, kappa_raw,
                                    publisher.processing_capacity,
                                    zipf_popularity(content.popularity_rank,
                                                    pop_params),
                                    r_price)
                if sch.mechanism == "static":
                    eq = solve_se(inst)
                    price, qocs = eq.price, eq.qocs
                elif sch.mechanism == "fixed":
                    price = PriceVector(*sch.fixed_price)
                    qocs = best_response_qocs(price, inst)
                else:
                    sub_l, pub_l, grid, lp = learners
                    p_prev, q_prev = prev_actions.get(
                        pub_id, ((0.0, 0.0), (0.0, 0.0)))
                    z = grid.qocs_state(q_prev)
                    z_pub = grid.payment_state(p_prev)
                    if sch.mechanism == "qlearn":
                        a = sub_l.epsilon_greedy(z, lp.epsilon, rng_learn)
                        b = pub_l.epsilon_greedy(z_pub, lp.epsilon, rng_learn)
                    else:
                        a = sub_l.greedy(z)
                        b = pub_l.greedy(z_pub)
                    p_pair = grid.payment_pair(a)
                    q_pair = grid.qocs_pair(b)
                    price = PriceVector(*p_pair)
                    qocs = QoCSVector(q_pair[0], q_pair[1])
                u_grp = group_utility(group, qocs, price, content, publisher,
                                      inst.popularity, inst.reputation, chan,
                                      econ)
                u_pub = publisher_utility(
                    [(group, qocs, price, content,
                      fleet.inter_vehicle_distance_m)],
                    publisher, chan, econ)
                if sch.mechanism in ("qlearn", "greedy"):
                    z_next = grid.qocs_state(qocs.as_tuple())
                    z_pub_next = grid.payment_state(price.as_tuple())
                    bellman_update(sub_l, z, a, u_grp, z_next)
                    bellman_update(pub_l, z_pub, b, u_pub, z_pub_next)
                    prev_actions[pub_id] = (price.as_tuple(), qocs.as_tuple())

                n_events += 1
                sum_q += qocs.as_tuple()
                sum_u_group += u_grp
                sum_u_pub += u_pub
                slot_q_sum += (qocs.raw_quality + qocs.result_quality) / 2.0
                slot_q_n += 1
                deliveries += group.size
                if content.ground_truth_honest:
                    honest_deliveries += group.size
                if collect_trace:
                    trace_rows.append((t, content.id, price.raw_price,
                                       price.result_price, qocs.raw_quality,
                                       qocs.result_quality, u_grp, u_pub,
                                       sch.name))
                    event_group_sizes.append((group.j_raw, group.j_result))
                    event_honest.append(content.ground_truth_honest)
                    event_publishers.append(pub_id)

                if not content.ground_truth_honest and tracker is not None:
                    for reporter in sorted(group.raw_subscribers
                                           | group.result_subscribers):
                        rng = rng_v[reporter]
                        if rng.random() >= cfg.report_prob:
                            continue
                        verdict = (cfg.detection_prob >= 1.0
                                   or rng.random() < cfg.detection_prob)
                        hit, credit = record_report(ledger, reporter,
                                                    content.publisher_id,
                                                    content.id, now, verdict)
                        if hit:
                            tracker.add_misbehavior(content.publisher_id, now)
                        if credit:
                            tracker.add_report(reporter, now)

        if slot_q_n:
            qocs_series[t] = slot_q_sum / slot_q_n
        elif t > 0:
            qocs_series[t] = qocs_series[t - 1]

    avg_q = (sum_q / n_events) if n_events else np.zeros(2)
    metrics = Metrics(
        secure_pubsub_ratio=(honest_deliveries / deliveries
                             if deliveries else 1.0),
        avg_qocs=(float(avg_q[0]), float(avg_q[1])),
        avg_group_utility=sum_u_group / n_events if n_events else 0.0,
        avg_publisher_utility=sum_u_pub / n_events if n_events else 0.0,
        avg_reputation_by_profile={p: float(rep_series[p].mean())
                                   for p in profiles},
        convergence_slot=convergence_slot(qocs_series),
    )
    return EpisodeResult(sch.name, metrics, rep_series, qocs_series,
                         deliveries, honest_deliveries, trace_rows,
                         event_group_sizes, event_honest, event_publishers,
                         ledger)


def compute_metrics(result: EpisodeResult, window: int = 100) -> Metrics:
    """Recompute episode metrics from stored traces.

    Cross-checks the running accumulators in run_episode; a result
    produced with collect_trace=False carries no rows and is rejected.
    """
    if not result.trace_rows:
        raise ValueError("cannot compute metrics from empty traces")
    rows = result.trace_rows
    q = np.array([(r[4], r[5]) for r in rows], dtype=float)
    u_grp = np.array([r[6] for r in rows], dtype=float)
    u_pub = np.array([r[7] for r in rows], dtype=float)
    sizes = np.array([a + b for a, b in result.event_group_sizes])
    honest = np.asarray(result.event_honest, dtype=bool)
    deliveries = int(sizes.sum())
    honest_deliveries = int(sizes[honest].sum())
    return Metrics(
        secure_pubsub_ratio=(honest_deliveries / deliveries
                             if deliveries else 1.0),
        avg_qocs=(float(q[:, 0].mean()), float(q[:, 1].mean())),
        avg_group_utility=float(u_grp.mean()),
        avg_publisher_utility=float(u_pub.mean()),
        avg_reputation_by_profile={p: float(s.mean())
                                   for p, s in
                                   result.reputation_series.items()},
        convergence_slot=convergence_slot(result.qocs_series, window),
    )


METRIC_FIELDS = ("secure_pubsub_ratio", "avg_qocs_raw", "avg_qocs_result",
                 "avg_group_utility", "avg_publisher_utility",
                 "avg_reputation_legitimate", "avg_reputation_speculative",
                 "avg_reputation_malicious", "convergence_slot")


def metrics_as_row(m: Metrics) -> List[float]:
    return [m.secure_pubsub_ratio, m.avg_qocs[0], m.avg_qocs[1],
            m.avg_group_utility, m.avg_publisher_utility,
            m.avg_reputation_by_profile[LEGITIMATE],
            m.avg_reputation_by_profile[SPECULATIVE],
            m.avg_reputation_by_profile[MALICIOUS],
            float(m.convergence_slot)]


def write_metrics_csv(metrics: Metrics, path: str, scheme: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("scheme",) + METRIC_FIELDS)
        writer.writerow([scheme] + metrics_as_row(metrics))


def compare_schemes(cfg: ScenarioConfig, schemes: Sequence[str],
                    reps: int = 1) -> Dict[str, List[Metrics]]:
    """Run each scheme on paired worlds (same seeds) and collect metrics."""
    if reps < 1:
        raise ValueError("reps must be at least 1")
    for name in schemes:
        if name not in SCHEMES:
            raise ValueError(f"unknown scheme {name!r}")
    results: Dict[str, List[Metrics]] = {name: [] for name in schemes}
    for rep in range(reps):
        rep_cfg = replace(cfg, rng_seed=cfg.rng_seed + rep)
        world = generate_scenario(rep_cfg)
        for name in schemes:
            sch = scheme_config(name, rep_cfg, world.role_catalog)
            out = run_episode(world, sch, collect_trace=False)
            results[name].append(out.metrics)
    return results


def summarize_comparison(results: Dict[str, List[Metrics]]) -> List[Tuple]:
    """Long-format rows (scheme, metric, mean, std) with sample stddev."""
    rows = []
    for name in results:
        table = np.array([metrics_as_row(m) for m in results[name]])
        means = table.mean(axis=0)
        stds = (table.std(axis=0, ddof=1) if len(table) > 1
                else np.zeros(table.shape[1]))
        for j, metric in enumerate(METRIC_FIELDS):
            rows.append((name, metric, float(means[j]), float(stds[j])))
    return rows


def write_comparison_csv(rows: Sequence[Tuple], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("scheme", "metric", "mean", "std"))
        for row in rows:
            writer.writerow(row)


def write_episode_trace(result: EpisodeResult, path: str) -> None:
    write_trace_csv(result.trace_rows, path)


def write_reputation_series_csv(result: EpisodeResult, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("slot",) + tuple(BEHAVIOR_PROFILES))
        T = len(result.qocs_series)
        for t in range(T):
            writer.writerow([t] + [float(result.reputation_series[p][t])
                                   for p in BEHAVIOR_PROFILES])
