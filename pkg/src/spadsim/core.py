"""Domain types, scenario configuration, and deterministic RNG forking."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields
from typing import Dict, List, Optional, Tuple

import numpy as np

LEGITIMATE = "legitimate"
SPECULATIVE = "speculative"
MALICIOUS = "malicious"
BEHAVIOR_PROFILES = (LEGITIMATE, SPECULATIVE, MALICIOUS)

SCHEMES = ("SPAD", "BIT", "SWR", "QLEARN", "GREEDY", "FIXED_PRICE")


@dataclass
class TimeSlot:
    """One discrete slot of the synchronized fleet clock."""

    index: int
    slot_length_s: float = 1.0

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("slot index must be non-negative")
        if self.slot_length_s <= 0:
            raise ValueError("slot length must be positive")

    @property
    def start_s(self) -> float:
        return self.index * self.slot_length_s


@dataclass
class Cav:
    """A connected autonomous vehicle and its static capabilities.

    sensing_capacity maps sensor type to a quality factor in [0, 1];
    processing_capacity is the analogous factor for processed results.
    """

    id: str
    role_index: int
    behavior_profile: str
    sensing_capacity: Dict[str, float] = field(default_factory=dict)
    processing_capacity: float = 1.0
    cache_capacity_bytes: int = 10**8

    def __post_init__(self):
        if self.behavior_profile not in BEHAVIOR_PROFILES:
            raise ValueError(f"unknown behavior profile {self.behavior_profile!r}")
        if not 0.0 <= self.processing_capacity <= 1.0:
            raise ValueError("processing_capacity must lie in [0, 1]")
        for sensor, cap in self.sensing_capacity.items():
            if not 0.0 <= cap <= 1.0:
                raise ValueError(f"sensing_capacity[{sensor!r}] must lie in [0, 1]")
        if self.cache_capacity_bytes <= 0:
            raise ValueError("cache_capacity_bytes must be positive")

    def sensing(self, sensor_type: str) -> float:
        """Sensing quality factor for one sensor type, 0.0 when absent."""
        return self.sensing_capacity.get(sensor_type, 0.0)


@dataclass
class Fleet:
    """A platoon of CAVs led by a master that runs the fleet broker."""

    id: str
    master_id: str
    member_ids: List[str]
    fleet_velocity_mps: float
    inter_vehicle_distance_m: float
    broker_buffer_bytes: int = 10**6

    def __post_init__(self):
        if self.master_id not in self.member_ids:
            raise ValueError("master_id must be one of member_ids")
        if len(set(self.member_ids)) != len(self.member_ids):
            raise ValueError("member_ids must be unique")
        if self.fleet_velocity_mps < 0:
            raise ValueError("fleet_velocity_mps must be non-negative")
        if self.inter_vehicle_distance_m <= 0:
            raise ValueError("inter_vehicle_distance_m must be positive")
        if self.broker_buffer_bytes <= 0:
            raise ValueError("broker_buffer_bytes must be positive")

    @property
    def size(self) -> int:
        return len(self.member_ids)


@dataclass
class ScenarioConfig:
    """Inputs that fully determine a generated road scenario.

    Ranges are (low, high) pairs. behavior_mix is the (legitimate,
    speculative, malicious) population fractions and must sum to one.
    """

    num_road_segments: int = 100
    segment_length_range_m: Tuple[float, float] = (20.0, 200.0)
    mec_spacing_m: float = 200.0
    mec_radius_m: float = 100.0
    vehicle_density_range: Tuple[float, float] = (10.0, 120.0)
    fleet_velocity_range_kmh: Tuple[float, float] = (50.0, 110.0)
    num_time_slots: int = 1000
    rng_seed: int = 0
    behavior_mix: Tuple[float, float, float] = (0.6, 0.2, 0.2)
    scheme: str = "SPAD"
    # Knobs below have sensible defaults and are rarely changed.
    slot_length_s: float = 1.0
    subscribe_prob: float = 0.4
    report_prob: float = 1.0
    detection_prob: float = 1.0
    speculative_malicious_prob: float = 0.5
    role_catalog_size: int = 12
    role_correlation: bool = True
    reputation_threshold: float = 0.45
    retention_window_slots: int = 1
    num_sensor_types: int = 3
    # Cap on generated vehicles; None lets segment densities decide.
    num_vehicles: Optional[int] = None


_MIX_TOL = 1e-9


def validate_config(cfg: ScenarioConfig) -> List[str]:
    """Return a list of violation messages, empty when cfg is valid.

    Every message names the offending field so callers can surface
    actionable errors.
    """
    problems: List[str] = []
    if cfg.num_road_segments <= 0:
        problems.append("num_road_segments must be positive")
    lo, hi = cfg.segment_length_range_m
    if not (0 < lo <= hi):
        problems.append("segment_length_range_m must satisfy 0 < low <= high")
    if cfg.mec_spacing_m <= 0:
        problems.append("mec_spacing_m must be positive")
    if cfg.mec_radius_m <= 0:
        problems.append("mec_radius_m must be positive")
    lo, hi = cfg.vehicle_density_range
    if not (0 <= lo <= hi):
        problems.append("vehicle_density_range must satisfy 0 <= low <= high")
    lo, hi = cfg.fleet_velocity_range_kmh
    if not (0 <= lo <= hi):
        problems.append("fleet_velocity_range_kmh must satisfy 0 <= low <= high")
    if cfg.num_time_slots <= 0:
        problems.append("num_time_slots must be positive")
    if abs(sum(cfg.behavior_mix) - 1.0) > _MIX_TOL:
        problems.append("behavior_mix must sum to 1")
    if any(r < 0 for r in cfg.behavior_mix):
        problems.append("behavior_mix fractions must be non-negative")
    if cfg.scheme not in SCHEMES:
        problems.append(f"scheme must be one of {', '.join(SCHEMES)}")
    if cfg.slot_length_s <= 0:
        problems.append("slot_length_s must be positive")
    for name in ("subscribe_prob", "report_prob", "detection_prob",
                 "speculative_malicious_prob"):
        if not 0.0 <= getattr(cfg, name) <= 1.0:
            problems.append(f"{name} must lie in [0, 1]")
    if cfg.role_catalog_size <= 0:
        problems.append("role_catalog_size must be positive")
    if not 0.0 <= cfg.reputation_threshold <= 1.0:
        problems.append("reputation_threshold must lie in [0, 1]")
    if cfg.retention_window_slots <= 0:
        problems.append("retention_window_slots must be positive")
    if cfg.num_sensor_types <= 0:
        problems.append("num_sensor_types must be positive")
    if cfg.num_vehicles is not None and cfg.num_vehicles <= 0:
        problems.append("num_vehicles must be positive when set")
    return problems


_PAIR_FIELDS = {"segment_length_range_m", "vehicle_density_range",
                "fleet_velocity_range_kmh"}
_TRIPLE_FIELDS = {"behavior_mix"}
_BOOL_FIELDS = {"role_correlation"}
_OPTIONAL_INT_FIELDS = {"num_vehicles"}


def _parse_value(name: str, raw: str, target_type: type):
    if name in _OPTIONAL_INT_FIELDS:
        low = raw.strip().lower()
        if low in ("none", ""):
            return None
        return int(raw)
    if name in _PAIR_FIELDS or name in _TRIPLE_FIELDS:
        parts = [p.strip() for p in raw.split(",")]
        want = 2 if name in _PAIR_FIELDS else 3
        if len(parts) != want:
            raise ValueError(f"{name} expects {want} comma separated values")
        return tuple(float(p) for p in parts)
    if name in _BOOL_FIELDS:
        low = raw.strip().lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ValueError(f"{name} expects a boolean, got {raw!r}")
    if target_type is int:
        return int(raw)
    if target_type is float:
        return float(raw)
    return raw.strip()


def load_config(path: str) -> ScenarioConfig:
    """Parse a `key = value` text file into a ScenarioConfig.

    Lines starting with '#' and blank lines are ignored. Unknown keys
    raise ValueError rather than being silently dropped.
    """
    known = {f.name: f.type for f in fields(ScenarioConfig)}
    types = {f.name: type(getattr(ScenarioConfig(), f.name)) for f in fields(ScenarioConfig)}
    values: Dict[str, object] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, raw = stripped.partition("=")
            key = key.strip()
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = _parse_value(key, raw.strip(), types[key])
    cfg = ScenarioConfig(**values)
    problems = validate_config(cfg)
    if problems:
        raise ValueError("invalid config: " + "; ".join(problems))
    return cfg


def _key_to_int(key) -> int:
    digest = hashlib.sha256(repr(key).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def fork_rng(seed: int, *keys) -> np.random.Generator:
    """Derive an independent generator keyed by (seed, keys).

    Streams depend only on the key material, never on creation order,
    so per-entity forks keep runs reproducible when iteration order of
    unrelated entities changes.
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    entropy.extend(_key_to_int(k) for k in keys)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
