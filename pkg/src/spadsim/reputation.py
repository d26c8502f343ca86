"""Hybrid reputation: social role effect plus punished Bayesian behavior.

Positive evidence is successful misbehavior reports filed by a vehicle
plus its recent clean streak; negative evidence is its own recorded
misbehaviors. Both decay exponentially unless decay is disabled, which
together with zero weights reduces the model to a plain beta mean.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np


@dataclass
class TrustParams:
    role_weight: float = 0.05
    behavior_weight: float = 0.5
    decay_pos: float = 0.001
    decay_neg: float = 0.001
    w_report: float = 1.0
    w_recent: float = 1.0
    w_mis: float = 1.0
    punishment: float = 1.2
    role_trust: Sequence[float] = field(default_factory=lambda: [5.0])
    decay_enabled: bool = True

    def __post_init__(self):
        if self.role_weight < 0 or self.behavior_weight < 0:
            raise ValueError("trust weights must be non-negative")
        if self.decay_pos < 0 or self.decay_neg < 0:
            raise ValueError("decay rates must be non-negative")
        if min(self.w_report, self.w_recent, self.w_mis) < 0:
            raise ValueError("evidence weights must be non-negative")
        if self.punishment < 1.0:
            raise ValueError("punishment factor must be at least 1")
        if len(self.role_trust) == 0:
            raise ValueError("role_trust must not be empty")


def bit_params(role_trust: Optional[Sequence[float]] = None) -> TrustParams:
    """Parameters of the baseline beta-mean trust model."""
    return TrustParams(role_weight=0.0, behavior_weight=1.0, w_recent=0.0,
                       punishment=1.0, decay_enabled=False,
                       role_trust=list(role_trust) if role_trust else [5.0])


@dataclass
class VehicleRecord:
    """Evidence ledger entries of one vehicle, slot-stamped."""

    successful_reports: List[float] = field(default_factory=list)
    misbehaviors: List[float] = field(default_factory=list)
    last_misbehavior_time: Optional[float] = None


class BehaviorLedger:
    """Per-vehicle evidence records plus report deduplication state."""

    def __init__(self):
        self.records: Dict[str, VehicleRecord] = {}
        self._accused_seen: Set[Tuple[str, str, float]] = set()
        self._reporter_seen: Set[Tuple[str, str, float]] = set()

    def record(self, vehicle_id: str) -> VehicleRecord:
        rec = self.records.get(vehicle_id)
        if rec is None:
            rec = VehicleRecord()
            self.records[vehicle_id] = rec
        return rec


def positive_effect(record: VehicleRecord, now: float, params: TrustParams) -> float:
    """Decayed successful-report mass plus the recent clean streak."""
    if params.decay_enabled:
        total = sum(math.exp(-params.decay_pos * (now - t)) for t in record.successful_reports)
    else:
        total = float(len(record.successful_reports))
    last = record.last_misbehavior_time
    streak = now - last if last is not None else now
    return params.w_report * total + params.w_recent * streak


def negative_effect(record: VehicleRecord, now: float, params: TrustParams) -> float:
    """Decayed misbehavior mass."""
    if params.decay_enabled:
        total = sum(math.exp(-params.decay_neg * (now - t)) for t in record.misbehaviors)
    else:
        total = float(len(record.misbehaviors))
    return params.w_mis * total


def behavior_effect(pos: float, neg: float, params: TrustParams) -> float:
    """Punished beta mean (pos + 1) / (pos + 1 + punishment * (neg + 1))."""
    if pos < 0 or neg < 0:
        raise ValueError("evidence masses must be non-negative")
    alpha = pos + 1.0
    beta = neg + 1.0
    return alpha / (alpha + params.punishment * beta)


def role_effect(role_index: int, params: TrustParams) -> float:
    """Trustworthiness degree of the vehicle's social role."""
    if not 0 <= role_index < len(params.role_trust):
        raise ValueError("role_index outside the role catalog")
    return float(params.role_trust[role_index])


def reputation(role_index: int, record: VehicleRecord, now: float,
               params: TrustParams) -> float:
    """Combined reputation, clamped into [0, 1]."""
    pos = positive_effect(record, now, params)
    neg = negative_effect(record, now, params)
    value = (params.role_weight * role_effect(role_index, params)
             + params.behavior_weight * behavior_effect(pos, neg, params))
    return min(1.0, max(0.0, value))


def record_report(ledger: BehaviorLedger, reporter_id: str, accused_id: str,
                  content_id: str, slot: float,
                  forensics_verdict: bool) -> Tuple[bool, bool]:
    """File one misbehavior report after the forensics verdict.

    A true verdict adds a misbehavior to the accused (deduplicated per
    content per slot) and a successful report to the reporter
    (deduplicated per reporter per content per slot). Returns the pair
    (accused gained a record, reporter gained credit). Self reports are
    rejected.
    """
    if reporter_id == accused_id:
        raise ValueError("a vehicle cannot report itself")
    if not forensics_verdict:
        return False, False
    credited = False
    reporter_key = (reporter_id, content_id, slot)
    if reporter_key not in ledger._reporter_seen:
        ledger._reporter_seen.add(reporter_key)
        ledger.record(reporter_id).successful_reports.append(slot)
        credited = True
    accused_key = (accused_id, content_id, slot)
    if accused_key in ledger._accused_seen:
        return False, credited
    ledger._accused_seen.add(accused_key)
    rec = ledger.record(accused_id)
    rec.misbehaviors.append(slot)
    if rec.last_misbehavior_time is None or slot > rec.last_misbehavior_time:
        rec.last_misbehavior_time = slot
    return True, credited


def dump_ledger_csv(ledger: BehaviorLedger, roles: Dict[str, int], now: float,
                    params: TrustParams, path: str) -> None:
    """Write per-vehicle reputation and evidence counts at one instant."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["vehicle_id", "slot", "reputation",
                         "n_reports", "n_misbehaviors"])
        for vid in sorted(ledger.records):
            rec = ledger.records[vid]
            rep = reputation(roles[vid], rec, now, params)
            writer.writerow([vid, int(now), f"{rep:.9f}",
                             len(rec.successful_reports), len(rec.misbehaviors)])


class ReputationTracker:
    """Incremental decayed evidence sums for fast per-slot queries.

    Maintains the same quantities as positive_effect/negative_effect but
    in O(1) per update, exploiting that exponential decay factorizes.
    Used by the episode loop; the pure functions remain the reference.
    """

    def __init__(self, params: TrustParams):
        self.params = params
        self._pos: Dict[str, float] = {}
        self._neg: Dict[str, float] = {}
        self._pos_count: Dict[str, int] = {}
        self._neg_count: Dict[str, int] = {}
        self._at: Dict[str, float] = {}
        self._last_mis: Dict[str, float] = {}

    def _advance(self, vid: str, now: float) -> None:
        at = self._at.get(vid)
        if at is None:
            self._pos[vid] = 0.0
            self._neg[vid] = 0.0
            self._pos_count[vid] = 0
            self._neg_count[vid] = 0
            self._at[vid] = now
            return
        if now < at:
            raise ValueError("tracker time must not move backwards")
        if now > at and self.params.decay_enabled:
            self._pos[vid] *= math.exp(-self.params.decay_pos * (now - at))
            self._neg[vid] *= math.exp(-self.params.decay_neg * (now - at))
        self._at[vid] = now

    def add_report(self, vid: str, now: float) -> None:
        self._advance(vid, now)
        self._pos[vid] += 1.0
        self._pos_count[vid] += 1

    def add_misbehavior(self, vid: str, now: float) -> None:
        self._advance(vid, now)
        self._neg[vid] += 1.0
        self._neg_count[vid] += 1
        self._last_mis[vid] = now

    def reputation(self, vid: str, role_index: int, now: float) -> float:
        self._advance(vid, now)
        p = self.params
        last = self._last_mis.get(vid)
        streak = now - last if last is not None else now
        pos = p.w_report * self._pos[vid] + p.w_recent * streak
        neg = p.w_mis * self._neg[vid]
        value = (p.role_weight * role_effect(role_index, p)
                 + p.behavior_weight * behavior_effect(pos, neg, p))
        return min(1.0, max(0.0, value))

    def counts(self, vid: str) -> Tuple[int, int]:
        return self._pos_count.get(vid, 0), self._neg_count.get(vid, 0)
