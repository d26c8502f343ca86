"""Utilities and costs of the content market.

Subscribers split into a raw part (u = 1) and a result part (u = 2) per
content. All money amounts are in cents. Satisfaction uses the natural
logarithm; the only log2 in the package lives in the channel rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence, Set, Tuple

from .channel import ChannelParams, delay_vector, energy_cost

if TYPE_CHECKING:
    from .content import Content, QoCSVector
    from .core import Cav


@dataclass
class EconParams:
    """Per-part market parameters; pairs are ordered (raw, result)."""

    satisfaction_coeff: float = 28.0
    price_adjust: Tuple[float, float] = (0.75, 0.75)
    delay_adjust: Tuple[float, float] = (0.01, 0.01)
    cost_adjust: Tuple[float, float] = (1.0, 1.0)
    raw_cost_param: float = 0.4
    result_cost_param: float = 0.4
    listing_fee: float = 0.1
    price_cap: float = 5.0

    def __post_init__(self):
        if self.satisfaction_coeff <= 0:
            raise ValueError("satisfaction_coeff must be positive")
        for name in ("price_adjust", "delay_adjust", "cost_adjust"):
            pair = getattr(self, name)
            if len(pair) != 2 or any(v < 0 for v in pair):
                raise ValueError(f"{name} must be a pair of non-negative reals")
        if self.raw_cost_param <= 0 or self.result_cost_param <= 0:
            raise ValueError("cost parameters must be positive")
        if self.listing_fee < 0:
            raise ValueError("listing_fee must be non-negative")
        if self.price_cap <= 0:
            raise ValueError("price_cap must be positive")

    def cost_param(self, part: int) -> float:
        return self.raw_cost_param if part == 0 else self.result_cost_param


@dataclass
class PriceVector:
    """Payment per unit QoCS offered by the subscriber group, per part."""

    raw_price: float
    result_price: float

    def validate(self, price_cap: float) -> None:
        for p in (self.raw_price, self.result_price):
            if not 0.0 <= p <= price_cap:
                raise ValueError("prices must lie in [0, price_cap]")

    def as_tuple(self) -> Tuple[float, float]:
        return (self.raw_price, self.result_price)


@dataclass
class SubscriberGroup:
    """Subscribers of one content, split by preferred representation."""

    content_id: str
    raw_subscribers: Set[str] = field(default_factory=set)
    result_subscribers: Set[str] = field(default_factory=set)
    reputation_threshold: float = 0.45

    def __post_init__(self):
        if self.raw_subscribers & self.result_subscribers:
            raise ValueError("raw and result subscriber sets must be disjoint")
        if not 0.0 <= self.reputation_threshold <= 1.0:
            raise ValueError("reputation_threshold must lie in [0, 1]")

    @property
    def j_raw(self) -> int:
        return len(self.raw_subscribers)

    @property
    def j_result(self) -> int:
        return len(self.result_subscribers)

    @property
    def size(self) -> int:
        return self.j_raw + self.j_result


def _quality(qocs: "QoCSVector", publisher: "Cav", sensor_type: str,
             part: int) -> float:
    if part == 0:
        return qocs.raw_quality * publisher.sensing(sensor_type)
    return qocs.result_quality * publisher.processing_capacity


def satisfaction(qocs: "QoCSVector", publisher: "Cav", sensor_type: str,
                 prefers_raw: bool, popularity: float, reputation: float,
                 econ: EconParams) -> float:
    """Satisfaction alpha * f * R * ln(1 + Q) of one subscriber.

    Q is the delivered quality of the preferred part: QoCS scaled by the
    publisher's sensing or processing capacity.
    """
    part = 0 if prefers_raw else 1
    q = _quality(qocs, publisher, sensor_type, part)
    return econ.satisfaction_coeff * popularity * reputation * math.log1p(q)


def subscriber_utility(qocs: "QoCSVector", price: PriceVector, prefers_raw: bool,
                       content: "Content", publisher: "Cav", popularity: float,
                       reputation: float, chan: ChannelParams,
                       econ: EconParams) -> float:
    """Satisfaction minus payment and delay disutility for one subscriber."""
    part = 0 if prefers_raw else 1
    sat = satisfaction(qocs, publisher, content.sensor_type, prefers_raw,
                       popularity, reputation, econ)
    p = price.as_tuple()[part]
    q = (qocs.raw_quality, qocs.result_quality)[part]
    delay = delay_vector(content, chan)[part]
    return (sat - econ.price_adjust[part] * p * q
            - econ.delay_adjust[part] * delay)


def group_utility(group: SubscriberGroup, qocs: "QoCSVector", price: PriceVector,
                  content: "Content", publisher: "Cav", popularity: float,
                  reputation: float, chan: ChannelParams,
                  econ: EconParams) -> float:
    """Aggregate utility of a subscriber group; equals the member sum."""
    if group.size == 0:
        raise ValueError("group has no subscribers")
    total = 0.0
    for part, count in ((0, group.j_raw), (1, group.j_result)):
        if count == 0:
            continue
        per_member = subscriber_utility(qocs, price, part == 0, content,
                                        publisher, popularity, reputation,
                                        chan, econ)
        total += count * per_member
    return total


def publisher_cost(qocs: "QoCSVector", publisher: "Cav", sensor_type: str,
                   econ: EconParams, has_raw_subs: bool,
                   has_result_subs: bool) -> float:
    """Quadratic production cost, charged only for parts with demand."""
    cost = 0.0
    if has_raw_subs:
        cost += (econ.cost_adjust[0] * econ.raw_cost_param
                 * publisher.sensing(sensor_type) * qocs.raw_quality ** 2)
    if has_result_subs:
        cost += (econ.cost_adjust[1] * econ.result_cost_param
                 * publisher.processing_capacity * qocs.result_quality ** 2)
    return cost


def publisher_utility(items: Sequence[Tuple[SubscriberGroup, "QoCSVector",
                                            PriceVector, "Content", float]],
                      publisher: "Cav", chan: ChannelParams,
                      econ: EconParams) -> float:
    """Publisher payoff over its published contents.

    Each item is (group, qocs, price, content, distance_m). Revenue is
    the per-part payments, net of production cost, transmit energy for
    the parts actually served, and the per-content listing fee.
    """
    total = 0.0
    for group, qocs, price, content, distance_m in items:
        revenue = 0.0
        qs = (qocs.raw_quality, qocs.result_quality)
        ps = price.as_tuple()
        counts = (group.j_raw, group.j_result)
        for part in (0, 1):
            revenue += counts[part] * econ.price_adjust[part] * ps[part] * qs[part]
        cost = publisher_cost(qocs, publisher, content.sensor_type, econ,
                              counts[0] > 0, counts[1] > 0)
        e_raw, e_result = energy_cost(content, distance_m, chan)
        energy = (e_raw if counts[0] > 0 else 0.0) + (e_result if counts[1] > 0 else 0.0)
        total += revenue - cost - energy - econ.listing_fee
    return total


def group_payment(group: SubscriberGroup, qocs: "QoCSVector",
                  price: PriceVector, econ: EconParams) -> float:
    """Total payment leaving a subscriber group for one content."""
    qs = (qocs.raw_quality, qocs.result_quality)
    ps = price.as_tuple()
    counts = (group.j_raw, group.j_result)
    return sum(counts[p] * econ.price_adjust[p] * ps[p] * qs[p] for p in (0, 1))
