"""V2V channel model: gain, power, rate, delay, and transmit energy.

Power enters and leaves the module in linear watts; dBm only appears in
configuration fields. Content sizes are stored in bytes (MB = 1e6 bytes,
KB = 1e3 bytes) and converted to bits exactly once, inside delay_vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Tuple

if TYPE_CHECKING:
    from .content import Content


@dataclass
class ChannelParams:
    """Link model parameters shared by a fleet.

    power_mode selects how transmit power is set: "fixed" uses
    fixed_power_dbm regardless of distance, "sinr_target" sizes power so
    the receiver hits sinr_target against co-channel interference.
    noise_power_dbm is carried for completeness; the rate formula is
    driven by the SINR target.
    """

    rayleigh_coeff: float = 1.0
    pathloss_exponent: float = 4.0
    sinr_target: float = 100.0
    cochannel_interference: float = 0.0
    base_power_dbm: float = 23.0
    bandwidth_hz: float = 2e6
    noise_power_dbm: float = -110.0
    power_mode: str = "fixed"
    fixed_power_dbm: float = 23.0

    def __post_init__(self):
        if self.rayleigh_coeff <= 0:
            raise ValueError("rayleigh_coeff must be positive")
        if self.pathloss_exponent <= 0:
            raise ValueError("pathloss_exponent must be positive")
        if self.sinr_target < 0:
            raise ValueError("sinr_target must be non-negative")
        if self.cochannel_interference < 0:
            raise ValueError("cochannel_interference must be non-negative")
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth_hz must be positive")
        if self.power_mode not in ("fixed", "sinr_target"):
            raise ValueError("power_mode must be 'fixed' or 'sinr_target'")


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    if watts <= 0:
        raise ValueError("power must be positive to express in dBm")
    return 10.0 * math.log10(watts) + 30.0


def channel_gain(distance_m: float, params: ChannelParams) -> float:
    """Average channel gain |mu0|^2 * d^-beta at distance d."""
    if distance_m <= 0:
        raise ValueError("distance_m must be positive")
    return params.rayleigh_coeff ** 2 * distance_m ** (-params.pathloss_exponent)


def transmit_power(distance_m: float, params: ChannelParams) -> float:
    """Transmit power in watts for one V2V link.

    In "sinr_target" mode the power is the base power plus the term that
    lifts the received SINR to the target under interference; with zero
    interference it reduces to the base power.
    """
    if distance_m <= 0:
        raise ValueError("distance_m must be positive")
    if params.power_mode == "fixed":
        return dbm_to_watts(params.fixed_power_dbm)
    base = dbm_to_watts(params.base_power_dbm)
    lift = (params.sinr_target / params.rayleigh_coeff ** 2
            * params.cochannel_interference
            * distance_m ** params.pathloss_exponent)
    return base + lift


def link_rate(params: ChannelParams) -> float:
    """Achievable rate in bit/s at the SINR target."""
    return params.bandwidth_hz * math.log2(1.0 + params.sinr_target)


def delay_vector(content: "Content", params: ChannelParams) -> Tuple[float, float]:
    """Transmission delay in seconds for (raw, result) parts of a content."""
    rate = link_rate(params)
    if rate <= 0:
        raise ValueError("link rate is zero; delay undefined")
    return (8.0 * content.raw_size_bytes / rate,
            8.0 * content.result_size_bytes / rate)


def energy_cost(content: "Content", distance_m: float,
                params: ChannelParams) -> Tuple[float, float]:
    """Transmit energy in joules for (raw, result) parts of a content."""
    power = transmit_power(distance_m, params)
    d_raw, d_result = delay_vector(content, params)
    return power * d_raw, power * d_result
