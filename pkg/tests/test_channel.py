import math

import pytest

from spadsim.channel import (ChannelParams, channel_gain, dbm_to_watts,
                             delay_vector, energy_cost, link_rate,
                             transmit_power, watts_to_dbm)
from spadsim.content import Content

PARAMS = ChannelParams()


def make_content(raw_bytes=5e5, result_bytes=1e5):
    return Content("c0", "t0", "v0", "camera", raw_bytes, result_bytes, 1)


def test_dbm_watts_round_trip():
    assert dbm_to_watts(30.0) == pytest.approx(1.0, rel=1e-12)
    assert watts_to_dbm(1.0) == pytest.approx(30.0, abs=1e-12)
    assert dbm_to_watts(23.0) == pytest.approx(0.19952623149688797, rel=1e-12)
    for dbm in (-110.0, 0.0, 23.0):
        assert watts_to_dbm(dbm_to_watts(dbm)) == pytest.approx(dbm, abs=1e-9)
    with pytest.raises(ValueError):
        watts_to_dbm(0.0)


def test_link_rate_oracle():
    # 2 MHz bandwidth at SINR 100: B log2(1 + SINR).
    assert link_rate(PARAMS) == pytest.approx(13316422.96550359, rel=1e-12)


def test_delay_oracle():
    content = make_content()
    d_raw, d_result = delay_vector(content, PARAMS)
    assert d_raw == pytest.approx(0.30038096644737594, rel=1e-12)
    assert d_result == pytest.approx(d_raw / 5.0, rel=1e-12)


def test_delay_scales_linearly_with_size():
    small = delay_vector(make_content(1e5, 1e4), PARAMS)
    large = delay_vector(make_content(2e5, 2e4), PARAMS)
    assert large[0] == pytest.approx(2 * small[0], rel=1e-12)
    assert large[1] == pytest.approx(2 * small[1], rel=1e-12)


def test_channel_gain_power_law():
    assert channel_gain(1.0, PARAMS) == 1.0
    assert channel_gain(10.0, PARAMS) == pytest.approx(1e-4, rel=1e-12)
    with pytest.raises(ValueError):
        channel_gain(0.0, PARAMS)


def test_fixed_power_ignores_distance():
    p1 = transmit_power(10.0, PARAMS)
    p2 = transmit_power(500.0, PARAMS)
    assert p1 == p2 == pytest.approx(0.19952623149688797, rel=1e-12)


def test_sinr_target_power_grows_with_distance():
    params = ChannelParams(power_mode="sinr_target",
                           cochannel_interference=1e-13)
    near = transmit_power(10.0, params)
    far = transmit_power(100.0, params)
    assert far > near
    clean = ChannelParams(power_mode="sinr_target",
                          cochannel_interference=0.0)
    assert transmit_power(50.0, clean) == pytest.approx(
        dbm_to_watts(clean.base_power_dbm), rel=1e-12)


def test_energy_oracle():
    content = make_content()
    e_raw, e_result = energy_cost(content, 50.0, PARAMS)
    assert e_raw == pytest.approx(0.05993388224863807, rel=1e-12)
    assert e_result == pytest.approx(e_raw / 5.0, rel=1e-12)


def test_params_validation():
    with pytest.raises(ValueError):
        ChannelParams(bandwidth_hz=0.0)
    with pytest.raises(ValueError):
        ChannelParams(power_mode="loud")
    with pytest.raises(ValueError):
        ChannelParams(pathloss_exponent=0.0)
    with pytest.raises(ValueError):
        ChannelParams(sinr_target=-1.0)
