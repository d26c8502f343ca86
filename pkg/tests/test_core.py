import numpy as np
import pytest

from spadsim.core import (BEHAVIOR_PROFILES, Cav, Fleet, ScenarioConfig,
                          TimeSlot, fork_rng, load_config, validate_config)


def test_time_slot_start():
    assert TimeSlot(0).start_s == 0.0
    assert TimeSlot(3, slot_length_s=0.5).start_s == 1.5


def test_time_slot_rejects_bad_values():
    with pytest.raises(ValueError):
        TimeSlot(-1)
    with pytest.raises(ValueError):
        TimeSlot(0, slot_length_s=0.0)


def test_cav_validation():
    cav = Cav("v0", 0, "legitimate", {"camera": 0.5}, 0.8)
    assert cav.sensing("camera") == 0.5
    assert cav.sensing("lidar") == 0.0
    with pytest.raises(ValueError):
        Cav("v1", 0, "sneaky")
    with pytest.raises(ValueError):
        Cav("v1", 0, "legitimate", processing_capacity=1.5)
    with pytest.raises(ValueError):
        Cav("v1", 0, "legitimate", {"camera": -0.1})
    with pytest.raises(ValueError):
        Cav("v1", 0, "legitimate", cache_capacity_bytes=0)


def test_behavior_profiles_cover_all_cav_kinds():
    assert BEHAVIOR_PROFILES == ("legitimate", "speculative", "malicious")


def test_fleet_validation():
    fleet = Fleet("f0", "v0", ["v0", "v1"], 20.0, 25.0)
    assert fleet.size == 2
    with pytest.raises(ValueError):
        Fleet("f0", "v9", ["v0", "v1"], 20.0, 25.0)
    with pytest.raises(ValueError):
        Fleet("f0", "v0", ["v0", "v0"], 20.0, 25.0)
    with pytest.raises(ValueError):
        Fleet("f0", "v0", ["v0"], -1.0, 25.0)
    with pytest.raises(ValueError):
        Fleet("f0", "v0", ["v0"], 20.0, 0.0)


def test_default_config_is_valid():
    assert validate_config(ScenarioConfig()) == []


def test_validate_config_reports_field_names():
    cfg = ScenarioConfig(num_road_segments=0, behavior_mix=(0.5, 0.5, 0.5),
                         scheme="NOPE", subscribe_prob=1.5)
    problems = validate_config(cfg)
    text = "; ".join(problems)
    assert "num_road_segments" in text
    assert "behavior_mix" in text
    assert "scheme" in text
    assert "subscribe_prob" in text


def test_validate_config_num_vehicles():
    assert validate_config(ScenarioConfig(num_vehicles=None)) == []
    assert validate_config(ScenarioConfig(num_vehicles=10)) == []
    problems = validate_config(ScenarioConfig(num_vehicles=0))
    assert any("num_vehicles" in p for p in problems)


def test_load_config_round_trip(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text(
        "# comment line\n"
        "\n"
        "num_road_segments = 7\n"
        "segment_length_range_m = 30, 40\n"
        "behavior_mix = 0.5, 0.3, 0.2\n"
        "role_correlation = false\n"
        "subscribe_prob = 0.25\n"
        "scheme = BIT\n"
        "num_vehicles = 12\n",
        encoding="utf-8")
    cfg = load_config(str(path))
    assert cfg.num_road_segments == 7
    assert cfg.segment_length_range_m == (30.0, 40.0)
    assert cfg.behavior_mix == (0.5, 0.3, 0.2)
    assert cfg.role_correlation is False
    assert cfg.subscribe_prob == 0.25
    assert cfg.scheme == "BIT"
    assert cfg.num_vehicles == 12


def test_load_config_num_vehicles_none(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text("num_vehicles = none\n", encoding="utf-8")
    assert load_config(str(path)).num_vehicles is None


def test_load_config_rejects_unknown_key(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text("num_lanes = 3\n", encoding="utf-8")
    with pytest.raises(ValueError, match="unknown config key"):
        load_config(str(path))


def test_load_config_rejects_invalid_values(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text("subscribe_prob = 1.7\n", encoding="utf-8")
    with pytest.raises(ValueError, match="subscribe_prob"):
        load_config(str(path))


def test_load_config_rejects_malformed_line(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text("just some words\n", encoding="utf-8")
    with pytest.raises(ValueError, match="key = value"):
        load_config(str(path))


def test_fork_rng_is_deterministic():
    a = fork_rng(42, "episode", "v0001").random(5)
    b = fork_rng(42, "episode", "v0001").random(5)
    assert np.array_equal(a, b)


def test_fork_rng_streams_differ_by_key_and_seed():
    base = fork_rng(42, "episode", "v0001").random(5)
    other_key = fork_rng(42, "episode", "v0002").random(5)
    other_seed = fork_rng(43, "episode", "v0001").random(5)
    assert not np.array_equal(base, other_key)
    assert not np.array_equal(base, other_seed)


def test_fork_rng_independent_of_creation_order():
    first = fork_rng(7, "a")
    second = fork_rng(7, "b")
    a_then_b = (first.random(), second.random())
    second2 = fork_rng(7, "b")
    first2 = fork_rng(7, "a")
    b_then_a = (first2.random(), second2.random())
    assert a_then_b == b_then_a
