"""Tests for content catalog, metadata records, and the fleet broker."""

import math

import pytest

from spadsim.content import (BrokerState, Content, Metadata, MockSigner,
                             PopularityParams, QoCSVector, Subscription,
                             build_metadata, content_quality,
                             deserialize_metadata, metadata_text_dump,
                             payload_standin, publish, serialize_metadata,
                             subscribe, verify_metadata, zipf_popularity)
from spadsim.core import Cav, TimeSlot


def make_content(content_id="c1", publisher="veh-1", rank=1):
    return Content(content_id, "topic-a", publisher, "camera",
                   raw_size_bytes=2e5, result_size_bytes=5e3,
                   popularity_rank=rank)


def test_zipf_two_item_catalog():
    params = PopularityParams(zipf_exponent=1.0, catalog_size=2)
    assert zipf_popularity(1, params) == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert zipf_popularity(2, params) == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_zipf_normalizes_and_decreases():
    params = PopularityParams(zipf_exponent=0.9, catalog_size=25)
    probs = [zipf_popularity(r, params) for r in range(1, 26)]
    assert abs(sum(probs) - 1.0) < 1e-12
    for a, b in zip(probs, probs[1:]):
        assert a >= b


def test_zipf_zero_exponent_is_uniform():
    params = PopularityParams(zipf_exponent=0.0, catalog_size=8)
    for r in range(1, 9):
        assert zipf_popularity(r, params) == pytest.approx(1.0 / 8.0)


def test_zipf_rank_out_of_range():
    params = PopularityParams(catalog_size=5)
    with pytest.raises(ValueError):
        zipf_popularity(0, params)
    with pytest.raises(ValueError):
        zipf_popularity(6, params)


def test_popularity_params_validation():
    with pytest.raises(ValueError):
        PopularityParams(zipf_exponent=-0.1)
    with pytest.raises(ValueError):
        PopularityParams(catalog_size=0)


def test_content_validation():
    with pytest.raises(ValueError):
        Content("c", "t", "p", "camera", 0.0, 1e3, 1)
    with pytest.raises(ValueError):
        Content("c", "t", "p", "camera", 1e5, 1e3, 0)


def test_qocs_vector_bounds():
    QoCSVector(0.0, 1.0)
    with pytest.raises(ValueError):
        QoCSVector(-0.01, 0.5)
    with pytest.raises(ValueError):
        QoCSVector(0.5, 1.01)
    assert QoCSVector(0.3, 0.7).as_tuple() == (0.3, 0.7)


def test_content_quality_scales_by_capacity():
    pub = Cav("veh-1", 0, "legitimate", sensing_capacity={"camera": 0.8},
              processing_capacity=0.5)
    q = content_quality(QoCSVector(0.5, 1.0), pub, "camera")
    assert q.raw == pytest.approx(0.4)
    assert q.result == pytest.approx(0.5)
    # missing sensor type means zero raw quality
    q2 = content_quality(QoCSVector(1.0, 1.0), pub, "lidar")
    assert q2.raw == 0.0


def test_mock_signer_round_trip():
    signer = MockSigner("veh-1")
    digest = b"\x01" * 32
    sig = signer.sign(digest)
    assert signer.verify(digest, sig)
    assert not signer.verify(b"\x02" * 32, sig)
    assert not MockSigner("veh-2").verify(digest, sig)


def test_metadata_serialize_round_trip():
    meta = build_metadata(make_content(), TimeSlot(7), "239.0.0.1")
    blob = serialize_metadata(meta)
    back = deserialize_metadata(blob)
    assert back == meta
    assert back.publish_time.index == 7


def test_deserialize_rejects_truncation():
    meta = build_metadata(make_content(), TimeSlot(0), "239.0.0.1")
    blob = serialize_metadata(meta)
    with pytest.raises(ValueError, match="truncated"):
        deserialize_metadata(blob[:-5])
    with pytest.raises(ValueError, match="truncated"):
        deserialize_metadata(blob[:2])


def test_deserialize_rejects_wrong_field_count():
    with pytest.raises(ValueError, match="expected 8"):
        deserialize_metadata(b"\x00\x00\x00\x01a")


def test_verify_metadata_detects_tampering():
    meta = build_metadata(make_content(), TimeSlot(3), "239.0.0.1")
    assert verify_metadata(meta)
    tampered = deserialize_metadata(serialize_metadata(meta))
    tampered.sensor_type = "lidar"
    assert not verify_metadata(tampered)
    forged = deserialize_metadata(serialize_metadata(meta))
    forged.signature = b"\x00" * 32
    assert not verify_metadata(forged)
    # signature from a different key fails even with a valid hash chain
    stolen = deserialize_metadata(serialize_metadata(meta))
    stolen.signature = MockSigner("veh-other").sign(stolen.meta_hash)
    assert not verify_metadata(stolen)


def test_build_metadata_hashes_payloads():
    content = make_content()
    meta_a = build_metadata(content, TimeSlot(0), "239.0.0.1")
    meta_b = build_metadata(content, TimeSlot(0), "239.0.0.1",
                            raw_payload=b"different bytes")
    assert meta_a.raw_hash != meta_b.raw_hash
    assert meta_a.result_hash == meta_b.result_hash
    assert payload_standin(content, "raw") != payload_standin(content, "result")


def test_metadata_text_dump_mentions_fields():
    meta = build_metadata(make_content(), TimeSlot(2), "239.0.0.9")
    text = metadata_text_dump(meta)
    assert "veh-1" in text
    assert "slot 2" in text
    assert meta.raw_hash.hex() in text


def make_broker(**kwargs):
    broker = BrokerState(**kwargs)
    broker.register_topic("topic-a")
    broker.register_publisher("topic-a", "veh-1")
    return broker


def test_publish_requires_registration():
    broker = BrokerState()
    meta = build_metadata(make_content(), TimeSlot(0), "239.0.0.1")
    with pytest.raises(KeyError, match="unknown topic"):
        publish(broker, meta, "c1", "topic-a", TimeSlot(0))
    broker.register_topic("topic-a")
    with pytest.raises(ValueError, match="not registered"):
        publish(broker, meta, "c1", "topic-a", TimeSlot(0))
    with pytest.raises(KeyError):
        broker.register_publisher("topic-b", "veh-1")


def test_publish_retention_window_evicts_old_records():
    broker = make_broker(retention_window_slots=1)
    meta = build_metadata(make_content(), TimeSlot(0), "239.0.0.1")
    publish(broker, meta, "c1", "topic-a", TimeSlot(0))
    assert broker.find("c1") is not None
    meta2 = build_metadata(make_content("c2"), TimeSlot(1), "239.0.0.2")
    publish(broker, meta2, "c2", "topic-a", TimeSlot(1))
    assert broker.find("c1") is None
    assert broker.find("c2") is not None


def test_publish_wider_window_keeps_both():
    broker = make_broker(retention_window_slots=2)
    publish(broker, build_metadata(make_content(), TimeSlot(0), "a"),
            "c1", "topic-a", TimeSlot(0))
    publish(broker, build_metadata(make_content("c2"), TimeSlot(1), "b"),
            "c2", "topic-a", TimeSlot(1))
    assert broker.find("c1") is not None
    assert broker.find("c2") is not None


def test_publish_buffer_evicts_oldest_first():
    meta = build_metadata(make_content(), TimeSlot(0), "239.0.0.1")
    record_size = len(serialize_metadata(meta))
    broker = make_broker(buffer_bytes=int(record_size * 1.5),
                         retention_window_slots=10)
    publish(broker, meta, "c1", "topic-a", TimeSlot(0))
    publish(broker, build_metadata(make_content("c2"), TimeSlot(0), "x"),
            "c2", "topic-a", TimeSlot(0))
    assert broker.find("c1") is None
    assert broker.find("c2") is not None
    assert broker.retained_bytes() <= broker.buffer_bytes


def test_eviction_drops_stale_groups_and_subscriptions():
    broker = make_broker(retention_window_slots=1)
    publish(broker, build_metadata(make_content(), TimeSlot(0), "a"),
            "c1", "topic-a", TimeSlot(0))
    subscribe(broker, Subscription("veh-2", "c1", True), 0.9, 0.45)
    assert "c1" in broker.groups
    publish(broker, build_metadata(make_content("c2"), TimeSlot(5), "b"),
            "c2", "topic-a", TimeSlot(5))
    assert "c1" not in broker.groups
    assert all(s.content_id != "c1" for s in broker.subscriptions)


def test_publish_notifies_sorted_subscribers():
    broker = make_broker()
    broker.topics["topic-a"]["subscribers"].update({"veh-9", "veh-2", "veh-5"})
    notified = publish(broker, build_metadata(make_content(), TimeSlot(0), "a"),
                       "c1", "topic-a", TimeSlot(0))
    assert notified == ["veh-2", "veh-5", "veh-9"]


def test_subscribe_gate_boundary_is_inclusive():
    broker = make_broker()
    publish(broker, build_metadata(make_content(), TimeSlot(0), "a"),
            "c1", "topic-a", TimeSlot(0))
    assert not subscribe(broker, Subscription("veh-2", "c1", True),
                         0.45 - 1e-9, 0.45)
    assert subscribe(broker, Subscription("veh-2", "c1", True), 0.45, 0.45)
    group = broker.groups["c1"]
    assert "veh-2" in group.raw_subscribers
    assert group.reputation_threshold == 0.45


def test_subscribe_unknown_content():
    broker = make_broker()
    with pytest.raises(KeyError, match="not in the metadata window"):
        subscribe(broker, Subscription("veh-2", "missing", True), 0.9, 0.45)


def test_subscribe_preference_conflict():
    broker = make_broker()
    publish(broker, build_metadata(make_content(), TimeSlot(0), "a"),
            "c1", "topic-a", TimeSlot(0))
    assert subscribe(broker, Subscription("veh-2", "c1", True), 0.9, 0.45)
    with pytest.raises(ValueError, match="other preference"):
        subscribe(broker, Subscription("veh-2", "c1", False), 0.9, 0.45)


def test_subscribe_splits_preferences():
    broker = make_broker()
    publish(broker, build_metadata(make_content(), TimeSlot(0), "a"),
            "c1", "topic-a", TimeSlot(0))
    subscribe(broker, Subscription("veh-2", "c1", True), 0.9, 0.45)
    subscribe(broker, Subscription("veh-3", "c1", False), 0.9, 0.45)
    group = broker.groups["c1"]
    assert group.raw_subscribers == {"veh-2"}
    assert group.result_subscribers == {"veh-3"}
    assert broker.topics["topic-a"]["subscribers"] == {"veh-2", "veh-3"}


def test_broker_state_validation():
    with pytest.raises(ValueError):
        BrokerState(buffer_bytes=0)
    with pytest.raises(ValueError):
        BrokerState(retention_window_slots=0)
