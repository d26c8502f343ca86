"""Content catalog, popularity, metadata, and the fleet broker.

Payload bytes are synthetic. Hashes are computed over compact payload
stand-ins (or caller supplied buffers in tests), which keeps the
tamper-evidence semantics without hashing megabytes per slot.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .core import TimeSlot
from .economics import SubscriberGroup


@dataclass
class Content:
    """One published content: a raw sensory part plus a processed result."""

    id: str
    topic_id: str
    publisher_id: str
    sensor_type: str
    raw_size_bytes: float
    result_size_bytes: float
    popularity_rank: int
    ground_truth_honest: bool = True

    def __post_init__(self):
        if self.raw_size_bytes <= 0 or self.result_size_bytes <= 0:
            raise ValueError("content part sizes must be positive")
        if self.popularity_rank < 1:
            raise ValueError("popularity_rank starts at 1")


@dataclass
class PopularityParams:
    zipf_exponent: float = 0.9
    catalog_size: int = 10

    def __post_init__(self):
        if self.zipf_exponent < 0:
            raise ValueError("zipf_exponent must be non-negative")
        if self.catalog_size < 1:
            raise ValueError("catalog_size must be positive")


def zipf_popularity(rank: int, params: PopularityParams) -> float:
    """Zipf popularity rank^-k / sum_l l^-k over the catalog."""
    if not 1 <= rank <= params.catalog_size:
        raise ValueError("rank must lie in [1, catalog_size]")
    k = params.zipf_exponent
    denom = sum(l ** (-k) for l in range(1, params.catalog_size + 1))
    return rank ** (-k) / denom


@dataclass
class QoCSVector:
    """Quality of content service chosen by the publisher, per part."""

    raw_quality: float
    result_quality: float

    def __post_init__(self):
        for q in (self.raw_quality, self.result_quality):
            if not 0.0 <= q <= 1.0:
                raise ValueError("QoCS values must lie in [0, 1]")

    def as_tuple(self) -> Tuple[float, float]:
        return (self.raw_quality, self.result_quality)


@dataclass
class QualityVector:
    """Delivered quality: QoCS scaled by publisher capacities."""

    raw: float
    result: float


def content_quality(qocs: QoCSVector, publisher, sensor_type: str) -> QualityVector:
    return QualityVector(qocs.raw_quality * publisher.sensing(sensor_type),
                         qocs.result_quality * publisher.processing_capacity)


class MockSigner:
    """Deterministic stand-in for a signature scheme.

    sign binds the key id to a digest; verify recomputes. No key secrecy
    is modeled, which is all the simulator needs.
    """

    def __init__(self, key_id: str):
        self.key_id = key_id

    def sign(self, digest: bytes) -> bytes:
        return hashlib.sha256(b"sig:" + self.key_id.encode("utf-8") + digest).digest()

    def verify(self, digest: bytes, signature: bytes) -> bool:
        return self.sign(digest) == signature


@dataclass
class Metadata:
    """Broker record describing one published content.

    Binary layout (serialize_metadata): fields in declaration order,
    each encoded as a 4 byte big endian length followed by the payload
    bytes. publish_time encodes as 8 byte big endian slot index plus an
    IEEE754 big endian slot length. meta_hash covers the serialization
    of all fields before it; signature covers meta_hash.
    """

    publisher_identity: str
    publish_time: TimeSlot
    sensor_type: str
    multicast_address: str
    raw_hash: bytes
    result_hash: bytes
    meta_hash: bytes = b""
    signature: bytes = b""


def _frame(chunks: List[bytes]) -> bytes:
    out = bytearray()
    for chunk in chunks:
        out.extend(struct.pack(">I", len(chunk)))
        out.extend(chunk)
    return bytes(out)


def _hashable_fields(meta: Metadata) -> List[bytes]:
    return [
        meta.publisher_identity.encode("utf-8"),
        struct.pack(">q", meta.publish_time.index) + struct.pack(">d", meta.publish_time.slot_length_s),
        meta.sensor_type.encode("utf-8"),
        meta.multicast_address.encode("utf-8"),
        meta.raw_hash,
        meta.result_hash,
    ]


def serialize_metadata(meta: Metadata) -> bytes:
    """Length prefixed binary encoding of all eight fields."""
    return _frame(_hashable_fields(meta) + [meta.meta_hash, meta.signature])


def deserialize_metadata(blob: bytes) -> Metadata:
    chunks: List[bytes] = []
    offset = 0
    while offset < len(blob):
        if offset + 4 > len(blob):
            raise ValueError("truncated metadata record")
        (length,) = struct.unpack_from(">I", blob, offset)
        offset += 4
        if offset + length > len(blob):
            raise ValueError("truncated metadata record")
        chunks.append(blob[offset:offset + length])
        offset += length
    if len(chunks) != 8:
        raise ValueError(f"metadata record has {len(chunks)} fields, expected 8")
    index = struct.unpack(">q", chunks[1][:8])[0]
    slot_len = struct.unpack(">d", chunks[1][8:])[0]
    return Metadata(
        publisher_identity=chunks[0].decode("utf-8"),
        publish_time=TimeSlot(index, slot_len),
        sensor_type=chunks[2].decode("utf-8"),
        multicast_address=chunks[3].decode("utf-8"),
        raw_hash=chunks[4],
        result_hash=chunks[5],
        meta_hash=chunks[6],
        signature=chunks[7],
    )


def metadata_text_dump(meta: Metadata) -> str:
    """Human readable one-record dump for debugging and CLI output."""
    lines = [
        f"publisher_identity: {meta.publisher_identity}",
        f"publish_time: slot {meta.publish_time.index} ({meta.publish_time.slot_length_s} s)",
        f"sensor_type: {meta.sensor_type}",
        f"multicast_address: {meta.multicast_address}",
        f"raw_hash: {meta.raw_hash.hex()}",
        f"result_hash: {meta.result_hash.hex()}",
        f"meta_hash: {meta.meta_hash.hex()}",
        f"signature: {meta.signature.hex()}",
    ]
    return "\n".join(lines)


def payload_standin(content: Content, part: str) -> bytes:
    """Compact deterministic stand-in for a content part's payload."""
    size = content.raw_size_bytes if part == "raw" else content.result_size_bytes
    return (f"{content.id}|{content.topic_id}|{content.publisher_id}|{part}|"
            f"{size}|{content.ground_truth_honest}").encode("utf-8")


def build_metadata(content: Content, slot: TimeSlot, multicast_address: str,
                   signer: Optional[MockSigner] = None,
                   raw_payload: Optional[bytes] = None,
                   result_payload: Optional[bytes] = None) -> Metadata:
    """Assemble the metadata record for one content at publish time."""
    if signer is None:
        signer = MockSigner(content.publisher_id)
    raw = raw_payload if raw_payload is not None else payload_standin(content, "raw")
    result = (result_payload if result_payload is not None
              else payload_standin(content, "result"))
    meta = Metadata(
        publisher_identity=content.publisher_id,
        publish_time=slot,
        sensor_type=content.sensor_type,
        multicast_address=multicast_address,
        raw_hash=hashlib.sha256(raw).digest(),
        result_hash=hashlib.sha256(result).digest(),
    )
    meta.meta_hash = hashlib.sha256(_frame(_hashable_fields(meta))).digest()
    meta.signature = signer.sign(meta.meta_hash)
    return meta


def verify_metadata(meta: Metadata, signer: Optional[MockSigner] = None) -> bool:
    """Check hash chain and signature; False on any mismatch."""
    if signer is None:
        signer = MockSigner(meta.publisher_identity)
    expected = hashlib.sha256(_frame(_hashable_fields(meta))).digest()
    if expected != meta.meta_hash:
        return False
    return signer.verify(meta.meta_hash, meta.signature)


@dataclass
class Subscription:
    subscriber_id: str
    content_id: str
    prefers_raw: bool


@dataclass
class _Retained:
    meta: Metadata
    content_id: str
    topic_id: str
    publish_slot: int
    size_bytes: int


class BrokerState:
    """Publish/subscribe state held by one fleet's master CAV.

    Topics must be registered before use, publishers before publishing.
    Retained metadata is bounded both by the retention window and the
    broker buffer; the oldest records are evicted first.
    """

    def __init__(self, buffer_bytes: int = 10**6, retention_window_slots: int = 1):
        if buffer_bytes <= 0:
            raise ValueError("buffer_bytes must be positive")
        if retention_window_slots < 1:
            raise ValueError("retention_window_slots must be at least 1")
        self.buffer_bytes = buffer_bytes
        self.retention_window_slots = retention_window_slots
        self.topics: Dict[str, Dict] = {}
        self.window: List[_Retained] = []
        self.groups: Dict[str, SubscriberGroup] = {}
        self.subscriptions: List[Subscription] = []

    def register_topic(self, topic_id: str) -> None:
        self.topics.setdefault(topic_id, {"publishers": set(), "subscribers": set()})

    def register_publisher(self, topic_id: str, publisher_id: str) -> None:
        if topic_id not in self.topics:
            raise KeyError(f"unknown topic {topic_id!r}")
        self.topics[topic_id]["publishers"].add(publisher_id)

    def retained_bytes(self) -> int:
        return sum(r.size_bytes for r in self.window)

    def find(self, content_id: str) -> Optional[_Retained]:
        for rec in self.window:
            if rec.content_id == content_id:
                return rec
        return None


def publish(broker: BrokerState, meta: Metadata, content_id: str, topic_id: str,
            slot: TimeSlot) -> List[str]:
    """Retain metadata for one content and return the notification list.

    The notification list holds current subscribers of the topic. Records
    older than the retention window, then oldest records above the buffer
    limit, are evicted.
    """
    if topic_id not in broker.topics:
        raise KeyError(f"unknown topic {topic_id!r}")
    if meta.publisher_identity not in broker.topics[topic_id]["publishers"]:
        raise ValueError(f"publisher {meta.publisher_identity!r} not registered "
                         f"at topic {topic_id!r}")
    size = len(serialize_metadata(meta))
    broker.window.append(_Retained(meta, content_id, topic_id, slot.index, size))
    keep_from = slot.index - broker.retention_window_slots
    broker.window = [r for r in broker.window if r.publish_slot > keep_from]
    while broker.window and broker.retained_bytes() > broker.buffer_bytes:
        broker.window.pop(0)
    live = {r.content_id for r in broker.window}
    broker.groups = {cid: g for cid, g in broker.groups.items() if cid in live}
    broker.subscriptions = [s for s in broker.subscriptions if s.content_id in live]
    return sorted(broker.topics[topic_id]["subscribers"])


def subscribe(broker: BrokerState, sub: Subscription, publisher_reputation: float,
              reputation_threshold: float) -> bool:
    """Apply the reputation gate; on accept, join the content's group.

    Returns True when accepted. The boundary is inclusive: a publisher
    sitting exactly at the threshold is accepted. Unknown content ids
    raise KeyError.
    """
    rec = broker.find(sub.content_id)
    if rec is None:
        raise KeyError(f"content {sub.content_id!r} not in the metadata window")
    if publisher_reputation < reputation_threshold:
        return False
    group = broker.groups.get(sub.content_id)
    if group is None:
        group = SubscriberGroup(sub.content_id,
                                reputation_threshold=reputation_threshold)
        broker.groups[sub.content_id] = group
    if sub.prefers_raw:
        if sub.subscriber_id in group.result_subscribers:
            raise ValueError("subscriber already joined with the other preference")
        group.raw_subscribers.add(sub.subscriber_id)
    else:
        if sub.subscriber_id in group.raw_subscribers:
            raise ValueError("subscriber already joined with the other preference")
        group.result_subscribers.add(sub.subscriber_id)
    broker.subscriptions.append(sub)
    broker.topics[rec.topic_id]["subscribers"].add(sub.subscriber_id)
    return True
