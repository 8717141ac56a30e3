"""Versioned binary container for serialized indexes.

Layout: a 20-byte header (magic "RFMX", format version, section count,
blake2b-64 digest of the 12 header bytes before it plus everything after
the header), a section table of (tag, offset, length) entries, then the
payloads.  META carries the
alphabet and per-section digests; unknown tags are skipped on load so the
format can grow.  All integers little-endian; output is deterministic.
"""

import hashlib
import struct
from pathlib import Path

from relfm.fm import FMIndex
from relfm.invariant import RelativeSample
from relfm.relative import RelativeIndex
from relfm.text import Alphabet

MAGIC = b"RFMX"
VERSION = 1
_HEADER = struct.Struct("<4sIIQ")
_ENTRY = struct.Struct("<4sQQ")


class ContainerError(ValueError):
    """Malformed, corrupt, or mismatched container data."""


def _digest64(data):
    return struct.unpack("<Q", hashlib.blake2b(data, digest_size=8).digest())[0]


def write_container(sections):
    """Frame (tag, payload) pairs; tags are 4-byte identifiers."""
    body = bytearray()
    offset = _HEADER.size + _ENTRY.size * len(sections)
    table = bytearray()
    for tag, payload in sections:
        if len(tag) != 4:
            raise ValueError("section tag must be 4 bytes")
        table += _ENTRY.pack(tag, offset, len(payload))
        offset += len(payload)
    for _, payload in sections:
        body += payload
    tail = bytes(table) + bytes(body)
    head = struct.pack("<4sII", MAGIC, VERSION, len(sections))
    return head + struct.pack("<Q", _digest64(head + tail)) + tail


def read_container(data):
    """Sections of a container as {tag: payload}, fully validated."""
    if len(data) < _HEADER.size:
        raise ContainerError("truncated container")
    magic, version, count, digest = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise ContainerError("bad magic")
    if version != VERSION:
        raise ContainerError(f"unsupported version {version}")
    if _digest64(bytes(data[:12]) + bytes(data[_HEADER.size :])) != digest:
        raise ContainerError("corrupt container")
    if len(data) < _HEADER.size + _ENTRY.size * count:
        raise ContainerError("truncated container")
    out = {}
    for k in range(count):
        tag, offset, length = _ENTRY.unpack_from(data, _HEADER.size + _ENTRY.size * k)
        if offset + length > len(data):
            raise ContainerError("corrupt container")
        out[tag] = bytes(data[offset : offset + length])
    return out


def _meta_payload(alphabet, digests):
    cat = alphabet.symbols[alphabet.catchall - 1] if alphabet.catchall else 0xFFFF
    head = struct.pack("<H", len(alphabet.symbols)) + alphabet.symbols
    head += struct.pack("<HH", cat, len(digests))
    for tag, payload in digests:
        head += tag + hashlib.blake2b(payload, digest_size=8).digest()
    return head


def _parse_meta(buf):
    (k,) = struct.unpack_from("<H", buf, 0)
    symbols = bytes(buf[2 : 2 + k])
    cat, nd = struct.unpack_from("<HH", buf, 2 + k)
    alphabet = Alphabet(symbols, catchall=bytes([cat]) if cat != 0xFFFF else None)
    digests = {}
    off = 6 + k
    for _ in range(nd):
        tag = bytes(buf[off : off + 4])
        digests[tag] = bytes(buf[off + 4 : off + 12])
        off += 12
    return alphabet, digests


def _check_digests(sections, digests):
    for tag, want in digests.items():
        if tag in sections:
            got = hashlib.blake2b(sections[tag], digest_size=8).digest()
            if got != want:
                raise ContainerError("corrupt container")


def dumps_fm(fm):
    payload = fm.payload()
    meta = _meta_payload(fm.alphabet, [(b"FMI1", payload)])
    return write_container([(b"FMI1", payload), (b"META", meta)])


def dumps_relative(rel, sample=None):
    sections = [(b"RFM1", rel.payload())]
    if sample is not None:
        sections.append((b"INV1", sample.payload()))
    meta = _meta_payload(rel.alphabet, sections)
    return write_container(sections + [(b"META", meta)])


def loads(data, reference=None):
    """Decode a container: an FMIndex, a RelativeIndex, or (with a locate
    sample present) a RelativeSample wrapping one.  Relative payloads need
    the reference index they were built against."""
    sections = read_container(data)
    if b"META" not in sections:
        raise ContainerError("missing META section")
    alphabet, digests = _parse_meta(sections[b"META"])
    _check_digests(sections, digests)
    if b"FMI1" in sections:
        return FMIndex.from_payload(sections[b"FMI1"], alphabet)
    if b"RFM1" in sections:
        if reference is None:
            raise ContainerError("reference index required")
        if reference.alphabet != alphabet:
            raise ContainerError("reference mismatch")
        rel = RelativeIndex.from_payload(sections[b"RFM1"], reference)
        if b"INV1" in sections:
            return RelativeSample.from_payload(sections[b"INV1"], rel)
        return rel
    raise ContainerError("no index section")


def save(path, obj):
    """Serialize an FMIndex, RelativeIndex, or RelativeSample to a file."""
    if isinstance(obj, FMIndex):
        data = dumps_fm(obj)
    elif isinstance(obj, RelativeSample):
        data = dumps_relative(obj.rel, obj)
    elif isinstance(obj, RelativeIndex):
        data = dumps_relative(obj)
    else:
        raise TypeError("cannot serialize this object")
    Path(path).write_bytes(data)


def load(path, reference=None):
    return loads(Path(path).read_bytes(), reference=reference)


def section_sizes(data):
    """Byte size per section tag (for reporting)."""
    return {tag.decode("ascii"): len(p) for tag, p in read_container(data).items()}
