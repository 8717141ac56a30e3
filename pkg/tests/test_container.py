"""Tests for the versioned index container format."""

import struct

import numpy as np
import pytest

from conftest import DNA, dna_pair, dna_text
from relfm import container
from relfm.container import ContainerError, load, loads, save, section_sizes
from relfm.fm import FMIndex
from relfm.invariant import RelativeSample, build_relative_sample
from relfm.relative import RelativeIndex
from relfm.text import Alphabet, Text


@pytest.fixture(scope="module")
def fm_small():
    rng = np.random.default_rng(12)
    return FMIndex.build(dna_text(rng, 1200), rate=8)


@pytest.fixture(scope="module")
def rel_pair():
    t1, t2 = dna_pair(12, 1200, rate=0.02)
    ref = FMIndex.build(t1, rate=8)
    sample = build_relative_sample(ref, t2, source_text=t1)
    return ref, sample


def test_header_layout(fm_small, tmp_path):
    path = tmp_path / "ix.rfmx"
    save(path, fm_small)
    data = path.read_bytes()
    magic, version, count, digest = struct.unpack_from("<4sIIQ", data, 0)
    assert magic == b"RFMX"
    assert version == 1
    assert count == 2  # FMI1 + META
    tags = [struct.unpack_from("<4sQQ", data, 20 + 20 * k)[0] for k in range(count)]
    assert tags == [b"FMI1", b"META"]


def test_fm_roundtrip(fm_small, tmp_path):
    path = tmp_path / "ix.rfmx"
    save(path, fm_small)
    back = load(path)
    assert isinstance(back, FMIndex)
    assert back.digest() == fm_small.digest()
    assert back.alphabet == fm_small.alphabet
    for p in (b"A", b"GATT", b"ACGTACGT"):
        assert back.count(p) == fm_small.count(p)
    rg = back.range_of(b"AC")
    assert back.locate(rg) == fm_small.locate(fm_small.range_of(b"AC"))


def test_relative_roundtrip_with_and_without_sample(rel_pair, tmp_path):
    ref, sample = rel_pair
    rel = sample.rel

    p1 = tmp_path / "rel.rfmx"
    save(p1, rel)
    back = load(p1, reference=ref)
    assert isinstance(back, RelativeIndex)
    assert back.count(b"GATT") == rel.count(b"GATT")

    p2 = tmp_path / "sample.rfmx"
    save(p2, sample)
    back = load(p2, reference=ref)
    assert isinstance(back, RelativeSample)
    rg = back.rel.range_of(b"AC")
    assert back.locate(rg) == sample.locate(rg)


def test_relative_requires_reference(rel_pair, tmp_path):
    _, sample = rel_pair
    path = tmp_path / "rel.rfmx"
    save(path, sample.rel)
    with pytest.raises(ContainerError, match="reference index required"):
        load(path)


def test_relative_wrong_reference(rel_pair, tmp_path):
    ref, sample = rel_pair
    path = tmp_path / "rel.rfmx"
    save(path, sample.rel)

    other = FMIndex.build(dna_text(np.random.default_rng(99), 1200), rate=8)
    with pytest.raises(ValueError, match="reference mismatch"):
        load(path, reference=other)

    plain = Alphabet(b"ACGT")
    raw = ref.extract(1, ref.n).replace(b"N", b"A")
    foreign = FMIndex.build(Text.from_bytes(raw, alphabet=plain), rate=8)
    with pytest.raises(ContainerError, match="reference mismatch"):
        load(path, reference=foreign)


def test_single_byte_corruption_detected(fm_small):
    data = bytearray(container.dumps_fm(fm_small))
    rng = np.random.default_rng(4)
    offsets = rng.integers(0, len(data), size=100)
    for off in offsets:
        bad = bytearray(data)
        bad[off] ^= 1 + int(rng.integers(0, 255))
        with pytest.raises(ContainerError):
            loads(bytes(bad))


def test_truncated_container(fm_small):
    data = container.dumps_fm(fm_small)
    with pytest.raises(ContainerError, match="truncated container"):
        loads(data[:12])
    with pytest.raises(ContainerError):
        loads(data[:-30])


def test_bad_magic(fm_small):
    data = bytearray(container.dumps_fm(fm_small))
    data[:4] = b"ZIPX"
    with pytest.raises(ContainerError, match="bad magic"):
        loads(bytes(data))


def test_unsupported_version(fm_small):
    data = container.dumps_fm(fm_small)
    head = struct.pack("<4sII", b"RFMX", 9, struct.unpack_from("<I", data, 8)[0])
    tail = data[20:]
    raised = head + struct.pack("<Q", container._digest64(head + tail)) + tail
    with pytest.raises(ContainerError, match="unsupported version 9"):
        loads(raised)


def test_missing_meta_and_missing_index(fm_small):
    sections = container.read_container(container.dumps_fm(fm_small))
    no_meta = container.write_container([(b"FMI1", sections[b"FMI1"])])
    with pytest.raises(ContainerError, match="missing META section"):
        loads(no_meta)
    meta_only = container.write_container([(b"META", sections[b"META"])])
    with pytest.raises(ContainerError, match="no index section"):
        loads(meta_only)


def test_unknown_sections_are_skipped(fm_small):
    sections = container.read_container(container.dumps_fm(fm_small))
    framed = container.write_container(
        [
            (b"FMI1", sections[b"FMI1"]),
            (b"ZZZZ", b"payload from a future format revision"),
            (b"META", sections[b"META"]),
        ]
    )
    back = loads(framed)
    assert back.digest() == fm_small.digest()


def test_cannot_serialize_arbitrary_object(tmp_path):
    with pytest.raises(TypeError, match="cannot serialize this object"):
        save(tmp_path / "x.rfmx", object())


def test_section_sizes(fm_small, rel_pair, tmp_path):
    data = container.dumps_fm(fm_small)
    sizes = section_sizes(data)
    assert set(sizes) == {"FMI1", "META"}
    assert sizes["FMI1"] == len(fm_small.payload())

    _, sample = rel_pair
    data = container.dumps_relative(sample.rel, sample)
    sizes = section_sizes(data)
    assert set(sizes) == {"RFM1", "INV1", "META"}
    assert sizes["RFM1"] == len(sample.rel.payload())
    assert sizes["INV1"] == len(sample.payload())


def test_serialization_is_deterministic(fm_small):
    assert container.dumps_fm(fm_small) == container.dumps_fm(fm_small)
    rng = np.random.default_rng(12)
    rebuilt = FMIndex.build(dna_text(rng, 1200), rate=8)
    assert container.dumps_fm(rebuilt) == container.dumps_fm(fm_small)
