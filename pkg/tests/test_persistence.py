"""Binary matrix format, checksums, manifests, and trace files."""
import struct

import numpy as np
import pytest

from fracrom.inverse import TraceRecord
from fracrom.persistence import (
    TRACE_HEADER,
    PersistenceError,
    checksum_file,
    fnv1a64,
    load_manifest,
    manifest_add_file,
    read_matrix,
    read_trace,
    write_manifest,
    write_matrix,
    write_trace,
)


def test_checksum_reference_vectors():
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"ab") != fnv1a64(b"ba")


def test_matrix_round_trip_is_bitwise(tmp_path):
    rng = np.random.default_rng(0)
    data = rng.standard_normal((63, 256))
    path = tmp_path / "states.bin"
    checksum = write_matrix(path, data)
    back = read_matrix(path)
    assert back.dtype == np.float64
    np.testing.assert_array_equal(back, data)  # exact, not approximate
    assert checksum == checksum_file(path)


def test_vector_promoted_to_column(tmp_path):
    path = tmp_path / "vec.bin"
    write_matrix(path, np.array([1.0, 2.0, 3.0]))
    assert read_matrix(path).shape == (3, 1)


def test_empty_matrix_is_header_only(tmp_path):
    path = tmp_path / "empty.bin"
    write_matrix(path, np.zeros((0, 0)))
    assert path.stat().st_size == 24
    assert read_matrix(path).shape == (0, 0)


def test_header_layout(tmp_path):
    path = tmp_path / "m.bin"
    write_matrix(path, np.arange(6.0).reshape(2, 3))
    raw = path.read_bytes()
    magic, kind, rows, cols = struct.unpack("<6sHQQ", raw[:24])
    assert magic == b"FRMAT1"
    assert kind == 1
    assert (rows, cols) == (2, 3)
    np.testing.assert_array_equal(
        np.frombuffer(raw[24:], dtype="<f8").reshape(2, 3), np.arange(6.0).reshape(2, 3)
    )


def test_write_is_deterministic(tmp_path):
    data = np.random.default_rng(1).standard_normal((5, 4))
    a, b = tmp_path / "a.bin", tmp_path / "b.bin"
    write_matrix(a, data)
    write_matrix(b, data)
    assert a.read_bytes() == b.read_bytes()


def test_corrupt_files_rejected(tmp_path):
    path = tmp_path / "m.bin"
    write_matrix(path, np.ones((3, 3)))
    raw = bytearray(path.read_bytes())

    bad_magic = tmp_path / "magic.bin"
    bad_magic.write_bytes(b"XXXXXX" + bytes(raw[6:]))
    with pytest.raises(PersistenceError):
        read_matrix(bad_magic)

    bad_kind = tmp_path / "kind.bin"
    bad_kind.write_bytes(bytes(raw[:6]) + struct.pack("<H", 9) + bytes(raw[8:]))
    with pytest.raises(PersistenceError):
        read_matrix(bad_kind)

    truncated = tmp_path / "short.bin"
    truncated.write_bytes(bytes(raw[:-8]))
    with pytest.raises(PersistenceError):
        read_matrix(truncated)

    stub = tmp_path / "stub.bin"
    stub.write_bytes(b"FRMAT1")
    with pytest.raises(PersistenceError):
        read_matrix(stub)


def test_manifest_round_trip(tmp_path):
    path = tmp_path / "states.bin"
    checksum = write_matrix(path, np.ones((2, 2)))
    manifest = {"case": "demo"}
    manifest_add_file(manifest, "states", path, checksum)
    mpath = tmp_path / "run.json"
    write_manifest(mpath, manifest)

    text = mpath.read_text()
    assert text.endswith("\n")
    loaded = load_manifest(mpath)
    assert loaded["case"] == "demo"
    assert loaded["files"]["states"]["path"] == "states.bin"
    assert loaded["files"]["states"]["checksum"] == f"{checksum:016x}"


def test_manifest_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_manifest(a, {"z": 1, "files": {}, "a": 2})
    write_manifest(b, {"a": 2, "files": {}, "z": 1})
    assert a.read_bytes() == b.read_bytes()


def test_manifest_verification(tmp_path):
    path = tmp_path / "states.bin"
    checksum = write_matrix(path, np.ones((2, 2)))
    manifest = {}
    manifest_add_file(manifest, "states", path, checksum)
    mpath = tmp_path / "run.json"
    write_manifest(mpath, manifest)

    path.write_bytes(path.read_bytes()[:-1] + b"\x7f")
    with pytest.raises(PersistenceError):
        load_manifest(mpath)
    load_manifest(mpath, verify=False)  # opting out skips the re-hash

    path.unlink()
    with pytest.raises(PersistenceError):
        load_manifest(mpath)


def test_trace_round_trip(tmp_path):
    records = [
        TraceRecord(k=0, beta=0.5, objective=1.0 / 3.0, step=0.1, backtracks=0),
        TraceRecord(k=1, beta=0.517283950617283961, objective=1e-12, step=1e-8, backtracks=3),
    ]
    path = tmp_path / "trace.csv"
    write_trace(path, records)
    lines = path.read_text().splitlines()
    assert lines[0] == TRACE_HEADER == "k,beta,objective,step,backtracks"
    back = read_trace(path)
    assert back == records  # 17 significant digits keep doubles exact


def test_trace_accepts_result_object(tmp_path):
    class Holder:
        trace = [TraceRecord(k=0, beta=0.5, objective=1.0, step=0.0, backtracks=0)]

    path = tmp_path / "trace.csv"
    write_trace(path, Holder())
    assert read_trace(path) == Holder.trace


def test_empty_trace_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_trace(tmp_path / "trace.csv", [])


def test_trace_header_enforced(tmp_path):
    path = tmp_path / "trace.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(PersistenceError):
        read_trace(path)
