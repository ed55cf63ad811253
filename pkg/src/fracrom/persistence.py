"""Deterministic on-disk formats for matrices, run manifests, and traces.

Matrices use a fixed 24-byte binary header (magic ``FRMAT1``, element kind,
row and column counts) followed by row-major little-endian float64 payload;
writing the same array twice produces identical bytes.  Run manifests are
JSON documents with sorted keys whose ``files`` section records an FNV-1a
checksum per referenced artifact; loading verifies every checksum.
Identification traces are CSV with a fixed header and 17-significant-digit
floats, so a read-back reproduces the run exactly.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
import numpy as np

from .inverse import TraceRecord

__all__ = [
    "MAGIC",
    "PersistenceError",
    "fnv1a64",
    "write_matrix",
    "read_matrix",
    "checksum_file",
    "write_manifest",
    "load_manifest",
    "manifest_add_file",
    "write_trace",
    "read_trace",
]

MAGIC = b"FRMAT1"
_KIND_FLOAT64_LE = 1
_HEADER = struct.Struct("<6sHQQ")  # magic, element kind, rows, cols
TRACE_HEADER = "k,beta,objective,step,backtracks"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


class PersistenceError(RuntimeError):
    """A file failed structural validation or checksum verification."""


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash of a byte string."""
    acc = _FNV_OFFSET
    for byte in data:
        acc = ((acc ^ byte) * _FNV_PRIME) & _MASK64
    return acc


def _matrix_bytes(array: np.ndarray) -> bytes:
    mat = np.ascontiguousarray(array, dtype="<f8")
    if mat.ndim == 1:
        mat = mat[:, None]
    if mat.ndim != 2:
        raise ValueError("only 1D or 2D arrays can be stored")
    header = _HEADER.pack(MAGIC, _KIND_FLOAT64_LE, mat.shape[0], mat.shape[1])
    return header + mat.tobytes(order="C")


def write_matrix(path, array: np.ndarray) -> int:
    """Write an array in the binary matrix format; returns the file checksum."""
    blob = _matrix_bytes(np.asarray(array))
    Path(path).write_bytes(blob)
    return fnv1a64(blob)


def read_matrix(path) -> np.ndarray:
    """Read a matrix file, validating magic, element kind, and payload size."""
    blob = Path(path).read_bytes()
    if len(blob) < _HEADER.size:
        raise PersistenceError(f"{path}: truncated header")
    magic, kind, rows, cols = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise PersistenceError(f"{path}: bad magic {magic!r}")
    if kind != _KIND_FLOAT64_LE:
        raise PersistenceError(f"{path}: unsupported element kind {kind}")
    expected = _HEADER.size + rows * cols * 8
    if len(blob) != expected:
        raise PersistenceError(
            f"{path}: payload holds {len(blob) - _HEADER.size} bytes, expected {expected - _HEADER.size}"
        )
    data = np.frombuffer(blob, dtype="<f8", offset=_HEADER.size)
    return data.reshape(rows, cols).astype(np.float64, copy=True)


def checksum_file(path) -> int:
    return fnv1a64(Path(path).read_bytes())


def manifest_add_file(manifest: dict, key: str, path, checksum: int) -> None:
    """Record a produced artifact under the manifest's ``files`` section."""
    manifest.setdefault("files", {})[key] = {
        "path": Path(path).name,
        "checksum": f"{checksum:016x}",
    }


def write_manifest(path, manifest: dict) -> None:
    """Serialize a manifest as JSON with sorted keys (byte-deterministic)."""
    text = json.dumps(manifest, sort_keys=True, indent=2) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def load_manifest(path, verify: bool = True) -> dict:
    """Read a manifest; with ``verify``, re-hash every referenced file.

    File paths are resolved relative to the manifest's directory.  A missing
    file or checksum mismatch raises :class:`PersistenceError`.
    """
    path = Path(path)
    manifest = json.loads(path.read_text(encoding="utf-8"))
    if verify:
        for key, entry in manifest.get("files", {}).items():
            target = path.parent / entry["path"]
            if not target.exists():
                raise PersistenceError(f"manifest references missing file {target}")
            actual = checksum_file(target)
            if f"{actual:016x}" != entry["checksum"]:
                raise PersistenceError(
                    f"checksum mismatch for {target}: recorded {entry['checksum']}, found {actual:016x}"
                )
    return manifest


def _format_float(x: float) -> str:
    return format(float(x), ".17g")


def write_trace(path, records) -> None:
    """Write an identification trace as CSV with round-trip-exact floats.

    Accepts either a sequence of :class:`TraceRecord` or any object with a
    ``trace`` attribute (an identification result).  A trace always holds at
    least the initial point, so empty input is rejected.
    """
    records = getattr(records, "trace", records)
    if not records:
        raise ValueError("a trace holds at least the initial point; got no records")
    lines = [TRACE_HEADER]
    for rec in records:
        lines.append(
            ",".join(
                (
                    str(rec.k),
                    _format_float(rec.beta),
                    _format_float(rec.objective),
                    _format_float(rec.step),
                    str(rec.backtracks),
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_trace(path) -> list[TraceRecord]:
    lines = Path(path).read_text(encoding="utf-8").strip().splitlines()
    if not lines or lines[0] != TRACE_HEADER:
        raise PersistenceError(f"{path}: missing trace header {TRACE_HEADER!r}")
    records = []
    for line in lines[1:]:
        k, beta, obj, step, backtracks = line.split(",")
        records.append(
            TraceRecord(
                k=int(k),
                beta=float(beta),
                objective=float(obj),
                step=float(step),
                backtracks=int(backtracks),
            )
        )
    return records
