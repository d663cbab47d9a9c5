"""Versioned binary container for trained models.

Layout: 8-byte magic, little-endian uint32 header length, JSON header,
then the raw matrix blobs in manifest order. The header records the
format version, the model kind, arbitrary JSON params, and a manifest of
(name, shape, dtype) for each blob. Matrices default to little-endian
float32; models that need exact float64 round-trips declare it per
matrix. Loading refuses a mismatched format version or model kind.

Writes are byte-deterministic for identical inputs (sorted header keys,
no timestamps), so identically-seeded training runs produce identical
files.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import ModelFormatError

MAGIC = b"AESKITMD"
FORMAT_VERSION = 1

_ALLOWED_DTYPES = {"<f4": "<f4", "<f8": "<f8", "<i8": "<i8", "|u1": "|u1"}


def save_model(
    path: str | Path,
    model_kind: str,
    params: dict,
    matrices: dict[str, np.ndarray],
) -> None:
    manifest = []
    blobs = []
    for name, arr in matrices.items():
        arr = np.ascontiguousarray(arr)
        dtype = arr.dtype.newbyteorder("<").str
        if dtype not in _ALLOWED_DTYPES:
            raise ModelFormatError(f"unsupported dtype {arr.dtype} for matrix {name!r}")
        manifest.append({"name": name, "shape": list(arr.shape), "dtype": dtype})
        blobs.append(arr.astype(dtype, copy=False).tobytes())
    header = {
        "format_version": FORMAT_VERSION,
        "model_kind": model_kind,
        "params": params,
        "matrices": manifest,
    }
    header_bytes = json.dumps(
        header, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(header_bytes)))
        fh.write(header_bytes)
        for blob in blobs:
            fh.write(blob)


def load_model(
    path: str | Path, expected_kind: str | None = None
) -> tuple[dict, dict[str, np.ndarray]]:
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ModelFormatError(f"{path}: not a model file (bad magic)")
        (header_len,) = struct.unpack("<I", fh.read(4))
        try:
            header = json.loads(fh.read(header_len).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ModelFormatError(f"{path}: corrupt header") from exc
        version = header.get("format_version")
        if version != FORMAT_VERSION:
            raise ModelFormatError(
                f"{path}: format_version {version} not supported "
                f"(expected {FORMAT_VERSION})"
            )
        kind = header.get("model_kind")
        if expected_kind is not None and kind != expected_kind:
            raise ModelFormatError(
                f"{path}: model_kind {kind!r}, expected {expected_kind!r}"
            )
        matrices = {}
        for entry in header["matrices"]:
            shape = tuple(entry["shape"])
            dtype = np.dtype(entry["dtype"])
            count = int(np.prod(shape)) if shape else 1
            blob = fh.read(count * dtype.itemsize)
            if len(blob) != count * dtype.itemsize:
                raise ModelFormatError(f"{path}: truncated matrix {entry['name']!r}")
            matrices[entry["name"]] = np.frombuffer(blob, dtype=dtype).reshape(shape).copy()
    return header["params"], matrices
