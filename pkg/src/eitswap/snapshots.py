"""Grid snapshot files, metrics summaries and run manifests.

Text grid format::

    # eitswap-grid v1
    # quantity = coherence
    # units = 1
    # t = 12.0
    # stage = 2
    # nx = 512
    # ny = 512
    # dx = 1.9569471624266144
    # dy = 0.7827788649706457
    <ny rows of nx space-separated values, row k = fixed y = k*dy>

Values are written with 17 significant digits, so reading a file back
reproduces the array exactly.

Binary format (``.bin``, little-endian): the 8-byte magic ``b"EITGRID1"``,
``uint32`` nx, ny, stage, reserved 0, ``float64`` t, dx, dy, a 32-byte
NUL-padded ASCII quantity name and a 16-byte units string, then ``ny * nx``
``float64`` values in row-major order.
"""

from __future__ import annotations

import hashlib
import io
import json
import struct
from pathlib import Path
from typing import Dict, Tuple

import numpy as np

TEXT_MAGIC = "eitswap-grid v1"
BIN_MAGIC = b"EITGRID1"
_BIN_HEADER = struct.Struct("<8s4I3d32s16s")

META_KEYS = ("quantity", "units", "t", "stage", "nx", "ny", "dx", "dy")
_INT_KEYS = {"stage", "nx", "ny"}
_FLOAT_KEYS = {"t", "dx", "dy"}


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_snapshot(path, grid: np.ndarray, meta: Dict, binary: bool = False) -> Path:
    """Write ``grid`` (shape ``(ny, nx)``) with ``meta`` to ``path``."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 2:
        raise ValueError("snapshot grid must be 2D")
    if not np.isfinite(grid).all():
        raise ValueError("snapshot grid must be finite")
    meta = dict(meta)
    meta["ny"], meta["nx"] = grid.shape
    path = Path(path)
    if binary:
        header = _BIN_HEADER.pack(BIN_MAGIC, meta["nx"], meta["ny"], int(meta.get("stage", 0)), 0,
                                  float(meta.get("t", 0.0)), float(meta.get("dx", 0.0)),
                                  float(meta.get("dy", 0.0)),
                                  str(meta.get("quantity", "")).encode("ascii"),
                                  str(meta.get("units", "")).encode("ascii"))
        path.write_bytes(header + grid.astype("<f8").tobytes(order="C"))
        return path
    buf = io.StringIO()
    buf.write(f"# {TEXT_MAGIC}\n")
    for key in META_KEYS:
        if key in meta:
            buf.write(f"# {key} = {_fmt(meta[key])}\n")
    for key in sorted(set(meta) - set(META_KEYS)):
        buf.write(f"# {key} = {_fmt(meta[key])}\n")
    np.savetxt(buf, grid, fmt="%.17g", delimiter=" ")
    path.write_text(buf.getvalue(), encoding="ascii")
    return path


def _parse_value(key: str, text: str):
    if key in _INT_KEYS:
        return int(text)
    if key in _FLOAT_KEYS:
        return float(text)
    return text


def read_snapshot(path) -> Tuple[np.ndarray, Dict]:
    path = Path(path)
    raw = path.read_bytes()
    if raw.startswith(BIN_MAGIC):
        (_, nx, ny, stage, _, t, dx, dy, quantity, units) = _BIN_HEADER.unpack_from(raw)
        data = np.frombuffer(raw, dtype="<f8", offset=_BIN_HEADER.size).reshape(ny, nx)
        meta = {"quantity": quantity.rstrip(b"\0").decode("ascii"),
                "units": units.rstrip(b"\0").decode("ascii"),
                "t": t, "stage": stage, "nx": nx, "ny": ny, "dx": dx, "dy": dy}
        return data.astype(np.float64), meta
    meta = {}
    rows = []
    for line in raw.decode("ascii").splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, value = (s.strip() for s in body.split("=", 1))
                meta[key] = _parse_value(key, value)
        elif line.strip():
            rows.append([float(v) for v in line.split()])
    data = np.array(rows, dtype=np.float64).reshape(meta.get("ny", len(rows)), -1)
    return data, meta


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_metrics(path, metrics: Dict) -> Path:
    lines = [f"{k}={_fmt(v)}" for k, v in metrics.items()]
    path = Path(path)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_metrics(path) -> Dict[str, str]:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if "=" in line:
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def write_manifest(out_dir, config_text: str, solver: Dict, files) -> Path:
    """Record the resolved configuration and the checksum of every emitted file."""
    out_dir = Path(out_dir)
    entries = [{"name": Path(f).name, "sha256": sha256(f), "bytes": Path(f).stat().st_size}
               for f in files]
    manifest = {"config": config_text, "solver": solver, "output_dir": str(out_dir),
                "files": entries}
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def verify_manifest(path) -> bool:
    """True when every file listed in the manifest exists with its checksum."""
    path = Path(path)
    manifest = json.loads(path.read_text(encoding="utf-8"))
    for entry in manifest["files"]:
        f = path.parent / entry["name"]
        if not f.exists() or sha256(f) != entry["sha256"]:
            return False
    return True
