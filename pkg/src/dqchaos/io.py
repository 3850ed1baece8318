"""On-disk formats: CSV tables and records, binary Husimi grids, run manifests.

Every format carries ``format_version = 1``. CSV files start with ``# key=value``
header lines and end with a ``# end rows=N`` trailer, so a file cut short by
a crash is detected instead of being read as a shorter valid table.
"""

from __future__ import annotations

import hashlib
import json
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FormatError, IntegrityError
from .observables import HusimiGrid, TrajectoryRecord
from .params import SimParams

FORMAT_VERSION = 1
GRID_MAGIC = b"DQHG"
_LEN = struct.Struct("<I")

RECORD_UNITS = {
    "t": "kicks",
    "mean_x": "rad",
    "resultant": "1",
    "mean_p": "p=hbar*n",
    "var_x": "rad^2",
    "var_p": "p^2",
    "sigma": "1",
    "sigma_bar": "1",
    "jumps_l1": "count",
    "jumps_l2": "count",
    "edge_probability": "1",
}
RECORD_COLUMNS = tuple(RECORD_UNITS)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _parse(text: str, path, line: int):
    try:
        if text.lstrip("-").isdigit():
            return int(text)
        return float(text)
    except ValueError:
        raise FormatError(f"cannot parse value {text!r}", path=str(path), line=line)


# ---------------------------------------------------------------------------
# generic tables


@dataclass
class Table:
    columns: tuple
    units: dict
    data: dict
    fingerprint: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.data.values()))) if self.data else 0


def write_table(path, columns, rows, units=None, fingerprint: str = "", meta=None):
    """Write ``rows`` (sequences aligned with ``columns``) as a headed CSV."""
    path = Path(path)
    units = units or {}
    meta = meta or {}
    rows = list(rows)
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# format_version={FORMAT_VERSION}\n")
        fh.write(f"# fingerprint={fingerprint}\n")
        fh.write("# meta=" + json.dumps(meta, sort_keys=True, separators=(",", ":")) + "\n")
        fh.write("# units=" + ",".join(f"{c}:{units.get(c, '')}" for c in columns) + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"row has {len(row)} values for {len(columns)} columns")
            fh.write(",".join(_fmt(v) for v in row) + "\n")
        fh.write(f"# end rows={len(rows)}\n")
    return path


def read_table(path) -> Table:
    path = Path(path)
    lines = path.read_text().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    header = {}
    i = 0
    while i < len(lines) and lines[i].startswith("# "):
        key, sep, val = lines[i][2:].partition("=")
        if not sep:
            raise FormatError("malformed header line", path=str(path), line=i + 1)
        header[key] = val
        i += 1
    for key in ("format_version", "fingerprint", "meta", "units"):
        if key not in header:
            raise FormatError(f"missing header field {key!r}", path=str(path), line=i + 1)
    if header["format_version"] != str(FORMAT_VERSION):
        raise FormatError(f"unsupported format_version {header['format_version']}",
                          path=str(path), line=1)
    if i >= len(lines):
        raise FormatError("missing column line", path=str(path), line=i + 1)
    columns = tuple(lines[i].split(","))
    i += 1
    rows = []
    trailer = None
    for j in range(i, len(lines)):
        ln = lines[j]
        if ln.startswith("# end rows="):
            trailer = j
            break
        parts = ln.split(",")
        if len(parts) != len(columns):
            raise FormatError(f"expected {len(columns)} fields, got {len(parts)}",
                              path=str(path), line=j + 1)
        rows.append([_parse(p, path, j + 1) for p in parts])
    if trailer is None:
        raise FormatError(f"truncated file (no end trailer after line {len(lines)})",
                          path=str(path), line=len(lines))
    if trailer != len(lines) - 1:
        raise FormatError("content after end trailer",
                          path=str(path), line=trailer + 2)
    declared = int(lines[trailer].split("=", 1)[1])
    if declared != len(rows):
        raise FormatError(f"trailer declares {declared} rows, found {len(rows)}",
                          path=str(path), line=trailer + 1)
    units = {}
    for item in header["units"].split(","):
        name, _, unit = item.partition(":")
        units[name] = unit
    try:
        meta = json.loads(header["meta"])
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad meta JSON ({exc})", path=str(path), line=3) from exc
    data = {c: [r[k] for r in rows] for k, c in enumerate(columns)}
    return Table(columns, units, data, header["fingerprint"], meta)


# ---------------------------------------------------------------------------
# trajectory records


def write_record(path, record: TrajectoryRecord):
    meta = {"seed": record.seed, "index": record.index, "params": record.params,
            "initial": record.initial}
    sigma = record.sigma
    sigma_bar = record.sigma_bar
    rows = [
        (t + 1, record.mean_x[t], record.resultant[t], record.mean_p[t], record.var_x[t],
         record.var_p[t], sigma[t], sigma_bar[t], int(record.jumps_l1[t]),
         int(record.jumps_l2[t]), record.edge_probability[t])
        for t in range(record.n_kicks)
    ]
    return write_table(path, RECORD_COLUMNS, rows, RECORD_UNITS, record.fingerprint, meta)


def read_record(path) -> TrajectoryRecord:
    tab = read_table(path)
    if tab.columns != RECORD_COLUMNS:
        raise FormatError(f"not a trajectory record (columns {tab.columns})",
                          path=str(path), line=5)
    meta = tab.meta
    params = meta.get("params", {})
    if params:
        expect = SimParams.from_dict(params).fingerprint()
        if expect != tab.fingerprint:
            raise IntegrityError(
                f"header fingerprint {tab.fingerprint} does not match params ({expect})"
            )
    d = tab.data
    f = lambda c: np.array(d[c], dtype=np.float64)  # noqa: E731
    i = lambda c: np.array(d[c], dtype=np.int64)  # noqa: E731
    return TrajectoryRecord(
        mean_x=f("mean_x"), resultant=f("resultant"), mean_p=f("mean_p"),
        var_x=f("var_x"), var_p=f("var_p"), jumps_l1=i("jumps_l1"), jumps_l2=i("jumps_l2"),
        edge_probability=f("edge_probability"), fingerprint=tab.fingerprint,
        seed=int(meta.get("seed", 0)), index=int(meta.get("index", 0)), params=params,
        initial=meta.get("initial", {}),
    )


# ---------------------------------------------------------------------------
# Husimi grids


def write_grid(path, grid: HusimiGrid):
    """Binary grid: magic, header length, JSON header, float64 row-major values."""
    values = np.ascontiguousarray(grid.values, dtype="<f8")
    blob = values.tobytes()
    header = {
        "format_version": FORMAT_VERSION,
        "shape": [int(values.shape[0]), int(values.shape[1])],
        "order": "C",
        "dtype": "<f8",
        "axes": ["p", "x"],
        "x_min": 0.0,
        "x_period": 2.0 * math.pi,
        "p_min": float(grid.p[0]),
        "p_max": float(grid.p[-1]),
        "hbar": float(grid.hbar),
        "squeezing": float(grid.squeezing),
        "coverage": float(grid.coverage),
        "fingerprint": grid.fingerprint,
        "data_sha256": hashlib.sha256(blob).hexdigest(),
    }
    hb = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(GRID_MAGIC)
        fh.write(_LEN.pack(len(hb)))
        fh.write(hb)
        fh.write(blob)
    return path


def read_grid(path) -> HusimiGrid:
    path = Path(path)
    raw = path.read_bytes()
    head = len(GRID_MAGIC) + _LEN.size
    if len(raw) < head or raw[:4] != GRID_MAGIC:
        raise FormatError("not a Husimi grid file", path=str(path), offset=0)
    (n,) = _LEN.unpack_from(raw, 4)
    if len(raw) < head + n:
        raise FormatError(f"header truncated at byte {len(raw)}", path=str(path),
                          offset=len(raw))
    try:
        header = json.loads(raw[head:head + n])
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad header JSON ({exc})", path=str(path), offset=head) from exc
    if header.get("format_version") != FORMAT_VERSION:
        raise FormatError("unsupported format_version", path=str(path), offset=head)
    n_p, n_x = header["shape"]
    start = head + n
    need = n_p * n_x * 8
    have = len(raw) - start
    if have != need:
        kind = "truncated" if have < need else "oversized"
        raise FormatError(f"{kind} data block, expected {need} bytes after offset "
                          f"{start}, found {have}", path=str(path), offset=start + min(have, need))
    blob = raw[start:]
    if hashlib.sha256(blob).hexdigest() != header["data_sha256"]:
        raise IntegrityError("data checksum mismatch")
    values = np.frombuffer(blob, dtype="<f8").reshape(n_p, n_x).astype(np.float64)
    x = header["x_period"] * np.arange(n_x) / n_x
    p = np.linspace(header["p_min"], header["p_max"], n_p)
    return HusimiGrid(x, p, values, header["hbar"], header["squeezing"], header["coverage"],
                      header["fingerprint"])


def write_grid_csv(path, grid: HusimiGrid):
    """Dense (x, p, value) export of a Husimi grid."""
    xx, pp = np.meshgrid(grid.x, grid.p)
    rows = zip(xx.ravel(), pp.ravel(), grid.values.ravel())
    meta = {"hbar": grid.hbar, "squeezing": grid.squeezing, "coverage": grid.coverage,
            "shape": list(grid.values.shape)}
    return write_table(path, ("x", "p", "value"), rows,
                       {"x": "rad", "p": "p=hbar*n", "value": "1/(rad*p)"},
                       grid.fingerprint, meta)


# ---------------------------------------------------------------------------
# manifests


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(path, manifest: dict, outputs, root=None):
    """Write ``manifest`` plus a sha256 index of ``outputs`` (paths under ``root``).

    Keys are written sorted and no wall-clock data is included, so two runs
    with the same configuration produce byte-identical manifests.
    """
    path = Path(path)
    root = Path(root) if root is not None else path.parent
    index = {}
    for p in outputs:
        full = Path(p) if Path(p).is_absolute() else root / p
        rel = full.resolve().relative_to(root.resolve()).as_posix()
        index[rel] = sha256_file(full)
    doc = dict(manifest)
    doc["format_version"] = FORMAT_VERSION
    doc["outputs"] = dict(sorted(index.items()))
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return path


def read_manifest(path, verify: bool = True) -> dict:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad manifest JSON ({exc.msg})",
                          path=str(path), line=exc.lineno) from exc
    if doc.get("format_version") != FORMAT_VERSION:
        raise FormatError("unsupported format_version", path=str(path), line=1)
    if verify:
        for name, digest in doc.get("outputs", {}).items():
            f = path.parent / name
            if not f.exists():
                raise IntegrityError(f"listed output {name} is missing")
            if sha256_file(f) != digest:
                raise IntegrityError(f"checksum mismatch for {name}")
    return doc


def check_fingerprints(items) -> str:
    """Return the common fingerprint of ``items``; refuse a mixture."""
    prints = {getattr(it, "fingerprint", it) for it in items}
    if len(prints) > 1:
        raise IntegrityError("refusing to combine data from different parameter sets: "
                             f"{sorted(prints)}")
    return prints.pop() if prints else ""
