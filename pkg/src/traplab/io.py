"""CSV / JSON / NDJSON readers and writers.

CSV files start with ``#`` metadata lines (``# key: <json value>``), then a
header row.  NDJSON files carry one header object followed by one object per
lattice site, atom or event.  See the README for the schemas.
"""
import csv
import json
from pathlib import Path

import numpy as np

from .env import AtomicMeasure, TrapEnvironment

NDJSON_VERSION = 1


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        obj = float(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    return obj


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, columns, rows, meta=None):
    path = Path(path)
    with path.open("w", newline="") as fh:
        for key, val in (meta or {}).items():
            fh.write(f"# {key}: {json.dumps(_plain(val), sort_keys=True)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def read_csv(path):
    """Returns ``(meta, columns, rows)`` with numeric cells parsed as floats."""
    meta, lines = {}, []
    with Path(path).open() as fh:
        for line in fh:
            if line.startswith("# "):
                key, _, val = line[2:].partition(": ")
                meta[key] = json.loads(val)
            else:
                lines.append(line)
    reader = csv.reader(lines)
    columns = next(reader)
    rows = []
    for r in reader:
        parsed = []
        for cell in r:
            try:
                parsed.append(float(cell))
            except ValueError:
                parsed.append(cell)
        rows.append(parsed)
    return meta, columns, rows


def write_json(path, obj):
    path = Path(path)
    path.write_text(json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n")
    return path


def read_json(path):
    return json.loads(Path(path).read_text())


def write_ndjson(path, header, records):
    path = Path(path)
    with path.open("w") as fh:
        fh.write(json.dumps(_plain(header), sort_keys=True) + "\n")
        for rec in records:
            fh.write(json.dumps(_plain(rec), sort_keys=True) + "\n")
    return path


def read_ndjson(path):
    with Path(path).open() as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    return lines[0], lines[1:]


def environment_to_ndjson(env, path):
    header = {"kind": "trap_environment", "version": NDJSON_VERSION, "alpha": env.alpha,
              "window": [env.z_lo, env.z_hi], "key": env.key}
    recs = ({"position": int(z), "weight": float(d)} for z, d in zip(env.sites, env.depths))
    return write_ndjson(path, header, recs)


def environment_from_ndjson(path):
    header, recs = read_ndjson(path)
    if header.get("kind") != "trap_environment":
        raise ValueError(f"{path} does not hold a trap environment")
    z_lo, z_hi = header["window"]
    depths = np.array([r["weight"] for r in sorted(recs, key=lambda r: r["position"])])
    return TrapEnvironment(header["alpha"], z_lo, z_hi, depths, key=header["key"])


def measure_to_ndjson(measure, path):
    header = {"kind": "atomic_measure", "version": NDJSON_VERSION, "alpha": measure.alpha,
              "window": [measure.lo, measure.hi], "v_min": measure.v_min}
    recs = ({"position": float(x), "weight": float(v)}
            for x, v in zip(measure.positions, measure.weights))
    return write_ndjson(path, header, recs)


def measure_from_ndjson(path):
    header, recs = read_ndjson(path)
    if header.get("kind") != "atomic_measure":
        raise ValueError(f"{path} does not hold an atomic measure")
    lo, hi = header["window"]
    return AtomicMeasure(header["alpha"], lo, hi, header["v_min"],
                         np.array([r["position"] for r in recs], dtype=float),
                         np.array([r["weight"] for r in recs], dtype=float))


def trajectory_to_ndjson(traj, path, meta=None):
    header = {"kind": "trajectory", "version": NDJSON_VERSION, "start": traj.start,
              "t_end": traj.t_end, "truncated": traj.truncated, **(meta or {})}
    recs = ({"time": float(t), "position": p.item() if hasattr(p, "item") else p}
            for t, p in zip(traj.times, traj.positions))
    return write_ndjson(path, header, recs)
