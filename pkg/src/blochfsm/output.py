"""Trajectory and table serialization.

CSV files start with a single ``#``-prefixed JSON metadata line, then a
header row, then data at 17 significant digits. The metadata line carries the
config echo and diagnostics and never a timestamp, so identical configs give
identical bytes.
"""
from __future__ import annotations

import io
import json

import numpy as np

from .config import SimulationConfig, config_to_dict
from .dynamics import Trajectory

__all__ = ["fmt", "trajectory_metadata", "trajectory_csv", "trajectory_json", "write_text", "rows_csv"]


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def trajectory_metadata(cfg: SimulationConfig, traj: Trajectory, **extra) -> dict:
    meta = {
        "config": config_to_dict(cfg),
        "samples": int(len(traj.t)),
        "norm_drift": traj.norm_drift,
    }
    meta.update(extra)
    return meta


def trajectory_csv(cfg: SimulationConfig, traj: Trajectory, **extra) -> str:
    names, data = traj.columns()
    buf = io.StringIO()
    buf.write("# " + json.dumps(trajectory_metadata(cfg, traj, **extra), sort_keys=True) + "\n")
    buf.write(",".join(names) + "\n")
    for row in data:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def trajectory_json(cfg: SimulationConfig, traj: Trajectory, **extra) -> str:
    names, data = traj.columns()
    doc = {
        "metadata": trajectory_metadata(cfg, traj, **extra),
        "columns": names,
        "data": [[float(fmt(v)) for v in row] for row in data],
    }
    return json.dumps(doc, sort_keys=True) + "\n"


def rows_csv(names: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(",".join(names) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) if isinstance(v, (float, np.floating)) else str(v) for v in row) + "\n")
    return buf.getvalue()


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
