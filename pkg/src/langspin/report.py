"""Trajectory statistics and serialization.

Reports carry the average-spin time series, per-vertex local magnetizations
(time-averaged spin after burn-in), the final configuration and summary
statistics.  Writers emit CSV (17 significant digits, so parsing the file
back reproduces the floats exactly) and Graphviz DOT snapshots with the
red/blue/gray vertex coloring convention: red for positive values, blue for
negative, gray for zero or undefined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

import numpy as np

from .errors import InsufficientSamples
from .graph import LanguageGraph, SpinConfiguration

__all__ = [
    "RunReport",
    "EntailReport",
    "local_magnetization",
    "summarize",
    "write_csv",
    "write_dot",
    "write_final_table_csv",
]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def summarize(magnetizations: Mapping[str, float]) -> dict[str, float]:
    vals = np.asarray(list(magnetizations.values()), dtype=np.float64)
    return {
        "mean": float(vals.mean()),
        "median": float(np.median(vals)),
        "min": float(vals.min()),
        "max": float(vals.max()),
    }


@dataclass
class RunReport:
    """Statistics of one chain for one parameter.

    ``wall_time`` is informational and excluded from equality, so two runs
    with the same seed and inputs compare equal.
    """

    parameter: str
    avg_spin_series: list[tuple[int, float]]
    local_magnetization: dict[str, float]
    final_config: SpinConfiguration
    summary: dict[str, float]
    config: "object"  # SamplerConfig echo
    accepted: int
    wall_time: float = field(default=0.0, compare=False)
    occupancy: Optional[np.ndarray] = field(default=None, compare=False)


@dataclass
class EntailReport:
    """Per-parameter reports plus joint diagnostics for an entailment run."""

    p1: RunReport
    p2: RunReport
    final_config: SpinConfiguration
    entail_fraction: float
    config: "object"
    accepted: int
    wall_time: float = field(default=0.0, compare=False)
    occupancy: Optional[np.ndarray] = field(default=None, compare=False)


def local_magnetization(
    trajectory: np.ndarray, g: LanguageGraph, burn_in: int
) -> dict[str, float]:
    """Per-vertex mean spin over trajectory rows after ``burn_in``.

    ``trajectory`` has one row per recorded step (row t = state after step
    t+1) and one column per vertex index.
    """
    traj = np.asarray(trajectory, dtype=np.float64)
    if traj.ndim != 2 or traj.shape[0] <= burn_in:
        raise InsufficientSamples(
            f"trajectory of length {traj.shape[0] if traj.ndim == 2 else 0} "
            f"leaves no samples after burn-in {burn_in}"
        )
    means = traj[burn_in:].mean(axis=0)
    return {v.name: float(means[v.index]) for v in g.vertices}


def write_csv(report: RunReport, base: str | Path) -> tuple[Path, Path]:
    """Write ``<base>_timeseries.csv`` and ``<base>_magnetization.csv``."""
    base = Path(base)
    base.parent.mkdir(parents=True, exist_ok=True)
    ts_path = base.with_name(base.name + "_timeseries.csv")
    mag_path = base.with_name(base.name + "_magnetization.csv")
    try:
        with open(ts_path, "w", encoding="utf-8", newline="\n") as f:
            f.write("step,avg_spin\n")
            for step, avg in report.avg_spin_series:
                f.write(f"{step},{_fmt(avg)}\n")
        with open(mag_path, "w", encoding="utf-8", newline="\n") as f:
            f.write("language,local_magnetization\n")
            for name, m in report.local_magnetization.items():
                f.write(f"{name},{_fmt(m)}\n")
    except OSError as exc:
        raise OSError(f"cannot write report near {base}: {exc}") from exc
    return ts_path, mag_path


def write_dot(
    g: LanguageGraph, coloring: Mapping[str, float | None], path: str | Path
) -> Path:
    """Write a DOT snapshot: one node per language, colored by sign."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["digraph languages {"]
    for v in g.vertices:
        value = coloring.get(v.name)
        if value is None or value == 0:
            color = "gray"
        elif value > 0:
            color = "red"
        else:
            color = "blue"
        lines.append(f'  "{v.name}" [color={color}];')
    for e in g.edges:
        lines.append(f'  "{e.src.name}" -> "{e.dst.name}" [label={_fmt(e.weight)}];')
    lines.append("}")
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write DOT file {path}: {exc}") from exc
    return path


def write_final_table_csv(
    report: EntailReport, g: LanguageGraph, path: str | Path
) -> Path:
    """Write the joint final configuration, one row per language."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    p1 = report.p1.parameter
    p2 = report.p2.parameter
    rows = [f"language,{p1},{p2}"]
    for v in g.vertices:
        rows.append(
            f"{v.name},{report.final_config.get(v.name, p1)},{report.final_config.get(v.name, p2)}"
        )
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path
