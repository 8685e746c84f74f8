"""Grid evaluation of thermal-protocol and correlation quantities over (T, B)."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import correlations, protocol
from .xymodel import ModelParams, thermal_state

QUANTITIES = ("extract", "negativity", "concurrence", "discord", "theta_opt", "delta_inf")
MAX_STEPS = 10000


@dataclass(frozen=True)
class SweepConfig:
    alpha: float
    t_min: float
    t_max: float
    t_steps: int
    b_min: float
    b_max: float
    b_steps: int
    quantities: tuple = ("extract",)
    output_path: str | None = None

    def problems(self) -> list[tuple[str, str]]:
        """``(flag, message)`` for each invalid field; empty when valid."""
        out = []
        if not self.alpha > 0:
            out.append(("--alpha", "must be positive"))
        if not self.t_min > 0:
            out.append(("--t-min", "must be positive"))
        if not self.t_max >= self.t_min:
            out.append(("--t-max", "must be >= --t-min"))
        if not self.b_min >= 0:
            out.append(("--b-min", "must be non-negative"))
        if not self.b_max >= self.b_min:
            out.append(("--b-max", "must be >= --b-min"))
        for flag, n in (("--t-steps", self.t_steps), ("--b-steps", self.b_steps)):
            if not 2 <= n <= MAX_STEPS:
                out.append((flag, f"must be between 2 and {MAX_STEPS}"))
        for q in self.quantities:
            if q not in QUANTITIES:
                out.append(("--quantity", f"unknown quantity {q!r}"))
        for name in ("alpha", "t_min", "t_max", "b_min", "b_max"):
            if not np.isfinite(getattr(self, name)):
                out.append(("--" + name.replace("_", "-"), "must be finite"))
        return out

    def grid(self) -> list[tuple[float, float]]:
        temps = np.linspace(self.t_min, self.t_max, self.t_steps)
        fields = np.linspace(self.b_min, self.b_max, self.b_steps)
        return [(float(T), float(B)) for T in temps for B in fields]


def evaluate_point(T: float, B: float, alpha: float, quantities) -> tuple:
    """``(T, B, alpha, *values)`` for one grid point."""
    params = ModelParams(B, alpha, T)
    values = {}
    if {"extract", "theta_opt", "delta_inf"} & set(quantities):
        trace = protocol.run_thermal_qet(params)
        values.update(extract=trace.delta_extract, theta_opt=trace.theta_opt,
                      delta_inf=trace.delta_inf)
    if {"negativity", "concurrence"} & set(quantities):
        rho = thermal_state(params)
        values["negativity"] = correlations.negativity(rho)[0]
        values["concurrence"] = correlations.concurrence(rho)
    if "discord" in quantities:
        values["discord"] = correlations.xstate_discord(params)[0]
    return (T, B, alpha) + tuple(values[q] for q in quantities)


def _chunk(args):
    points, alpha, quantities = args
    return [evaluate_point(T, B, alpha, quantities) for T, B in points]


def run_sweep(config: SweepConfig, jobs: int | None = None) -> list[tuple]:
    """Rows in T-major order, independent of ``jobs``."""
    points = config.grid()
    jobs = jobs or os.cpu_count() or 1
    if jobs == 1 or len(points) < 64:
        return _chunk((points, config.alpha, config.quantities))
    size = max(1, len(points) // (4 * jobs))
    chunks = [(points[i:i + size], config.alpha, config.quantities)
              for i in range(0, len(points), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves submission order, so the row order is unchanged.
        return [row for part in pool.map(_chunk, chunks) for row in part]


def format_csv(config: SweepConfig, rows) -> str:
    lines = [",".join(("T", "B", "alpha") + tuple(config.quantities))]
    lines += [",".join("%.17g" % v for v in row) for row in rows]
    return "\n".join(lines) + "\n"
