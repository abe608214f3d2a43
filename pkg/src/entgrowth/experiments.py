"""Simulation, bound-curve and scaling runs behind the command-line tool."""

from __future__ import annotations

import io
import math
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .bounds import (
    BoundConstants,
    bound_constants,
    combined_lower_bound,
    long_time_lower_bound,
    rank_refined_lower_bound,
    short_time_lower_bound,
)
from .config import RunConfig, ScalingConfig
from .exact import dense_from_spec, dense_trajectory, evolve_dense, reduced_schmidt_spectrum
from .lattice import (
    SpinLatticeModel,
    build_coupled_ising_chains,
    build_xx_chain,
    build_xxz_chain,
    extract_cut_interaction,
    resolve_cut,
)
from .mps import TrotterScheme, TruncationPolicy, evolve_and_sample, mps_from_basis_product

__all__ = [
    "SIMULATE_HEADER",
    "BOUNDS_HEADER",
    "SCALING_HEADER",
    "build_model",
    "run_constants",
    "simulate",
    "bound_curves",
    "ScalingResult",
    "scaling_sweep",
    "format_csv",
    "write_csv",
    "gnuplot_script",
]

SIMULATE_HEADER = (
    "t", "purity", "entropy", "schmidt_rank",
    "bound_short", "bound_rank", "bound_long", "bound_combined", "trunc_weight",
)
BOUNDS_HEADER = ("t", "bound_short", "bound_rank", "bound_long", "bound_combined")
SCALING_HEADER = ("n", "one_minus_purity")


def build_model(config: RunConfig) -> SpinLatticeModel:
    if config.model == "xx":
        return build_xx_chain(config.n_sites)
    if config.model == "xxz":
        return build_xxz_chain(config.n_sites, config.delta)
    return build_coupled_ising_chains(config.n_rungs, config.intra_coupling)


def _default_l_max(model, cut) -> int:
    n_a = len(resolve_cut(model, cut))
    return 2 ** min(n_a, model.n_sites - n_a)


def run_constants(config: RunConfig) -> BoundConstants:
    model = build_model(config)
    cut = config.resolved_cut
    l_max = config.l_max or _default_l_max(model, cut)
    return bound_constants(extract_cut_interaction(model, cut), l_max)


def _bound_columns(times, c: BoundConstants):
    return (
        np.atleast_1d(short_time_lower_bound(times, c.mu)),
        np.atleast_1d(rank_refined_lower_bound(times, c.mu, c.l_max)),
        np.atleast_1d(long_time_lower_bound(times, c.chi)),
        np.atleast_1d(combined_lower_bound(times, c)),
    )


def _sample_times(t_max, interval):
    n = int(math.floor(t_max / interval + 1e-9))
    return np.arange(n + 1) * interval


def _mps_pattern(kind, n):
    if kind == "neel":
        return "ud" * (n // 2) + "u" * (n % 2)
    if kind == "all-down":
        return "d" * n
    return "d" * (n // 2) + "u" * (n - n // 2)


def simulate(config: RunConfig) -> list[tuple]:
    """Rows of :data:`SIMULATE_HEADER` for ``config``."""
    model = build_model(config)
    cut = config.resolved_cut
    constants = run_constants(config)
    if config.engine == "mps":
        record = evolve_and_sample(
            mps_from_basis_product(_mps_pattern(config.initial_state, model.n_sites)),
            model,
            config.t_max,
            config.sample_interval,
            TrotterScheme(config.trotter_order, config.dt),
            TruncationPolicy(config.max_rank, config.discard_tolerance),
            cut,
        )
        times = record.times
        purity, entropy = record.purity, record.entropy
        rank, trunc = record.column("schmidt_rank"), record.column("trunc_weight")
    else:
        size = config.n_rungs if config.geometry != "chain" else config.n_sites
        start = dense_from_spec(config.initial_state, size, geometry=model.geometry)
        times = _sample_times(config.t_max, config.sample_interval)
        spectra = [reduced_schmidt_spectrum(s, cut) for s in dense_trajectory(start, model, times)]
        purity = np.array([x.purity for x in spectra])
        entropy = np.array([x.entropy for x in spectra])
        rank = np.array([x.rank for x in spectra])
        trunc = np.zeros(times.size)
    columns = _bound_columns(times, constants)
    return [
        (times[k], purity[k], entropy[k], int(rank[k]), *(c[k] for c in columns), trunc[k])
        for k in range(times.size)
    ]


def bound_curves(config: RunConfig) -> tuple[BoundConstants, list[tuple]]:
    constants = run_constants(config)
    times = _sample_times(config.t_max, config.sample_interval)
    columns = _bound_columns(times, constants)
    return constants, [(times[k], *(c[k] for c in columns)) for k in range(times.size)]


class ScalingResult(NamedTuple):
    rows: list[tuple[int, float]]
    slope: float


def scaling_sweep(config: ScalingConfig) -> ScalingResult:
    """``1 - purity`` at ``t_probe`` for each rung count, plus the log-log slope."""
    rows = []
    for n in range(config.n_min, config.n_max + 1):
        model = build_coupled_ising_chains(n, config.intra_coupling)
        state = evolve_dense(dense_from_spec(config.state_kind(n), n), model, config.t_probe)
        rows.append((n, reduced_schmidt_spectrum(state, "chains").impurity))
    ns, values = np.array(rows, dtype=float).T
    slope = float(np.polyfit(np.log(ns), np.log(values), 1)[0]) if len(rows) > 1 else float("nan")
    return ScalingResult(rows, slope)


def _cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value) + 0.0:.12g}"  # no signed zeros


def format_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_cell(v) for v in row) + "\n")
    return buf.getvalue()


def write_csv(path, header, rows):
    Path(path).write_bytes(format_csv(header, rows).encode("utf-8"))


def gnuplot_script(csv_path, columns: Sequence[str], header: Sequence[str], *, logscale=False) -> str:
    """A gnuplot script plotting ``columns`` of ``csv_path`` against its first column."""
    lines = [
        "set datafile separator ','",
        f"set xlabel '{header[0]}'",
    ]
    if logscale:
        lines.append("set logscale xy")
    plots = [
        f"'{csv_path}' using 1:{header.index(c) + 1} with lines title '{c}'" for c in columns
    ]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"
