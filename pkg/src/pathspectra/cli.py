"""Command-line driver: figure presets, pipeline stages, flat-file config.

Every run writes data files (CSV by default) plus ``<command>.manifest.json``
recording the effective parameters, the output list, and the numerical checks
performed, so a run can be audited and reproduced from its manifest alone.
Values are printed with 17 significant digits and all reductions happen in a
fixed order, so identical configurations give byte-identical data files no
matter how many threads do the work.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import __version__
from .compare import coherent_overlap, momentum_density, wigner_momentum_marginal
from .distribution import (
    PathDistribution,
    moments,
    spatial_average,
    stationary_grids,
    time_average,
)
from .errors import (
    DivergentSampleError,
    DomainError,
    ExcludedRegionError,
    PathspectraError,
    SingularTimeError,
    UsageError,
)
from .phasor import integrand, phasor_curve, segment_windows, window_average_series
from .quadrature import GridBundle, paper_grids, trapezoid, uniform_grid
from .reconstruct import reconstruct
from .systems import (
    EigenstateSpec,
    SystemKind,
    SystemSpec,
    circle,
    eigenfunction,
    free_line,
    hard_wall,
    harmonic_oscillator,
    mass_parameter,
    square_well,
)

log = logging.getLogger("pathspectra")

PRESETS = ("fig1", "fig2", "fig7", "fig8", "fig9", "fig10")
STAGES = ("phasor", "window", "distribution", "time-average", "reconstruct", "compare")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_SINGULAR = 4
EXIT_IO = 5


@dataclass
class RunConfig:
    """Flat bag of every knob a run can turn.

    Optional fields left at ``None`` mean "let the module pick its default";
    they come back filled in in the manifest when a preset pins them.
    """

    system: str = "harmonic_oscillator"
    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0
    radius: float = 1.0
    width: float = math.pi
    quantum_number: float = 0.0
    T: float = 32.0 * math.pi
    x_f: float = 0.0
    delta_p_c: float | None = None
    p_c_lo: float | None = None
    p_c_hi: float | None = None
    p_c_max: float | None = None
    delta_x_f: float | None = None
    x_f_span: float | None = None
    delta_T: float = math.pi / 16.0
    n_time: int = 32
    n_p_floor: float | None = None
    n_p_slope: float | None = None
    epsilon: float | None = None
    band_lo: float = 0.0
    band_hi: float | None = None
    segment_offset: float = 0.0
    out: str = "."
    format: str = "csv"
    threads: int = 0
    seed: int = 0


_INT_FIELDS = {"n_time", "threads", "seed"}
_STR_FIELDS = {"system", "out", "format"}
_OPTIONAL_FIELDS = {
    "delta_p_c",
    "p_c_lo",
    "p_c_hi",
    "p_c_max",
    "delta_x_f",
    "x_f_span",
    "n_p_floor",
    "n_p_slope",
    "epsilon",
    "band_hi",
}
_SYSTEMS = ("free_line", "circle", "hard_wall", "square_well", "harmonic_oscillator")


def config_from_mapping(mapping: Mapping[str, object]) -> RunConfig:
    """Build a RunConfig from flat key/value pairs, rejecting unknown keys."""
    cfg = RunConfig()
    known = {f.name for f in dataclasses.fields(RunConfig)}
    for key, raw in mapping.items():
        if key not in known:
            raise UsageError(f"unknown configuration key {key!r}")
        if key in _STR_FIELDS:
            setattr(cfg, key, str(raw))
            continue
        if isinstance(raw, str) and raw.strip().lower() in ("", "none"):
            if key not in _OPTIONAL_FIELDS:
                raise UsageError(f"configuration key {key!r} needs a value")
            setattr(cfg, key, None)
            continue
        if raw is None:
            if key not in _OPTIONAL_FIELDS:
                raise UsageError(f"configuration key {key!r} needs a value")
            setattr(cfg, key, None)
            continue
        try:
            value = int(str(raw)) if key in _INT_FIELDS else float(str(raw))
        except ValueError as exc:
            raise UsageError(f"bad value for {key!r}: {raw!r}") from exc
        setattr(cfg, key, value)
    if cfg.format not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, not {cfg.format!r}")
    if cfg.system not in _SYSTEMS:
        raise UsageError(f"system must be one of {', '.join(_SYSTEMS)}")
    if cfg.threads < 0:
        raise UsageError("threads must be >= 0 (0 = all cores)")
    return cfg


def parse_config_file(path: Path) -> dict[str, str]:
    """Read ``key = value`` lines; '#' starts a comment; blank lines ignored."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise UsageError(f"{path}:{lineno}: expected key = value, got {line!r}")
        key, value = body.split("=", 1)
        mapping[key.strip()] = value.strip()
    return mapping


def effective_config(cfg: RunConfig) -> dict[str, object]:
    return dataclasses.asdict(cfg)


def _resolve_threads(cfg: RunConfig) -> int:
    return cfg.threads if cfg.threads > 0 else (os.cpu_count() or 1)


def build_system(cfg: RunConfig) -> SystemSpec:
    if cfg.system == "free_line":
        return free_line(hbar=cfg.hbar, mass=cfg.mass)
    if cfg.system == "circle":
        return circle(cfg.radius, hbar=cfg.hbar, mass=cfg.mass)
    if cfg.system == "hard_wall":
        return hard_wall(hbar=cfg.hbar, mass=cfg.mass)
    if cfg.system == "square_well":
        return square_well(cfg.width, hbar=cfg.hbar, mass=cfg.mass)
    return harmonic_oscillator(cfg.omega, hbar=cfg.hbar, mass=cfg.mass)


def build_state(cfg: RunConfig) -> EigenstateSpec:
    system = build_system(cfg)
    q = cfg.quantum_number
    if system.kind in (SystemKind.CIRCLE, SystemKind.SQUARE_WELL, SystemKind.HARMONIC_OSCILLATOR):
        q = int(round(q))
    return EigenstateSpec(system, q)


# ---------------------------------------------------------------------------
# output plumbing


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _emit(
    out_dir: Path,
    name: str,
    header: Sequence[str],
    columns: Sequence[np.ndarray],
    fmt: str,
) -> str:
    """Write one data table as ``<name>.csv`` or ``<name>.json``; return the filename."""
    cols = [np.asarray(c, dtype=float) for c in columns]
    if fmt == "json":
        filename = f"{name}.json"
        payload = {h: [float(v) for v in c] for h, c in zip(header, cols)}
        (out_dir / filename).write_text(
            json.dumps(payload, indent=1) + "\n", encoding="utf-8"
        )
        return filename
    filename = f"{name}.csv"
    lines = [",".join(header)]
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    (out_dir / filename).write_text("\n".join(lines) + "\n", encoding="utf-8")
    log.debug("wrote %s (%d rows)", filename, cols[0].size)
    return filename


def _complex_table(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(values, dtype=np.complex128)
    return arr.real, arr.imag


def _bundle_for(state: EigenstateSpec, cfg: RunConfig) -> GridBundle:
    """Grid bundle from config, deferring unset knobs to the module defaults."""
    if state.system.kind is SystemKind.HARMONIC_OSCILLATOR:
        overrides: dict[str, float] = {}
        for key in ("delta_p_c", "p_c_max", "delta_x_f", "x_f_span", "epsilon", "n_p_floor", "n_p_slope"):
            value = getattr(cfg, key)
            if value is not None:
                overrides[key] = value
        if cfg.delta_T != math.pi / 16.0:
            overrides["delta_T"] = cfg.delta_T
        if cfg.n_time != 32:
            overrides["n_time"] = cfg.n_time
        return paper_grids(state, cfg.T, **overrides)
    span = None
    if cfg.p_c_lo is not None and cfg.p_c_hi is not None:
        span = (cfg.p_c_lo, cfg.p_c_hi)
    return stationary_grids(
        state,
        cfg.T,
        delta_p_c=cfg.delta_p_c,
        p_c_span=span,
        x_window=cfg.x_f_span,
        delta_x_f=cfg.delta_x_f,
    )


def _curve_grid(state: EigenstateSpec, cfg: RunConfig) -> np.ndarray:
    """Raw-integrand grid for the phasor stage/figures.

    Defaults to the 100-samples-per-window spacing over stationary-point
    centred spans; oscillator spans are symmetric about 0.
    """
    system = state.system
    h = math.sqrt(system.hbar * mass_parameter(system) / cfg.T)
    step = cfg.delta_p_c if cfg.delta_p_c is not None else h / 100.0
    if cfg.p_c_lo is not None and cfg.p_c_hi is not None:
        return uniform_grid(cfg.p_c_lo, cfg.p_c_hi, step)
    if system.kind is SystemKind.HARMONIC_OSCILLATOR:
        p_max = max(
            3.0 * math.sqrt(2.0 * system.mass * state.energy),
            system.mass * (system.omega or 1.0) * abs(cfg.x_f) + 10.0 * h,
        )
        return uniform_grid(-p_max, p_max, step)
    center = system.hbar * (
        state.wavenumber
        if system.kind in (SystemKind.HARD_WALL, SystemKind.SQUARE_WELL)
        else float(state.quantum_number)
    )
    lo = center - 50.0 * h
    if system.kind in (SystemKind.HARD_WALL, SystemKind.SQUARE_WELL):
        lo = -center - 50.0 * h
    return uniform_grid(lo, center + 50.0 * h, step)


# ---------------------------------------------------------------------------
# figure presets


def _fig1(cfg: RunConfig, out_dir: Path) -> tuple[RunConfig, list[str], dict]:
    cfg = dataclasses.replace(
        cfg,
        system="free_line",
        hbar=1.0,
        mass=1.0,
        quantum_number=1.0,
        T=1.0e4,
        x_f=0.0,
        delta_p_c=cfg.delta_p_c if cfg.delta_p_c is not None else 1e-4,
        p_c_lo=cfg.p_c_lo if cfg.p_c_lo is not None else 0.5,
        p_c_hi=cfg.p_c_hi if cfg.p_c_hi is not None else 1.5,
    )
    state = build_state(cfg)
    h = math.sqrt(1.0 / cfg.T)
    offset = cfg.segment_offset if cfg.segment_offset != 0.0 else h
    grid = uniform_grid(cfg.p_c_lo, cfg.p_c_hi, cfg.delta_p_c)
    log.info("fig1: phasor curve, %d samples", grid.size)
    curve = phasor_curve(state, cfg.x_f, cfg.T, grid)
    re, im = _complex_table(curve.cumulative)
    outputs = [_emit(out_dir, "fig1_curve", ("p_c", "re", "im"), (grid, re, im), cfg.format)]
    centers, windows = segment_windows(
        state, cfg.x_f, cfg.T, offset, cfg.p_c_lo, cfg.p_c_hi
    )
    wre, wim = _complex_table(windows)
    outputs.append(
        _emit(out_dir, "fig1_segments", ("p_c", "re", "im"), (centers, wre, wim), cfg.format)
    )
    seg_sum = complex(np.sum(windows))
    checks = {
        "endpoint_re": float(curve.endpoint.real),
        "endpoint_im": float(curve.endpoint.imag),
        "endpoint_abs_error": abs(curve.endpoint - 1.0),
        "segment_offset": offset,
        "segment_sum_re": seg_sum.real,
        "segment_sum_im": seg_sum.imag,
    }
    return cfg, outputs, checks


def _fig2(cfg: RunConfig, out_dir: Path) -> tuple[RunConfig, list[str], dict]:
    cfg = dataclasses.replace(
        cfg,
        system="free_line",
        hbar=1.0,
        mass=1.0,
        quantum_number=1.0,
        T=1.0e4,
        x_f=0.0,
        delta_p_c=cfg.delta_p_c if cfg.delta_p_c is not None else 1e-4,
        p_c_lo=cfg.p_c_lo if cfg.p_c_lo is not None else 0.5,
        p_c_hi=cfg.p_c_hi if cfg.p_c_hi is not None else 1.5,
    )
    state = build_state(cfg)
    grid = uniform_grid(cfg.p_c_lo, cfg.p_c_hi, cfg.delta_p_c)
    log.info("fig2: integrand and window series, %d samples", grid.size)
    raw = np.asarray(integrand(state, grid, cfg.x_f, cfg.T))
    re, im = _complex_table(raw)
    outputs = [
        _emit(out_dir, "fig2_integrand", ("p_c", "re", "im"), (grid, re, im), cfg.format)
    ]
    bundle = stationary_grids(
        state, cfg.T, delta_p_c=cfg.delta_p_c, p_c_span=(cfg.p_c_lo, cfg.p_c_hi)
    )
    averaged = window_average_series(state, grid, cfg.x_f, cfg.T, bundle)
    are, aim = _complex_table(averaged)
    outputs.append(
        _emit(out_dir, "fig2_window", ("p_c", "re", "im"), (grid, are, aim), cfg.format)
    )
    window_integral = trapezoid(grid, averaged)
    checks = {
        "window_series_integral_re": window_integral.real,
        "window_series_integral_im": window_integral.imag,
    }
    return cfg, outputs, checks


def _fig7(cfg: RunConfig, out_dir: Path) -> tuple[RunConfig, list[str], dict]:
    cfg = dataclasses.replace(cfg, system="harmonic_oscillator", hbar=1.0, mass=1.0, omega=1.0)
    threads = _resolve_threads(cfg)
    outputs: list[str] = []
    checks: dict[str, object] = {}
    for n in range(4):
        state = EigenstateSpec(build_system(cfg), n)
        bundle = _bundle_for(state, cfg)
        log.info("fig7: time-averaged distribution n=%d (threads=%d)", n, threads)
        dist = time_average(state, cfg.T, bundle, threads=threads)
        re, im = _complex_table(dist.values)
        outputs.append(
            _emit(out_dir, f"fig7_n{n}", ("p_c", "re", "im"), (dist.p_c_grid, re, im), cfg.format)
        )
        checks[f"n{n}_moments"] = moments(dist)
        checks[f"n{n}_expected_peak"] = math.sqrt(2.0 * n + 1.0)
    return cfg, outputs, checks


def _fig8(cfg: RunConfig, out_dir: Path) -> tuple[RunConfig, list[str], dict]:
    cfg = dataclasses.replace(cfg, system="harmonic_oscillator", hbar=1.0, mass=1.0, omega=1.0)
    threads = _resolve_threads(cfg)
    outputs: list[str] = []
    checks: dict[str, object] = {}
    for n in (0, 3):
        state = EigenstateSpec(build_system(cfg), n)
        bundle = _bundle_for(state, cfg)
        b_n = math.sqrt(2.0 * state.system.mass * state.energy)
        bands: list[tuple[float, float]] = [
            (0.0, 10.0),
            (max(b_n - 1.0, 0.0), b_n + 1.0),
            (b_n - 0.2, b_n + 0.2),
        ]
        psi = np.asarray(eigenfunction(state, bundle.x_f_grid), dtype=np.complex128)
        for i, band in enumerate(bands):
            log.info("fig8: n=%d band (%.3f, %.3f)", n, band[0], band[1])
            rec = reconstruct(state, band, cfg.T, bundle, threads=threads)
            re, im = _complex_table(rec.values)
            outputs.append(
                _emit(
                    out_dir,
                    f"fig8_n{n}_band{i}",
                    ("x_f", "re", "im"),
                    (rec.x_f_grid, re, im),
                    cfg.format,
                )
            )
            key = f"n{n}_band{i}"
            checks[key + "_edges"] = list(band)
            checks[key + "_max_abs_dev_from_psi"] = float(
                np.max(np.abs(rec.values - psi))
            )
            if i == 2:
                turning = math.sqrt(2.0 * state.energy / (state.system.mass * (state.system.omega or 1.0) ** 2))
                outside = np.abs(bundle.x_f_grid) > turning
                checks[key + "_outside_turning_max"] = float(
                    np.max(np.abs(rec.values[outside])) if np.any(outside) else 0.0
                )
    return cfg, outputs, checks


def _fig9(cfg: RunConfig, out_dir: Path) -> tuple[RunConfig, list[str], dict]:
    cfg = dataclasses.replace(cfg, system="harmonic_oscillator", hbar=1.0, mass=1.0, omega=1.0)
    system = build_system(cfg)
    outputs: list[str] = []
    checks: dict[str, object] = {}
    for n in range(4):
        reach = 5.0 * math.sqrt(2.0 * n + 1.0) + 1.0
        x_grid = uniform_grid(-reach, reach, 0.01)
        p_step = cfg.delta_p_c if cfg.delta_p_c is not None else 0.01
        p_grid = uniform_grid(-reach, reach, p_step)
        log.info("fig9: Wigner momentum marginal n=%d (%d momenta)", n, p_grid.size)
        marginal = np.asarray(
            [wigner_momentum_marginal(n, float(p), system, x_grid) for p in p_grid]
        )
        outputs.append(
            _emit(out_dir, f"fig9_n{n}", ("p", "value"), (p_grid, marginal), cfg.format)
        )
        exact = np.asarray(momentum_density(n, p_grid, system))
        checks[f"n{n}_max_abs_dev_from_closed_form"] = float(np.max(np.abs(marginal - exact)))
    return cfg, outputs, checks


def _fig10(cfg: RunConfig, out_dir: Path) -> tuple[RunConfig, list[str], dict]:
    cfg = dataclasses.replace(cfg, system="harmonic_oscillator", hbar=1.0, mass=1.0, omega=1.0)
    alpha = uniform_grid(0.0, 3.0, 0.002)
    outputs: list[str] = []
    checks: dict[str, object] = {}
    for n in range(4):
        values = np.asarray([coherent_overlap(n, float(a)) for a in alpha])
        outputs.append(
            _emit(out_dir, f"fig10_n{n}", ("alpha", "value"), (alpha, values), cfg.format)
        )
        checks[f"n{n}_argmax_alpha"] = float(alpha[int(np.argmax(values))])
        checks[f"n{n}_expected_argmax"] = math.sqrt(n)
    checks["completeness_sum_alpha_1.5_n40"] = float(
        math.fsum(coherent_overlap(m, 1.5) for m in range(41))
    )
    return cfg, outputs, checks


# ---------------------------------------------------------------------------
# generic stages


def _stage_phasor(cfg: RunConfig, out_dir: Path) -> tuple[RunConfig, list[str], dict]:
    state = build_state(cfg)
    grid = _curve_grid(state, cfg)
    log.info("phasor: %s curve, %d samples", cfg.system, grid.size)
    curve = phasor_curve(state, cfg.x_f, cfg.T, grid)
    re, im = _complex_table(curve.cumulative)
    outputs = [_emit(out_dir, "phasor", ("p_c", "re", "im"), (grid, re, im), cfg.format)]
    target = complex(eigenfunction(state, cfg.x_f))
    checks = {
        "endpoint_re": curve.endpoint.real,
        "endpoint_im": curve.endpoint.imag,
        "eigenfunction_re": target.real,
        "eigenfunction_im": target.imag,
        "endpoint_abs_error": abs(curve.endpoint - target),
    }
    return cfg, outputs, checks


def _stage_window(cfg: RunConfig, out_dir: Path) -> tuple[RunConfig, list[str], dict]:
    state = build_state(cfg)
    bundle = _bundle_for(state, cfg)
    grid = bundle.p_c_grid
    log.info("window: %s series, %d windows", cfg.system, grid.size)
    series = window_average_series(state, grid, cfg.x_f, cfg.T, bundle)
    re, im = _complex_table(series)
    outputs = [_emit(out_dir, "window", ("p_c", "re", "im"), (grid, re, im), cfg.format)]
    target = complex(eigenfunction(state, cfg.x_f))
    total = trapezoid(grid, series)
    checks = {
        "series_integral_re": total.real,
        "series_integral_im": total.imag,
        "eigenfunction_re": target.real,
        "eigenfunction_im": target.imag,
    }
    return cfg, outputs, checks


def _stage_distribution(cfg: RunConfig, out_dir: Path) -> tuple[RunConfig, list[str], dict]:
    state = build_state(cfg)
    bundle = _bundle_for(state, cfg)
    log.info("distribution: %s at T=%g", cfg.system, cfg.T)
    dist = spatial_average(state, cfg.T, bundle, threads=_resolve_threads(cfg))
    return cfg, *_emit_distribution(dist, "distribution", cfg, out_dir)


def _emit_distribution(
    dist: PathDistribution, name: str, cfg: RunConfig, out_dir: Path
) -> tuple[list[str], dict]:
    re, im = _complex_table(dist.values)
    outputs = [
        _emit(out_dir, name, ("p_c", "re", "im"), (dist.p_c_grid, re, im), cfg.format)
    ]
    checks: dict[str, object] = {"normalization_N": dist.normalization_N}
    try:
        checks["moments"] = moments(dist)
    except PathspectraError as exc:  # moments can be legitimately undefined
        checks["moments_error"] = str(exc)
    return outputs, checks


def _stage_time_average(cfg: RunConfig, out_dir: Path) -> tuple[RunConfig, list[str], dict]:
    state = build_state(cfg)
    bundle = _bundle_for(state, cfg)
    log.info("time-average: n=%d over %d samples", int(cfg.quantum_number), len(bundle.T_samples))
    dist = time_average(state, cfg.T, bundle, threads=_resolve_threads(cfg))
    return cfg, *_emit_distribution(dist, "time-average", cfg, out_dir)


def _stage_reconstruct(cfg: RunConfig, out_dir: Path) -> tuple[RunConfig, list[str], dict]:
    state = build_state(cfg)
    bundle = _bundle_for(state, cfg)
    band = None if cfg.band_hi is None else (cfg.band_lo, cfg.band_hi)
    log.info("reconstruct: %s band=%s", cfg.system, band if band else "full")
    rec = reconstruct(state, band, cfg.T, bundle, threads=_resolve_threads(cfg))
    re, im = _complex_table(rec.values)
    outputs = [
        _emit(out_dir, "reconstruct", ("x_f", "re", "im"), (rec.x_f_grid, re, im), cfg.format)
    ]
    psi = np.asarray(eigenfunction(state, rec.x_f_grid), dtype=np.complex128)
    checks = {
        "band": list(band) if band else "full",
        "max_abs_dev_from_psi": float(np.max(np.abs(rec.values - psi))),
    }
    return cfg, outputs, checks


def _stage_compare(cfg: RunConfig, out_dir: Path) -> tuple[RunConfig, list[str], dict]:
    if cfg.system != "harmonic_oscillator":
        raise DomainError("the compare stage is defined for the oscillator")
    system = build_system(cfg)
    n = int(cfg.quantum_number)
    reach = 5.0 * math.sqrt(2.0 * n + 1.0) + 1.0
    scale_x = math.sqrt(cfg.hbar / (cfg.mass * cfg.omega))
    scale_p = math.sqrt(cfg.hbar * cfg.mass * cfg.omega)
    x_grid = uniform_grid(-reach * scale_x, reach * scale_x, 0.01 * scale_x)
    p_step = (cfg.delta_p_c if cfg.delta_p_c is not None else 0.01) * scale_p
    p_grid = uniform_grid(-reach * scale_p, reach * scale_p, p_step)
    log.info("compare: n=%d marginal and overlap series", n)
    marginal = np.asarray(
        [wigner_momentum_marginal(n, float(p), system, x_grid) for p in p_grid]
    )
    alpha = uniform_grid(0.0, 3.0, 0.002)
    overlap = np.asarray([coherent_overlap(n, float(a)) for a in alpha])
    outputs = [
        _emit(out_dir, "compare_marginal", ("p", "value"), (p_grid, marginal), cfg.format),
        _emit(out_dir, "compare_overlap", ("alpha", "value"), (alpha, overlap), cfg.format),
    ]
    exact = np.asarray(momentum_density(n, p_grid, system))
    checks = {
        "marginal_max_abs_dev": float(np.max(np.abs(marginal - exact))),
        "overlap_argmax_alpha": float(alpha[int(np.argmax(overlap))]),
    }
    return cfg, outputs, checks


_RUNNERS = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig7": _fig7,
    "fig8": _fig8,
    "fig9": _fig9,
    "fig10": _fig10,
    "phasor": _stage_phasor,
    "window": _stage_window,
    "distribution": _stage_distribution,
    "time-average": _stage_time_average,
    "reconstruct": _stage_reconstruct,
    "compare": _stage_compare,
}


def run_figure(preset: str, cfg: RunConfig) -> list[str]:
    """Produce one paper figure's data files; returns the filenames written."""
    if preset not in PRESETS:
        raise UsageError(f"unknown figure preset {preset!r}")
    return _run_command(preset, cfg)


def run_stage(stage: str, cfg: RunConfig) -> list[str]:
    """Run one generic pipeline stage; returns the filenames written."""
    if stage not in STAGES:
        raise UsageError(f"unknown stage {stage!r}")
    return _run_command(stage, cfg)


def _run_command(command: str, cfg: RunConfig) -> list[str]:
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    effective, outputs, checks = _RUNNERS[command](cfg, out_dir)
    manifest = {
        "command": command,
        "version": __version__,
        "effective_config": effective_config(effective),
        "threads_used": _resolve_threads(effective),
        "outputs": outputs,
        "checks": checks,
        "runtime_seconds": round(time.perf_counter() - started, 3),
    }
    manifest_name = f"{command}.manifest.json"
    (out_dir / manifest_name).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    log.info("%s: wrote %d data file(s) + %s", command, len(outputs), manifest_name)
    return outputs + [manifest_name]


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pathspectra",
        description="Path distributions over characteristic momentum for five 1-D systems.",
    )
    parser.add_argument("command", choices=PRESETS + STAGES, help="figure preset or pipeline stage")
    parser.add_argument("--config", type=Path, help="flat key = value configuration file")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one configuration key (repeatable)",
    )
    parser.add_argument("--out", help="output directory (default: current)")
    parser.add_argument("--format", choices=("csv", "json"), help="data file format")
    parser.add_argument("--threads", type=int, help="worker threads (0 = all cores)")
    parser.add_argument("-v", "--verbose", action="store_true", help="chatty progress output")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(message)s",
        stream=sys.stderr,
    )
    try:
        mapping: dict[str, object] = {}
        if args.config is not None:
            mapping.update(parse_config_file(args.config))
        for item in args.overrides:
            if "=" not in item:
                raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
            key, value = item.split("=", 1)
            mapping[key.strip()] = value.strip()
        if args.out is not None:
            mapping["out"] = args.out
        if args.format is not None:
            mapping["format"] = args.format
        if args.threads is not None:
            mapping["threads"] = args.threads
        cfg = config_from_mapping(mapping)
        _run_command(args.command, cfg)
    except UsageError as exc:
        log.error("usage error: %s", exc)
        return EXIT_USAGE
    except (SingularTimeError, DivergentSampleError, ExcludedRegionError) as exc:
        log.error("singularity: %s", exc)
        return EXIT_SINGULAR
    except PathspectraError as exc:
        log.error("domain error: %s", exc)
        return EXIT_DOMAIN
    except OSError as exc:
        log.error("i/o error: %s", exc)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
