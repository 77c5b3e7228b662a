"""Experiment orchestration: sweeps over Kn, error metric, rate fitting.

For each Knudsen number the harness computes the boundary coefficients
(per-Kn, since the gradient data carries Kn), solves the limit problem,
runs the kinetic reference, and records the interior mismatch

    error = sqrt( sum_{i=[Nx/4]}^{[3Nx/4]} |rho_i - T_i|^2 )

on the reference cell centers (the affine limit profile is interpolated
exactly onto them).  The window cuts off the boundary layers.  A least
squares fit of log error against log Kn estimates the convergence rate.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import kernels
from .diffusion import DiffusionConfig, solve_robin
from .errors import ConfigError, PhonodiffError
from .halfspace import LayerWorkspace
from .kinetic import KineticGrid, solve_steady, temperature
from .material import (MaterialModel, VelocityGrid, material_from_spec,
                       reflection_tanh)
from .robin import RobinCoefficients, robin_coefficients

MODES = ("robin", "dirichlet")


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    material: dict
    phi: object = "v"
    eta: object = 0.5
    kn: tuple = (0.25, 0.125, 0.0625)
    mode: str = "robin"
    example: str = "experiment"
    n_poly: int = 16
    alpha_d: float = 0.01
    n_quad: int = 32
    reference_exponent: int = 10
    reference_tol: float = 1e-10
    reference_max_iter: int = 100_000
    diffusion_nx: int = 512
    workers: int = 1
    output_dir: str | None = None

    def __post_init__(self):
        kn = tuple(float(k) for k in self.kn)
        if not kn or any(k <= 0 for k in kn):
            raise ConfigError("kn list must be nonempty and positive")
        if any(a <= b for a, b in zip(kn, kn[1:])):
            raise ConfigError("kn list must be strictly decreasing")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        object.__setattr__(self, "kn", kn)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("experiment config must be a mapping")
        raw = dict(raw)
        ref = dict(raw.pop("reference", {}))
        diff = dict(raw.pop("diffusion", {}))
        known = {
            "material": raw.pop("material", {"preset": "single-bin"}),
            "phi": raw.pop("phi", "v"),
            "eta": raw.pop("eta", 0.5),
            "kn": raw.pop("kn", (0.25, 0.125, 0.0625)),
            "mode": raw.pop("mode", "robin"),
            "example": raw.pop("example", "experiment"),
            "n_poly": int(raw.pop("n_poly", 16)),
            "alpha_d": float(raw.pop("alpha_d", 0.01)),
            "n_quad": int(raw.pop("n_quad", 32)),
            "reference_exponent": int(ref.pop("spacing_exponent", 10)),
            "reference_tol": float(ref.pop("tol", 1e-10)),
            "reference_max_iter": int(ref.pop("max_iter", 100_000)),
            "diffusion_nx": int(diff.pop("nx", 512)),
            "workers": int(raw.pop("workers", 1)),
            "output_dir": raw.pop("output_dir", None),
        }
        for leftover, name in ((raw, "config"), (ref, "reference"),
                               (diff, "diffusion")):
            if leftover:
                raise ConfigError(f"unexpected {name} keys {sorted(leftover)}")
        return cls(**known)

    def to_dict(self) -> dict:
        return {
            "material": self.material, "phi": self.phi, "eta": self.eta,
            "kn": list(self.kn), "mode": self.mode, "example": self.example,
            "n_poly": self.n_poly, "alpha_d": self.alpha_d,
            "n_quad": self.n_quad,
            "reference": {"spacing_exponent": self.reference_exponent,
                          "tol": self.reference_tol,
                          "max_iter": self.reference_max_iter},
            "diffusion": {"nx": self.diffusion_nx},
            "workers": self.workers, "output_dir": self.output_dir,
        }


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return ExperimentConfig.from_dict(json.load(fh))


def incoming_data(spec):
    """Boundary-data selector: 'v', 'v2', or polynomial tables in v."""
    if spec == "v":
        return lambda v, w: v * np.ones_like(w)
    if spec == "v2":
        return lambda v, w: v**2 * np.ones_like(w)
    if isinstance(spec, dict) and "poly" in spec and len(spec) == 1:
        coeffs = [float(c) for c in spec["poly"]]
        return lambda v, w: np.polynomial.polynomial.polyval(v, coeffs) \
            * np.ones_like(w)
    if isinstance(spec, dict) and "per_bin_poly" in spec and len(spec) == 1:
        tables = [list(map(float, row)) for row in spec["per_bin_poly"]]

        def data(v, w):
            cols = [np.polynomial.polynomial.polyval(v[:, 0], c) for c in tables]
            return np.stack(cols, axis=1)

        return data
    raise ConfigError(f"unknown boundary data selector {spec!r}")


def reflection_spec(spec, material: MaterialModel) -> np.ndarray:
    """Reflection selector: scalar, per-bin list, or the tanh profile."""
    if isinstance(spec, dict):
        if spec == {"preset": "tanh"}:
            return reflection_tanh(material.omega)
        raise ConfigError(f"unknown reflection spec {spec!r}")
    eta = np.broadcast_to(np.asarray(spec, dtype=float),
                          (material.n_bins,)).astype(float)
    if np.any(eta < 0) or np.any(eta > 1):
        raise ConfigError("reflection coefficients must lie in [0, 1]")
    return eta


# ---------------------------------------------------------------------------
# error metric and rate fit
# ---------------------------------------------------------------------------

def metric_window(n: int) -> slice:
    """Interior window [n/4, 3n/4] (integer floors, inclusive)."""
    return slice(n // 4, 3 * n // 4 + 1)


def error_metric(rho_samples: np.ndarray, temperature_samples: np.ndarray) -> float:
    """Root of the summed squared interior mismatch on a common grid."""
    rho_samples = np.asarray(rho_samples, dtype=float)
    temperature_samples = np.asarray(temperature_samples, dtype=float)
    if rho_samples.shape != temperature_samples.shape:
        raise ValueError(
            f"profiles live on different grids ({rho_samples.shape} vs "
            f"{temperature_samples.shape}); resample before comparing")
    window = metric_window(rho_samples.size)
    diff = rho_samples[window] - temperature_samples[window]
    return float(np.sqrt(np.sum(diff**2)))


def fit_rate(kn_values, errors):
    """Least-squares slope of log error vs log Kn, with fit residual."""
    kn_values = np.asarray(kn_values, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if kn_values.size < 3:
        raise ValueError("rate fit needs at least three points")
    if np.any(errors <= 0):
        raise ValueError("rate fit needs strictly positive errors")
    coeffs, diagnostics = np.polynomial.polynomial.polyfit(
        np.log(kn_values), np.log(errors), 1, full=True)
    residual = float(diagnostics[0][0]) if diagnostics[0].size else 0.0
    return float(coeffs[1]), residual


# ---------------------------------------------------------------------------
# experiment driver
# ---------------------------------------------------------------------------

@dataclass
class KnPoint:
    kn: float
    error: float | None
    coefficients: RobinCoefficients | None
    iterations: int | None
    failure: str | None = None


@dataclass
class ConvergenceRecord:
    config: ExperimentConfig
    points: list[KnPoint]
    slope: float | None
    fit_residual: float | None
    profiles: dict = field(default_factory=dict)

    @property
    def errors(self):
        return [p.error for p in self.points if p.error is not None]


_reference_cache: dict = {}


def _reference_key(cfg: ExperimentConfig, kn: float):
    return (json.dumps(cfg.material, sort_keys=True),
            json.dumps(cfg.phi, sort_keys=True),
            json.dumps(cfg.eta, sort_keys=True),
            kn, cfg.reference_exponent, cfg.reference_tol,
            cfg.reference_max_iter)


def effective_coefficients(coeffs: RobinCoefficients,
                           mode: str) -> RobinCoefficients:
    """Robin mode keeps all five; dirichlet mode drops the left gradient.

    The left condition collapses to rho(0) = b0/b1, the leading-order
    boundary condition; the right wall keeps its full (b3, b4) pair.
    """
    if mode == "robin":
        return coeffs
    return replace(coeffs, b2=0.0)


def run_point(cfg: ExperimentConfig, kn: float):
    """One Kn point: coefficients, limit profile, reference, error."""
    base = material_from_spec(cfg.material)
    material = base.with_kn_avg(kn)
    vgrid = VelocityGrid.gauss(cfg.n_quad)
    phi = incoming_data(cfg.phi)
    eta = reflection_spec(cfg.eta, material)

    ws = LayerWorkspace(material, vgrid, cfg.n_poly, cfg.alpha_d)
    coeffs = robin_coefficients(phi, eta, material, vgrid, cfg.n_poly,
                                cfg.alpha_d, workspace=ws)
    used = effective_coefficients(coeffs, cfg.mode)
    rho = solve_robin(DiffusionConfig(
        nx=cfg.diffusion_nx, coeffs=used,
        diff_coeff=material.diffusion_coefficient,
        alpha0_avg=material.alpha0_avg))

    key = _reference_key(cfg, kn)
    cached = _reference_cache.get(key)
    if cached is None:
        grid = KineticGrid.from_spacing_exponent(cfg.reference_exponent)
        fld = solve_steady(phi, eta, material, grid,
                           tol=cfg.reference_tol,
                           max_iter=cfg.reference_max_iter)
        cached = (temperature(fld), grid.cell_centers, fld.iterations)
        _reference_cache[key] = cached
    T, centers, iterations = cached

    rho_at_centers = np.interp(centers, np.linspace(0.0, 1.0, cfg.diffusion_nx + 1),
                               rho)
    err = error_metric(rho_at_centers, T)
    profiles = {
        "x_nodes": np.linspace(0.0, 1.0, cfg.diffusion_nx + 1),
        "rho": rho, "x_centers": centers, "temperature": T,
    }
    return KnPoint(kn, err, coeffs, iterations), profiles


def run_experiment(cfg: ExperimentConfig) -> ConvergenceRecord:
    """Full sweep; per-point failures are recorded, not raised."""
    def job(kn):
        try:
            return run_point(cfg, kn)
        except (PhonodiffError, ValueError) as exc:
            return KnPoint(kn, None, None, None,
                           failure=f"{type(exc).__name__}: {exc}"), None

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(job, cfg.kn))
    else:
        outcomes = [job(kn) for kn in cfg.kn]

    points = [p for p, _ in outcomes]
    profiles = {p.kn: prof for (p, prof) in outcomes if prof is not None}
    good = [(p.kn, p.error) for p in points if p.error is not None]
    slope = residual = None
    if len(good) >= 3:
        slope, residual = fit_rate([g[0] for g in good], [g[1] for g in good])
    record = ConvergenceRecord(cfg, points, slope, residual, profiles)
    if cfg.output_dir is not None:
        write_outputs(record, Path(cfg.output_dir))
    return record


# ---------------------------------------------------------------------------
# output files
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def write_outputs(record: ConvergenceRecord, out_dir: Path) -> None:
    out_dir = Path(out_dir)
    (out_dir / "profiles").mkdir(parents=True, exist_ok=True)
    cfg = record.config

    lines = ["kn,error,mode,phi,example"]
    for p in record.points:
        if p.error is None:
            continue
        phi_label = cfg.phi if isinstance(cfg.phi, str) else "custom"
        lines.append(f"{_fmt(p.kn)},{_fmt(p.error)},{cfg.mode},"
                     f"{phi_label},{cfg.example}")
    (out_dir / "summary.csv").write_text("\n".join(lines) + "\n",
                                         encoding="utf-8")

    payload = {
        "config": cfg.to_dict(),
        "backend": kernels.BACKEND,
        "slope": record.slope,
        "fit_residual": record.fit_residual,
        "points": [
            {
                "kn": p.kn,
                "error": p.error,
                "iterations": p.iterations,
                "coefficients": (p.coefficients.as_dict()
                                 if p.coefficients else None),
                "failure": p.failure,
            }
            for p in record.points
        ],
    }
    (out_dir / "summary.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    for kn, prof in record.profiles.items():
        label = _fmt(kn)
        write_profile(out_dir / "profiles" / f"diffusion_kn{label}.csv",
                      prof["x_nodes"], prof["rho"], header="x,rho")
        write_profile(out_dir / "profiles" / f"reference_kn{label}.csv",
                      prof["x_centers"], prof["temperature"], header="x,T")


def write_profile(path: Path, x: np.ndarray, y: np.ndarray,
                  header: str = "x,y") -> None:
    """Two-column delimited text profile."""
    rows = [header]
    rows.extend(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(x, y))
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_field(path: Path, field_values: np.ndarray, grid, material) -> None:
    """Delimited (x, v, omega, f) dump with a grid/material header."""
    nx, nv, nb = field_values.shape
    lines = [
        f"# nx={nx} nv={nv} bins={nb} dx={_fmt(grid.dx)} dv={_fmt(grid.dv)}",
        f"# omega={','.join(_fmt(w) for w in material.omega)}",
        f"# kn={','.join(_fmt(k) for k in material.kn)}",
        "x,v,omega,f",
    ]
    centers = grid.cell_centers
    vfull = grid.v_full
    for i in range(nx):
        for j in range(nv):
            for k in range(nb):
                lines.append(f"{_fmt(centers[i])},{_fmt(vfull[j])},"
                             f"{_fmt(material.omega[k])},"
                             f"{_fmt(field_values[i, j, k])}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
