"""Command-line interface.

Subcommands: ``run`` (full convergence experiment), ``robin-coeffs`` (print
the five boundary coefficients), ``halfspace`` (single layer solve),
``reference`` (kinetic solve only), and ``benchmark`` (sweep kernels).
Failures exit nonzero with a machine-readable JSON object on stderr.
"""

from __future__ import annotations

import functools
import json
import sys
import time

import click
import numpy as np

from . import kernels
from .errors import PhonodiffError
from .halfspace import DirichletBC, ReflectiveBC, solve_halfspace
from .harness import (ExperimentConfig, incoming_data, load_config,
                      reflection_spec, run_experiment, write_field,
                      write_profile)
from .kinetic import KineticGrid, solve_steady, temperature
from .material import VelocityGrid, material_from_spec
from .robin import robin_coefficients


def emit_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (PhonodiffError, ValueError, OSError, json.JSONDecodeError) as exc:
            payload = {"error": type(exc).__name__, "message": str(exc)}
            click.echo(json.dumps(payload), err=True)
            sys.exit(1)
    return wrapper


@click.group()
def main():
    """Diffusion limits of steady phonon transport with Robin conditions."""


def _config(path, **overrides) -> ExperimentConfig:
    cfg = load_config(path)
    raw = cfg.to_dict()
    for key, value in overrides.items():
        if value is not None:
            raw[key] = value
    return ExperimentConfig.from_dict(raw)


@main.command()
@click.option("-c", "--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["robin", "dirichlet"]), default=None)
@click.option("--phi", default=None, help="boundary data selector (v, v2)")
@click.option("--kn", "kn_values", multiple=True, type=float,
              help="override the Kn sweep (repeatable)")
@click.option("--n-poly", type=int, default=None)
@click.option("--workers", type=int, default=None)
@click.option("--out", "output_dir", default=None,
              type=click.Path(file_okay=False))
@emit_errors
def run(config_path, mode, phi, kn_values, n_poly, workers, output_dir):
    """Run a convergence experiment from a config file."""
    cfg = _config(config_path, mode=mode, phi=phi,
                  kn=list(kn_values) or None, n_poly=n_poly,
                  workers=workers, output_dir=output_dir)
    record = run_experiment(cfg)
    summary = {
        "example": cfg.example, "mode": cfg.mode, "backend": kernels.BACKEND,
        "slope": record.slope,
        "errors": {repr(p.kn): p.error for p in record.points},
        "failures": {repr(p.kn): p.failure for p in record.points if p.failure},
        "output_dir": cfg.output_dir,
    }
    click.echo(json.dumps(summary, sort_keys=True))


@main.command("robin-coeffs")
@click.option("-c", "--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--kn", type=float, required=True)
@click.option("--phi", default=None)
@emit_errors
def robin_coeffs(config_path, kn, phi):
    """Print the five boundary coefficients at one Kn."""
    cfg = _config(config_path, phi=phi)
    material = material_from_spec(cfg.material).with_kn_avg(kn)
    vgrid = VelocityGrid.gauss(cfg.n_quad)
    coeffs = robin_coefficients(incoming_data(cfg.phi),
                                reflection_spec(cfg.eta, material),
                                material, vgrid, cfg.n_poly, cfg.alpha_d)
    click.echo(json.dumps({"kn": kn, **coeffs.as_dict()}, sort_keys=True))


@main.command()
@click.option("-c", "--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--bc", type=click.Choice(["dirichlet", "reflective"]),
              default="dirichlet")
@click.option("--psi", default="v", help="incoming data selector")
@click.option("--kn", type=float, required=True)
@click.option("--profile", "profile_path", default=None,
              type=click.Path(dir_okay=False),
              help="dump the recovered scalar profile over z")
@click.option("--debug-dump", "debug_path", default=None,
              type=click.Path(dir_okay=False),
              help="dump system matrices, spectrum, and coefficients")
@emit_errors
def halfspace(config_path, bc, psi, kn, profile_path, debug_path):
    """Solve a single half-space layer problem and print theta_inf."""
    cfg = _config(config_path)
    material = material_from_spec(cfg.material).with_kn_avg(kn)
    vgrid = VelocityGrid.gauss(cfg.n_quad)
    data = incoming_data(psi)
    if bc == "dirichlet":
        condition = DirichletBC(data)
    else:
        condition = ReflectiveBC(reflection_spec(cfg.eta, material), data)
    solution = solve_halfspace(condition, material, vgrid, cfg.n_poly,
                               cfg.alpha_d)
    click.echo(json.dumps({"kn": kn, "theta_inf": solution.theta_inf},
                          sort_keys=True))
    if profile_path:
        z = np.linspace(0.0, 8.0, 257)
        wv = np.concatenate([vgrid.positive_weights[::-1],
                             vgrid.positive_weights])
        scalars = [float(wv @ solution.recovered(zz) @
                         material.measure_weights) for zz in z]
        write_profile(profile_path, z, np.asarray(scalars), header="z,scalar")
    if debug_path:
        from .layer import assemble
        system = assemble(solution.basis, solution.alpha_d)
        dump = {
            "a_matrix": system.a_matrix.tolist(),
            "b_matrix": system.b_matrix.tolist(),
            "eigenvalues": [None if not np.isfinite(v) else v
                            for v in solution.modes.eigenvalues],
            "c0": list(solution.c0),
            "theta_inf": solution.theta_inf,
        }
        with open(debug_path, "w", encoding="utf-8") as fh:
            json.dump(dump, fh, indent=2, sort_keys=True)


@main.command()
@click.option("-c", "--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--kn", type=float, required=True)
@click.option("--out", "out_path", required=True,
              type=click.Path(dir_okay=False))
@click.option("--field", "field_path", default=None,
              type=click.Path(dir_okay=False))
@emit_errors
def reference(config_path, kn, out_path, field_path):
    """Kinetic reference solve; writes the temperature profile."""
    cfg = _config(config_path)
    material = material_from_spec(cfg.material).with_kn_avg(kn)
    grid = KineticGrid.from_spacing_exponent(cfg.reference_exponent)
    fld = solve_steady(incoming_data(cfg.phi),
                       reflection_spec(cfg.eta, material),
                       material, grid, tol=cfg.reference_tol,
                       max_iter=cfg.reference_max_iter)
    write_profile(out_path, grid.cell_centers, temperature(fld), header="x,T")
    if field_path:
        write_field(field_path, fld.values, grid, material)
    click.echo(json.dumps({"kn": kn, "iterations": fld.iterations,
                           "residual": fld.residual,
                           "backend": kernels.BACKEND}, sort_keys=True))


@main.command()
@click.option("--nx", type=int, default=1024)
@click.option("--nv", type=int, default=2048)
@click.option("--bins", type=int, default=6)
@click.option("--repeats", type=int, default=5)
@emit_errors
def benchmark(nx, nv, bins, repeats):
    """Time one transport sweep on each available kernel backend."""
    rng = np.random.default_rng(0)
    T = rng.random(nx)
    incoming = rng.random((nv // 2, bins))
    coef = np.full(bins, 16.0)
    vpos = (np.arange(nv // 2) + 0.5) * (2.0 / nv)
    wv = np.full(nv // 2, 1.0 / nv)
    wom = np.full(bins, 1.0 / bins)
    results = {}
    for name in sorted(kernels.BACKENDS):
        t0 = time.perf_counter()
        for _ in range(repeats):
            contrib, trace = kernels.sweep_forward(
                T, incoming, coef, vpos, wv, wom, 1.0 / nx, backend=name)
        elapsed = (time.perf_counter() - t0) / repeats
        results[name] = {
            "seconds_per_sweep": elapsed,
            "cell_updates_per_second": nx * (nv // 2) * bins / elapsed,
        }
    if {"python", "compiled"} <= results.keys():
        results["speedup"] = (results["python"]["seconds_per_sweep"]
                              / results["compiled"]["seconds_per_sweep"])
    click.echo(json.dumps({"active_backend": kernels.BACKEND,
                           "nx": nx, "nv": nv, "bins": bins,
                           "results": results}, sort_keys=True))


if __name__ == "__main__":
    main()
