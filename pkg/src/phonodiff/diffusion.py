"""Limiting diffusion problem with Robin boundary conditions.

Finite differences on the unit interval with nodes x_i = i/nx:

    D (rho_{i+1} - 2 rho_i + rho_{i-1}) / dx^2 + a0 rho_i = 0
    b1 rho_0 - (b2/dx)(rho_1 - rho_0) = b0
    b3 rho_n + (b4/dx)(rho_n - rho_{n-1}) = 0

The one-sided boundary gradients match the scheme used to derive the
conditions; with a0 = 0 the solution is affine and the scheme is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import SolverError
from .halfspace import HalfSpaceSolution
from .material import MaterialModel, VelocityGrid
from .robin import RobinCoefficients

ROBIN_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class DiffusionConfig:
    """Grid and coefficients for one limit solve."""

    nx: int
    coeffs: RobinCoefficients
    diff_coeff: float = 1.0
    alpha0_avg: float = 0.0

    def __post_init__(self):
        if self.nx < 4:
            raise ValueError("nx must be at least 4")
        if self.diff_coeff <= 0:
            raise ValueError("diffusion coefficient must be positive")

    @property
    def dx(self) -> float:
        return 1.0 / self.nx

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.nx + 1)


def solve_robin(cfg: DiffusionConfig) -> np.ndarray:
    """Density profile on the nodes; residual-checked tridiagonal solve."""
    b = cfg.coeffs
    n = cfg.nx
    dx = cfg.dx
    lower = np.zeros(n + 1)
    diag = np.zeros(n + 1)
    upper = np.zeros(n + 1)
    rhs = np.zeros(n + 1)

    diag[1:n] = -2.0 * cfg.diff_coeff / dx**2 + cfg.alpha0_avg
    lower[1:n] = cfg.diff_coeff / dx**2
    upper[1:n] = cfg.diff_coeff / dx**2

    diag[0] = b.b1 + b.b2 / dx
    upper[0] = -b.b2 / dx
    rhs[0] = b.b0
    diag[n] = b.b3 + b.b4 / dx
    lower[n] = -b.b4 / dx
    rhs[n] = 0.0

    banded = np.zeros((3, n + 1))
    banded[0, 1:] = upper[:-1]
    banded[1, :] = diag
    banded[2, :-1] = lower[1:]
    try:
        rho = sla.solve_banded((1, 1), banded, rhs)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SolverError(f"Robin finite-difference system is singular ({exc}); "
                          "check that the boundary pairs do not vanish") from exc

    residual = _robin_residual(rho, cfg)
    if residual > ROBIN_RESIDUAL_TOL:
        raise SolverError("Robin solve left an unexpected residual", residual)
    return rho


def _robin_residual(rho: np.ndarray, cfg: DiffusionConfig) -> float:
    """Largest row residual, each normalized by its row scale."""
    b = cfg.coeffs
    dx = cfg.dx
    scale = max(1.0, float(np.abs(rho).max()))
    interior = (cfg.diff_coeff * (rho[2:] - 2 * rho[1:-1] + rho[:-2]) / dx**2
                + cfg.alpha0_avg * rho[1:-1])
    interior_scale = (4.0 * cfg.diff_coeff / dx**2 + abs(cfg.alpha0_avg)) * scale
    left = b.b1 * rho[0] - b.b2 * (rho[1] - rho[0]) / dx - b.b0
    left_scale = (abs(b.b1) + 2.0 * abs(b.b2) / dx) * scale + abs(b.b0)
    right = b.b3 * rho[-1] + b.b4 * (rho[-1] - rho[-2]) / dx
    right_scale = (abs(b.b3) + 2.0 * abs(b.b4) / dx) * scale
    worst = abs(left) / max(left_scale, 1.0)
    worst = max(worst, abs(right) / max(right_scale, 1.0))
    if interior.size:
        worst = max(worst, float(np.abs(interior).max()) / interior_scale)
    return worst


def affine_solution(coeffs: RobinCoefficients):
    """Closed-form (intercept, slope) of the a0 = 0 problem."""
    matrix = np.array([[coeffs.b1, -coeffs.b2],
                       [coeffs.b3, coeffs.b3 + coeffs.b4]])
    try:
        intercept, slope = np.linalg.solve(matrix, [coeffs.b0, 0.0])
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"affine boundary system is singular ({exc})") from exc
    return float(intercept), float(slope)


def gradient(rho: np.ndarray, dx: float) -> np.ndarray:
    """Centered differences inside, one-sided at the walls."""
    out = np.empty_like(rho)
    out[1:-1] = (rho[2:] - rho[:-2]) / (2.0 * dx)
    out[0] = (rho[1] - rho[0]) / dx
    out[-1] = (rho[-1] - rho[-2]) / dx
    return out


def interior_distribution(rho: np.ndarray, material: MaterialModel,
                          vgrid: VelocityGrid, dx: float) -> np.ndarray:
    """First-order interior reconstruction rho - v Kn drho/dx.

    Returns an array of shape (n_nodes, n_velocities, n_bins).
    """
    rho = np.asarray(rho, dtype=float)
    drho = gradient(rho, dx)
    v = vgrid.full_nodes[:, None] * material.kn[None, :]
    return rho[:, None, None] - v[None, :, :] * drho[:, None, None]


def compose_approximation(rho: np.ndarray, left: tuple, right: tuple,
                          material: MaterialModel, vgrid: VelocityGrid,
                          dx: float) -> np.ndarray:
    """Interior reconstruction plus both boundary-layer corrections.

    ``left`` holds the three incoming-data layer solutions (data phi, 1,
    v Kn) and ``right`` the two reflective ones; the right layer lives in
    the flipped coordinate, so its slice is reversed in v.
    """
    f0, f1, f2 = left
    f3, f4 = right
    rho = np.asarray(rho, dtype=float)
    drho = gradient(rho, dx)
    nodes = np.arange(rho.size) * dx
    kn_avg = material.kn_avg

    field = interior_distribution(rho, material, vgrid, dx)
    for i, x in enumerate(nodes):
        zl = x / kn_avg
        layer_l = (f0.recovered_deviation(zl)
                   - rho[0] * f1.recovered_deviation(zl)
                   + drho[0] * f2.recovered_deviation(zl))
        zr = (1.0 - x) / kn_avg
        layer_r = (rho[-1] * f3.recovered_deviation(zr)
                   + drho[-1] * f4.recovered_deviation(zr))
        field[i] += layer_l + layer_r[::-1, :]
    return field


def layer_sum_far_field(coeffs: RobinCoefficients, rho0: float, drho0: float,
                        rho1: float, drho1: float) -> tuple[float, float]:
    """Far-field residuals of the two layer sums (vanish by construction)."""
    left = coeffs.b0 - coeffs.b1 * rho0 + coeffs.b2 * drho0
    right = coeffs.b3 * rho1 + coeffs.b4 * drho1
    return left, right


HalfSpaceSolutionTriple = tuple[HalfSpaceSolution, HalfSpaceSolution, HalfSpaceSolution]
