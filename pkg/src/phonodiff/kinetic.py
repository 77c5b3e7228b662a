"""Steady kinetic reference solver: upwind finite volumes + source iteration.

The transport problem on [0, 1] with incoming data at the left wall and a
(partially) reflecting right wall is iterated to its fixed point: given the
scalar field T, sweep the upwind recurrence over all velocities and bins
(left to right for v > 0, right to left for v < 0 with the reflected trace
as incoming data), then update T as the phase-space average of the swept
field.  A direct sparse solve of the identical discretization is provided
for cross validation on coarse grids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import kernels
from .errors import ConvergenceError
from .material import MaterialModel

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True)
class KineticGrid:
    """Uniform cell-centered grid on [0,1] x [-1,1] (midpoint velocities)."""

    nx: int
    nv: int

    def __post_init__(self):
        if self.nx < 2 or self.nv < 2 or self.nv % 2:
            raise ValueError("need nx >= 2 and even nv >= 2")

    @classmethod
    def from_spacing_exponent(cls, p: int) -> "KineticGrid":
        """dx = dv = 2^-p: 2^p cells on [0,1] and 2^(p+1) on [-1,1]."""
        return cls(nx=2**p, nv=2**(p + 1))

    @property
    def dx(self) -> float:
        return 1.0 / self.nx

    @property
    def dv(self) -> float:
        return 2.0 / self.nv

    @property
    def cell_centers(self) -> np.ndarray:
        return (np.arange(self.nx) + 0.5) * self.dx

    @property
    def v_positive(self) -> np.ndarray:
        """Positive velocity midpoints, ascending (none at zero)."""
        return (np.arange(self.nv // 2) + 0.5) * self.dv

    @property
    def v_full(self) -> np.ndarray:
        v = self.v_positive
        return np.concatenate([-v[::-1], v])

    @property
    def w_positive(self) -> np.ndarray:
        """Half-grid weights of the normalized velocity measure (sum 1/2)."""
        return np.full(self.nv // 2, self.dv / 2.0)


@dataclass(frozen=True)
class KineticField:
    """Converged distribution with its grid and iteration record."""

    values: np.ndarray            # (nx, nv, n_bins), ascending velocity
    grid: KineticGrid
    material: MaterialModel
    iterations: int
    residual: float


def _incoming(phi, grid: KineticGrid, material: MaterialModel) -> np.ndarray:
    shape = (grid.nv // 2, material.n_bins)
    if callable(phi):
        v = grid.v_positive[:, None]
        w = material.omega[None, :]
        out = np.broadcast_to(np.asarray(phi(v, w), dtype=float), shape)
    else:
        out = np.broadcast_to(np.asarray(phi, dtype=float), shape)
    if not np.all(np.isfinite(out)):
        raise ValueError("incoming boundary data must be finite")
    return np.ascontiguousarray(out)


def _eta_arr(eta, material: MaterialModel) -> np.ndarray:
    out = np.broadcast_to(np.asarray(eta, dtype=float),
                          (material.n_bins,)).astype(float)
    if np.any(out < 0) or np.any(out > 1):
        raise ValueError("reflection coefficients must lie in [0, 1]")
    return out


def solve_steady(phi, eta, material: MaterialModel, grid: KineticGrid,
                 tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                 ) -> KineticField:
    """Source iteration to the steady state (sup-norm tolerance on T)."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    phi_arr = _incoming(phi, grid, material)
    eta_arr = _eta_arr(eta, material)
    coef = 1.0 / material.kn
    quad = (coef, grid.v_positive, grid.w_positive, material.measure_weights)
    dx = grid.dx

    T = np.zeros(grid.nx)
    residual = np.inf
    for it in range(1, max_iter + 1):
        up, trace = kernels.sweep_forward(T, phi_arr, *quad, dx)
        down, _ = kernels.sweep_backward(T, eta_arr[None, :] * trace, *quad, dx)
        T_next = up + down
        residual = float(np.abs(T_next - T).max())
        T = T_next
        if not np.isfinite(residual):
            raise ConvergenceError("source iteration diverged", residual, it)
        if residual < tol:
            return KineticField(_extract_field(T, phi_arr, eta_arr, quad, dx),
                                grid, material, it, residual)
    raise ConvergenceError("source iteration did not converge",
                           residual, max_iter)


def _extract_field(T, phi_arr, eta_arr, quad, dx):
    """Full (nx, nv, nb) field for a converged scalar profile."""
    fpos = kernels.sweep_forward_field(T, phi_arr, *quad, dx)
    fneg = kernels.sweep_backward_field(T, eta_arr[None, :] * fpos[-1],
                                        *quad, dx)
    return np.concatenate([fneg[:, ::-1, :], fpos], axis=1)


def temperature(field: KineticField) -> np.ndarray:
    """Scalar (temperature) profile: phase-space average per cell."""
    m = field.material
    g = field.grid
    wv = np.concatenate([g.w_positive[::-1], g.w_positive])
    return np.einsum("xvk,v,k->x", field.values, wv, m.measure_weights)


def flux(field: KineticField) -> np.ndarray:
    """Upwind interface fluxes <v Kn f_upwind> at the interior interfaces.

    The scheme is conservative in this quantity: the nx - 1 values agree to
    the iteration tolerance at convergence.
    """
    m = field.material
    g = field.grid
    nvp = g.nv // 2
    wv = g.w_positive
    wkn = m.kn * m.measure_weights
    up = field.values[:-1, nvp:, :]       # v > 0 upwind: left cell
    down = field.values[1:, :nvp, :]      # v < 0 upwind: right cell
    v_neg = -g.v_positive[::-1]
    j_up = np.einsum("xvk,v,v,k->x", up, g.v_positive, wv, wkn)
    j_down = np.einsum("xvk,v,v,k->x", down, v_neg, wv[::-1], wkn)
    return j_up + j_down


def solve_steady_direct(phi, eta, material: MaterialModel,
                        grid: KineticGrid) -> KineticField:
    """Direct sparse solve of the identical upwind discretization.

    Cross-validation path; the factorization cost limits it to coarse grids.
    """
    phi_arr = _incoming(phi, grid, material)
    eta_arr = _eta_arr(eta, material)
    nx, nvp, nb = grid.nx, grid.nv // 2, material.n_bins
    vpos = grid.v_positive
    wfull = np.concatenate([grid.w_positive[::-1], grid.w_positive])
    wom = material.measure_weights
    coef = 1.0 / material.kn
    dx = grid.dx

    n = nx * 2 * nvp * nb

    def idx(i, j, k):
        # j indexes the ascending full velocity grid
        return (i * 2 * nvp + j) * nb + k

    rows, cols, vals = [], [], []
    rhs = np.zeros(n)
    for i in range(nx):
        for k in range(nb):
            b = coef[k]
            for jp in range(nvp):
                a = vpos[jp] / dx
                r = idx(i, nvp + jp, k)          # velocity +vpos[jp]
                rows.append(r); cols.append(r); vals.append(a + b)
                if i > 0:
                    rows.append(r); cols.append(idx(i - 1, nvp + jp, k))
                    vals.append(-a)
                else:
                    rhs[r] += a * phi_arr[jp, k]
                rn = idx(i, nvp - 1 - jp, k)     # velocity -vpos[jp]
                rows.append(rn); cols.append(rn); vals.append(a + b)
                if i < nx - 1:
                    rows.append(rn); cols.append(idx(i + 1, nvp - 1 - jp, k))
                    vals.append(-a)
                else:
                    rows.append(rn); cols.append(idx(nx - 1, nvp + jp, k))
                    vals.append(-a * eta_arr[k])
                for jj in range(2 * nvp):
                    for kk in range(nb):
                        w = wfull[jj] * wom[kk]
                        rows.append(r); cols.append(idx(i, jj, kk))
                        vals.append(-b * w)
                        rows.append(rn); cols.append(idx(i, jj, kk))
                        vals.append(-b * w)
    matrix = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    f = spla.spsolve(matrix, rhs)
    values = f.reshape(nx, 2 * nvp, nb)
    return KineticField(values, grid, material, 0, 0.0)
