"""Half-space boundary-layer solves with far-field recovery.

The damped problem is solved spectrally: boundary coefficients c(0) are
pinned down by N incoming moment conditions per frequency block plus the
requirement that c(0) lies in the span of the decaying modes.  Solving the
damped problem twice (with the actual incoming data and with the data that
admits the constant solution) recovers the far-field value of the undamped
problem as a ratio of boundary fluxes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .basis import EvenOddBasis, build_basis
from .errors import DegenerateRecoveryError, SolverError
from .layer import LayerSystem, ModeDecomposition, assemble, check_condition, decompose
from .material import MaterialModel, VelocityGrid

BOUNDARY_RESIDUAL_TOL = 1e-10
RECOVERY_DENOMINATOR_TOL = 1e-12


def _half_slice(data, material: MaterialModel, vgrid: VelocityGrid) -> np.ndarray:
    """Coerce incoming data (callable, scalar, or array) to a half slice."""
    shape = (vgrid.n_half, material.n_bins)
    if callable(data):
        v = vgrid.positive_nodes[:, None]
        w = material.omega[None, :]
        out = np.broadcast_to(np.asarray(data(v, w), dtype=float), shape)
    else:
        out = np.broadcast_to(np.asarray(data, dtype=float), shape)
    if not np.all(np.isfinite(out)):
        raise ValueError("incoming boundary data must be finite")
    return np.ascontiguousarray(out)


@dataclass(frozen=True)
class DirichletBC:
    """Incoming data psi(v, omega) prescribed for v > 0 at the wall."""

    psi: Union[np.ndarray, float, Callable]

    def data(self, material, vgrid):
        return _half_slice(self.psi, material, vgrid)

    def reference_data(self, material, vgrid):
        """Data whose undamped solution is the constant 1."""
        return np.ones((vgrid.n_half, material.n_bins))

    def eta_per_bin(self, material):
        return None


@dataclass(frozen=True)
class ReflectiveBC:
    """f(0, v) = eta(omega) f(0, -v) + psi(v, omega) for v > 0."""

    eta: Union[np.ndarray, float]
    psi: Union[np.ndarray, float, Callable]

    def data(self, material, vgrid):
        return _half_slice(self.psi, material, vgrid)

    def reference_data(self, material, vgrid):
        eta = self.eta_per_bin(material)
        return np.broadcast_to(1.0 - eta, (vgrid.n_half, material.n_bins)).copy()

    def eta_per_bin(self, material) -> np.ndarray:
        eta = np.broadcast_to(np.asarray(self.eta, dtype=float),
                              (material.n_bins,)).astype(float)
        if np.any(eta < 0) or np.any(eta > 1):
            raise ValueError("reflection coefficients must lie in [0, 1]")
        return eta


HalfSpaceBC = Union[DirichletBC, ReflectiveBC]


def incoming_rows(basis: EvenOddBasis, eta: np.ndarray | None):
    """Moment-condition rows: one per (bin, even polynomial).

    Row (k, j) tests the boundary trace against v * phi^E_{j,k} over v > 0.
    For a reflective wall the odd/even coefficient groups pick up the
    (1 + eta_k) / (1 - eta_k) factors of the reflected trace.
    """
    m, vg = basis.material, basis.vgrid
    nb, n_half = m.n_bins, vg.n_half
    pos = basis.positive_rows
    E_pos = basis.eval_matrix[pos, :]
    w_half = np.outer(vg.positive_weights, m.measure_weights).ravel()
    v_half = np.repeat(vg.positive_nodes, nb)

    rows = np.empty((basis.n_even_total, basis.n_flat))
    test_weights = np.empty((basis.n_even_total, n_half * nb))
    r = 0
    for k in range(nb):
        for j in range(basis.n_even):
            col = basis.flat_index("even", j, k)
            test = w_half * v_half * E_pos[:, col]
            row = test @ E_pos
            if eta is not None:
                n_odd = basis.n_odd_total
                row[:n_odd] *= 1.0 + eta[k]
                row[n_odd:] *= 1.0 - eta[k]
            rows[r] = row
            test_weights[r] = test
            r += 1
    return rows, test_weights


def solve_damped(system: LayerSystem, modes: ModeDecomposition,
                 bc: HalfSpaceBC, data: np.ndarray | None = None) -> np.ndarray:
    """Boundary coefficients c(0) of the damped problem for the given data."""
    basis = system.basis
    m, vg = basis.material, basis.vgrid
    psi = bc.data(m, vg) if data is None else np.asarray(data, dtype=float)
    eta = bc.eta_per_bin(m)

    rows, tests = incoming_rows(basis, eta)
    matrix = np.vstack([rows, modes.constraint_rows])
    rhs = np.concatenate([tests @ psi.ravel(),
                          np.zeros(modes.constraint_rows.shape[0])])
    if matrix.shape[0] != matrix.shape[1]:
        raise SolverError(f"constraint system is not square: {matrix.shape}")
    check_condition(matrix, "half-space boundary system")
    try:
        c0 = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"boundary constraint system is singular ({exc}); "
                          "n_poly may be too small or eta degenerate") from exc
    scale = max(np.abs(rhs).max(), np.abs(matrix).max() * max(np.abs(c0).max(), 1.0))
    residual = float(np.abs(matrix @ c0 - rhs).max())
    if residual > BOUNDARY_RESIDUAL_TOL * max(scale, 1.0):
        raise SolverError("boundary constraint solve did not reach tolerance",
                          residual)
    return c0


def flux_functional(basis: EvenOddBasis) -> np.ndarray:
    """Vector representing c -> <v, expansion(c)>."""
    return (basis.w_points * basis.v_points) @ basis.eval_matrix


def recover_theta(c0_data: np.ndarray, c0_reference: np.ndarray,
                  basis: EvenOddBasis) -> float:
    """Far-field value as the ratio of boundary fluxes of the two solves."""
    flux = flux_functional(basis)
    numerator = float(flux @ c0_data)
    denominator = float(flux @ c0_reference)
    floor = RECOVERY_DENOMINATOR_TOL * max(
        1.0, float(np.linalg.norm(flux) * np.linalg.norm(c0_reference)))
    if abs(denominator) < floor:
        raise DegenerateRecoveryError(
            "reference boundary flux vanished; the far field cannot be "
            "recovered (does the wall reflect everything?)")
    return numerator / denominator


@dataclass(frozen=True)
class HalfSpaceSolution:
    """Damped boundary coefficients, mode structure, and recovered far field."""

    basis: EvenOddBasis
    bc: HalfSpaceBC
    alpha_d: float
    c0: np.ndarray               # damped solve with the actual data
    c0_reference: np.ndarray     # damped solve with the constant-compatible data
    theta_inf: float
    modes: ModeDecomposition

    def evaluate(self, z: float) -> np.ndarray:
        """Damped solution slice at layer depth z (z = 0 reproduces c0)."""
        return self.basis.to_slice(self.modes.propagate(self.c0, z))

    def evaluate_reference(self, z: float) -> np.ndarray:
        return self.basis.to_slice(self.modes.propagate(self.c0_reference, z))

    def recovered(self, z: float) -> np.ndarray:
        """Undamped layer solution f(z) = f_damped(z) - theta (g0(z) - 1)."""
        return (self.evaluate(z)
                - self.theta_inf * (self.evaluate_reference(z) - 1.0))

    def recovered_deviation(self, z: float) -> np.ndarray:
        """Recovered solution minus its far field (decays to zero)."""
        return self.recovered(z) - self.theta_inf


class LayerWorkspace:
    """Shared basis / system / mode decomposition for repeated layer solves.

    The damped system does not depend on the boundary data, so one
    decomposition serves every incoming-data and reflective problem on the
    same material, grid, and spectral order.
    """

    def __init__(self, material: MaterialModel, vgrid: VelocityGrid,
                 n_poly: int, alpha_d: float = 0.01):
        self.material = material
        self.vgrid = vgrid
        self.alpha_d = float(alpha_d)
        self.basis = build_basis(material, vgrid, n_poly)
        self.system = assemble(self.basis, self.alpha_d)
        self.modes = decompose(self.system)

    def solve(self, bc: HalfSpaceBC) -> HalfSpaceSolution:
        c0 = solve_damped(self.system, self.modes, bc)
        reference = bc.reference_data(self.material, self.vgrid)
        c0_ref = solve_damped(self.system, self.modes, bc, data=reference)
        theta = recover_theta(c0, c0_ref, self.basis)
        return HalfSpaceSolution(self.basis, bc, self.alpha_d,
                                 c0, c0_ref, theta, self.modes)


def solve_halfspace(bc: HalfSpaceBC, material: MaterialModel,
                    vgrid: VelocityGrid, n_poly: int,
                    alpha_d: float = 0.01) -> HalfSpaceSolution:
    """One-shot half-space solve (builds a workspace internally)."""
    return LayerWorkspace(material, vgrid, n_poly, alpha_d).solve(bc)
