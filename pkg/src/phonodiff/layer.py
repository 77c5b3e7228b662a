"""Damped layer operator, Galerkin system assembly, and mode decomposition.

The damped collision operator acting on a phase-space function g is

    L_d g = (<g> - g) - a (v x0) <v x0, g> - a (v x1) <v x1, g>,

where x0 = 1 spans the collision null space, x1 is the pseudo-inverse image
of v under (<.> - .), and a is a small damping parameter.  The two rank-one
corrections remove the constant and linear-growth solution families of the
undamped half-space equation, splitting their double-zero eigenvalue into a
+/- sqrt(a/3) pair so that exactly N decaying modes remain per frequency
block (plus N+1 non-decaying ones, counting the structural infinite mode of
the singular transport matrix).

The Galerkin system A c'(z) = B c(z) uses rows and columns in the same flat
(odd, even) layout, which makes A symmetric with zero odd-odd / even-even
blocks and B block diagonal (parity-mixed brackets vanish identically).
"""

from __future__ import annotations

from dataclasses import dataclass
import warnings

import numpy as np
import scipy.linalg as sla

from .basis import EvenOddBasis
from .errors import ModeCountError, NumericalStructureError, SolverError
from .material import MaterialModel, VelocityGrid

IMAG_TOL = 1e-8           # relative tolerance for discarding imaginary parts
ZERO_MODE_TOL = 1e-12     # lambda >= -tol counts as non-decaying
CONDITION_WARN = 1e12


def _point_measure(material: MaterialModel, vgrid: VelocityGrid):
    w = np.outer(vgrid.full_weights, material.measure_weights).ravel()
    v = np.repeat(vgrid.full_nodes, material.n_bins)
    return w, v


def damped_operator_matrix(material: MaterialModel, vgrid: VelocityGrid,
                           alpha_d: float) -> np.ndarray:
    """Dense matrix of L_d on the flattened (velocity, bin) point grid.

    Uses the pseudo-inverse form for the second damping direction; for the
    rank-one collision operator this reproduces x1 = -v exactly.
    """
    if alpha_d < 0:
        raise ValueError("damping parameter must be nonnegative")
    w, v = _point_measure(material, vgrid)
    n = w.size
    proj = np.tile(w, (n, 1))            # rows of <.>
    lmi = proj - np.eye(n)
    if alpha_d == 0.0:
        return lmi
    x1 = np.linalg.lstsq(lmi, v, rcond=None)[0]
    d0 = v  # v * x0 with x0 = 1
    d1 = v * x1
    return (lmi - alpha_d * np.outer(d0, w * d0)
                - alpha_d * np.outer(d1, w * d1))


def apply_damped(g: np.ndarray, material: MaterialModel, vgrid: VelocityGrid,
                 alpha_d: float) -> np.ndarray:
    """Apply the damped operator to a PhaseSlice."""
    g = np.asarray(g, dtype=float)
    nv, nb = 2 * vgrid.n_half, material.n_bins
    if g.shape != (nv, nb):
        raise ValueError(f"slice shape {g.shape} does not match grid ({nv}, {nb})")
    op = damped_operator_matrix(material, vgrid, alpha_d)
    return (op @ g.ravel()).reshape(nv, nb)


@dataclass(frozen=True)
class LayerSystem:
    """Galerkin matrices of the damped layer equation A c' = B c."""

    basis: EvenOddBasis
    alpha_d: float
    a_matrix: np.ndarray
    b_matrix: np.ndarray

    @property
    def n_flat(self) -> int:
        return self.basis.n_flat

    def odd_block(self, m: np.ndarray) -> np.ndarray:
        n = self.basis.n_odd_total
        return m[:n, :n]

    def even_block(self, m: np.ndarray) -> np.ndarray:
        n = self.basis.n_odd_total
        return m[n:, n:]


def assemble(basis: EvenOddBasis, alpha_d: float) -> LayerSystem:
    """Assemble the transport matrix A and damped collision matrix B.

    A_ab = <v phi_a phi_b>; B_ab = <phi_a (r L_d phi_b)> with the per-bin
    factor r = <Kn>/Kn attached to the test function's frequency.
    """
    m, vg = basis.material, basis.vgrid
    w, v = basis.w_points, basis.v_points
    E = basis.eval_matrix
    a_matrix = E.T @ ((w * v)[:, None] * E)

    ratio = np.tile(m.kn_avg / m.kn, 2 * vg.n_half)  # per point, test side
    op = damped_operator_matrix(m, vg, alpha_d)
    b_matrix = E.T @ ((w * ratio)[:, None] * (op @ E))

    smallest = np.abs(vg.positive_nodes).min()
    if smallest < 1e-14:
        raise SolverError("velocity grid touches v = 0; transport matrix "
                          "would be singular beyond its structural rank")
    return LayerSystem(basis, alpha_d, a_matrix, b_matrix)


def pencil_eigenvalues(system: LayerSystem) -> np.ndarray:
    """Generalized eigenvalues of (B, A); infinite modes reported as +inf.

    Low-level helper (no structural checks); `decompose` adds the realness
    and mode-count guarantees.
    """
    pair = sla.eig(system.b_matrix, system.a_matrix,
                   homogeneous_eigvals=True, right=False, left=False)
    lam, _ = _classify(pair[0], pair[1])
    return lam


def _classify(aa: np.ndarray, bb: np.ndarray):
    finite = np.abs(bb) > 1e-8 * np.abs(bb).max()
    lam = np.full(aa.shape, np.inf, dtype=complex)
    lam[finite] = aa[finite] / bb[finite]
    return lam, finite


@dataclass(frozen=True)
class ModeDecomposition:
    """Mode structure of the damped layer pencil.

    ``eigenvalues`` holds real decay/growth rates (+inf for the structural
    algebraic modes); ``constraint_rows`` spans the annihilator of the
    decaying subspace, providing the non-decaying projection conditions.
    """

    eigenvalues: np.ndarray          # (n_flat,), real, +inf for algebraic modes
    eigenvectors: np.ndarray         # right eigenvectors, columns
    nondecaying_set: np.ndarray      # indices into eigenvalues
    constraint_rows: np.ndarray      # ((N+1)*bins, n_flat)
    projection_rows: np.ndarray      # left-eigenvector rows u^T A (and u^T B)
    decaying_basis: np.ndarray       # orthonormal basis of the decaying subspace
    decaying_generator: np.ndarray   # small matrix with the decaying spectrum

    @property
    def n_decaying(self) -> int:
        return self.decaying_basis.shape[1]

    def propagate(self, c0: np.ndarray, z: float) -> np.ndarray:
        """Evolve boundary coefficients a distance z into the layer."""
        if z < 0:
            raise ValueError("layer coordinate must be nonnegative")
        y0 = self.decaying_basis.T @ c0
        yz = sla.expm(z * self.decaying_generator) @ y0
        return self.decaying_basis @ yz


def decompose(system: LayerSystem) -> ModeDecomposition:
    """Solve the generalized eigenproblem and classify the modes.

    Raises NumericalStructureError if the finite spectrum is not real to
    tolerance and ModeCountError if the non-decaying count differs from the
    odd-basis dimension (N+1 per frequency block).
    """
    A, B = system.a_matrix, system.b_matrix
    basis = system.basis
    pair, vl, vr = sla.eig(B, A, homogeneous_eigvals=True,
                           left=True, right=True)
    aa, bb = pair
    lam_c, finite = _classify(aa, bb)

    finite_vals = lam_c[finite]
    scale = np.abs(finite_vals).max() if finite_vals.size else 1.0
    bad = np.abs(finite_vals.imag) > IMAG_TOL * scale
    if np.any(bad):
        off = finite_vals[bad][0]
        raise NumericalStructureError(
            f"generalized spectrum has a non-real pair {off:.6g}; "
            "the real-ordering assumption failed")

    lam = np.where(finite, lam_c.real, np.inf)
    nondecaying = np.flatnonzero(~finite | (lam >= -ZERO_MODE_TOL * max(scale, 1.0)))
    expected = basis.n_odd_total
    if nondecaying.size != expected:
        raise ModeCountError(
            f"{nondecaying.size} non-decaying modes, expected {expected} "
            f"(= odd basis dimension); spectrum: {np.sort(lam)}")
    n_dec = basis.n_flat - expected

    def select(alpha, beta):
        with np.errstate(divide="ignore", invalid="ignore"):
            ok = np.abs(beta) > 1e-8 * np.abs(bb).max()
            vals = np.where(ok, alpha / np.where(beta == 0, 1.0, beta), np.inf)
        return ok & (vals.real < -ZERO_MODE_TOL * max(scale, 1.0))

    SS, TT, _, _, _, Z = sla.ordqz(B, A, sort=select, output="real")
    z1 = Z[:, :n_dec]
    z2 = Z[:, n_dec:]
    generator = sla.solve(TT[:n_dec, :n_dec], SS[:n_dec, :n_dec])

    # left-eigenvector rows for the finite non-decaying modes (u^T A c = 0
    # along any decaying solution) plus the algebraic constraints u^T B c = 0
    # carried by the infinite modes.
    rows = []
    for k in nondecaying:
        u = vl[:, k].real
        if finite[k]:
            rows.append(u @ A)
        else:
            rows.append(u @ B)
    projection_rows = np.array(rows)

    return ModeDecomposition(
        eigenvalues=lam,
        eigenvectors=vr.real,
        nondecaying_set=nondecaying,
        constraint_rows=np.ascontiguousarray(z2.T),
        projection_rows=projection_rows,
        decaying_basis=z1,
        decaying_generator=generator,
    )


def check_condition(matrix: np.ndarray, context: str) -> None:
    cond = np.linalg.cond(matrix)
    if cond > CONDITION_WARN:
        warnings.warn(f"{context}: condition number {cond:.3e} exceeds "
                      f"{CONDITION_WARN:.0e}", RuntimeWarning, stacklevel=2)
