"""Even-odd weighted Legendre basis for the boundary-layer solver.

Each frequency bin carries its own family of weighted Legendre polynomials
in |v|, extended evenly and oddly to [-1, 1].  The odd family has one more
member than the even one, which builds the v = 0 jump of a half-space
solution into the approximation space.  With the per-bin weight factor
sqrt(2 / w_k) the families are orthonormal in the sense

    (1/2) <phi_a phi_b> = delta_ab.

Flat coefficient layout: all odd functions first (bin-major), then all even
functions, matching the (c^O, c^E) ordering of the ODE system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import QuadratureError
from .material import MaterialModel, VelocityGrid

ORTHONORMALITY_TOL = 1e-12


def legendre_unit(values: np.ndarray, count: int) -> np.ndarray:
    """Evaluation matrix of the orthonormal Legendre family on [0, 1].

    Column i holds sqrt(2i+1) * P_i(2v - 1); int_0^1 l_i l_j dv = delta_ij.
    """
    vander = np.polynomial.legendre.legvander(2.0 * values - 1.0, count - 1)
    return vander * np.sqrt(2.0 * np.arange(count) + 1.0)


@dataclass(frozen=True)
class EvenOddBasis:
    """Per-bin even/odd weighted Legendre families on the velocity grid."""

    material: MaterialModel
    vgrid: VelocityGrid
    n_poly: int

    def __post_init__(self):
        if self.n_poly < 1:
            raise ValueError("n_poly must be at least 1")
        m, vg = self.material, self.vgrid
        nb = m.n_bins
        n_odd, n_even = self.n_poly + 1, self.n_poly
        weight = np.sqrt(2.0 / m.measure_weights)

        # point grid: row-major (velocity, bin) flattening of a PhaseSlice
        vfull = vg.full_nodes
        n_pts = vfull.size * nb
        leg = legendre_unit(np.abs(vfull), n_odd)  # (2J, n_odd)
        sign = np.sign(vfull)

        n_flat = nb * (n_odd + n_even)
        eval_matrix = np.zeros((n_pts, n_flat))
        for k in range(nb):
            rows = slice(None)  # all velocities, bin k -> point index j*nb + k
            pts = np.arange(vfull.size) * nb + k
            for i in range(n_odd):
                eval_matrix[pts, k * n_odd + i] = weight[k] * sign * leg[rows, i]
            for i in range(n_even):
                col = nb * n_odd + k * n_even + i
                eval_matrix[pts, col] = weight[k] * leg[rows, i]

        w_points = np.outer(vg.full_weights, m.measure_weights).ravel()
        v_points = np.repeat(vfull, nb)

        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "eval_matrix", eval_matrix)
        object.__setattr__(self, "w_points", w_points)
        object.__setattr__(self, "v_points", v_points)

        gram = 0.5 * eval_matrix.T @ (w_points[:, None] * eval_matrix)
        defect = float(np.abs(gram - np.eye(n_flat)).max())
        object.__setattr__(self, "gram_defect", defect)
        if defect > ORTHONORMALITY_TOL:
            raise QuadratureError(
                "velocity quadrature too coarse to certify basis orthonormality; "
                "increase quadrature nodes or reduce n_poly", defect)

    # -- layout ------------------------------------------------------------
    @property
    def n_bins(self) -> int:
        return self.material.n_bins

    @property
    def n_odd(self) -> int:
        """Odd functions per bin."""
        return self.n_poly + 1

    @property
    def n_even(self) -> int:
        return self.n_poly

    @property
    def n_odd_total(self) -> int:
        return self.n_bins * self.n_odd

    @property
    def n_even_total(self) -> int:
        return self.n_bins * self.n_even

    @property
    def n_flat(self) -> int:
        return self.n_odd_total + self.n_even_total

    def flat_index(self, parity: str, poly: int, bin_index: int) -> int:
        """Flat coefficient index of (parity, polynomial, frequency bin)."""
        if not 0 <= bin_index < self.n_bins:
            raise IndexError("bin index out of range")
        if parity == "odd":
            if not 0 <= poly < self.n_odd:
                raise IndexError("odd polynomial index out of range")
            return bin_index * self.n_odd + poly
        if parity == "even":
            if not 0 <= poly < self.n_even:
                raise IndexError("even polynomial index out of range")
            return self.n_odd_total + bin_index * self.n_even + poly
        raise ValueError("parity must be 'odd' or 'even'")

    # -- evaluation ---------------------------------------------------------
    def to_slice(self, coeffs: np.ndarray) -> np.ndarray:
        """Expand flat coefficients into a PhaseSlice (n_velocities, n_bins)."""
        coeffs = np.asarray(coeffs, dtype=float)
        vals = self.eval_matrix @ coeffs
        return vals.reshape(self.vgrid.full_nodes.size, self.n_bins)

    @property
    def positive_rows(self) -> np.ndarray:
        """Point indices of the v > 0 half of the grid."""
        nv, nb = self.vgrid.full_nodes.size, self.n_bins
        return (np.arange(nv // 2, nv)[:, None] * nb
                + np.arange(nb)[None, :]).ravel()

    def gram(self) -> np.ndarray:
        """(1/2) <phi_a phi_b> matrix (identity up to quadrature error)."""
        E = self.eval_matrix
        return 0.5 * E.T @ (self.w_points[:, None] * E)


def build_basis(material: MaterialModel, vgrid: VelocityGrid,
                n_poly: int) -> EvenOddBasis:
    return EvenOddBasis(material, vgrid, n_poly)
