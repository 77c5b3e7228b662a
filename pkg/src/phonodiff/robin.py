"""Robin boundary coefficients from the five auxiliary layer problems.

Left wall (incoming data phi): the layer data splits into phi, a constant,
and a function linear in v Kn; the far fields of the three corresponding
half-space problems give (b0, b1, b2) and the boundary condition

    b1 rho(0) - b2 rho'(0) = b0.

Right wall (reflection eta): two reflective layer problems with data
-(1 - eta) and -(1 + eta) v Kn give (b3, b4) and

    b3 rho(1) + b4 rho'(1) = 0.

Note the sign conventions: the right-wall layer runs in the flipped
coordinate z = (1 - x)/<Kn> with v negated, which is where the minus sign
on b2 and the plus sign on b4 originate.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Callable, Union

import numpy as np

from .halfspace import DirichletBC, LayerWorkspace, ReflectiveBC
from .material import MaterialModel, VelocityGrid


@dataclass(frozen=True)
class RobinCoefficients:
    """Far-field limits populating the limit equation's boundary conditions."""

    b0: float
    b1: float
    b2: float
    b3: float
    b4: float

    def __post_init__(self):
        if self.b1 <= 0:
            raise ValueError(f"b1 must be positive (got {self.b1})")
        if self.b1 == 0 and self.b2 == 0:
            raise ValueError("left pair (b1, b2) must not vanish")
        if self.b3 == 0 and self.b4 == 0:
            raise ValueError("right pair (b3, b4) must not vanish")

    def as_dict(self) -> dict:
        return asdict(self)


def _kn_linear(material: MaterialModel, scale: Union[np.ndarray, float] = 1.0):
    """Incoming data v * Kn(omega) * scale(omega)."""
    kn = material.kn

    def data(v, omega):
        return v * kn[None, :] * np.broadcast_to(scale, kn.shape)[None, :]

    return data


def compute_left(phi, material: MaterialModel, vgrid: VelocityGrid,
                 n_poly: int, alpha_d: float = 0.01,
                 workspace: LayerWorkspace | None = None):
    """(b0, b1, b2): far fields for incoming data phi, 1, and v Kn."""
    ws = workspace or LayerWorkspace(material, vgrid, n_poly, alpha_d)
    b0 = ws.solve(DirichletBC(phi)).theta_inf
    b1 = ws.solve(DirichletBC(1.0)).theta_inf
    b2 = ws.solve(DirichletBC(_kn_linear(material))).theta_inf
    return b0, b1, b2


def compute_right(eta, material: MaterialModel, vgrid: VelocityGrid,
                  n_poly: int, alpha_d: float = 0.01,
                  workspace: LayerWorkspace | None = None):
    """(b3, b4): far fields of the reflective problems.

    Data -(1 - eta) for b3 and -(1 + eta) v Kn for b4; eta identically one
    (total reflection) leaves only a Neumann condition and is rejected by
    the recovery step.
    """
    ws = workspace or LayerWorkspace(material, vgrid, n_poly, alpha_d)
    eta_arr = np.broadcast_to(np.asarray(eta, dtype=float),
                              (material.n_bins,)).astype(float)
    b3 = ws.solve(ReflectiveBC(eta_arr, -(1.0 - eta_arr))).theta_inf
    b4 = ws.solve(ReflectiveBC(eta_arr,
                               _kn_linear(material, -(1.0 + eta_arr)))).theta_inf
    return b3, b4


def robin_coefficients(phi, eta, material: MaterialModel, vgrid: VelocityGrid,
                       n_poly: int, alpha_d: float = 0.01,
                       workspace: LayerWorkspace | None = None) -> RobinCoefficients:
    """All five coefficients, sharing one mode decomposition."""
    ws = workspace or LayerWorkspace(material, vgrid, n_poly, alpha_d)
    b0, b1, b2 = compute_left(phi, material, vgrid, n_poly, alpha_d, ws)
    b3, b4 = compute_right(eta, material, vgrid, n_poly, alpha_d, ws)
    return RobinCoefficients(b0, b1, b2, b3, b4)


def layer_solutions(phi, eta, material: MaterialModel, vgrid: VelocityGrid,
                    n_poly: int, alpha_d: float = 0.01):
    """Full half-space solutions (for profile reconstruction and plots).

    Returns ((f0, f1, f2), (f3, f4)) so callers can compose boundary-layer
    profiles; `robin_coefficients` is the cheaper path when only the far
    fields are needed.
    """
    ws = LayerWorkspace(material, vgrid, n_poly, alpha_d)
    eta_arr = np.broadcast_to(np.asarray(eta, dtype=float),
                              (material.n_bins,)).astype(float)
    left = (ws.solve(DirichletBC(phi)),
            ws.solve(DirichletBC(1.0)),
            ws.solve(DirichletBC(_kn_linear(material))))
    right = (ws.solve(ReflectiveBC(eta_arr, -(1.0 - eta_arr))),
             ws.solve(ReflectiveBC(eta_arr, _kn_linear(material, -(1.0 + eta_arr)))))
    return left, right
