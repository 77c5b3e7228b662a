"""Discrete (v, omega) phase space: material model, brackets, collision.

The velocity variable lives on [-1, 1] and the frequency variable on a finite
set of bins.  All averages use the normalized measure

    <g> = sum_k w_k sum_j u_j g(v_j, omega_k),

where the bin weights w_k are proportional to (C_omega / tau) * d_omega and
sum to one, and the velocity weights u_j represent dv/2 on [-1, 1] (so the
full-grid weights also sum to one and <1> = 1).  The collision operator is
the rank-one projection g -> <g>.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import InvalidMaterialError

DEFAULT_QUAD_NODES = 32


def _frozen(a) -> np.ndarray:
    out = np.ascontiguousarray(np.asarray(a, dtype=float))
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class VelocityGrid:
    """Symmetric velocity quadrature on [-1, 1] avoiding v = 0.

    ``positive_weights`` integrate the *normalized* measure on (0, 1], i.e.
    they sum to 1/2; mirroring them to the negative half gives full-grid
    weights summing to one.
    """

    positive_nodes: np.ndarray
    positive_weights: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.positive_nodes, dtype=float)
        w = np.asarray(self.positive_weights, dtype=float)
        if v.ndim != 1 or v.shape != w.shape or v.size == 0:
            raise ValueError("nodes and weights must be matching 1-d arrays")
        if np.any(v <= 0) or np.any(v > 1) or np.any(np.diff(v) <= 0):
            raise ValueError("nodes must be strictly increasing in (0, 1]")
        object.__setattr__(self, "positive_nodes", _frozen(v))
        object.__setattr__(self, "positive_weights", _frozen(w))

    @classmethod
    def gauss(cls, n_half: int = DEFAULT_QUAD_NODES) -> "VelocityGrid":
        """Gauss-Legendre nodes on (0, 1), mirrored; exact to degree 2n-1."""
        x, w = np.polynomial.legendre.leggauss(n_half)
        nodes = 0.5 * (x + 1.0)
        weights = 0.25 * w  # 0.5*w integrates dv on [0,1]; halve for dv/2
        return cls(nodes, weights)

    @property
    def n_half(self) -> int:
        return self.positive_nodes.size

    @property
    def full_nodes(self) -> np.ndarray:
        """Ascending grid [-v_J, ..., -v_1, v_1, ..., v_J]."""
        v = self.positive_nodes
        return np.concatenate([-v[::-1], v])

    @property
    def full_weights(self) -> np.ndarray:
        w = self.positive_weights
        return np.concatenate([w[::-1], w])


@dataclass(frozen=True)
class MaterialModel:
    """Per-bin tables and derived quantities for one material.

    ``measure_weights`` are the normalized frequency weights (proportional to
    (C_omega / tau) * delta_omega); ``kn`` holds the per-bin Knudsen numbers
    |v_g| tau / L and ``kn_avg`` their measure average.
    """

    omega: np.ndarray
    delta_omega: np.ndarray
    c_omega: np.ndarray
    tau: np.ndarray
    vg: np.ndarray
    length: float
    alpha0: np.ndarray
    measure_weights: np.ndarray = field(init=False)
    kn: np.ndarray = field(init=False)
    kn_avg: float = field(init=False)

    def __post_init__(self):
        omega = np.atleast_1d(np.asarray(self.omega, dtype=float))
        if omega.size == 0:
            raise InvalidMaterialError("material needs at least one frequency bin")
        n = omega.size

        def table(name, value, positive=True):
            arr = np.asarray(value, dtype=float)
            if arr.ndim == 0:
                arr = np.full(n, float(arr))
            if arr.shape != (n,):
                raise InvalidMaterialError(
                    f"{name} must have one entry per bin (expected {n}, got {arr.shape})")
            if positive and np.any(arr <= 0):
                raise InvalidMaterialError(f"{name} entries must be strictly positive")
            if not np.all(np.isfinite(arr)):
                raise InvalidMaterialError(f"{name} entries must be finite")
            return arr

        delta = table("delta_omega", self.delta_omega)
        c_om = table("c_omega", self.c_omega)
        tau = table("tau", self.tau)
        vg = table("vg", self.vg)
        alpha0 = table("alpha0", self.alpha0, positive=False)
        if np.any(alpha0 < 0):
            raise InvalidMaterialError("alpha0 entries must be nonnegative")
        if not (self.length > 0 and math.isfinite(self.length)):
            raise InvalidMaterialError("domain length must be positive")

        raw = (c_om / tau) * delta
        weights = raw / raw.sum()
        kn = vg * tau / self.length

        object.__setattr__(self, "omega", _frozen(omega))
        object.__setattr__(self, "delta_omega", _frozen(delta))
        object.__setattr__(self, "c_omega", _frozen(c_om))
        object.__setattr__(self, "tau", _frozen(tau))
        object.__setattr__(self, "vg", _frozen(vg))
        object.__setattr__(self, "alpha0", _frozen(alpha0))
        object.__setattr__(self, "measure_weights", _frozen(weights))
        object.__setattr__(self, "kn", _frozen(kn))
        object.__setattr__(self, "kn_avg", float(weights @ kn))

    @property
    def n_bins(self) -> int:
        return self.omega.size

    @property
    def kn_sq_avg(self) -> float:
        """Measure average of Kn^2."""
        return float(self.measure_weights @ self.kn**2)

    @property
    def alpha0_avg(self) -> float:
        return float(self.measure_weights @ self.alpha0)

    @property
    def diffusion_coefficient(self) -> float:
        """(1/3) <Kn^2> / <Kn>^2, the coefficient of the limiting equation."""
        return self.kn_sq_avg / (3.0 * self.kn_avg**2)

    def with_kn_avg(self, kn_avg: float) -> "MaterialModel":
        """Same tables with the domain length rescaled to hit a target <Kn>."""
        if kn_avg <= 0:
            raise InvalidMaterialError("target <Kn> must be positive")
        scale = float(self.measure_weights @ (self.vg * self.tau))
        return MaterialModel(self.omega, self.delta_omega, self.c_omega,
                             self.tau, self.vg, scale / kn_avg, self.alpha0)


def build_material(omega, tau, vg, c_omega=1.0, length=1.0,
                   delta_omega=1.0, alpha0=0.0) -> MaterialModel:
    """Build a MaterialModel from per-bin tables (scalars broadcast)."""
    return MaterialModel(omega, delta_omega, c_omega, tau, vg, length, alpha0)


def single_bin(kn: float | None = None, tau: float = 1.0, vg: float = 1.0,
               length: float | None = None) -> MaterialModel:
    """One-frequency material; give either kn or an explicit length."""
    if (kn is None) == (length is None):
        raise InvalidMaterialError("specify exactly one of kn or length")
    if length is None:
        length = vg * tau / kn
    return build_material([1.0], tau, vg, length=length)


# Six-bin material with tau = 1/(10 w), |v_g| = 10 w, C_w = (10w)^2 e^{10w}/(e^{10w}-1)^2.
# The three binnings differ in how "six bins with spacing 0.4 on [0.4, 2.4]"
# is read; "grid" (six grid points 0.4:0.4:2.4) is the default.
_MULTI_BINNINGS = {
    "grid": (np.linspace(0.4, 2.4, 6), 0.4),
    "centers": (np.arange(6) * 0.4 + 0.6, 0.4),
    "span": (0.4 + (np.arange(6) + 0.5) / 3.0, 1.0 / 3.0),
}


def heat_capacity_density(omega) -> np.ndarray:
    """C_w = (10 w)^2 e^{10w} / (e^{10w} - 1)^2, overflow-safe."""
    x = 10.0 * np.asarray(omega, dtype=float)
    return (x / (2.0 * np.sinh(x / 2.0))) ** 2


def reflection_tanh(omega) -> np.ndarray:
    """Frequency-dependent reflection 1/2 + [tanh(10(w-1.5)) - tanh(2(w-1))]/4."""
    w = np.asarray(omega, dtype=float)
    return 0.5 + (np.tanh(10.0 * (w - 1.5)) - np.tanh(2.0 * (w - 1.0))) / 4.0


def multi_bin(length: float = 1.0, binning: str = "grid") -> MaterialModel:
    """Six-bin test material (uniform Kn: |v_g| tau = 1, so Kn = 1/L)."""
    try:
        omega, domega = _MULTI_BINNINGS[binning]
    except KeyError:
        raise InvalidMaterialError(
            f"unknown binning {binning!r}; choose from {sorted(_MULTI_BINNINGS)}")
    return build_material(omega, tau=1.0 / (10.0 * omega), vg=10.0 * omega,
                          c_omega=heat_capacity_density(omega),
                          length=length, delta_omega=domega)


def material_from_spec(spec: dict) -> MaterialModel:
    """Build a material from a JSON-compatible dict.

    Two forms are accepted::

        {"preset": "single-bin", "length": 16}
        {"preset": "multi-bin", "length": 16, "binning": "grid"}
        {"omega": [...], "tau": [...], "vg": [...], "c_omega": [...],
         "delta_omega": 0.4, "length": 16, "alpha0": 0}

    Tables are the canonical form; presets expand to tables.
    """
    if not isinstance(spec, dict):
        raise InvalidMaterialError("material spec must be a mapping")
    spec = dict(spec)
    preset = spec.pop("preset", None)
    if preset is not None:
        length = float(spec.pop("length", 1.0))
        if preset == "single-bin":
            m = single_bin(length=length, tau=float(spec.pop("tau", 1.0)),
                           vg=float(spec.pop("vg", 1.0)))
        elif preset == "multi-bin":
            m = multi_bin(length=length, binning=spec.pop("binning", "grid"))
        else:
            raise InvalidMaterialError(f"unknown material preset {preset!r}")
        if spec:
            raise InvalidMaterialError(f"unexpected material keys {sorted(spec)}")
        return m
    try:
        omega = spec.pop("omega")
        tau = spec.pop("tau")
        vg = spec.pop("vg")
    except KeyError as missing:
        raise InvalidMaterialError(f"material spec missing key {missing}")
    m = build_material(omega, tau, vg,
                       c_omega=spec.pop("c_omega", 1.0),
                       length=float(spec.pop("length", 1.0)),
                       delta_omega=spec.pop("delta_omega", 1.0),
                       alpha0=spec.pop("alpha0", 0.0))
    if spec:
        raise InvalidMaterialError(f"unexpected material keys {sorted(spec)}")
    return m


# ---------------------------------------------------------------------------
# Phase-space slices and the bracket / collision operators
# ---------------------------------------------------------------------------

def phase_slice(fn, material: MaterialModel, vgrid: VelocityGrid) -> np.ndarray:
    """Sample fn(v, omega) on the full (velocity, bin) grid."""
    v = vgrid.full_nodes[:, None]
    w = material.omega[None, :]
    return np.broadcast_to(fn(v, w), (v.size, material.n_bins)).astype(float)


def incoming_slice(fn, material: MaterialModel, vgrid: VelocityGrid) -> np.ndarray:
    """Sample fn(v, omega) on the positive-velocity half grid."""
    v = vgrid.positive_nodes[:, None]
    w = material.omega[None, :]
    return np.broadcast_to(fn(v, w), (v.size, material.n_bins)).astype(float)


def _check_shape(g, material, vgrid, half=False) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    n_v = vgrid.n_half if half else 2 * vgrid.n_half
    if g.shape != (n_v, material.n_bins):
        raise ValueError(f"slice shape {g.shape} does not match grid "
                         f"({n_v}, {material.n_bins})")
    return g


def bracket(g, material: MaterialModel, vgrid: VelocityGrid) -> float:
    """Normalized phase-space average <g>."""
    g = _check_shape(g, material, vgrid)
    return float(vgrid.full_weights @ g @ material.measure_weights)


def bracket_positive(g, material: MaterialModel, vgrid: VelocityGrid) -> float:
    """Average restricted to v > 0 (accepts a full or half slice)."""
    g = np.asarray(g, dtype=float)
    if g.shape[0] == 2 * vgrid.n_half:
        g = g[vgrid.n_half:, :]
    g = _check_shape(g, material, vgrid, half=True)
    return float(vgrid.positive_weights @ g @ material.measure_weights)


def collide(g, material: MaterialModel, vgrid: VelocityGrid) -> np.ndarray:
    """Collision operator: rank-one projection onto constants, g -> <g>."""
    g = _check_shape(g, material, vgrid)
    return np.full_like(g, bracket(g, material, vgrid))
