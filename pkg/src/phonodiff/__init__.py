"""Second-order diffusion limits for steady phonon transport.

Pipeline: a spectral half-space solver turns kinetic boundary conditions
into Robin coefficients for the limiting diffusion equation; a finite
difference solver computes the limit profile; an upwind finite-volume
kinetic solver provides the reference against which the convergence rate
in the Knudsen number is measured.
"""

from .basis import EvenOddBasis, build_basis
from .diffusion import DiffusionConfig, interior_distribution, solve_robin
from .errors import PhonodiffError
from .halfspace import (DirichletBC, HalfSpaceSolution, ReflectiveBC,
                        solve_halfspace)
from .harness import (ConvergenceRecord, ExperimentConfig, error_metric,
                      fit_rate, run_experiment)
from .kinetic import KineticGrid, solve_steady, temperature
from .layer import apply_damped, assemble, decompose
from .material import (MaterialModel, VelocityGrid, bracket,
                       bracket_positive, build_material, collide,
                       material_from_spec, multi_bin, single_bin)
from .robin import RobinCoefficients, compute_left, compute_right, \
    robin_coefficients

__all__ = [
    "ConvergenceRecord", "DiffusionConfig", "DirichletBC", "EvenOddBasis",
    "ExperimentConfig", "HalfSpaceSolution", "KineticGrid", "MaterialModel",
    "PhonodiffError", "ReflectiveBC", "RobinCoefficients", "VelocityGrid",
    "apply_damped", "assemble", "bracket", "bracket_positive", "build_basis",
    "build_material", "collide", "compute_left", "compute_right",
    "decompose", "error_metric", "fit_rate", "interior_distribution",
    "material_from_spec", "multi_bin", "robin_coefficients",
    "run_experiment", "single_bin", "solve_halfspace", "solve_robin",
    "solve_steady", "temperature",
]

__version__ = "0.1.0"
