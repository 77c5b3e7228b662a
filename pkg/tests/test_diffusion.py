import numpy as np
import pytest

from phonodiff.diffusion import (DiffusionConfig, affine_solution,
                                 compose_approximation, gradient,
                                 interior_distribution, solve_robin)
from phonodiff.errors import SolverError
from phonodiff.material import single_bin
from phonodiff.robin import RobinCoefficients

from conftest import phi_v

GENERIC = RobinCoefficients(b0=0.7, b1=1.0, b2=0.05, b3=-1.0, b4=-0.12)


class TestRobinSolve:
    def test_zero_data_gives_zero_profile(self):
        coeffs = RobinCoefficients(0.0, 1.0, 0.3, -1.0, -0.2)
        rho = solve_robin(DiffusionConfig(nx=64, coeffs=coeffs))
        np.testing.assert_allclose(rho, 0.0, atol=1e-14)

    def test_dirichlet_left_zero_flux_right(self):
        coeffs = RobinCoefficients(1.0, 1.0, 0.0, 0.0, 1.0)
        rho = solve_robin(DiffusionConfig(nx=64, coeffs=coeffs))
        np.testing.assert_allclose(rho, 1.0, atol=1e-13)

    def test_matches_closed_form_affine(self):
        cfg = DiffusionConfig(nx=128, coeffs=GENERIC)
        rho = solve_robin(cfg)
        intercept, slope = affine_solution(GENERIC)
        np.testing.assert_allclose(rho, intercept + slope * cfg.nodes,
                                   atol=1e-12)

    def test_affine_profile_second_differences_vanish(self):
        rho = solve_robin(DiffusionConfig(nx=128, coeffs=GENERIC))
        second = rho[2:] - 2.0 * rho[1:-1] + rho[:-2]
        assert np.abs(second).max() < 1e-12

    def test_boundary_residuals_vanish(self):
        cfg = DiffusionConfig(nx=64, coeffs=GENERIC)
        rho = solve_robin(cfg)
        dx = cfg.dx
        left = GENERIC.b1 * rho[0] - GENERIC.b2 * (rho[1] - rho[0]) / dx
        right = GENERIC.b3 * rho[-1] + GENERIC.b4 * (rho[-1] - rho[-2]) / dx
        assert left == pytest.approx(GENERIC.b0, abs=1e-12)
        assert right == pytest.approx(0.0, abs=1e-12)

    def test_grid_refinement_invariance(self):
        coarse = solve_robin(DiffusionConfig(nx=64, coeffs=GENERIC))
        fine = solve_robin(DiffusionConfig(nx=128, coeffs=GENERIC))
        np.testing.assert_allclose(fine[::2], coarse, atol=1e-10)

    def test_attenuation_term(self):
        # with a0 > 0 the profile bends; residual of the discrete equation
        cfg = DiffusionConfig(nx=64, coeffs=GENERIC, diff_coeff=1.0 / 3.0,
                              alpha0_avg=0.5)
        rho = solve_robin(cfg)
        interior = (cfg.diff_coeff * (rho[2:] - 2 * rho[1:-1] + rho[:-2])
                    / cfg.dx**2 + 0.5 * rho[1:-1])
        assert np.abs(interior).max() < 1e-12
        second = rho[2:] - 2.0 * rho[1:-1] + rho[:-2]
        assert np.abs(second).max() > 1e-6

    def test_singular_pair_rejected(self):
        with pytest.raises(ValueError):
            DiffusionConfig(nx=64, coeffs=RobinCoefficients(1, 1, 0, 0, 0))
        with pytest.raises(ValueError):
            DiffusionConfig(nx=2, coeffs=GENERIC)


class TestInteriorReconstruction:
    def test_constant_profile(self, unit_material, vgrid):
        rho = np.full(17, 2.0)
        f = interior_distribution(rho, unit_material, vgrid, 1.0 / 16)
        np.testing.assert_allclose(f, 2.0, atol=1e-14)

    def test_linear_profile(self, vgrid):
        material = single_bin(kn=0.25)
        nx = 16
        rho = np.linspace(0.0, 1.0, nx + 1)
        f = interior_distribution(rho, material, vgrid, 1.0 / nx)
        x = rho[:, None, None]
        expected = x - vgrid.full_nodes[None, :, None] * 0.25
        np.testing.assert_allclose(f, expected, atol=1e-13)

    def test_bracket_recovers_density(self, vgrid):
        material = single_bin(kn=0.25)
        rho = np.linspace(0.3, 0.9, 33)
        f = interior_distribution(rho, material, vgrid, 1.0 / 32)
        wv = vgrid.full_weights
        scalars = np.einsum("xvk,v,k->x", f, wv, material.measure_weights)
        np.testing.assert_allclose(scalars, rho, atol=1e-14)


@pytest.fixture(scope="module")
def composed(vgrid):
    from phonodiff.robin import layer_solutions, robin_coefficients
    material = single_bin(kn=1.0 / 16.0)
    coeffs = robin_coefficients(phi_v, 0.5, material, vgrid, 12)
    rho = solve_robin(DiffusionConfig(nx=64, coeffs=coeffs))
    left, right = layer_solutions(phi_v, 0.5, material, vgrid, 12)
    field = compose_approximation(rho, left, right, material, vgrid, 1.0 / 64)
    return material, rho, field


class TestComposition:

    def test_incoming_moments_at_left_wall(self, composed, vgrid):
        # quadrature moments of the composed field reproduce the data phi = v
        material, rho, field = composed
        w_half = vgrid.positive_weights
        v_half = vgrid.positive_nodes
        boundary = field[0, vgrid.n_half:, :]
        got = w_half @ (v_half[:, None] * boundary) @ material.measure_weights
        expect = w_half @ (v_half[:, None] * v_half[:, None]) \
            @ material.measure_weights
        assert got == pytest.approx(expect, abs=2e-3)

    def test_layers_negligible_mid_domain(self, composed, vgrid):
        material, rho, field = composed
        mid = field.shape[0] // 2
        interior = interior_distribution(rho, material, vgrid, 1.0 / 64)
        assert np.abs(field[mid] - interior[mid]).max() < 1e-4

    def test_zero_data_reduces_to_interior(self, vgrid):
        from phonodiff.robin import layer_solutions, robin_coefficients
        material = single_bin(kn=1.0 / 8.0)
        coeffs = robin_coefficients(0.0, 0.5, material, vgrid, 10)
        rho = solve_robin(DiffusionConfig(nx=32, coeffs=coeffs))
        left, right = layer_solutions(0.0, 0.5, material, vgrid, 10)
        field = compose_approximation(rho, left, right, material, vgrid,
                                      1.0 / 32)
        np.testing.assert_allclose(rho, 0.0, atol=1e-12)
        np.testing.assert_allclose(field, 0.0, atol=1e-10)

    def test_left_compatible_data_kills_left_layer(self, vgrid):
        # data equal to the interior trace of an admissible affine profile
        # makes the left layer cancel by linearity
        from phonodiff.robin import layer_solutions, robin_coefficients
        material = single_bin(kn=1.0 / 8.0)
        kn = material.kn[0]
        base = robin_coefficients(0.0, 0.5, material, vgrid, 12)
        slope = -0.8
        rho0 = slope * (base.b4 - 1.0)

        def phi(v, w):
            return (rho0 - slope * kn * v) * np.ones_like(w)

        coeffs = robin_coefficients(phi, 0.5, material, vgrid, 12)
        rho = solve_robin(DiffusionConfig(nx=32, coeffs=coeffs))
        assert rho[0] == pytest.approx(rho0, abs=1e-8)
        left, right = layer_solutions(phi, 0.5, material, vgrid, 12)
        f0, f1, f2 = left
        drho = (rho[1] - rho[0]) * 32.0
        for z in (0.0, 1.0, 4.0):
            combo = (f0.recovered_deviation(z)
                     - rho[0] * f1.recovered_deviation(z)
                     + drho * f2.recovered_deviation(z))
            assert np.abs(combo).max() < 1e-8


class TestGradient:
    def test_exact_on_affine(self):
        rho = 0.25 + 1.5 * np.linspace(0, 1, 11)
        np.testing.assert_allclose(gradient(rho, 0.1), 1.5, atol=1e-13)
