import numpy as np
import pytest

from phonodiff.errors import DegenerateRecoveryError
from phonodiff.halfspace import LayerWorkspace
from phonodiff.layer_reference import solve_layer_reference
from phonodiff.material import multi_bin, reflection_tanh, single_bin
from phonodiff.robin import (RobinCoefficients, compute_left, compute_right,
                             robin_coefficients)

from conftest import phi_v

ALPHA = 0.01


class TestCoefficientRecord:
    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            RobinCoefficients(b0=0.0, b1=-1.0, b2=0.0, b3=-1.0, b4=0.0)
        with pytest.raises(ValueError):
            RobinCoefficients(b0=0.0, b1=1.0, b2=0.0, b3=0.0, b4=0.0)

    def test_as_dict(self):
        c = RobinCoefficients(0.5, 1.0, 0.25, -1.0, -0.5)
        assert c.as_dict() == {"b0": 0.5, "b1": 1.0, "b2": 0.25,
                               "b3": -1.0, "b4": -0.5}


class TestLeftCoefficients:
    def test_unit_data_gives_unit_b1(self, vgrid):
        for material in (single_bin(kn=0.25), multi_bin(length=8.0)):
            _, b1, _ = compute_left(phi_v, material, vgrid, 8, ALPHA)
            assert b1 == pytest.approx(1.0, abs=1e-10)

    def test_zero_data_gives_zero_b0(self, unit_material, vgrid):
        b0, _, _ = compute_left(0.0, unit_material, vgrid, 8, ALPHA)
        assert b0 == pytest.approx(0.0, abs=1e-12)

    def test_b0_linear_in_data(self, unit_material, vgrid):
        ws = LayerWorkspace(unit_material, vgrid, 12, ALPHA)
        b0_v = compute_left(phi_v, unit_material, vgrid, 12, workspace=ws)[0]
        b0_one = compute_left(1.0, unit_material, vgrid, 12, workspace=ws)[0]
        combo = compute_left(lambda v, w: (2.0 * v - 0.5) * np.ones_like(w),
                             unit_material, vgrid, 12, workspace=ws)[0]
        assert combo == pytest.approx(2.0 * b0_v - 0.5 * b0_one, abs=1e-9)

    def test_b2_against_oracle(self, vgrid):
        # direct FV solve of the v*Kn layer problem, Kn = 1 single bin
        from phonodiff.halfspace import DirichletBC
        material = single_bin(kn=1.0)
        b0, b1, b2 = compute_left(phi_v, material, vgrid, 16, ALPHA)
        oracle = solve_layer_reference(
            DirichletBC(lambda v, w: v * material.kn[0] * np.ones_like(w)),
            material, vgrid, zmax=40.0, dz=2.0**-8).theta_inf
        assert b2 == pytest.approx(oracle, abs=1e-3)
        assert b0 == pytest.approx(b2 / material.kn[0], abs=1e-9)

    def test_b2_scales_with_kn(self, vgrid):
        b2_small = compute_left(phi_v, single_bin(kn=0.125), vgrid, 12)[2]
        b2_large = compute_left(phi_v, single_bin(kn=0.25), vgrid, 12)[2]
        assert b2_large == pytest.approx(2.0 * b2_small, rel=1e-9)


class TestRightCoefficients:
    def test_absorbing_wall_b3(self, unit_material, vgrid):
        b3, _ = compute_right(0.0, unit_material, vgrid, 12, ALPHA)
        assert b3 == pytest.approx(-1.0, abs=1e-10)

    def test_b3_constant_for_any_eta(self, unit_material, vgrid):
        # f == -1 is an exact solution of the b3 problem for every eta
        for eta in (0.2, 0.5, 0.9):
            b3, _ = compute_right(eta, unit_material, vgrid, 12, ALPHA)
            assert b3 == pytest.approx(-1.0, abs=1e-10)

    def test_reflective_pair_against_oracle(self, vgrid):
        from phonodiff.halfspace import ReflectiveBC
        material = single_bin(kn=1.0)
        b3, b4 = compute_right(0.5, material, vgrid, 16, ALPHA)
        oracle_b4 = solve_layer_reference(
            ReflectiveBC(0.5, lambda v, w: -1.5 * v * np.ones_like(w)),
            material, vgrid, zmax=40.0, dz=2.0**-8).theta_inf
        assert b4 == pytest.approx(oracle_b4, abs=1.5e-3)

    def test_b4_scales_with_kn_when_uniform(self, vgrid):
        _, b4_small = compute_right(0.5, single_bin(kn=0.125), vgrid, 12)
        _, b4_large = compute_right(0.5, single_bin(kn=0.25), vgrid, 12)
        assert b4_large == pytest.approx(2.0 * b4_small, rel=1e-9)

    def test_total_reflection_rejected(self, unit_material, vgrid):
        with pytest.raises(DegenerateRecoveryError):
            compute_right(1.0, unit_material, vgrid, 8, ALPHA)

    def test_tanh_profile_self_convergence(self, vgrid):
        material = multi_bin(length=16.0)
        eta = reflection_tanh(material.omega)
        coarse = compute_right(eta, material, vgrid, 6, ALPHA)
        fine = compute_right(eta, material, vgrid, 12, ALPHA)
        assert np.isfinite(coarse).all() and np.isfinite(fine).all()
        assert abs(fine[0] - coarse[0]) < 1e-4
        assert abs(fine[1] - coarse[1]) < 1e-4


class TestCombined:
    def test_full_record(self, vgrid):
        material = single_bin(kn=0.0625)
        coeffs = robin_coefficients(phi_v, 0.5, material, vgrid, 12, ALPHA)
        assert coeffs.b1 == pytest.approx(1.0, abs=1e-10)
        assert coeffs.b3 == pytest.approx(-1.0, abs=1e-10)
        # gradient-data coefficients carry one power of Kn
        assert abs(coeffs.b2) < 0.1 and abs(coeffs.b4) < 0.3
        assert coeffs.b0 == pytest.approx(0.71044, abs=1e-3)
