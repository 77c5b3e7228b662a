import numpy as np
import pytest

from phonodiff.basis import build_basis
from phonodiff.errors import ModeCountError
from phonodiff.layer import (apply_damped, assemble, damped_operator_matrix,
                             decompose, pencil_eigenvalues)
from phonodiff.material import (bracket, multi_bin, phase_slice, single_bin)

ALPHA = 0.01


class TestDampedOperator:
    def test_zero_damping_is_collision_minus_identity(self, unit_material,
                                                      vgrid, rng):
        g = rng.standard_normal((2 * vgrid.n_half, 1))
        out = apply_damped(g, unit_material, vgrid, 0.0)
        expected = bracket(g, unit_material, vgrid) - g
        np.testing.assert_allclose(out, expected, atol=1e-13)

    def test_constant_input_closed_form(self, unit_material, vgrid):
        # L_d 1 = -a v^2 <v^2> = -a v^2 / 3 (both damping directions, the
        # second pseudo-inverse direction carries the whole contribution)
        g = np.ones((2 * vgrid.n_half, 1))
        out = apply_damped(g, unit_material, vgrid, ALPHA)
        expected = -ALPHA * vgrid.full_nodes[:, None] ** 2 / 3.0
        np.testing.assert_allclose(out, expected, atol=1e-14)

    def test_linear_input_closed_form(self, unit_material, vgrid):
        # L_d v = -v (1 + a <v^2>) = -v (1 + a/3)
        g = phase_slice(lambda v, w: v * np.ones_like(w), unit_material, vgrid)
        out = apply_damped(g, unit_material, vgrid, ALPHA)
        expected = -(1.0 + ALPHA / 3.0) * vgrid.full_nodes[:, None]
        np.testing.assert_allclose(out, expected, atol=1e-14)

    def test_pseudo_inverse_direction_is_negated_velocity(self, six_bin_material,
                                                          vgrid):
        # closed form of the general pseudo-inverse construction
        w = np.outer(vgrid.full_weights,
                     six_bin_material.measure_weights).ravel()
        v = np.repeat(vgrid.full_nodes, six_bin_material.n_bins)
        lmi = np.tile(w, (v.size, 1)) - np.eye(v.size)
        x1 = np.linalg.lstsq(lmi, v, rcond=None)[0]
        np.testing.assert_allclose(x1, -v, atol=1e-12)

    def test_matrix_and_apply_agree(self, six_bin_material, vgrid, rng):
        g = rng.standard_normal((2 * vgrid.n_half, six_bin_material.n_bins))
        op = damped_operator_matrix(six_bin_material, vgrid, ALPHA)
        via_matrix = (op @ g.ravel()).reshape(g.shape)
        np.testing.assert_allclose(
            apply_damped(g, six_bin_material, vgrid, ALPHA), via_matrix)


class TestAssembly:
    def test_transport_matrix_against_quadrature(self, unit_material, vgrid):
        basis = build_basis(unit_material, vgrid, 1)
        system = assemble(basis, ALPHA)
        # element-by-element oracle: <v phi_a phi_b> by direct quadrature
        E, w, v = basis.eval_matrix, basis.w_points, basis.v_points
        for a in range(basis.n_flat):
            for b in range(basis.n_flat):
                direct = np.sum(w * v * E[:, a] * E[:, b])
                assert system.a_matrix[a, b] == pytest.approx(direct, abs=1e-14)

    def test_transport_matrix_symmetric_with_zero_parity_blocks(
            self, six_bin_material, vgrid):
        basis = build_basis(six_bin_material, vgrid, 4)
        system = assemble(basis, ALPHA)
        A = system.a_matrix
        np.testing.assert_allclose(A, A.T, atol=1e-14)
        n = basis.n_odd_total
        np.testing.assert_allclose(system.odd_block(A), 0.0, atol=1e-14)
        np.testing.assert_allclose(system.even_block(A), 0.0, atol=1e-14)
        assert np.abs(A[:n, n:]).max() > 0.1

    @pytest.mark.parametrize("alpha", [0.0, ALPHA])
    def test_collision_matrix_parity_blocks_vanish(self, six_bin_material,
                                                   vgrid, alpha):
        basis = build_basis(six_bin_material, vgrid, 4)
        system = assemble(basis, alpha)
        B = system.b_matrix
        n = basis.n_odd_total
        np.testing.assert_allclose(B[:n, n:], 0.0, atol=1e-13)
        np.testing.assert_allclose(B[n:, :n], 0.0, atol=1e-13)
        assert np.abs(system.odd_block(B)).max() > 0.1

    def test_uniform_kn_scaling_leaves_system(self, vgrid):
        # Kn ratio <Kn>/Kn == 1 per bin when Kn is uniform, at any scale
        s1 = assemble(build_basis(single_bin(kn=0.25), vgrid, 3), ALPHA)
        s2 = assemble(build_basis(single_bin(kn=0.5), vgrid, 3), ALPHA)
        np.testing.assert_allclose(s1.a_matrix, s2.a_matrix, atol=1e-14)
        np.testing.assert_allclose(s1.b_matrix, s2.b_matrix, atol=1e-14)

    def test_structural_rank_deficiency(self, unit_material, vgrid):
        # one null direction per bin: even/odd dimensions differ by one
        basis = build_basis(unit_material, vgrid, 4)
        system = assemble(basis, ALPHA)
        rank = np.linalg.matrix_rank(system.a_matrix)
        assert rank == basis.n_flat - basis.n_bins


class TestDecomposition:
    def test_minimal_mode_count(self, unit_material, vgrid):
        system = assemble(build_basis(unit_material, vgrid, 1), ALPHA)
        modes = decompose(system)
        assert modes.nondecaying_set.size == 2  # N + 1
        assert modes.n_decaying == 1

    @pytest.mark.parametrize("n_poly", [2, 5, 8])
    def test_mode_count_single_bin(self, unit_material, vgrid, n_poly):
        system = assemble(build_basis(unit_material, vgrid, n_poly), ALPHA)
        modes = decompose(system)
        assert modes.nondecaying_set.size == n_poly + 1

    def test_mode_count_six_bins(self, six_bin_material, vgrid):
        system = assemble(build_basis(six_bin_material, vgrid, 4), ALPHA)
        modes = decompose(system)
        assert modes.nondecaying_set.size == 5 * 6
        assert modes.n_decaying == 4 * 6

    def test_damping_removes_zero_modes(self, unit_material, vgrid):
        basis = build_basis(unit_material, vgrid, 2)
        lam0 = pencil_eigenvalues(assemble(basis, 0.0))
        lam1 = pencil_eigenvalues(assemble(basis, ALPHA))
        finite0 = np.sort(np.abs(lam0[np.isfinite(lam0)].real))
        finite1 = np.sort(np.abs(lam1[np.isfinite(lam1)].real))
        assert finite0[0] < 1e-7 and finite0[1] < 1e-7
        # damped pair sits near +/- sqrt(alpha/3)
        assert finite1[0] == pytest.approx(np.sqrt(ALPHA / 3.0), rel=1e-2)
        assert finite1[1] == pytest.approx(np.sqrt(ALPHA / 3.0), rel=1e-2)

    def test_undamped_spectrum_symmetric(self, unit_material, vgrid):
        lam = pencil_eigenvalues(assemble(build_basis(unit_material, vgrid, 4),
                                          0.0))
        finite = np.sort(lam[np.isfinite(lam)].real)
        np.testing.assert_allclose(finite, -finite[::-1], atol=1e-8)

    def test_wrong_mode_count_is_hard_error(self, unit_material, vgrid):
        # shifting the pencil pushes a decaying mode across zero
        from phonodiff.layer import LayerSystem
        system = assemble(build_basis(unit_material, vgrid, 3), ALPHA)
        shifted = LayerSystem(system.basis, system.alpha_d, system.a_matrix,
                              system.b_matrix + 0.2 * system.a_matrix)
        with pytest.raises(ModeCountError):
            decompose(shifted)

    def test_nonreal_spectrum_is_structure_error(self):
        # rotation pencil has eigenvalues +/- i
        from types import SimpleNamespace
        from phonodiff.errors import NumericalStructureError
        from phonodiff.layer import LayerSystem
        stub = SimpleNamespace(n_odd_total=1, n_even_total=1, n_flat=2)
        system = LayerSystem(stub, ALPHA, np.eye(2),
                             np.array([[0.0, 1.0], [-1.0, 0.0]]))
        with pytest.raises(NumericalStructureError):
            decompose(system)

    def test_constraint_rows_annihilate_decaying_space(self, six_bin_material,
                                                       vgrid):
        system = assemble(build_basis(six_bin_material, vgrid, 3), ALPHA)
        modes = decompose(system)
        prod = modes.constraint_rows @ modes.decaying_basis
        np.testing.assert_allclose(prod, 0.0, atol=1e-12)

    def test_propagate_decays(self, unit_material, vgrid):
        system = assemble(build_basis(unit_material, vgrid, 4), ALPHA)
        modes = decompose(system)
        c0 = modes.decaying_basis @ np.ones(modes.n_decaying)
        z_big = 100.0 / np.sqrt(ALPHA / 3.0)
        assert np.linalg.norm(modes.propagate(c0, z_big)) < 1e-10
        np.testing.assert_allclose(modes.propagate(c0, 0.0), c0, atol=1e-12)
        with pytest.raises(ValueError):
            modes.propagate(c0, -1.0)
