from django.test import override_settings
from unittest.mock import patch
from bhcavity.backend.exact import (
    ExactSolver,
    FockBasis,
    basis_dimension,
    build_hamiltonian,
    ground_state,
)
from bhcavity.exceptions import BasisTooLargeError, SpecMismatchError
from ..common import BaseTest, make_spec
import math
import numpy as np


class FockBasisTest(BaseTest):
    def test_dimension(self):
        self.assertEqual(basis_dimension(6, 6, 6), 462)
        self.assertEqual(len(FockBasis(6, 6, 6)), 462)
        self.assertEqual(basis_dimension(5, 7, 7), math.comb(11, 7))

    def test_cutoff_shrinks_dimension(self):
        # only (1, 1) survives a cap of one boson per site
        self.assertEqual(basis_dimension(2, 2, 1), 1)
        self.assertLess(basis_dimension(6, 6, 2), 462)

    def test_states_are_lexicographic(self):
        basis = FockBasis(4, 4, 4)
        states = basis.states
        self.assertTrue(np.all(states.sum(axis=1) == 4))
        self.assertTrue(np.all(states <= 4))
        as_tuples = [tuple(s) for s in states.tolist()]
        self.assertEqual(as_tuples, sorted(as_tuples))
        self.assertEqual(len(set(as_tuples)), len(as_tuples))

    def test_lookup_round_trip(self):
        basis = FockBasis(8, 8, 8)
        rng = np.random.default_rng(0)
        indices = rng.integers(0, len(basis), 1000)
        for index in indices:
            self.assertEqual(basis.lookup(basis.vector(index)), index)
        np.testing.assert_array_equal(basis.lookup(basis.states[indices]), indices)

    def test_size_guard(self):
        with self.assertRaises(BasisTooLargeError):
            FockBasis(6, 6, 6, limit=100)

    @override_settings(BHCAVITY={"EXACT_BASIS_LIMIT": 100})
    def test_size_guard_from_settings(self):
        with self.assertRaises(BasisTooLargeError):
            ExactSolver().solve(make_spec(6, 6, 0.1))


class HamiltonianTest(BaseTest):
    def test_two_site_two_particle_matrix(self):
        J, U = 0.7, 1.0
        spec = make_spec(2, 2, J, U=U)
        basis = FockBasis(2, 2, spec.n_max)
        H = build_hamiltonian(spec, basis).toarray()
        r = np.sqrt(2.0) * J
        expected = np.array([[U, -r, 0.0], [-r, 0.0, -r], [0.0, -r, U]])
        np.testing.assert_allclose(H, expected, atol=1e-14)

    def test_hermitian(self):
        spec = make_spec(5, 5, 0.3)
        H = build_hamiltonian(spec, FockBasis(5, 5, spec.n_max))
        self.assertEqual(abs(H - H.T).max(), 0.0)

    def test_diagonal_without_tunnelling(self):
        spec = make_spec(4, 4, 0.0)
        H = build_hamiltonian(spec, FockBasis(4, 4, spec.n_max)).toarray()
        self.assertEqual(np.count_nonzero(H - np.diag(np.diag(H))), 0)

    def test_basis_mismatch(self):
        spec = make_spec(4, 4, 0.1)
        with self.assertRaises(SpecMismatchError):
            build_hamiltonian(spec, FockBasis(4, 3, 4))


class GroundStateTest(BaseTest):
    def test_single_particle_dimer(self):
        state = ExactSolver().solve(make_spec(2, 1, 1.0))
        self.assertAlmostEqual(state.energy, -1.0, places=12)
        np.testing.assert_allclose(state.vector, [np.sqrt(0.5), np.sqrt(0.5)], atol=1e-12)
        self.assertAlmostEqual(state.measure().b_mean, 1.0, places=12)

    def test_two_particle_dimer(self):
        state = ExactSolver().solve(make_spec(2, 2, 1.0))
        self.assertAlmostEqual(state.energy, (1.0 - np.sqrt(17.0)) / 2.0, places=12)

    def test_mott_limit(self):
        spec = make_spec(6, 6, 0.0)
        state = ExactSolver().solve(spec)
        self.assertAlmostEqual(state.energy, 0.0, places=12)
        index = state.basis.lookup(np.ones(6, dtype=int))
        self.assertAlmostEqual(abs(state.vector[index]), 1.0, places=12)
        obs = state.measure()
        np.testing.assert_allclose(obs.density_corr, np.ones((6, 6)), atol=1e-12)
        self.assertAlmostEqual(obs.b_mean, 0.0, places=12)

    def test_residual(self):
        state = ExactSolver().solve(make_spec(6, 6, 0.25))
        self.assertLessEqual(state.residual, 1e-10 * max(1.0, abs(state.energy)))
        self.assertFalse(state.degenerate)

    def test_degenerate_ground_state_is_flagged(self):
        with self.assertLogs("bhcavity.backend.exact", "INFO"):
            state = ExactSolver().solve(make_spec(2, 1, 0.0))
        self.assertTrue(state.degenerate)
        self.assertAlmostEqual(state.energy, 0.0, places=12)

    def test_lanczos_matches_dense(self):
        spec = make_spec(6, 6, 0.2)
        dense = ExactSolver().solve(spec)
        with patch("bhcavity.backend.exact.DENSE_LIMIT", 0):
            sparse = ExactSolver().solve(spec)
        self.assertAlmostEqual(sparse.energy, dense.energy, places=10)
        np.testing.assert_allclose(sparse.vector, dense.vector, atol=1e-8)

    def test_large_basis_uses_lanczos(self):
        spec = make_spec(8, 8, 0.1)
        basis = FockBasis(8, 8, spec.n_max)
        self.assertGreater(len(basis), 1500)
        state = ground_state(build_hamiltonian(spec, basis), spec=spec, basis=basis)
        self.assertAlmostEqual(state.measure().n_mean, 8.0, places=10)

    def test_correlations_are_consistent(self):
        obs = ExactSolver().solve(make_spec(6, 6, 0.15)).measure()
        corr = obs.density_corr
        np.testing.assert_allclose(corr, corr.T, atol=1e-14)
        self.assertAlmostEqual(corr.sum(), 36.0, places=10)
        self.assertAlmostEqual(np.trace(corr), obs.p_mean, places=12)

    def test_cutoff_weight(self):
        self.assertLess(ExactSolver().solve(make_spec(4, 4, 0.0, n_max=3)).cutoff_weight(), 1e-20)
        self.assertGreater(ExactSolver().solve(make_spec(4, 4, 0.5, n_max=3)).cutoff_weight(), 1e-10)
