from rest_framework.exceptions import ValidationError
from bhcavity.backend.exact import ExactSolver
from bhcavity.exceptions import SpecMismatchError
from bhcavity.model import (
    ObservableSet,
    energy_from_parts,
    hellmann_feynman_tunnelling,
    product_state_energy,
    quench_work,
    uniform_occupations,
)
from ..common import BaseTest, make_spec
import numpy as np


class LatticeSpecTest(BaseTest):
    def test_default_cutoff(self):
        spec = make_spec(6, 6, 0.1)
        self.assertEqual(spec.n_max, 4)
        self.assertEqual(spec.local_dim, 5)
        self.assertEqual(spec.boundary, "open")

    def test_local_dim_never_exceeds_particle_number(self):
        spec = make_spec(2, 1, 1.0)
        self.assertEqual(spec.local_dim, 2)

    def test_rejects_single_site(self):
        with self.assertRaises(ValidationError):
            make_spec(1, 1, 0.1)

    def test_rejects_nonpositive_interaction(self):
        with self.assertRaises(ValidationError):
            make_spec(4, 4, 0.1, U=0.0)

    def test_rejects_negative_tunnelling(self):
        with self.assertRaises(ValidationError):
            make_spec(4, 4, -0.1)

    def test_rejects_cutoff_below_floor(self):
        with self.assertRaises(ValidationError):
            make_spec(4, 8, 0.1, n_max=3)

    def test_cache_key_ignores_unreachable_cutoff(self):
        self.assertEqual(make_spec(2, 2, 0.5, n_max=4).cache_key(), make_spec(2, 2, 0.5, n_max=5).cache_key())


class EnergySplitTest(BaseTest):
    def test_unit_filling_without_tunnelling(self):
        spec = make_spec(6, 6, 0.0)
        obs = ObservableSet(energy=0.0, b_mean=0.0, p_mean=6.0, n_mean=6.0, density_corr=np.ones((6, 6)))
        self.assertEqual(energy_from_parts(spec, obs), 0.0)

    def test_single_particle_dimer(self):
        spec = make_spec(2, 1, 1.0)
        obs = ObservableSet(energy=-1.0, b_mean=1.0, p_mean=1.0, n_mean=1.0, density_corr=None)
        self.assertAlmostEqual(energy_from_parts(spec, obs), -1.0, places=12)

    def test_matches_eigenvalue(self):
        spec = make_spec(6, 6, 0.2)
        state = ExactSolver().solve(spec)
        self.assertAlmostEqual(energy_from_parts(spec, state.measure()), state.energy, places=10)

    def test_wrong_particle_number(self):
        spec = make_spec(2, 2, 1.0)
        obs = ObservableSet(energy=0.0, b_mean=0.0, p_mean=1.0, n_mean=1.0, density_corr=None)
        with self.assertRaises(SpecMismatchError):
            energy_from_parts(spec, obs)

    def test_wrong_table_shape(self):
        spec = make_spec(4, 4, 1.0)
        obs = ObservableSet(energy=0.0, b_mean=0.0, p_mean=4.0, n_mean=4.0, density_corr=np.ones((3, 3)))
        with self.assertRaises(SpecMismatchError):
            energy_from_parts(spec, obs)

    def test_density_fluctuations_bound(self):
        # Cauchy-Schwarz: P >= N^2 / M.
        spec = make_spec(6, 6, 0.3)
        obs = ExactSolver().solve(spec).measure()
        self.assertGreaterEqual(obs.p_mean, 6.0 - 1e-12)


class QuenchWorkTest(BaseTest):
    def test_no_tunnelling_no_work(self):
        spec = make_spec(6, 6, 0.0)
        obs = ExactSolver().solve(spec).measure()
        self.assertEqual(quench_work(spec, obs, 0.01), 0.0)

    def test_dimer(self):
        spec = make_spec(2, 1, 1.0)
        obs = ObservableSet(energy=-1.0, b_mean=1.0, p_mean=1.0, n_mean=1.0, density_corr=None)
        self.assertAlmostEqual(quench_work(spec, obs, 0.1), -0.1, places=12)


class ProductStateTest(BaseTest):
    def test_uniform_occupations(self):
        self.assertEqual(uniform_occupations(4, 6).tolist(), [2, 2, 1, 1])
        self.assertEqual(uniform_occupations(6, 6).tolist(), [1] * 6)

    def test_energy(self):
        spec = make_spec(4, 6, 0.0)
        self.assertEqual(product_state_energy(spec, [2, 2, 1, 1]), 2.0)
        self.assertEqual(product_state_energy(spec, [3, 1, 1, 1]), 3.0)

    def test_rejects_wrong_particle_number(self):
        spec = make_spec(4, 6, 0.0)
        with self.assertRaises(SpecMismatchError):
            product_state_energy(spec, [1, 1, 1, 1])

    def test_variational_bound(self):
        spec = make_spec(6, 6, 0.2)
        energy = ExactSolver().solve(spec).energy
        self.assertLessEqual(energy, product_state_energy(spec, uniform_occupations(6, 6)))


class HellmannFeynmanTest(BaseTest):
    def test_matches_measured_tunnelling(self):
        spec = make_spec(6, 6, 0.1)
        solver = ExactSolver()
        derivative = hellmann_feynman_tunnelling(spec, lambda s: solver.solve(s).energy)
        measured = solver.solve(spec).measure().b_mean
        self.assertAlmostEqual(derivative / measured, 1.0, delta=1e-4)
