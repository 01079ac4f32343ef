from django.test import SimpleTestCase
from bhcavity.backend import clear_cache
from bhcavity.model import ObservableSet
from bhcavity.optics import OverlapTable
from bhcavity.serializers import make_cavity_params, make_lattice_spec
import numpy as np


# Deep-lattice overlaps with round numbers, for algebra that does not need real orbitals.
SYNTHETIC_OVERLAPS = OverlapTable(
    depth=10.0,
    j_cl_onsite=2.5,
    j_cl_hop=0.02,
    u_int=1.5,
    j00_onsite=1.0,
    j11_onsite=0.05,
    j11_hop=-0.04,
    j20=0.9,
    j20_hop=0.0,
    j12_onsite=0.0,
    j12_hop=0.0,
)


def make_spec(M, N, J, U=1.0, n_max=None):
    return make_lattice_spec(M=M, N=N, J=J, U=U, n_max=n_max)


def default_cavity(**fields):
    return make_cavity_params(**fields)


def synthetic_observables(spec, rng, energy=None):
    """Random but internally consistent observables: a symmetric table summing to N^2."""
    occ = rng.multinomial(spec.N, np.ones(spec.M) / spec.M, size=32).astype(float)
    weights = rng.random(len(occ))
    weights /= weights.sum()
    corr = occ.T @ (weights[:, None] * occ)
    b_mean = float(rng.uniform(0.0, 2.0 * spec.N))
    p_mean = float(np.trace(corr))
    if energy is None:
        energy = -spec.J * b_mean + 0.5 * spec.U * p_mean - 0.5 * spec.U * spec.N
    return ObservableSet(
        energy=energy,
        b_mean=b_mean,
        p_mean=p_mean,
        n_mean=float(spec.N),
        density_corr=corr,
    )


class BaseTest(SimpleTestCase):
    def setUp(self):
        super().setUp()
        clear_cache()

    def assertArrayAlmostEqual(self, first, second, atol=1e-10, msg=None):
        first, second = np.asarray(first), np.asarray(second)
        self.assertEqual(first.shape, second.shape, msg)
        worst = float(np.max(np.abs(first - second))) if first.size else 0.0
        self.assertLessEqual(worst, atol, msg or "Arrays differ by %.3g" % worst)
