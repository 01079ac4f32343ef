"""Bose-Hubbard model: parameters, observables and the H = -JB + (U/2)P - (U/2)N split.

All solver backends hand back a :class:`GroundState`; everything downstream (the cavity
estimator, the quench-work experiment) only ever sees the :class:`ObservableSet` it measures.
"""
from collections import namedtuple
from .exceptions import SpecMismatchError
import abc
import logging
import math
import numpy as np

logger = logging.getLogger(__name__)


_LatticeSpecBase = namedtuple("LatticeSpec", ["M", "N", "J", "U", "n_max", "boundary"])


class LatticeSpec(_LatticeSpecBase):
    """Open chain of ``M`` sites holding ``N`` bosons.

    Build validated instances through :func:`bhcavity.serializers.make_lattice_spec`.
    """

    __slots__ = ()

    @property
    def local_dim(self):
        # Occupations above N can never be reached.
        return min(self.n_max, self.N) + 1

    @property
    def filling(self):
        return self.N / self.M

    def with_coupling(self, J):
        return self._replace(J=float(J))

    def with_cutoff(self, n_max):
        return self._replace(n_max=int(n_max))

    def cache_key(self):
        return (self.M, self.N, repr(float(self.J)), repr(float(self.U)), min(self.n_max, self.N))


def default_cutoff(M, N):
    return int(math.ceil(N / M)) + 3


def minimum_cutoff(M, N):
    return int(math.ceil(N / M)) + 2


ObservableSet = namedtuple(
    "ObservableSet",
    ["energy", "b_mean", "p_mean", "n_mean", "density_corr"],
)
ObservableSet.__doc__ = """Ground-state expectation values.

``density_corr[i, j]`` is <n_i n_j>; ``p_mean`` is its trace.
"""


class GroundState(abc.ABC):
    """Solved ground state of a :class:`LatticeSpec`, independent of representation."""

    def __init__(self, spec, energy, converged=True):
        self.spec = spec
        self.energy = energy
        self.converged = converged

    @abc.abstractmethod
    def measure(self):
        """Return the :class:`ObservableSet` of this state."""

    @abc.abstractmethod
    def cutoff_weight(self):
        """Largest probability, over sites, of finding exactly ``n_max`` bosons on a site."""

    def __str__(self):
        return "<%s M=%s N=%s J=%r U=%r E=%r>" % (
            self.__class__.__name__,
            self.spec.M,
            self.spec.N,
            self.spec.J,
            self.spec.U,
            self.energy,
        )


def check_consistent(spec, obs):
    corr = obs.density_corr
    if corr is not None and np.shape(corr) != (spec.M, spec.M):
        raise SpecMismatchError(
            "Correlation table has shape %s but the lattice has M=%d sites"
            % (np.shape(corr), spec.M)
        )
    if abs(obs.n_mean - spec.N) > 1e-6:
        raise SpecMismatchError(
            "Observable set holds %r particles but the lattice spec has N=%d"
            % (obs.n_mean, spec.N)
        )


def energy_from_parts(spec, obs):
    check_consistent(spec, obs)
    return -spec.J * obs.b_mean + 0.5 * spec.U * obs.p_mean - 0.5 * spec.U * spec.N


def quench_work(spec, obs, dJ):
    """Mean work of the instantaneous quench J -> J + dJ, averaged over the initial state."""
    check_consistent(spec, obs)
    return -dJ * obs.b_mean


def product_state_energy(spec, occupations):
    occupations = np.asarray(occupations)
    if occupations.shape != (spec.M,) or occupations.sum() != spec.N:
        raise SpecMismatchError(
            "Occupations %s do not describe %d bosons on %d sites"
            % (occupations.tolist(), spec.N, spec.M)
        )
    return 0.5 * spec.U * float(np.sum(occupations * (occupations - 1)))


def uniform_occupations(M, N):
    """Most uniform Fock configuration; the unit-filling state when N == M."""
    base, extra = divmod(N, M)
    return np.array([base + 1 if i < extra else base for i in range(M)], dtype=int)


def hellmann_feynman_tunnelling(spec, solve, step=None):
    """-dE/dJ by central difference; equals <B> for a ground state.

    ``solve`` maps a :class:`LatticeSpec` to its ground-state energy.
    """
    step = step if step is not None else 1e-4 * spec.U
    upper = solve(spec.with_coupling(spec.J + step))
    lower = solve(spec.with_coupling(max(spec.J - step, 0.0)))
    width = step + min(step, spec.J)
    logger.debug("Finite-difference tunnelling at J=%r with step %r" % (spec.J, step))
    return -(upper - lower) / width
