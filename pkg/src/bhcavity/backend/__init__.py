from django.utils.module_loading import import_string
from lru import LRU
from ..constants import BACKEND_EXACT, BACKEND_MPS
from ..exceptions import UnknownBackendError
from .. import settings
import logging

logger = logging.getLogger(__name__)


DEFAULT_SOLVER_BACKENDS = {
    BACKEND_EXACT: "bhcavity.backend.exact.ExactSolver",
    BACKEND_MPS: "bhcavity.backend.mps.DmrgSolver",
}


def get_solver_backend(name=None, **kwargs):
    name = name or settings.get("DEFAULT_BACKEND", BACKEND_MPS)
    backends = settings.get("SOLVER_BACKENDS", DEFAULT_SOLVER_BACKENDS)
    if name not in backends:
        raise UnknownBackendError(
            'Unknown solver backend "%s". Choose one of: %s' % (name, ", ".join(sorted(backends)))
        )
    return import_string(backends[name])(**kwargs)


_ground_states = None


def _cache():
    global _ground_states
    if _ground_states is None:
        _ground_states = LRU(settings.get("GROUND_STATE_CACHE_SIZE", 64))
    return _ground_states


def clear_cache():
    global _ground_states
    _ground_states = None


def solve_ground_state(spec, backend=None, **options):
    """Solve ``spec`` with the named backend, raising ``n_max`` until the cutoff is unoccupied.

    Results are cached on the spec and the solver options.
    """
    backend = backend or settings.get("DEFAULT_BACKEND", BACKEND_MPS)
    key = (backend, spec.cache_key(), tuple(sorted((k, repr(v)) for k, v in options.items())))
    cache = _cache()
    if key in cache:
        return cache[key]

    solver = get_solver_backend(backend, **options)
    tolerance = settings.get("CUTOFF_WEIGHT_TOL", 1e-10)
    state = solver.solve(spec)
    while spec.n_max < spec.N:
        weight = state.cutoff_weight()
        if weight <= tolerance:
            break
        logger.warning(
            "Ground state of %s has weight %.3g on the occupation cutoff; raising n_max to %d"
            % (spec, weight, spec.n_max + 1)
        )
        spec = spec.with_cutoff(spec.n_max + 1)
        state = solver.solve(spec)

    cache[key] = state
    return state


__all__ = [
    "get_solver_backend",
    "solve_ground_state",
    "clear_cache",
]
