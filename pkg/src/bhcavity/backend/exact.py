"""Fixed-N exact diagonalization of the open Bose-Hubbard chain.

Basis states are occupation vectors in ascending lexicographic order (site 0 most significant).
A state's index is its combinatorial rank, so lookups never need a hash table and never
overflow, however long the chain.
"""
from scipy import sparse
from scipy.linalg import eigh
from scipy.sparse.linalg import ArpackNoConvergence, eigsh
from ..exceptions import BasisTooLargeError, EigenSolverError, SpecMismatchError
from ..model import GroundState, ObservableSet
from .. import settings
import logging
import numpy as np

logger = logging.getLogger(__name__)

DENSE_LIMIT = 1500
DEGENERACY_GAP = 1e-10


def _tail_counts(M, N, cap):
    """tail[k][n]: number of ways sites k..M-1 hold n bosons with at most ``cap`` per site."""
    tail = [[0] * (N + 1) for _ in range(M + 1)]
    tail[M][0] = 1
    for k in range(M - 1, -1, -1):
        for n in range(N + 1):
            tail[k][n] = sum(tail[k + 1][n - v] for v in range(min(cap, n) + 1))
    return tail


def basis_dimension(M, N, n_max):
    return _tail_counts(M, N, min(n_max, N))[0][N]


class FockBasis(object):
    def __init__(self, M, N, n_max, limit=None):
        self.M = M
        self.N = N
        self.cap = min(n_max, N)
        tail = _tail_counts(M, N, self.cap)
        self.dimension = tail[0][N]

        limit = limit if limit is not None else settings.get("EXACT_BASIS_LIMIT", 2000000)
        if self.dimension > limit:
            raise BasisTooLargeError(
                "Fock basis for M=%d, N=%d, n_max=%d has dimension %d, above the limit of %d"
                % (M, N, self.cap, self.dimension, limit)
            )

        # Ranks are < dimension, so any count above it only appears in unused table entries.
        self._offsets = np.zeros((M, N + 1, self.cap + 1), dtype=np.int64)
        for k in range(M):
            for rem in range(N + 1):
                acc = 0
                for v in range(self.cap + 1):
                    self._offsets[k, rem, v] = min(acc, self.dimension)
                    if v <= rem:
                        acc += tail[k + 1][rem - v]
        self.states = self._enumerate(tail)
        self._hopping = None

    def _enumerate(self, tail):
        feasible = np.array([[count > 0 for count in row] for row in tail])
        values = np.arange(self.cap + 1)
        prefixes = np.zeros((1, 0), dtype=np.int64)
        remaining = np.array([self.N])
        for k in range(self.M):
            prefixes = np.repeat(prefixes, self.cap + 1, axis=0)
            remaining = np.repeat(remaining, self.cap + 1)
            choice = np.tile(values, len(prefixes) // (self.cap + 1))
            left = remaining - choice
            keep = left >= 0
            keep[keep] = feasible[k + 1, left[keep]]
            prefixes = np.column_stack([prefixes[keep], choice[keep]])
            remaining = left[keep]
        return prefixes

    def __len__(self):
        return self.dimension

    def vector(self, index):
        return self.states[index]

    def lookup(self, occupations):
        """Basis index of one occupation vector or of every row of a 2D array."""
        occ = np.atleast_2d(np.asarray(occupations, dtype=np.int64))
        remaining = self.N - np.concatenate(
            [np.zeros((len(occ), 1), dtype=np.int64), np.cumsum(occ, axis=1)[:, :-1]], axis=1
        )
        sites = np.arange(self.M)
        index = self._offsets[sites[None, :], remaining, occ].sum(axis=1)
        return index if np.ndim(occupations) == 2 else int(index[0])

    @property
    def hopping(self):
        """Sparse matrix of B = sum_i (b_i^+ b_{i+1} + h.c.) in this basis."""
        if self._hopping is None:
            self._hopping = self._build_hopping()
        return self._hopping

    def _build_hopping(self):
        occ = self.states
        rows, cols, data = [], [], []
        for i in range(self.M - 1):
            movable = np.nonzero((occ[:, i + 1] > 0) & (occ[:, i] < self.cap))[0]
            if not len(movable):
                continue
            target = occ[movable].copy()
            target[:, i] += 1
            target[:, i + 1] -= 1
            amplitude = np.sqrt((occ[movable, i] + 1.0) * occ[movable, i + 1])
            target_index = self.lookup(target)
            rows.extend([target_index, movable])
            cols.extend([movable, target_index])
            data.extend([amplitude, amplitude])
        if not rows:
            return sparse.csr_matrix((self.dimension, self.dimension))
        return sparse.coo_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.dimension, self.dimension),
        ).tocsr()


def _check_basis(spec, basis):
    if basis.M != spec.M or basis.N != spec.N or basis.cap != min(spec.n_max, spec.N):
        raise SpecMismatchError(
            "Basis (M=%d, N=%d, cap=%d) does not belong to %s"
            % (basis.M, basis.N, basis.cap, spec)
        )


def build_hamiltonian(spec, basis):
    _check_basis(spec, basis)
    occ = basis.states
    onsite = 0.5 * spec.U * np.sum(occ * (occ - 1), axis=1)
    H = sparse.diags(onsite.astype(float), format="csr")
    if spec.J:
        H = H - spec.J * basis.hopping
    return H.tocsr()


class ExactGroundState(GroundState):
    def __init__(self, spec, basis, energy, vector, degenerate=False, residual=0.0):
        super().__init__(spec, energy, converged=True)
        self.basis = basis
        self.vector = vector
        self.degenerate = degenerate
        self.residual = residual

    def measure(self):
        return measure(self, self.spec)

    def cutoff_weight(self):
        probability = self.vector ** 2
        at_cap = self.basis.states == self.basis.cap
        return float((probability @ at_cap).max())


def _lowest_pair(H):
    dim = H.shape[0]
    if dim <= DENSE_LIMIT:
        values, vectors = eigh(H.toarray())
        return values[:2], vectors[:, 0]
    try:
        values, vectors = eigsh(H, k=2, which="SA", v0=np.ones(dim), tol=0)
    except ArpackNoConvergence as e:
        raise EigenSolverError(
            "Lanczos did not converge for a %d-dimensional Hamiltonian: %s" % (dim, e)
        )
    order = np.argsort(values)
    return values[order], vectors[:, order[0]]


def ground_state(H, spec=None, basis=None, residual_tol=None):
    """Lowest eigenpair of ``H`` as an :class:`ExactGroundState`."""
    residual_tol = residual_tol if residual_tol is not None else settings.get("EIGEN_RESIDUAL_TOL", 1e-10)
    values, vector = _lowest_pair(H)
    energy = float(values[0])
    # Deterministic overall sign.
    vector = vector / np.linalg.norm(vector)
    if vector[np.argmax(np.abs(vector))] < 0:
        vector = -vector

    residual = float(np.linalg.norm(H @ vector - energy * vector))
    if residual > residual_tol * max(1.0, abs(energy)):
        raise EigenSolverError(
            "Ground state residual %.3g exceeds %.3g" % (residual, residual_tol), residual=residual
        )

    degenerate = len(values) > 1 and values[1] - values[0] < DEGENERACY_GAP
    if degenerate:
        logger.info("Quasi-degenerate ground state, gap %.3g; returning the solver's vector" % (values[1] - values[0]))
    return ExactGroundState(spec, basis, energy, vector, degenerate=degenerate, residual=residual)


def measure(state, spec):
    if state.spec is not None and (state.spec.M, state.spec.N) != (spec.M, spec.N):
        raise SpecMismatchError("State of %s measured against %s" % (state.spec, spec))
    basis = state.basis
    v = state.vector
    probability = v ** 2
    occ = basis.states.astype(float)
    density_corr = occ.T @ (probability[:, None] * occ)
    return ObservableSet(
        energy=state.energy,
        b_mean=float(v @ (basis.hopping @ v)),
        p_mean=float(np.trace(density_corr)),
        n_mean=float(probability @ occ.sum(axis=1)),
        density_corr=density_corr,
    )


class ExactSolver(object):
    def __init__(self, basis_limit=None, residual_tol=None):
        self.basis_limit = basis_limit
        self.residual_tol = residual_tol

    def solve(self, spec):
        basis = FockBasis(spec.M, spec.N, spec.n_max, limit=self.basis_limit)
        logger.debug("Exact diagonalization of %s in a basis of dimension %d" % (spec, len(basis)))
        H = build_hamiltonian(spec, basis)
        return ground_state(H, spec=spec, basis=basis, residual_tol=self.residual_tol)


__all__ = [
    "FockBasis",
    "basis_dimension",
    "build_hamiltonian",
    "ground_state",
    "measure",
    "ExactGroundState",
    "ExactSolver",
]
