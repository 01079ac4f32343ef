"""Particle-number conserving two-site DMRG for the open Bose-Hubbard chain.

Every MPS bond carries a U(1) label per state: the number of bosons on the sites to its left.
Tensors are stored dense, but only entries with ``q_left + n == q_right`` are ever filled, so
the state never leaves the fixed-N sector and no chemical potential is needed.

Tensor conventions: ``A[a, s, b]`` (left bond, physical, right bond) and
``W[w, v, s_out, s_in]`` for the MPO.
"""
from collections import namedtuple
from django.core.exceptions import ImproperlyConfigured
from scipy.linalg import eigh, svd
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh
from ..constants import CHECKPOINT_HEADER, FORMAT_JSON, FORMAT_PICKLE
from ..exceptions import CheckpointError, EigenSolverError, SpecMismatchError
from ..model import GroundState, ObservableSet, uniform_occupations
from .. import format, settings
import logging
import numpy as np
import os

logger = logging.getLogger(__name__)

DENSE_EFFECTIVE_LIMIT = 128
EIGSH_TOL = 1e-12
SINGULAR_VALUE_FLOOR = 1e-14


DmrgConfig = namedtuple(
    "DmrgConfig",
    ["chi_max", "max_sweeps", "min_sweeps", "energy_tol", "truncation_tol", "checkpoint"],
    defaults=(128, 40, 2, 1e-9, 1e-10, None),
)


def local_operators(d):
    """Occupation numbers, annihilator and creator on a site truncated to ``d`` states."""
    n = np.arange(d, dtype=float)
    b = np.diag(np.sqrt(n[1:]), k=1)
    return n, b, b.T.copy()


def build_mpo(spec):
    d = spec.local_dim
    n, b, bdag = local_operators(d)
    eye = np.eye(d)
    W = np.zeros((4, 4, d, d))
    W[0, 0] = eye
    W[0, 1] = -spec.J * bdag
    W[0, 2] = -spec.J * b
    W[0, 3] = np.diag(0.5 * spec.U * n * (n - 1))
    W[1, 3] = b
    W[2, 3] = bdag
    W[3, 3] = eye

    mpo = [W] * spec.M
    mpo[0] = W[0:1]
    mpo[-1] = W[:, 3:4]
    return mpo


class MpsState(object):
    """Open-boundary MPS with U(1) bond labels.

    ``charges[k]`` labels bond k (left of site k); ``charges[0] == [0]`` and
    ``charges[M] == [N]``. Sites left of ``centre`` are left-canonical, sites right of it
    right-canonical.
    """

    def __init__(self, tensors, charges, centre=0, truncation_log=None):
        self.tensors = tensors
        self.charges = charges
        self.centre = centre
        self.truncation_log = list(truncation_log or [])

    @classmethod
    def product(cls, occupations, local_dim):
        tensors, charges = [], [np.array([0])]
        for n in occupations:
            A = np.zeros((1, local_dim, 1))
            A[0, n, 0] = 1.0
            tensors.append(A)
            charges.append(charges[-1] + n)
        return cls(tensors, charges, centre=0)

    @property
    def num_sites(self):
        return len(self.tensors)

    @property
    def bond_dimensions(self):
        return [A.shape[2] for A in self.tensors[:-1]]

    def norm(self):
        F = np.ones((1, 1))
        for A in self.tensors:
            F = _transfer(F, A)
        return float(np.sqrt(F[0, 0]))

    def canonical_residual(self):
        worst = 0.0
        for k, A in enumerate(self.tensors):
            if k < self.centre:
                gram = np.einsum("asb,asc->bc", A, A)
            elif k > self.centre:
                gram = np.einsum("asb,csb->ac", A, A)
            else:
                continue
            worst = max(worst, float(np.abs(gram - np.eye(len(gram))).max()))
        return worst


def _transfer(F, A, op=None):
    """Push ``F[bra, ket]`` one site to the right, optionally through a local operator."""
    T = np.tensordot(F, A, axes=(0, 0))  # [ket, s, bra']
    if op is not None and op.ndim == 1:
        T = T * op[None, :, None]
    elif op is not None:
        T = np.tensordot(T, op, axes=(1, 0)).transpose(0, 2, 1)
    return np.tensordot(T, A, axes=([0, 1], [0, 1]))


def _extend_left(L, A, W):
    T = np.tensordot(L, A, axes=(2, 0))  # [a, w, t, d]
    T = np.tensordot(T, W, axes=([1, 2], [0, 3]))  # [a, d, v, s]
    return np.tensordot(A, T, axes=([0, 1], [0, 3])).transpose(0, 2, 1)


def _extend_right(R, A, W):
    T = np.tensordot(A, R, axes=(2, 2))  # [c, t, b, v]
    T = np.tensordot(T, W, axes=([1, 3], [3, 1]))  # [c, b, w, s]
    return np.tensordot(A, T, axes=([1, 2], [3, 1])).transpose(0, 2, 1)


def _apply_two_site(L, W1, W2, R, theta):
    """Effective Hamiltonian on ``theta[a, t, z, f]``, contracted pairwise."""
    T = np.tensordot(L, theta, axes=(2, 0))  # [x, w, t, z, f]
    T = np.tensordot(T, W1, axes=([1, 2], [0, 3]))  # [x, z, f, v, s]
    T = np.tensordot(T, W2, axes=([3, 1], [0, 3]))  # [x, f, s, u, y]
    T = np.tensordot(T, R, axes=([1, 3], [2, 1]))  # [x, s, y, e]
    return T


def _sector_mask(q_left, q_right, d):
    s = np.arange(d)
    return (
        q_left[:, None, None, None] + s[None, :, None, None] + s[None, None, :, None]
    ) == q_right[None, None, None, :]


def _optimize_pair(state, mpo, left, right, i):
    A1, A2 = state.tensors[i], state.tensors[i + 1]
    theta = np.tensordot(A1, A2, axes=(2, 0))
    mask = _sector_mask(state.charges[i], state.charges[i + 2], A1.shape[1])
    L, W1, W2, R = left[i], mpo[i], mpo[i + 1], right[i + 2]

    def matvec(x):
        full = np.zeros(theta.shape)
        full[mask] = np.ravel(x)
        return _apply_two_site(L, W1, W2, R, full)[mask]

    size = int(mask.sum())
    if size <= DENSE_EFFECTIVE_LIMIT:
        H = np.column_stack([matvec(e) for e in np.eye(size)])
        values, vectors = eigh(0.5 * (H + H.T))
        energy, x = values[0], vectors[:, 0]
    else:
        v0 = theta[mask]
        if not np.any(v0):
            v0 = np.ones(size)
        op = LinearOperator((size, size), matvec=matvec, dtype=float)
        try:
            values, vectors = eigsh(op, k=1, which="SA", v0=v0, tol=EIGSH_TOL)
        except ArpackNoConvergence as e:
            raise EigenSolverError(
                "Two-site eigensolve did not converge at sites (%d, %d), sector size %d: %s"
                % (i, i + 1, size, e)
            )
        energy, x = values[0], vectors[:, 0]

    theta = np.zeros(theta.shape)
    theta[mask] = x
    return float(energy), theta


def _split(theta, q_left, q_right, cfg, move_right):
    """Blockwise SVD of a two-site tensor followed by global truncation."""
    Dl, d, _, Dr = theta.shape
    s = np.arange(d)
    row_charge = (q_left[:, None] + s[None, :]).ravel()
    col_charge = (q_right[None, :] - s[:, None]).ravel()
    matrix = theta.reshape(Dl * d, d * Dr)

    blocks = []
    for charge in np.intersect1d(row_charge, col_charge):
        rows = np.nonzero(row_charge == charge)[0]
        cols = np.nonzero(col_charge == charge)[0]
        u, sv, vt = svd(matrix[np.ix_(rows, cols)], full_matrices=False, lapack_driver="gesvd")
        blocks.append((charge, rows, cols, u, sv, vt))

    values = np.concatenate([block[4] for block in blocks])
    weights = np.sort(values ** 2)[::-1]
    total = weights.sum()
    tail = np.append(np.cumsum(weights[::-1])[::-1], 0.0)
    keep = int(np.argmax(tail <= cfg.truncation_tol * total))
    keep = max(1, min(keep, cfg.chi_max, int(np.sum(values > SINGULAR_VALUE_FLOOR * values.max()))))
    threshold = np.sort(values)[::-1][keep - 1]
    discarded = float(tail[keep] / total)

    columns, kept_s, kept_v, charges = [], [], [], []
    ties = keep - int(np.sum(values > threshold))
    for charge, rows, cols, u, sv, vt in blocks:
        tied = np.nonzero(sv == threshold)[0][:ties]
        ties -= len(tied)
        for k in np.union1d(np.nonzero(sv > threshold)[0], tied):
            column = np.zeros(Dl * d)
            column[rows] = u[:, k]
            row = np.zeros(d * Dr)
            row[cols] = vt[k]
            columns.append(column)
            kept_v.append(row)
            kept_s.append(sv[k])
            charges.append(charge)

    U = np.column_stack(columns)
    S = np.array(kept_s)
    S = S / np.linalg.norm(S)
    V = np.vstack(kept_v)
    chi = len(S)
    if move_right:
        A1, A2 = U, S[:, None] * V
    else:
        A1, A2 = U * S[None, :], V
    return A1.reshape(Dl, d, chi), A2.reshape(chi, d, Dr), np.array(charges), discarded


def _spec_record(spec):
    return {
        "M": spec.M,
        "N": spec.N,
        "J": float(spec.J),
        "U": float(spec.U),
        "cap": min(spec.n_max, spec.N),
    }


def checkpoint_format():
    code = settings.get("CHECKPOINT_FORMAT", FORMAT_JSON)
    if code == FORMAT_PICKLE and not settings.get("ALLOW_INCOMING_PICKLE", False):
        raise ImproperlyConfigured(
            "Can not set CHECKPOINT_FORMAT to Pickle unless the ALLOW_INCOMING_PICKLE is enabled."
        )
    if not format.is_registered(code):
        raise ImproperlyConfigured("CHECKPOINT_FORMAT %r is not a registered format." % code)
    return code


def checkpoint_name(spec):
    return "mps-M%d-N%d-J%r-U%r-n%d.ckpt" % (spec.M, spec.N, float(spec.J), float(spec.U), min(spec.n_max, spec.N))


def save_checkpoint(path, state, spec, sweeps, energies):
    payload = {
        "spec": _spec_record(spec),
        "sweeps": sweeps,
        "energies": [float(e) for e in energies],
        "centre": state.centre,
        "truncation_log": [float(w) for w in state.truncation_log],
        "charges": [q.tolist() for q in state.charges],
        "tensors": [A.tolist() for A in state.tensors],
    }
    blob = format.dump(checkpoint_format(), payload, CHECKPOINT_HEADER)
    partial = path + ".partial"
    with open(partial, "wb") as fh:
        fh.write(blob)
    os.replace(partial, path)
    logger.debug("Wrote MPS checkpoint after %d sweeps to %s" % (sweeps, path))


def load_checkpoint(path):
    """Return ``(state, spec_record, sweeps, energies)`` from a checkpoint file."""
    with open(path, "rb") as fh:
        payload = format.load(fh.read(), CHECKPOINT_HEADER)
    try:
        state = MpsState(
            [np.asarray(A, dtype=float) for A in payload["tensors"]],
            [np.asarray(q, dtype=np.int64) for q in payload["charges"]],
            centre=payload["centre"],
            truncation_log=payload["truncation_log"],
        )
        return state, payload["spec"], payload["sweeps"], list(payload["energies"])
    except (KeyError, TypeError) as e:
        raise CheckpointError("Checkpoint %s is missing data: %s" % (path, e))


def _resume(spec, cfg):
    if not cfg.checkpoint or not os.path.exists(cfg.checkpoint):
        return None
    state, record, sweeps, energies = load_checkpoint(cfg.checkpoint)
    if record != _spec_record(spec):
        logger.warning(
            "Ignoring checkpoint %s: it belongs to %r, not %r"
            % (cfg.checkpoint, record, _spec_record(spec))
        )
        return None
    logger.info("Resuming DMRG for %s from %s after %d sweeps" % (spec, cfg.checkpoint, sweeps))
    return state, sweeps, energies


def mps_energy(state, mpo):
    """<psi|H|psi> / <psi|psi> by a full left-to-right contraction through the MPO."""
    L = np.ones((1, 1, 1))
    for A, W in zip(state.tensors, mpo):
        L = _extend_left(L, A, W)
    return float(L[0, 0, 0]) / state.norm() ** 2


def dmrg_ground_state(spec, cfg):
    M = spec.M
    mpo = build_mpo(spec)
    resumed = _resume(spec, cfg)
    if resumed:
        state, done, energies = resumed
    else:
        state = MpsState.product(uniform_occupations(M, spec.N), spec.local_dim)
        done, energies = 0, []

    left = [None] * (M + 1)
    right = [None] * (M + 1)
    left[0] = np.ones((1, 1, 1))
    right[M] = np.ones((1, 1, 1))
    for k in range(M - 1, 0, -1):
        right[k] = _extend_right(right[k + 1], state.tensors[k], mpo[k])

    converged = False
    for sweep in range(done, cfg.max_sweeps):
        worst = 0.0
        for i in range(M - 1):
            energy, theta = _optimize_pair(state, mpo, left, right, i)
            A1, A2, charges, discarded = _split(theta, state.charges[i], state.charges[i + 2], cfg, True)
            state.tensors[i], state.tensors[i + 1], state.charges[i + 1] = A1, A2, charges
            left[i + 1] = _extend_left(left[i], A1, mpo[i])
            worst = max(worst, discarded)
        for i in reversed(range(M - 1)):
            energy, theta = _optimize_pair(state, mpo, left, right, i)
            A1, A2, charges, discarded = _split(theta, state.charges[i], state.charges[i + 2], cfg, False)
            state.tensors[i], state.tensors[i + 1], state.charges[i + 1] = A1, A2, charges
            right[i + 1] = _extend_right(right[i + 2], A2, mpo[i + 1])
            worst = max(worst, discarded)
        state.centre = 0
        state.truncation_log.append(worst)
        energies.append(energy)
        logger.debug(
            "DMRG sweep %d for %s: E=%.12g, max discarded weight %.3g, max chi %d"
            % (sweep + 1, spec, energy, worst, max(state.bond_dimensions))
        )
        if cfg.checkpoint:
            save_checkpoint(cfg.checkpoint, state, spec, sweep + 1, energies)
        if (
            sweep + 1 >= cfg.min_sweeps
            and len(energies) > 1
            and abs(energies[-1] - energies[-2]) < cfg.energy_tol * M
        ):
            converged = True
            break

    if not converged:
        logger.warning(
            "DMRG for %s stopped after %d sweeps without reaching |dE| < %g per site"
            % (spec, cfg.max_sweeps, cfg.energy_tol)
        )
    energy = mps_energy(state, mpo)
    return MpsGroundState(spec, state, energy, converged=converged, sweep_energies=energies)


def _right_closures(state):
    closures = [None] * (state.num_sites + 1)
    closures[-1] = np.ones((1, 1))
    for k in range(state.num_sites - 1, -1, -1):
        A = state.tensors[k]
        closures[k] = np.tensordot(np.tensordot(A, closures[k + 1], axes=(2, 0)), A, axes=([1, 2], [1, 2]))
    return closures


def _left_transfers(state):
    transfers = [np.ones((1, 1))]
    for A in state.tensors:
        transfers.append(_transfer(transfers[-1], A))
    return transfers


def _site_expectation(state, left, right, k, op):
    return float(np.sum(_transfer(left[k], state.tensors[k], op) * right[k + 1]))


def cutoff_weight(state):
    d = state.tensors[0].shape[1]
    projector = np.zeros(d)
    projector[-1] = 1.0
    left, right = _left_transfers(state), _right_closures(state)
    norm2 = left[-1][0, 0]
    return max(
        _site_expectation(state, left, right, k, projector) for k in range(state.num_sites)
    ) / norm2


def measure_mps(state, spec):
    """Observables by left transfers and right closures; O(M^2 chi^3) for the correlation table."""
    M = state.num_sites
    if M != spec.M or state.charges[-1][0] != spec.N:
        raise SpecMismatchError(
            "MPS with %d sites and N=%d measured against %s" % (M, state.charges[-1][0], spec)
        )
    n, b, bdag = local_operators(state.tensors[0].shape[1])
    left, right = _left_transfers(state), _right_closures(state)
    norm2 = left[-1][0, 0]

    corr = np.zeros((M, M))
    for i in range(M):
        corr[i, i] = _site_expectation(state, left, right, i, n ** 2)
        F = _transfer(left[i], state.tensors[i], n)
        for j in range(i + 1, M):
            corr[i, j] = corr[j, i] = float(np.sum(_transfer(F, state.tensors[j], n) * right[j + 1]))
            F = _transfer(F, state.tensors[j])
    corr /= norm2

    hopping = 0.0
    for i in range(M - 1):
        F = _transfer(left[i], state.tensors[i], bdag)
        hopping += 2.0 * float(np.sum(_transfer(F, state.tensors[i + 1], b) * right[i + 2]))
    densities = np.array([_site_expectation(state, left, right, k, n) for k in range(M)]) / norm2

    return ObservableSet(
        energy=mps_energy(state, build_mpo(spec)),
        b_mean=hopping / norm2,
        p_mean=float(np.trace(corr)),
        n_mean=float(densities.sum()),
        density_corr=corr,
    )


class MpsGroundState(GroundState):
    def __init__(self, spec, state, energy, converged=True, sweep_energies=None):
        super().__init__(spec, energy, converged=converged)
        self.state = state
        self.sweep_energies = list(sweep_energies or [])
        self._observables = None

    def measure(self):
        if self._observables is None:
            self._observables = measure_mps(self.state, self.spec)
        return self._observables

    def cutoff_weight(self):
        return cutoff_weight(self.state)


class DmrgSolver(object):
    def __init__(self, **options):
        self.options = options

    def config_for(self, spec):
        from ..serializers import make_dmrg_config

        options = dict(self.options)
        if not options.get("checkpoint"):
            directory = settings.get("CHECKPOINT_DIR", "")
            if directory:
                options["checkpoint"] = os.path.join(directory, checkpoint_name(spec))
        return make_dmrg_config(spec.M, **options)

    def solve(self, spec):
        cfg = self.config_for(spec)
        logger.debug("DMRG for %s with chi_max=%d" % (spec, cfg.chi_max))
        return dmrg_ground_state(spec, cfg)


__all__ = [
    "DmrgConfig",
    "MpsState",
    "build_mpo",
    "mps_energy",
    "dmrg_ground_state",
    "measure_mps",
    "cutoff_weight",
    "save_checkpoint",
    "load_checkpoint",
    "MpsGroundState",
    "DmrgSolver",
]
