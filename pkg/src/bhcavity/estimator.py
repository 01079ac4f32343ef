"""Two-cavity steady-state readout and the energy estimator G.

Cavity 1 (mode sin(pi x/d), externally pumped) reads the tunnelling operator B through its
output quadrature; cavity 2 (mode cos(pi x/d), fed by the transversely pumped atoms) reads the
staggered density, whose photon number gives P once the long-range density correlations are
replaced by n^2. Only steady-state mean values are modelled.
"""
from collections import namedtuple
from .exceptions import MissingCorrelationsError, UnusableCoefficientsError
from .model import check_consistent
import logging
import numpy as np

logger = logging.getLogger(__name__)

# Validity of the first-order expansion of the cavity-1 denominator.
VALIDITY_FRACTION = 0.1
CROSS_MODE_TOLERANCE = 1e-10

CavityParams = namedtuple(
    "CavityParams",
    ["eta1", "delta_c1", "g1", "delta_a1", "omega0", "delta_c2", "g2", "delta_a2", "kappa"],
)


_CoefficientsBase = namedtuple(
    "EstimatorCoefficients",
    [
        "chi0",
        "chi1",
        "chi2",
        "response",
        "xi",
        "alpha",
        "e0",
        "n_est",
        "photon_scale",
        "validity_ok",
        "problems",
    ],
)


class EstimatorCoefficients(_CoefficientsBase):
    """Closed-form readout coefficients for one particle-number estimate.

    ``photon_scale`` is |R|^2 (J^20)^2. ``problems`` lists why the set cannot be inverted;
    ``e0`` is ``None`` in that case.
    """

    __slots__ = ()

    @property
    def usable(self):
        return not self.problems

    def check(self):
        if self.problems:
            raise UnusableCoefficientsError(
                "Estimator coefficients are unusable: %s" % "; ".join(self.problems)
            )
        return self


EstimatorReport = namedtuple(
    "EstimatorReport",
    [
        "quad1",
        "photon2_exact",
        "photon2_approx",
        "g_estimate",
        "e_exact",
        "discrepancy",
        "band",
        "coefficients",
        "metadata",
    ],
)


def same_parity_pairs(M):
    """Number of site pairs i < j with i + j even."""
    even, odd = (M + 1) // 2, M // 2
    return even * (even - 1) // 2 + odd * (odd - 1) // 2


def _alpha(photon_scale, M, n_est):
    filling = n_est / M
    return photon_scale * (-(n_est ** 2) + 4.0 * filling ** 2 * same_parity_pairs(M))


def _offset(coef, spec, n_est, alpha):
    return (
        0.5 * spec.U * n_est
        - spec.J * (coef.chi0 + coef.chi1 * n_est) / coef.chi2
        + alpha * spec.U / (2.0 * coef.xi)
    )


def offset_slope(coef, spec, n_est=None):
    """dE0/dn_est. E0 is quadratic in n_est, so the n_error band is exactly
    2 * n_error * n_est * |offset_slope| wide."""
    n = coef.n_est if n_est is None else n_est
    curvature = 4.0 * same_parity_pairs(spec.M) / float(spec.M) ** 2 - 1.0
    return 0.5 * spec.U - spec.J * coef.chi1 / coef.chi2 + 0.5 * spec.U * n * curvature


def validity_ok(cav):
    shift = cav.g1 ** 2 / abs(cav.delta_a1)
    return shift <= VALIDITY_FRACTION * min(cav.kappa, abs(cav.delta_c1))


def assert_cross_modes_vanish(ov):
    # Mode 1 and mode 2 photons never scatter into each other in this geometry.
    assert abs(ov.j12_onsite) < CROSS_MODE_TOLERANCE and abs(ov.j12_hop) < CROSS_MODE_TOLERANCE, (
        "Cross-cavity overlaps J12 must vanish, got (%r, %r)" % (ov.j12_onsite, ov.j12_hop)
    )


def coefficients(cav, ov, spec, n_est):
    assert_cross_modes_vanish(ov)
    denominator = cav.kappa ** 2 + cav.delta_c1 ** 2
    dispersive = 2.0 * cav.eta1 * cav.g1 ** 2 / cav.delta_a1
    chi0 = 2.0 * cav.eta1 * cav.delta_c1 / denominator
    chi1 = -dispersive * ov.j11_onsite / denominator
    chi2 = -dispersive * ov.j11_hop / denominator

    response = cav.omega0 * cav.g2 / (cav.delta_a2 * complex(cav.delta_c2, cav.kappa))
    photon_scale = abs(response) ** 2 * ov.j20 ** 2
    xi = 2.0 * photon_scale
    alpha = _alpha(photon_scale, spec.M, n_est)

    problems = []
    if chi2 == 0:
        problems.append("chi2 = 0, the cavity-1 quadrature carries no tunnelling signal")
    if xi == 0:
        problems.append("xi = 0, cavity 2 is dark")
    ok = validity_ok(cav)
    if not ok:
        logger.warning(
            "First-order cavity-1 expansion is outside its validity bound: g1^2/|Delta_a1|=%r, "
            "min(kappa, |Delta_c1|)=%r" % (cav.g1 ** 2 / abs(cav.delta_a1), min(cav.kappa, abs(cav.delta_c1)))
        )

    coef = EstimatorCoefficients(
        chi0=chi0,
        chi1=chi1,
        chi2=chi2,
        response=response,
        xi=xi,
        alpha=alpha,
        e0=None,
        n_est=float(n_est),
        photon_scale=photon_scale,
        validity_ok=ok,
        problems=tuple(problems),
    )
    if coef.usable:
        coef = coef._replace(e0=_offset(coef, spec, n_est, alpha))
    return coef


def with_particle_estimate(coef, spec, n_est):
    """Same cavities, new particle-number estimate: only alpha and E0 move."""
    coef.check()
    alpha = _alpha(coef.photon_scale, spec.M, n_est)
    return coef._replace(alpha=alpha, n_est=float(n_est), e0=_offset(coef, spec, n_est, alpha))


def quad1_readout(coef, obs):
    # The physical cavity sees the true particle number.
    return coef.chi0 + coef.chi1 * obs.n_mean + coef.chi2 * obs.b_mean


def tunnelling_from_quad1(coef, quad1, n_est):
    coef.check()
    return (quad1 - coef.chi0 - coef.chi1 * n_est) / coef.chi2


def staggered_sum(density_corr):
    corr = np.asarray(density_corr)
    signs = (-1.0) ** np.arange(corr.shape[0])
    return float(signs @ corr @ signs)


def photon2_readout(coef, obs):
    if obs.density_corr is None:
        raise MissingCorrelationsError(
            "Cavity-2 photon number needs the full <n_i n_j> table"
        )
    exact = coef.photon_scale * staggered_sum(obs.density_corr)
    approx = coef.xi * obs.p_mean + coef.alpha
    return exact, approx


def factorization_error(coef, obs):
    """<a2+ a2>_exact - (xi P + alpha), written as the same-parity correlation residue."""
    corr = np.asarray(obs.density_corr)
    M = corr.shape[0]
    filling = coef.n_est / M
    i, j = np.triu_indices(M, k=1)
    same = (i + j) % 2 == 0
    residue = 4.0 * np.sum(corr[i[same], j[same]] - filling ** 2)
    # <N^2> = sum_ij <n_i n_j> for a number eigenstate
    mismatch = corr.sum() - coef.n_est ** 2
    return coef.photon_scale * (residue - mismatch)


def _g(coef, spec, quad1, photon2):
    return -(spec.J / coef.chi2) * quad1 + (spec.U / (2.0 * coef.xi)) * photon2 - coef.e0


def estimate_energy(coef, quad1, photon2, spec, n_est=None, e_exact=None, n_error=None):
    """Assemble <G> and compare it against the solver's exact energy.

    With ``n_error`` the band re-evaluates G at n_est * (1 +/- n_error); the fluctuation enters
    every occurrence of n_est (alpha and E0, including the chi1 * n_est subtraction), while the
    readouts keep the true particle number.
    """
    coef.check()
    if n_est is not None and n_est != coef.n_est:
        coef = with_particle_estimate(coef, spec, n_est)
    g = _g(coef, spec, quad1, photon2)

    band = (g, g)
    if n_error:
        values = [g]
        for factor in (1.0 - n_error, 1.0 + n_error):
            shifted = with_particle_estimate(coef, spec, coef.n_est * factor)
            values.append(_g(shifted, spec, quad1, photon2))
        band = (min(values), max(values))

    discrepancy = None
    if e_exact is not None:
        discrepancy = abs(g - e_exact) / spec.N

    metadata = {
        "n_est": coef.n_est,
        "n_error": n_error or 0.0,
        "n_error_applies_to": "alpha,e0,chi1_subtraction",
        "validity_ok": coef.validity_ok,
    }
    return EstimatorReport(
        quad1=quad1,
        photon2_exact=photon2,
        photon2_approx=None,
        g_estimate=g,
        e_exact=e_exact,
        discrepancy=discrepancy,
        band=band,
        coefficients=coef,
        metadata=metadata,
    )


def estimate_from_observables(cav, ov, spec, obs, n_est=None, n_error=None):
    """Full readout chain for one solved ground state: simulate both cavities, then invert."""
    check_consistent(spec, obs)
    n_est = float(spec.N if n_est is None else n_est)
    coef = coefficients(cav, ov, spec, n_est).check()
    quad1 = quad1_readout(coef, obs)
    photon2_exact, photon2_approx = photon2_readout(coef, obs)
    report = estimate_energy(coef, quad1, photon2_exact, spec, e_exact=obs.energy, n_error=n_error)
    return report._replace(photon2_approx=photon2_approx)


__all__ = [
    "CavityParams",
    "EstimatorCoefficients",
    "EstimatorReport",
    "coefficients",
    "with_particle_estimate",
    "quad1_readout",
    "tunnelling_from_quad1",
    "photon2_readout",
    "factorization_error",
    "estimate_energy",
    "estimate_from_observables",
    "same_parity_pairs",
    "offset_slope",
]
