"""Lowest-band Wannier orbitals of V(x) = V0 sin^2(pi x / d) and their overlap integrals.

Internal units: lengths in lattice periods d, energies in recoil energies E_r, so that the
single-particle Hamiltonian reads h_A = -(1/pi^2) d^2/dx^2 + V0 sin^2(pi x). Lattice minima sit
at the integers, which are nodes of u1(x) = sin(pi x) and antinodes of u2(x) = cos(pi x).
"""
from collections import namedtuple
from lru import LRU
from scipy.linalg import LinAlgError, eigh_tridiagonal
from .constants import DEFAULT_CUTOFF, DEFAULT_DEPTH, DEFAULT_GRID_POINTS, DEFAULT_PERIODS
from .exceptions import BandStructureError, OverlapQuadratureError, WannierError
from .formats.keyvalue import KeyValueParser, KeyValueRenderer
import logging
import numpy as np

logger = logging.getLogger(__name__)

GAP_TOLERANCE = 1e-6
EDGE_WEIGHT_TOLERANCE = 1e-12
QUADRATURE_RTOL = 1e-6
QUADRATURE_ATOL = 1e-12

MODES = {
    0: lambda x: np.ones_like(x),
    1: lambda x: np.sin(np.pi * x),
    2: lambda x: np.cos(np.pi * x),
}
MODE_LABELS = ["u0(x) = 1", "u1(x) = sin(pi x / d)", "u2(x) = cos(pi x / d)"]


LatticePotential = namedtuple(
    "LatticePotential",
    ["depth", "cutoff", "grid_points", "periods"],
    defaults=(DEFAULT_CUTOFF, DEFAULT_GRID_POINTS, DEFAULT_PERIODS),
)

BandStructure = namedtuple(
    "BandStructure",
    ["potential", "momenta", "energies", "coefficients", "plane_waves"],
)
BandStructure.__doc__ = """Bloch spectrum on a quasi-momentum grid.

``momenta`` are in units of pi/d, ``energies[q, band]`` in E_r and ``coefficients[q, k]``
are the real-gauge plane-wave amplitudes of the lowest band, signed so that every Bloch
function is positive at the site centre x = 0.
"""


_OverlapTableBase = namedtuple(
    "OverlapTable",
    [
        "depth",
        "j_cl_onsite",
        "j_cl_hop",
        "u_int",
        "j00_onsite",
        "j11_onsite",
        "j11_hop",
        "j20",
        "j20_hop",
        "j12_onsite",
        "j12_hop",
        "interaction_scale",
    ],
    defaults=(1.0,),
)


class OverlapTable(_OverlapTableBase):
    __slots__ = ()

    def j20_at(self, site):
        return self.j20 if site % 2 == 0 else -self.j20

    def interaction(self):
        """On-site U: the user-supplied 4 pi hbar^2 a_s / m times the shape factor u_int."""
        return self.interaction_scale * self.u_int

    def as_dict(self):
        return {k: float(v) for k, v in self._asdict().items()}


def supercell_momenta(periods):
    # Centred grid that avoids the zone edge, so +q and -q always come in pairs.
    return -1.0 + (2.0 * np.arange(periods) + 1.0) / periods


def solve_bands(pot, momenta=None, bands=2):
    if pot.cutoff < 8:
        raise BandStructureError(
            "Plane-wave cutoff K=%d is below the minimum of 8" % pot.cutoff
        )
    momenta = np.asarray(supercell_momenta(pot.periods) if momenta is None else momenta, dtype=float)
    plane_waves = np.arange(-pot.cutoff, pot.cutoff + 1)
    off_diagonal = np.full(2 * pot.cutoff, -pot.depth / 4.0)

    energies = np.empty((len(momenta), bands))
    coefficients = np.empty((len(momenta), len(plane_waves)))
    for idx, q in enumerate(momenta):
        diagonal = (q + 2.0 * plane_waves) ** 2 + pot.depth / 2.0
        try:
            values, vectors = eigh_tridiagonal(
                diagonal, off_diagonal, select="i", select_range=(0, bands - 1)
            )
        except LinAlgError as e:
            raise BandStructureError(
                "Band eigensolve failed at q=%r with cutoff K=%d: %s" % (q, pot.cutoff, e)
            )
        lowest = vectors[:, 0]
        edge_weight = max(lowest[0] ** 2, lowest[-1] ** 2)
        if edge_weight > EDGE_WEIGHT_TOLERANCE:
            raise BandStructureError(
                "Lowest band not converged at q=%r: weight %.3g on the outermost plane waves, "
                "increase the cutoff K=%d" % (q, edge_weight, pot.cutoff)
            )
        if lowest.sum() < 0:
            lowest = -lowest
        energies[idx] = values
        coefficients[idx] = lowest

    logger.debug(
        "Solved %d quasi-momenta for V0=%r with K=%d" % (len(momenta), pot.depth, pot.cutoff)
    )
    return BandStructure(pot, momenta, energies, coefficients, plane_waves)


def band_gap(pot):
    """Gap between the two lowest bands; in 1D its extrema sit at q = 0 and the zone edge."""
    edges = solve_bands(pot, momenta=[0.0, 1.0], bands=2)
    return float(edges.energies[:, 1].min() - edges.energies[:, 0].max())


def lowest_bandwidth(pot):
    edges = solve_bands(pot, momenta=[0.0, 1.0], bands=1)
    return float(edges.energies[1, 0] - edges.energies[0, 0])


class WannierFunction(object):
    """Real, even Wannier orbital of the lowest band sampled on the supercell grid.

    The orbital is stored spectrally, so translated copies and ``h_A w`` are exact on any grid.
    """

    def __init__(self, bands):
        pot = bands.potential
        self.potential = pot
        self.center = 0
        self.periods = pot.periods
        self.step = pot.periods / pot.grid_points
        self.x = -pot.periods / 2.0 + self.step * np.arange(pot.grid_points)

        nk = len(bands.plane_waves)
        self._wavenumbers = (
            np.pi * (bands.momenta[:, None] + 2.0 * bands.plane_waves[None, :])
        ).ravel()
        self._amplitudes = (bands.coefficients / pot.periods).ravel()
        self._energies = np.repeat(bands.energies[:, 0], nk)

        raw = self._series(self._amplitudes, 0)
        self._scale = 1.0 / np.sqrt(self.step * np.sum(raw ** 2))
        self.values = raw * self._scale

    def _series(self, amplitudes, site):
        phases = np.outer(self.x - site, self._wavenumbers)
        return np.cos(phases) @ amplitudes

    def at_site(self, site):
        """w(x - site) on the grid."""
        if site == self.center:
            return self.values
        return self._series(self._amplitudes, site) * self._scale

    def hamiltonian_at_site(self, site):
        """(h_A w)(x - site): every Bloch component is an eigenfunction of h_A."""
        return self._series(self._amplitudes * self._energies, site) * self._scale

    def inner(self, i, j):
        return float(self.step * np.dot(self.at_site(i), self.at_site(j)))


def build_wannier(bands):
    gap = band_gap(bands.potential)
    if gap < GAP_TOLERANCE:
        raise WannierError(
            "Lowest band is not isolated at V0=%r (gap %.3g E_r); refusing to build a Wannier orbital"
            % (bands.potential.depth, gap)
        )
    w = WannierFunction(bands)
    if w.values[len(w.x) // 2] <= 0:
        raise WannierError("Real-gauge Wannier orbital is not positive at its centre")
    return w


def mode_overlap(w, l, m, i, j, stride=1):
    """J^{lm}_{ij} = int w(x - i) u_l(x) u_m(x) w(x - j) dx by periodic quadrature."""
    x = w.x[::stride]
    profile = MODES[l](x) * MODES[m](x)
    return float(w.step * stride * np.sum(w.at_site(i)[::stride] * profile * w.at_site(j)[::stride]))


def _quadrature(w, stride):
    x = w.x[::stride]
    h = w.step * stride
    w0 = w.at_site(0)[::stride]
    w1 = w.at_site(1)[::stride]
    hw0 = w.hamiltonian_at_site(0)[::stride]
    hw1 = w.hamiltonian_at_site(1)[::stride]
    sin = MODES[1](x)
    cos = MODES[2](x)
    pair = w0 * w1
    return {
        "j_cl_onsite": h * np.sum(w0 * hw0),
        "j_cl_hop": -h * 0.5 * (np.sum(w0 * hw1) + np.sum(w1 * hw0)),
        "u_int": h * np.sum(w0 ** 4),
        "j00_onsite": h * np.sum(w0 ** 2),
        "j11_onsite": h * np.sum(w0 ** 2 * sin ** 2),
        "j11_hop": h * np.sum(pair * sin ** 2),
        "j20": h * np.sum(w0 ** 2 * cos),
        "j20_hop": h * np.sum(pair * cos),
        "j12_onsite": h * np.sum(w0 ** 2 * sin * cos),
        "j12_hop": h * np.sum(pair * sin * cos),
    }


def compute_overlaps(w, pot, interaction_scale=1.0):
    fine = _quadrature(w, 1)
    coarse = _quadrature(w, 2)
    failed = [
        key
        for key, value in fine.items()
        if abs(value - coarse[key]) > QUADRATURE_RTOL * abs(value) + QUADRATURE_ATOL
    ]
    if failed:
        raise OverlapQuadratureError(
            "Quadrature not self-consistent for %s on a grid of %d points over %d periods; "
            "refine the grid" % (", ".join(failed), pot.grid_points, pot.periods)
        )
    table = OverlapTable(
        depth=float(pot.depth), interaction_scale=float(interaction_scale), **{k: float(v) for k, v in fine.items()}
    )
    logger.info(
        "Overlaps for V0=%r: J=%.6g E_r, J11=(%.6g, %.6g), J20=%.6g"
        % (pot.depth, table.j_cl_hop, table.j11_onsite, table.j11_hop, table.j20)
    )
    return table


_overlap_cache = LRU(16)


def overlaps_for(depth=DEFAULT_DEPTH, cutoff=DEFAULT_CUTOFF, grid_points=DEFAULT_GRID_POINTS, periods=DEFAULT_PERIODS):
    key = (repr(float(depth)), cutoff, grid_points, periods)
    if key not in _overlap_cache:
        pot = LatticePotential(float(depth), cutoff, grid_points, periods)
        _overlap_cache[key] = compute_overlaps(build_wannier(solve_bands(pot)), pot)
    return _overlap_cache[key]


def render_overlap_table(table):
    return KeyValueRenderer().render(
        table.as_dict(), renderer_context={"comments": MODE_LABELS}
    )


def write_overlap_table(table, path):
    with open(path, "wb") as fh:
        fh.write(render_overlap_table(table))
    logger.info("Wrote overlap table to %s" % path)


def read_overlap_table(path):
    from .serializers import OverlapTableSerializer

    with open(path, "rb") as fh:
        data = KeyValueParser().parse(fh)
    ser = OverlapTableSerializer(data=data)
    ser.is_valid(raise_exception=True)
    return ser.save()
