"""J/U sweeps behind the energy-estimator and quench-work figures.

Each point is solved independently (optionally in a process pool), results are gathered in
input order and written by a single writer, so identical configs give byte-identical CSVs.
"""
from collections import namedtuple
from io import BytesIO
from multiprocessing import Pool
from django.conf import settings as django_settings
from .backend import solve_ground_state
from .constants import BACKEND_MPS, DEFAULT_GRID, FIG2_COLUMNS, FIG3_COLUMNS
from .estimator import coefficients, estimate_from_observables, quad1_readout, tunnelling_from_quad1
from .exceptions import StageError, SweepPointError
from .formats.keyvalue import KeyValueParser, KeyValueRenderer
from .model import quench_work
from .optics import overlaps_for, read_overlap_table
from . import settings
import django
import logging
import os
import pandas as pd

logger = logging.getLogger(__name__)


SweepConfig = namedtuple(
    "SweepConfig",
    [
        "m",
        "n",
        "j_over_u",
        "backend",
        "chi_max",
        "max_sweeps",
        "n_error",
        "dj",
        "out",
        "overlaps",
        "depth",
        "workers",
        "cavity",
    ],
)

SweepResult = namedtuple("SweepResult", ["frame", "csv_path", "plot_path"])


def load_overlaps(cfg):
    if cfg.overlaps:
        try:
            return read_overlap_table(cfg.overlaps)
        except OSError as e:
            raise StageError("read", e)
    return overlaps_for(depth=cfg.depth)


def solver_options(cfg):
    if cfg.backend != BACKEND_MPS:
        return {}
    options = {"chi_max": cfg.chi_max, "max_sweeps": cfg.max_sweeps}
    return {k: v for k, v in options.items() if v is not None}


def _make_spec(cfg, j_over_u):
    from .serializers import make_lattice_spec

    # Energies in units of U.
    return make_lattice_spec(M=cfg.m, N=cfg.n, J=j_over_u, U=1.0)


def _solve(cfg, j_over_u):
    stage = "spec"
    try:
        spec = _make_spec(cfg, j_over_u)
        stage = "solve"
        state = solve_ground_state(spec, cfg.backend, **solver_options(cfg))
        stage = "measure"
        return spec, state.measure()
    except Exception as e:
        raise SweepPointError(stage, j_over_u, e)


def fig2_point(task):
    cfg, ov, j_over_u = task
    spec, obs = _solve(cfg, j_over_u)
    try:
        report = estimate_from_observables(cfg.cavity, ov, spec, obs, n_error=cfg.n_error)
    except Exception as e:
        raise SweepPointError("estimate", j_over_u, e)
    N = float(spec.N)
    logger.info(
        "J/U=%r: E/N=%.10g, G/N=%.10g, d=%.3g" % (j_over_u, obs.energy / N, report.g_estimate / N, report.discrepancy)
    )
    return [
        j_over_u,
        obs.energy / N,
        report.g_estimate / N,
        report.discrepancy,
        report.band[0] / N,
        report.band[1] / N,
    ]


def fig3_point(task):
    cfg, ov, j_over_u = task
    spec, obs = _solve(cfg, j_over_u)
    try:
        coef = coefficients(cfg.cavity, ov, spec, spec.N).check()
        measured_b = tunnelling_from_quad1(coef, quad1_readout(coef, obs), spec.N)
        work = quench_work(spec, obs._replace(b_mean=measured_b), cfg.dj)
    except Exception as e:
        raise SweepPointError("quench", j_over_u, e)
    logger.info("J/U=%r: <B>=%.10g, |W|/dJ=%.10g" % (j_over_u, obs.b_mean, abs(work) / cfg.dj))
    return [j_over_u, obs.b_mean, abs(work) / cfg.dj]


def _init_worker(bhcavity_settings):
    if not django_settings.configured:
        django_settings.configure(BHCAVITY=bhcavity_settings, INSTALLED_APPS=["bhcavity.config.BHCavityConfig"])
        django.setup()


def run_points(func, cfg, ov):
    tasks = [(cfg, ov, j) for j in cfg.j_over_u]
    if cfg.workers <= 1:
        return [func(task) for task in tasks]
    with Pool(cfg.workers, initializer=_init_worker, initargs=(dict(django_settings.BHCAVITY),)) as pool:
        return list(pool.imap(func, tasks))


def provenance(cfg, ov, **extra):
    """Fully resolved run configuration, flattened for the CSV header."""
    meta = {
        "m": cfg.m,
        "n": cfg.n,
        "j_over_u": list(cfg.j_over_u),
        "default_grid": DEFAULT_GRID,
        "backend": cfg.backend,
        "n_error": cfg.n_error,
        "n_error_applies_to": "alpha,e0,chi1_subtraction",
        "depth": ov.depth,
        "overlaps": cfg.overlaps or "computed",
        "energy_unit": "U",
    }
    if cfg.backend == BACKEND_MPS:
        meta["chi_max"] = cfg.chi_max or settings.get_chi_max(cfg.m)
        meta["max_sweeps"] = cfg.max_sweeps or settings.get("DMRG_MAX_SWEEPS", 40)
        meta["energy_tol"] = settings.get("DMRG_ENERGY_TOL", 1e-9)
        meta["truncation_tol"] = settings.get("DMRG_TRUNCATION_TOL", 1e-10)
    for key, value in cfg.cavity._asdict().items():
        meta["cavity_%s" % key] = value
    for key, value in ov.as_dict().items():
        meta["overlap_%s" % key] = value
    meta.update(extra)
    return meta


def write_csv(frame, path, metadata=None):
    digits = settings.get("CSV_SIGNIFICANT_DIGITS", 12)
    header = KeyValueRenderer().render({k: metadata[k] for k in sorted(metadata or {})})
    with open(path, "w", newline="") as fh:
        for line in header.decode("utf-8").splitlines():
            fh.write("# %s\n" % line)
        frame.to_csv(fh, index=False, float_format="%%.%dg" % digits, lineterminator="\n")
    logger.info("Wrote %d rows to %s" % (len(frame), path))


def read_csv(path):
    """Return ``(frame, metadata)``; metadata values come back as strings."""
    with open(path, "rb") as fh:
        raw = fh.read()
    comments = b"\n".join(
        line[1:].strip() for line in raw.splitlines() if line.startswith(b"#")
    )
    metadata = KeyValueParser().parse(BytesIO(comments))
    frame = pd.read_csv(BytesIO(raw), comment="#")
    return frame, metadata


def _write_outputs(cfg, name, frame, metadata, plotter, plot):
    stem = os.path.join(cfg.out, "%s_M%d_N%d_%s" % (name, cfg.m, cfg.n, cfg.backend))
    csv_path, svg_path = stem + ".csv", stem + ".svg"
    try:
        os.makedirs(cfg.out, exist_ok=True)
        write_csv(frame, csv_path, metadata)
        if plot:
            plotter(csv_path, svg_path)
    except OSError as e:
        raise StageError("write", e)
    return SweepResult(frame, csv_path, svg_path if plot else None)


def run_fig2(cfg, plot=True):
    from .plotting import plot_fig2

    ov = load_overlaps(cfg)
    rows = run_points(fig2_point, cfg, ov)
    frame = pd.DataFrame(rows, columns=FIG2_COLUMNS)
    return _write_outputs(cfg, "fig2", frame, provenance(cfg, ov), plot_fig2, plot)


def run_fig3(cfg, dj=None, plot=True):
    from .plotting import plot_fig3

    if dj is not None:
        cfg = cfg._replace(dj=dj)
    if cfg.dj <= 0:
        raise ValueError("The quench step dJ must be positive, got %r" % cfg.dj)
    ov = load_overlaps(cfg)
    rows = run_points(fig3_point, cfg, ov)
    frame = pd.DataFrame(rows, columns=FIG3_COLUMNS)
    return _write_outputs(cfg, "fig3", frame, provenance(cfg, ov, dj=cfg.dj), plot_fig3, plot)


__all__ = [
    "SweepConfig",
    "SweepResult",
    "run_fig2",
    "run_fig3",
    "write_csv",
    "read_csv",
]
