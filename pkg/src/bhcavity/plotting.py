"""SVG figures rendered from sweep CSVs alone, so a plot can always be regenerated from its table."""
from .constants import CRITICAL_J_OVER_U, FIT_RANGE
from .exceptions import FitError
from .fitting import fit_power_law, power_law
from .sweep import read_csv
import logging
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

logger = logging.getLogger(__name__)

# Fixed salt and no timestamp make the SVG bytes reproducible.
matplotlib.rcParams["svg.hashsalt"] = "bhcavity"
SVG_METADATA = {"Date": None}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata=SVG_METADATA)
    plt.close(fig)
    logger.info("Wrote plot %s" % path)
    return path


def plot_fig2(csv_path, out_path):
    frame, meta = read_csv(csv_path)
    x = frame["j_over_u"].values

    fig, (ax_energy, ax_error) = plt.subplots(1, 2, figsize=(10, 4))
    lower = frame["g_per_n"] - frame["band_low"]
    upper = frame["band_high"] - frame["g_per_n"]
    ax_energy.plot(x, frame["e_exact_per_n"], "x", color="black", label="exact")
    ax_energy.errorbar(
        x, frame["g_per_n"], yerr=[lower.values, upper.values], fmt="+", color="tab:red", capsize=2, label="cavity estimate"
    )
    ax_energy.axvline(CRITICAL_J_OVER_U, linestyle="--", color="gray")
    ax_energy.set_xlabel("J/U")
    ax_energy.set_ylabel("E/N (U)")
    ax_energy.legend(loc="lower left")

    positive = (frame["d"] > 0) & (frame["j_over_u"] > 0)
    ax_error.loglog(frame["j_over_u"][positive], frame["d"][positive], "o", markersize=3, color="tab:blue")
    try:
        fit = fit_power_law(frame[["j_over_u", "d"]].values, FIT_RANGE)
    except FitError:
        fit = None
    if fit is not None:
        xs = x[(x >= fit.fit_range[0]) & (x <= fit.fit_range[1])]
        ax_error.loglog(xs, power_law(xs, fit.prefactor, fit.exponent), "-", color="black", label="d ~ (J/U)^%.2f" % fit.exponent)
        ax_error.legend(loc="upper left")
    ax_error.set_xlabel("J/U")
    ax_error.set_ylabel("d (U)")

    fig.suptitle("M=%s, N=%s, backend=%s" % (meta.get("m"), meta.get("n"), meta.get("backend")))
    fig.tight_layout()
    return _save(fig, out_path)


def plot_fig3(csv_path, out_path):
    frame, meta = read_csv(csv_path)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(frame["j_over_u"], frame["abs_work_per_dj"], "o-", markersize=3)
    ax.axvline(CRITICAL_J_OVER_U, linestyle="--", color="gray")
    ax.set_xlabel("J/U")
    ax.set_ylabel("|W| / dJ")
    ax.set_title("M=%s, N=%s" % (meta.get("m"), meta.get("n")))
    fig.tight_layout()
    return _save(fig, out_path)


__all__ = ["plot_fig2", "plot_fig3"]
