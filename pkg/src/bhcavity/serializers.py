"""DRF serializers that validate raw parameter dicts into immutable records.

Every record is built through ``Serializer(data=...).is_valid(raise_exception=True)`` then
``save()``, so bad input always surfaces as ``rest_framework.exceptions.ValidationError``
whether it came from Python, a run-config file or the command line.
"""
from rest_framework import serializers
from .constants import (
    BACKEND_EXACT,
    BACKEND_MPS,
    DEFAULT_CUTOFF,
    DEFAULT_GRID,
    DEFAULT_GRID_POINTS,
    DEFAULT_N_ERROR,
    DEFAULT_PERIODS,
)
from .backend.exact import basis_dimension
from .backend.mps import DmrgConfig
from .estimator import CavityParams
from .model import LatticeSpec, default_cutoff, minimum_cutoff
from .optics import LatticePotential, OverlapTable
from .sweep import SweepConfig
from . import settings
import numpy as np


class RecordSerializer(serializers.Serializer):
    """Base for serializers whose ``save()`` returns a namedtuple record instead of a model."""

    record_class = None

    def create(self, validated_data):
        return self.record_class(**validated_data)

    def update(self, instance, validated_data):
        return instance._replace(**validated_data)


class LatticeSpecSerializer(RecordSerializer):
    record_class = LatticeSpec

    M = serializers.IntegerField(min_value=2)
    N = serializers.IntegerField(min_value=1)
    J = serializers.FloatField(min_value=0.0)
    U = serializers.FloatField()
    n_max = serializers.IntegerField(required=False, allow_null=True, default=None)
    boundary = serializers.ChoiceField(choices=["open"], default="open")

    def validate_U(self, value):
        if value <= 0:
            raise serializers.ValidationError("U must be positive.")
        return value

    def validate(self, data):
        if data.get("n_max") is None:
            data["n_max"] = default_cutoff(data["M"], data["N"])
        floor = minimum_cutoff(data["M"], data["N"])
        if data["n_max"] < floor:
            raise serializers.ValidationError(
                {"n_max": "n_max must be at least ceil(N/M)+2 = %d." % floor}
            )
        return data


class LatticePotentialSerializer(RecordSerializer):
    record_class = LatticePotential

    depth = serializers.FloatField(min_value=0.0)
    cutoff = serializers.IntegerField(min_value=8, default=DEFAULT_CUTOFF)
    grid_points = serializers.IntegerField(min_value=16, default=DEFAULT_GRID_POINTS)
    periods = serializers.IntegerField(min_value=2, default=DEFAULT_PERIODS)

    def validate(self, data):
        # u2 = cos(pi x) has period 2d; the supercell must hold whole periods of it.
        if data["periods"] % 2:
            raise serializers.ValidationError({"periods": "periods must be even."})
        if data["grid_points"] % (2 * data["periods"]):
            raise serializers.ValidationError(
                {"grid_points": "grid_points must be a multiple of 2 * periods."}
            )
        return data


class OverlapTableSerializer(RecordSerializer):
    record_class = OverlapTable

    depth = serializers.FloatField()
    j_cl_onsite = serializers.FloatField()
    j_cl_hop = serializers.FloatField()
    u_int = serializers.FloatField()
    j00_onsite = serializers.FloatField()
    j11_onsite = serializers.FloatField()
    j11_hop = serializers.FloatField()
    j20 = serializers.FloatField()
    j20_hop = serializers.FloatField()
    j12_onsite = serializers.FloatField(default=0.0)
    j12_hop = serializers.FloatField(default=0.0)
    interaction_scale = serializers.FloatField(default=1.0)


class CavityParamsSerializer(RecordSerializer):
    record_class = CavityParams

    # Frequencies in any common unit; the defaults measure everything in units of kappa.
    eta1 = serializers.FloatField(default=1.0)
    delta_c1 = serializers.FloatField(default=5.0)
    g1 = serializers.FloatField(default=1.0)
    delta_a1 = serializers.FloatField(default=20.0)
    omega0 = serializers.FloatField(default=1.0)
    delta_c2 = serializers.FloatField(default=5.0)
    g2 = serializers.FloatField(default=1.0)
    delta_a2 = serializers.FloatField(default=20.0)
    kappa = serializers.FloatField(default=1.0)

    def validate(self, data):
        if data["kappa"] <= 0:
            raise serializers.ValidationError({"kappa": "Cavity decay rate must be positive."})
        for key in ("delta_a1", "delta_a2"):
            if data[key] == 0:
                raise serializers.ValidationError({key: "Atomic detuning must be nonzero."})
        return data


class DmrgConfigSerializer(RecordSerializer):
    record_class = DmrgConfig

    chi_max = serializers.IntegerField(min_value=16)
    max_sweeps = serializers.IntegerField(min_value=1)
    min_sweeps = serializers.IntegerField(min_value=1, default=2)
    energy_tol = serializers.FloatField()
    truncation_tol = serializers.FloatField(min_value=0.0)
    checkpoint = serializers.CharField(required=False, allow_null=True, allow_blank=True, default=None)

    def validate_energy_tol(self, value):
        if value <= 0:
            raise serializers.ValidationError("The energy convergence threshold must be positive.")
        return value


class GridField(serializers.Field):
    """J/U grid: ``"a:b:n"`` for n log-spaced points, or a comma separated list."""

    default_error_messages = {
        "invalid": "Expected `start:stop:count` or a comma separated list of numbers.",
    }

    def to_internal_value(self, data):
        try:
            return parse_grid(data)
        except (TypeError, ValueError):
            self.fail("invalid")

    def to_representation(self, value):
        return ",".join(repr(float(v)) for v in value)


def parse_grid(data):
    if isinstance(data, (list, tuple)):
        return [float(v) for v in data]
    text = str(data).strip()
    if ":" in text:
        start, stop, count = text.split(":")
        return [float(v) for v in np.geomspace(float(start), float(stop), int(count))]
    return [float(v) for v in text.split(",") if v.strip()]


class SweepConfigSerializer(RecordSerializer):
    record_class = SweepConfig

    m = serializers.IntegerField(min_value=2)
    n = serializers.IntegerField(min_value=1)
    j_over_u = GridField(default=lambda: parse_grid(DEFAULT_GRID))
    backend = serializers.ChoiceField(choices=[BACKEND_EXACT, BACKEND_MPS], default=BACKEND_MPS)
    chi_max = serializers.IntegerField(min_value=16, required=False, allow_null=True, default=None)
    max_sweeps = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    n_error = serializers.FloatField(min_value=0.0, max_value=1.0, default=DEFAULT_N_ERROR)
    dj = serializers.FloatField(default=0.01)
    out = serializers.CharField(default="results")
    overlaps = serializers.CharField(required=False, allow_blank=True, default="")
    depth = serializers.FloatField(min_value=0.0, default=10.0)
    workers = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    cavity = CavityParamsSerializer(required=False)

    def validate_j_over_u(self, value):
        if not value:
            raise serializers.ValidationError("At least one J/U value is required.")
        if any(v < 0 for v in value):
            raise serializers.ValidationError("J/U values must be nonnegative.")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise serializers.ValidationError("J/U values must be strictly increasing.")
        return value

    def validate_dj(self, value):
        if value <= 0:
            raise serializers.ValidationError("The quench step dJ must be positive.")
        return value

    def validate(self, data):
        if data["backend"] == BACKEND_EXACT:
            n_max = default_cutoff(data["m"], data["n"])
            dim = basis_dimension(data["m"], data["n"], n_max)
            limit = settings.get("EXACT_BASIS_LIMIT", 2000000)
            if dim > limit:
                raise serializers.ValidationError(
                    {"backend": "Exact basis of dimension %d exceeds the limit of %d." % (dim, limit)}
                )
        cavity = data.get("cavity")
        if cavity is None:
            cavity_ser = CavityParamsSerializer(data={})
            cavity_ser.is_valid(raise_exception=True)
            cavity = cavity_ser.validated_data
        data["cavity"] = CavityParams(**cavity)
        if data["workers"] is None:
            data["workers"] = settings.get("WORKERS", 1)
        return data


def _build(serializer_class, data):
    ser = serializer_class(data=data)
    ser.is_valid(raise_exception=True)
    return ser.save()


def make_lattice_spec(**fields):
    return _build(LatticeSpecSerializer, fields)


def make_potential(**fields):
    return _build(LatticePotentialSerializer, fields)


def make_cavity_params(**fields):
    return _build(CavityParamsSerializer, fields)


def make_dmrg_config(num_sites, **fields):
    data = {
        "chi_max": settings.get_chi_max(num_sites),
        "max_sweeps": settings.get("DMRG_MAX_SWEEPS", 40),
        "energy_tol": settings.get("DMRG_ENERGY_TOL", 1e-9),
        "truncation_tol": settings.get("DMRG_TRUNCATION_TOL", 1e-10),
    }
    data.update({k: v for k, v in fields.items() if v is not None})
    return _build(DmrgConfigSerializer, data)


def make_sweep_config(**fields):
    return _build(SweepConfigSerializer, {k: v for k, v in fields.items() if v is not None})


__all__ = [
    "LatticeSpecSerializer",
    "LatticePotentialSerializer",
    "OverlapTableSerializer",
    "CavityParamsSerializer",
    "DmrgConfigSerializer",
    "SweepConfigSerializer",
    "make_lattice_spec",
    "make_potential",
    "make_cavity_params",
    "make_dmrg_config",
    "make_sweep_config",
    "parse_grid",
]
