from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError
from ...estimator import CavityParams
from ...exceptions import BHCavityError, StageError, SweepPointError
from ...formats.keyvalue import KeyValueParser
from ...serializers import make_sweep_config
import logging

VERBOSITY_LEVELS = {0: logging.WARNING, 1: logging.INFO}

SWEEP_FLAGS = (
    ("m", int),
    ("n", int),
    ("j_over_u", str),
    ("backend", str),
    ("chi_max", int),
    ("max_sweeps", int),
    ("n_error", float),
    ("out", str),
    ("overlaps", str),
    ("depth", float),
    ("workers", int),
)


def read_run_config(path):
    with open(path, "rb") as fh:
        return KeyValueParser().parse(fh)


class StageCommand(BaseCommand):
    """Base for commands that report failures by pipeline stage."""

    def execute(self, *args, **options):
        level = VERBOSITY_LEVELS.get(options.get("verbosity", 1), logging.DEBUG)
        logging.getLogger("bhcavity").setLevel(level)
        return super().execute(*args, **options)

    def fail(self, stage, error):
        raise CommandError('Stage "%s" failed: %s' % (stage, error))


class SweepCommand(StageCommand):
    def add_arguments(self, parser):
        parser.add_argument("--config", help="Flat `key = value` run-config file; flags override it")
        parser.add_argument("--m", type=int, help="Number of lattice sites M")
        parser.add_argument("--n", type=int, help="Number of bosons N")
        parser.add_argument("--j-over-u", dest="j_over_u", help="`start:stop:count` (log spaced) or a comma separated list")
        parser.add_argument("--backend", help="Solver backend, `exact` or `mps`")
        parser.add_argument("--chi-max", dest="chi_max", type=int, help="Maximum MPS bond dimension")
        parser.add_argument("--max-sweeps", dest="max_sweeps", type=int, help="DMRG sweep limit")
        parser.add_argument("--n-error", dest="n_error", type=float, help="Relative error of the particle-number estimate")
        parser.add_argument("--out", help="Output directory")
        parser.add_argument("--overlaps", help="Overlap-table file to use instead of computing one")
        parser.add_argument("--depth", type=float, help="Lattice depth V0 in recoil energies")
        parser.add_argument("--workers", type=int, help="Worker processes for independent J/U points")

    def build_config(self, options, **extra):
        data = {}
        if options.get("config"):
            try:
                data = read_run_config(options["config"])
            except OSError as e:
                self.fail("config", e)
        for name, _ in SWEEP_FLAGS:
            if options.get(name) is not None:
                data[name] = options[name]
        data.update({k: v for k, v in extra.items() if v is not None})
        cavity = {k: data.pop(k) for k in list(data) if k in CavityParams._fields}
        if cavity:
            data["cavity"] = cavity
        try:
            return make_sweep_config(**data)
        except ValidationError as e:
            self.fail("config", e.detail)

    def run(self, func, *args):
        try:
            return func(*args)
        except (SweepPointError, StageError) as e:
            raise CommandError(str(e))
        except BHCavityError as e:
            self.fail(func.__name__, e)

    def report(self, result):
        self.stdout.write("Wrote %s" % result.csv_path)
        if result.plot_path:
            self.stdout.write("Wrote %s" % result.plot_path)
