from rest_framework.exceptions import ValidationError
from ...constants import DEFAULT_CUTOFF, DEFAULT_DEPTH, DEFAULT_GRID_POINTS, DEFAULT_PERIODS
from ...exceptions import BHCavityError
from ...optics import build_wannier, compute_overlaps, render_overlap_table, solve_bands, write_overlap_table
from ...serializers import make_potential
from ._base import StageCommand


class Command(StageCommand):
    help = "Compute the Wannier overlap table for a sin^2 lattice and the two cavity modes"

    def add_arguments(self, parser):
        parser.add_argument("--v0", type=float, default=DEFAULT_DEPTH, help="Lattice depth in recoil energies")
        parser.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF, help="Plane-wave cutoff K")
        parser.add_argument("--grid", type=int, default=DEFAULT_GRID_POINTS, help="Quadrature grid points")
        parser.add_argument("--periods", type=int, default=DEFAULT_PERIODS, help="Lattice periods spanned by the grid")
        parser.add_argument(
            "--interaction-scale",
            type=float,
            default=1.0,
            help="Prefactor 4 pi hbar^2 a_s / m multiplying the shape factor u_int",
        )
        parser.add_argument("--out", help="Output file; the table is printed when omitted")

    def handle(self, *args, **options):
        try:
            pot = make_potential(
                depth=options["v0"], cutoff=options["cutoff"], grid_points=options["grid"], periods=options["periods"]
            )
        except ValidationError as e:
            self.fail("config", e.detail)

        stage = "bands"
        try:
            bands = solve_bands(pot)
            stage = "wannier"
            w = build_wannier(bands)
            stage = "overlaps"
            table = compute_overlaps(w, pot, interaction_scale=options["interaction_scale"])
        except BHCavityError as e:
            self.fail(stage, e)

        if options.get("out"):
            try:
                write_overlap_table(table, options["out"])
            except OSError as e:
                self.fail("write", e)
            self.stdout.write("Wrote %s" % options["out"])
        else:
            self.stdout.write(render_overlap_table(table).decode("utf-8"), ending="")
