from ...constants import FIT_RANGE
from ...exceptions import FitError
from ...sweep import read_csv
from ._base import StageCommand


class Command(StageCommand):
    help = "Fit d = c (J/U)^k on log-log axes to a fig2 CSV"

    def add_arguments(self, parser):
        parser.add_argument("csv", help="CSV written by the fig2 command")
        parser.add_argument("--range", dest="fit_range", default="%s:%s" % FIT_RANGE, help="J/U window as `low:high`")
        parser.add_argument("--column", default="d", help="Column to fit against j_over_u")

    def handle(self, *args, **options):
        from ...fitting import fit_power_law

        try:
            low, high = (float(v) for v in options["fit_range"].split(":"))
        except ValueError:
            self.fail("config", "--range must look like `low:high`, got %r" % options["fit_range"])
        try:
            frame, _ = read_csv(options["csv"])
            points = frame[["j_over_u", options["column"]]].values
        except (OSError, KeyError) as e:
            self.fail("read", e)
        try:
            fit = fit_power_law(points, (low, high))
        except FitError as e:
            self.fail("fit", e)
        self.stdout.write("exponent = %r" % fit.exponent)
        self.stdout.write("prefactor = %r" % fit.prefactor)
        self.stdout.write("fit_range = %r,%r" % fit.fit_range)
        self.stdout.write("residual = %r" % fit.residual)
        if fit.excluded:
            self.stdout.write("excluded = %s" % ",".join(repr(x) for x in fit.excluded))
