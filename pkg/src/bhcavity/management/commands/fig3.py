from ...sweep import run_fig3
from ._base import SweepCommand


class Command(SweepCommand):
    help = "Sweep J/U and record the mean work |W|/dJ of an instantaneous quench J -> J + dJ"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--dj", type=float, help="Quench step dJ in units of U")

    def handle(self, *args, **options):
        cfg = self.build_config(options, dj=options.get("dj"))
        self.report(self.run(run_fig3, cfg))
