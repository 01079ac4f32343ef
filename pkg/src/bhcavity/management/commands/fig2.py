from ...sweep import run_fig2
from ._base import SweepCommand


class Command(SweepCommand):
    help = "Sweep J/U and compare the exact ground-state energy with the cavity estimate G"

    def handle(self, *args, **options):
        cfg = self.build_config(options)
        self.report(self.run(run_fig2, cfg))
