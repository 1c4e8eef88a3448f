from pathlib import Path

from experiments.persistence import load_run
from experiments.reports import render_report
from sepbias.commands import LabCommand


class Command(LabCommand):
    help = 'Print the summary table of a persisted run directory.'

    def add_arguments(self, parser):
        parser.add_argument('run', type=Path, help='run directory written by experiment')

    def handle(self, *args, **options):
        self.stdout.write(render_report(load_run(options['run'])), ending='')
