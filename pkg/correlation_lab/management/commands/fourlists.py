from correlation_lab.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = (
        "Run the four-list experiment: genuine lists for local models, "
        "the infeasibility verdict for the strong model."
    )
    command_name = 'fourlists'

    def add_command_arguments(self, parser):
        parser.add_argument('--tolerance', type=float, help='Feasibility tolerance')
        parser.add_argument('--sigma', type=float, help='Acceptance band in standard errors')
        parser.add_argument('--trials-out', help='Write the per-trial records to this .csv or .json file')
