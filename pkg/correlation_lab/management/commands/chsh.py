from correlation_lab.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Compute the CHSH combination analytically and by Monte Carlo, with its local-polytope verdict."
    command_name = 'chsh'

    def add_command_arguments(self, parser):
        parser.add_argument('--tolerance', type=float, help='Feasibility tolerance')
        parser.add_argument('--sigma', type=float, help='Acceptance band in standard errors')
        parser.add_argument('--trials-out', help='Write the per-trial records to this .csv or .json file')
