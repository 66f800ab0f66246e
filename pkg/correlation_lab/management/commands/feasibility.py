from correlation_lab.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Decide whether a correlation quadruple admits a local hidden-variable model."
    command_name = 'feasibility'

    def add_command_arguments(self, parser):
        parser.add_argument('--correlations',
                            help="E(a',b),E(a,b),E(a,b'),E(a',b'); defaults to the model at --angles")
        parser.add_argument('--tolerance', type=float, help='Feasibility tolerance')
