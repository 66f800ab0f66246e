from correlation_lab.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Scan the setting of B and check that the marginals of A do not move."
    command_name = 'signalling'

    def add_command_arguments(self, parser):
        parser.add_argument('--grid', help='Offsets of B from a_p in radians, comma separated')
        parser.add_argument('--sigma', type=float, help='Acceptance band in standard errors')
