from correlation_lab.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Tabulate the classical, quantum, strong and (with --eta) weak expectation curves on [0, pi]."
    command_name = 'curves'

    def add_command_arguments(self, parser):
        parser.add_argument('--points', type=int, help='Grid size; 181 puts pi/2 on a node')
