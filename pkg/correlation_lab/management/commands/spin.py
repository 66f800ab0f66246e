from correlation_lab.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Compare the spin-j singlet correlation by matrix contraction with its closed form."
    command_name = 'spin'

    def add_command_arguments(self, parser):
        parser.add_argument('--points', type=int, help='Number of theta values on [0, pi]')
