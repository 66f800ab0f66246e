import io
import json
import logging

from django.core.management.base import BaseCommand, CommandError

from correlation_lab.correlation_models import MODEL_KINDS
from correlation_lab.exceptions import DomainError
from correlation_lab.experiments import build_report
from correlation_lab.exports import OUTPUT_FORMATS, XLSX, write_report
from correlation_lab.forms import RunConfigForm
from correlation_lab.samplers import write_trials_csv, write_trials_json

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
DOMAIN_ERROR = 3
IO_ERROR = 4


def _plain(message):
    return message


class ExperimentCommand(BaseCommand):
    """
    Shared plumbing of the experiment commands.

    Options come from an optional JSON file and the flags, flags winning;
    RunConfigForm validates the merge. Data goes to --out or stdout, the
    summary to stdout when --out is set and to stderr otherwise.
    """
    command_name = None

    def add_arguments(self, parser):
        parser.add_argument('--config', help='JSON file with run options; flags override it')
        parser.add_argument('--model', choices=[kind for kind, _ in MODEL_KINDS])
        parser.add_argument('--j', help='Spin quantum number, e.g. 1/2')
        parser.add_argument('--eta', type=float, help='Noise level in [0, 1]')
        parser.add_argument('--base', choices=[kind for kind, _ in MODEL_KINDS],
                            help='Base model of the noisy model')
        parser.add_argument('--angles', help='Polar angles a_p,a,b,b_p in radians')
        parser.add_argument('--trials', type=int, help='Number of Monte Carlo trials')
        parser.add_argument('--seed', type=int)
        parser.add_argument('--stream', type=int, help='Independent substream of the seed')
        parser.add_argument('--format', choices=[fmt for fmt, _ in OUTPUT_FORMATS])
        parser.add_argument('--out', help='Output file; stdout when omitted')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        config = self.load_config(options)
        try:
            report = build_report(config)
        except DomainError as exc:
            logger.error(f'{self.command_name} failed: {exc}', exc_info=True)
            raise CommandError(str(exc), returncode=DOMAIN_ERROR)
        self.emit(report, config)

    def load_config(self, options):
        data = {}
        if options.get('config'):
            try:
                with open(options['config'], encoding='utf-8') as handle:
                    data = json.load(handle)
            except OSError as exc:
                raise CommandError(f'Cannot read {options["config"]}: {exc}', returncode=IO_ERROR)
            except json.JSONDecodeError as exc:
                raise CommandError(f'{options["config"]} is not valid JSON: {exc}',
                                   returncode=USAGE_ERROR)
            if not isinstance(data, dict):
                raise CommandError('The config file must hold a JSON object', returncode=USAGE_ERROR)
            # lists such as angles travel as the comma form the flags use
            data = {
                key: ','.join(str(v) for v in value) if isinstance(value, list) else value
                for key, value in data.items()
            }

        for name in RunConfigForm.base_fields:
            if options.get(name) is not None:
                data[name] = options[name]

        form = RunConfigForm(data)
        if not form.is_valid():
            problems = '; '.join(
                f'{field}: {" ".join(errors)}' for field, errors in form.errors.items()
            )
            raise CommandError(problems, returncode=USAGE_ERROR)
        try:
            config = form.to_run_config(self.command_name)
        except DomainError as exc:
            raise CommandError(str(exc), returncode=DOMAIN_ERROR)
        if config.output_format == XLSX and not config.out:
            raise CommandError('XLSX output needs --out', returncode=USAGE_ERROR)
        return config

    def emit(self, report, config):
        if config.trials_out and report.records is None:
            raise CommandError(f'{self.command_name} produced no trial records for --trials-out',
                               returncode=USAGE_ERROR)
        try:
            if config.output_format == XLSX:
                write_report(report, XLSX, path=config.out)
            elif config.out:
                with open(config.out, 'w', encoding='utf-8', newline='') as handle:
                    write_report(report, config.output_format, stream=handle)
            else:
                buffer = io.StringIO()
                write_report(report, config.output_format, stream=buffer)
                self.stdout.write(buffer.getvalue(), ending='')
            if config.trials_out:
                self.write_trials(report.records, config.trials_out)
        except OSError as exc:
            raise CommandError(f'Cannot write {exc.filename or config.out}: {exc}', returncode=IO_ERROR)

        target = self.stdout if config.out else self.stderr
        for key, value in report.summary.items():
            if isinstance(value, (dict, list)):
                value = json.dumps(value)
            target.write(f'{key}: {value}', style_func=_plain)
        if config.out:
            target.write(self.style.SUCCESS(f'✅ {self.command_name} written to {config.out}'))

    def write_trials(self, records, path):
        writer = write_trials_json if path.lower().endswith('.json') else write_trials_csv
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            writer(records, handle)
        logger.info(f'Wrote {len(records)} trial records to {path}')
