from django import forms
from django.conf import settings

from .correlation_models import MODEL_KINDS, NOISY, SPIN, CLASSICAL, CorrelationModel, parse_spin
from .exceptions import DomainError
from .experiments import RunConfig
from .exports import CSV, OUTPUT_FORMATS
from .samplers import CHSH_ANGLES, DIRECTION_LABELS
from .spin_singlet import checked_spin


def _float_list(value, field_name):
    if isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [item for item in str(value).split(',') if item.strip()]
    try:
        return [float(item) for item in items]
    except (TypeError, ValueError):
        raise forms.ValidationError(f'{field_name} must be a comma separated list of numbers')


class RunConfigForm(forms.Form):
    """Options shared by every command and API endpoint."""

    model = forms.ChoiceField(choices=MODEL_KINDS, required=False)
    j = forms.CharField(required=False, help_text='Spin quantum number, e.g. 1/2 or 3/2')
    eta = forms.FloatField(required=False, help_text='Noise level of the noisy model')
    base = forms.ChoiceField(choices=MODEL_KINDS, required=False)
    angles = forms.CharField(required=False, help_text="Polar angles a_p,a,b,b_p in radians")
    trials = forms.IntegerField(required=False, min_value=1)
    seed = forms.IntegerField(required=False, min_value=0, max_value=2 ** 64 - 1)
    stream = forms.IntegerField(required=False, min_value=0)
    format = forms.ChoiceField(choices=OUTPUT_FORMATS, required=False)
    out = forms.CharField(required=False)
    trials_out = forms.CharField(required=False, help_text='File for the per-trial records, .csv or .json')
    points = forms.IntegerField(required=False, min_value=2)
    tolerance = forms.FloatField(required=False)
    correlations = forms.CharField(required=False,
                                   help_text="E(a',b),E(a,b),E(a,b'),E(a',b')")
    grid = forms.CharField(required=False, help_text='Offsets of B from a_p in radians')
    sigma = forms.FloatField(required=False, min_value=0)

    def clean_angles(self):
        value = self.cleaned_data.get('angles')
        if not value:
            return None
        values = _float_list(value, 'angles')
        if len(values) != len(DIRECTION_LABELS):
            raise forms.ValidationError('angles needs exactly four values: a_p,a,b,b_p')
        return dict(zip(DIRECTION_LABELS, values))

    def clean_correlations(self):
        value = self.cleaned_data.get('correlations')
        if not value:
            return None
        values = _float_list(value, 'correlations')
        if len(values) != 4:
            raise forms.ValidationError('correlations needs exactly four values')
        return tuple(values)

    def clean_grid(self):
        value = self.cleaned_data.get('grid')
        if not value:
            return None
        values = _float_list(value, 'grid')
        if not values:
            raise forms.ValidationError('grid needs at least one value')
        return tuple(values)

    def to_run_config(self, command):
        """
        Resolve defaults from settings and build the model.

        Raises DomainError for values that parse but make no sense, such
        as a noise level outside [0, 1] or a spin that is not a half-integer.
        """
        lab = settings.CORRELATION_LAB
        data = self.cleaned_data
        kind = data.get('model') or CLASSICAL

        j = None
        if data.get('j'):
            j = checked_spin(data['j'], parse_spin(lab['J_MAX']))
        elif kind == SPIN or (kind == NOISY and data.get('base') == SPIN):
            raise DomainError('The spin model needs j')

        model = CorrelationModel.from_options(kind, j=j, eta=data.get('eta'),
                                           base=data.get('base') or CLASSICAL)
        tolerance = data.get('tolerance')
        if tolerance is None:
            tolerance = lab['FEASIBILITY_TOLERANCE']
        if tolerance < 0:
            raise DomainError(f'Tolerance {tolerance!r} must be non-negative')

        return RunConfig(
            command=command,
            model=model,
            angles=data.get('angles') or dict(CHSH_ANGLES),
            n_trials=data.get('trials') or lab['DEFAULT_TRIALS'],
            seed=lab['DEFAULT_SEED'] if data.get('seed') is None else data['seed'],
            stream=data.get('stream') or 0,
            output_format=data.get('format') or CSV,
            out=data.get('out') or None,
            trials_out=data.get('trials_out') or None,
            points=data.get('points') or lab['CURVE_POINTS'],
            j=j if j is not None else model.j,
            tolerance=tolerance,
            correlations=data.get('correlations'),
            grid=data.get('grid'),
            sigma=lab['SIGNIFICANCE_SIGMA'] if data.get('sigma') is None else data['sigma'],
        )
