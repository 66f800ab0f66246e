"""
Report builders behind the management commands and the JSON API.

Each builder takes a RunConfig and returns a Report: a summary mapping
plus named tables, ready for the writers in ``exports``.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from .correlation_models import (
    NOISY, STRONG, CorrelationModel, eval_classical, eval_quantum, eval_strong, parse_spin,
)
from .exceptions import DomainError, InconsistentListsError
from .list_experiment import (
    LOCAL_BOUND, QUANTUM_BOUND, FourLists, chsh, check_count_inequality,
    estimate_model_expectation, facet_criterion, facet_values, lhv_feasibility,
    run_four_list_experiment,
)
from .samplers import CHSH_ANGLES, DIRECTION_LABELS, SeededGenerator, chsh_setting_pairs, run_series
from .signalling import marginal_scan, no_signalling_holds, sequence_relation
from .spin_singlet import J_MAX, build_operators, build_singlet, spin_table, sum_m_squared

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved options of one run."""
    command: str
    model: CorrelationModel
    angles: dict = field(default_factory=lambda: dict(CHSH_ANGLES))
    n_trials: int = 100000
    seed: int = 0
    stream: int = 0
    output_format: str = 'csv'
    out: str = None
    trials_out: str = None
    points: int = 181
    j: object = None
    tolerance: float = 1e-9
    correlations: tuple = None
    grid: tuple = None
    sigma: float = 4.0

    def generator(self):
        return SeededGenerator(self.seed, self.stream)

    def as_dict(self):
        return {
            'command': self.command,
            'model': self.model.label,
            'angles': dict(self.angles),
            'trials': self.n_trials,
            'seed': self.seed,
            'stream': self.stream,
        }


@dataclass(frozen=True)
class Table:
    name: str
    columns: list
    rows: list


@dataclass
class Report:
    command: str
    config: dict
    summary: dict = field(default_factory=dict)
    tables: list = field(default_factory=list)
    # per-trial records of Monte Carlo runs; not part of the serialized report
    records: object = None

    def add_table(self, name, columns, rows):
        self.tables.append(Table(name, list(columns), rows))

    def as_dict(self):
        return {
            'command': self.command,
            'config': self.config,
            'summary': self.summary,
            'tables': {
                table.name: {'columns': table.columns, 'rows': table.rows} for table in self.tables
            },
        }


def theta_grid(points):
    """points nodes on [0, pi]; pi/2 is exact whenever points is odd."""
    if points < 2:
        raise DomainError('A theta grid needs at least two points')
    return [math.pi * (k / (points - 1)) for k in range(points)]


def analytic_quadruple(model, angles):
    pairs = chsh_setting_pairs(angles)
    return pairs, [model.evaluate(pair.angle) for pair in pairs]


# ========================
# CURVES
# ========================

def build_curves(config):
    eta = config.model.eta if config.model.kind == NOISY else None
    columns = ['theta', 'E_classical', 'E_quantum', 'E_strong']
    if eta is not None:
        columns.append('E_weak')
    rows = []
    for theta in theta_grid(config.points):
        row = [theta, eval_classical(theta), eval_quantum(theta), eval_strong(theta)]
        if eta is not None:
            row.append(config.model.evaluate(theta))
        rows.append(row)

    report = Report('curves', config.as_dict())
    report.summary = {'points': config.points, 'noise': eta}
    report.add_table('curves', columns, rows)
    return report


# ========================
# CHSH
# ========================

def build_chsh(config):
    model = config.model
    pairs, analytic = analytic_quadruple(model, config.angles)
    analytic_score = chsh(*analytic)

    series = run_series(model, pairs, config.n_trials, config.generator())
    rows = []
    estimates = []
    errors = []
    for pair, expected in zip(pairs, analytic):
        a, b = series.pair_outcomes(pair.label)
        value, se = estimate_model_expectation(model, a, b, pair.angle)
        estimates.append(value)
        errors.append(se)
        rows.append([pair.label, pair.angle.theta, expected, value, se])
    estimated_score = chsh(*estimates)
    combined_se = math.sqrt(sum(se * se for se in errors))

    verdict = lhv_feasibility(*analytic, tolerance=config.tolerance)
    report = Report('chsh', config.as_dict())
    report.summary = {
        'model': model.label,
        's_analytic': analytic_score.s,
        'abs_s_analytic': analytic_score.magnitude,
        's_estimate': estimated_score.s,
        'standard_error': combined_se,
        'within_sigma': abs(estimated_score.s - analytic_score.s) <= config.sigma * combined_se,
        'local_bound': LOCAL_BOUND,
        'quantum_bound': QUANTUM_BOUND,
        'feasible': verdict.feasible,
        'violated_facet': _facet_summary(verdict),
    }
    report.records = series
    report.add_table('pairs', ['setting_label', 'theta', 'E_analytic', 'E_estimate', 'standard_error'], rows)
    return report


def _facet_summary(verdict):
    if verdict.violated_facet is None:
        return None
    signs, value = verdict.violated_facet
    return {'signs': list(signs), 'value': value}


# ========================
# SPIN
# ========================

def build_spin(config):
    if config.j is None:
        raise DomainError('The spin command needs --j')
    j_max = _j_max()
    rows = spin_table(config.j, theta_grid(config.points), j_max)
    direct, closed = sum_m_squared(config.j)
    ops = build_operators(config.j, j_max)
    singlet = build_singlet(config.j, j_max)

    report = Report('spin', config.as_dict())
    report.summary = {
        'j': str(config.j),
        'max_deviation': max(row[4] for row in rows),
        'sum_m_squared': str(direct),
        'sum_m_squared_closed_form': str(closed),
        'singlet_norm': singlet.norm,
        'total_j_squared_residual': singlet.total_j_squared_norm(ops),
    }
    report.add_table('spin', ['theta', 'C_matrix', 'C_closed_form', 'E_normalized', 'deviation'], rows)
    return report


def _j_max():
    return parse_spin(settings.CORRELATION_LAB.get('J_MAX', J_MAX))


# ========================
# FOUR LISTS
# ========================

def build_fourlists(config):
    model = config.model
    if model.is_local:
        return _genuine_lists(config)
    if model.kind == STRONG:
        return _contradiction(config)
    raise InconsistentListsError(
        f'{model.label} is sampled as a joint box: each setting pair comes from separate '
        'experiments, so no four lists with one consistent quadruple of outcomes per '
        'experiment exist. Use the strong model for the contradiction or the chsh command.'
    )


def _genuine_lists(config):
    series = run_series(config.model, chsh_setting_pairs(config.angles), config.n_trials,
                        config.generator())
    lists = FourLists.from_records(series)
    counts, score = run_four_list_experiment(series)
    inequality = check_count_inequality(counts)
    se = math.sqrt(4.0 / counts.n_trials)

    report = Report('fourlists', config.as_dict())
    report.summary = {
        'path': 'lists',
        'counts': counts.as_dict(),
        'count_inequality': inequality.as_dict(),
        'expectations': list(counts.expectations()),
        's': score.s,
        'within_local_bound': score.magnitude <= LOCAL_BOUND + config.sigma * se,
    }
    report.records = series
    report.add_table('lists', ['trial_index', *('r_' + label for label in DIRECTION_LABELS)],
                     lists.rows())
    return report


def _contradiction(config):
    _, analytic = analytic_quadruple(config.model, config.angles)
    verdict = lhv_feasibility(*analytic, tolerance=config.tolerance)
    n = config.n_trials
    rows = []
    for label, e in zip(('ap_b', 'a_b', 'a_bp', 'ap_bp'), analytic):
        # equal signs u = N P=, different signs n = N - u
        u = round(n * (1.0 + e) / 2.0)
        rows.append([label, e, u, n - u])

    report = Report('fourlists', config.as_dict())
    report.summary = {
        'path': 'contradiction',
        'feasible': verdict.feasible,
        'distance': verdict.distance,
        'violated_facet': _facet_summary(verdict),
    }
    report.add_table('implied_counts', ['pair', 'E', 'u', 'n'], rows)
    return report


# ========================
# SIGNALLING
# ========================

def default_grid():
    return tuple(math.pi * k / 4 for k in range(5))


def build_signalling(config):
    model = config.model
    grid = config.grid or default_grid()
    alpha = config.angles['a_p']
    reports = marginal_scan(model, alpha, [alpha + g for g in grid], config.n_trials,
                            config.generator(), workers=_workers())
    relations = {
        label: sequence_relation(model, theta, min(config.n_trials, 10000), config.generator().child(900 + k))
        for k, (label, theta) in enumerate((('pi/4', math.pi / 4), ('3pi/4', 3 * math.pi / 4)))
    }

    report = Report('signalling', config.as_dict())
    report.summary = {
        'model': model.label,
        'no_signalling': no_signalling_holds(reports, config.sigma),
        'max_abs_mean_a': max(abs(r.empirical_mean_a) for r in reports),
        'standard_error': reports[0].standard_error,
        'sequence_relation': relations,
    }
    report.add_table(
        'marginals',
        ['setting_label', 'beta', 'mean_a', 'mean_b', 'correlation', 'standard_error'],
        [[r.setting_label, alpha + g, r.empirical_mean_a, r.empirical_mean_b, r.correlation,
          r.standard_error] for r, g in zip(reports, grid)],
    )
    return report


def _workers():
    return settings.CORRELATION_LAB.get('SIGNALLING_WORKERS', 1)


# ========================
# FEASIBILITY
# ========================

def build_feasibility(config):
    if config.correlations is not None:
        correlations = list(config.correlations)
    else:
        _, correlations = analytic_quadruple(config.model, config.angles)
    verdict = lhv_feasibility(*correlations, tolerance=config.tolerance)

    report = Report('feasibility', config.as_dict())
    report.summary = {
        **verdict.as_dict(),
        'facet_criterion': facet_criterion(correlations, config.tolerance),
    }
    report.add_table('facets', ['signs', 'value'],
                     [[' '.join(f'{s:+d}' for s in signs), value]
                      for signs, value in facet_values(correlations)])
    return report


BUILDERS = {
    'curves': build_curves,
    'chsh': build_chsh,
    'spin': build_spin,
    'fourlists': build_fourlists,
    'signalling': build_signalling,
    'feasibility': build_feasibility,
}


def build_report(config):
    try:
        builder = BUILDERS[config.command]
    except KeyError:
        raise DomainError(f'Unknown command {config.command!r}')
    logger.info(f'Building {config.command} report for {config.model.label}')
    report = builder(config)
    _to_builtin(report)
    return report


def _builtin(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {key: _builtin(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_builtin(item) for item in value]
    return value


def _to_builtin(report):
    """Replace numpy values so every writer sees plain Python values."""
    report.summary = _builtin(report.summary)
    for table in report.tables:
        for row in table.rows:
            for i, value in enumerate(row):
                row[i] = _builtin(value)
