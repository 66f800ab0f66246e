"""
No-signalling checks: one side's marginal statistics must not depend on
the other side's setting, however strongly the pair is correlated.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .correlation_models import theta_value
from .exceptions import DomainError
from .samplers import Setting, SettingPair, run_series

logger = logging.getLogger(__name__)

IDENTICAL = 'identical'
NEGATED = 'negated'
NEITHER = 'neither'


@dataclass(frozen=True)
class MarginalReport:
    setting_label: str
    empirical_mean_a: float
    empirical_mean_b: float
    n_trials: int
    standard_error: float
    correlation: float

    def as_dict(self):
        return asdict(self)


def _as_setting(value, label):
    if isinstance(value, Setting):
        return value
    array = np.asarray(value, dtype=float)
    if array.ndim == 0:
        return Setting(label, float(array))
    if array.shape[0] not in (2, 3) or abs(np.linalg.norm(array) - 1.0) > 1e-9:
        raise DomainError(f'Direction {array.tolist()} is not a planar unit vector')
    return Setting(label, math.atan2(array[1], array[0]))


def _scan_point(model, pair, n_trials, gen):
    series = run_series(model, [pair], n_trials, gen)
    a, b = series.pair_outcomes(pair.label)
    return MarginalReport(
        setting_label=pair.label,
        empirical_mean_a=float(a.mean()),
        empirical_mean_b=float(b.mean()),
        n_trials=n_trials,
        standard_error=1.0 / math.sqrt(n_trials),
        correlation=float(np.dot(a, b)) / n_trials,
    )


def marginal_scan(model, alpha_fixed, beta_grid, n_trials, gen, workers=1):
    """
    Sample each point of ``beta_grid`` against the fixed direction of A and
    report both marginals. Point k uses substream ``gen.child(k)``, so the
    result does not depend on ``workers``.
    """
    beta_grid = list(beta_grid)
    if not beta_grid:
        raise DomainError('The setting grid of B is empty')
    n_trials = int(n_trials)
    if n_trials < 1:
        raise DomainError('At least one trial per grid point is required')
    alpha = _as_setting(alpha_fixed, 'a')
    pairs = [SettingPair(alpha, _as_setting(beta, f'b{k}')) for k, beta in enumerate(beta_grid)]
    jobs = [(model, pair, n_trials, gen.child(k)) for k, pair in enumerate(pairs)]

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda job: _scan_point(*job), jobs))
    else:
        reports = [_scan_point(*job) for job in jobs]
    logger.debug(f'Scanned {len(reports)} settings of B for {model.label}')
    return reports


def max_marginal_spread(reports):
    means = [report.empirical_mean_a for report in reports]
    return max(means) - min(means)


def no_signalling_holds(reports, sigma=4.0):
    """A-marginals sit within sigma SE of zero and of each other."""
    for report in reports:
        if abs(report.empirical_mean_a) >= sigma * report.standard_error:
            return False
    se = max(report.standard_error for report in reports)
    return max_marginal_spread(reports) < sigma * math.sqrt(2.0) * se


def sequence_relation(model, theta, n_trials, gen):
    """
    Compare the outcome sequences of both sides at relative angle theta.

    Only a model with E(theta) = +-1 relates them deterministically; any
    other model yields 'neither' even if a short sample happens to agree.
    """
    theta = theta_value(theta)
    pair = SettingPair(Setting('a', 0.0), Setting('b', theta))
    series = run_series(model, [pair], n_trials, gen)
    a, b = series.pair_outcomes(pair.label)

    if np.array_equal(a, b):
        relation = IDENTICAL
    elif np.array_equal(a, -b):
        relation = NEGATED
    else:
        relation = NEITHER

    if abs(model.evaluate(theta)) < 1.0 and relation != NEITHER:
        logger.debug(f'{model.label} at theta={theta} agreed by chance over {n_trials} trials')
        return NEITHER
    return relation
