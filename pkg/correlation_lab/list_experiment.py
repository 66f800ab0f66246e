"""
Four-list analysis: sign-difference counts, the count inequality, the
CHSH combination and local-hidden-variable feasibility of correlation
quadruples.

Quadruples are always ordered (E(a',b), E(a,b), E(a,b'), E(a',b')).
"""
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .correlation_models import QUASI_QUANTUM, check_expectation, eval_quasi_quantum
from .exceptions import CorrelationLabError, DomainError, InconsistentListsError
from .samplers import DIRECTION_LABELS, TrialSeries

logger = logging.getLogger(__name__)

LOCAL_BOUND = 2.0
QUANTUM_BOUND = 2.0 * math.sqrt(2.0)
ALGEBRAIC_BOUND = 4.0

DEFAULT_TOLERANCE = 1e-9


# ========================
# DOMAIN TYPES
# ========================

def _as_outcomes(values, name):
    array = np.asarray(values)
    if array.ndim != 1:
        raise DomainError(f'{name} must be a one-dimensional sequence')
    if not np.all(np.isin(array, (-1, 1))):
        raise DomainError(f'{name} may only contain +1 and -1')
    return array.astype(np.int64)


@dataclass(frozen=True)
class CountSummary:
    """Numbers of differing signs between the four pairs of lists."""
    n_trials: int
    n_ap_b: int
    n_a_b: int
    n_a_bp: int
    n_ap_bp: int

    def __post_init__(self):
        if self.n_trials < 0:
            raise DomainError('The number of trials cannot be negative')
        for count in self.counts:
            if not (0 <= count <= self.n_trials):
                raise DomainError(f'Count {count} lies outside [0, {self.n_trials}]')

    @property
    def counts(self):
        return (self.n_ap_b, self.n_a_b, self.n_a_bp, self.n_ap_bp)

    @property
    def u_ap_b(self):
        return self.n_trials - self.n_ap_b

    @property
    def u_a_b(self):
        return self.n_trials - self.n_a_b

    @property
    def u_a_bp(self):
        return self.n_trials - self.n_a_bp

    @property
    def u_ap_bp(self):
        return self.n_trials - self.n_ap_bp

    @property
    def complements(self):
        return (self.u_ap_b, self.u_a_b, self.u_a_bp, self.u_ap_bp)

    def expectations(self):
        """E = (N - 2n) / N for each pair, the count form of E = 1 - 2 n / N."""
        if self.n_trials == 0:
            raise DomainError('Expectations need at least one trial')
        return tuple((self.n_trials - 2 * n) / self.n_trials for n in self.counts)

    def as_dict(self):
        return {
            'n_trials': self.n_trials,
            'n': dict(zip(('ap_b', 'a_b', 'a_bp', 'ap_bp'), self.counts)),
            'u': dict(zip(('ap_b', 'a_b', 'a_bp', 'ap_bp'), self.complements)),
        }


@dataclass(frozen=True)
class CountInequalityResult:
    """Slack of n(a',b) + n(a,b) + n(a,b') >= n(a',b') and of its u version."""
    n_slack: int
    u_slack: int

    @property
    def n_holds(self):
        return self.n_slack >= 0

    @property
    def u_holds(self):
        return self.u_slack >= 0

    @property
    def holds(self):
        return self.n_holds and self.u_holds

    def as_dict(self):
        return {'holds': self.holds, 'n_slack': self.n_slack, 'u_slack': self.u_slack}


@dataclass(frozen=True)
class ChshScore:
    s: float

    def __post_init__(self):
        if abs(self.s) > ALGEBRAIC_BOUND + 1e-12:
            raise DomainError(f'CHSH value {self.s!r} exceeds the algebraic maximum 4')

    @property
    def magnitude(self):
        return abs(self.s)

    def violates_local_bound(self, tolerance=0.0):
        return self.magnitude > LOCAL_BOUND + tolerance

    def exceeds_quantum_bound(self, tolerance=0.0):
        return self.magnitude > QUANTUM_BOUND + tolerance


@dataclass(frozen=True)
class FeasibilityVerdict:
    """
    Whether a correlation quadruple has a local hidden-variable model.

    ``witness`` holds mixing weights over ``deterministic_strategies()``
    when feasible; ``violated_facet`` is (sign pattern, value) otherwise.
    ``distance`` is the max-norm distance to the local polytope.
    """
    feasible: bool
    correlations: tuple
    distance: float
    witness: tuple = None
    violated_facet: tuple = None

    def as_dict(self):
        data = {
            'feasible': self.feasible,
            'correlations': list(self.correlations),
            'distance': self.distance,
            'witness': None,
            'violated_facet': None,
        }
        if self.witness is not None:
            data['witness'] = [
                {'strategy': list(strategy), 'weight': weight}
                for strategy, weight in zip(deterministic_strategies(), self.witness)
                if weight > 0
            ]
        if self.violated_facet is not None:
            pattern, value = self.violated_facet
            data['violated_facet'] = {'signs': list(pattern), 'value': value}
        return data


@dataclass(frozen=True)
class FourLists:
    """The lists a', a (observer A) and b, b' (observer B) of N experiments."""
    list_alpha_prime: np.ndarray
    list_alpha: np.ndarray
    list_beta: np.ndarray
    list_beta_prime: np.ndarray

    def __post_init__(self):
        names = ('list_alpha_prime', 'list_alpha', 'list_beta', 'list_beta_prime')
        for name in names:
            object.__setattr__(self, name, _as_outcomes(getattr(self, name), name))
        lengths = {getattr(self, name).shape[0] for name in names}
        if len(lengths) != 1:
            raise DomainError(f'The four lists have different lengths {sorted(lengths)}')
        if lengths.pop() < 1:
            raise DomainError('The lists must hold at least one experiment')

    @property
    def n_trials(self):
        return int(self.list_alpha.shape[0])

    def counts(self):
        return CountSummary(
            n_trials=self.n_trials,
            n_ap_b=count_differences(self.list_alpha_prime, self.list_beta),
            n_a_b=count_differences(self.list_alpha, self.list_beta),
            n_a_bp=count_differences(self.list_alpha, self.list_beta_prime),
            n_ap_bp=count_differences(self.list_alpha_prime, self.list_beta_prime),
        )

    def rows(self):
        """Rows (trial_index, r_a', r_a, r_b, r_b') for tabular output."""
        columns = (self.list_alpha_prime, self.list_alpha, self.list_beta, self.list_beta_prime)
        return [
            [i, *(int(column[i]) for column in columns)] for i in range(self.n_trials)
        ]

    @classmethod
    def from_records(cls, records, labels=DIRECTION_LABELS):
        """
        Arrange trial records into four lists.

        Uses the per-direction outcomes of local runs when present;
        otherwise each direction's list is read off the setting pairs and
        must agree across every pair that shares the direction.
        """
        a_p, a, b, b_p = labels
        if isinstance(records, TrialSeries):
            if records.model.is_local:
                return cls(
                    records.direction_outcomes('A', a_p),
                    records.direction_outcomes('A', a),
                    records.direction_outcomes('B', b),
                    records.direction_outcomes('B', b_p),
                )
            pair_arrays = {label: records.pair_outcomes(label) for label in records.labels}
            return cls(*_lists_from_pairs(pair_arrays, labels))

        records = list(records)
        if not records:
            raise InconsistentListsError('No trial records were given')
        if all({a_p, a} <= r.alice.keys() and {b, b_p} <= r.bob.keys() for r in records):
            return cls(
                [r.alice[a_p] for r in records],
                [r.alice[a] for r in records],
                [r.bob[b] for r in records],
                [r.bob[b_p] for r in records],
            )
        pair_labels = records[0].pairs.keys()
        if any(r.pairs.keys() != pair_labels for r in records):
            raise InconsistentListsError('Trial records do not all carry the same setting pairs')
        pair_arrays = {
            label: (np.array([r.pairs[label].a for r in records]),
                    np.array([r.pairs[label].b for r in records]))
            for label in pair_labels
        }
        return cls(*_lists_from_pairs(pair_arrays, labels))


def _lists_from_pairs(pair_arrays, labels):
    a_p, a, b, b_p = labels
    lists = {}
    for pair_label, (out_a, out_b) in pair_arrays.items():
        alpha, _, beta = pair_label.partition(':')
        for key, outcomes in (('A:' + alpha, out_a), ('B:' + beta, out_b)):
            known = lists.setdefault(key, outcomes)
            if not np.array_equal(known, outcomes):
                raise InconsistentListsError(
                    f'Direction {key} received different outcomes in different setting pairs; '
                    'these records admit no consistent assignment of four outcomes per experiment'
                )
    needed = ('A:' + a_p, 'A:' + a, 'B:' + b, 'B:' + b_p)
    missing = [key for key in needed if key not in lists]
    if missing:
        raise InconsistentListsError(f'Records lack outcomes for {", ".join(missing)}')
    return [lists[key] for key in needed]


# ========================
# COUNTS AND ESTIMATES
# ========================

def count_differences(x, y):
    """Number of positions where two +-1 lists differ."""
    x = _as_outcomes(x, 'x')
    y = _as_outcomes(y, 'y')
    if x.shape != y.shape:
        raise DomainError(f'Lists of different lengths {x.shape[0]} and {y.shape[0]}')
    return int(np.count_nonzero(x != y))


def check_count_inequality(counts):
    n_slack = counts.n_ap_b + counts.n_a_b + counts.n_a_bp - counts.n_ap_bp
    u_slack = counts.u_ap_b + counts.u_a_b + counts.u_a_bp - counts.u_ap_bp
    return CountInequalityResult(n_slack, u_slack)


def estimate_expectation(x, y):
    """E = 1 - 2 n / N, computed as (N - 2n) / N so it equals mean(x * y) exactly."""
    n = count_differences(x, y)
    total = len(x)
    if total == 0:
        raise DomainError('Cannot estimate an expectation from empty lists')
    return (total - 2 * n) / total


def estimate_model_expectation(model, a, b, theta):
    """
    Estimate E for ``model`` from paired outcomes, with its standard error.

    The quasi-quantum model weights the classical products globally; its
    error is propagated through the cosine.
    """
    e = estimate_expectation(a, b)
    n = len(a)
    se = math.sqrt(max(1.0 - e * e, 0.0) / n)
    if model.kind == QUASI_QUANTUM:
        value = eval_quasi_quantum([e], theta)
        se = math.pi / 2 * abs(math.sin(math.pi / 2 * (e + 1.0))) * se
        return value, se
    return e, se


def chsh(e_ap_b, e_a_b, e_a_bp, e_ap_bp):
    values = [check_expectation(e) for e in (e_ap_b, e_a_b, e_a_bp, e_ap_bp)]
    return ChshScore(values[0] + values[1] + values[2] - values[3])


# ========================
# LOCAL POLYTOPE
# ========================

def deterministic_strategies():
    """The 16 local assignments (r_a', r_a, r_b, r_b')."""
    return list(itertools.product((-1, 1), repeat=4))


def strategy_vertex(strategy):
    r_ap, r_a, r_b, r_bp = strategy
    return (r_ap * r_b, r_a * r_b, r_a * r_bp, r_ap * r_bp)


def chsh_facets():
    """Sign patterns with an odd number of minus signs: the 8 CHSH facets."""
    return [signs for signs in itertools.product((-1, 1), repeat=4) if math.prod(signs) == -1]


def facet_values(correlations):
    e = np.asarray(correlations, dtype=float)
    return [(signs, float(np.dot(signs, e))) for signs in chsh_facets()]


def most_violated_facet(correlations):
    """Facet with the largest value; ties go to the lexicographically first pattern."""
    return min(facet_values(correlations), key=lambda item: (-item[1], item[0]))


def lhv_feasibility(e_ap_b, e_a_b, e_a_bp, e_ap_bp, tolerance=DEFAULT_TOLERANCE):
    """
    Decide whether the quadruple lies in the convex hull of the 16
    deterministic strategies.

    The decision is the facet test, every CHSH facet at most
    2 + tolerance. The program min r subject to |V w - e| <= r,
    sum w = 1, w >= 0 over the vertex matrix V supplies the L-infinity
    distance and the mixing weights of a feasible quadruple.
    """
    if tolerance < 0:
        raise DomainError(f'Tolerance {tolerance!r} must be non-negative')
    e = np.array([check_expectation(v) for v in (e_ap_b, e_a_b, e_a_bp, e_ap_bp)])
    strategies = deterministic_strategies()
    vertices = np.array([strategy_vertex(s) for s in strategies], dtype=float)

    for index, vertex in enumerate(vertices):
        if np.array_equal(vertex, e):
            witness = tuple(1.0 if k == index else 0.0 for k in range(len(strategies)))
            return FeasibilityVerdict(True, tuple(e.tolist()), 0.0, witness=witness)

    n = len(strategies)
    residual = -np.ones((4, 1))
    a_ub = np.block([[vertices.T, residual], [-vertices.T, residual]])
    b_ub = np.concatenate([e, -e])
    a_eq = np.concatenate([np.ones(n), [0.0]]).reshape(1, -1)
    cost = np.zeros(n + 1)
    cost[-1] = 1.0
    result = linprog(cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0],
                     bounds=(0, None), method='highs')
    if not result.success:
        raise CorrelationLabError(f'Feasibility program failed: {result.message}')

    distance = max(float(result.x[-1]), 0.0)
    if facet_criterion(e, tolerance):
        weights = np.clip(result.x[:n], 0.0, None)
        weights = weights / weights.sum()
        return FeasibilityVerdict(True, tuple(e.tolist()), distance,
                                  witness=tuple(float(w) for w in weights))

    facet = most_violated_facet(e)
    logger.info(f'Quadruple {e.tolist()} is not local; facet {facet[0]} reaches {facet[1]:.6f}')
    return FeasibilityVerdict(False, tuple(e.tolist()), distance, violated_facet=facet)


def facet_criterion(correlations, tolerance=DEFAULT_TOLERANCE):
    """Fine-type criterion: local iff every CHSH facet is at most 2."""
    return all(value <= LOCAL_BOUND + tolerance for _, value in facet_values(correlations))


# ========================
# EXPERIMENT
# ========================

def run_four_list_experiment(records, labels=DIRECTION_LABELS):
    """Build the four lists, verify the count inequality, return counts and CHSH."""
    lists = FourLists.from_records(records, labels)
    counts = lists.counts()
    inequality = check_count_inequality(counts)
    if not inequality.holds:
        raise InconsistentListsError(
            f'Count inequality fails (n slack {inequality.n_slack}, u slack {inequality.u_slack})'
        )
    return counts, chsh(*counts.expectations())
