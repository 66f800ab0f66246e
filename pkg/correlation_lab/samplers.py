"""
Reproducible trial generation.

Local models are sampled through a genuine hidden-variable mechanism: a
shared classical angular momentum pair j^A = -j^B at planar angle phi,
with r = sgn(direction . j). Every other model is sampled as a joint
box with uniform marginals, correlated at the source.
"""
import csv
import json
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .correlation_models import (
    NOISY, Angle, as_unit_vector, check_expectation, polar_unit_vector,
)
from .exceptions import DomainError

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi

# default CHSH directions, planar polar angles
CHSH_ANGLES = {
    'a_p': 0.0,
    'a': math.pi / 2,
    'b': math.pi / 4,
    'b_p': 3 * math.pi / 4,
}
DIRECTION_LABELS = ('a_p', 'a', 'b', 'b_p')

# Box outcome table in the order (+,+), (+,-), (-,+), (-,-)
_BOX_A = np.array([1, 1, -1, -1], dtype=np.int64)
_BOX_B = np.array([1, -1, 1, -1], dtype=np.int64)

TRIAL_CSV_COLUMNS = ['trial_index', 'setting_label', 'outcome_a', 'outcome_b']


# ========================
# GENERATORS
# ========================

class SeededGenerator:
    """
    Random stream identified by (seed, stream_id).

    Equal identifiers reproduce the same sequence bit for bit. ``child``
    derives independent substreams through numpy's SeedSequence spawn keys;
    a single instance must not be shared between threads.
    """

    def __init__(self, seed, stream_id=0, spawn_path=()):
        seed = int(seed)
        stream_id = int(stream_id)
        if not (0 <= seed < 2 ** 64):
            raise DomainError(f'Seed {seed} is not a 64-bit unsigned integer')
        if stream_id < 0:
            raise DomainError(f'Stream id {stream_id} must be non-negative')
        self.seed = seed
        self.stream_id = stream_id
        self.spawn_path = tuple(int(k) for k in spawn_path)
        sequence = np.random.SeedSequence(seed, spawn_key=(stream_id, *self.spawn_path))
        self.rng = np.random.Generator(np.random.PCG64(sequence))

    def child(self, index):
        return SeededGenerator(self.seed, self.stream_id, self.spawn_path + (int(index),))

    def __repr__(self):
        return f'SeededGenerator(seed={self.seed}, stream_id={self.stream_id}, path={self.spawn_path})'


# ========================
# SETTINGS AND OUTCOMES
# ========================

@dataclass(frozen=True)
class Setting:
    """A labelled measurement direction given by its planar polar angle."""
    label: str
    phi: float

    @property
    def unit_vector(self):
        return polar_unit_vector(self.phi)


@dataclass(frozen=True)
class SettingPair:
    alpha: Setting
    beta: Setting

    @property
    def label(self):
        return f'{self.alpha.label}:{self.beta.label}'

    @property
    def angle(self):
        return Angle.between_polar(self.alpha.phi, self.beta.phi)


def chsh_setting_pairs(angles=None):
    """
    The four pairs of the CHSH combination, in the order
    (a', b), (a, b), (a, b'), (a', b').
    """
    angles = dict(CHSH_ANGLES if angles is None else angles)
    missing = [label for label in DIRECTION_LABELS if label not in angles]
    if missing:
        raise DomainError(f'Missing measurement directions: {", ".join(missing)}')
    s = {label: Setting(label, float(angles[label])) for label in DIRECTION_LABELS}
    return [
        SettingPair(s['a_p'], s['b']),
        SettingPair(s['a'], s['b']),
        SettingPair(s['a'], s['b_p']),
        SettingPair(s['a_p'], s['b_p']),
    ]


@dataclass(frozen=True)
class HiddenVariable:
    """Orientation phi of the shared angular momentum pair j^A = -j^B."""
    phi: float

    @property
    def j_a(self):
        return polar_unit_vector(self.phi)

    @property
    def j_b(self):
        return -self.j_a


@dataclass(frozen=True)
class OutcomePair:
    a: int
    b: int

    def __post_init__(self):
        if self.a not in (-1, 1) or self.b not in (-1, 1):
            raise DomainError(f'Outcomes must be +1 or -1, got ({self.a}, {self.b})')


@dataclass(frozen=True)
class JointDistribution:
    """Probabilities of (+,+), (+,-), (-,+), (-,-) with unbiased marginals."""
    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float

    def __post_init__(self):
        probabilities = self.probabilities
        if any(p < 0 for p in probabilities):
            raise DomainError(f'Negative probability in {probabilities}')
        if abs(math.fsum(probabilities) - 1.0) > 1e-12:
            raise DomainError(f'Probabilities {probabilities} do not sum to 1')
        if abs(self.p_pp + self.p_pm - 0.5) > 1e-12 or abs(self.p_pp + self.p_mp - 0.5) > 1e-12:
            raise DomainError(f'Marginals of {probabilities} are not uniform')

    @property
    def probabilities(self):
        return (self.p_pp, self.p_pm, self.p_mp, self.p_mm)

    @property
    def expectation(self):
        return self.p_pp + self.p_mm - self.p_pm - self.p_mp


def _sgn(values):
    # sgn(0) -> +1; a measure-zero event under continuous phi
    return np.where(np.asarray(values) >= 0, 1, -1).astype(np.int64)


def _planar(vector):
    vector = as_unit_vector(vector)
    if vector.shape[0] == 3:
        if abs(vector[2]) > 1e-9:
            raise DomainError('Hidden-variable directions must lie in the measurement plane')
        vector = vector[:2]
    return vector


def lhv_outcome(direction, phi, side):
    """Outcome recorded by side 'A' or 'B' for hidden variable(s) ``phi``."""
    direction = _planar(direction)
    phi = np.asarray(phi, dtype=float)
    projection = np.cos(phi) * direction[0] + np.sin(phi) * direction[1]
    if side == 'B':
        projection = -projection
    elif side != 'A':
        raise DomainError(f'Unknown side {side!r}')
    return _sgn(projection)


# ========================
# LOCAL HIDDEN VARIABLES
# ========================

def sample_lhv(alpha, beta, gen):
    """One trial of the hidden-variable mechanism: (sgn(a . j^A), sgn(b . j^B))."""
    hidden = HiddenVariable(float(gen.rng.uniform(0.0, TWO_PI)))
    a = int(lhv_outcome(alpha, hidden.phi, 'A'))
    b = int(lhv_outcome(beta, hidden.phi, 'B'))
    return OutcomePair(a, b)


def sample_lhv_batch(alpha, beta, n_trials, gen):
    """Vectorized sample_lhv; returns outcome arrays a, b and the hidden variables."""
    phi = gen.rng.uniform(0.0, TWO_PI, int(n_trials))
    return lhv_outcome(alpha, phi, 'A'), lhv_outcome(beta, phi, 'B'), phi


# ========================
# BOXES
# ========================

def box_from_expectation(e):
    e = check_expectation(e)
    same = (1.0 + e) / 4.0
    different = (1.0 - e) / 4.0
    return JointDistribution(same, different, different, same)


def _box_indices(dist, size, gen):
    cumulative = np.cumsum(dist.probabilities)
    cumulative[-1] = 1.0
    indices = np.searchsorted(cumulative, gen.rng.random(size), side='right')
    return np.minimum(indices, 3)


def sample_box(dist, gen):
    if not isinstance(dist, JointDistribution):
        raise DomainError('sample_box needs a JointDistribution')
    index = int(_box_indices(dist, None, gen))
    return OutcomePair(int(_BOX_A[index]), int(_BOX_B[index]))


def sample_box_batch(dist, n_trials, gen):
    indices = _box_indices(dist, int(n_trials), gen)
    return _BOX_A[indices], _BOX_B[indices]


# ========================
# SERIES
# ========================

@dataclass(frozen=True)
class TrialRecord:
    """
    One experiment: the outcome pair of every setting pair and, for local
    mechanisms, the outcome of every direction on each side plus phi.
    """
    trial_index: int
    pairs: dict
    alice: dict = field(default_factory=dict)
    bob: dict = field(default_factory=dict)
    hidden_variable: float = None

    def as_dict(self):
        return {
            'trial_index': self.trial_index,
            'hidden_variable': self.hidden_variable,
            'pairs': {label: [pair.a, pair.b] for label, pair in self.pairs.items()},
            'alice': dict(self.alice),
            'bob': dict(self.bob),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            trial_index=int(data['trial_index']),
            pairs={label: OutcomePair(int(a), int(b)) for label, (a, b) in data['pairs'].items()},
            alice={label: int(r) for label, r in data.get('alice', {}).items()},
            bob={label: int(r) for label, r in data.get('bob', {}).items()},
            hidden_variable=data.get('hidden_variable'),
        )


class TrialSeries(Sequence):
    """Immutable sequence of TrialRecord backed by outcome arrays."""

    def __init__(self, model, setting_pairs, pair_outcomes, alice=None, bob=None, phi=None):
        self.model = model
        self.setting_pairs = tuple(setting_pairs)
        self._pair_outcomes = pair_outcomes
        self._alice = alice or {}
        self._bob = bob or {}
        self._phi = phi
        for arrays in (*pair_outcomes.values(), *self._alice.values(), *self._bob.values()):
            for array in (arrays if isinstance(arrays, tuple) else (arrays,)):
                array.flags.writeable = False
        if phi is not None:
            phi.flags.writeable = False
        first = next(iter(pair_outcomes.values()))
        self.n_trials = int(first[0].shape[0])

    def __len__(self):
        return self.n_trials

    def __getitem__(self, index):
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(self.n_trials))]
        if index < 0:
            index += self.n_trials
        if not (0 <= index < self.n_trials):
            raise IndexError('trial index out of range')
        return TrialRecord(
            trial_index=index,
            pairs={label: OutcomePair(int(a[index]), int(b[index]))
                   for label, (a, b) in self._pair_outcomes.items()},
            alice={label: int(r[index]) for label, r in self._alice.items()},
            bob={label: int(r[index]) for label, r in self._bob.items()},
            hidden_variable=None if self._phi is None else float(self._phi[index]),
        )

    @property
    def labels(self):
        return [pair.label for pair in self.setting_pairs]

    @property
    def hidden_variables(self):
        return self._phi

    def pair_outcomes(self, label):
        try:
            return self._pair_outcomes[label]
        except KeyError:
            raise DomainError(f'No setting pair labelled {label!r}')

    def direction_outcomes(self, side, label):
        outcomes = self._alice if side == 'A' else self._bob
        if label not in outcomes:
            raise DomainError(f'No per-direction outcomes for {side}:{label}')
        return outcomes[label]


def _as_setting_pairs(settings):
    pairs = []
    for item in settings:
        if isinstance(item, SettingPair):
            pairs.append(item)
        else:
            alpha, beta = item
            pairs.append(SettingPair(alpha, beta))
    return pairs


def _collect_directions(setting_pairs, side):
    directions = {}
    for pair in setting_pairs:
        setting = pair.alpha if side == 'A' else pair.beta
        known = directions.setdefault(setting.label, setting)
        if known.phi != setting.phi:
            raise DomainError(f'Direction {setting.label!r} is given two different angles')
    return directions


def _noise_level(model):
    """Total noise of a (possibly nested) noisy model over a local base."""
    keep = 1.0
    while model.kind == NOISY:
        keep *= 1.0 - model.eta
        model = model.base
    return 1.0 - keep


def run_series(model, settings, n_trials, gen):
    """
    Run ``n_trials`` experiments over the given setting pairs.

    Local models share one hidden variable across every direction of a
    trial, so all lists are populated consistently. Other models sample
    each setting pair from its own box on substream ``gen.child(k)``.
    """
    setting_pairs = _as_setting_pairs(settings)
    if not setting_pairs:
        raise DomainError('At least one setting pair is required')
    n_trials = int(n_trials)
    if n_trials < 1:
        raise DomainError('At least one trial is required')
    logger.debug(f'Running {n_trials} trials of {model.label} on {gen!r}')

    if model.is_local:
        alice_dirs = _collect_directions(setting_pairs, 'A')
        bob_dirs = _collect_directions(setting_pairs, 'B')
        phi = gen.rng.uniform(0.0, TWO_PI, n_trials)
        alice = {label: lhv_outcome(s.unit_vector, phi, 'A') for label, s in alice_dirs.items()}
        bob = {label: lhv_outcome(s.unit_vector, phi, 'B') for label, s in bob_dirs.items()}

        eta = _noise_level(model)
        if eta > 0.0:
            # shared noise flag; each side then answers with its own fair coin
            flag = gen.rng.random(n_trials) < eta
            for outcomes in (alice, bob):
                for label in sorted(outcomes):
                    coin = gen.rng.integers(0, 2, n_trials) * 2 - 1
                    outcomes[label] = np.where(flag, coin, outcomes[label]).astype(np.int64)

        pair_outcomes = {
            pair.label: (alice[pair.alpha.label], bob[pair.beta.label]) for pair in setting_pairs
        }
        return TrialSeries(model, setting_pairs, pair_outcomes, alice, bob, phi)

    pair_outcomes = {}
    for k, pair in enumerate(setting_pairs):
        dist = box_from_expectation(model.evaluate(pair.angle))
        pair_outcomes[pair.label] = sample_box_batch(dist, n_trials, gen.child(k))
    return TrialSeries(model, setting_pairs, pair_outcomes)


def rederive_record(record, setting_pairs):
    """Recompute the local outcomes of a classical record from its stored phi."""
    if record.hidden_variable is None:
        raise DomainError('The record carries no hidden variable')
    setting_pairs = _as_setting_pairs(setting_pairs)
    phi = record.hidden_variable
    alice = {label: int(lhv_outcome(s.unit_vector, phi, 'A'))
             for label, s in _collect_directions(setting_pairs, 'A').items()}
    bob = {label: int(lhv_outcome(s.unit_vector, phi, 'B'))
           for label, s in _collect_directions(setting_pairs, 'B').items()}
    pairs = {pair.label: OutcomePair(alice[pair.alpha.label], bob[pair.beta.label])
             for pair in setting_pairs}
    return TrialRecord(record.trial_index, pairs, alice, bob, phi)


# ========================
# SERIALIZATION
# ========================

def write_trials_csv(records, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(TRIAL_CSV_COLUMNS)
    for record in records:
        for label, pair in record.pairs.items():
            writer.writerow([record.trial_index, label, pair.a, pair.b])


def read_trials_csv(stream):
    """Rebuild records (pair outcomes only) from a trial CSV."""
    reader = csv.DictReader(stream)
    if reader.fieldnames != TRIAL_CSV_COLUMNS:
        raise DomainError(f'Unexpected trial CSV columns {reader.fieldnames}')
    grouped = {}
    for row in reader:
        pairs = grouped.setdefault(int(row['trial_index']), {})
        pairs[row['setting_label']] = OutcomePair(int(row['outcome_a']), int(row['outcome_b']))
    return [TrialRecord(index, pairs) for index, pairs in grouped.items()]


def write_trials_json(records, stream):
    json.dump({'trials': [record.as_dict() for record in records]}, stream)


def read_trials_json(stream):
    data = json.load(stream)
    return [TrialRecord.from_dict(item) for item in data['trials']]
