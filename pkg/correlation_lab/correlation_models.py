"""
Expectation functions for two-party dichotomic experiments.

Every function here is pure. Angles are relative measurement angles in
radians on [0, pi]; expectation values live on [-1, 1].
"""
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import DomainError

# ========================
# MODEL KINDS
# ========================

CLASSICAL = 'classical'
QUANTUM = 'quantum'
SPIN = 'spin'
STRONG = 'strong'
NOISY = 'noisy'
QUASI_QUANTUM = 'quasi-quantum'

MODEL_KINDS = (
    (CLASSICAL, 'Classical (local hidden variables)'),
    (QUANTUM, 'Quantum singlet'),
    (SPIN, 'Spin-j singlet, normalized'),
    (STRONG, 'Stronger than quantum (sign box)'),
    (NOISY, 'Weaker than classical (noise)'),
    (QUASI_QUANTUM, 'Quasi-quantum weighting of classical events'),
)

SINE = 'sine'
COSINE = 'cosine'
FOURIER_FORMS = (SINE, COSINE)

SCALED = 'scaled'
SHIFTED = 'shifted'


# ========================
# ANGLES AND VALUES
# ========================

@dataclass(frozen=True)
class Angle:
    """Relative angle between two measurement directions."""
    theta: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise DomainError(f'Angle {self.theta!r} lies outside [0, pi]')

    def __float__(self):
        return float(self.theta)

    @classmethod
    def from_vectors(cls, u, v):
        """theta = arccos(u . v) with the dot product clamped against rounding."""
        u = as_unit_vector(u)
        v = as_unit_vector(v)
        if u.shape != v.shape:
            raise DomainError('Both directions must have the same dimension')
        dot = float(np.clip(np.dot(u, v), -1.0, 1.0))
        return cls(math.acos(dot))

    @classmethod
    def between_polar(cls, phi_u, phi_v):
        """Fold the difference of two planar polar angles onto [0, pi]."""
        delta = abs(float(phi_u) - float(phi_v)) % (2 * math.pi)
        if delta > math.pi:
            delta = 2 * math.pi - delta
        return cls(delta)


def as_unit_vector(vector, atol=1e-9):
    vector = np.asarray(vector, dtype=float)
    if vector.ndim != 1 or vector.shape[0] not in (2, 3):
        raise DomainError(f'Expected a planar or spatial vector, got shape {vector.shape}')
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > atol:
        raise DomainError(f'Direction {vector.tolist()} is not a unit vector (norm {norm})')
    return vector


def polar_unit_vector(phi):
    return np.array([math.cos(phi), math.sin(phi)])


def theta_value(theta):
    if isinstance(theta, Angle):
        return theta.theta
    return Angle(float(theta)).theta


def check_expectation(e, name='expectation value'):
    e = float(e)
    if not (-1.0 <= e <= 1.0):
        raise DomainError(f'{name} {e!r} lies outside [-1, 1]')
    return e


def expectation_from_p_equal(p_equal):
    """E = P= - P!= = 2 P= - 1."""
    p_equal = float(p_equal)
    if not (0.0 <= p_equal <= 1.0):
        raise DomainError(f'Probability {p_equal!r} lies outside [0, 1]')
    return 2.0 * p_equal - 1.0


def p_equal_from_expectation(e):
    return (check_expectation(e) + 1.0) / 2.0


def parse_spin(value):
    """
    Parse a spin quantum number into an exact half-integer.

    Accepts ints, floats, Fractions and strings such as "3/2" or "1.5".
    Raises DomainError unless 2j is a positive integer.
    """
    try:
        j = Fraction(str(value).strip()) if isinstance(value, str) else Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise DomainError(f'Spin {value!r} is not a number')
    if j <= 0 or (2 * j).denominator != 1:
        raise DomainError(f'Spin {value!r} must be a positive integer or half-integer')
    return j


# ========================
# EXPECTATION FUNCTIONS
# ========================

def eval_classical(theta):
    """E(theta) = 2 theta / pi - 1, i.e. P=(theta) = theta / pi."""
    return 2.0 * theta_value(theta) / math.pi - 1.0


def eval_quantum(theta):
    return -math.cos(theta_value(theta))


def spin_closed_form_correlation(theta, j):
    """Unnormalized singlet correlation C(theta) = -j(j+1)/3 cos(theta)."""
    j = parse_spin(j)
    return -float(j * (j + 1)) / 3.0 * math.cos(theta_value(theta))


def eval_spin_j_normalized(theta, j):
    """3 / (j(j+1)) C(theta); independent of j once normalized."""
    j = parse_spin(j)
    return 3.0 / float(j * (j + 1)) * spin_closed_form_correlation(theta, j)


def eval_strong(theta):
    """sgn(2 theta / pi - 1), with sgn(0) = 0."""
    return float(np.sign(eval_classical(theta)))


def eval_noisy(base, eta, theta):
    """Mix the base signal with uniform noise: (1 - eta) E_base(theta)."""
    eta = float(eta)
    if not (0.0 <= eta <= 1.0):
        raise DomainError(f'Noise level {eta!r} lies outside [0, 1]')
    return (1.0 - eta) * base.evaluate(theta)


def classical_to_quantum(e):
    e = check_expectation(e)
    return -math.cos(math.pi / 2 * (e + 1.0))


def quantum_to_classical(eq):
    eq = check_expectation(eq)
    return 2.0 * math.acos(-eq) / math.pi - 1.0


def eval_quasi_quantum(outcome_products, theta):
    """
    Weight normalized single-trial products R_i = r_a r_b / N globally:
    E_qqm = -cos(pi/2 (sum R_i + 1)).
    """
    theta_value(theta)
    total = math.fsum(float(r) for r in outcome_products)
    if abs(total) > 1.0 + 1e-12:
        raise DomainError(f'Normalized products sum to {total!r}; |sum| must not exceed 1')
    total = min(1.0, max(-1.0, total))
    return -math.cos(math.pi / 2 * (total + 1.0))


def quasi_quantum_from_outcomes(a, b, theta):
    """E_qqm from raw +-1 outcome arrays of N classical trials."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.size == 0:
        raise DomainError('Outcome sequences must be non-empty and of equal length')
    return eval_quasi_quantum((a * b) / a.size, theta)


# ========================
# SIGN FUNCTION AS A FOURIER SERIES
# ========================

def fourier_sgn_partial_sum(x, terms, form=SINE):
    """
    Truncated Fourier series of sgn(x) on (-pi, pi).

    sine:   4/pi sum_n sin((2n+1)x) / (2n+1)
    cosine: 4/pi sum_n (-1)^n cos((2n+1)(x - pi/2)) / (2n+1)

    ``x`` may be a scalar or an array; the result has the same shape.
    """
    if form not in FOURIER_FORMS:
        raise DomainError(f'Unknown series form {form!r}')
    terms = int(terms)
    if terms < 1:
        raise DomainError('At least one series term is required')
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= -math.pi) or np.any(x_arr >= math.pi):
        raise DomainError('The series argument must lie in the open interval (-pi, pi)')

    odd = 2 * np.arange(terms, dtype=float) + 1
    grid = x_arr.reshape(-1, 1)
    if form == SINE:
        series = np.sin(odd * grid) / odd
    else:
        signs = np.where(np.arange(terms) % 2 == 0, 1.0, -1.0)
        series = signs * np.cos(odd * (grid - math.pi / 2)) / odd
    result = 4.0 / math.pi * series.sum(axis=1)
    if x_arr.ndim == 0:
        return float(result[0])
    return result.reshape(x_arr.shape)


def fourier_first_term_expectation(theta, substitution=SCALED):
    """
    First term of the cosine series, rescaled by pi/4, at an argument built
    from the classical expectation function.

    scaled:  x = pi/2 E(theta)       gives -cos(theta), the quantum curve
    shifted: x = pi/2 (E(theta) + 1) gives sin(theta)
    """
    e = eval_classical(theta)
    if substitution == SCALED:
        x = math.pi / 2 * e
    elif substitution == SHIFTED:
        x = math.pi / 2 * (e + 1.0)
    else:
        raise DomainError(f'Unknown substitution {substitution!r}')
    return math.cos(x - math.pi / 2)


# ========================
# MODEL FAMILY
# ========================

@dataclass(frozen=True)
class CorrelationModel:
    """
    Tagged family of expectation functions theta -> E(theta).

    Build instances with the classmethods; ``evaluate`` dispatches on kind.
    """
    kind: str
    j: Fraction = None
    eta: float = None
    base: 'CorrelationModel' = None

    def __post_init__(self):
        if self.kind not in dict(MODEL_KINDS):
            raise DomainError(f'Unknown correlation model {self.kind!r}')
        if self.kind == SPIN:
            object.__setattr__(self, 'j', parse_spin(self.j))
        if self.kind == NOISY:
            if self.base is None:
                raise DomainError('A noisy model needs a base model')
            if self.base.kind == QUASI_QUANTUM:
                raise DomainError('The quasi-quantum model cannot be the base of a noisy model')
            if self.eta is None or not (0.0 <= float(self.eta) <= 1.0):
                raise DomainError(f'Noise level {self.eta!r} lies outside [0, 1]')
            object.__setattr__(self, 'eta', float(self.eta))

    @classmethod
    def classical(cls):
        return cls(CLASSICAL)

    @classmethod
    def quantum(cls):
        return cls(QUANTUM)

    @classmethod
    def spin(cls, j):
        return cls(SPIN, j=j)

    @classmethod
    def strong(cls):
        return cls(STRONG)

    @classmethod
    def noisy(cls, base, eta):
        return cls(NOISY, eta=eta, base=base)

    @classmethod
    def quasi_quantum(cls):
        return cls(QUASI_QUANTUM)

    @classmethod
    def from_options(cls, kind, j=None, eta=None, base=CLASSICAL):
        """Build a model from flat options as the CLI and the API receive them."""
        if kind == SPIN:
            return cls.spin(j if j is not None else Fraction(1, 2))
        if kind == NOISY:
            if base == NOISY:
                raise DomainError('The base of a noisy model cannot itself be noisy')
            return cls.noisy(cls.from_options(base, j=j), 0.0 if eta is None else eta)
        return cls(kind)

    @property
    def is_local(self):
        """True when a local hidden-variable mechanism realizes the model."""
        if self.kind in (CLASSICAL, QUASI_QUANTUM):
            return True
        if self.kind == NOISY:
            return self.base.is_local
        return False

    @property
    def label(self):
        if self.kind == SPIN:
            return f'spin(j={self.j})'
        if self.kind == NOISY:
            return f'noisy({self.base.label}, eta={self.eta:g})'
        return self.kind

    def evaluate(self, theta):
        if self.kind == CLASSICAL:
            return eval_classical(theta)
        if self.kind in (QUANTUM, QUASI_QUANTUM):
            # the quasi-quantum weighting converges to the quantum curve
            return eval_quantum(theta)
        if self.kind == SPIN:
            return eval_spin_j_normalized(theta, self.j)
        if self.kind == STRONG:
            return eval_strong(theta)
        return eval_noisy(self.base, self.eta, theta)
