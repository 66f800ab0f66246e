"""
Angular momentum algebra for two spin-j particles in the singlet state.

Matrices are dense and complex in the |j, m> basis ordered m = j, ..., -j.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .correlation_models import theta_value, as_unit_vector, parse_spin
from .exceptions import DomainError

J_MAX = Fraction(25, 2)
IMAGINARY_TOLERANCE = 1e-12


def checked_spin(j, j_max=J_MAX):
    j = parse_spin(j)
    if j > parse_spin(j_max):
        raise DomainError(f'Spin {j} exceeds the supported maximum {j_max}')
    return j


def magnetic_numbers(j):
    """m = j, j-1, ..., -j as exact Fractions."""
    j = parse_spin(j)
    return [j - k for k in range(int(2 * j) + 1)]


# ========================
# OPERATORS
# ========================

@dataclass(frozen=True)
class SpinOperators:
    j: Fraction
    jz: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray
    jx: np.ndarray
    jy: np.ndarray

    @property
    def dimension(self):
        return self.jz.shape[0]

    def along(self, direction):
        """n . J for a planar (x, y) or spatial (x, y, z) unit vector."""
        n = as_unit_vector(direction)
        if n.shape[0] == 2:
            n = np.array([n[0], n[1], 0.0])
        return n[0] * self.jx + n[1] * self.jy + n[2] * self.jz

    def casimir(self):
        return self.jx @ self.jx + self.jy @ self.jy + self.jz @ self.jz

    def identity(self):
        return np.eye(self.dimension, dtype=complex)


def build_operators(j, j_max=J_MAX):
    """
    Ladder construction: J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>,
    Jx = (J+ + J-)/2 and Jy = (J+ - J-)/(2i).
    """
    j = checked_spin(j, j_max)
    m = np.array([float(value) for value in magnetic_numbers(j)])
    jf = float(j)

    jz = np.diag(m).astype(complex)
    # column k holds |m_k>; J+ moves it one row up
    jplus = np.diag(np.sqrt(jf * (jf + 1.0) - m[1:] * (m[1:] + 1.0)), k=1).astype(complex)
    jminus = jplus.conj().T
    jx = (jplus + jminus) / 2.0
    jy = (jplus - jminus) / 2.0j
    return SpinOperators(j, jz, jplus, jminus, jx, jy)


# ========================
# SINGLET
# ========================

@dataclass(frozen=True)
class SingletState:
    """|J=0, M=0> as coefficients over the product basis |j m> (x) |j m'>."""
    j: Fraction
    coefficients: np.ndarray

    @property
    def norm(self):
        return float(np.linalg.norm(self.coefficients))

    def expectation(self, operator):
        return complex(np.vdot(self.coefficients, operator @ self.coefficients))

    def total_jz_residual(self, ops=None):
        """|| (Jz (x) 1 + 1 (x) Jz) psi ||."""
        ops = ops or build_operators(self.j)
        total_jz = np.kron(ops.jz, ops.identity()) + np.kron(ops.identity(), ops.jz)
        return float(np.linalg.norm(total_jz @ self.coefficients))

    def total_j_squared_norm(self, ops=None):
        """|| J_total^2 psi ||; zero for a state of total angular momentum zero."""
        ops = ops or build_operators(self.j)
        eye = ops.identity()
        totals = [np.kron(c, eye) + np.kron(eye, c) for c in (ops.jx, ops.jy, ops.jz)]
        total_squared = sum(total @ total for total in totals)
        return float(np.linalg.norm(total_squared @ self.coefficients))


def build_singlet(j, j_max=J_MAX):
    """Coefficient of |j m, j -m> is (-1)^(j-m) / sqrt(2j+1); all others vanish."""
    j = checked_spin(j, j_max)
    dimension = int(2 * j) + 1
    coefficients = np.zeros((dimension, dimension), dtype=complex)
    for k in range(dimension):
        # m = j - k, and -m sits at index 2j - k
        coefficients[k, dimension - 1 - k] = (-1) ** k / math.sqrt(dimension)
    return SingletState(j, coefficients.reshape(-1))


# ========================
# CORRELATIONS
# ========================

def correlation(j, alpha, beta, j_max=J_MAX):
    """
    C = <00| (alpha . J^A) (x) (beta . J^B) |00> by full tensor contraction.
    """
    ops = build_operators(j, j_max)
    singlet = build_singlet(ops.j, j_max)
    value = singlet.expectation(np.kron(ops.along(alpha), ops.along(beta)))
    if abs(value.imag) > IMAGINARY_TOLERANCE:
        raise DomainError(f'Correlation has an imaginary part {value.imag!r}')
    return value.real


def _canonical_pair(theta):
    # alpha along z, beta tilted by theta in the x-z plane
    theta = theta_value(theta)
    return np.array([0.0, 0.0, 1.0]), np.array([math.sin(theta), 0.0, math.cos(theta)])


def normalized_correlation(j, theta, j_max=J_MAX):
    """E_qm = 3 / (j(j+1)) C(theta)."""
    j = checked_spin(j, j_max)
    alpha, beta = _canonical_pair(theta)
    return 3.0 / float(j * (j + 1)) * correlation(j, alpha, beta, j_max)


def z_axis_shortcut_correlation(j, beta):
    """
    The reduced single sum with alpha along z:
    sum_m m (-1)^(2j-2m) / (2j+1) <j -m| beta . J |j -m>,
    which only reads the diagonal of beta . J.
    """
    ops = build_operators(j)
    diagonal = np.diag(ops.along(beta)).real
    ms = magnetic_numbers(ops.j)
    dimension = ops.dimension
    total = 0.0
    for k, m in enumerate(ms):
        # (-1)^(2j-2m) = 1 since j - m is an integer
        total += float(m) * diagonal[dimension - 1 - k]
    return total / dimension


def sum_m_squared(j):
    """Direct sum of m^2 over m = -j..j and the closed form j(j+1)(2j+1)/3, exactly."""
    j = parse_spin(j)
    direct = sum((m * m for m in magnetic_numbers(j)), Fraction(0))
    closed = j * (j + 1) * (2 * j + 1) / 3
    return direct, closed


def spin_table(j, thetas, j_max=J_MAX):
    """Rows (theta, C matrix, C closed form, E normalized, |deviation|)."""
    j = checked_spin(j, j_max)
    rows = []
    for theta in thetas:
        alpha, beta = _canonical_pair(theta)
        c_matrix = correlation(j, alpha, beta, j_max)
        c_closed = -float(j * (j + 1)) / 3.0 * math.cos(theta)
        rows.append([theta, c_matrix, c_closed, 3.0 / float(j * (j + 1)) * c_matrix,
                     abs(c_matrix - c_closed)])
    return rows
