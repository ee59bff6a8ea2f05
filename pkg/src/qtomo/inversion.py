"""Closed-form tomographic inversion and its analytic error quantities.

Because the Gram matrix of the measurement design is diagonal with entries
3^degree(b) * 2^n, the least-squares inversion of observed frequencies has a
closed form: each Pauli coefficient is a design-weighted sum of frequencies
divided by its Gram entry. Applied to exact probabilities this reproduces
the state exactly; applied to empirical frequencies it yields an unbiased
Hermitian estimate with unit trace that need not be positive semidefinite.

The analytic companions: a per-coefficient variance bound
1 / (3^degree * 4^n * m), a high-probability radius for the squared operator
norm of the estimation error, and the factor 2^(n/2) converting Frobenius
error bounds into trace-norm bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, pauli, states
from .measurement import EmpiricalFrequencies


@dataclass
class LinearEstimate:
    """Inverted estimate: Pauli coefficients and the assembled matrix.

    The matrix is Hermitian with trace exactly 1 (up to rounding) but may
    have negative eigenvalues.
    """

    n: int
    coeffs: np.ndarray  # (4^n,) float64
    matrix: np.ndarray  # (2^n, 2^n) complex


def invert_coefficients(freqs: EmpiricalFrequencies) -> np.ndarray:
    """Pauli coefficients recovered from per-setting outcome frequencies.

    ``coeffs[b] = sum over (setting, outcome) of freq * design_entry,
    divided by 3^degree(b) * 2^n``. Only the 3^degree(b) settings matching
    b outside its identity positions contribute; the kernel exploits that.
    """
    sums = _kernels.design_adjoint_sums(freqs.values, freqs.n)
    scale = 3.0 ** pauli.label_degrees(freqs.n) * float(2**freqs.n)
    return sums / scale


def linear_estimator(freqs: EmpiricalFrequencies) -> LinearEstimate:
    """Assemble the inverted coefficients into a Hermitian matrix estimate."""
    coeffs = invert_coefficients(freqs)
    return LinearEstimate(
        n=freqs.n, coeffs=coeffs, matrix=states.pauli_assemble(coeffs)
    )


def variance_bound(b: str, m: int) -> float:
    """Upper bound on the variance of one inverted coefficient.

    Equals 1 / (3^degree(b) * 4^n * m); sharp for the maximally mixed state.
    """
    if m < 1:
        raise ValueError(f"repetition count m={m} must be >= 1")
    n = len(b)
    d = pauli.degree(b)
    return 1.0 / (3.0**d * 4.0**n * m)


def hoeffding_radius(n: int, m: int, eps: float) -> float:
    """Radius r such that P(op-norm(estimate - truth)^2 >= r) <= eps.

    Matrix-Hoeffding bound: 4 * sqrt(2 (4/3)^n (n ln 2 - ln eps) / m).
    Monotone decreasing in both m and eps; eps = 1 is allowed and drops the
    -ln eps term.
    """
    pauli.check_qubits(n)
    if m < 1:
        raise ValueError(f"repetition count m={m} must be >= 1")
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"eps={eps} out of (0, 1]")
    return 4.0 * math.sqrt(
        2.0 * (4.0 / 3.0) ** n * (n * math.log(2.0) - math.log(eps)) / m
    )


def trace_norm_factor(n: int) -> float:
    """Factor 2^(n/2) bounding the trace norm by the Frobenius norm."""
    pauli.check_qubits(n)
    return 2.0 ** (n / 2.0)
