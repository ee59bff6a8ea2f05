"""Density matrices, Pauli-basis expansion, and the reference example states.

A state of n qubits is a 2^n x 2^n complex Hermitian PSD matrix with unit
trace, represented as a plain numpy array. Any Hermitian matrix expands
uniquely over the 4^n tensor-product Pauli basis with real coefficients
``c[b] = Tr(M sigma_b) / 2^n``; ``pauli_expand`` / ``pauli_assemble``
convert both ways in O(n 4^n) via a per-qubit change of basis.

``nearest_density`` projects an arbitrary Hermitian matrix onto the set of
density matrices (optionally of bounded rank) by Euclidean projection of its
spectrum onto the probability simplex, which never increases the Frobenius
distance to any density matrix of the retained support.

Everything here is a pure function over immutable values.
"""

from __future__ import annotations

import json

import numpy as np

from . import pauli
from .errors import FormatError

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-10
EIG_ATOL = 1e-10

# single-qubit change of basis between matrix entries (m00, m01, m10, m11)
# and Pauli coefficients (c_i, c_x, c_y, c_z)
_EXPAND_1Q = 0.5 * np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1j, -1j, 0],
        [1, 0, 0, -1],
    ],
    dtype=complex,
)
_ASSEMBLE_1Q = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, -1j, 0],
        [0, 1, 1j, 0],
        [1, 0, 0, -1],
    ],
    dtype=complex,
)


def qubit_count(matrix: np.ndarray) -> int:
    """Number of qubits of a square 2^n x 2^n matrix."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    dim = matrix.shape[0]
    n = int(dim).bit_length() - 1
    if dim != 2**n or dim < 2:
        raise ValueError(f"matrix dimension {dim} is not a power of two >= 2")
    return pauli.check_qubits(n)


def require_hermitian(matrix: np.ndarray, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    qubit_count(matrix)
    dev = np.abs(matrix - matrix.conj().T).max()
    if dev > atol:
        raise ValueError(f"matrix is not Hermitian: max deviation {dev:.3e} > {atol:.1e}")
    return matrix


def require_density(
    matrix: np.ndarray,
    trace_atol: float = TRACE_ATOL,
    eig_atol: float = EIG_ATOL,
) -> np.ndarray:
    """Validate the density-matrix invariants: Hermitian, unit trace, PSD."""
    matrix = require_hermitian(matrix)
    tr = matrix.trace().real
    if abs(tr - 1.0) > trace_atol:
        raise ValueError(f"trace {tr!r} differs from 1 by more than {trace_atol:.1e}")
    w_min = np.linalg.eigvalsh(matrix)[0]
    if w_min < -eig_atol:
        raise ValueError(f"smallest eigenvalue {w_min:.3e} below -{eig_atol:.1e}")
    return matrix


# ---------------------------------------------------------------------------
# norms of Hermitian matrices
# ---------------------------------------------------------------------------


def frobenius_norm(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix))


def operator_norm(matrix: np.ndarray) -> float:
    """Largest absolute eigenvalue, via a symmetric eigensolve (Hermitian input)."""
    return float(np.abs(np.linalg.eigvalsh(matrix)).max())


def trace_norm(matrix: np.ndarray) -> float:
    """Sum of absolute eigenvalues (Hermitian input)."""
    return float(np.abs(np.linalg.eigvalsh(matrix)).sum())


# ---------------------------------------------------------------------------
# Pauli expansion
# ---------------------------------------------------------------------------


def _interleave_perm(n: int) -> list[int]:
    return [ax for j in range(n) for ax in (j, n + j)]


def pauli_expand(matrix: np.ndarray) -> np.ndarray:
    """Real Pauli coefficients of a Hermitian matrix, in label order.

    ``coeffs[label_index(b)] = Tr(matrix @ pauli_matrix(b)) / 2^n``, computed
    by a per-qubit 4x4 change of basis rather than 4^n explicit traces.
    """
    matrix = require_hermitian(matrix)
    n = qubit_count(matrix)
    t = matrix.reshape((2,) * (2 * n))
    t = np.transpose(t, _interleave_perm(n)).reshape((4,) * n)
    for ax in range(n):
        t = np.moveaxis(np.tensordot(_EXPAND_1Q, t, axes=(1, ax)), 0, ax)
    coeffs = t.reshape(-1)
    resid = np.abs(coeffs.imag).max() if coeffs.size else 0.0
    if resid > 1e-10:
        raise ValueError(f"imaginary residue {resid:.3e} in Pauli coefficients")
    return np.ascontiguousarray(coeffs.real)


def pauli_assemble(coeffs: np.ndarray) -> np.ndarray:
    """Hermitian matrix with the given real Pauli coefficients.

    Exact inverse of ``pauli_expand``.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 1:
        raise ValueError(f"expected a coefficient vector, got shape {coeffs.shape}")
    size = coeffs.size
    n = max((int(size).bit_length() - 1) // 2, 0)
    if size != 4**n or n < 1:
        raise ValueError(f"coefficient length {size} is not a power of 4 >= 4")
    pauli.check_qubits(n)
    t = coeffs.astype(complex).reshape((4,) * n)
    for ax in range(n):
        t = np.moveaxis(np.tensordot(_ASSEMBLE_1Q, t, axes=(1, ax)), 0, ax)
    t = t.reshape((2, 2) * n)
    t = np.transpose(t, np.argsort(_interleave_perm(n)))
    return np.ascontiguousarray(t.reshape(2**n, 2**n))


# ---------------------------------------------------------------------------
# example states
# ---------------------------------------------------------------------------


def diag_state(n: int, d: int) -> np.ndarray:
    """Rank-d diagonal state: first d diagonal entries 1/d, rest zero."""
    pauli.check_qubits(n)
    dim = 2**n
    if not 1 <= d <= dim:
        raise ValueError(f"rank d={d} out of range [1, {dim}]")
    w = np.zeros(dim)
    w[:d] = 1.0 / d
    return np.diag(w).astype(complex)


def ghz(n: int) -> np.ndarray:
    """GHZ state |0...0> + |1...1> (normalized), as a rank-1 density matrix."""
    pauli.check_qubits(n)
    if n < 2:
        raise ValueError(f"GHZ state needs n >= 2 qubits, got {n}")
    dim = 2**n
    v = np.zeros(dim, dtype=complex)
    v[0] = v[-1] = 1.0 / np.sqrt(2.0)
    return np.outer(v, v.conj())


def w_state(n: int) -> np.ndarray:
    """W state: equal superposition of the n single-excitation basis states."""
    pauli.check_qubits(n)
    if n < 2:
        raise ValueError(f"W state needs n >= 2 qubits, got {n}")
    dim = 2**n
    v = np.zeros(dim, dtype=complex)
    for j in range(n):
        v[1 << (n - 1 - j)] = 1.0 / np.sqrt(n)
    return np.outer(v, v.conj())


def mixture(n: int, d: int, p: float) -> np.ndarray:
    """Statistical mixture p * GHZ + (1 - p) * diag_state(n, d)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixture weight p={p} out of [0, 1]")
    return p * ghz(n) + (1.0 - p) * diag_state(n, d)


def maximally_mixed(n: int) -> np.ndarray:
    pauli.check_qubits(n)
    dim = 2**n
    return np.eye(dim, dtype=complex) / dim


# ---------------------------------------------------------------------------
# physical projection
# ---------------------------------------------------------------------------


def project_simplex(values: np.ndarray) -> np.ndarray:
    """Euclidean projection of a real vector onto the probability simplex."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("expected a non-empty 1-d vector")
    u = np.sort(values)[::-1]
    css = np.cumsum(u)
    j = np.arange(1, values.size + 1)
    rho = np.nonzero(u * j > css - 1.0)[0][-1]
    tau = (css[rho] - 1.0) / (rho + 1.0)
    return np.maximum(values - tau, 0.0)


def nearest_density(matrix: np.ndarray, max_rank: int | None = None) -> np.ndarray:
    """Closest density matrix in Frobenius norm, optionally of bounded rank.

    Eigendecomposes the input, optionally keeps only the top ``max_rank``
    eigenvalues (ties resolved toward the lower position in the descending
    spectrum), projects the retained eigenvalues onto the probability
    simplex, and reassembles. Idempotent; the output satisfies the density
    invariants up to machine precision.
    """
    matrix = require_hermitian(matrix)
    dim = matrix.shape[0]
    w, v = np.linalg.eigh(matrix)
    order = np.argsort(-w, kind="stable")
    if max_rank is not None:
        if not 1 <= max_rank <= dim:
            raise ValueError(f"max_rank={max_rank} out of range [1, {dim}]")
        keep = order[:max_rank]
    else:
        keep = order
    out_w = np.zeros(dim)
    out_w[keep] = project_simplex(w[keep])
    out = (v * out_w) @ v.conj().T
    return 0.5 * (out + out.conj().T)


# ---------------------------------------------------------------------------
# state JSON format: {"n": int, "re": [[...]], "im": [[...]]}, row-major
# ---------------------------------------------------------------------------


def state_to_dict(matrix: np.ndarray) -> dict:
    matrix = np.asarray(matrix, dtype=complex)
    n = qubit_count(matrix)
    return {
        "n": n,
        "re": [[float(x) for x in row] for row in matrix.real],
        "im": [[float(x) for x in row] for row in matrix.imag],
    }


def _require_square_rows(obj, key: str, dim: int) -> np.ndarray:
    rows = obj[key]
    if not isinstance(rows, list) or len(rows) != dim:
        raise FormatError(key, f"expected a list of {dim} rows")
    out = np.empty((dim, dim), dtype=float)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise FormatError(f"{key}[{i}]", f"expected a row of {dim} numbers")
        for k, x in enumerate(row):
            if not isinstance(x, (int, float)) or isinstance(x, bool):
                raise FormatError(f"{key}[{i}][{k}]", "expected a number")
            out[i, k] = float(x)
    return out


def state_from_dict(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise FormatError("", "expected a JSON object")
    for key in ("n", "re", "im"):
        if key not in obj:
            raise FormatError(key, "missing key")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError("n", f"expected a positive integer, got {n!r}")
    try:
        pauli.check_qubits(n)
    except ValueError as exc:
        raise FormatError("n", str(exc)) from exc
    dim = 2**n
    re = _require_square_rows(obj, "re", dim)
    im = _require_square_rows(obj, "im", dim)
    return re + 1j * im


def save_state(path, matrix: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(matrix), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_state(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError("", f"invalid JSON: {exc}") from exc
    return state_from_dict(obj)
