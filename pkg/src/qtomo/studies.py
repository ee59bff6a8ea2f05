"""Monte-Carlo studies behind the CSV outputs of the command line.

Every study derives one RNG stream per (parameter point, repetition) from
the user seed, so records are reproducible and independent of execution
order; repetitions could run concurrently without changing any output.
Within the rank study all penalty modes are evaluated on the same simulated
dataset, so mode comparisons are paired.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import calibration, inversion, measurement, rankpen, states
from .errors import ConfigError


@dataclass
class StudyRecord:
    """One repetition of one parameter point."""

    d: int
    m: int
    mode: str
    rep: int
    k_hat: int
    nu: float
    op_error: float
    frob_error: float
    runtime: float


def _dataset_stream(seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(0, *key))


def _bootstrap_stream(seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(1, *key))


def _mode_penalty(
    mode: str,
    est: inversion.LinearEstimate,
    m: int,
    op_error: float,
    n: int,
    theta: float,
    eps: float,
    bootstrap_reps: int,
    stream: np.random.SeedSequence,
) -> float:
    if mode == "oracle":
        return op_error**2
    if mode == "theory":
        return calibration.nu_theory(n, m, theta, eps)
    if mode == "bootstrap":
        return calibration.nu_bootstrap(est, m, bootstrap_reps, stream)
    if mode.startswith("fixed:"):
        return float(mode.split(":", 1)[1])
    raise ConfigError(f"unknown penalty mode {mode!r}")


def rank_study(
    n: int,
    m: int,
    d_values: Sequence[int],
    modes: Sequence[str] = ("oracle", "theory"),
    reps: int = 20,
    seed: int = 0,
    theta: float = 0.0,
    eps: float = 1.0,
    bootstrap_reps: int = 20,
) -> tuple[list[StudyRecord], list[dict]]:
    """Frequency of recovering the true rank of diagonal test states.

    For each d, simulates ``reps`` datasets from the rank-d diagonal state,
    inverts each, and selects a rank per penalty mode. Aggregates report,
    per (d, mode): the selection frequency, the mean penalty, and the mean
    operator-norm error of the linear estimate.
    """
    if not d_values:
        raise ConfigError("empty d sweep")
    if reps < 1:
        raise ConfigError(f"reps={reps} must be >= 1")
    records: list[StudyRecord] = []
    for d in d_values:
        rho = states.diag_state(n, d)
        for rep in range(reps):
            t0 = time.perf_counter()
            ds = measurement.simulate_dataset(rho, m, _dataset_stream(seed, d, rep))
            est = inversion.linear_estimator(measurement.empirical_frequencies(ds))
            dec = rankpen.spectral(est)
            runtime = time.perf_counter() - t0
            diff = est.matrix - rho
            op_error = states.operator_norm(diff)
            frob_error = states.frobenius_norm(diff)
            for mode in modes:
                nu = _mode_penalty(
                    mode, est, m, op_error, n, theta, eps, bootstrap_reps,
                    _bootstrap_stream(seed, d, rep),
                )
                k_hat = rankpen.select_rank_threshold(dec, nu)
                records.append(
                    StudyRecord(
                        d=d, m=m, mode=mode, rep=rep, k_hat=k_hat, nu=nu,
                        op_error=op_error, frob_error=frob_error, runtime=runtime,
                    )
                )
    aggregates = []
    for d in d_values:
        for mode in modes:
            rows = [r for r in records if r.d == d and r.mode == mode]
            aggregates.append(
                {
                    "d": d,
                    "mode": mode,
                    "frequency": float(np.mean([r.k_hat == r.d for r in rows])),
                    "mean_nu": float(np.mean([r.nu for r in rows])),
                    "mean_error": float(np.mean([r.op_error for r in rows])),
                }
            )
    return records, aggregates


def error_study(
    n: int,
    d_values: Sequence[int],
    m_values: Sequence[int],
    reps: int = 20,
    seed: int = 0,
) -> tuple[list[StudyRecord], list[dict]]:
    """Operator-norm error of the linear estimator across ranks and sample sizes."""
    if not d_values or not m_values:
        raise ConfigError("empty sweep")
    if reps < 1:
        raise ConfigError(f"reps={reps} must be >= 1")
    records: list[StudyRecord] = []
    for d in d_values:
        rho = states.diag_state(n, d)
        for m in m_values:
            for rep in range(reps):
                t0 = time.perf_counter()
                ds = measurement.simulate_dataset(
                    rho, m, _dataset_stream(seed, d, m, rep)
                )
                est = inversion.linear_estimator(
                    measurement.empirical_frequencies(ds)
                )
                runtime = time.perf_counter() - t0
                diff = est.matrix - rho
                records.append(
                    StudyRecord(
                        d=d, m=m, mode="none", rep=rep, k_hat=-1, nu=float("nan"),
                        op_error=states.operator_norm(diff),
                        frob_error=states.frobenius_norm(diff),
                        runtime=runtime,
                    )
                )
    aggregates = []
    for d in d_values:
        for m in m_values:
            errs = [r.op_error for r in records if r.d == d and r.m == m]
            aggregates.append(
                {
                    "d": d,
                    "m": m,
                    "mean_error": float(np.mean(errs)),
                    "max_error": float(np.max(errs)),
                }
            )
    return records, aggregates


def spectrum_rows(est, nu: float) -> list[dict]:
    """Singular values in increasing order next to the constant threshold."""
    dec = rankpen.spectral(est)
    thr = float(np.sqrt(nu))
    values = dec.singular_values[::-1]
    return [
        {"index": i + 1, "singular_value": float(v), "threshold": thr}
        for i, v in enumerate(values)
    ]
