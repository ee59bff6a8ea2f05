"""Command-line front end: simulation, estimation, and study CSVs.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 data-format or
data-invariant violation. All commands are deterministic given --seed;
re-running an invocation produces byte-identical output files.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import calibration, inversion, measurement, rankpen, states, studies
from ._kernels import backend
from .errors import ConfigError, FormatError

STATE_NAMES = ("diag", "ghz", "w", "mixture")

RANK_STUDY_HEADER = ["d", "mode", "frequency", "mean_nu", "mean_error"]
ERROR_STUDY_HEADER = ["d", "m", "mean_error", "max_error"]
SPECTRUM_HEADER = ["index", "singular_value", "threshold"]


def _parse_int_list(text: str, flag: str) -> list[int]:
    items = [part.strip() for part in text.split(",") if part.strip()]
    if not items:
        raise ConfigError(f"{flag}: empty sweep")
    try:
        return [int(part) for part in items]
    except ValueError as exc:
        raise ConfigError(f"{flag}: expected comma-separated integers, got {text!r}") from exc


def _build_state(args) -> np.ndarray:
    """State matrix from --state/--d/--p, or from a state JSON file."""
    name = args.state
    if name == "diag":
        if args.d is None:
            raise ConfigError("--state diag needs --d")
        return states.diag_state(args.n, args.d)
    if name == "ghz":
        return states.ghz(args.n)
    if name == "w":
        return states.w_state(args.n)
    if name == "mixture":
        if args.d is None or args.p is None:
            raise ConfigError("--state mixture needs --d and --p")
        return states.mixture(args.n, args.d, args.p)
    # anything else is a path to a state JSON file
    matrix = states.load_state(name)
    if states.qubit_count(matrix) != args.n:
        raise ConfigError(
            f"state file {name!r} has n={states.qubit_count(matrix)}, expected --n {args.n}"
        )
    return matrix


def _penalty_choice(args) -> calibration.PenaltyChoice:
    text = args.penalty
    mode, value = text, None
    if text.startswith("fixed:"):
        mode, raw = "fixed", text.split(":", 1)[1]
        try:
            value = float(raw)
        except ValueError as exc:
            raise ConfigError(f"--penalty fixed:VALUE needs a number, got {raw!r}") from exc
    elif text not in calibration.PENALTY_MODES:
        try:
            value = float(text)
            mode = "fixed"
        except ValueError as exc:
            raise ConfigError(
                f"--penalty must be one of {calibration.PENALTY_MODES}, "
                f"'fixed:VALUE', or a bare number; got {text!r}"
            ) from exc
    return calibration.PenaltyChoice(
        mode=mode,
        value=value,
        theta=args.theta,
        eps=args.eps,
        reps=args.reps,
        seed=args.seed,
    )


def _resolve_penalty(args, est, m) -> tuple[float, dict, str]:
    choice = _penalty_choice(args)
    rho_true = None
    if choice.mode == "oracle":
        if args.state is None:
            raise ConfigError("--penalty oracle needs --state <state JSON file>")
        rho_true = states.load_state(args.state)
    nu, details = calibration.resolve_penalty(choice, est, m, rho_true)
    return nu, details, choice.mode


def _write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    rho = _build_state(args)
    dataset = measurement.simulate_dataset(rho, args.m, args.seed)
    measurement.save_dataset(args.out, dataset)
    nonzero = int(np.count_nonzero(dataset.counts))
    print(
        f"wrote {args.out}: n={dataset.n} m={dataset.m} "
        f"settings={3**dataset.n} nonzero_cells={nonzero}"
    )
    return 0


def _estimate_from_file(path):
    dataset = measurement.load_dataset(path)
    freqs = measurement.empirical_frequencies(dataset)
    return dataset, inversion.linear_estimator(freqs)


def cmd_estimate(args) -> int:
    dataset, est = _estimate_from_file(args.dataset)
    nu, _details, mode = _resolve_penalty(args, est, dataset.m)
    fit = rankpen.penalized_fit(est, nu)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "fit.json", rankpen.fit_report_dict(fit))
    states.save_state(out_dir / "estimate_state.json", fit.estimate)
    states.save_state(out_dir / "physical_state.json", fit.physical_estimate)
    print(f"penalty mode={mode} nu={nu!r} threshold={float(np.sqrt(nu))!r}")
    print(f"k_hat={fit.k_hat}")
    print("singular_values=" + " ".join(repr(float(v)) for v in fit.singular_values))
    print(f"wrote {out_dir / 'fit.json'}")
    return 0


def cmd_rank_study(args) -> int:
    d_values = _parse_int_list(args.d, "--d")
    modes = [part.strip() for part in args.penalty.split(",") if part.strip()]
    if not modes:
        raise ConfigError("--penalty: empty mode list")
    for mode in modes:
        if mode.startswith("fixed:"):
            try:
                float(mode.split(":", 1)[1])
            except ValueError as exc:
                raise ConfigError(f"penalty mode {mode!r}: fixed:VALUE needs a number") from exc
        elif mode not in ("oracle", "theory", "bootstrap"):
            raise ConfigError(f"rank-study penalty mode {mode!r} not recognized")
    _records, aggregates = studies.rank_study(
        args.n,
        args.m,
        d_values,
        modes=modes,
        reps=args.reps,
        seed=args.seed,
        theta=args.theta,
        eps=args.eps,
        bootstrap_reps=args.bootstrap_reps,
    )
    rows = [
        [a["d"], a["mode"], a["frequency"], a["mean_nu"], a["mean_error"]]
        for a in aggregates
    ]
    _write_csv(args.out, RANK_STUDY_HEADER, rows)
    print(f"wrote {args.out}: {len(rows)} rows ({len(d_values)} ranks x {len(modes)} modes)")
    return 0


def cmd_error_study(args) -> int:
    d_values = _parse_int_list(args.d, "--d")
    m_values = _parse_int_list(args.m, "--m")
    _records, aggregates = studies.error_study(
        args.n, d_values, m_values, reps=args.reps, seed=args.seed
    )
    rows = [[a["d"], a["m"], a["mean_error"], a["max_error"]] for a in aggregates]
    _write_csv(args.out, ERROR_STUDY_HEADER, rows)
    print(f"wrote {args.out}: {len(rows)} rows")
    return 0


def cmd_spectrum(args) -> int:
    dataset, est = _estimate_from_file(args.dataset)
    nu, _details, _mode = _resolve_penalty(args, est, dataset.m)
    rows = [
        [r["index"], r["singular_value"], r["threshold"]]
        for r in studies.spectrum_rows(est, nu)
    ]
    _write_csv(args.out, SPECTRUM_HEADER, rows)
    above = sum(1 for r in rows if r[1] >= r[2])
    print(f"wrote {args.out}: {len(rows)} singular values, {above} above threshold")
    return 0


def cmd_calibrate(args) -> int:
    dataset, est = _estimate_from_file(args.dataset)
    nu, details, mode = _resolve_penalty(args, est, dataset.m)
    report = calibration.calibration_report_dict(mode, nu, details)
    if args.out:
        _write_json(args.out, report)
        print(f"wrote {args.out}: nu={nu!r}")
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_penalty_flags(sub) -> None:
    sub.add_argument(
        "--penalty",
        default="theory",
        help="oracle | theory | bootstrap | fixed:VALUE (or a bare number)",
    )
    sub.add_argument("--theta", type=float, default=0.0, help="theory-penalty theta (default 0)")
    sub.add_argument("--eps", type=float, default=1.0, help="theory-penalty eps in (0, 1] (default 1)")
    sub.add_argument("--reps", type=int, default=20, help="bootstrap repetitions (default 20)")
    sub.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtomo",
        description=(
            "Reconstruct an n-qubit state from repeated Pauli measurements and "
            "estimate its rank by penalized spectral thresholding."
        ),
        epilog=f"active kernel backend: {backend()}",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser(
        "simulate",
        help="simulate a measurement dataset and write it as JSON",
    )
    p.add_argument("--n", type=int, required=True, help="number of qubits")
    p.add_argument("--m", type=int, required=True, help="repetitions per setting")
    p.add_argument(
        "--state",
        default="diag",
        help="diag | ghz | w | mixture | path to a state JSON file (default diag)",
    )
    p.add_argument("--d", type=int, default=None, help="rank of the diag/mixture state")
    p.add_argument("--p", type=float, default=None, help="mixture weight in [0, 1]")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--out", required=True, help="output dataset JSON path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "estimate",
        help="invert a dataset and run the rank-penalized fit",
        epilog=(
            "writes fit.json (nu, k_hat, singular_values, objective), "
            "estimate_state.json and physical_state.json into --out"
        ),
    )
    p.add_argument("dataset", help="dataset JSON file")
    p.add_argument(
        "--state",
        default=None,
        help="true-state JSON file (required for --penalty oracle)",
    )
    _add_penalty_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser(
        "rank-study",
        help="frequency of correct rank selection over simulated repetitions",
        epilog=f"CSV columns: {','.join(RANK_STUDY_HEADER)}",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", required=True, help="comma-separated ranks, e.g. 1,2,3,4,5")
    p.add_argument(
        "--penalty",
        default="oracle,theory",
        help="comma-separated penalty modes (default oracle,theory)",
    )
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--reps", type=int, default=20, help="study repetitions (default 20)")
    p.add_argument("--bootstrap-reps", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_rank_study)

    p = sub.add_parser(
        "error-study",
        help="operator-norm error of the linear estimator across d and m",
        epilog=f"CSV columns: {','.join(ERROR_STUDY_HEADER)}",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", required=True, help="comma-separated repetition counts")
    p.add_argument("--d", required=True, help="comma-separated ranks")
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_error_study)

    p = sub.add_parser(
        "spectrum",
        help="singular values of the linear estimate next to the threshold",
        epilog=f"CSV columns: {','.join(SPECTRUM_HEADER)} "
        "(singular values in increasing order)",
    )
    p.add_argument("dataset", help="dataset JSON file")
    p.add_argument("--state", default=None, help="true-state JSON file for --penalty oracle")
    _add_penalty_flags(p)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser(
        "calibrate",
        help="evaluate a penalty choice on a dataset and report it as JSON",
    )
    p.add_argument("dataset", help="dataset JSON file")
    p.add_argument("--state", default=None, help="true-state JSON file for --penalty oracle")
    _add_penalty_flags(p)
    p.add_argument("--out", default=None, help="report JSON path (default: stdout)")
    p.set_defaults(func=cmd_calibrate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 4
    except FileNotFoundError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
