import json

import numpy as np

from qtomo import measurement, states
from qtomo.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def test_simulate_writes_dataset_and_summary(tmp_path, capsys):
    out = tmp_path / "data.json"
    code = run("simulate", "--n", 2, "--m", 50, "--state", "diag", "--d", 2,
               "--seed", 7, "--out", out)
    assert code == 0
    assert "n=2" in capsys.readouterr().out
    ds = measurement.load_dataset(out)
    assert ds.n == 2 and ds.m == 50
    assert (ds.counts.sum(axis=1) == 50).all()
    assert len(measurement.dataset_to_dict(ds)["counts"]) >= 9


def test_simulate_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("simulate", "--n", 2, "--m", 30, "--d", 1, "--seed", 3, "--out", a)
    run("simulate", "--n", 2, "--m", 30, "--d", 1, "--seed", 3, "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_simulate_range_error_exit_2(tmp_path, capsys):
    code = run("simulate", "--n", 2, "--m", 10, "--d", 5, "--out", tmp_path / "x.json")
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_simulate_mixture_needs_p(tmp_path):
    code = run("simulate", "--n", 2, "--m", 10, "--state", "mixture", "--d", 2,
               "--out", tmp_path / "x.json")
    assert code == 2


def test_estimate_round_trip(tmp_path, capsys):
    data = tmp_path / "data.json"
    run("simulate", "--n", 2, "--m", 100, "--d", 2, "--seed", 1, "--out", data)
    out_dir = tmp_path / "fit"
    code = run("estimate", data, "--penalty", "fixed:0.01", "--out", out_dir)
    assert code == 0
    captured = capsys.readouterr()
    assert "k_hat=" in captured.out
    assert captured.err == ""

    report = json.loads((out_dir / "fit.json").read_text())
    assert set(report) == {"nu", "k_hat", "singular_values", "objective"}
    assert report["nu"] == 0.01
    est = states.load_state(out_dir / "estimate_state.json")
    phys = states.load_state(out_dir / "physical_state.json")
    assert est.shape == (4, 4)
    states.require_density(phys)


def test_estimate_theory_penalty_well_formed(tmp_path):
    data = tmp_path / "data.json"
    run("simulate", "--n", 2, "--m", 60, "--state", "w", "--seed", 2, "--out", data)
    out_dir = tmp_path / "fit"
    code = run("estimate", data, "--penalty", "theory", "--theta", 0.0, "--out", out_dir)
    assert code == 0
    report = json.loads((out_dir / "fit.json").read_text())
    # theory threshold is far above any eigenvalue here: tiny or zero rank
    assert 0 <= report["k_hat"] <= 1


def test_estimate_missing_file_exit_3(tmp_path):
    assert run("estimate", tmp_path / "nope.json", "--out", tmp_path / "o") == 3


def test_estimate_malformed_json_exit_4(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "m": 10')
    assert run("estimate", bad, "--out", tmp_path / "o") == 4

    bad.write_text(json.dumps({
        "n": 1, "m": 2,
        "counts": [{"setting": "x", "outcome": "+&", "count": 2}],
    }))
    code = run("estimate", bad, "--out", tmp_path / "o")
    assert code == 4
    assert "counts[0].outcome" in capsys.readouterr().err


def test_estimate_invariant_violation_exit_4(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 1, "m": 5, "counts": []}))
    assert run("estimate", bad, "--out", tmp_path / "o") == 4


def test_estimate_oracle_needs_state_exit_2(tmp_path):
    data = tmp_path / "data.json"
    run("simulate", "--n", 1, "--m", 20, "--d", 1, "--out", data)
    assert run("estimate", data, "--penalty", "oracle", "--out", tmp_path / "o") == 2


def test_estimate_oracle_with_state_file(tmp_path):
    truth = tmp_path / "truth.json"
    states.save_state(truth, states.diag_state(2, 2))
    data = tmp_path / "data.json"
    run("simulate", "--n", 2, "--m", 200, "--d", 2, "--seed", 5, "--out", data)
    code = run("estimate", data, "--penalty", "oracle", "--state", truth,
               "--out", tmp_path / "o")
    assert code == 0
    report = json.loads((tmp_path / "o" / "fit.json").read_text())
    assert report["k_hat"] == 2


def test_rank_study_csv(tmp_path):
    out = tmp_path / "study.csv"
    code = run("rank-study", "--n", 2, "--m", 60, "--d", "1,2", "--penalty",
               "oracle,theory", "--reps", 3, "--seed", 0, "--out", out)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "d,mode,frequency,mean_nu,mean_error"
    assert len(lines) == 1 + 2 * 2
    for line in lines[1:]:
        freq = float(line.split(",")[2])
        assert 0.0 <= freq <= 1.0

    again = tmp_path / "again.csv"
    run("rank-study", "--n", 2, "--m", 60, "--d", "1,2", "--penalty",
        "oracle,theory", "--reps", 3, "--seed", 0, "--out", again)
    assert out.read_bytes() == again.read_bytes()


def test_error_study_csv_and_empty_sweep(tmp_path):
    out = tmp_path / "err.csv"
    code = run("error-study", "--n", 2, "--m", "20,40", "--d", "1,2", "--reps", 3,
               "--seed", 1, "--out", out)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "d,m,mean_error,max_error"
    assert len(lines) == 1 + 4

    assert run("error-study", "--n", 2, "--m", "20", "--d", " ", "--reps", 3,
               "--out", tmp_path / "e2.csv") == 2


def test_spectrum_rank2_dominated(tmp_path):
    # two eigenvalues far above a bootstrap-calibrated threshold
    truth = tmp_path / "truth.json"
    states.save_state(truth, np.diag([0.6, 0.4, 0.0, 0.0]).astype(complex))
    data = tmp_path / "data.json"
    run("simulate", "--n", 2, "--m", 100, "--state", truth, "--seed", 4, "--out", data)
    out = tmp_path / "spec.csv"
    code = run("spectrum", data, "--penalty", "bootstrap", "--reps", 20, "--seed", 4,
               "--out", out)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "index,singular_value,threshold"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 4
    values = [float(r[1]) for r in rows]
    assert values == sorted(values)
    thresholds = {r[2] for r in rows}
    assert len(thresholds) == 1
    above = sum(v >= float(r[2]) for v, r in zip(values, rows))
    assert above == 2


def test_spectrum_rejects_zero_dataset(tmp_path):
    bad = tmp_path / "zero.json"
    bad.write_text(json.dumps({"n": 1, "m": 4, "counts": []}))
    assert run("spectrum", bad, "--out", tmp_path / "s.csv") == 4


def test_calibrate_fixed_report(tmp_path):
    data = tmp_path / "data.json"
    run("simulate", "--n", 1, "--m", 30, "--d", 1, "--out", data)
    out = tmp_path / "cal.json"
    code = run("calibrate", data, "--penalty", "0.05", "--out", out)
    assert code == 0
    report = json.loads(out.read_text())
    assert report == {"mode": "fixed", "value": 0.05, "details": {}}


def test_calibrate_bootstrap_details(tmp_path, capsys):
    data = tmp_path / "data.json"
    run("simulate", "--n", 1, "--m", 40, "--d", 2, "--seed", 6, "--out", data)
    capsys.readouterr()  # drop the simulate summary
    code = run("calibrate", data, "--penalty", "bootstrap", "--reps", 5, "--seed", 6)
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["mode"] == "bootstrap"
    assert len(report["details"]["norms"]) == 5


def test_unknown_penalty_exit_2(tmp_path):
    data = tmp_path / "data.json"
    run("simulate", "--n", 1, "--m", 10, "--d", 1, "--out", data)
    assert run("estimate", data, "--penalty", "magic", "--out", tmp_path / "o") == 2


def test_no_command_prints_help(capsys):
    assert main([]) == 2
    assert "COMMAND" in capsys.readouterr().out


def test_ghz_bootstrap_rank_selection(tmp_path):
    # rank-1 state: top singular value sits far above the bootstrap threshold,
    # the next one right at the noise scale, so selection lands on 1 with an
    # occasional 2
    truth = tmp_path / "ghz.json"
    states.save_state(truth, states.ghz(4))
    k_hats = []
    for seed in range(20):
        data = tmp_path / f"data_{seed}.json"
        run("simulate", "--n", 4, "--m", 100, "--state", truth, "--seed", seed,
            "--out", data)
        out_dir = tmp_path / f"fit_{seed}"
        code = run("estimate", data, "--penalty", "bootstrap", "--reps", 20,
                   "--seed", seed, "--out", out_dir)
        assert code == 0
        k_hats.append(json.loads((out_dir / "fit.json").read_text())["k_hat"])
    assert all(k in (1, 2) for k in k_hats)
    assert sum(k == 1 for k in k_hats) >= 12
