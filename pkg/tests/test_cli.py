import csv
import json

import numpy as np
import pytest

from picardevol import matrix_algebra
from picardevol.oracles import expm_oracle
from picardevol.cli import fitted_order, main
from picardevol.config import ConfigError, parse_config

M2_OPNORM = {"form": "matrix_opnorm", "which": "two"}


def write(tmp_path, cfg, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def base(curve_cells, **extra):
    cfg = {"algebra": {"type": "matrix", "n": 2}, "p": M2_OPNORM, "q": [M2_OPNORM],
           "curve": {"rep": "poly", "cells": curve_cells}}
    cfg.update(extra)
    return cfg


def read_rows(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_certify_matrix_opnorm(tmp_path):
    cfg = write(tmp_path, base([[[0, 0, 0, 0]]]))
    assert main(["certify", cfg, "--out-dir", str(tmp_path)]) == 0
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert cert["M"] == 1.0 and cert["r"] == 0.5


def test_certify_adversarial_weighted(tmp_path):
    w = {"form": "weighted_coeff", "weights": [1.0, 0.25, 4.0, 1.0]}
    cfg = write(tmp_path, base([[[0, 0, 0, 0]]], p=w, q=[w]))
    assert main(["certify", cfg, "--out-dir", str(tmp_path)]) == 0
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert cert["validated_up_to"] == 4 and cert["M"] > 1


def test_certify_failure_exit_code(tmp_path):
    # the weighted norm does not dominate the opnorm at any ratio we can prove
    cfg = write(tmp_path, base([[[0, 0, 0, 0]]], p=M2_OPNORM,
                               q=[{"form": "weighted_coeff", "weights": [1.0, 0.0, 1.0, 1.0]}]))
    assert main(["certify", cfg, "--out-dir", str(tmp_path)]) == 2


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["certify", str(bad), "--out-dir", str(tmp_path)]) == 1
    cfg = write(tmp_path, {"algebra": {"type": "matrix", "n": 2}, "p": {"form": "weighted_coeff", "weights": [1]}})
    assert main(["certify", cfg]) == 1


def test_depth_cap_exit_code(tmp_path):
    cfg = write(tmp_path, base([[[40.0, 0, 0, 40.0]]]))
    assert main(["evolve", cfg, "--out-dir", str(tmp_path), "--tol", "1e-12"]) == 3


def test_evolve_zero_curve_rows_are_unit(tmp_path):
    cfg = write(tmp_path, base([[[0, 0, 0, 0]]]))
    assert main(["evolve", cfg, "--out-dir", str(tmp_path), "--grid", "16"]) == 0
    head, rows = read_rows(tmp_path / "trajectory.csv")
    assert head == ["t", "coeff_0", "coeff_1", "coeff_2", "coeff_3"]
    assert rows.shape == (16, 5)
    assert np.all(rows[:, 1:] == [1.0, 0.0, 0.0, 1.0])


def test_evolve_constant_matches_expm(tmp_path):
    c = [0.3, -1.1, 0.7, 0.2]
    cfg = write(tmp_path, base([[c]]))
    assert main(["evolve", cfg, "--out-dir", str(tmp_path)]) == 0
    _, rows = read_rows(tmp_path / "trajectory.csv")
    assert rows.shape == (256, 5)
    ref = expm_oracle(matrix_algebra(2).element(c)).coeffs
    assert np.max(np.abs(rows[-1, 1:] - ref)) <= 1e-10
    summary = json.loads((tmp_path / "evolution.json").read_text())
    assert {"depth", "M", "R", "tail_bound", "residual", "slack"} <= set(summary)


def test_evolve_diagonal_matches_closed_form(tmp_path):
    cfg = {"algebra": {"type": "diagonal", "d": 2}, "p": {"form": "max_coeff"},
           "curve": {"rep": "poly", "cells": [[[1.0, 0.0], [0.0, 2.0]]]}}
    assert main(["evolve", write(tmp_path, cfg), "--out-dir", str(tmp_path)]) == 0
    _, rows = read_rows(tmp_path / "trajectory.csv")
    ts = rows[:, 0]
    assert np.allclose(rows[:, 1:], np.stack([np.exp(ts), np.exp(ts ** 2)], axis=-1), atol=1e-10)


def test_complex_trajectory_columns(tmp_path):
    cfg = {"algebra": {"type": "diagonal", "d": 1, "field": "complex"}, "p": {"form": "max_coeff"},
           "curve": {"rep": "poly", "cells": [[[[0.0, 1.0]]]]}}
    assert main(["evolve", write(tmp_path, cfg), "--out-dir", str(tmp_path), "--grid", "5"]) == 0
    head, rows = read_rows(tmp_path / "trajectory.csv")
    assert head == ["t", "coeff_0_re", "coeff_0_im"]
    assert np.allclose(rows[:, 1], np.cos(rows[:, 0]), atol=1e-10)
    assert np.allclose(rows[:, 2], np.sin(rows[:, 0]), atol=1e-10)


@pytest.mark.parametrize("oracle,order", [("euler", 1.0), ("exp", 2.0)])
def test_compare_orders(tmp_path, oracle, order):
    cells = [[[0.2, 0.5, -0.4, 0.1], [0.6, -0.3, 0.2, 0.0], [0.0, 0.4, 0.3, -0.5]]]
    cfg = write(tmp_path, base(cells, steps=[64, 128, 256, 512, 1024]))
    assert main(["compare", cfg, "--out-dir", str(tmp_path), "--oracle", oracle, "--jobs", "2"]) == 0
    report = json.loads((tmp_path / "compare.json").read_text())
    tol = 0.2 if oracle == "euler" else 0.3
    assert abs(report["fitted_order"] - order) <= tol
    assert "fitted order" in (tmp_path / "compare.txt").read_text()


def test_compare_zero_curve(tmp_path):
    cfg = write(tmp_path, base([[[0, 0, 0, 0]]], steps=[8, 16]))
    assert main(["compare", cfg, "--out-dir", str(tmp_path), "--oracle", "euler"]) == 0
    report = json.loads((tmp_path / "compare.json").read_text())
    assert [r["discrepancy"] for r in report["rows"]] == [0.0, 0.0]
    assert report["fitted_order"] is None


def test_compare_expm_and_commutative(tmp_path):
    cfg = write(tmp_path, base([[[0.3, -1.1, 0.7, 0.2]]]))
    assert main(["compare", cfg, "--out-dir", str(tmp_path), "--oracle", "expm"]) == 0
    assert json.loads((tmp_path / "compare.json").read_text())["rows"][0]["discrepancy"] <= 1e-10
    diag = {"algebra": {"type": "diagonal", "d": 2}, "p": {"form": "max_coeff"},
            "curve": {"rep": "poly", "cells": [[[1.0, 0.0], [0.0, 2.0]]]}}
    assert main(["compare", write(tmp_path, diag, "d.json"), "--out-dir", str(tmp_path),
                 "--oracle", "commutative"]) == 0
    assert json.loads((tmp_path / "compare.json").read_text())["rows"][0]["discrepancy"] <= 1e-10


def test_mu_norm_command(tmp_path):
    cfg = write(tmp_path, base([[[0, 0, 0, 0]]], mu_norm={"n": 3, "mode": "sampled", "samples": 500}))
    assert main(["mu-norm", cfg, "--out-dir", str(tmp_path), "--seed", "4"]) == 0
    est = json.loads((tmp_path / "mu_norm.json").read_text())["estimates"]
    assert [e["n"] for e in est] == [1, 2, 3]
    assert all(0.5 <= e["lower"] <= 1 + 1e-9 for e in est)


def test_overrides_and_validation():
    raw = base([[[0, 0, 0, 0]]])
    cfg = parse_config(raw, tol=1e-6, grid=10, seed=9, out_dir="x", oracle="euler", jobs=None)
    assert (cfg.tol, cfg.grid, cfg.seed, str(cfg.out_dir), cfg.oracle, cfg.jobs) == (1e-6, 10, 9, "x", "euler", 1)
    with pytest.raises(ConfigError):
        parse_config(raw, tol=-1.0)
    with pytest.raises(ConfigError):
        parse_config({"algebra": {"type": "matrix", "n": 2}})


def test_fitted_order():
    assert fitted_order([10, 20, 40], [1.0, 0.25, 0.0625]) == pytest.approx(2.0)
    assert fitted_order([10, 20], [0.0, 0.0]) is None
