"""Batch front-end: ``picardevol {certify,evolve,compare,mu-norm} CONFIG``.

Exit codes: 0 ok, 1 parse error, 2 certification failure, 3 depth cap,
4 numerical breakdown.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .curves import PolyCurve
from .errors import (AlgebraError, CertificationError, CurveError, DepthCapError,
                     NumericalBreakdownError, SeminormError)
from .oracles import ORACLES, commutative_closed_form, expm_oracle, step_product
from .picard import evolve
from .seminorms import certify_star, mu_norm

log = logging.getLogger("picardevol")

EXIT_OK, EXIT_PARSE, EXIT_CERT, EXIT_DEPTH, EXIT_BREAKDOWN = 0, 1, 2, 3, 4


def _write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory(path: Path, ts, values) -> None:
    """CSV ``t,coeff_0,...``; complex coefficients split into ``_re``/``_im`` columns."""
    values = np.asarray(values)
    dim = values.shape[1]
    if np.iscomplexobj(values):
        head = ["t"] + [f"coeff_{i}_{part}" for i in range(dim) for part in ("re", "im")]
        rows = [[t] + [v for z in row for v in (z.real, z.imag)] for t, row in zip(ts, values)]
    else:
        head = ["t"] + [f"coeff_{i}" for i in range(dim)]
        rows = [[t, *row] for t, row in zip(ts, values)]
    lines = [",".join(head)] + [",".join(_fmt(v) for v in row) for row in rows]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def fitted_order(steps, errors) -> float | None:
    """Slope of ``-log(error)`` against ``log(steps)``; None with fewer than two positive errors."""
    pts = [(s, e) for s, e in zip(steps, errors) if e > 0 and math.isfinite(e)]
    if len(pts) < 2:
        return None
    x = np.log([s for s, _ in pts])
    y = np.log([e for _, e in pts])
    return float(-np.polyfit(x, y, 1)[0])


# ---------------------------------------------------------------------------
# commands


def cmd_certify(cfg: RunConfig) -> dict:
    cert = certify_star(cfg.p, cfg.candidates, max_n=cfg.max_n)
    out = cert.to_json()
    _write_json(cfg.out_dir / "certificate.json", out)
    return out


def _need_curve(cfg: RunConfig):
    if cfg.curve is None:
        raise ConfigError("config has no curve")
    return cfg.curve


def cmd_evolve(cfg: RunConfig) -> dict:
    gamma = _need_curve(cfg)
    cert = certify_star(cfg.p, cfg.candidates, max_n=cfg.max_n)
    res = evolve(gamma, cfg.p, cert, cfg.tol, grid=cfg.grid)
    ts, vals = res.trajectory()
    write_trajectory(cfg.out_dir / "trajectory.csv", ts, vals)
    out = res.certificate_json()
    _write_json(cfg.out_dir / "evolution.json", out)
    return out


def _compare_rows(cfg: RunConfig):
    gamma = _need_curve(cfg)
    p = cfg.p
    cert = certify_star(p, cfg.candidates, max_n=cfg.max_n)
    ref = evolve(gamma, p, cert, cfg.tol, grid=cfg.grid)
    end = ref(1.0)
    if cfg.oracle in ("euler", "exp"):
        def run(steps):
            value = step_product(gamma, steps, cfg.oracle).value
            return steps, p(value - end)

        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(run, cfg.steps))
        return ref, rows
    if cfg.oracle == "expm":
        if not isinstance(gamma, PolyCurve) or gamma.degree != 0 or gamma.cells != 1:
            raise ConfigError("expm oracle needs a constant curve")
        c = gamma(0.0)
        return ref, [(0, p(expm_oracle(c) - end))]
    if cfg.oracle == "commutative":
        closed = commutative_closed_form(gamma).value
        diff = closed.values(ref.grid) - ref.eta.values(ref.grid)
        return ref, [(0, float(np.max(p.eval_coeffs(diff))))]
    raise ConfigError(f"unknown oracle {cfg.oracle!r}; choose from {', '.join(ORACLES)}")


def cmd_compare(cfg: RunConfig) -> dict:
    ref, rows = _compare_rows(cfg)
    steps = [int(s) for s, _ in rows]
    errs = [float(e) for _, e in rows]
    order = fitted_order(steps, errs) if cfg.oracle in ("euler", "exp") else None
    out = {
        "oracle": cfg.oracle,
        "rows": [{"steps": s, "discrepancy": e} for s, e in zip(steps, errs)],
        "fitted_order": order,
        "reference": {"depth": int(ref.depth), "tail_bound": float(ref.tail_bound),
                      "residual": float(ref.residual)},
    }
    _write_json(cfg.out_dir / "compare.json", out)
    lines = [f"oracle: {cfg.oracle}", f"{'steps':>8}  discrepancy"]
    lines += [f"{s:>8}  {_fmt(e)}" for s, e in zip(steps, errs)]
    lines.append("fitted order: " + ("n/a" if order is None else f"{order:.4f}"))
    (cfg.out_dir / "compare.txt").write_text("\n".join(lines) + "\n")
    return out


def cmd_mu_norm(cfg: RunConfig) -> dict:
    rows = []
    for q in cfg.candidates:
        for n in range(1, cfg.mu_n + 1):
            est = mu_norm(cfg.p, q, n, cfg.mu_mode, samples=cfg.samples, seed=cfg.seed)
            rows.append({"q": q.to_spec(), "n": n, "lower": est.lower,
                         "upper": None if math.isinf(est.upper) else est.upper,
                         "method": est.method})
    out = {"mode": cfg.mu_mode, "seed": cfg.seed, "samples": cfg.samples, "estimates": rows}
    _write_json(cfg.out_dir / "mu_norm.json", out)
    return out


COMMANDS = {"certify": cmd_certify, "evolve": cmd_evolve, "compare": cmd_compare, "mu-norm": cmd_mu_norm}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="picardevol", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("config", help="JSON run configuration")
    ap.add_argument("--tol", type=float)
    ap.add_argument("--grid", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out-dir", dest="out_dir")
    ap.add_argument("--oracle", choices=ORACLES)
    ap.add_argument("--jobs", type=int)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, tol=args.tol, grid=args.grid, seed=args.seed,
                          out_dir=args.out_dir, oracle=args.oracle, jobs=args.jobs)
        COMMANDS[args.command](cfg)
    except (ConfigError, AlgebraError, CurveError) as exc:
        log.error("%s", exc)
        return EXIT_PARSE
    except (CertificationError, SeminormError) as exc:
        log.error("%s", exc)
        return EXIT_CERT
    except DepthCapError as exc:
        log.error("%s", exc)
        return EXIT_DEPTH
    except NumericalBreakdownError as exc:
        log.error("%s", exc)
        return EXIT_BREAKDOWN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
