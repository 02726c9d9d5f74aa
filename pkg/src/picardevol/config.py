"""Run configuration: one JSON file per run, command-line flags override fields."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import Algebra, make_algebra
from .curves import make_curve
from .errors import PicardEvolError
from .seminorms import Seminorm, make_seminorm


class ConfigError(PicardEvolError, ValueError):
    """The config file does not parse or does not cross-validate."""


@dataclass
class RunConfig:
    algebra: Algebra
    p: Seminorm
    candidates: list[Seminorm]
    curve: object = None
    tol: float = 1e-10
    grid: int = 256
    oracle: str = "exp"
    out_dir: Path = Path(".")
    seed: int = 0
    max_n: int = 4
    steps: list[int] = field(default_factory=lambda: [16, 32, 64, 128, 256, 512, 1024])
    mu_n: int = 2
    mu_mode: str = "sampled"
    samples: int = 10_000
    jobs: int = 1
    raw: dict = field(default_factory=dict, repr=False)


def load_config(path, **overrides) -> RunConfig:
    """Read ``path`` and apply non-None ``overrides`` (tol, grid, seed, out_dir, oracle, jobs)."""
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(raw, **overrides)


def parse_config(raw: dict, **overrides) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    try:
        algebra = make_algebra(raw["algebra"])
        p = make_seminorm(algebra, raw["p"])
        cands = raw.get("q", [raw["p"]])
        if isinstance(cands, dict):
            cands = [cands]
        candidates = [make_seminorm(algebra, s) for s in cands]
        curve = make_curve(algebra, raw["curve"]) if "curve" in raw else None
        mu = raw.get("mu_norm", {})
        cfg = RunConfig(
            algebra=algebra,
            p=p,
            candidates=candidates,
            curve=curve,
            tol=float(raw.get("tol", 1e-10)),
            grid=int(raw.get("grid", 256)),
            oracle=str(raw.get("oracle", "exp")),
            out_dir=Path(raw.get("out_dir", ".")),
            seed=int(raw.get("seed", 0)),
            max_n=int(raw.get("max_n", 4)),
            steps=[int(s) for s in raw.get("steps", [16, 32, 64, 128, 256, 512, 1024])],
            mu_n=int(mu.get("n", 2)),
            mu_mode=str(mu.get("mode", "sampled")),
            samples=int(mu.get("samples", 10_000)),
            jobs=int(raw.get("jobs", 1)),
            raw=raw,
        )
    except KeyError as exc:
        raise ConfigError(f"missing config field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, Path(value) if key == "out_dir" else value)
    if cfg.tol <= 0 or cfg.grid < 2 or cfg.jobs < 1:
        raise ConfigError("need tol > 0, grid >= 2, jobs >= 1")
    return cfg
