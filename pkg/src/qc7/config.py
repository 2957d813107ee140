"""Run configuration shared by the CLI subcommands."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields

from .errors import ConfigError


@dataclass
class RunConfig:
    seed: int = 7
    sample_points: int = 10
    random_functions: int = 20
    max_poly_degree: int = 4
    spectral_degree: int = 2
    eigen_tol: str = "1e-12"
    output_format: str = "json"   # json | csv | markdown
    output_path: str = ""

    def validate(self):
        for name in ("sample_points", "random_functions", "max_poly_degree",
                     "spectral_degree"):
            if getattr(self, name) < 1:
                raise ConfigError("%s must be >= 1" % name)
        try:
            tol = float(self.eigen_tol)
        except ValueError as exc:
            raise ConfigError("eigen_tol is not a number: %r"
                              % self.eigen_tol) from exc
        if tol <= 0:
            raise ConfigError("eigen_tol must be positive")
        if self.output_format not in ("json", "csv", "markdown"):
            raise ConfigError("unknown output format %r" % self.output_format)
        return self

    @property
    def tol(self):
        return float(self.eigen_tol)

    @classmethod
    def load(cls, path=None, overrides=None):
        data = {}
        if path:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
            unknown = set(data) - {f.name for f in fields(cls)}
            if unknown:
                raise ConfigError("unknown config keys: %s" % sorted(unknown))
        cfg = cls(**data)
        for key, value in (overrides or {}).items():
            if value is not None:
                setattr(cfg, key, value)
        return cfg.validate()


def thread_budget():
    """Parallelism cap from QC7_THREADS (default 1)."""
    raw = os.environ.get("QC7_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError("QC7_THREADS is not an integer: %r" % raw)
    return max(1, n)


def pmap(fn, items):
    """Order-preserving map, parallel when QC7_THREADS > 1.  Results are
    exact and independent, so scheduling cannot change them."""
    items = list(items)
    n = thread_budget()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
