"""Named verification suites, report serialization and table emission."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from .algebra_core import ExactComplex, format_rational
from .checks import Check, Report
from .clifford import verify_clifford
from .conformal_geometry import verify_geometry
from .fock_ladder import build_basis, spectrum_rows, verify_ladder
from .modular_thermo import ThermoParams, partition_Z, planck_rows, verify_modular, verify_planck
from .vertex import format_zonal, harmonic_h_zonal, verify_vertex

SUITES = ("clifford", "ladder", "geometry", "vertex", "modular", "planck")
TABLES = ("spectrum", "h_polynomials", "z_coefficients", "planck_modes")
OUTPUTS = ("json", "csv", "text")
THREADS_ENV = "CONFORMAL_LADDER_THREADS"


class ConfigError(ValueError):
    """Invalid suite configuration (exit status 2)."""


@dataclass
class SuiteConfig:
    suite: str = "all"
    e_max: int = 8
    series_order: int = 200
    tolerance: float = 1e-10
    seed: int = 0
    output: str = "json"

    def validate(self) -> "SuiteConfig":
        if self.suite not in SUITES + ("all",):
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES + ('all',))}")
        if self.e_max < 2:
            raise ConfigError("e_max must be >= 2")
        if self.series_order < 8:
            raise ConfigError("series_order must be >= 8")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if self.output not in OUTPUTS:
            raise ConfigError(f"output must be one of {OUTPUTS}")
        return self

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "e_max": self.e_max,
            "series_order": self.series_order,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "output": self.output,
        }


@dataclass
class SuiteReport:
    suite: str
    config: SuiteConfig
    checks: list[tuple[str, Check]] = field(default_factory=list)
    tables: dict[str, list] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for _, c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "suite": self.suite,
            "status": "pass" if self.passed else "fail",
            "config": self.config.to_dict(),
            "counts": {
                "total": len(self.checks),
                "failed": sum(not c.passed for _, c in self.checks),
            },
            "checks": [{"suite": s, **c.to_dict(timing)} for s, c in self.checks],
            "tables": self.tables,
        }
        if timing:
            d["seconds"] = round(self.seconds, 6)
        return jsonable(d)


def jsonable(x: Any) -> Any:
    """Rationals become "p/q", complex numbers [re, im]."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, ExactComplex):
        return [format_rational(x.re), format_rational(x.im)]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, int):
        return x
    return str(x)


def _thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1")
    return n


def _run_one(name: str, cfg: SuiteConfig) -> tuple[Report, dict]:
    tables: dict = {}
    if name == "clifford":
        rep = verify_clifford()
    elif name == "ladder":
        basis = build_basis(cfg.e_max)
        rep = verify_ladder(basis, seed=cfg.seed)
        tables["spectrum_h0"] = spectrum_rows(basis, 0)
    elif name == "geometry":
        rep = verify_geometry(seed=cfg.seed, aux_tol=cfg.tolerance)
    elif name == "vertex":
        rep = verify_vertex(build_basis(cfg.e_max), seed=cfg.seed, aux_tol=cfg.tolerance)
    elif name == "modular":
        rep = verify_modular(order=cfg.series_order)
    elif name == "planck":
        rep = verify_planck(seed=cfg.seed, aux_tol=cfg.tolerance)
    else:
        raise ConfigError(f"unknown suite {name!r}")
    return rep, tables


def run_suite(config: SuiteConfig) -> SuiteReport:
    cfg = config.validate()
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    out = SuiteReport(cfg.suite, cfg)
    t0 = time.perf_counter()

    def job(name: str):
        t = time.perf_counter()
        rep, tables = _run_one(name, cfg)
        return rep, tables, time.perf_counter() - t

    with ThreadPoolExecutor(max_workers=min(_thread_cap(), len(names))) as pool:
        results = list(pool.map(job, names))
    for name, (rep, tables, secs) in zip(names, results):
        if not any(c.seconds for c in rep):
            # attribute suite time evenly; per-check timing is informational only
            for c in rep:
                c.seconds = secs / max(len(rep), 1)
        out.checks.extend((name, c) for c in sorted(rep, key=lambda c: c.id))
        out.tables.update(tables)
    out.seconds = time.perf_counter() - t0
    return out


# rendering


def render_report(report: SuiteReport, fmt: str, timing: bool = True) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(timing), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ["suite", "id", "ref", "status", "exact", "residual"] + (["seconds"] if timing else [])
        w.writerow(cols)
        for s, c in report.checks:
            d = {"suite": s, **c.to_dict(timing)}
            w.writerow(["" if d.get(k) is None else d[k] for k in cols])
        return buf.getvalue()
    if fmt == "text":
        lines = []
        for s, c in report.checks:
            res = "exact" if c.exact else f"residual={c.residual:.3e}"
            lines.append(f"{'PASS' if c.passed else 'FAIL'}  {s:9s} {c.id:36s} {res:22s} {c.ref}")
        n_fail = sum(not c.passed for _, c in report.checks)
        lines.append(f"{report.suite}: {len(report.checks) - n_fail}/{len(report.checks)} checks passed")
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown output format {fmt!r}")


def render_rows(rows: list[dict], fmt: str) -> str:
    rows = jsonable(rows)
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    if not rows:
        return ""
    cols = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([json.dumps(r[c]) if isinstance(r[c], list) else r[c] for c in cols])
        return buf.getvalue()
    if fmt == "text":
        width = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
        lines = ["  ".join(c.ljust(width[c]) for c in cols)]
        lines += ["  ".join(str(r[c]).ljust(width[c]) for c in cols) for r in rows]
        return "\n".join(line.rstrip() for line in lines) + "\n"
    raise ConfigError(f"unknown output format {fmt!r}")


def table_rows(
    kind: str,
    config: SuiteConfig,
    helicity: int | None = None,
    k_max: int = 8,
    params: ThermoParams | None = None,
    n_max: int = 20,
) -> list[dict]:
    if kind == "spectrum":
        return spectrum_rows(build_basis(config.e_max), helicity)
    if kind == "h_polynomials":
        return [{"k": k, "h": format_zonal(harmonic_h_zonal(k))} for k in range(k_max + 1)]
    if kind == "z_coefficients":
        z = partition_Z(config.series_order)
        return [{"n": n, "coefficient": z[n]} for n in range(config.series_order + 1)]
    if kind == "planck_modes":
        return planck_rows(params or ThermoParams(R=10.0, beta=1.0), n_max)
    raise ConfigError(f"unknown table {kind!r}; choose from {', '.join(TABLES)}")


def emit_table(kind: str, config: SuiteConfig, path: str | None = None, **kw) -> str:
    """Render a table in ``config.output`` format; write it to ``path`` when given."""
    text = render_rows(table_rows(kind, config.validate(), **kw), config.output)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def write_output(text: str, path: str | None, sink: Callable[[str], Any]) -> None:
    if path is None:
        sink(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
