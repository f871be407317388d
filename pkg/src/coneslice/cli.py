"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 domain or
runtime error.
"""

from __future__ import annotations

import argparse
import itertools
import logging
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from .embedding import deformation_campaign
from .errors import ConeSliceError, ContractViolation
from .flrw import build_flrw, osculating_slice
from .group import group_campaign
from .homogeneous import parse_scale_factor
from .reports import VerificationReport, dumps, to_csv
from .slices import ds_graph_chart, minkowski_null_chart, scalar_curvature

__all__ = [
    "RunConfig",
    "UsageError",
    "cmd_verify_theorem",
    "cmd_verify_group",
    "cmd_curvature",
    "cmd_osculate",
    "cmd_metric_grid",
    "build_parser",
    "run",
    "main",
]

log = logging.getLogger("coneslice")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
SEED_ENV = "CONESLICE_SEED"
MAX_SEED = 2**64 - 1


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int = 2
    H: float = 1.0
    scale_factor: str = "zero"
    trials: int = 1000
    seed: int = 0
    tolerance: float | None = None
    output_format: str = "json"
    output_path: str = "-"
    rho: float = 0.5
    workers: int = 1
    timing: bool = False

    def validate(self) -> "RunConfig":
        if self.n < 2:
            raise UsageError(f"--dim must be >= 2, got {self.n}")
        if not (np.isfinite(self.H) and self.H > 0):
            raise UsageError(f"--hubble must be positive, got {self.H}")
        if self.trials < 1:
            raise UsageError(f"--trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed <= MAX_SEED:
            raise UsageError(f"--seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.tolerance is not None and not (np.isfinite(self.tolerance) and self.tolerance > 0):
            raise UsageError(f"--tol must be positive, got {self.tolerance}")
        if self.output_format not in ("json", "csv"):
            raise UsageError(f"--format must be json or csv, got {self.output_format}")
        if not (np.isfinite(self.rho) and self.rho >= 0):
            raise UsageError(f"--rho must be non-negative, got {self.rho}")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        try:
            parse_scale_factor(self.scale_factor, self.n, self.H)
        except ContractViolation as exc:
            raise UsageError(str(exc)) from None
        return self

    def tol(self, default: float) -> float:
        return default if self.tolerance is None else self.tolerance

    def params(self) -> dict:
        return {"n": self.n, "H": self.H, "scale_factor": self.scale_factor}


def cmd_verify_theorem(config: RunConfig) -> VerificationReport:
    space = build_flrw(config.scale_factor, config.n, config.H)
    return deformation_campaign(
        space.deformation,
        space.chart,
        config.trials,
        config.seed,
        tolerance=config.tol(1e-9),
        workers=config.workers,
        params=config.params(),
    )


def cmd_verify_group(config: RunConfig) -> VerificationReport:
    space = build_flrw(config.scale_factor, config.n, config.H)
    params = config.params() | {"rho": config.rho}
    report = group_campaign(
        space.w_chart,
        config.trials,
        config.seed,
        rho=config.rho,
        tolerance=config.tol(1e-9),
        workers=config.workers,
        params=params,
    )
    if report.rejections:
        log.info("%d of %d trials crossed the conformal boundary", report.rejections, report.trials)
    return report


def _grid(n: int, span: float, points: int) -> list[np.ndarray]:
    axis = np.linspace(-span, span, points) if points > 1 else np.zeros(1)
    return [np.array(p) for p in itertools.product(axis, repeat=n)]


def cmd_curvature(config: RunConfig, slice_kind: str = "deSitter", points: int = 3, span: float | None = None) -> dict:
    """Scalar curvature on a grid, with the deviation from the closed-form value."""
    n, H = config.n, config.H
    span = 0.5 / H if span is None else span
    if slice_kind == "deSitter":
        chart = ds_graph_chart(n, H)
        expected = -n * (n - 1) * H * H
    elif slice_kind == "minkowskiNull":
        chart = minkowski_null_chart(n, H)
        expected = 0.0
    elif slice_kind == "flrw":
        space = build_flrw(config.scale_factor, n, H)
        chart = space.w_chart
        a = space.a
        # closed form only for constant scale factors
        probe = space.chart.point(np.zeros(n)).y
        expected = None
        if a.name == "zero" or a.name.startswith("const:"):
            expected = float(np.exp(-2.0 * a(probe)) * (-n * (n - 1) * H * H))
    else:
        raise UsageError(f"unknown slice {slice_kind!r}")
    if expected is None:
        tol = None
    elif expected == 0.0:
        tol = config.tol(1e-4)
    else:
        tol = config.tol(1e-3 if n < 4 else 1e-2)

    samples = []
    worst = 0.0
    for x in _grid(n, span, points):
        if not chart.contains(x):
            raise UsageError(f"grid point {list(x)} is outside the chart domain; shrink --span")
        R = scalar_curvature(chart, x)
        dev = None
        if expected is not None:
            dev = abs(R - expected) / (abs(expected) if expected != 0.0 else 1.0)
            worst = max(worst, dev)
        samples.append({"x": [float(v) for v in x], "R": R, "deviation": dev})
    failures = sum(1 for s in samples if s["deviation"] is not None and not s["deviation"] <= tol)
    return {
        "campaign": "curvature",
        "slice": slice_kind,
        "params": config.params() | {"grid": points, "span": span},
        "expected": expected,
        "max_deviation": worst if expected is not None else None,
        "deviation_kind": None if expected is None else ("absolute" if expected == 0.0 else "relative"),
        "tolerance": tol,
        "failures": failures,
        "samples": samples,
    }


def _parse_point(text: str, n: int) -> np.ndarray:
    try:
        x = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise UsageError(f"cannot parse point {text!r}") from None
    if x.shape != (n,) or not np.all(np.isfinite(x)):
        raise UsageError(f"point {text!r} needs {n} finite comma-separated coordinates")
    return x


def cmd_osculate(config: RunConfig, points: list[str]) -> dict:
    """Osculating-slice classification at points of W given in dS chart coordinates."""
    space = build_flrw(config.scale_factor, config.n, config.H)
    out = []
    for text in points or ["0.5" + ",0" * (config.n - 1)]:
        x = _parse_point(text, config.n)
        p = space.w_chart.point(x)
        res = osculating_slice(space.k, p)
        out.append({"x": [float(v) for v in x], "y": [float(v) for v in p.y], **res.to_dict(),
                    "fLocal_at_point": res.fLocal(p.y)})
    return {"campaign": "osculate", "params": config.params(), "points": out}


def cmd_metric_grid(config: RunConfig, points: int = 5, span: float | None = None) -> list:
    """Induced metric of W on a grid of dS chart coordinates."""
    space = build_flrw(config.scale_factor, config.n, config.H)
    span = 0.5 / config.H if span is None else span
    samples = []
    for x in _grid(config.n, span, points):
        if space.w_chart.contains(x):
            samples.append(space.w_chart.metric(x))
    return samples


def _emit(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _seed_default() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, default=2, help="submanifold dimension n (>= 2)")
    common.add_argument("--hubble", type=float, default=1.0, help="curvature scale H")
    common.add_argument("--scale-factor", default="zero", help="zero | const:c | power:p | tilt:c")
    common.add_argument("--trials", type=int, default=1000)
    common.add_argument("--seed", type=int, default=None, help=f"defaults to ${SEED_ENV} or 0")
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default="-", help="output path, - for stdout")
    common.add_argument("--rho", type=float, default=0.5, help="group sampling radius")
    common.add_argument("--workers", type=int, default=1, help="worker threads for campaigns")
    common.add_argument("--timing", action="store_true", help="include wall time in JSON reports")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="coneslice", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-theorem", parents=[common], help="metric relation under the deformation")
    sub.add_parser("verify-group", parents=[common], help="conformal action of SO(2,n)")
    curv = sub.add_parser("curvature", parents=[common], help="finite-difference scalar curvature")
    curv.add_argument("--slice", choices=("deSitter", "minkowskiNull", "flrw"), default="deSitter")
    curv.add_argument("--grid", type=int, default=3, help="grid points per axis")
    curv.add_argument("--span", type=float, default=None, help="grid half-width (default 0.5/H)")
    osc = sub.add_parser("osculate", parents=[common], help="classify osculating slices of W")
    osc.add_argument("--point", action="append", default=[], help="dS chart coordinates, comma separated")
    grid = sub.add_parser("metric-grid", parents=[common], help="tabulate the induced metric of W")
    grid.add_argument("--grid", type=int, default=5)
    grid.add_argument("--span", type=float, default=None)
    return parser


def _config(args) -> RunConfig:
    seed = args.seed if args.seed is not None else _seed_default()
    return RunConfig(
        n=args.dim,
        H=args.hubble,
        scale_factor=args.scale_factor,
        trials=args.trials,
        seed=seed,
        tolerance=args.tol,
        output_format=args.format,
        output_path=args.out,
        rho=args.rho,
        workers=args.workers,
        timing=args.timing,
    ).validate()


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = _config(args)
        started = time.perf_counter()
        if args.command in ("verify-theorem", "verify-group"):
            cmd = cmd_verify_theorem if args.command == "verify-theorem" else cmd_verify_group
            report = cmd(config)
            text = report.to_json(config.timing) if config.output_format == "json" else report.to_csv()
            _emit(text, config.output_path)
            log.info("%s: %d failures, max residual %.3e", report.campaign, report.failures, report.max_residual)
            code = EXIT_OK if report.passed else EXIT_FAIL
        elif args.command == "curvature":
            if args.grid < 1:
                raise UsageError("--grid must be >= 1")
            result = cmd_curvature(config, args.slice, args.grid, args.span)
            if config.output_format == "json":
                if config.timing:
                    result["wall_time_seconds"] = time.perf_counter() - started
                text = dumps(result) + "\n"
            else:
                header = [f"x{i}" for i in range(config.n)] + ["R", "deviation"]
                rows = [s["x"] + [s["R"], "" if s["deviation"] is None else s["deviation"]]
                        for s in result["samples"]]
                text = to_csv(header, rows)
            _emit(text, config.output_path)
            code = EXIT_OK if result["failures"] == 0 else EXIT_FAIL
        elif args.command == "osculate":
            result = cmd_osculate(config, args.point)
            if config.output_format == "json":
                text = dumps(result) + "\n"
            else:
                header = [f"x{i}" for i in range(config.n)] + ["normSq", "classification"]
                rows = [r["x"] + [r["normSq"], r["classification"]] for r in result["points"]]
                text = to_csv(header, rows)
            _emit(text, config.output_path)
            code = EXIT_OK
        else:
            if args.grid < 1:
                raise UsageError("--grid must be >= 1")
            samples = cmd_metric_grid(config, args.grid, args.span)
            if config.output_format == "json":
                text = dumps([s.to_dict() for s in samples]) + "\n"
            else:
                header = samples[0].csv_header() if samples else []
                text = to_csv(header, [s.csv_row() for s in samples])
            _emit(text, config.output_path)
            code = EXIT_OK
    except UsageError as exc:
        print(f"coneslice: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConeSliceError as exc:
        print(f"coneslice: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

