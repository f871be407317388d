#!/usr/bin/env python3
"""Sweep the deformation and group campaigns over scale factors and dimensions.

Writes one CSV row per campaign: which identity, the setup, and the residual summary.
"""

import argparse
import itertools
import sys
from dataclasses import dataclass, field

from coneslice import build_flrw, deformation_campaign, group_campaign
from coneslice.reports import to_csv


@dataclass
class SweepConfig:
    scale_factors: list = field(default_factory=lambda: ["zero", "const:0.3", "power:2", "tilt:1"])
    dims: list = field(default_factory=lambda: [2, 3, 4])
    rhos: list = field(default_factory=lambda: [0.5, 2.0])
    H: float = 1.0
    trials: int = 1000
    seed: int = 0
    workers: int = 1


def sweep(cfg: SweepConfig) -> list[list]:
    rows = []
    for spec, n in itertools.product(cfg.scale_factors, cfg.dims):
        space = build_flrw(spec, n, cfg.H)
        r = deformation_campaign(space.deformation, space.chart, cfg.trials, cfg.seed, workers=cfg.workers)
        rows.append(["weyl", spec, n, "", r.trials, r.rejections, r.failures, r.max_residual, r.mean_residual])
        for rho in cfg.rhos:
            r = group_campaign(space.w_chart, cfg.trials, cfg.seed, rho=rho, workers=cfg.workers)
            rows.append(["conformal", spec, n, rho, r.trials, r.rejections, r.failures, r.max_residual, r.mean_residual])
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    args = ap.parse_args()
    cfg = SweepConfig(dims=args.dims, trials=args.trials, seed=args.seed, workers=args.workers)
    header = ["campaign", "scale_factor", "n", "rho", "trials", "rejections", "failures", "max_residual", "mean_residual"]
    sys.stdout.write(to_csv(header, sweep(cfg)))


if __name__ == "__main__":
    main()
