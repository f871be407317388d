#!/usr/bin/env python3
"""Scalar curvature of de Sitter slices and constant-factor FLRW slices against closed forms."""

import argparse
import itertools
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from coneslice import build_flrw, ds_graph_chart, scalar_curvature
from coneslice.reports import to_csv


@dataclass
class TableConfig:
    dims: list = field(default_factory=lambda: [2, 3, 4, 5])
    hubbles: list = field(default_factory=lambda: [0.5, 1.0, 2.0])
    consts: list = field(default_factory=lambda: [0.0, 0.3, -0.5])
    points: int = 3
    seed: int = 0


def table(cfg: TableConfig) -> list[list]:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for n, H, c in itertools.product(cfg.dims, cfg.hubbles, cfg.consts):
        chart = ds_graph_chart(n, H) if c == 0.0 else build_flrw(f"const:{c}", n, H).w_chart
        expected = math.exp(-2 * c) * (-n * (n - 1) * H * H)
        for _ in range(cfg.points):
            x = rng.uniform(-0.5 / H, 0.5 / H, n)
            R = scalar_curvature(chart, x)
            rows.append([n, H, c, R, expected, abs(R - expected) / abs(expected)])
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rows = table(TableConfig(points=args.points, seed=args.seed))
    sys.stdout.write(to_csv(["n", "H", "c", "R", "expected", "rel_dev"], rows))


if __name__ == "__main__":
    main()
