#!/usr/bin/env python3
"""Classify osculating slices of an FLRW slice over a 2D grid of chart coordinates.

Useful with ``tilt:c``, whose osculating slices change type across the chart.
"""

import argparse
import sys

import numpy as np

from coneslice import build_flrw, osculating_slice
from coneslice.errors import OutOfDomainError
from coneslice.reports import to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale-factor", default="tilt:2")
    ap.add_argument("--hubble", type=float, default=1.0)
    ap.add_argument("--grid", type=int, default=21)
    ap.add_argument("--span", type=float, default=1.2)
    args = ap.parse_args()
    space = build_flrw(args.scale_factor, 2, args.hubble)
    axis = np.linspace(-args.span, args.span, args.grid)
    rows = []
    for x0 in axis:
        for x1 in axis:
            x = np.array([x0, x1])
            try:
                res = osculating_slice(space.k, space.w_chart.point(x))
            except OutOfDomainError:
                continue
            rows.append([float(x0), float(x1), res.normSq, res.classification])
    sys.stdout.write(to_csv(["x0", "x1", "normSq", "classification"], rows))


if __name__ == "__main__":
    main()
