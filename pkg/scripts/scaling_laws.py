"""Fitted power laws of the response and the bound near the singular point."""

import argparse

import numpy as np

from aptqfi import Parameter, SystemParams, scaling_exponent, sweep_bound


def main(xi: float, lo: float, hi: float, count: int) -> None:
    grid = np.geomspace(lo, hi, count)
    base = SystemParams.from_xi(xi)
    print(f"xi = {xi:g}, epsilon in [{lo:g}, {hi:g}]")
    for parameter in (Parameter.MISMATCH_S, Parameter.DISPERSIVE_G):
        response_slope = scaling_exponent(base, parameter, grid)
        rows = sweep_bound(base, parameter, [xi], grid)
        bound_slope = np.polyfit(np.log(grid), np.log([r.cr_bound for r in rows]), 1)[0]
        print(f"{parameter.value:>14}: |d alpha| slope {response_slope:+.4f}, bound slope {bound_slope:+.4f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--xi", type=float, default=1e-6)
    ap.add_argument("--lo", type=float, default=1e-3)
    ap.add_argument("--hi", type=float, default=1e-2)
    ap.add_argument("--count", type=int, default=20)
    a = ap.parse_args()
    main(a.xi, a.lo, a.hi, a.count)
