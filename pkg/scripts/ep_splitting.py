"""Eigenvalue splitting near the exceptional point Delta = Gamma."""

import argparse

import numpy as np

from aptqfi import SystemParams, build_hamiltonian, spectrum


def main(lo: float, hi: float, count: int) -> None:
    etas = np.geomspace(lo, hi, count)
    split = np.array([spectrum(build_hamiltonian(SystemParams(delta=1 + eta))).splitting for eta in etas])
    for eta, d in zip(etas[:: max(1, count // 6)], split[:: max(1, count // 6)]):
        print(f"eta = {eta:.3e}  splitting = {d:.6e}")
    print(f"fitted exponent: {np.polyfit(np.log(etas), np.log(split), 1)[0]:.5f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=float, default=1e-6)
    ap.add_argument("--hi", type=float, default=1e-4)
    ap.add_argument("--count", type=int, default=25)
    a = ap.parse_args()
    main(a.lo, a.hi, a.count)
