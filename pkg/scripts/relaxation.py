"""Relaxation of the full master equation onto the coherent steady state.

Prints the infidelity along the trajectory and the fitted decay rate.
"""

import argparse

import numpy as np

from aptqfi import FockDensityMatrix, SystemParams, response
from aptqfi.lindblad import evolve_master_equation, fidelity_with_coherent, simulation_cutoffs


def main(kappa: float, drive: float, t_end: float, fit_from: float) -> None:
    p = SystemParams(kappa=kappa, drive=drive)
    amps = response(p)
    cutoffs = simulation_cutoffs(p)
    samples = []

    def monitor(t, rho):
        samples.append((t, 1 - fidelity_with_coherent(rho, amps.alpha0, amps.beta0)))

    evolve_master_equation(FockDensityMatrix.vacuum(cutoffs), p, t_end, monitor=monitor)
    t, infid = np.array(samples).T
    mask = (t > fit_from) & (infid > 1e-13)
    rate = -np.polyfit(t[mask], np.log(infid[mask]), 1)[0]
    print(f"cutoffs {cutoffs}, {len(t)} steps")
    for ti, fi in zip(t[:: max(1, len(t) // 8)], infid[:: max(1, len(t) // 8)]):
        print(f"t = {ti:7.3f}  1 - F = {fi:.3e}")
    print(f"fitted rate {rate:.4f} (2 kappa = {2 * kappa:.4f})")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kappa", type=float, default=0.5)
    ap.add_argument("--drive", type=complex, default=0.5)
    ap.add_argument("--t-end", type=float, default=14.0)
    ap.add_argument("--fit-from", type=float, default=8.0)
    a = ap.parse_args()
    main(a.kappa, a.drive, a.t_end, a.fit_from)
