"""Dormand-Prince 5(4) integrator with max-norm error control and PI step control.

The error of every component is held below ``atol + rtol * |y|``.  An RMS
norm over tens of thousands of density-matrix entries would let a few
unstable high-Fock coherences through, so the max norm is used instead.
"""

from __future__ import annotations

from typing import Callable, Iterator

import numpy as np

from .errors import StepFailure

# Butcher tableau
C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    np.array(row)
    for row in (
        [],
        [1 / 5],
        [3 / 40, 9 / 40],
        [44 / 45, -56 / 15, 32 / 9],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
        [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
    )
]
B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
E = B5 - B4

SAFETY = 0.9
BETA = 0.04
EXPO = 0.2 - 0.75 * BETA
FAC_MIN, FAC_MAX = 0.2, 10.0


def _initial_step(f, t0, y0, f0, tol, direction_span):
    scale = tol + tol * np.abs(y0)
    d0 = np.max(np.abs(y0) / scale)
    d1 = np.max(np.abs(f0) / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, direction_span)
    y1 = y0 + h0 * f0
    f1 = f(t0 + h0, y1)
    d2 = np.max(np.abs(f1 - f0) / scale) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, direction_span)


def dopri5(
    f: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0: np.ndarray,
    t_end: float,
    tol: float,
    *,
    first_step: float | None = None,
    max_step: float = np.inf,
    max_steps: int = 1_000_000,
) -> Iterator[tuple[float, np.ndarray, float]]:
    """Yield ``(t, y, h_next)`` after every accepted step until ``t_end``.

    The final step is shortened to land exactly on ``t_end``.
    """
    if t_end < t0:
        raise ValueError("integration runs forward in time only")
    if t_end == t0:
        return
    t, y = t0, np.array(y0)
    k = np.empty((7,) + y.shape, dtype=np.result_type(y, complex))
    k[0] = f(t, y)
    h = first_step if first_step else _initial_step(f, t, y, k[0], tol, t_end - t0)
    h = min(h, max_step)
    err_old = 1e-4
    steps = 0
    while t < t_end:
        if steps >= max_steps:
            raise StepFailure(f"exceeded {max_steps} steps at t={t:.6g}")
        last = t + h >= t_end
        if last:
            h = t_end - t
        if h <= 1e-14 * max(1.0, abs(t)):
            raise StepFailure(f"step size underflow at t={t:.6g}")
        # stage combinations as one contraction over the stacked slopes
        for i in range(1, 7):
            k[i] = f(t + C[i] * h, y + h * np.tensordot(A[i], k[:i], axes=1))
        y_new = y + h * np.tensordot(B5, k, axes=1)
        err_vec = h * np.tensordot(E, k, axes=1)
        scale = tol + tol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.max(np.abs(err_vec) / scale))
        if not np.isfinite(err):
            raise StepFailure(f"non-finite error estimate at t={t:.6g}")
        steps += 1
        if err <= 1.0:
            fac = err**EXPO / err_old**BETA if err > 0 else 1 / FAC_MAX
            fac = min(1 / FAC_MIN, max(1 / FAC_MAX, fac / SAFETY))
            h_next = min(h / fac, max_step)
            err_old = max(err, 1e-4)
            t = t_end if last else t + h
            y = y_new
            k[0] = k[6]  # first-same-as-last
            yield t, y, h_next
            h = h_next
        else:
            fac = min(1 / FAC_MIN, err**EXPO / SAFETY)
            h = h / fac
