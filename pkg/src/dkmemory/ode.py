"""Dormand-Prince 5(4) integrator with PI step-size control and dense output.

Works on complex state vectors.  Solutions are reported on a caller-chosen
set of output times through the standard fourth-order continuous extension.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError

_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    np.zeros(0),
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_A = [np.asarray(row, dtype=float) for row in _A]
_B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
# fifth- minus fourth-order weights
_E = np.array([71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# continuous extension (Shampine): y(t + x h) = y + h * K^T (P @ [x, x^2, x^3, x^4])
_P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

# PI controller gains for an order-5 method (Hairer & Wanner, DOPRI5)
_BETA = 0.04
_ALPHA = 0.2 - 0.75 * _BETA
_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 10.0


@dataclass
class SolverStats:
    accepted: int = 0
    rejected: int = 0
    evaluations: int = 0
    min_step: float = np.inf
    max_step: float = 0.0


def _error_norm(err, y0, y1, rtol, atol):
    scale = atol + rtol * np.maximum(np.abs(y0), np.abs(y1))
    return float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))


def _initial_step(f, t0, y0, f0, rtol, atol, span):
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean(np.abs(y0 / scale) ** 2))
    d1 = np.sqrt(np.mean(np.abs(f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = y0 + h0 * f0
    f1 = f(t0 + h0, y1)
    d2 = np.sqrt(np.mean(np.abs((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, span)


def dopri5(f, t_span, y0, t_eval, rtol=1e-10, atol=1e-13, max_step=np.inf, max_steps=5_000_000, first_step=None):
    """Integrate ``y' = f(t, y)`` over ``t_span`` and sample at ``t_eval``.

    ``t_eval`` must be sorted and lie inside ``t_span``.  Returns an array of
    shape ``(len(t_eval), len(y0))`` together with ``SolverStats``.
    Raises ``IntegrationError`` on step-size underflow or when ``max_steps``
    is exceeded.
    """
    t0, t1 = map(float, t_span)
    if not t1 > t0:
        raise IntegrationError(f"empty integration window {t_span}")
    y = np.array(y0, dtype=complex).ravel()
    t_eval = np.asarray(t_eval, dtype=float)
    if t_eval.size and (t_eval[0] < t0 or t_eval[-1] > t1 or np.any(np.diff(t_eval) < 0)):
        raise IntegrationError("output times must be sorted and inside the integration window")
    out = np.empty((t_eval.size, y.size), dtype=complex)
    stats = SolverStats()

    t = t0
    k = np.empty((7, y.size), dtype=complex)
    k[0] = f(t, y)
    stats.evaluations += 1
    h = first_step if first_step is not None else _initial_step(f, t, y, k[0], rtol, atol, t1 - t0)
    stats.evaluations += 1
    h = min(h, max_step)
    err_prev = 1e-4
    i_out = 0
    while i_out < t_eval.size and t_eval[i_out] <= t0:
        out[i_out] = y
        i_out += 1

    while t < t1:
        if stats.accepted + stats.rejected >= max_steps:
            raise IntegrationError(
                f"step limit {max_steps} exceeded at t={t:.6g} (accepted={stats.accepted}, rejected={stats.rejected})"
            )
        if h < 1e-14 * max(1.0, abs(t)):
            raise IntegrationError(
                f"step size underflow at t={t:.6g}: h={h:.3e}, accepted={stats.accepted}, rejected={stats.rejected}"
            )
        last = h >= t1 - t
        if last:
            h = t1 - t
        for s in range(1, 7):
            ys = y + h * (_A[s] @ k[:s])
            k[s] = f(t + _C[s] * h, ys)
        stats.evaluations += 6
        y_new = y + h * (_B @ k)
        err = _error_norm(h * (_E @ k), y, y_new, rtol, atol)
        if not np.isfinite(err):
            raise IntegrationError(f"non-finite error estimate at t={t:.6g}, h={h:.3e}")
        if err <= 1.0:
            t_new = t1 if last else t + h
            while i_out < t_eval.size and t_eval[i_out] <= t_new:
                x = (t_eval[i_out] - t) / h
                powers = np.array([x, x * x, x**3, x**4])
                out[i_out] = y + h * ((_P @ powers) @ k)
                i_out += 1
            stats.accepted += 1
            stats.min_step = min(stats.min_step, h)
            stats.max_step = max(stats.max_step, h)
            err = max(err, 1e-10)
            fac = _SAFETY * err ** (-_ALPHA) * err_prev**_BETA
            err_prev = err
            h_next = h * min(_FAC_MAX, max(_FAC_MIN, fac))
            t, y = t_new, y_new
            k[0] = k[6]  # first-same-as-last
        else:
            stats.rejected += 1
            fac = _SAFETY * err ** (-0.2)
            h_next = h * max(_FAC_MIN, fac)
        h = min(h_next, max_step)

    while i_out < t_eval.size:
        out[i_out] = y
        i_out += 1
    return out, stats
