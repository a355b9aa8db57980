"""Time-domain single-excitation amplitudes for a photon reflecting off the cavity.

State vectors are ordered ``[psi_c, psi_e]`` for the reduced (bad-cavity)
model and ``[psi_c, psi_e, psi_q]`` when the spontaneous-emission cavity Q is
kept explicitly.  The reflected amplitude is ``B = -A + sqrt(2 kappa) psi_c``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, TruncationError
from .ode import SolverStats, dopri5
from .params import FrequencyGrid, FullSystemParams, SystemParams

#: Amplitude below which the trajectory counts as decayed at the window ends.
DECAY_FLOOR = 1e-10
PULSE_WIDTHS = 10.0
RINGDOWN_LIFETIMES = 30.0

# duration -> Gaussian linewidth sigma for A(t) = (sigma^2/2pi)^(1/4) exp(-sigma^2 t^2/4)
DURATION_CONVENTIONS: dict[str, Callable[[float], float]] = {
    "intensity-fwhm": lambda tau: 2 * math.sqrt(2 * math.log(2)) / tau,
    "amplitude-1/e-halfwidth": lambda tau: 2 / tau,
    "intensity-std": lambda tau: 1 / tau,
}


class StiffnessWarning(UserWarning):
    pass


def sigma_for_duration(duration: float, convention: str) -> float:
    try:
        return DURATION_CONVENTIONS[convention](duration)
    except KeyError:
        raise ConfigError(
            f"unknown duration convention {convention!r}; choose from {sorted(DURATION_CONVENTIONS)}"
        ) from None


def gaussian_pulse(sigma: float) -> Callable[[float], float]:
    """Scalar A(t) for the square-normalized Gaussian with linewidth ``sigma``."""
    if not sigma > 0:
        raise ConfigError("pulse linewidth must be > 0")
    amp = (sigma * sigma / (2 * math.pi)) ** 0.25
    q = sigma * sigma / 4

    def A(t: float) -> float:
        return amp * math.exp(-q * t * t)

    return A


def zero_pulse(t: float) -> float:
    return 0.0


@dataclass(frozen=True)
class IntegrationControl:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    window: tuple[float, float] = (-10.0, 40.0)
    samples: int = 2001

    def __post_init__(self):
        if self.rel_tol < 1e-13:
            raise ConfigError(f"rel_tol must be >= 1e-13, got {self.rel_tol}")
        if self.abs_tol <= 0:
            raise ConfigError("abs_tol must be > 0")
        t0, t1 = self.window
        if not t1 > t0:
            raise ConfigError(f"integration window {self.window} is empty")
        if self.samples < 2:
            raise ConfigError("need at least two output samples")

    def times(self) -> np.ndarray:
        return np.linspace(self.window[0], self.window[1], self.samples)


def _reduced_matrix(p: SystemParams, delta_j: float, lossless: bool) -> np.ndarray:
    gamma = 0.0 if lossless else p.gamma
    kj = 0.0 if lossless else p.kappa_j
    return np.array(
        [
            [-(1j * p.delta_c + p.kappa + kj), p.g],
            [-p.g, -(1j * delta_j + gamma)],
        ]
    )


def _full_matrix(fp: FullSystemParams, delta_j: float) -> np.ndarray:
    p = fp.base
    return np.array(
        [
            [-(1j * p.delta_c + p.kappa + p.kappa_j), p.g, 0.0],
            [-p.g, -1j * delta_j, -fp.g_q],
            [0.0, fp.g_q, -fp.kappa_q],
        ]
    )


def _slowest_rate(M: np.ndarray, g: float) -> float:
    if g == 0:
        # decoupled atom is never excited; only the cavity rings down
        return -M[0, 0].real
    return float(np.min(-np.linalg.eigvals(M).real))


def default_control(
    p: SystemParams,
    sigma: float,
    delta_j: float | None = None,
    rel_tol: float = 1e-10,
    lossless: bool = False,
    samples: int | None = None,
) -> IntegrationControl:
    """Window and sampling suited to a Gaussian pulse of linewidth ``sigma``.

    The window spans 10 intensity standard deviations (1/sigma) before the
    pulse peak and, after it, 10 more plus 30 lifetimes of the slowest
    ring-down rate min(kappa + kappa_j, gamma).  In lossless mode gamma is
    zero, so the slowest eigen-decay of the coupled system is used instead.
    """
    width = 1.0 / sigma
    dets = [p.delta_1, p.delta_2] if delta_j is None else [delta_j]
    if lossless:
        rate = min(_slowest_rate(_reduced_matrix(p, d, True), p.g) for d in dets)
    else:
        rate = min(p.kappa + p.kappa_j, p.gamma)
    if not rate > 0:
        raise ConfigError("system has an undamped mode; no finite ring-down window exists")
    t0 = -PULSE_WIDTHS * width
    t1 = PULSE_WIDTHS * width + RINGDOWN_LIFETIMES / rate
    if samples is None:
        fastest = max(np.max(np.abs(np.linalg.eigvals(_reduced_matrix(p, d, lossless)))) for d in dets)
        dt = min(math.pi / (32 * sigma), 0.25 / max(fastest, 1e-300))
        samples = int(math.ceil((t1 - t0) / dt)) + 1
    return IntegrationControl(rel_tol=rel_tol, window=(t0, t1), samples=samples)


@dataclass(frozen=True, eq=False)
class AmplitudeTrajectory:
    times: np.ndarray
    psi_e: np.ndarray
    psi_c: np.ndarray
    a_in: np.ndarray
    b_out: np.ndarray
    kappa: float
    kappa_j: float
    gamma: float
    psi_q: np.ndarray | None = None
    kappa_q: float | None = None
    lossless: bool = False
    stats: SolverStats | None = None

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def weights(self) -> np.ndarray:
        w = np.full(self.times.size, self.dt)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    def excited_population(self) -> np.ndarray:
        return np.abs(self.psi_e) ** 2

    def peak_population(self) -> tuple[float, float]:
        """(peak |psi_e|^2, time of peak), refined by a parabola through the top three samples."""
        pop = self.excited_population()
        i = int(np.argmax(pop))
        if i == 0 or i == pop.size - 1:
            return float(pop[i]), float(self.times[i])
        y0, y1, y2 = pop[i - 1], pop[i], pop[i + 1]
        curv = y0 - 2 * y1 + y2
        if curv >= 0:
            return float(y1), float(self.times[i])
        x = 0.5 * (y0 - y2) / curv
        return float(y1 - 0.25 * (y0 - y2) * x), float(self.times[i] + x * self.dt)


def _run(M, drive, A, ctrl: IntegrationControl, max_step=np.inf):
    times = ctrl.times()

    def rhs(t, y):
        return M @ y + drive * A(t)

    y, stats = dopri5(
        rhs, ctrl.window, np.zeros(M.shape[0], dtype=complex), times,
        rtol=ctrl.rel_tol, atol=ctrl.abs_tol, max_step=max_step,
    )
    a_in = np.array([A(t) for t in times], dtype=complex)
    return times, y, a_in, stats


def integrate_reduced(
    p: SystemParams,
    delta_j: float,
    pulse: Callable[[float], complex],
    ctrl: IntegrationControl,
    lossless: bool = False,
) -> AmplitudeTrajectory:
    """Cavity and atom amplitudes with spontaneous emission as a damping rate gamma.

    ``lossless=True`` sets gamma and kappa_j to zero in the equations.
    """
    M = _reduced_matrix(p, delta_j, lossless)
    root = math.sqrt(2 * p.kappa)
    drive = np.array([root, 0.0], dtype=complex)
    times, y, a_in, stats = _run(M, drive, pulse, ctrl)
    psi_c, psi_e = y[:, 0], y[:, 1]
    return AmplitudeTrajectory(
        times=times, psi_e=psi_e, psi_c=psi_c, a_in=a_in, b_out=-a_in + root * psi_c,
        kappa=p.kappa,
        kappa_j=0.0 if lossless else p.kappa_j,
        gamma=0.0 if lossless else p.gamma,
        lossless=lossless, stats=stats,
    )


def integrate_full(
    fp: FullSystemParams,
    delta_j: float,
    pulse: Callable[[float], complex],
    ctrl: IntegrationControl,
) -> AmplitudeTrajectory:
    """Three-amplitude dynamics with the spontaneous-emission cavity Q kept explicitly."""
    p = fp.base
    if fp.kappa_q / p.kappa > 1e6:
        warnings.warn(
            f"kappa_q/kappa = {fp.kappa_q / p.kappa:.3g} makes the system stiff; expect many small steps",
            StiffnessWarning,
            stacklevel=2,
        )
    M = _full_matrix(fp, delta_j)
    root = math.sqrt(2 * p.kappa)
    drive = np.array([root, 0.0, 0.0], dtype=complex)
    # explicit RK stability along the negative real axis extends to about 3.3
    times, y, a_in, stats = _run(M, drive, pulse, ctrl, max_step=3.0 / fp.kappa_q)
    psi_c, psi_e, psi_q = y[:, 0], y[:, 1], y[:, 2]
    return AmplitudeTrajectory(
        times=times, psi_e=psi_e, psi_c=psi_c, a_in=a_in, b_out=-a_in + root * psi_c,
        kappa=p.kappa, kappa_j=p.kappa_j, gamma=fp.implied_gamma(),
        psi_q=psi_q, kappa_q=fp.kappa_q, stats=stats,
    )


def fourier_transform(values: np.ndarray, times: np.ndarray, omega: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Trapezoid-weighted transform f(omega) = integral f(t) exp(i omega t) dt on an arbitrary grid."""
    dt = times[1] - times[0]
    w = np.full(times.size, dt)
    w[0] *= 0.5
    w[-1] *= 0.5
    fw = values * w
    out = np.empty(omega.size, dtype=complex)
    for i in range(0, omega.size, chunk):
        om = omega[i:i + chunk]
        out[i:i + chunk] = np.exp(1j * np.outer(om, times)) @ fw
    return out


def inverse_fourier_transform(spectrum: np.ndarray, grid: FrequencyGrid, times: np.ndarray, chunk: int = 256) -> np.ndarray:
    """A(t) = integral A(omega) exp(-i omega t) d(omega)/(2 pi), trapezoid rule on ``grid``."""
    fw = spectrum * grid.weights()
    times = np.atleast_1d(np.asarray(times, dtype=float))
    out = np.empty(times.size, dtype=complex)
    for i in range(0, times.size, chunk):
        tt = times[i:i + chunk]
        out[i:i + chunk] = np.exp(-1j * np.outer(tt, grid.samples)) @ fw
    return out


def output_spectrum(traj: AmplitudeTrajectory, grid: FrequencyGrid) -> np.ndarray:
    """Reflected spectral amplitude B(omega) from the sampled B(t)."""
    ends = [traj.psi_c[[0, -1]], traj.psi_e[[0, -1]]]
    if traj.psi_q is not None:
        ends.append(traj.psi_q[[0, -1]])
    worst = max(float(np.max(np.abs(e))) for e in ends)
    if worst >= DECAY_FLOOR:
        raise TruncationError(
            f"amplitudes have not decayed at the window ends (max |psi| = {worst:.3e} >= {DECAY_FLOOR:.0e}); "
            f"window {traj.times[0]:.4g}..{traj.times[-1]:.4g} is too short"
        )
    return fourier_transform(traj.b_out, traj.times, grid.samples)


@dataclass(frozen=True)
class LossBudget:
    reflected: float
    cavity_loss: float
    spontaneous_loss: float

    @property
    def losses(self) -> float:
        return self.cavity_loss + self.spontaneous_loss

    @property
    def total(self) -> float:
        return self.reflected + self.losses


def loss_output(traj: AmplitudeTrajectory, p: SystemParams | None = None) -> LossBudget:
    """Probability leaving through B, the cavity loss port J and spontaneous emission.

    ``p`` overrides the rates recorded in the trajectory (ignored in lossless mode).
    With an explicit Q cavity the spontaneous loss is its output flux
    2 kappa_q |psi_q|^2.
    """
    kj, gamma = traj.kappa_j, traj.gamma
    if p is not None and not traj.lossless:
        kj, gamma = p.kappa_j, p.gamma
    w = traj.weights()
    reflected = float(w @ np.abs(traj.b_out) ** 2)
    cavity = 2 * kj * float(w @ np.abs(traj.psi_c) ** 2)
    if traj.psi_q is not None:
        spont = 2 * traj.kappa_q * float(w @ np.abs(traj.psi_q) ** 2)
    else:
        spont = 2 * gamma * float(w @ np.abs(traj.psi_e) ** 2)
    return LossBudget(reflected, cavity, spont)


def flux_balance_residual(traj: AmplitudeTrajectory) -> np.ndarray:
    """Pointwise residual of the continuity equation for the stored excitation.

    d/dt(|psi_e|^2 + |psi_c|^2 [+ |psi_q|^2]) + losses - (|A|^2 - |B|^2),
    with the time derivative taken by fourth-order central differences
    (second order at the two samples nearest each end).
    """
    stored = np.abs(traj.psi_e) ** 2 + np.abs(traj.psi_c) ** 2
    if traj.psi_q is not None:
        stored = stored + np.abs(traj.psi_q) ** 2
        leak = 2 * traj.kappa_q * np.abs(traj.psi_q) ** 2
    else:
        leak = 2 * traj.gamma * np.abs(traj.psi_e) ** 2
    leak = leak + 2 * traj.kappa_j * np.abs(traj.psi_c) ** 2
    h = traj.dt
    d = np.gradient(stored, h, edge_order=2)
    d[2:-2] = (-stored[4:] + 8 * stored[3:-1] - 8 * stored[1:-3] + stored[:-4]) / (12 * h)
    return d + leak - (np.abs(traj.a_in) ** 2 - np.abs(traj.b_out) ** 2)
