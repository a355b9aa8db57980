"""Atomic-state-dependent cavity reflection, conditional phases and C_pi."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, DomainError, SingularityError
from .params import FrequencyGrid, SchemeGeometry, SystemParams, build_detunings, cooperativity, wrap_phase

#: Reflectivity magnitude below which a sample's phase is undefined.
PHASE_FLOOR = 1e-12


class RegimeWarning(UserWarning):
    """An asymptotic estimate was evaluated outside its stated regime."""


def reflection_coefficient(p: SystemParams, delta_j: float, omega, lossless: bool = False):
    """Complex reflection coefficient r_j(omega) of the one-sided cavity.

    ``omega`` is the detuning from the photon carrier and may be an array.
    With ``lossless=True`` both gamma and kappa_j are replaced by zero in the
    formula, which makes ``|r| == 1``.
    """
    gamma = 0.0 if lossless else p.gamma
    kj = 0.0 if lossless else p.kappa_j
    w = np.asarray(omega, dtype=float)
    g2 = p.g * p.g
    # an uncoupled atom factors out of numerator and denominator; dropping it
    # avoids 0/0 at omega = delta_j when gamma = 0
    atom = gamma + 1j * (delta_j - w) if g2 > 0 else np.ones_like(w, dtype=complex)
    num = atom * (p.kappa - kj - 1j * p.delta_c + 1j * w) - g2
    den = atom * (p.kappa + kj + 1j * p.delta_c - 1j * w) + g2
    if np.any(np.abs(den) < 1e-300):
        raise SingularityError(f"reflection denominator vanishes for delta_j={delta_j}, params={p}")
    r = num / den
    return complex(r) if r.ndim == 0 else r


@dataclass(frozen=True, eq=False)
class ReflectionSpectrum:
    """r_1(omega), r_2(omega) sampled on a shared grid.

    ``params`` is None for synthetic reflectivities.
    """

    grid: FrequencyGrid
    r1: np.ndarray
    r2: np.ndarray
    params: SystemParams | None = None
    lossless: bool = False

    def __post_init__(self):
        for name in ("r1", "r2"):
            a = np.asarray(getattr(self, name), dtype=complex)
            if a.shape != self.grid.samples.shape:
                raise ConfigError(f"{name} does not match the grid shape")
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    def r(self, j: int) -> np.ndarray:
        if j == 1:
            return self.r1
        if j == 2:
            return self.r2
        raise ConfigError(f"ground-state index must be 1 or 2, got {j}")


def reflection_spectrum(
    p: SystemParams,
    geom: SchemeGeometry | None,
    grid: FrequencyGrid,
    lossless: bool = False,
) -> ReflectionSpectrum:
    """Sample r_1 and r_2 on ``grid``.

    When ``geom`` is given its detunings replace ``p.delta_1``/``p.delta_2``.
    """
    if geom is not None:
        d1, d2 = build_detunings(geom)
        p = replace(p, delta_1=d1, delta_2=d2)
    w = grid.samples
    return ReflectionSpectrum(
        grid,
        reflection_coefficient(p, p.delta_1, w, lossless),
        reflection_coefficient(p, p.delta_2, w, lossless),
        params=p,
        lossless=lossless,
    )


def center_reflectivity(p: SystemParams, delta_j: float) -> complex:
    """Narrow-band limit r_j(0) written in terms of the cooperativity."""
    if p.delta_c != 0:
        raise DomainError("center reflectivity formula requires delta_c = 0")
    C = cooperativity(p)
    a = 1 + 1j * delta_j / p.gamma
    x = p.kappa_j / p.kappa
    return complex((a * (1 - x) - C) / (a * (1 + x) + C))


def c_pi(p: SystemParams, delta_1: float) -> float:
    """Push-pull cooperativity giving a conditional phase difference of exactly pi at omega = 0."""
    if p.kappa_j > p.kappa:
        raise DomainError(f"C_pi requires kappa_j <= kappa (kappa_j={p.kappa_j}, kappa={p.kappa})")
    x = p.kappa_j / p.kappa
    return math.sqrt(1 + (1 - x * x) * (delta_1 / p.gamma) ** 2) - x


def center_reflectivity_at_cpi(p: SystemParams, delta_j: float) -> complex:
    """Closed form of r_j(0) when C = C_pi; purely imaginary."""
    if delta_j == 0:
        raise DomainError("push-pull requires a nonzero atomic detuning")
    k, kj, gam = p.kappa, p.kappa_j, p.gamma
    root = math.sqrt(gam * gam * k * k + delta_j * delta_j * (k * k - kj * kj))
    return 1j * delta_j * (root - gam * k) / (delta_j * delta_j * (k + kj))


@dataclass(frozen=True, eq=False)
class PhaseReport:
    theta1: np.ndarray
    theta2: np.ndarray
    delta_phase_raw: np.ndarray
    delta_phase: np.ndarray
    delta_phase_at_0: float
    undefined: np.ndarray


def phase_report(rs: ReflectionSpectrum) -> PhaseReport:
    """Principal phases of r_1, r_2 and their unwrapped difference.

    Samples where either reflectivity is below ``PHASE_FLOOR`` in magnitude
    carry NaN phases and are skipped by the unwrapping.  The unwrapped
    difference is anchored so that it equals the principal value at omega = 0.
    """
    undefined = (np.abs(rs.r1) < PHASE_FLOOR) | (np.abs(rs.r2) < PHASE_FLOOR)
    th1 = wrap_phase(np.angle(rs.r1))
    th2 = wrap_phase(np.angle(rs.r2))
    th1[np.abs(rs.r1) < PHASE_FLOOR] = np.nan
    th2[np.abs(rs.r2) < PHASE_FLOOR] = np.nan
    raw = wrap_phase(th1 - th2)
    raw[undefined] = np.nan
    unwrapped = np.full_like(raw, np.nan)
    ok = ~undefined
    if ok.any():
        unwrapped[ok] = np.unwrap(raw[ok])
    c = rs.grid.center_index
    d0 = float(raw[c])
    if not math.isnan(d0):
        unwrapped += 2 * np.pi * np.round((d0 - unwrapped[c]) / (2 * np.pi))
    return PhaseReport(th1, th2, raw, unwrapped, d0, undefined)


def _check_onoff_regime(p: SystemParams, delta_2: float, factor: float = 5.0) -> float:
    if p.kappa_j >= p.kappa:
        raise DomainError("on-off phase-error estimate requires kappa_j < kappa")
    C = cooperativity(p)
    ratio = abs(delta_2) / p.gamma
    if not (C >= factor and C * factor <= ratio):
        warnings.warn(
            f"on-off phase-error estimate used outside 1 << C << delta_2/gamma (C={C:.4g}, delta_2/gamma={ratio:.4g})",
            RegimeWarning,
            stacklevel=3,
        )
    return C


def onoff_phase_error_estimate(p: SystemParams, delta_2: float) -> float:
    """Small-angle estimate of the on-off departure of delta_phase(0) from pi.

    Reduces to ``2 C gamma / delta_2`` for a lossless cavity.
    """
    C = _check_onoff_regime(p, delta_2)
    d = delta_2 / p.gamma
    x = p.kappa_j / p.kappa
    return 2 * C * d / (d * d * (1 - x * x))


def onoff_phase_error_unsimplified(p: SystemParams, delta_2: float) -> float:
    """Same estimate keeping the -2 C kappa_j/kappa - C^2 denominator terms."""
    C = _check_onoff_regime(p, delta_2)
    d = delta_2 / p.gamma
    x = p.kappa_j / p.kappa
    return 2 * C * d / (d * d * (1 - x * x) - 2 * C * x - C * C)


def onoff_phase_error_exact(p: SystemParams, delta_2: float) -> float:
    """Exact departure of Arg r_on(0) - Arg r_off(0) from pi, with r_on at zero atomic detuning."""
    pp = replace(p, delta_c=0.0)
    r_on = reflection_coefficient(pp, 0.0, 0.0)
    r_off = reflection_coefficient(pp, delta_2, 0.0)
    d = float(wrap_phase(np.angle(r_on) - np.angle(r_off)))
    return abs(float(wrap_phase(d - np.pi)))


def resonance_peaks(rs: ReflectionSpectrum, j: int) -> np.ndarray:
    """Frequencies of local maxima of the loss spectrum 1 - |r_j|^2.

    These locate the dressed atom-cavity resonances (e.g. the vacuum-Rabi doublet).
    """
    loss = 1 - np.abs(rs.r(j)) ** 2
    inner = (loss[1:-1] > loss[:-2]) & (loss[1:-1] >= loss[2:])
    idx = np.nonzero(inner)[0] + 1
    return rs.grid.samples[idx]
