"""Heralding probability, conditional memory state and fidelity.

The photon qubit alpha|H> + beta|V> is split by a polarizing beam splitter;
the H part reflects off the cavity (r_1 or r_2 depending on the atomic ground
state), the V part picks up exp(i theta) exp(i omega T) in the lower arm, and
the two are recombined on a 50/50 beam splitter.  A click at detector
``s = +1`` or ``-1`` leaves the atom ideally in alpha|g1> + s beta|g2>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, NoClickError
from .params import InterferometerSettings, PhotonSpectrum, QubitState, spectral_integral
from .reflection import ReflectionSpectrum

#: Smallest branch probability that may be conditioned on.
MIN_BRANCH_PROBABILITY = 1e-14


def _check_grids(rs: ReflectionSpectrum, ph: PhotonSpectrum):
    if not rs.grid.same_as(ph.grid):
        raise ConfigError("reflection spectrum and photon spectrum are sampled on different grids")


def _check_branch(s: int):
    if s not in (1, -1):
        raise ConfigError(f"detector branch must be +1 or -1, got {s}")


def energy_reflectivity(rs: ReflectionSpectrum, ph: PhotonSpectrum, j: int) -> float:
    """R_j: probability that the photon is reflected into B with the atom in state j."""
    _check_grids(rs, ph)
    return spectral_integral(ph.intensity * np.abs(rs.r(j)) ** 2, rs.grid, label=f"R_{j}")


def herald_probability(q: QubitState, R1: float, R2: float, eta: float = 1.0) -> float:
    return eta * abs(q.beta) ** 2 + abs(q.alpha) ** 2 * (R1 + R2) / 2


def _lower_arm(rs: ReflectionSpectrum, ifc: InterferometerSettings) -> np.ndarray:
    return np.exp(1j * (ifc.theta + rs.grid.samples * ifc.delay))


def _branch_amplitudes(rs, q, ifc, s):
    """phi_1 and phi_2s after the inverse Hadamard on the atom."""
    beta = math.sqrt(ifc.eta) * q.beta
    phi1 = q.alpha * (rs.r1 - rs.r2)
    phi2 = q.alpha * (rs.r1 + rs.r2) + 2 * s * beta * _lower_arm(rs, ifc)
    return phi1, phi2


def branch_probability(rs: ReflectionSpectrum, ph: PhotonSpectrum, q: QubitState, ifc: InterferometerSettings, s: int) -> float:
    """K_s, the probability of a click at detector ``s``."""
    _check_grids(rs, ph)
    _check_branch(s)
    phi1, phi2 = _branch_amplitudes(rs, q, ifc, s)
    return spectral_integral(ph.intensity * (np.abs(phi1) ** 2 + np.abs(phi2) ** 2), rs.grid, label=f"K_{s:+d}") / 8


def conditional_state(
    rs: ReflectionSpectrum,
    ph: PhotonSpectrum,
    q: QubitState,
    ifc: InterferometerSettings,
    s: int,
) -> tuple[np.ndarray, float]:
    """Normalized atomic density matrix in the {|g1>, |g2>} basis and K_s after a click at ``s``."""
    _check_grids(rs, ph)
    _check_branch(s)
    phi1, phi2 = _branch_amplitudes(rs, q, ifc, s)
    I = ph.intensity
    grid = rs.grid
    a11 = spectral_integral(I * np.abs(phi1) ** 2, grid, label="rho_11")
    a22 = spectral_integral(I * np.abs(phi2) ** 2, grid, label="rho_22")
    a12 = spectral_integral(I * phi1 * np.conj(phi2), grid, label="rho_12")
    K = (a11 + a22) / 8
    if K < MIN_BRANCH_PROBABILITY:
        raise NoClickError(f"branch s={s:+d} has probability {K:.3e}; cannot condition on it")
    rho = np.array([[a11, a12], [np.conj(a12), a22]], dtype=complex) / (8 * K)
    return rho, K


def target_state(q: QubitState, s: int) -> np.ndarray:
    return np.array([q.alpha, s * q.beta], dtype=complex)


def state_fidelity(rho: np.ndarray, q: QubitState, s: int) -> float:
    """<target|rho|target> for the target alpha|g1> + s beta|g2>."""
    v = target_state(q, s)
    return float(np.real(np.conj(v) @ rho @ v))


def fidelity(
    rs: ReflectionSpectrum,
    ph: PhotonSpectrum,
    q: QubitState,
    ifc: InterferometerSettings,
    s: int,
    K: float | None = None,
) -> float:
    """Memory fidelity F_s from the closed-form overlap integral.

    Independent of ``conditional_state`` apart from the normalization K_s,
    which may be passed in to avoid recomputing it.
    """
    _check_grids(rs, ph)
    _check_branch(s)
    if K is None:
        K = branch_probability(rs, ph, q, ifc, s)
    if K < MIN_BRANCH_PROBABILITY:
        raise NoClickError(f"branch s={s:+d} has probability {K:.3e}; cannot condition on it")
    a, b = q.alpha, q.beta
    aa = abs(a) ** 2
    cross = s * np.conj(b) * a
    b_lower = math.sqrt(ifc.eta) * b
    # target overlap with the lower-arm amplitude: s^2 beta* (sqrt(eta) beta)
    amp = (aa + cross) * rs.r1 - (aa - cross) * rs.r2 + 2 * np.conj(b) * b_lower * _lower_arm(rs, ifc)
    return spectral_integral(ph.intensity * np.abs(amp) ** 2, rs.grid, label=f"F_{s:+d}") / (8 * K)


@dataclass(frozen=True)
class LoadingReport:
    R1: float
    R2: float
    K_plus: float
    K_minus: float
    F_plus: float
    F_minus: float
    rho_plus: np.ndarray
    rho_minus: np.ndarray
    P_herald: float

    @property
    def F_weighted(self) -> float:
        """Herald-weighted fidelity over both detector branches."""
        return (self.K_plus * self.F_plus + self.K_minus * self.F_minus) / (self.K_plus + self.K_minus)


def loading_report(
    rs: ReflectionSpectrum,
    ph: PhotonSpectrum,
    q: QubitState,
    ifc: InterferometerSettings,
) -> LoadingReport:
    R1 = energy_reflectivity(rs, ph, 1)
    R2 = energy_reflectivity(rs, ph, 2)
    rho_p, K_p = conditional_state(rs, ph, q, ifc, 1)
    rho_m, K_m = conditional_state(rs, ph, q, ifc, -1)
    return LoadingReport(
        R1=R1, R2=R2, K_plus=K_p, K_minus=K_m,
        F_plus=fidelity(rs, ph, q, ifc, 1, K_p),
        F_minus=fidelity(rs, ph, q, ifc, -1, K_m),
        rho_plus=rho_p, rho_minus=rho_m,
        P_herald=herald_probability(q, R1, R2, ifc.eta),
    )


@dataclass(frozen=True, eq=False)
class BlochQuadrature:
    chi: np.ndarray
    phi: np.ndarray
    weight: np.ndarray
    scheme: str

    def states(self):
        for chi, phi in zip(self.chi, self.phi):
            yield QubitState.from_angles(float(chi), float(phi))


def bloch_quadrature(n_chi: int = 10, n_phi: int = 10) -> BlochQuadrature:
    """Gauss-Legendre nodes in cos(chi) times uniform midpoints in phi.

    Weights are normalized to the uniform measure on the sphere and sum to 1.
    """
    if n_chi < 1 or n_phi < 1:
        raise ConfigError("Bloch quadrature needs at least one node per axis")
    x, wx = np.polynomial.legendre.leggauss(n_chi)
    phis = -np.pi + (np.arange(n_phi) + 0.5) * (2 * np.pi / n_phi)
    chi = np.repeat(np.arccos(x), n_phi)
    phi = np.tile(phis, n_chi)
    weight = np.repeat(wx / 2, n_phi) / n_phi
    return BlochQuadrature(chi, phi, weight, f"gauss-legendre({n_chi}) x midpoint({n_phi})")


def bloch_average(f: Callable[[QubitState], float], quad: BlochQuadrature | None = None) -> float:
    quad = quad or bloch_quadrature()
    vals = np.array([f(q) for q in quad.states()], dtype=float)
    return float(quad.weight @ vals)


@dataclass(frozen=True)
class AveragedLoading:
    F_ave: float
    F_ave_plus: float
    F_ave_minus: float
    P_herald_ave: float
    R1: float
    R2: float


def averaged_loading(
    rs: ReflectionSpectrum,
    ph: PhotonSpectrum,
    ifc: InterferometerSettings,
    quad: BlochQuadrature | None = None,
) -> AveragedLoading:
    """Bloch-sphere averages of fidelity and heralding probability.

    ``F_ave`` weights the two detector branches by their click probabilities
    at each node before averaging; ``F_ave_plus``/``F_ave_minus`` average
    each branch on its own.
    """
    quad = quad or bloch_quadrature()
    R1 = energy_reflectivity(rs, ph, 1)
    R2 = energy_reflectivity(rs, ph, 2)
    fw, fp, fm, ph_ave = [], [], [], []
    for q in quad.states():
        Kp = branch_probability(rs, ph, q, ifc, 1)
        Km = branch_probability(rs, ph, q, ifc, -1)
        Fp = fidelity(rs, ph, q, ifc, 1, Kp)
        Fm = fidelity(rs, ph, q, ifc, -1, Km)
        fw.append((Kp * Fp + Km * Fm) / (Kp + Km))
        fp.append(Fp)
        fm.append(Fm)
        ph_ave.append(herald_probability(q, R1, R2, ifc.eta))
    w = quad.weight
    return AveragedLoading(
        F_ave=float(w @ fw), F_ave_plus=float(w @ fp), F_ave_minus=float(w @ fm),
        P_herald_ave=float(w @ ph_ave), R1=R1, R2=R2,
    )


_INV_PHI = (math.sqrt(5) - 1) / 2


def _golden_max(f: Callable[[float], float], a: float, b: float, xtol: float) -> tuple[float, float]:
    """Maximum of a unimodal ``f`` on [a, b] by golden-section search."""
    c, d = b - _INV_PHI * (b - a), a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def refine_interferometer(
    rs: ReflectionSpectrum,
    ph: PhotonSpectrum,
    start: InterferometerSettings,
    quad: BlochQuadrature | None = None,
    theta_span: float = math.pi / 4,
    delay_span: float = 1.0,
    rounds: int = 2,
    xtol: float = 1e-3,
) -> tuple[InterferometerSettings, float]:
    """Raise ``F_ave`` by alternating golden-section searches over theta and the delay.

    Each search covers ``start`` plus or minus the given span; the delay is
    kept non-negative.  Returns the refined settings and their ``F_ave``.
    The fixed defaults are usually within a fraction of a percent of this
    optimum, so sweeps only call it on request.
    """
    quad = quad or bloch_quadrature()
    theta, delay, eta = start.theta, start.delay, start.eta

    def score(th, T):
        return averaged_loading(rs, ph, InterferometerSettings(theta=th, delay=T, eta=eta), quad).F_ave

    best = score(theta, delay)
    for _ in range(rounds):
        th, f = _golden_max(lambda x: score(x, delay), theta - theta_span, theta + theta_span, xtol)
        if f > best:
            theta, best = th, f
        T, f = _golden_max(lambda x: score(theta, x), max(0.0, delay - delay_span), delay + delay_span, xtol)
        if f > best:
            delay, best = T, f
    return InterferometerSettings(theta=theta, delay=delay, eta=eta), best
