"""Physical parameters, scheme geometry, frequency grids and photon wave packets.

All rates and frequencies are amplitude rates measured in units of the main
cavity coupling rate kappa.  ``SystemParams.normalized()`` rescales a parameter
set given in absolute units so that ``kappa == 1``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, QuadratureError

#: Relative agreement required between a spectral integral and its
#: coarse-grid (every other sample) counterpart.
REFINEMENT_RTOL = 1e-8
DEFAULT_GRID_POINTS = 4097
DEFAULT_SPAN_SIGMAS = 8.0


@dataclass(frozen=True)
class SystemParams:
    """Cavity and atom rates for the single-excitation model.

    ``delta_1``/``delta_2`` are the atomic detunings for the two ground states;
    ``delta_c`` is the cavity detuning from the photon carrier.
    """

    kappa: float = 1.0
    kappa_j: float = 0.0
    gamma: float = 1.0
    g: float = 0.0
    delta_c: float = 0.0
    delta_1: float = 0.0
    delta_2: float = 0.0

    def __post_init__(self):
        for name in ("kappa", "kappa_j", "gamma", "g", "delta_c", "delta_1", "delta_2"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ConfigError(f"{name} must be finite, got {v!r}")
        if self.kappa <= 0:
            raise ConfigError(f"kappa must be > 0, got {self.kappa}")
        if self.gamma <= 0:
            raise ConfigError(f"gamma must be > 0, got {self.gamma}")
        if self.kappa_j < 0:
            raise ConfigError(f"kappa_j must be >= 0, got {self.kappa_j}")
        if self.g < 0:
            raise ConfigError(f"g must be >= 0, got {self.g}")

    def cooperativity(self) -> float:
        return cooperativity(self)

    def normalized(self) -> "SystemParams":
        """Same physics expressed with ``kappa == 1``."""
        k = self.kappa
        return SystemParams(
            kappa=1.0,
            kappa_j=self.kappa_j / k,
            gamma=self.gamma / k,
            g=self.g / k,
            delta_c=self.delta_c / k,
            delta_1=self.delta_1 / k,
            delta_2=self.delta_2 / k,
        )

    def with_cooperativity(self, C: float) -> "SystemParams":
        return replace(self, g=g_from_cooperativity(C, self.kappa, self.gamma))

    def with_geometry(self, geom: "SchemeGeometry") -> "SystemParams":
        d1, d2 = build_detunings(geom)
        return replace(self, delta_1=d1, delta_2=d2)

    def detuning(self, j: int) -> float:
        if j == 1:
            return self.delta_1
        if j == 2:
            return self.delta_2
        raise ConfigError(f"ground-state index must be 1 or 2, got {j}")


@dataclass(frozen=True)
class FullSystemParams:
    """Reduced parameters plus the fictitious spontaneous-emission cavity Q.

    ``base.gamma`` is ignored by the three-amplitude dynamics; the
    spontaneous damping there comes from ``g_q**2 / kappa_q``.
    """

    base: SystemParams
    kappa_q: float
    g_q: float

    def __post_init__(self):
        if not (self.kappa_q > 0 and math.isfinite(self.kappa_q)):
            raise ConfigError(f"kappa_q must be finite and > 0, got {self.kappa_q}")
        if self.g_q < 0:
            raise ConfigError(f"g_q must be >= 0, got {self.g_q}")

    def implied_gamma(self) -> float:
        return self.g_q**2 / self.kappa_q

    @classmethod
    def bad_cavity(cls, base: SystemParams, kappa_q: float) -> "FullSystemParams":
        """Q cavity whose adiabatic elimination reproduces ``base.gamma``."""
        return cls(base=base, kappa_q=kappa_q, g_q=math.sqrt(base.gamma * kappa_q))


class Scheme(str, enum.Enum):
    ON_OFF = "on-off"
    PUSH_PULL = "push-pull"

    @classmethod
    def parse(cls, value) -> "Scheme":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"onoff": "on-off", "pushpull": "push-pull"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ConfigError(f"unknown scheme {value!r}; expected 'on-off' or 'push-pull'") from None


@dataclass(frozen=True)
class SchemeGeometry:
    scheme: Scheme
    delta: float

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise ConfigError(f"ground-state separation must be > 0, got {self.delta}")


def build_detunings(geom: SchemeGeometry) -> tuple[float, float]:
    """Atomic detunings ``(delta_1, delta_2)`` for a scheme.

    On-off puts state 1 on resonance and state 2 at ``delta``; push-pull puts
    the carrier midway, at ``-delta/2`` and ``+delta/2``.
    """
    if not geom.delta > 0:
        raise ConfigError("ground-state separation must be > 0")
    if geom.scheme is Scheme.ON_OFF:
        return 0.0, geom.delta
    half = 0.5 * geom.delta
    return -half, half


def cooperativity(p: SystemParams) -> float:
    """Lossless single-atom cooperativity g^2/(kappa*gamma); kappa_j is excluded."""
    return p.g**2 / (p.kappa * p.gamma)


def g_from_cooperativity(C: float, kappa: float = 1.0, gamma: float = 1.0) -> float:
    if C < 0 or not math.isfinite(C):
        raise ConfigError(f"cooperativity must be finite and >= 0, got {C}")
    return math.sqrt(C * kappa * gamma)


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Uniform grid symmetric about zero with an odd number of samples."""

    samples: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.samples, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "samples", w)
        n = w.size
        if n < 3 or n % 2 == 0:
            raise ConfigError(f"grid needs an odd number (>= 3) of samples, got {n}")
        d = np.diff(w)
        if np.any(d <= 0):
            raise ConfigError("grid samples must be strictly increasing")
        if np.max(np.abs(d - d[0])) > 1e-9 * d[0]:
            raise ConfigError("grid spacing must be uniform")
        if np.max(np.abs(w + w[::-1])) > 1e-12 * max(abs(w[-1]), 1.0):
            raise ConfigError("grid must be symmetric about 0")
        if w[n // 2] != 0.0:
            raise ConfigError("grid must contain omega = 0")

    @classmethod
    def symmetric(cls, half_span: float, n: int = DEFAULT_GRID_POINTS) -> "FrequencyGrid":
        if n < 3 or n % 2 == 0:
            raise ConfigError(f"grid needs an odd number (>= 3) of samples, got {n}")
        if not half_span > 0:
            raise ConfigError("grid half-span must be > 0")
        m = n // 2
        step = half_span / m
        # integer multiples keep w[-k] == -w[k] exactly
        return cls(np.arange(-m, m + 1) * step)

    @property
    def count(self) -> int:
        return self.samples.size

    @property
    def step(self) -> float:
        return float(self.samples[1] - self.samples[0])

    @property
    def half_span(self) -> float:
        return float(self.samples[-1])

    @property
    def center_index(self) -> int:
        return self.count // 2

    def weights(self) -> np.ndarray:
        """Trapezoid weights for the measure d(omega)/(2 pi)."""
        w = np.full(self.count, self.step / (2 * np.pi))
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    def same_as(self, other: "FrequencyGrid") -> bool:
        return self is other or (
            self.count == other.count and np.array_equal(self.samples, other.samples)
        )


def spectral_grid(sigma: float, n: int = DEFAULT_GRID_POINTS, span: float = DEFAULT_SPAN_SIGMAS) -> FrequencyGrid:
    """Default grid for spectrum-weighted integrals: +-span*sigma, n points."""
    return FrequencyGrid.symmetric(span * sigma, n)


def plotting_grid(p: SystemParams, n: int = DEFAULT_GRID_POINTS) -> FrequencyGrid:
    half = max(2 * abs(p.delta_1), 2 * abs(p.delta_2), 4 * p.g, 8 * p.kappa)
    return FrequencyGrid.symmetric(half, n)


def trapezoid(values: np.ndarray, grid: FrequencyGrid) -> complex:
    """Plain trapezoid estimate of the integral of ``values`` d(omega)/(2 pi)."""
    return complex(np.dot(grid.weights(), values))


def spectral_integral(values: np.ndarray, grid: FrequencyGrid, rtol: float = REFINEMENT_RTOL, label: str = "integral"):
    """Trapezoid integral over d(omega)/(2 pi) with a grid-refinement check.

    The integral on the full grid is compared with the one on the grid of
    every other sample (half the resolution).  Disagreement beyond ``rtol``,
    relative to the integral of ``|values|``, raises ``QuadratureError``.
    Returns a real float for real input and a complex otherwise.
    """
    values = np.asarray(values)
    if values.shape != grid.samples.shape:
        raise ConfigError(f"{label}: integrand has shape {values.shape}, grid has {grid.samples.shape}")
    fine = np.dot(grid.weights(), values)
    coarse_vals = values[::2]
    cw = np.full(coarse_vals.size, 2 * grid.step / (2 * np.pi))
    cw[0] *= 0.5
    cw[-1] *= 0.5
    coarse = np.dot(cw, coarse_vals)
    scale = float(np.dot(grid.weights(), np.abs(values)))
    if abs(fine - coarse) > rtol * scale:
        raise QuadratureError(
            f"{label}: grid refinement check failed (N={grid.count}, step={grid.step:.3e}): "
            f"full={complex(fine):.12g}, half-resolution={complex(coarse):.12g}, |diff|/scale={abs(fine - coarse) / scale:.3e} > {rtol:.1e}; "
            "increase the number of grid points"
        )
    if np.iscomplexobj(values):
        return complex(fine)
    return float(fine)


@dataclass(frozen=True, eq=False)
class PhotonSpectrum:
    grid: FrequencyGrid
    amplitude: np.ndarray
    sigma: float | None = None

    def __post_init__(self):
        a = np.asarray(self.amplitude, dtype=complex)
        if a.shape != self.grid.samples.shape:
            raise ConfigError("spectral amplitude does not match its grid")
        a.setflags(write=False)
        object.__setattr__(self, "amplitude", a)

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2

    def norm(self) -> float:
        return spectral_integral(self.intensity, self.grid, label="photon normalization")


def gaussian_amplitude(sigma: float, omega):
    """(8 pi/sigma^2)^(1/4) exp(-omega^2/sigma^2)."""
    return (8 * np.pi / sigma**2) ** 0.25 * np.exp(-np.square(omega) / sigma**2)


def gaussian_spectrum(sigma: float, grid: FrequencyGrid | None = None) -> PhotonSpectrum:
    if not (sigma > 0 and math.isfinite(sigma)):
        raise ConfigError(f"photon linewidth must be > 0, got {sigma}")
    if grid is None:
        grid = spectral_grid(sigma)
    if grid.half_span < 6 * sigma * (1 - 1e-12):
        raise ConfigError(
            f"grid half-span {grid.half_span:.4g} is narrower than 6 sigma = {6 * sigma:.4g}"
        )
    spec = PhotonSpectrum(grid, gaussian_amplitude(sigma, grid.samples).astype(complex), sigma)
    n = spec.norm()
    if abs(n - 1) > 1e-10:
        raise ConfigError(f"Gaussian spectrum is not normalized on this grid: norm = {n!r}")
    return spec


def gaussian_time_amplitude(sigma: float, t):
    """A(t) = (sigma^2/2pi)^(1/4) exp(-sigma^2 t^2/4), the time-domain Gaussian pulse.

    Inverse transform of ``gaussian_amplitude`` with kernel exp(-i omega t);
    ``|A(t)|^2`` has standard deviation ``1/sigma``.
    """
    return (sigma**2 / (2 * np.pi)) ** 0.25 * np.exp(-(sigma**2) * np.square(t) / 4)


@dataclass(frozen=True)
class QubitState:
    """Photon polarization qubit alpha|H> + beta|V> (loaded as alpha|g1> + beta|g2>)."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        if abs(abs(a) ** 2 + abs(b) ** 2 - 1) > 1e-12:
            raise ConfigError(f"qubit is not normalized: |alpha|^2+|beta|^2 = {abs(a) ** 2 + abs(b) ** 2!r}")

    @classmethod
    def from_angles(cls, chi: float, phi: float) -> "QubitState":
        return cls(math.cos(chi / 2), complex(math.cos(phi), math.sin(phi)) * math.sin(chi / 2))

    @property
    def chi(self) -> float:
        return 2 * math.atan2(abs(self.beta), abs(self.alpha))

    @property
    def phi(self) -> float:
        """Relative phase arg(beta) - arg(alpha); 0 when beta vanishes."""
        if self.beta == 0:
            return 0.0
        ref = self.alpha if self.alpha != 0 else 1.0
        z = self.beta * ref.conjugate()
        return math.atan2(z.imag, z.real)


def wrap_phase(x):
    """Map angles into (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2 * np.pi)


@dataclass(frozen=True)
class InterferometerSettings:
    """Lower-path phase ``theta``, delay ``delay`` (units 1/kappa) and attenuation ``eta``."""

    theta: float = 0.0
    delay: float = 1.2
    eta: float = 1.0

    def __post_init__(self):
        if not 0 <= self.eta <= 1:
            raise ConfigError(f"eta must lie in [0, 1], got {self.eta}")
        if not (math.isfinite(self.theta) and math.isfinite(self.delay)):
            raise ConfigError("interferometer phase and delay must be finite")
        object.__setattr__(self, "theta", float(wrap_phase(self.theta)))

    @classmethod
    def default_for(cls, scheme, delay: float = 1.2) -> "InterferometerSettings":
        """Lower-path phase matched to the state-1 center reflectivity.

        State 1 reflects with phase pi (on-off, resonant atom) or -pi/2
        (push-pull, atom at -delta/2), so the lower path carries the same phase.
        """
        scheme = Scheme.parse(scheme)
        theta = math.pi if scheme is Scheme.ON_OFF else -math.pi / 2
        return cls(theta=theta, delay=delay)
