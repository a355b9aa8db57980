"""Single-photon loading of a cavity-atom quantum memory.

Reflection spectra of a cavity containing a three-level atom, the
single-excitation time-domain dynamics, and the heralded memory-loading
fidelity of an interferometric photon-to-atom state transfer.  All rates are
in units of the cavity coupling rate kappa.
"""
from .errors import (
    ConfigError,
    DomainError,
    IntegrationError,
    NoClickError,
    NumericalError,
    OutputError,
    QuadratureError,
    SingularityError,
    TruncationError,
)
from .params import (
    FrequencyGrid,
    FullSystemParams,
    InterferometerSettings,
    PhotonSpectrum,
    QubitState,
    Scheme,
    SchemeGeometry,
    SystemParams,
    build_detunings,
    cooperativity,
    g_from_cooperativity,
    gaussian_spectrum,
    spectral_grid,
)
from .reflection import (
    ReflectionSpectrum,
    c_pi,
    center_reflectivity,
    center_reflectivity_at_cpi,
    phase_report,
    reflection_coefficient,
    reflection_spectrum,
)
from .dynamics import (
    AmplitudeTrajectory,
    IntegrationControl,
    default_control,
    gaussian_pulse,
    integrate_full,
    integrate_reduced,
    loss_output,
    output_spectrum,
)
from .loading import (
    LoadingReport,
    averaged_loading,
    bloch_average,
    bloch_quadrature,
    branch_probability,
    conditional_state,
    fidelity,
    loading_report,
    refine_interferometer,
)
from .presets import PRESETS, Preset, get_preset
from .experiments import SweepResult, run_bandwidth_scan, run_population_demo, run_sweep
from .output import emit_csv, emit_svg

__version__ = "0.1.0"
