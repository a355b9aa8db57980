"""Command-line interface.

Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import experiments, output
from .config import RunConfig, load_config, parse_config
from .dynamics import default_control, gaussian_pulse, integrate_full, integrate_reduced, loss_output
from .errors import ConfigError, NumericalError
from .loading import loading_report
from .params import FullSystemParams, QubitState, gaussian_spectrum, plotting_grid, spectral_grid
from .presets import PRESETS, describe, get_preset
from .reflection import phase_report, reflection_spectrum, resonance_peaks

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

DEFAULT_PRESETS = {
    "reflectivity": "fig5-pushpull",
    "dynamics": "fig5-pushpull",
    "loading": "fig6",
    "sweep": "fig6",
    "bandwidth": "fig9",
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with the configuration exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _common_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the subcommand from being reset by the subparser default
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", type=Path, help="flat TOML configuration file")
    common.add_argument("--out", type=Path, help="output directory (default: current directory)")
    common.add_argument("--grid-points", type=int, help="odd number of frequency samples")
    common.add_argument("--tol", type=float, help="relative tolerance of the ODE integrator")
    common.add_argument("--seed", type=int, help="seed for random draws (loading --random-state)")
    return common


def _physics_args(p: argparse.ArgumentParser):
    p.add_argument("--preset", help="preset name (see 'preset list')")
    p.add_argument("--scheme", help="on-off or push-pull")
    p.add_argument("--C", dest="C", type=float, help="cooperativity (default: preset value or C_pi)")
    p.add_argument("--kappa-j", dest="kappa_j", type=float, help="cavity loss rate")
    p.add_argument("--sigma", type=float, help="photon linewidth")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = _Parser(
        prog="dkmemory",
        description="Single-photon loading of a cavity-atom quantum memory.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("reflectivity", parents=[common], help="reflection spectra and conditional phases")
    _physics_args(p)
    p.add_argument("--lossless", action="store_true", help="set gamma and kappa_j to zero")

    p = sub.add_parser("dynamics", parents=[common], help="time-domain amplitudes for one ground state")
    _physics_args(p)
    p.add_argument("--ground-state", dest="ground_state", type=int, choices=(1, 2))
    p.add_argument("--kappa-q", dest="kappa_q", type=float, help="keep the spontaneous-emission cavity with this rate")
    p.add_argument("--lossless", action="store_true", help="set gamma and kappa_j to zero")

    p = sub.add_parser("loading", parents=[common], help="fidelity and heralding for one photon qubit")
    _physics_args(p)
    p.add_argument("--chi", type=float, help="polar Bloch angle of the photon qubit")
    p.add_argument("--phi", type=float, help="azimuthal Bloch angle of the photon qubit")
    p.add_argument("--theta", type=float, help="lower-arm phase")
    p.add_argument("--random-state", action="store_true", help="draw a uniformly random qubit using --seed")

    p = sub.add_parser("sweep", parents=[common], help="cooperativity sweep of F_ave and P_herald_ave")
    p.add_argument("--preset", help="preset name (see 'preset list')")
    p.add_argument("--schemes", type=_str_list, help="comma-separated schemes")
    p.add_argument("--c-min", dest="c_min", type=float)
    p.add_argument("--c-max", dest="c_max", type=float)
    p.add_argument("--c-points", dest="c_points", type=int)
    p.add_argument("--kappa-j", dest="kappa_j_values", type=_float_list, help="comma-separated cavity loss rates")
    p.add_argument("--workers", type=int)
    p.add_argument("--refine-interferometer", action="store_true",
                   help="optimize the lower-arm phase and delay at every point (slow)")

    p = sub.add_parser("bandwidth", parents=[common], help="F_ave and P_herald_ave versus photon linewidth")
    p.add_argument("--preset", help="preset name (see 'preset list')")
    p.add_argument("--sigmas", type=_float_list, help="comma-separated photon linewidths")
    p.add_argument("--C", dest="C", type=float, help="cooperativity (default: C_pi)")
    p.add_argument("--scheme")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("population", parents=[common], help="peak excited population for a resonant pulse")
    p.add_argument("--duration", type=float)
    p.add_argument("--conventions", type=_str_list, help="comma-separated duration conventions")

    p = sub.add_parser("preset", parents=[common], help="inspect the preset catalog")
    psub = p.add_subparsers(dest="preset_command", metavar="ACTION", parser_class=_Parser)
    psub.required = True
    psub.add_parser("list", help="list preset names")
    show = psub.add_parser("show", help="print one preset")
    show.add_argument("name")
    return parser


# keys copied from the namespace into the flat config mapping
_CONFIG_KEYS = {
    "preset": "preset", "C": "C", "kappa_j": "kappa_j", "sigma": "sigma",
    "c_min": "c_min", "c_max": "c_max", "c_points": "c_points", "kappa_j_values": "kappa_j_values",
    "sigmas": "sigmas", "schemes": "schemes", "workers": "workers", "chi": "chi", "phi": "phi",
    "theta": "theta", "ground_state": "ground_state", "kappa_q": "kappa_q", "duration": "duration",
    "conventions": "conventions", "grid_points": "grid_points", "tol": "tol", "seed": "seed",
}


def resolve_config(args) -> RunConfig:
    """Merge the config file (if any) with command-line overrides; the command line wins."""
    data = {}
    for attr, key in _CONFIG_KEYS.items():
        v = getattr(args, attr, None)
        if v is not None:
            data[key] = v
    if getattr(args, "lossless", False):
        data["lossless"] = True
    config_path = getattr(args, "config", None)
    if config_path:
        return load_config(config_path, data)
    data.setdefault("preset", DEFAULT_PRESETS.get(args.command, "fig6"))
    return parse_config(data)


def _out_dir(args) -> Path:
    return getattr(args, "out", None) or Path(".")


def _scheme(args, cfg: RunConfig) -> str:
    return getattr(args, "scheme", None) or cfg.preset.schemes[0]


def cmd_reflectivity(args, cfg: RunConfig) -> int:
    pr = cfg.preset
    scheme = _scheme(args, cfg)
    p = pr.params(scheme, C=getattr(args, "C", None) or pr.fixed_c)
    grid = plotting_grid(p, cfg.grid_points)
    rs = reflection_spectrum(p, None, grid, lossless=cfg.lossless)
    ph = phase_report(rs)
    path = output.emit_reflectivity_csv(rs, _out_dir(args) / f"{pr.name}_reflectivity.csv", ph)
    print(f"preset {pr.name}, {scheme}, C = {p.cooperativity():.6g}, g = {p.g:.6g}")
    print(f"delta_1 = {p.delta_1:g}, delta_2 = {p.delta_2:g}, kappa_j = {p.kappa_j:g}, gamma = {p.gamma:g}")
    print(f"delta_phase(0) = {ph.delta_phase_at_0:.10f} rad")
    for j in (1, 2):
        peaks = resonance_peaks(rs, j)
        shown = ", ".join(f"{w:.4g}" for w in peaks[:6])
        print(f"loss peaks of r_{j}: {shown or 'none'}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_dynamics(args, cfg: RunConfig) -> int:
    pr = cfg.preset
    scheme = _scheme(args, cfg)
    p = pr.params(scheme, C=getattr(args, "C", None) or pr.fixed_c)
    j = cfg.ground_state
    dj = p.detuning(j)
    sigma = pr.sigma
    ctrl = default_control(p, sigma, delta_j=dj, rel_tol=cfg.tol, lossless=cfg.lossless)
    if cfg.kappa_q is not None:
        traj = integrate_full(FullSystemParams.bad_cavity(p, cfg.kappa_q), dj, gaussian_pulse(sigma), ctrl)
    else:
        traj = integrate_reduced(p, dj, gaussian_pulse(sigma), ctrl, lossless=cfg.lossless)
    budget = loss_output(traj)
    path = output.emit_trajectory_csv(traj, _out_dir(args) / f"{pr.name}_dynamics_g{j}.csv")
    pop = traj.excited_population()
    print(f"preset {pr.name}, {scheme}, ground state {j}, C = {p.cooperativity():.6g}")
    print(f"window {traj.times[0]:.4g} .. {traj.times[-1]:.4g}, {traj.times.size} samples, "
          f"{traj.stats.accepted} steps ({traj.stats.rejected} rejected)")
    print(f"reflected = {budget.reflected:.10f}, cavity loss = {budget.cavity_loss:.10f}, "
          f"spontaneous = {budget.spontaneous_loss:.10f}, total = {budget.total:.12f}")
    print(f"peak |psi_e|^2 = {pop.max():.6g} at t = {traj.times[int(np.argmax(pop))]:.4g}")
    print(f"wrote {path}")
    return EXIT_OK


def _random_state(seed: int) -> QubitState:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return QubitState(complex(v[0]), complex(v[1]))


def cmd_loading(args, cfg: RunConfig) -> int:
    pr = cfg.preset
    scheme = _scheme(args, cfg)
    p = pr.params(scheme, C=getattr(args, "C", None) or pr.fixed_c)
    q = _random_state(cfg.seed) if getattr(args, "random_state", False) else QubitState.from_angles(cfg.chi, cfg.phi)
    ifc = pr.interferometer(scheme)
    if cfg.theta is not None:
        ifc = replace(ifc, theta=cfg.theta)
    ph = gaussian_spectrum(pr.sigma, spectral_grid(pr.sigma, cfg.grid_points))
    rs = reflection_spectrum(p, None, ph.grid)
    rep = loading_report(rs, ph, q, ifc)
    print(f"preset {pr.name}, {scheme}, C = {p.cooperativity():.6g}, theta = {ifc.theta:.6g}, T = {ifc.delay:g}")
    print(f"qubit alpha = {q.alpha:.6g}, beta = {q.beta:.6g}")
    print(f"R1 = {rep.R1:.10f}, R2 = {rep.R2:.10f}, P_herald = {rep.P_herald:.10f}")
    print(f"K+ = {rep.K_plus:.10f}, F+ = {rep.F_plus:.10f}")
    print(f"K- = {rep.K_minus:.10f}, F- = {rep.F_minus:.10f}")
    print(f"herald-weighted F = {rep.F_weighted:.10f}")
    return EXIT_OK


def _report_diagnostics(result) -> None:
    for d in result.diagnostics:
        print(f"warning: {d}", file=sys.stderr)


def _all_failed(result) -> bool:
    return bool(result.rows) and all(r.status != "ok" for r in result.rows)


def cmd_sweep(args, cfg: RunConfig) -> int:
    pr = cfg.preset
    c_range = (pr.c_min, pr.c_max) if pr.c_min is not None else None
    result = experiments.run_sweep(
        pr, c_range=c_range, grid_points=cfg.grid_points, workers=cfg.workers,
        refine_interferometer=getattr(args, "refine_interferometer", False),
    )
    out = _out_dir(args)
    csv_path = output.emit_csv(result, out / f"{pr.name}.csv")
    svg_path = output.emit_svg(result, out / f"{pr.name}.svg")
    _report_diagnostics(result)
    for r in result.rows:
        if r.is_c_pi:
            print(f"C_pi row: {r.scheme}, kappa_j = {r.kappa_j:g}, C = {r.C:.6g}, "
                  f"F_ave = {r.F_ave:.6f}, P_herald_ave = {r.P_herald_ave:.6f}")
    for (scheme, kj), rows in result.trajectories().items():
        ok = [r for r in rows if r.status == "ok"]
        if ok:
            best = max(ok, key=lambda r: r.F_ave)
            print(f"{scheme}, kappa_j = {kj:g}: best F_ave = {best.F_ave:.6f} at C = {best.C:.6g}")
    print(f"wrote {csv_path} and {svg_path} ({len(result.rows)} rows)")
    return EXIT_NUMERICAL if _all_failed(result) else EXIT_OK


def cmd_bandwidth(args, cfg: RunConfig) -> int:
    pr = cfg.preset
    scheme = getattr(args, "scheme", None) or "push-pull"
    result = experiments.run_bandwidth_scan(
        pr, sigmas=pr.sigmas or None, C=getattr(args, "C", None), scheme=scheme,
        grid_points=cfg.grid_points, workers=cfg.workers,
    )
    out = _out_dir(args)
    csv_path = output.emit_csv(result, out / f"{pr.name}_bandwidth.csv")
    svg_path = output.emit_svg(result, out / f"{pr.name}_bandwidth.svg")
    _report_diagnostics(result)
    for r in result.rows:
        print(f"sigma = {r.sigma:.6g}: F_ave = {r.F_ave:.6f}, P_herald_ave = {r.P_herald_ave:.6f}")
    print(f"F_ave strictly decreasing: {result.fidelity_decreasing}; "
          f"P_herald_ave strictly increasing: {result.herald_increasing}")
    print(f"wrote {csv_path} and {svg_path}")
    return EXIT_NUMERICAL if _all_failed(result) else EXIT_OK


def cmd_population(args, cfg: RunConfig) -> int:
    result = experiments.run_population_demo(cfg.conventions, duration=cfg.duration, rel_tol=cfg.tol)
    path = output.emit_csv(result, _out_dir(args) / "population.csv")
    _report_diagnostics(result)
    for r in result.rows:
        print(f"{r.convention}: sigma = {r.sigma:.6g}, peak |psi_e|^2 = {r.peak_population:.6f} at t = {r.t_peak:.4g}")
    print(f"wrote {path}")
    return EXIT_NUMERICAL if _all_failed(result) else EXIT_OK


def cmd_preset(args) -> int:
    if args.preset_command == "list":
        for name in PRESETS:
            print(name)
    else:
        print(describe(get_preset(args.name)))
    return EXIT_OK


COMMANDS = {
    "reflectivity": cmd_reflectivity,
    "dynamics": cmd_dynamics,
    "loading": cmd_loading,
    "sweep": cmd_sweep,
    "bandwidth": cmd_bandwidth,
    "population": cmd_population,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            if args.command == "preset":
                return cmd_preset(args)
            cfg = resolve_config(args)
            return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
