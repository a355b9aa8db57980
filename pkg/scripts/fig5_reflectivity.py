"""Reflection spectra and ring-down dynamics for the two Fig. 5 configurations.

Writes one reflectivity table and one trajectory table per ground state for
the on-off preset (C = 10) and the push-pull preset (C = C_pi).
"""
from _common import parse_out

from dkmemory.dynamics import default_control, gaussian_pulse, integrate_reduced, loss_output
from dkmemory.output import emit_reflectivity_csv, emit_trajectory_csv
from dkmemory.params import plotting_grid
from dkmemory.presets import get_preset
from dkmemory.reflection import phase_report, reflection_spectrum


def main():
    out = parse_out(__doc__.splitlines()[0])
    for name in ("fig5-onoff", "fig5-pushpull"):
        pr = get_preset(name)
        p = pr.params(pr.schemes[0])
        rs = reflection_spectrum(p, None, plotting_grid(p))
        ph = phase_report(rs)
        emit_reflectivity_csv(rs, out / f"{name}_reflectivity.csv", ph)
        print(f"{name}: C = {p.cooperativity():.4f}, delta_phase(0) = {ph.delta_phase_at_0:+.6f} rad")
        for j in (1, 2):
            dj = p.detuning(j)
            traj = integrate_reduced(p, dj, gaussian_pulse(pr.sigma), default_control(p, pr.sigma, delta_j=dj))
            budget = loss_output(traj)
            emit_trajectory_csv(traj, out / f"{name}_dynamics_g{j}.csv")
            print(f"  g{j}: reflected {budget.reflected:.6f}, spontaneous {budget.spontaneous_loss:.6f}")


if __name__ == "__main__":
    main()
