"""Peak excited-state population for a resonant "duration 1" Gaussian pulse.

kappa = g = 1, gamma = 0.01, kappa_j = 0; one row per pulse-duration convention.
"""
from _common import parse_out

from dkmemory.experiments import run_population_demo
from dkmemory.output import emit_csv


def main():
    out = parse_out(__doc__.splitlines()[0])
    result = run_population_demo()
    emit_csv(result, out / "population.csv")
    for r in result.rows:
        print(f"{r.convention:24s} sigma = {r.sigma:.4f}  peak |psi_e|^2 = {r.peak_population:.4f} at t = {r.t_peak:.3f}")


if __name__ == "__main__":
    main()
