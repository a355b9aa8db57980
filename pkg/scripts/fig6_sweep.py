"""Averaged fidelity and heralding probability versus C for the Fig. 6 parameters.

Each preset produces a CSV table and an SVG plot; the push-pull row at C_pi
is flagged in both.
"""
from _common import parse_out

from dkmemory.experiments import run_sweep
from dkmemory.output import emit_csv, emit_svg
from dkmemory.presets import get_preset


def main():
    out = parse_out(__doc__.splitlines()[0])
    for name in ("fig6",):
        result = run_sweep(get_preset(name), workers=4)
        emit_csv(result, out / f"{name}.csv")
        emit_svg(result, out / f"{name}.svg")
        for msg in result.diagnostics:
            print(f"warning: {msg}")
        for (scheme, kj), rows in result.trajectories().items():
            best = max((r for r in rows if r.status == "ok"), key=lambda r: r.F_ave, default=None)
            if best is not None:
                print(f"{name} {scheme:9s} kappa_j={kj:<6g} max F_ave {best.F_ave:.5f} at C = {best.C:.3f}")


if __name__ == "__main__":
    main()
