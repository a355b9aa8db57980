"""Fidelity and heralding probability versus photon linewidth at C = C_pi (Fig. 9).

Runs both the Fig. 8(a) cavity and its low-loss variant.
"""
from _common import parse_out

from dkmemory.experiments import run_bandwidth_scan
from dkmemory.output import emit_csv, emit_svg
from dkmemory.presets import get_preset


def main():
    out = parse_out(__doc__.splitlines()[0])
    for name in ("fig9", "fig9-lowloss"):
        result = run_bandwidth_scan(get_preset(name), workers=4)
        emit_csv(result, out / f"{name}_bandwidth.csv")
        emit_svg(result, out / f"{name}_bandwidth.svg")
        print(f"{name}: C = {result.rows[0].C:.4f}")
        for r in result.rows:
            print(f"  sigma = {r.sigma:.5f}  F_ave = {r.F_ave:.5f}  P_herald_ave = {r.P_herald_ave:.5f}")
        print(f"  F decreasing: {result.fidelity_decreasing}, P increasing: {result.herald_increasing}")


if __name__ == "__main__":
    main()
