#!/usr/bin/env python3
"""Dispersion and decay-rate sweeps for the two linearised regimes.

Measures, per wavenumber, the Muskat modal decay rate against
darcy_factor*k/2 and the water-wave standing frequency against sqrt(g k).

Usage: python scripts/dispersion_study.py [--kmax K] [--out DIR]
"""

import argparse
import tempfile

from turnwave.config import ScenarioConfig
from turnwave.scenarios import muskat_linear, waterwave_linear


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=4)
    ap.add_argument("--out", default=None,
                    help="output parent dir (default: temporary)")
    args = ap.parse_args()
    parent = args.out or tempfile.mkdtemp(prefix="dispersion_")

    print("Muskat decay (measured / theory / rel. error):")
    for k in range(1, args.kmax + 1):
        cfg = ScenarioConfig(scenario="muskat-linear")
        cfg.grid.n, cfg.wave.k = 128, k
        cfg.numerics.dt, cfg.numerics.t_end = 2e-3, 0.4
        cfg.numerics.snapshot_cadence = 100
        cfg.output_dir = f"{parent}/muskat_k{k}"
        r = muskat_linear(cfg).report
        print(f"  k = {k}: {r['measured_rate']:.8f} / {r['theory_rate']:.8f}"
              f" / {r['relative_error']:.2e}")

    print("Water-wave frequency (measured / theory / rel. error):")
    for k in range(1, args.kmax + 1):
        cfg = ScenarioConfig(scenario="waterwave-linear")
        cfg.grid.n, cfg.wave.k = 64, k
        cfg.numerics.dt, cfg.numerics.t_end = 5e-3, 2.5
        cfg.numerics.snapshot_cadence = 100
        cfg.output_dir = f"{parent}/waterwave_k{k}"
        r = waterwave_linear(cfg).report
        print(f"  k = {k}: {r['measured_frequency']:.8f} /"
              f" {r['theory_frequency']:.8f} / {r['relative_error']:.2e}")

    print(f"artifacts under {parent}")


if __name__ == "__main__":
    main()
