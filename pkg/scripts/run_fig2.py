#!/usr/bin/env python3
"""Reproduce the weak-drive precision-ratio map over (kappa, gamma_a).

Writes the closed-form R_w surface as CSV (columns kappa, gamma_a, R_w) and
optionally renders a quick log-log heat map.
"""

import argparse

import numpy as np

from optograv import ratio_sweep, write_ratio_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="ratio_map.csv")
    ap.add_argument("--kappa", nargs=3, type=float, default=(0.01, 5.0, 50),
                    metavar=("MIN", "MAX", "N"))
    ap.add_argument("--gamma-a", nargs=3, type=float, default=(0.1, 10.0, 50),
                    metavar=("MIN", "MAX", "N"))
    ap.add_argument("--omega-b", type=float, default=20.0)
    ap.add_argument("--gamma-b", type=float, default=1.0)
    ap.add_argument("--plot", metavar="PNG")
    args = ap.parse_args()

    kappas = np.geomspace(args.kappa[0], args.kappa[1], int(args.kappa[2]))
    gammas = np.geomspace(args.gamma_a[0], args.gamma_a[1], int(args.gamma_a[2]))
    R = ratio_sweep(kappas, gammas, gamma_b=args.gamma_b, omega_b=args.omega_b)
    write_ratio_csv(args.out, kappas, gammas, R)
    print(f"wrote {R.size} rows to {args.out}; "
          f"fraction R_w > 1: {(R > 1).mean():.3f}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        fig, ax = plt.subplots(figsize=(5, 4))
        pc = ax.pcolormesh(gammas, kappas, R, shading="auto")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel(r"$\gamma_a$")
        ax.set_ylabel(r"$\kappa$")
        fig.colorbar(pc, label=r"$R_w$")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote {args.plot}")


if __name__ == "__main__":
    main()
