#!/usr/bin/env python3
"""Plot rate-function tradeoff curves from rates_per_seed.csv / rates_bands.csv.

One panel per training checkpoint: the two exponents I0 (false-alarm side) and
I1 (miss side) against the relative threshold position, thin lines per seed and
a mean +/- one-standard-deviation band across seeds.
"""

import argparse
import pathlib

import matplotlib.pyplot as plt
import pandas as pd


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", type=pathlib.Path,
                        help="pipeline output directory holding the rates CSVs")
    parser.add_argument("--save", type=pathlib.Path, default=None)
    args = parser.parse_args()

    per_seed = pd.read_csv(args.out_dir / "rates_per_seed.csv")
    bands = pd.read_csv(args.out_dir / "rates_bands.csv")

    checkpoints = sorted(bands.checkpoint.unique())
    fig, axes = plt.subplots(1, len(checkpoints), figsize=(5.5 * len(checkpoints), 4.5),
                             sharey=True, squeeze=False)
    for ax, checkpoint in zip(axes[0], checkpoints):
        for seed, rows in per_seed[per_seed.checkpoint == checkpoint].groupby("seed"):
            rows = rows.sort_values("position")
            ax.plot(rows.position, rows.i0, color="C0", alpha=0.25, lw=1)
            ax.plot(rows.position, rows.i1, color="C1", alpha=0.25, lw=1)
        band = bands[bands.checkpoint == checkpoint].sort_values("position")
        ax.plot(band.position, band.i0_mean, color="C0", label="$I_0$ mean")
        ax.fill_between(band.position, band.i0_mean - band.i0_std,
                        band.i0_mean + band.i0_std, color="C0", alpha=0.2)
        ax.plot(band.position, band.i1_mean, color="C1", label="$I_1$ mean")
        ax.fill_between(band.position, band.i1_mean - band.i1_std,
                        band.i1_mean + band.i1_std, color="C1", alpha=0.2)
        ax.set_xlabel("threshold position between the class means")
        ax.set_title(f"after epoch {checkpoint}")
        ax.grid(True, alpha=0.3)
        ax.legend()
    axes[0][0].set_ylabel("rate (error exponent)")
    fig.tight_layout()

    if args.save:
        fig.savefig(args.save, dpi=150)
        print(f"wrote {args.save}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
