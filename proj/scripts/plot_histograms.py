#!/usr/bin/env python3
"""Plot aggregate-score histograms against their Gaussian limit.

Takes any number of hist_<hyp>_seed<S>_n<N>.csv files (written by the simulate
command), draws each as a density histogram, and overlays the normal density
with the mean and variance announced in the file's comment header.
"""

import argparse
import math
import pathlib

import matplotlib.pyplot as plt
import pandas as pd


def parse_header(path):
    with open(path) as f:
        first = f.readline().strip()
    if not first.startswith("#"):
        raise SystemExit(f"{path}: missing comment header")
    fields = dict(part.split("=", 1) for part in first[1:].split())
    return {
        "seed": int(fields["seed"]),
        "hypothesis": fields["hypothesis"],
        "n": int(fields["n"]),
        "trials": int(fields["trials"]),
        "clt_mean": float(fields["clt_mean"]),
        "clt_variance": float(fields["clt_variance"]),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("files", type=pathlib.Path, nargs="+")
    parser.add_argument("--save", type=pathlib.Path, default=None)
    args = parser.parse_args()

    count = len(args.files)
    fig, axes = plt.subplots(1, count, figsize=(4.5 * count, 4), squeeze=False)
    for ax, path in zip(axes[0], args.files):
        meta = parse_header(path)
        bins = pd.read_csv(path, comment="#")
        widths = bins.bin_high - bins.bin_low
        total = bins["count"].sum()
        density = bins["count"] / (total * widths)
        ax.bar(bins.bin_low, density, width=widths, align="edge",
               alpha=0.6, color="C0", label="simulated aggregates")

        mu, var = meta["clt_mean"], meta["clt_variance"]
        sigma = math.sqrt(var)
        lo, hi = bins.bin_low.iloc[0], bins.bin_high.iloc[-1]
        xs = [lo + (hi - lo) * i / 400 for i in range(401)]
        pdf = [math.exp(-0.5 * ((x - mu) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))
               for x in xs]
        ax.plot(xs, pdf, color="C3", label="Gaussian limit")
        ax.set_title(f"{meta['hypothesis']}, n={meta['n']}, seed {meta['seed']}")
        ax.set_xlabel("aggregate score")
        ax.set_ylabel("density")
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)
    fig.tight_layout()

    if args.save:
        fig.savefig(args.save, dpi=150)
        print(f"wrote {args.save}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
