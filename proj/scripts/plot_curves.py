#!/usr/bin/env python3
"""Plot error-probability curves from a curves_seed<S>.csv file.

Two panels: miss-the-null errors (h0 rows, alpha) and miss-the-alternative
errors (h1 rows, beta) against the threshold gamma, one color per aggregate
size n.  Empirical estimates are drawn as points with 95% Wilson error bars,
the Gaussian-limit column as a dashed line, and the refined large-deviations
column as a solid line.
"""

import argparse
import pathlib

import matplotlib.pyplot as plt
import pandas as pd

KIND_STYLE = {"empirical": "o", "clt": "--", "ldp": "-"}


def plot_panel(ax, frame, hypothesis, title):
    sub = frame[frame.hypothesis == hypothesis]
    colors = {}
    for i, n in enumerate(sorted(sub.n.unique())):
        colors[n] = f"C{i}"
    for n in sorted(sub.n.unique()):
        for kind, style in KIND_STYLE.items():
            rows = sub[(sub.n == n) & (sub.kind == kind)].sort_values("gamma")
            if rows.empty:
                continue
            label = f"n={n} {kind}" if kind != "empirical" else f"n={n} empirical"
            if kind == "empirical":
                yerr_low = (rows.value - rows.wilson_low).clip(lower=0.0)
                yerr_high = (rows.wilson_high - rows.value).clip(lower=0.0)
                ax.errorbar(rows.gamma, rows.value, yerr=[yerr_low, yerr_high],
                            fmt=style, ms=4, capsize=2, color=colors[n], label=label)
            else:
                ax.plot(rows.gamma, rows.value, style, color=colors[n], label=label)
    ax.set_yscale("log")
    ax.set_xlabel("threshold $\\gamma$")
    ax.set_ylabel("error probability")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", type=pathlib.Path, help="curves_seed<S>.csv")
    parser.add_argument("--save", type=pathlib.Path, default=None,
                        help="write the figure here instead of showing it")
    args = parser.parse_args()

    frame = pd.read_csv(args.csv)
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(11, 4.5), sharey=True)
    plot_panel(ax0, frame, "h0", "false alarm $\\alpha_n$ (null scores above $\\gamma$)")
    plot_panel(ax1, frame, "h1", "miss $\\beta_n$ (alternative scores below $\\gamma$)")
    fig.suptitle(args.csv.name)
    fig.tight_layout()

    if args.save:
        fig.savefig(args.save, dpi=150)
        print(f"wrote {args.save}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
