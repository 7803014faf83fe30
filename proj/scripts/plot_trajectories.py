#!/usr/bin/env python3
"""Plot running-mean trajectories of the elementwise score.

Reads trajectories.csv (seed,hypothesis,m,score,running_mean) and shows the
running mean converging to each class's score mean as the sample grows --
the law-of-large-numbers picture behind the aggregate statistic.
"""

import argparse
import pathlib

import matplotlib.pyplot as plt
import pandas as pd


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", type=pathlib.Path, help="trajectories.csv")
    parser.add_argument("--save", type=pathlib.Path, default=None)
    args = parser.parse_args()

    frame = pd.read_csv(args.csv)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for (seed, hyp), rows in frame.groupby(["seed", "hypothesis"]):
        rows = rows.sort_values("m")
        color = "C0" if hyp == "h0" else "C1"
        ax.plot(rows.m, rows.running_mean, color=color, alpha=0.7,
                label=f"{hyp}, seed {seed}")
        ax.scatter(rows.m, rows.score, s=3, color=color, alpha=0.15)
    ax.set_xlabel("number of scores averaged")
    ax.set_ylabel("running mean of the elementwise score")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()

    if args.save:
        fig.savefig(args.save, dpi=150)
        print(f"wrote {args.save}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
