#!/usr/bin/env python3
"""Plot a sweep CSV produced by `skirent sweep`.

Usage: plot_sweep.py sweep.csv [out.png]
"""
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__, file=sys.stderr)
        return 2
    csv_path = sys.argv[1]
    out_path = sys.argv[2] if len(sys.argv) > 2 else "sweep.png"

    df = pd.read_csv(csv_path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    labels = {"wc": "worst-case optimal", "sg": "subgame optimal", "pi": "prior-independent"}
    for alg, group in df.groupby("algorithm"):
        group = group.sort_values("B")
        ax.plot(group["B"], group["ratio"], marker="o", label=labels.get(alg, alg))
    T = df["T"].iloc[0]
    ax.set_xlabel("stop cost B")
    ax.set_ylabel("ratio against the worst-case prior")
    ax.set_title(f"Prior-independent framework, T = {T}")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    print(f"wrote {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
