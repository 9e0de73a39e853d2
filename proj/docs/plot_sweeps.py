#!/usr/bin/env python3
"""Plot welfare curves from `persuade benchmark` CSV output.

Usage:
    persuade benchmark --preset cost-sweep --out cost.csv
    python3 docs/plot_sweeps.py cost.csv --x r --out cost.png

One panel per cost family; one line per (alpha, mechanism).
"""

import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

SERIES = [
    ("w_private", "private", "-"),
    ("w_public", "public", "--"),
    ("w_fullinfo", "full information", ":"),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("csv")
    ap.add_argument("--x", choices=["r", "mu1"], default="r", help="column on the horizontal axis")
    ap.add_argument("--out", default="sweep.png")
    args = ap.parse_args()

    with open(args.csv, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        raise SystemExit("no rows in " + args.csv)
    ratio = all(r["ratio_flag"] == "0" for r in rows)

    groups = defaultdict(list)
    for r in rows:
        groups[(r["cost_family"], float(r["alpha"]))].append(r)
    families = sorted({fam for fam, _ in groups})

    fig, axes = plt.subplots(1, len(families), figsize=(5 * len(families), 4), squeeze=False)
    for ax, fam in zip(axes[0], families):
        for (g_fam, alpha), pts in sorted(groups.items()):
            if g_fam != fam:
                continue
            pts.sort(key=lambda r: float(r[args.x]))
            xs = [float(r[args.x]) for r in pts]
            for col, label, style in SERIES:
                ax.plot(xs, [float(r[col]) for r in pts], style, label=f"{label}, alpha={alpha:g}")
        ax.set_title(f"{fam} costs")
        ax.set_xlabel(args.x)
        ax.set_ylabel("welfare / no-information welfare" if ratio else "welfare")
        ax.grid(alpha=0.3)
    axes[0][-1].legend(fontsize="x-small")
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)


if __name__ == "__main__":
    main()
