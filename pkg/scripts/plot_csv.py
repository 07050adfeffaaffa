#!/usr/bin/env python3
"""Plot capacity CSVs produced by the cpamac CLI.

One curve per (scheme, constellation, p2_ratio) group, capacity over SNR:

    cpamac reproduce fig1 --out fig1.csv
    python scripts/plot_csv.py fig1.csv -o fig1.png

Rows without a capacity value (metric-only rows) are skipped.
"""

import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load_groups(path):
    groups = defaultdict(list)
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if not row["capacity_bits"]:
                continue
            key = (row["scheme"], row["constellation"], row["p2_ratio"])
            groups[key].append((float(row["snr_db"]), float(row["capacity_bits"])))
    return groups


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv_path")
    ap.add_argument("-o", "--out", default=None, help="output image (default: <csv>.png)")
    args = ap.parse_args()

    groups = load_groups(args.csv_path)
    if not groups:
        raise SystemExit(f"{args.csv_path}: no capacity rows to plot")

    fig, ax = plt.subplots(figsize=(7, 5))
    multi_ratio = len({k[2] for k in groups}) > 1
    for (scheme, constellation, ratio), pts in sorted(groups.items()):
        pts.sort()
        label = f"{scheme} {constellation}"
        if multi_ratio:
            label += f" (P2/P1={ratio.rstrip('0').rstrip('.')})"
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", ms=3, label=label)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("sum capacity (bits per channel use)")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    out = args.out or args.csv_path.rsplit(".", 1)[0] + ".png"
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
