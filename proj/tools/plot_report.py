#!/usr/bin/env python3
"""Plot the CSV outputs of a run.

Usage: plot_report.py <output-dir> [--save <png>]

Picks up whatever CSV families exist in the directory (histogram, laplace,
ball, compare, stability, connes, ...) and draws one panel per family.
"""

import argparse
import collections
import csv
import pathlib
import sys


def read_csv(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return rows


def column(rows, name):
    return [float(r[name]) for r in rows if r[name] != ""]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir", type=pathlib.Path)
    ap.add_argument("--save", type=pathlib.Path, default=None)
    args = ap.parse_args()

    import matplotlib

    if args.save:
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    families = collections.defaultdict(list)
    for p in sorted(args.outdir.glob("*.csv")):
        family = p.stem.rsplit("_", 1)[-1]
        families[family].append(p)
    if not families:
        sys.exit(f"no CSV files in {args.outdir}")

    panels = []
    for family, paths in families.items():
        for p in paths:
            panels.append((family, p))

    fig, axes = plt.subplots(len(panels), 1, figsize=(8, 3.2 * len(panels)), squeeze=False)
    for ax, (family, path) in zip(axes.ravel(), panels):
        rows = read_csv(path)
        if family == "histogram":
            ax.stairs(column(rows, "density"), column(rows, "bin_lo") + [float(rows[-1]["bin_hi"])])
            ax.set_xlabel("lambda")
            ax.set_ylabel("density")
        elif family in ("laplace", "bulk", "summary"):
            s = column(rows, "s")
            ax.plot(s, column(rows, "value"), "o-", label="computed")
            refs = column(rows, "reference")
            if refs:
                ax.plot(s[: len(refs)], refs, "x--", label="closed form")
            ax.set_xlabel("s")
            ax.legend()
        elif family == "ball":
            ax.plot(column(rows, "R"), column(rows, "value"), "o-")
            ax.set_xlabel("R")
            ax.set_ylabel("ball average")
        elif family == "compare":
            s = column(rows, "s")
            for key in ("eigencount", "ball", "residue"):
                ax.plot(s, column(rows, key), "o-", label=key)
            refs = column(rows, "closedform")
            if refs:
                ax.plot(s[: len(refs)], refs, "k--", label="closed form")
            ax.set_xlabel("s")
            ax.legend()
        elif family == "stability":
            by_s = collections.defaultdict(list)
            for r in rows:
                by_s[r["s"]].append((float(r["L"]), float(r["rel_diff"])))
            for sval, pts in by_s.items():
                pts.sort()
                ax.semilogy([p[0] for p in pts], [p[1] for p in pts], "o-", label=f"s={sval}")
            ax.set_xlabel("L")
            ax.set_ylabel("relative change")
            ax.legend()
        elif family == "connes":
            ax.semilogx(column(rows, "N"), column(rows, "partial_sum"), "o-")
            ax.set_xlabel("N")
            ax.set_ylabel("partial sum")
        else:
            xkey, ykey = rows[0].keys().__iter__().__next__(), list(rows[0].keys())[1]
            try:
                ax.plot(column(rows, xkey), column(rows, ykey), "o-")
            except ValueError:
                ax.text(0.5, 0.5, f"(no numeric view for {family})", ha="center")
        ax.set_title(path.name)
    fig.tight_layout()

    if args.save:
        fig.savefig(args.save, dpi=150)
        print(f"saved {args.save}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
