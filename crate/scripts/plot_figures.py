#!/usr/bin/env python3
"""Plot the figure tables written by `kerr-mzi figure`.

    for f in fig2a fig2b fig3 fig4; do kerr-mzi figure $f --out $f.csv; done
    python3 scripts/plot_figures.py --dir . --out plots
"""
import argparse
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    with open(path, newline="") as fh:
        fh.readline()  # "# kerr-mzi v..." header
        rows = list(csv.reader(fh))
    names, data = rows[0], rows[1:]
    return {name: [float(r[i]) for r in data] for i, name in enumerate(names)}


def signals(table, ax, title):
    for name, values in table.items():
        if name != "phi":
            ax.plot(table["phi"], values, label=name[2:-1])
    ax.set(xlabel="phi", ylabel="parity signal", title=title)
    ax.legend()


def sensitivities(table, ax):
    x = table["nbar"]
    for name, values in table.items():
        if name == "nbar":
            continue
        style = "--" if name.startswith(("nbar^", "generalized")) else "-"
        ax.loglog(x, values, style, label=name)
    ax.set(xlabel="mean photon number", ylabel="delta phi", title="fig3")
    ax.legend(fontsize="small")


def gains(table, ax):
    x = table["nbar"]
    for name, values in table.items():
        if name != "nbar":
            ax.semilogx(x, values, label=name)
    ax.set(xlabel="mean photon number", ylabel="gain [dB]", title="fig4")
    ax.legend()


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--dir", type=Path, default=Path("."), help="directory holding fig*.csv")
    parser.add_argument("--out", type=Path, default=Path("."), help="where to write the PNGs")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    plots = {
        "fig2a": lambda t, ax: signals(t, ax, "fig2a: twin-Fock"),
        "fig2b": lambda t, ax: signals(t, ax, "fig2b: two-mode squeezed vacuum"),
        "fig3": sensitivities,
        "fig4": gains,
    }
    for name, draw in plots.items():
        path = args.dir / f"{name}.csv"
        if not path.exists():
            print(f"skipping {name}: {path} not found")
            continue
        fig, ax = plt.subplots(figsize=(6, 4.5))
        draw(load(path), ax)
        fig.tight_layout()
        fig.savefig(args.out / f"{name}.png", dpi=150)
        plt.close(fig)
        print(f"wrote {args.out / name}.png")


if __name__ == "__main__":
    main()
