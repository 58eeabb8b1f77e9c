"""Resonance-count heatmap over a (kappa/g, depth) grid.

Input columns: kappa_over_g, depth, count.  The closed-form Wilton lines
kappa/g = 1/(2 j^2) are overlaid for reference (annotation, not physics).
"""

from __future__ import annotations

import sys

import numpy as np

from .common import load_csv, make_parser, new_figure, save


def main(argv=None) -> int:
    args = make_parser("resonance atlas heatmap").parse_args(argv)
    cols = load_csv(args.input, ["kappa_over_g", "depth", "count"])
    kg = np.array(cols["kappa_over_g"])
    h = np.array(cols["depth"])
    count = np.array(cols["count"])
    kg_vals = np.unique(kg)
    h_vals = np.unique(h)
    mat = np.full((h_vals.size, kg_vals.size), np.nan)
    for x, y, c in zip(kg, h, count):
        mat[np.searchsorted(h_vals, y), np.searchsorted(kg_vals, x)] = c

    fig, ax = new_figure()
    mesh = ax.pcolormesh(kg_vals, h_vals, mat, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="resonant triads")
    for j in (1, 2, 3):
        x = 1.0 / (2.0 * j * j)
        if kg_vals.min() <= x <= kg_vals.max():
            ax.axvline(x, color="w", ls="--", lw=1.0)
            ax.text(
                x,
                h_vals.max(),
                f" j={j}",
                color="w",
                va="top",
                fontsize=8,
            )
    ax.set_xlabel("kappa / g")
    ax.set_ylabel("depth")
    if args.title:
        ax.set_title(args.title)
    save(fig, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
