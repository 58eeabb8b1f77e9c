"""Relative drift of conserved quantities along a trajectory CSV.

Requires a `t` column plus at least one recognized conserved column
(H2, H3, momentum, H, mass); flat lines mean conservation held.
"""

from __future__ import annotations

import sys

import numpy as np

from .common import SchemaError, load_csv, make_parser, new_figure, save

CONSERVED = ("H2", "H3", "momentum", "H", "mass")


def main(argv=None) -> int:
    args = make_parser("conserved-quantity drift").parse_args(argv)
    cols = load_csv(args.input, ["t"])
    present = [c for c in CONSERVED if c in cols]
    if not present:
        raise SchemaError(args.input, [" or ".join(CONSERVED)])
    t = np.array(cols["t"])
    fig, ax = new_figure()
    floor = 1e-17
    for name in present:
        q = np.array(cols[name])
        scale = max(abs(q[0]), floor)
        drift = np.abs(q - q[0]) / scale
        ax.semilogy(t, np.maximum(drift, floor), label=name)
    ax.set_xlabel("t")
    ax.set_ylabel("relative drift")
    # guard band so exactly-flat series stay visible
    ax.set_ylim(floor / 10.0, max(ax.get_ylim()[1], 1e-6))
    ax.legend(loc="upper left")
    ax.grid(True, alpha=0.3)
    if args.title:
        ax.set_title(args.title)
    save(fig, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
