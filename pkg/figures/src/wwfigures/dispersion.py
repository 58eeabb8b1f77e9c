"""Dispersion-relation plot from a `xi,omega[,*]` table."""

from __future__ import annotations

import sys

from .common import load_csv, make_parser, new_figure, save


def main(argv=None) -> int:
    args = make_parser("plot the linear dispersion relation").parse_args(argv)
    cols = load_csv(args.input, ["xi", "omega"])
    fig, ax = new_figure()
    curves = [c for c in cols if c.startswith("omega")]
    for name in sorted(curves):
        label = name.replace("omega", "Omega") if len(curves) > 1 else "Omega(xi)"
        ax.plot(cols["xi"], cols[name], label=label)
    ax.set_xlabel("wavenumber xi")
    ax.set_ylabel("frequency")
    ax.legend(loc="upper left")
    ax.grid(True, alpha=0.3)
    if args.title:
        ax.set_title(args.title)
    save(fig, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
