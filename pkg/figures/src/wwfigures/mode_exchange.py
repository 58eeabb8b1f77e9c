"""Mode-amplitude time series (three-wave energy exchange view).

Input: a `t` column plus mode_amp_1..K columns from the flow or solver CSVs.
"""

from __future__ import annotations

import sys

from .common import SchemaError, load_csv, make_parser, new_figure, save


def main(argv=None) -> int:
    args = make_parser("per-mode amplitude exchange").parse_args(argv)
    cols = load_csv(args.input, ["t"])
    modes = sorted(
        (c for c in cols if c.startswith("mode_amp_")),
        key=lambda c: int(c.rsplit("_", 1)[1]),
    )
    if not modes:
        raise SchemaError(args.input, ["mode_amp_1"])
    fig, ax = new_figure()
    for name in modes:
        ax.plot(cols["t"], cols[name], label=f"|mode {name.rsplit('_', 1)[1]}|")
    ax.set_xlabel("t")
    ax.set_ylabel("amplitude")
    ax.legend(loc="best")
    ax.grid(True, alpha=0.3)
    if args.title:
        ax.set_title(args.title)
    save(fig, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
