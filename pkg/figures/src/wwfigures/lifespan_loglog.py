"""Log-log lifespan scaling: T(eps) scatter, fitted slope, reference slope -2.

Input columns: epsilon, T_eps, censored_flag, fit_p, fit_logc (the fit
columns are produced by the lifespan experiment; this script never refits).
"""

from __future__ import annotations

import math
import sys

import numpy as np

from .common import load_csv, make_parser, new_figure, save


def main(argv=None) -> int:
    args = make_parser("lifespan scaling in log-log axes").parse_args(argv)
    cols = load_csv(
        args.input, ["epsilon", "T_eps", "censored_flag", "fit_p", "fit_logc"]
    )
    eps = np.array(cols["epsilon"])
    t_eps = np.array(cols["T_eps"])
    censored = np.array(cols["censored_flag"]) != 0

    fig, ax = new_figure()
    if np.any(~censored):
        ax.loglog(eps[~censored], t_eps[~censored], "o", color="C0", label="escape time")
    if np.any(censored):
        ax.loglog(
            eps[censored],
            t_eps[censored],
            "^",
            color="C1",
            label="censored at T_max",
        )
    x = np.array([eps.min() * 0.8, eps.max() * 1.25])
    # reference slope -2: T ~ eps^-2 through the smallest-eps point
    anchor = t_eps[np.argmin(eps)] * (x / eps.min()) ** (-2.0)
    ax.loglog(x, anchor, "k--", lw=1.0, label="slope -2")
    fit_p = cols["fit_p"][0]
    fit_logc = cols["fit_logc"][0]
    if math.isfinite(fit_p) and math.isfinite(fit_logc):
        fitted = np.exp(fit_logc) * x ** (-fit_p)
        ax.loglog(x, fitted, "C2-", lw=1.0, label=f"fit: slope -{fit_p:.2f}")
    ax.set_xlabel("epsilon")
    ax.set_ylabel("T(epsilon)")
    ax.legend(loc="best")
    ax.grid(True, which="both", alpha=0.3)
    if args.title:
        ax.set_title(args.title)
    save(fig, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
