"""Profile overlay panels: solver snapshot vs exact-solution curve."""

from __future__ import annotations

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .io import mixture_field, read_columns  # noqa: E402

_LABELS = {"rho": r"$\rho$", "u": "u", "p": "p", "T": "T",
           "alpha2": r"$\alpha_2$"}


def overlay_panels(run_csv, oracle_csv=None, fields=("rho", "u", "p", "T"),
                   out="tube_overlay.png", title=None):
    """One panel per field: run profile as dots, oracle as a solid line.

    Returns the output path.  Inputs are only read; grids need not match
    (each curve is plotted against its own x column).
    """
    run = read_columns(run_csv, required=("x",))
    oracle = read_columns(oracle_csv, required=("x",)) if oracle_csv else None

    n = len(fields)
    fig, axes = plt.subplots(n, 1, figsize=(6.0, 2.2 * n), sharex=True)
    if n == 1:
        axes = [axes]
    for ax, field in zip(axes, fields):
        ax.plot(run["x"], mixture_field(run, field, run_csv), ".",
                ms=2.5, label="computed")
        if oracle is not None:
            ax.plot(oracle["x"], mixture_field(oracle, field, oracle_csv),
                    "-", lw=1.0, color="k", label="exact")
        ax.set_ylabel(_LABELS.get(field, field))
        ax.legend(loc="best", fontsize=8)
    axes[-1].set_xlabel("x")
    if title:
        axes[0].set_title(title)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        description="Overlay solver profiles with an exact-solution curve")
    ap.add_argument("run_csv", help="solver snapshot (e.g. final.csv)")
    ap.add_argument("--oracle", help="exact-solution CSV to overlay")
    ap.add_argument("--fields", default="rho,u,p,T",
                    help="comma-separated field list")
    ap.add_argument("--title")
    ap.add_argument("--out", default="tube_overlay.png")
    args = ap.parse_args(argv)
    path = overlay_panels(args.run_csv, args.oracle,
                          tuple(args.fields.split(",")), args.out, args.title)
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
