"""Shock speed versus impact velocity: scatter plus least-squares line."""

from __future__ import annotations

import argparse

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .io import read_columns  # noqa: E402


def su_diagram(sweep_csv, out="su_diagram.png"):
    """Plot the S-u table with its linear fit; returns (path, slope, r2)."""
    cols = read_columns(sweep_csv, required=("u_impact", "shock_speed"))
    u = cols["u_impact"]
    S = cols["shock_speed"]
    slope, intercept = np.polyfit(u, S, 1)
    fit = slope * u + intercept
    ss_res = float(np.sum((S - fit) ** 2))
    ss_tot = float(np.sum((S - S.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0

    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.plot(u, S, "o", label="computed")
    ax.plot(u, fit, "-", color="k",
            label=f"S = {slope:.3f} u + {intercept:.0f}  (R²={r2:.4f})")
    ax.set_xlabel("impact velocity u")
    ax.set_ylabel("shock speed S")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out, float(slope), r2


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        description="Shock speed vs impact velocity diagram with linear fit")
    ap.add_argument("sweep_csv", help="table with u_impact,shock_speed")
    ap.add_argument("--out", default="su_diagram.png")
    args = ap.parse_args(argv)
    path, slope, r2 = su_diagram(args.sweep_csv, args.out)
    print(f"wrote {path} (slope {slope:.4f}, R² {r2:.5f})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
