"""Numerical Schlieren images from 2D density snapshots.

The visualization field is exp(-k |grad rho| / max |grad rho|): strong
gradients map to dark, uniform regions to white, mimicking experimental
Schlieren photographs.  k = 15 gives the customary contrast.
"""

from __future__ import annotations

import argparse

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .io import read_columns  # noqa: E402


def schlieren_field(rho, dx=1.0, dy=1.0, k=15.0):
    """Exponential gradient mapping of a 2D density array (nx, ny)."""
    gx, gy = np.gradient(rho, dx, dy)
    mag = np.hypot(gx, gy)
    peak = float(mag.max())
    if peak == 0.0:
        return np.ones_like(rho)
    return np.exp(-k * mag / peak)


def _reshape_2d(cols, path):
    """Recover the (nx, ny) grid from raveled x-major snapshot columns."""
    x = cols["x"]
    y = cols["y"]
    ny = int(np.count_nonzero(x == x[0]))
    nx = x.size // ny
    if nx * ny != x.size:
        raise ValueError(f"{path}: rows do not form a rectangular grid")
    return (x.reshape(nx, ny), y.reshape(nx, ny),
            cols["rho"].reshape(nx, ny))


def schlieren_image(snapshot_csv, out="schlieren.png", k=15.0):
    """Render the Schlieren map of a 2D snapshot; returns the path."""
    cols = read_columns(snapshot_csv, required=("x", "y", "rho"))
    X, Y, rho = _reshape_2d(cols, snapshot_csv)
    dx = X[1, 0] - X[0, 0] if X.shape[0] > 1 else 1.0
    dy = Y[0, 1] - Y[0, 0] if X.shape[1] > 1 else 1.0
    field = schlieren_field(rho, dx, dy, k)

    fig, ax = plt.subplots(figsize=(6.0, 3.5))
    ax.imshow(field.T, origin="lower", cmap="gray", vmin=0.0, vmax=1.0,
              extent=(X.min(), X.max(), Y.min(), Y.max()), aspect="auto")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        description="Numerical Schlieren image from a 2D snapshot CSV")
    ap.add_argument("snapshot_csv")
    ap.add_argument("--contrast", type=float, default=15.0,
                    help="exponential mapping strength k")
    ap.add_argument("--out", default="schlieren.png")
    args = ap.parse_args(argv)
    path = schlieren_image(args.snapshot_csv, args.out, args.contrast)
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
