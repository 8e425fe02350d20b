"""Cell state vectors, mixture quantities and the structured grid container.

The conserved vector per cell is

    U = [a1*rho1, a2*rho2, rho*u, rho*v, a1*rho1*e1, a2*rho2*e2, rho*E, a2]

stored as a numpy array with the component axis first: shape (8, nx) in 1D
and (8, nx, ny) in 2D.  Volume fractions are kept inside
[ALPHA_FLOOR, 1 - ALPHA_FLOOR] so that 1/alpha_k stays finite in the
relaxation formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import eos as eos_mod
from .eos import InvalidStateError, StiffenedGasEos

# component indices of the conserved vector
M1, M2, MOMX, MOMY, IE1, IE2, ETOT, ALPHA2 = range(8)
NCOMP = 8

ALPHA_FLOOR = 1e-8

GHOST = 2  # supports the 3-cell MUSCL stencil

CSV_COLUMNS_1D = ["x", "rho", "u", "p1", "p2", "T1", "T2", "alpha2", "Y2", "c", "s"]
CSV_COLUMNS_2D = ["x", "y", "rho", "u", "v", "p1", "p2", "T1", "T2", "alpha2", "Y2", "c", "s"]


@dataclass
class PrimitiveState:
    """Per-phase primitives plus mixture velocity, all numpy arrays."""

    rho1: np.ndarray
    rho2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    T1: np.ndarray
    T2: np.ndarray
    alpha2: np.ndarray
    u: np.ndarray
    v: np.ndarray

    @property
    def alpha1(self):
        return 1.0 - self.alpha2

    @property
    def rho(self):
        return self.alpha1 * self.rho1 + self.alpha2 * self.rho2

    @property
    def y2(self):
        return self.alpha2 * self.rho2 / self.rho

    @property
    def y1(self):
        return 1.0 - self.y2


def clip_alpha(alpha2):
    """Clip the volume fraction to [ALPHA_FLOOR, 1 - ALPHA_FLOOR]."""
    return np.clip(alpha2, ALPHA_FLOOR, 1.0 - ALPHA_FLOOR)


def to_primitive(U, eos1: StiffenedGasEos, eos2: StiffenedGasEos) -> PrimitiveState:
    """Decompose a conserved array (8, ...) into per-phase primitives."""
    a2 = clip_alpha(U[ALPHA2])
    a1 = 1.0 - a2
    m1 = U[M1]
    m2 = U[M2]
    if np.any(m1 < 0.0) or np.any(m2 < 0.0):
        raise InvalidStateError("negative partial density")
    rho1 = m1 / a1
    rho2 = m2 / a2
    rho = m1 + m2
    u = U[MOMX] / rho
    v = U[MOMY] / rho
    e1 = U[IE1] / m1
    e2 = U[IE2] / m2
    p1 = eos_mod.pressure_from_rho_e(eos1, rho1, e1)
    p2 = eos_mod.pressure_from_rho_e(eos2, rho2, e2)
    T1, _ = eos_mod.temperature_from_rho_e(eos1, rho1, e1)
    T2, _ = eos_mod.temperature_from_rho_e(eos2, rho2, e2)
    return PrimitiveState(rho1=rho1, rho2=rho2, p1=p1, p2=p2, T1=T1, T2=T2,
                          alpha2=a2, u=u, v=v)


def to_conserved(P: PrimitiveState, eos1: StiffenedGasEos, eos2: StiffenedGasEos):
    """Assemble the conserved array from per-phase primitives."""
    a2 = clip_alpha(P.alpha2)
    a1 = 1.0 - a2
    m1 = a1 * P.rho1
    m2 = a2 * P.rho2
    rho = m1 + m2
    e1 = eos_mod.internal_energy(eos1, P.rho1, P.p1)
    e2 = eos_mod.internal_energy(eos2, P.rho2, P.p2)
    ie1 = m1 * e1
    ie2 = m2 * e2
    etot = ie1 + ie2 + 0.5 * rho * (P.u ** 2 + P.v ** 2)
    U = np.empty((NCOMP,) + np.shape(m1))
    U[M1] = m1
    U[M2] = m2
    U[MOMX] = rho * P.u
    U[MOMY] = rho * P.v
    U[IE1] = ie1
    U[IE2] = ie2
    U[ETOT] = etot
    U[ALPHA2] = a2
    return U


def mixture_sound_speed(P: PrimitiveState, eos1, eos2):
    """c^2 = Y1 c1^2 + Y2 c2^2 (monotone across the interface zone)."""
    # a dilute trace phase may sit outside its own admissible set; it
    # carries negligible weight, so clamp it rather than poison the mixture
    c1sq = np.maximum(eos1.gamma * (P.p1 + eos1.p_inf) / P.rho1, 0.0)
    c2sq = np.maximum(eos2.gamma * (P.p2 + eos2.p_inf) / P.rho2, 0.0)
    csq = P.y1 * c1sq + P.y2 * c2sq
    if np.any(csq <= 0.0):
        raise InvalidStateError("non-positive mixture sound speed")
    return np.sqrt(csq)


def mixture_entropy(P: PrimitiveState, eos1, eos2):
    """s = Y1 s1 + Y2 s2."""
    s1 = eos_mod.phase_entropy(eos1, P.rho1, P.p1)
    s2 = eos_mod.phase_entropy(eos2, P.rho2, P.p2)
    return P.y1 * s1 + P.y2 * s2


# ---------------------------------------------------------------------------
# grid container

TRANSMISSIVE = "transmissive"
REFLECTIVE = "reflective"
PERIODIC = "periodic"


@dataclass
class Grid:
    """Uniform structured mesh of conserved states with ghost layers.

    `U` holds interior cells only, shape (8, nx) or (8, nx, ny); ghost
    layers are materialized on demand by `with_ghosts`.  Boundary tags
    apply per side: (left, right) in 1D plus (bottom, top) in 2D.
    """

    U: np.ndarray
    dx: float
    dy: float = 0.0
    x0: float = 0.0
    y0: float = 0.0
    bc_x: tuple = (TRANSMISSIVE, TRANSMISSIVE)
    bc_y: tuple = (TRANSMISSIVE, TRANSMISSIVE)
    eos1: StiffenedGasEos = None
    eos2: StiffenedGasEos = None

    @property
    def ndim(self):
        return self.U.ndim - 1

    @property
    def nx(self):
        return self.U.shape[1]

    @property
    def ny(self):
        return self.U.shape[2] if self.ndim == 2 else 1

    @property
    def x(self):
        return self.x0 + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def y(self):
        return self.y0 + (np.arange(self.ny) + 0.5) * self.dy

    def primitive(self) -> PrimitiveState:
        return to_primitive(self.U, self.eos1, self.eos2)

    def totals(self):
        """Integrals of mass, partial masses, momentum and total energy."""
        axes = tuple(range(1, self.U.ndim))
        vol = self.dx * (self.dy if self.ndim == 2 else 1.0)
        sums = self.U.sum(axis=axes) * vol
        return {
            "m1": sums[M1],
            "m2": sums[M2],
            "mass": sums[M1] + sums[M2],
            "mom_x": sums[MOMX],
            "mom_y": sums[MOMY],
            "etot": sums[ETOT],
        }


def fill_ghosts_1d(U, bc, momentum_index=MOMX, ng=GHOST):
    """Pad an (8, n) array with ng ghost cells per side along the last axis.

    Works for (8, ..., n): the boundary condition acts on the last axis.
    Reflective mirrors the state and negates the normal momentum component.
    """
    lo, hi = bc
    Ug = np.concatenate(
        [np.empty(U.shape[:-1] + (ng,)), U, np.empty(U.shape[:-1] + (ng,))], axis=-1
    )
    for side, tag in ((0, lo), (1, hi)):
        if tag == TRANSMISSIVE:
            edge = U[..., :1] if side == 0 else U[..., -1:]
            block = np.repeat(edge, ng, axis=-1)
        elif tag == REFLECTIVE:
            block = (U[..., :ng][..., ::-1] if side == 0 else U[..., -ng:][..., ::-1]).copy()
            block[momentum_index] = -block[momentum_index]
        elif tag == PERIODIC:
            block = U[..., -ng:] if side == 0 else U[..., :ng]
        else:
            raise ValueError(f"unknown boundary tag {tag!r}")
        if side == 0:
            Ug[..., :ng] = block
        else:
            Ug[..., -ng:] = block
    return Ug


def pad_field_1d(f, bc, ng=1, negate_reflective=False):
    """Ghost-fill a scalar field along its last axis (for diffusion stencils)."""
    lo, hi = bc
    out = np.concatenate(
        [np.empty(f.shape[:-1] + (ng,)), f, np.empty(f.shape[:-1] + (ng,))], axis=-1
    )
    sign = -1.0 if negate_reflective else 1.0
    for side, tag in ((0, lo), (1, hi)):
        if tag == TRANSMISSIVE:
            block = np.repeat(f[..., :1] if side == 0 else f[..., -1:], ng, axis=-1)
        elif tag == REFLECTIVE:
            block = sign * (f[..., :ng][..., ::-1] if side == 0 else f[..., -ng:][..., ::-1])
        elif tag == PERIODIC:
            block = f[..., -ng:] if side == 0 else f[..., :ng]
        else:
            raise ValueError(f"unknown boundary tag {tag!r}")
        if side == 0:
            out[..., :ng] = block
        else:
            out[..., -ng:] = block
    return out


# ---------------------------------------------------------------------------
# CSV serialization

def snapshot_rows(grid: Grid):
    """Column dict for the fixed CSV schema (1D or 2D)."""
    P = grid.primitive()
    c = mixture_sound_speed(P, grid.eos1, grid.eos2)
    s = mixture_entropy(P, grid.eos1, grid.eos2)
    if grid.ndim == 1:
        cols = {
            "x": grid.x, "rho": P.rho, "u": P.u,
            "p1": P.p1, "p2": P.p2, "T1": P.T1, "T2": P.T2,
            "alpha2": P.alpha2, "Y2": P.y2, "c": c, "s": s,
        }
        order = CSV_COLUMNS_1D
    else:
        X, Y = np.meshgrid(grid.x, grid.y, indexing="ij")
        cols = {
            "x": X.ravel(), "y": Y.ravel(),
            "rho": P.rho.ravel(), "u": P.u.ravel(), "v": P.v.ravel(),
            "p1": P.p1.ravel(), "p2": P.p2.ravel(),
            "T1": P.T1.ravel(), "T2": P.T2.ravel(),
            "alpha2": P.alpha2.ravel(), "Y2": P.y2.ravel(),
            "c": c.ravel(), "s": s.ravel(),
        }
        order = CSV_COLUMNS_2D
    return order, cols


def write_snapshot_csv(grid: Grid, path):
    order, cols = snapshot_rows(grid)
    data = np.column_stack([np.asarray(cols[k], dtype=float) for k in order])
    with open(path, "w") as fh:
        fh.write(",".join(order) + "\n")
        for row in data:
            fh.write(",".join(f"{val:.17g}" for val in row) + "\n")
