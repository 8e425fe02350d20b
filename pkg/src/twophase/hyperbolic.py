"""Godunov finite-volume update of the homogeneous hyperbolic subsystem.

HLLC three-wave fluxes for the 8-component system, a cell-centered
non-conservative product for the phase-energy and volume-fraction
equations, MUSCL reconstruction with limiters that obey the
consistency rule (volume fraction and phase masses share one limiter),
CFL control and symmetrized dimensional splitting in 2D.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import eos as eos_mod
from .eos import StiffenedGasEos
from .state import (ALPHA2, ALPHA_FLOOR, ETOT, GHOST, IE1, IE2, M1, M2, MOMX,
                    MOMY, NCOMP, Grid, clip_alpha, fill_ghosts_1d)

FIRST_ORDER = "first"
MINMOD = "minmod"
OVERBEE = "overbee"

ALPHA_EPS = 0.0


@dataclass(frozen=True)
class Limiter:
    """Limiter assignment: `interface` acts on alpha2 and the phase masses,
    `bulk` on velocity and phase pressures.  Uniform pressure/velocity/
    temperature profiles survive reconstruction only when alpha2 and the
    phase masses share one limiter; `masses` exists to break that rule on
    purpose (it defaults to `interface`)."""

    interface: str = MINMOD
    bulk: str = MINMOD
    masses: str | None = None

    @property
    def mass_kind(self):
        return self.interface if self.masses is None else self.masses

    @property
    def first_order(self):
        return (self.interface == FIRST_ORDER and self.bulk == FIRST_ORDER
                and self.mass_kind == FIRST_ORDER)


@dataclass
class FluxDiagnostics:
    hll_fallbacks: int = 0
    boundary_flux: np.ndarray = field(default_factory=lambda: np.zeros(NCOMP))


def minmod_slope(dm, dp):
    """minmod(a, b), elementwise."""
    same = dm * dp > 0.0
    return np.where(same, np.sign(dm) * np.minimum(np.abs(dm), np.abs(dp)), 0.0)


def slope(w, kind):
    """Limited slope for cells 1..n-2 of a padded field along the last axis.

    Overbee (phi(r) = max(0, min(2r, 2))) reduces to twice the minmod
    slope; both are homogeneous of degree 1 in the stencil.
    """
    dm = w[..., 1:-1] - w[..., :-2]
    dp = w[..., 2:] - w[..., 1:-1]
    if kind == FIRST_ORDER:
        return np.zeros_like(dm)
    if kind == MINMOD:
        return minmod_slope(dm, dp)
    if kind == OVERBEE:
        return 2.0 * minmod_slope(dm, dp)
    raise ValueError(f"unknown limiter {kind!r}")


def reconstruct(stencil, kind):
    """Left/right face values of the middle cell of a 3-value stencil."""
    w = np.asarray(stencil, dtype=float)
    sig = slope(w, kind)
    mid = w[..., 1:-1]
    return mid - 0.5 * sig, mid + 0.5 * sig


def _face_states(Ug, eos1, eos2, limiter: Limiter):
    """Reconstructed primitive-like quantities on both sides of each face.

    Ug is ghost-padded along the last axis with GHOST=2 layers.  Faces run
    from the left boundary face to the right boundary face of the interior
    (n+1 faces for n interior cells).
    """
    a2 = clip_alpha(Ug[ALPHA2])
    a1 = 1.0 - a2
    m1 = Ug[M1]
    m2 = Ug[M2]
    rho = m1 + m2
    u = Ug[MOMX] / rho
    v = Ug[MOMY] / rho
    p1 = eos_mod.pressure_from_rho_e(eos1, m1 / a1, Ug[IE1] / m1)
    p2 = eos_mod.pressure_from_rho_e(eos2, m2 / a2, Ug[IE2] / m2)

    fields = {"m1": m1, "m2": m2, "a2": a2, "u": u, "v": v, "p1": p1, "p2": p2}
    kinds = {"m1": limiter.mass_kind, "m2": limiter.mass_kind,
             "a2": limiter.interface,
             "u": limiter.bulk, "v": limiter.bulk,
             "p1": limiter.bulk, "p2": limiter.bulk}

    lo = {}  # extrapolation toward the cell's left face
    hi = {}  # toward the right face
    for name, w in fields.items():
        lo[name], hi[name] = reconstruct(w, kinds[name])

    # guard: drop slopes of cells whose extrapolations leave the admissible set
    eps = ALPHA_EPS
    bad = np.zeros(lo["m1"].shape, dtype=bool)
    for side in (lo, hi):
        bad |= (side["m1"] <= 0.0) | (side["m2"] <= 0.0)
        bad |= (side["a2"] <= 0.0) | (side["a2"] >= 1.0)
        bad |= (side["p1"] + eos1.p_inf <= eps) | (side["p2"] + eos2.p_inf <= eps)
    if np.any(bad):
        for name, w in fields.items():
            mid = w[..., 1:-1]
            lo[name] = np.where(bad, mid, lo[name])
            hi[name] = np.where(bad, mid, hi[name])

    # left state of face f: right extrapolation of cell f+1 (padded);
    # right state: left extrapolation of cell f+2
    left = {k: hi[k][..., :-1] for k in fields}
    right = {k: lo[k][..., 1:] for k in fields}
    return left, right


def _assemble(side, eos1, eos2):
    """Conserved-style quantities of a reconstructed face state."""
    a2 = clip_alpha(side["a2"])
    a1 = 1.0 - a2
    rho1 = side["m1"] / a1
    rho2 = side["m2"] / a2
    rho = side["m1"] + side["m2"]
    ie1 = side["m1"] * eos_mod.internal_energy(eos1, rho1, side["p1"])
    ie2 = side["m2"] * eos_mod.internal_energy(eos2, rho2, side["p2"])
    etot = ie1 + ie2 + 0.5 * rho * (side["u"] ** 2 + side["v"] ** 2)
    ptot = a1 * side["p1"] + a2 * side["p2"]
    y2 = side["m2"] / rho
    # a dilute trace phase can sit at p + p_inf < 0 mid-stage; it must not
    # drag the mixture sound speed imaginary, so clamp each contribution
    c1sq = np.maximum(eos1.gamma * (side["p1"] + eos1.p_inf) / rho1, 0.0)
    c2sq = np.maximum(eos2.gamma * (side["p2"] + eos2.p_inf) / rho2, 0.0)
    c = np.sqrt((1.0 - y2) * c1sq + y2 * c2sq)
    return {"m1": side["m1"], "m2": side["m2"], "rho": rho, "u": side["u"],
            "v": side["v"], "ie1": ie1, "ie2": ie2, "etot": etot,
            "ptot": ptot, "a2": a2, "c": c}


def _physical_flux(S):
    """F(U) = u U + ptot D with D = [0,0,1,0,0,0,u,0], plus alpha2 advection."""
    F = np.empty((NCOMP,) + S["u"].shape)
    u = S["u"]
    F[M1] = S["m1"] * u
    F[M2] = S["m2"] * u
    F[MOMX] = S["rho"] * u ** 2 + S["ptot"]
    F[MOMY] = S["rho"] * u * S["v"]
    F[IE1] = S["ie1"] * u
    F[IE2] = S["ie2"] * u
    F[ETOT] = (S["etot"] + S["ptot"]) * u
    F[ALPHA2] = S["a2"] * u
    return F


def _star_flux(S, SK, Sstar, pstar):
    """F(U*) for the subsonic star region adjacent to state S."""
    factor = (SK - S["u"]) / (SK - Sstar)
    F = np.empty((NCOMP,) + S["u"].shape)
    m1s = S["m1"] * factor
    m2s = S["m2"] * factor
    rhos = m1s + m2s
    etots = factor * (S["etot"] + (Sstar - S["u"])
                      * (S["rho"] * Sstar + S["ptot"] / (SK - S["u"])))
    F[M1] = m1s * Sstar
    F[M2] = m2s * Sstar
    F[MOMX] = rhos * Sstar ** 2 + pstar
    F[MOMY] = rhos * Sstar * S["v"]
    F[IE1] = S["ie1"] * factor * Sstar
    F[IE2] = S["ie2"] * factor * Sstar
    F[ETOT] = (etots + pstar) * Sstar
    # the volume fraction jumps only across the contact, not the acoustic
    # waves, so its star value is the unscaled upwind value
    F[ALPHA2] = S["a2"] * Sstar
    return F


def hllc_faces(left, right, eos1, eos2, diagnostics: FluxDiagnostics | None = None):
    """Vectorized HLLC solution over an array of faces.

    Returns (flux, u_star): flux has shape (8, ...), u_star the interface
    velocity used by the non-conservative product.  Davis wave-speed
    estimates; the contact speed follows the standard HLLC relation on
    mixture mass and momentum, so isolated material contacts are exact.
    """
    L = _assemble(left, eos1, eos2)
    R = _assemble(right, eos1, eos2)

    SL = np.minimum(L["u"] - L["c"], R["u"] - R["c"])
    SR = np.maximum(L["u"] + L["c"], R["u"] + R["c"])
    dL = L["rho"] * (SL - L["u"])
    dR = R["rho"] * (SR - R["u"])
    denom = dL - dR
    # the groupings below keep the solver bit-exact under a left-right
    # reflection (each parenthesized pair maps to its own exact negation),
    # so mirror-symmetric flows stay mirror-symmetric to the last bit
    with np.errstate(divide="ignore", invalid="ignore"):
        Sstar = ((R["ptot"] - L["ptot"]) + (L["u"] * dL - R["u"] * dR)) / denom
    pstar = 0.5 * ((L["ptot"] + dL * (Sstar - L["u"]))
                   + (R["ptot"] + dR * (Sstar - R["u"])))

    FL = _physical_flux(L)
    FR = _physical_flux(R)
    FsL = _star_flux(L, SL, Sstar, pstar)
    FsR = _star_flux(R, SR, Sstar, pstar)

    flux = np.where(SL >= 0.0, FL,
                    np.where(SR <= 0.0, FR,
                             np.where(Sstar >= 0.0, FsL, FsR)))
    ustar = np.where(SL >= 0.0, L["u"],
                     np.where(SR <= 0.0, R["u"], Sstar))

    bad = ~np.isfinite(Sstar) | ~np.all(np.isfinite(flux), axis=0)
    if np.any(bad):
        # degenerate contact estimate: fall back to the two-wave HLL flux
        with np.errstate(divide="ignore", invalid="ignore"):
            UL = _face_conserved(L)
            UR = _face_conserved(R)
            Fhll = (SR * FL - SL * FR + SL * SR * (UR - UL)) / (SR - SL)
        # SL == SR happens when both sides collapse to the same zero-signal
        # state (cold near-vacuum); the two physical fluxes then coincide
        Fhll = np.where(SR - SL == 0.0, 0.5 * (FL + FR), Fhll)
        flux = np.where(bad, Fhll, flux)
        ustar = np.where(bad, 0.5 * (L["u"] + R["u"]), ustar)
        if diagnostics is not None:
            diagnostics.hll_fallbacks += int(np.count_nonzero(bad))
    return flux, ustar


def _face_conserved(S):
    U = np.empty((NCOMP,) + S["u"].shape)
    U[M1] = S["m1"]
    U[M2] = S["m2"]
    U[MOMX] = S["rho"] * S["u"]
    U[MOMY] = S["rho"] * S["v"]
    U[IE1] = S["ie1"]
    U[IE2] = S["ie2"]
    U[ETOT] = S["etot"]
    U[ALPHA2] = S["a2"]
    return U


def hllc_face(U_L, U_R, eos1, eos2):
    """Single-face HLLC solve on two conserved states (8,) -> (flux, u_star)."""
    def sidedict(U):
        U = np.asarray(U, dtype=float)
        a2 = clip_alpha(U[ALPHA2])
        a1 = 1.0 - a2
        rho = U[M1] + U[M2]
        return {"m1": U[M1], "m2": U[M2], "a2": a2,
                "u": U[MOMX] / rho, "v": U[MOMY] / rho,
                "p1": eos_mod.pressure_from_rho_e(eos1, U[M1] / a1, U[IE1] / U[M1]),
                "p2": eos_mod.pressure_from_rho_e(eos2, U[M2] / a2, U[IE2] / U[M2])}
    flux, ustar = hllc_faces(sidedict(U_L), sidedict(U_R), eos1, eos2)
    return flux, float(ustar)


_TRACE_MASS = 1e-14
_T_FLOOR = 1e-10
# matches the near-pure threshold below which the relaxation stages skip
_SKIP_ALPHA = 2.0 * ALPHA_FLOOR


def _floor_trace_masses(U, eos1, eos2):
    """Keep both partial masses positive after a flux update.

    In near-vacuum cells a trace phase carries ~1e-13 of the cell mass and
    an unlucky flux balance can push it negative.  Floor it at a fixed
    tiny fraction of the mixture mass and give it the internal energy of
    a parcel at the majority phase's temperature; the relaxation stages
    re-equilibrate the cell immediately afterwards.  The injected mass is
    bounded by _TRACE_MASS relative per cell and step.
    """
    rho = U[M1] + U[M2]
    # absolute scale: a vacuum cell can reach zero mixture mass at round-off
    floor = _TRACE_MASS * float(np.max(rho))
    a2 = clip_alpha(U[ALPHA2])
    pairs = (((M1, IE1, eos1, 1.0 - a2), (M2, IE2, eos2, a2)),
             ((M2, IE2, eos2, a2), (M1, IE1, eos1, 1.0 - a2)))
    for (mi, ei, ek, _), (mo, eo, eok, ao) in pairs:
        mask = U[mi] < floor
        if not np.any(mask):
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            rho_o = U[mo] / ao
            T_o = (U[eo] / U[mo] - eok.q - eok.p_inf / rho_o) / eok.cv
        T_o = np.where(np.isfinite(T_o), T_o, 0.0)
        e_fill = ek.cv * np.maximum(T_o, 1e-12) + ek.q
        U[ei] = np.where(mask, floor * e_fill, U[ei])
        U[mi] = np.where(mask, floor, U[mi])

    # a phase locked at the volume-fraction floor never reaches the
    # relaxation stages (they skip near-pure cells), so its energy would
    # integrate pressure work with no feedback, run away over many steps
    # and eventually pollute the mixture pressure through alpha1 * p1.
    # Slave its temperature to the majority phase instead; the difference
    # moves between the two phase energies, so their sum is untouched.
    for (mi, ei, ek, ai), (mo, eo, eok, ao) in pairs:
        trace = ai <= _SKIP_ALPHA
        if not np.any(trace):
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            rho_o = U[mo] / ao
            T_o = (U[eo] / U[mo] - eok.q - eok.p_inf / rho_o) / eok.cv
        T_o = np.maximum(np.where(np.isfinite(T_o), T_o, _T_FLOOR), _T_FLOOR)
        ie_slaved = U[mi] * (ek.cv * T_o + ek.q) + ek.p_inf * ai
        delta = np.where(trace, U[ei] - ie_slaved, 0.0)
        U[ei] -= delta
        U[eo] += delta

    # a cell drained to the floor scale has no meaningful velocity; keeping
    # its momentum would give u = mom/rho -> huge and poison the next fluxes
    empty = rho < 100.0 * floor
    if np.any(empty):
        U[MOMX] = np.where(empty, 0.0, U[MOMX])
        U[MOMY] = np.where(empty, 0.0, U[MOMY])

    # a strong expansion into vacuum can also leave the cell with negative
    # conserved thermal energy; reset such cells to a tiny temperature
    rho = U[M1] + U[M2]
    kin = 0.5 * (U[MOMX] ** 2 + U[MOMY] ** 2) / rho
    a2 = clip_alpha(U[ALPHA2])
    a1 = 1.0 - a2
    Cs = U[M1] * eos1.cv + U[M2] * eos2.cv
    offset = (eos1.p_inf * a1 + eos2.p_inf * a2
              + U[M1] * eos1.q + U[M2] * eos2.q)
    thermal_min = offset + Cs * _T_FLOOR
    cold = U[ETOT] - kin < thermal_min
    if np.any(cold):
        ie1 = U[M1] * (eos1.cv * _T_FLOOR + eos1.q) + eos1.p_inf * a1
        ie2 = U[M2] * (eos2.cv * _T_FLOOR + eos2.q) + eos2.p_inf * a2
        U[IE1] = np.where(cold, ie1, U[IE1])
        U[IE2] = np.where(cold, ie2, U[IE2])
        U[ETOT] = np.where(cold, kin + thermal_min, U[ETOT])

    # the non-conservative products can drag the phase-energy sum negative
    # even though the conserved thermal energy is fine; resync the phase
    # split from the conserved total at a common temperature
    broke = U[IE1] + U[IE2] < thermal_min
    if np.any(broke):
        T_cons = np.maximum((U[ETOT] - kin - offset) / Cs, _T_FLOOR)
        ie1 = U[M1] * (eos1.cv * T_cons + eos1.q) + eos1.p_inf * a1
        ie2 = U[M2] * (eos2.cv * T_cons + eos2.q) + eos2.p_inf * a2
        U[IE1] = np.where(broke, ie1, U[IE1])
        U[IE2] = np.where(broke, ie2, U[IE2])

    # conversely, the flux imbalance can dump a dense neighbor's energy
    # into a near-massless cell; its specific energy (hence temperature and
    # sound speed) then exceeds anything physical in the domain.  Cap dilute
    # cells at the hottest non-dilute specific energy.
    dilute = rho < 1e-3 * float(np.max(rho))
    if np.any(dilute) and not np.all(dilute):
        for mi, ei in ((M1, IE1), (M2, IE2)):
            e_spec = U[ei] / U[mi]
            e_cap = float(np.max(e_spec[~dilute]))
            over = dilute & (e_spec > e_cap)
            if np.any(over):
                capped = U[mi] * e_cap
                U[ETOT] -= np.where(over, U[ei] - capped, 0.0)
                U[ei] = np.where(over, capped, U[ei])

        # likewise for momentum: a flux imbalance can hand a near-massless
        # cell a finite momentum, and u = mom/rho then exceeds every
        # physical signal speed and collapses the global time step.  Cap
        # dilute-cell speeds at the fastest non-dilute signal speed and
        # drop the discarded kinetic energy (keeping it would reappear as
        # spurious heat in a near-empty cell).
        u = U[MOMX] / rho
        v = U[MOMY] / rho
        speed = np.hypot(u, v)
        a2c = clip_alpha(U[ALPHA2])
        r1 = U[M1] / (1.0 - a2c)
        r2 = U[M2] / a2c
        p1 = eos_mod.pressure_from_rho_e(eos1, r1, U[IE1] / U[M1])
        p2 = eos_mod.pressure_from_rho_e(eos2, r2, U[IE2] / U[M2])
        c1sq = np.maximum(eos1.gamma * (p1 + eos1.p_inf) / r1, 0.0)
        c2sq = np.maximum(eos2.gamma * (p2 + eos2.p_inf) / r2, 0.0)
        Y2 = U[M2] / rho
        sig = speed + np.sqrt((1.0 - Y2) * c1sq + Y2 * c2sq)
        cap = float(np.max(sig[~dilute]))
        over = dilute & (speed > cap)
        if np.any(over):
            scale = np.where(over, cap / np.maximum(speed, 1e-300), 1.0)
            kin_drop = 0.5 * rho * speed ** 2 * (1.0 - scale ** 2)
            U[MOMX] *= scale
            U[MOMY] *= scale
            U[ETOT] -= np.where(over, kin_drop, 0.0)
    return U


def _euler_substep_1d(U, dt, dx, eos1, eos2, limiter, bc,
                      diagnostics: FluxDiagnostics | None = None):
    """One forward-Euler Godunov update along the last axis (n interior cells)."""
    Ug = fill_ghosts_1d(U, bc)
    left, right = _face_states(Ug, eos1, eos2, limiter)
    flux, ustar = hllc_faces(left, right, eos1, eos2, diagnostics)

    lam = dt / dx
    Unew = U - lam * (flux[..., 1:] - flux[..., :-1])

    # cell-centered non-conservative product R(U) (u*_{+} - u*_{-})
    a2 = clip_alpha(U[ALPHA2])
    a1 = 1.0 - a2
    p1 = eos_mod.pressure_from_rho_e(eos1, U[M1] / a1, U[IE1] / U[M1])
    p2 = eos_mod.pressure_from_rho_e(eos2, U[M2] / a2, U[IE2] / U[M2])
    du = ustar[..., 1:] - ustar[..., :-1]
    Unew[IE1] -= lam * a1 * p1 * du
    Unew[IE2] -= lam * a2 * p2 * du
    Unew[ALPHA2] += lam * a2 * du

    Unew[ALPHA2] = clip_alpha(Unew[ALPHA2])
    _floor_trace_masses(Unew, eos1, eos2)
    if diagnostics is not None:
        # net boundary inflow of the conservative components, per unit time
        axes = tuple(range(1, flux.ndim - 1))
        inflow = flux[..., 0].sum(axis=axes) if axes else flux[..., 0]
        outflow = flux[..., -1].sum(axis=axes) if axes else flux[..., -1]
        diagnostics.boundary_flux += dt * (np.asarray(inflow) - np.asarray(outflow))
    return Unew


def godunov_step_1d(U, dt, dx, eos1, eos2,
                    limiter: Limiter = Limiter(FIRST_ORDER, FIRST_ORDER),
                    bc=("transmissive", "transmissive"),
                    diagnostics: FluxDiagnostics | None = None):
    """Advance a row of cells by dt.

    First order uses a single Euler step; MUSCL reconstruction is combined
    with Heun (SSP-RK2) time stepping.
    """
    if limiter.first_order:
        return _euler_substep_1d(U, dt, dx, eos1, eos2, limiter, bc, diagnostics)
    half = FluxDiagnostics() if diagnostics is not None else None
    U1 = _euler_substep_1d(U, dt, dx, eos1, eos2, limiter, bc, half)
    U2 = _euler_substep_1d(U1, dt, dx, eos1, eos2, limiter, bc, half)
    if diagnostics is not None:
        diagnostics.hll_fallbacks += half.hll_fallbacks
        diagnostics.boundary_flux += 0.5 * half.boundary_flux
    out = 0.5 * (U + U2)
    out[ALPHA2] = clip_alpha(out[ALPHA2])
    return out


def cfl_dt(grid: Grid, cfl: float) -> float:
    """dt = cfl * min(dx / (|u| + c)) with the dimension-wise minimum in 2D."""
    if not 0.0 < cfl <= 1.0:
        raise ValueError("cfl must lie in (0, 1]")
    if grid.U.size == 0:
        raise ValueError("empty grid")
    from .state import mixture_sound_speed, to_primitive
    P = to_primitive(grid.U, grid.eos1, grid.eos2)
    c = mixture_sound_speed(P, grid.eos1, grid.eos2)
    rate = np.max((np.abs(P.u) + c) / grid.dx)
    if grid.ndim == 2:
        rate = max(rate, np.max((np.abs(P.v) + c) / grid.dy))
    return cfl / rate


_SWAP = np.array([M1, M2, MOMY, MOMX, IE1, IE2, ETOT, ALPHA2])


def hyperbolic_step(grid: Grid, dt, limiter=Limiter(FIRST_ORDER, FIRST_ORDER),
                    step_index: int = 0,
                    diagnostics: FluxDiagnostics | None = None):
    """Advance the grid one dt; in 2D, symmetrized X-Y / Y-X splitting."""
    if grid.ndim == 1:
        grid.U = godunov_step_1d(grid.U, dt, grid.dx, grid.eos1, grid.eos2,
                                 limiter, grid.bc_x, diagnostics)
        return grid

    def sweep_x(U):
        # operate with x as the last axis: (8, ny, nx)
        d = FluxDiagnostics() if diagnostics is not None else None
        Ut = np.swapaxes(U, 1, 2)
        Ut = godunov_step_1d(Ut, dt, grid.dx, grid.eos1, grid.eos2,
                             limiter, grid.bc_x, d)
        if diagnostics is not None:
            diagnostics.hll_fallbacks += d.hll_fallbacks
            diagnostics.boundary_flux += grid.dy * d.boundary_flux
        return np.swapaxes(Ut, 1, 2)

    def sweep_y(U):
        # swap the momentum components so the kernel sees MOMX as normal
        Us = U[_SWAP]
        d = FluxDiagnostics() if diagnostics is not None else None
        Us = godunov_step_1d(Us, dt, grid.dy, grid.eos1, grid.eos2,
                             limiter, grid.bc_y, d)
        if diagnostics is not None:
            diagnostics.hll_fallbacks += d.hll_fallbacks
            diagnostics.boundary_flux += grid.dx * d.boundary_flux[_SWAP]
        return Us[_SWAP]

    if step_index % 2 == 0:
        grid.U = sweep_y(sweep_x(grid.U))
    else:
        grid.U = sweep_x(sweep_y(grid.U))
    return grid


def sweep_2d(grid: Grid, dt, limiter=Limiter(FIRST_ORDER, FIRST_ORDER),
             step_index: int = 0, diagnostics=None):
    """Alias kept close to the operation name used by the driver."""
    return hyperbolic_step(grid, dt, limiter, step_index, diagnostics)
