"""Viscous and heat-conduction stages advanced with Chebyshev iterations.

The viscous step diffuses velocity with a conservative final sub-step so
total momentum is preserved exactly; the conduction step runs the outer
nonlinear loop coupling temperature and volume fraction, with the energy
update built from the predictor fluxes so that mixture internal energy
changes exactly by the conducted boundary fluxes plus deposited power.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chebyshev import IterationDivergedError, lim_solve
from .eos import InvalidStateError, StiffenedGasEos
from .relaxation import (SKIP_ALPHA, b2_coefficient, pressure_disequilibrium,
                         relax_pressure, relax_temperature)
from .state import (ALPHA2, ETOT, IE1, IE2, M1, M2, MOMX, MOMY,
                    Grid, clip_alpha, pad_field_1d)

_SWAP = np.array([M1, M2, MOMY, MOMX, IE1, IE2, ETOT, ALPHA2])


# ---------------------------------------------------------------------------
# transport coefficients

@dataclass(frozen=True)
class PlasmaParams:
    """Plasma constants for the conductivity model.

    Working units are centimetre-gram-microsecond with temperature in
    10^6 K (the energy unit is then 1e12 erg, consistent with specific
    heats like 86.27 for ionized CH).  kb, me, qe, hbar are the
    Boltzmann constant, electron mass, electron charge and reduced
    Planck constant converted into those units; N0 is Avogadro's number,
    Z the ionization degree, A_c the average atomic number of the
    material.
    """

    kb: float = 1.380649e-22
    me: float = 9.1093837e-28
    qe: float = 4.80320425e-16
    hbar: float = 1.054571817e-33
    N0: float = 6.02214076e23
    Z: float = 3.5
    A_c: float = 6.5
    prefactor: float = 9.44 * (2.0 / np.pi) ** 1.5


def spitzer_harm_lambda(T, rho, plasma: PlasmaParams):
    """Plasma thermal conductivity, scaling as T^(5/2) / ln(Lambda).

    lambda = prefactor * (kb T)^(5/2) kb N_e / (sqrt(me) e^4 N_i Z (Z+4) lnL)
    with N_i = (N0/A_c) rho and N_e = Z N_i.  The Coulomb logarithm
    compares the Debye length against the Landau length or the De Broglie
    wavelength and is clamped to at least 1, which keeps the function
    total for any positive state.
    """
    T = np.asarray(T, dtype=float)
    rho = np.asarray(rho, dtype=float)
    kbT = plasma.kb * T
    Ni = plasma.N0 / plasma.A_c * rho
    Ne = plasma.Z * Ni
    with np.errstate(divide="ignore", invalid="ignore"):
        l_D = np.sqrt(kbT / (4.0 * np.pi * Ne * plasma.qe ** 2))
        l_LD = plasma.Z * plasma.qe ** 2 / (3.0 * kbT)
        l_dB = plasma.hbar / (2.0 * np.sqrt(plasma.me * kbT))
        landau_regime = plasma.Z ** 2 / (3.0 * kbT) >= l_dB
        lnL = np.where(landau_regime, np.log(l_D / l_LD), np.log(l_D / l_dB))
    lnL = np.maximum(1.0, np.where(np.isfinite(lnL), lnL, 1.0))
    lam = (plasma.prefactor * kbT ** 2.5 * plasma.kb * Ne
           / (np.sqrt(plasma.me) * plasma.qe ** 4
              * Ni * plasma.Z * (plasma.Z + 4.0) * lnL))
    return lam


@dataclass(frozen=True)
class TransportModel:
    """Per-phase transport coefficients.

    Viscosities are constants; conductivities are either constants or
    callables (T, rho) -> conductivity evaluated at the mixture density.
    Mixture coefficients follow the volume-fraction average.
    """

    mu1: float = 0.0
    mu2: float = 0.0
    mu_b1: float = 0.0
    mu_b2: float = 0.0
    lam1: object = 0.0
    lam2: object = 0.0

    def __post_init__(self):
        for name in ("mu1", "mu2", "mu_b1", "mu_b2"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("lam1", "lam2"):
            val = getattr(self, name)
            if not callable(val) and val < 0.0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def has_viscosity(self):
        return (self.mu1 > 0.0 or self.mu2 > 0.0
                or self.mu_b1 > 0.0 or self.mu_b2 > 0.0)

    @property
    def has_conduction(self):
        return any(callable(v) or v > 0.0 for v in (self.lam1, self.lam2))

    def conductivity(self, phase: int, T, rho):
        val = self.lam1 if phase == 1 else self.lam2
        if callable(val):
            return np.asarray(val(T, rho), dtype=float)
        return np.full_like(np.asarray(T, dtype=float), float(val))


# ---------------------------------------------------------------------------
# laser deposition

@dataclass(frozen=True)
class LaserSource:
    """Power deposition over a band next to the critical surface.

    Each step (and each grid row in 2D) the domain is scanned from the
    laser side (high x) toward low x for the first cell whose mixture
    density reaches rho_crt; the power is deposited at constant density
    `intensity` over the `absorption_depth`-wide band on the laser side
    of that cell.  Band cells below `rho_floor` receive nothing — a
    volumetric deposit into a near-empty cell would drive its specific
    energy unbounded — and the skipped power is redistributed uniformly
    over the remaining band cells, so the total deposited power per
    column is intensity * band volume regardless.
    """

    intensity: float
    absorption_depth: float
    rho_crt: float
    rho_floor: float = 1.0e-2

    def profile(self, rho, x):
        """Deposited power density; rho has x along axis 0, x are centers."""
        rho = np.asarray(rho, dtype=float)
        x = np.asarray(x, dtype=float)
        mask = rho >= self.rho_crt
        rev = mask[::-1]
        found = rev.any(axis=0)
        icrit = rho.shape[0] - 1 - np.argmax(rev, axis=0)
        xc = x[icrit]
        xs = x if rho.ndim == 1 else x[:, None]
        band = (xs > xc) & (xs <= xc + self.absorption_depth) & found
        heated = band & (rho >= self.rho_floor)
        n_band = band.sum(axis=0)
        n_heated = heated.sum(axis=0)
        boost = n_band / np.where(n_heated > 0, n_heated, 1)
        return np.where(heated, self.intensity * boost, 0.0)


# ---------------------------------------------------------------------------
# diffusion stencils

def _face_average(w):
    return 0.5 * (w[..., 1:] + w[..., :-1])


def _div_flux(Tpad, Lface, dx):
    """Divergence of Lface * grad(T) on the last axis; Tpad has 1 ghost."""
    grad = (Tpad[..., 1:] - Tpad[..., :-1]) / dx
    return (Lface[..., 1:] * grad[..., 1:] - Lface[..., :-1] * grad[..., :-1]) / dx


def heat_flux_divergence(T, alpha_k, lambda_k, dx, bc=("transmissive", "transmissive")):
    """Central-difference divergence of the phase heat flux on the last axis:

        q_k,i = [L_{i+1/2}(T_{i+1}-T_i) - L_{i-1/2}(T_i-T_{i-1})] / dx^2

    with L = alpha_k lambda_k averaged to faces.  Summed over cells it
    telescopes to the boundary fluxes.
    """
    Lam = np.asarray(alpha_k, dtype=float) * np.asarray(lambda_k, dtype=float)
    Tpad = pad_field_1d(np.asarray(T, dtype=float), bc)
    Lface = _face_average(pad_field_1d(Lam, bc))
    return _div_flux(Tpad, Lface, dx)


# ---------------------------------------------------------------------------
# viscous stage

@dataclass
class DiffusionDiagnostics:
    boundary_flux: np.ndarray = field(default_factory=lambda: np.zeros(8))
    source_energy: float = 0.0
    outer_iterations: int = 0


def _viscous_sweep(U, dt, dx, bc, transport: TransportModel,
                   diagnostics: DiffusionDiagnostics | None = None):
    """Diffuse both velocity components along the last axis.

    The sweep-normal component (MOMX here) uses 4/3 mu + mu_b, the
    transverse one mu.  The last Chebyshev sub-step is recast as a
    conservative face-flux update, so interior momentum telescopes
    exactly; the total-energy work terms use the predictor velocity on
    faces and the phase split uses volume fractions averaged to faces.
    """
    a2 = clip_alpha(U[ALPHA2])
    a1 = 1.0 - a2
    rho = U[M1] + U[M2]
    mu = a1 * transport.mu1 + a2 * transport.mu2
    mub = a1 * transport.mu_b1 + a2 * transport.mu_b2

    for comp, nu in ((MOMX, 4.0 / 3.0 * mu + mub), (MOMY, mu)):
        if not np.any(nu > 0.0):
            continue
        negate = comp == MOMX  # normal velocity flips at a reflecting wall
        un = U[comp] / rho
        nuf = _face_average(pad_field_1d(nu, bc))

        def op(v, nuf=nuf, negate=negate):
            vpad = pad_field_1d(v, bc, negate_reflective=negate)
            return -_div_flux(vpad, nuf, dx) / rho

        diag = (nuf[..., :-1] + nuf[..., 1:]) / (rho * dx ** 2)
        lam_max = 2.0 * float(np.max(diag, initial=0.0))
        _, u_hat = lim_solve(un, op, np.zeros_like(un), dt, lam_max)

        uhat_pad = pad_field_1d(u_hat, bc, negate_reflective=negate)
        Fhat = nuf * (uhat_pad[..., 1:] - uhat_pad[..., :-1]) / dx
        mom_new = U[comp] + dt / dx * (Fhat[..., 1:] - Fhat[..., :-1])
        u_new = mom_new / rho

        uface = _face_average(uhat_pad)
        work = uface * Fhat
        dE = dt / dx * (work[..., 1:] - work[..., :-1])
        ubar = 0.5 * (un + u_new)
        dK = ubar * (mom_new - U[comp])
        for alpha, idx in ((a1, IE1), (a2, IE2)):
            aface = _face_average(pad_field_1d(alpha, bc))
            awork = aface * work
            U[idx] += dt / dx * (awork[..., 1:] - awork[..., :-1]) - alpha * dK
        U[ETOT] += dE
        U[comp] = mom_new

        if diagnostics is not None:
            axes = tuple(range(Fhat.ndim - 1))
            def edge(f, i):
                sl = f[..., i]
                return float(sl.sum()) if axes else float(sl)
            diagnostics.boundary_flux[comp] += dt * (edge(Fhat, 0) - edge(Fhat, -1))
            diagnostics.boundary_flux[ETOT] += dt * (edge(work, 0) - edge(work, -1))
    return U


def viscous_step(grid: Grid, dt, transport: TransportModel,
                 diagnostics: DiffusionDiagnostics | None = None):
    """Advance the viscous momentum diffusion by dt (no-op when mu = 0)."""
    if not transport.has_viscosity:
        return grid
    if grid.ndim == 1:
        grid.U = _viscous_sweep(grid.U, dt, grid.dx, grid.bc_x, transport,
                                diagnostics)
        return grid

    d = DiffusionDiagnostics() if diagnostics is not None else None
    Ut = np.swapaxes(grid.U, 1, 2)
    Ut = _viscous_sweep(Ut, dt, grid.dx, grid.bc_x, transport, d)
    U = np.swapaxes(Ut, 1, 2)
    if diagnostics is not None:
        diagnostics.boundary_flux += grid.dy * d.boundary_flux
        d.boundary_flux = np.zeros(8)
    Us = _viscous_sweep(U[_SWAP], dt, grid.dy, grid.bc_y, transport, d)
    grid.U = Us[_SWAP]
    if diagnostics is not None:
        diagnostics.boundary_flux += grid.dx * d.boundary_flux[_SWAP]
    return grid


# ---------------------------------------------------------------------------
# conduction stage

def conduction_coefficients(T, alpha2, m1, m2,
                            eos1: StiffenedGasEos, eos2: StiffenedGasEos):
    """Coefficients of the equilibrium temperature / volume-fraction system

        dT/dt      = V1 (q1 + I1) + V2 (q2 + I2)
        dalpha2/dt = U1 (q1 + I1) + U2 (q2 + I2)

    They satisfy (C1 + C2) Vk - B1 Uk = 1, which is what makes the
    discrete update conserve mixture internal energy exactly.
    """
    a2 = clip_alpha(np.asarray(alpha2, dtype=float))
    a1 = 1.0 - a2
    G1, G2 = eos1.gamma - 1.0, eos2.gamma - 1.0
    C1 = m1 * eos1.cv
    C2 = m2 * eos2.cv
    B1 = eos1.p_inf - eos2.p_inf
    B2 = b2_coefficient(T, T, a2, eos1, eos2, m1, m2)
    gsum = G1 / a1 + G2 / a2
    R1 = -(G1 / a1) / gsum
    R2 = 1.0 + (G2 / a2) / gsum
    D = (B1 + B2) * C2 + C1 * B2
    if np.any(B2 <= 0.0) or np.any(D <= 0.0):
        raise InvalidStateError("inadmissible state in conduction coefficients")
    V1 = (B2 + B1 * R1) / D
    V2 = (B2 + B1 * R2) / D
    U1 = (R1 - C2 * V1) / B2
    U2 = (R2 - C2 * V2) / B2
    return V1, V2, U1, U2


# Stiffness budget per solve (~80 Chebyshev stages).  Beyond a few 1e4 the
# repeated sweeps lose internal floating-point stability, so larger steps
# are split in time instead of stretching the schedule further.
_TAU_LAMBDA_CAP = 1.0e4


def conduction_step(grid: Grid, dt, transport: TransportModel,
                    source: LaserSource | None = None,
                    tol: float = 1e-6, max_outer: int = 50,
                    diagnostics: DiffusionDiagnostics | None = None,
                    _depth: int = 0):
    """One heat-conduction step of the outer nonlinear fixed-point loop.

    Per outer iterate the coefficients V, U and the face conductivities
    are frozen at the current (T, alpha2) iterate, the temperature
    equation is advanced from the step-initial T by Chebyshev iterations,
    and alpha2 is advanced with forward Euler using the predictor heat
    fluxes.  Loop until the sup-norm change of T drops below tol.  A
    relaxation polish restores exact pressure/temperature equilibrium.
    """
    if not transport.has_conduction and source is None:
        return grid

    U = grid.U
    eos1, eos2 = grid.eos1, grid.eos2
    m1, m2 = U[M1], U[M2]
    rho = m1 + m2
    a2n = clip_alpha(U[ALPHA2])
    C1 = m1 * eos1.cv
    C2 = m2 * eos2.cv
    # phases are in temperature equilibrium up to relaxation tolerance;
    # the mass-weighted mean is the consistent scalar temperature
    rho1 = m1 / (1.0 - a2n)
    rho2 = m2 / a2n
    T1 = (U[IE1] / m1 - eos1.q - eos1.p_inf / rho1) / eos1.cv
    T2 = (U[IE2] / m2 - eos2.q - eos2.p_inf / rho2) / eos2.cv
    Tn = (C1 * T1 + C2 * T2) / (C1 + C2)

    ndim = grid.ndim
    axes = [(grid.dx, grid.bc_x)] if ndim == 1 else \
        [(grid.dx, grid.bc_x), (grid.dy, grid.bc_y)]

    Iarr = source.profile(rho, grid.x) if source is not None else None

    B1 = eos1.p_inf - eos2.p_inf
    # near-pure cells keep their volume fraction: the phantom-phase
    # coefficients scale as 1/alpha and would hand a macroscopic volume
    # to a phase with negligible mass.  Single-phase coefficients
    # (V = 1/(C1+C2), U = 0) satisfy the same energy identity, so the
    # committed step stays exactly conservative at those cells.
    pure = np.minimum(1.0 - a2n, a2n) <= SKIP_ALPHA

    T_it, a2_it = Tn, a2n
    history = []
    theta = 1.0
    bound_prev = 0.0
    best = (Tn, a2n)
    best_err = np.inf
    stall = 0
    for _ in range(max_outer):
        a1_it = 1.0 - a2_it
        V1, V2, Uc1, Uc2 = conduction_coefficients(T_it, a2_it, m1, m2, eos1, eos2)
        V1 = np.where(pure, 1.0 / (C1 + C2), V1)
        V2 = np.where(pure, 1.0 / (C1 + C2), V2)
        Uc1 = np.where(pure, 0.0, Uc1)
        Uc2 = np.where(pure, 0.0, Uc2)
        Lam1 = a1_it * transport.conductivity(1, T_it, rho)
        Lam2 = a2_it * transport.conductivity(2, T_it, rho)

        # face conductivities per axis, frozen for this outer iterate
        faces = []
        lam_max = np.zeros_like(Tn)
        for ax, (h, bc) in enumerate(axes):
            L1m = np.moveaxis(Lam1, ax + 0, -1) if ndim == 2 else Lam1
            L2m = np.moveaxis(Lam2, ax + 0, -1) if ndim == 2 else Lam2
            L1f = _face_average(pad_field_1d(L1m, bc))
            L2f = _face_average(pad_field_1d(L2m, bc))
            V1m = np.moveaxis(V1, ax, -1) if ndim == 2 else V1
            V2m = np.moveaxis(V2, ax, -1) if ndim == 2 else V2
            faces.append((L1f, L2f, h, bc, ax, V1m, V2m))
            d1 = (L1f[..., :-1] + L1f[..., 1:]) / h ** 2
            d2 = (L2f[..., :-1] + L2f[..., 1:]) / h ** 2
            contrib = V1 * (np.moveaxis(d1, -1, ax) if ndim == 2 else d1) \
                + V2 * (np.moveaxis(d2, -1, ax) if ndim == 2 else d2)
            lam_max += np.abs(contrib)
        # keep the spectral bound monotone across outer iterates: a change
        # in the Chebyshev stage count makes the inner solve jump by more
        # than the outer tolerance (overestimating the bound is stable)
        bound = max(2.0 * float(np.max(lam_max, initial=0.0)), bound_prev)
        bound_prev = bound
        if bound * dt > _TAU_LAMBDA_CAP and _depth < 8:
            # the stage count grows as sqrt(dt*bound); when a stiff burst
            # (e.g. a fresh deposition region whose conductivity was frozen
            # near zero) pushes the bound out of budget, halving dt is far
            # cheaper than sweeping: the overshoot scales with dt and the
            # T^(5/2) conductivity amplifies it superlinearly
            for _ in range(2):
                conduction_step(grid, 0.5 * dt, transport, source, tol,
                                max_outer, diagnostics, _depth + 1)
            return grid

        def heat_div(T, which):
            out = np.zeros_like(T)
            for L1f, L2f, h, bc, ax, _, _ in faces:
                Lf = L1f if which == 1 else L2f
                Tm = np.moveaxis(T, ax, -1) if ndim == 2 else T
                q = _div_flux(pad_field_1d(Tm, bc), Lf, h)
                out += np.moveaxis(q, -1, ax) if ndim == 2 else q
            return out

        if Iarr is not None:
            I1, I2 = a1_it * Iarr, a2_it * Iarr
        else:
            I1 = I2 = 0.0

        # fold the metric into the face coefficients once per outer iterate
        stencil = [(L1f / h ** 2, L2f / h ** 2, bc, ax, V1m, V2m)
                   for L1f, L2f, h, bc, ax, V1m, V2m in faces]

        def op(v):
            # both phase stencils share the padded field and gradient
            out = None
            for K1f, K2f, bc, ax, V1m, V2m in stencil:
                vm = np.moveaxis(v, ax, -1) if ndim == 2 else v
                grad = np.diff(pad_field_1d(vm, bc))
                q = V1m * np.diff(K1f * grad) + V2m * np.diff(K2f * grad)
                if ndim == 2:
                    q = np.moveaxis(q, -1, ax)
                out = q if out is None else out + q
            return -out

        src = V1 * I1 + V2 * I2 if Iarr is not None else np.zeros_like(Tn)
        try:
            T_new, T_hat = lim_solve(Tn, op, src, dt, bound, start=T_it)
        except IterationDivergedError:
            if _depth >= 8:
                raise
            for _ in range(2):
                conduction_step(grid, 0.5 * dt, transport, source, tol,
                                max_outer, diagnostics, _depth + 1)
            return grid
        qhat1 = heat_div(T_hat, 1)
        qhat2 = heat_div(T_hat, 2)
        a2_raw = a2n + dt * (Uc1 * (qhat1 + I1) + Uc2 * (qhat2 + I2))
        a2_new = np.where(pure, a2n, clip_alpha(a2_raw))
        # clipping decouples the committed fraction from the predictor
        # fluxes; move the difference into the temperature so the
        # committed energy still telescopes with the face fluxes
        T_new = T_new + np.where(pure, 0.0,
                                 B1 * (a2_new - a2_raw) / (C1 + C2))

        err = float(np.max(np.abs(T_new - T_it)) / max(np.max(np.abs(T_new)), 1e-300))
        history.append(err)
        if err < best_err:
            best_err = err
            best = (T_new, a2_new)
            stall = 0
        else:
            stall += 1
        if err < tol:
            T_it, a2_it = T_new, a2_new
            break
        if stall >= 6:
            # The fixed point has reached its noise floor (phantom-phase
            # coefficients vary as 1/alpha^2 near pure cells) or is past
            # its contraction limit.  Any frozen-coefficient solution
            # conserves energy exactly and the split is first order in
            # time, so commit the best iterate seen.
            T_it, a2_it = best
            break
        # damp the coefficient iterate while contraction is weak and let the
        # damping recover once it strengthens again (a stuck small theta
        # turns late convergence into a crawl toward max_outer)
        if len(history) >= 2:
            if err > 0.6 * history[-2]:
                theta = max(0.5 * theta, 1.0 / 32.0)
            elif err < 0.3 * history[-2]:
                theta = min(2.0 * theta, 1.0)
        T_it = T_it + theta * (T_new - T_it)
        a2_it = clip_alpha(a2_it + theta * (a2_new - a2_it))
    else:
        T_it, a2_it = best
    if best_err > 1e-3 and history[-1] > 1e-3:
        # the coupled temperature / volume-fraction move is too large for
        # the coefficient iteration; halve the step and retry on the
        # untouched state (nothing has been committed yet)
        if _depth >= 8:
            raise InvalidStateError(
                f"conduction outer loop diverged; residuals {history}")
        for _ in range(2):
            conduction_step(grid, 0.5 * dt, transport, source, tol,
                            max_outer, diagnostics, _depth + 1)
        return grid

    a1f = 1.0 - a2_it
    ie1 = m1 * (eos1.cv * T_it + eos1.q) + eos1.p_inf * a1f
    ie2 = m2 * (eos2.cv * T_it + eos2.q) + eos2.p_inf * a2_it
    dE = (ie1 + ie2) - (U[IE1] + U[IE2])
    U[IE1] = ie1
    U[IE2] = ie2
    U[ETOT] += dE
    U[ALPHA2] = a2_it

    if diagnostics is not None:
        vol = grid.dx * (grid.dy if ndim == 2 else 1.0)
        if Iarr is not None:
            deposited = dt * float(np.sum(a1f * Iarr + a2_it * Iarr)) * vol
            diagnostics.source_energy += deposited
            diagnostics.boundary_flux[ETOT] += deposited
        diagnostics.outer_iterations += len(history)

    # the frozen-coefficient update lets the phase equilibria drift at
    # second order; polish them back with the relaxation pair.  One pass
    # can stall near the round-off floor of small-volume-fraction cells,
    # so iterate until the residual is far below the maintenance target
    for _ in range(3):
        if pressure_disequilibrium(U, eos1, eos2) <= 1e-9:
            break
        U, _ = relax_pressure(U, eos1, eos2)
        U, _ = relax_temperature(U, eos1, eos2)
    grid.U = U
    return grid
