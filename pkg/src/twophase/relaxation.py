"""Instantaneous pressure and temperature relaxation stages.

Both operate cell-locally on arrays of conserved states, conserve phase
masses and momentum by construction, and are vectorized over cells.
Cells where one phase sits at the volume-fraction floor are skipped: the
pure phase defines the equilibrium and the formulas contain 1/alpha_k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eos import InvalidStateError, StiffenedGasEos
from .state import ALPHA2, ALPHA_FLOOR, ETOT, IE1, IE2, M1, M2, MOMX, MOMY, clip_alpha

SKIP_ALPHA = 2.0 * ALPHA_FLOOR


@dataclass
class RelaxationReport:
    iterations: int
    residual: float
    p_eq: np.ndarray
    T_eq: np.ndarray | None = None
    alpha2_new: np.ndarray | None = None


def _split(U, eos1, eos2):
    a2 = clip_alpha(U[ALPHA2])
    a1 = 1.0 - a2
    m1, m2 = U[M1], U[M2]
    rho = m1 + m2
    u = U[MOMX] / rho
    v = U[MOMY] / rho
    kinetic = 0.5 * rho * (u ** 2 + v ** 2)
    return a1, a2, m1, m2, rho, kinetic


def _equilibrium_alpha(E0, C1, C2, g1, g2, pi1, pi2, a_start, active,
                       tol=1e-13, max_iter=100):
    """Common-(T, p) volume fraction from the affine-T energy closure.

    With both phases at one temperature the energy closure gives
    T(a) = (E0 - pi1 (1-a) - pi2 a) / (C1 + C2), reducing the mechanical
    equilibrium p1(a) = p2(a) to one scalar root per cell, found by a
    bisection-safeguarded Newton sweep restricted to the interval where
    T > 0.  Returns (a, T); cells outside `active` keep a_start.  Raises
    when an active cell admits no positive-temperature volume fraction.
    """
    C = C1 + C2
    lo = np.full_like(a_start, ALPHA_FLOOR)
    hi = np.full_like(a_start, 1.0 - ALPHA_FLOOR)
    # T(a) is linear in a with slope (pi1 - pi2)/C; keep only T > 0
    if pi1 != pi2:
        with np.errstate(divide="ignore", invalid="ignore"):
            a_zero = (pi1 - E0) / (pi1 - pi2)
        margin = 1e-12 + np.abs(a_zero) * 1e-12
        if pi1 > pi2:
            lo = np.clip(a_zero + margin, lo, hi)
        else:
            hi = np.clip(a_zero - margin, lo, hi)

    def T_of(a):
        return (E0 - pi1 * (1.0 - a) - pi2 * a) / C

    T_max = np.maximum(T_of(lo), T_of(hi))
    fatal = active & ~(T_max > 0.0)
    if np.any(fatal):
        idx = np.argwhere(fatal)
        raise InvalidStateError(
            f"no positive-temperature equilibrium at cells {idx[:5].tolist()}")

    def f(a):
        T = T_of(a)
        p1 = (g1 - 1.0) * C1 * T / (1.0 - a) - pi1
        p2 = (g2 - 1.0) * C2 * T / a - pi2
        return p1 - p2, T

    a = np.clip(a_start, lo, hi)
    val, T = f(a)
    dT = (pi1 - pi2) / C
    for _ in range(max_iter):
        hi = np.where(val > 0.0, a, hi)
        lo = np.where(val <= 0.0, a, lo)
        dval = ((g1 - 1.0) * C1 * (dT / (1.0 - a) + T / (1.0 - a) ** 2)
                - (g2 - 1.0) * C2 * (dT / a - T / a ** 2))
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dval != 0.0, val / dval, 0.0)
        a_new = a - step
        off = ~np.isfinite(a_new) | (a_new <= lo) | (a_new >= hi)
        a_new = np.where(off, 0.5 * (lo + hi), a_new)
        val, T = f(a_new)
        a = a_new
        # converge on the pressure residual, not the volume fraction: at a
        # tiny fraction, dp/da ~ p_total/alpha_k turns an alpha-tolerance
        # into a large pressure mismatch.  64 ulp of the stiffened-pressure
        # magnitude is the evaluation floor of f itself; the bracket-width
        # test ends boundary-clamped cells that have no interior root.
        eps = np.finfo(float).eps
        pmag = ((g1 - 1.0) * C1 * T / (1.0 - a) + pi1
                + (g2 - 1.0) * C2 * T / a + pi2)
        done = ((np.abs(val) <= 64.0 * eps * pmag)
                | (hi - lo <= 2.0 * eps * np.maximum(np.abs(a), 1e-300)))
        if np.all(~active | done):
            break
    return a, T


def relax_pressure(U, eos1: StiffenedGasEos, eos2: StiffenedGasEos):
    """Drive phase pressures to a common value at fixed masses and momentum.

    Step (1): the saturation constraint sum alpha_k(p) = 1 with phase
    energies frozen reduces to a quadratic in p for two stiffened gases;
    the larger root is taken and polished with two Newton iterations.
    Step (2): the pressure is re-evaluated from the mixture internal
    energy with the new volume fractions, which makes the stage conserve
    rho E exactly.  Step (3): phase energies are reset from that pressure.
    """
    U = np.array(U, dtype=float, copy=True)
    a1, a2, m1, m2, rho, kinetic = _split(U, eos1, eos2)
    skip = np.minimum(a1, a2) <= SKIP_ALPHA

    g1, g2 = eos1.gamma, eos2.gamma
    pi1, pi2 = eos1.p_inf, eos2.p_inf
    E1 = U[IE1] - m1 * eos1.q
    E2 = U[IE2] - m2 * eos2.q

    A = g2 * a1 + g1 * a2
    B = (g1 * g2 * (pi1 + pi2)
         - (g1 - 1.0) * g2 * (E1 + a1 * pi2)
         - (g2 - 1.0) * g1 * (E2 + a2 * pi1))
    C = (g1 * g2 * pi1 * pi2
         - (g1 - 1.0) * g2 * E1 * pi2
         - (g2 - 1.0) * g1 * E2 * pi1)

    disc = B * B - 4.0 * A * C
    bad = disc < 0.0
    sqrtD = np.sqrt(np.where(bad, 0.0, disc))
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(B <= 0.0, (-B + sqrtD) / (2.0 * A), 2.0 * C / (-B - sqrtD))

    def alphas(p):
        f1 = (g1 - 1.0) * (E1 + p * a1) / (g1 * (p + pi1))
        f2 = (g2 - 1.0) * (E2 + p * a2) / (g2 * (p + pi2))
        return f1, f2

    # Newton polish of sum alpha_k(p) - 1 = 0 to tighten the closed form
    for _ in range(2):
        f1, f2 = alphas(p)
        gval = f1 + f2 - 1.0
        gp = ((g1 - 1.0) * (a1 * pi1 - E1) / (g1 * (p + pi1) ** 2)
              + (g2 - 1.0) * (a2 * pi2 - E2) / (g2 * (p + pi2) ** 2))
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(gp != 0.0, gval / gp, 0.0)
        p = p - step

    pin_min = min(pi1, pi2)
    bad |= ~np.isfinite(p) | (p <= -pin_min)
    # the root must also produce a genuine two-phase partition: a negative
    # alpha_k(p) means the cell has no admissible mechanical equilibrium
    f1c, f2c = alphas(np.where(bad, 0.0, p))
    bad |= ~bad & ((f1c <= 0.0) | (f2c <= 0.0))
    # Cells where the saturation equation has no admissible root (a phase
    # dragged outside its state space by the transport stage, typically in
    # the diffused tail of a contact) keep their transported volume
    # fractions: the conservative pressure re-evaluation and phase-energy
    # reset below still restore a common pressure for them.
    problem = bad & ~skip
    frozen = skip | problem

    f1, f2 = alphas(np.where(bad, 0.0, p))
    total = f1 + f2
    a1n = np.where(frozen, a1, f1 / total)
    a2n = np.where(frozen, a2, f2 / total)
    residual = float(np.max(np.abs(np.where(frozen, 0.0, total - 1.0)), initial=0.0))

    # step (2): conservative re-evaluation from the mixture internal energy
    rhoe = U[ETOT] - kinetic
    denom = a1n / (g1 - 1.0) + a2n / (g2 - 1.0)
    p2 = (rhoe - m1 * eos1.q - m2 * eos2.q
          - a1n * g1 * pi1 / (g1 - 1.0) - a2n * g2 * pi2 / (g2 - 1.0)) / denom
    p2 = np.where(skip, np.nan, p2)

    # Both phases need positive temperatures at the common pressure.  When
    # even the frozen-fraction reset cannot provide that (a phantom phase
    # whose p_inf volume cost exceeds the cell's thermal energy), the
    # volume fraction itself is repaired by the joint (T, p) equilibrium,
    # which conserves masses, momentum and total energy exactly; it raises
    # when no positive-temperature partition exists at all.
    repair = ~skip & ~(p2 > -pin_min)
    if np.any(repair):
        C1 = m1 * eos1.cv
        C2 = m2 * eos2.cv
        E0b = rhoe - m1 * eos1.q - m2 * eos2.q
        a_eq, T_eq = _equilibrium_alpha(E0b, C1, C2, g1, g2, pi1, pi2,
                                        clip_alpha(U[ALPHA2]), repair)
        U[IE1] = np.where(repair,
                          C1 * T_eq + m1 * eos1.q + pi1 * (1.0 - a_eq), U[IE1])
        U[IE2] = np.where(repair,
                          C2 * T_eq + m2 * eos2.q + pi2 * a_eq, U[IE2])
        U[ALPHA2] = np.where(repair, a_eq, U[ALPHA2])
        skip = skip | repair
        p2 = np.where(repair, np.nan, p2)

    # step (3): reset phase energies at (p2, rho_k)
    ie1 = a1n * (p2 + g1 * pi1) / (g1 - 1.0) + m1 * eos1.q
    ie2 = a2n * (p2 + g2 * pi2) / (g2 - 1.0) + m2 * eos2.q

    out = U
    out[IE1] = np.where(skip, U[IE1], ie1)
    out[IE2] = np.where(skip, U[IE2], ie2)
    out[ALPHA2] = np.where(skip, U[ALPHA2], clip_alpha(a2n))
    report = RelaxationReport(iterations=3, residual=residual,
                              p_eq=p2, alpha2_new=out[ALPHA2])
    return out, report


def r0(T1, T2, alpha2, eos1: StiffenedGasEos, eos2: StiffenedGasEos, m1, m2):
    """Coefficient coupling volume-fraction change to the thermal energy
    exchange; positive for all admissible states.

    r0 = (G1/a1 + G2/a2) / ((gbar1 - G1)/a1 + (gbar2 - G2)/a2) with
    G_k the Gruneisen coefficients and gbar_k the adiabatic exponents,
    all evaluated at the cell's phase states.
    """
    a2 = np.asarray(alpha2, dtype=float)
    a1 = 1.0 - a2
    G1, G2 = eos1.gamma - 1.0, eos2.gamma - 1.0
    rho1 = np.asarray(m1, dtype=float) / a1
    rho2 = np.asarray(m2, dtype=float) / a2
    p1 = G1 * rho1 * eos1.cv * T1 - eos1.p_inf
    p2 = G2 * rho2 * eos2.cv * T2 - eos2.p_inf
    # gbar_k - G_k = (p_k + gamma_k p_inf,k) / p_k
    d1 = (p1 + eos1.gamma * eos1.p_inf) / p1
    d2 = (p2 + eos2.gamma * eos2.p_inf) / p2
    return (G1 / a1 + G2 / a2) / (d1 / a1 + d2 / a2)


def b2_coefficient(T1, T2, alpha2, eos1, eos2, m1, m2):
    """Explicit closed form of the B2 coefficient for two stiffened gases."""
    a2 = np.asarray(alpha2, dtype=float)
    a1 = 1.0 - a2
    G1, G2 = eos1.gamma - 1.0, eos2.gamma - 1.0
    C1 = m1 * eos1.cv
    C2 = m2 * eos2.cv
    num = (G1 * C1 * T1 / a1 ** 2 + G1 * eos1.p_inf / a1
           + G2 * C2 * T2 / a2 ** 2 + G2 * eos2.p_inf / a2)
    return num / (G1 / a1 + G2 / a2) + eos2.p_inf


def _trelax_core(U, eos1, eos2, tol, max_iter):
    """One temperature-relaxation solve of the implicit midpoint system."""
    U = np.array(U, dtype=float, copy=True)
    a1, a2, m1, m2, rho, kinetic = _split(U, eos1, eos2)
    skip = np.minimum(a1, a2) <= SKIP_ALPHA

    rho1 = m1 / a1
    rho2 = m2 / a2
    e1 = U[IE1] / m1
    e2 = U[IE2] / m2
    T10 = (e1 - eos1.q - eos1.p_inf / rho1) / eos1.cv
    T20 = (e2 - eos2.q - eos2.p_inf / rho2) / eos2.cv

    C1 = m1 * eos1.cv
    C2 = m2 * eos2.cv
    B1 = eos1.p_inf - eos2.p_inf

    Tp = (C1 * T10 + C2 * T20) / (C1 + C2)
    a2p = a2.copy()
    iterations = 0
    residual = np.inf
    for iterations in range(1, max_iter + 1):
        T1av = 0.5 * (T10 + Tp)
        T2av = 0.5 * (T20 + Tp)
        a2av = np.clip(0.5 * (a2 + a2p), ALPHA_FLOOR, 1.0 - ALPHA_FLOOR)
        B2 = b2_coefficient(T1av, T2av, a2av, eos1, eos2, m1, m2)
        Tn = (B2 * C1 * T10 + (B1 + B2) * C2 * T20) / (B2 * C1 + (B1 + B2) * C2)
        a2_raw = a2 - C2 * (Tn - T20) / B2
        a2n = np.clip(a2_raw, ALPHA_FLOOR, 1.0 - ALPHA_FLOOR)
        # clipping decouples the volume-fraction change from the common
        # temperature; re-derive the temperature that conserves the mixture
        # internal energy at the clipped fraction (both phases still share it)
        Tn = np.where(a2n != a2_raw,
                      (C1 * T10 + C2 * T20 + B1 * (a2n - a2)) / (C1 + C2),
                      Tn)
        residual = np.max(np.abs(np.where(skip, 0.0, (Tn - Tp) / Tn)), initial=0.0)
        da = np.max(np.abs(np.where(skip, 0.0, a2n - a2p)), initial=0.0)
        Tp, a2p = Tn, a2n
        if residual <= tol and da <= tol:
            break
    # on exhaustion the caller sees the residual in the report and may
    # finish with the exact joint-equilibrium solve

    a1p = 1.0 - a2p
    ie1 = m1 * (eos1.cv * Tp + eos1.q) + eos1.p_inf * a1p
    ie2 = m2 * (eos2.cv * Tp + eos2.q) + eos2.p_inf * a2p

    out = U
    dint = (ie1 + ie2) - (U[IE1] + U[IE2])
    out[ETOT] = np.where(skip, U[ETOT], U[ETOT] + dint)
    out[IE1] = np.where(skip, U[IE1], ie1)
    out[IE2] = np.where(skip, U[IE2], ie2)
    out[ALPHA2] = np.where(skip, U[ALPHA2], a2p)
    report = RelaxationReport(iterations=iterations, residual=float(residual),
                              p_eq=None, T_eq=Tp, alpha2_new=out[ALPHA2])
    return out, report


def pressure_disequilibrium(U, eos1, eos2):
    """max |p1 - p2| / max(|p|, p_scale) over non-degenerate cells."""
    a1, a2, m1, m2, rho, kinetic = _split(U, eos1, eos2)
    skip = np.minimum(a1, a2) <= SKIP_ALPHA
    p1 = (eos1.gamma - 1.0) * (U[IE1] - m1 * eos1.q) / a1 - eos1.gamma * eos1.p_inf
    p2 = (eos2.gamma - 1.0) * (U[IE2] - m2 * eos2.q) / a2 - eos2.gamma * eos2.p_inf
    scale = np.maximum(np.maximum(np.abs(p1), np.abs(p2)), 1e-300)
    rel = np.abs(p1 - p2) / scale
    return float(np.max(np.where(skip, 0.0, rel), initial=0.0))


def _joint_equilibrium(U, eos1, eos2, tol=1e-13, max_iter=80):
    """Exact common-(T, p) state at fixed masses and mixture internal energy.

    The energy closure fixes T as an affine function of alpha2, leaving a
    single monotone scalar equation p1(alpha2) = p2(alpha2) solved by a
    bisection-safeguarded Newton sweep per cell.  Conserves the mixture
    internal energy to round-off by construction.
    """
    U = np.array(U, dtype=float, copy=True)
    a1, a2, m1, m2, rho, kinetic = _split(U, eos1, eos2)
    skip = np.minimum(a1, a2) <= SKIP_ALPHA

    g1, g2 = eos1.gamma, eos2.gamma
    pi1, pi2 = eos1.p_inf, eos2.p_inf
    C1 = m1 * eos1.cv
    C2 = m2 * eos2.cv
    C = C1 + C2
    E0 = U[IE1] + U[IE2] - m1 * eos1.q - m2 * eos2.q

    a, T = _equilibrium_alpha(E0, C1, C2, g1, g2, pi1, pi2,
                              np.clip(a2, ALPHA_FLOOR, 1.0 - ALPHA_FLOOR),
                              ~skip, tol=tol, max_iter=max_iter)

    ie1 = C1 * T + m1 * eos1.q + pi1 * (1.0 - a)
    ie2 = C2 * T + m2 * eos2.q + pi2 * a
    out = U
    out[IE1] = np.where(skip, U[IE1], ie1)
    out[IE2] = np.where(skip, U[IE2], ie2)
    out[ALPHA2] = np.where(skip, U[ALPHA2], a)
    return out


def _diseq_mask(U, eos1, eos2, t_tol, p_tol, skip):
    """Cells whose phase pressures or temperatures still disagree.

    `skip` must be derived from the pre-relaxation state: the fixed-point
    core can clip a volume fraction down to the floor, and such a cell
    must stay eligible for the exact finishing solve.
    """
    a1, a2, m1, m2, rho, kinetic = _split(U, eos1, eos2)
    p1 = (eos1.gamma - 1.0) * (U[IE1] - m1 * eos1.q) / a1 - eos1.gamma * eos1.p_inf
    p2 = (eos2.gamma - 1.0) * (U[IE2] - m2 * eos2.q) / a2 - eos2.gamma * eos2.p_inf
    T1 = (U[IE1] / m1 - eos1.q - eos1.p_inf * a1 / m1) / eos1.cv
    T2 = (U[IE2] / m2 - eos2.q - eos2.p_inf * a2 / m2) / eos2.cv
    p_scale = np.maximum(np.maximum(np.abs(p1), np.abs(p2)), 1e-300)
    T_scale = np.maximum(np.maximum(np.abs(T1), np.abs(T2)), 1e-300)
    bad = (np.abs(p1 - p2) / p_scale > p_tol) | (np.abs(T1 - T2) / T_scale > t_tol)
    return bad & ~skip


def relax_temperature(U, eos1, eos2, tol=1e-10, max_iter=100, p_tol=1e-9):
    """Equalize phase temperatures with the coupled volume-fraction change.

    First pass: the implicit midpoint system solved by fixed-point
    iteration; its final iterate uses one common B2 in both equations,
    which conserves the mixture internal energy to round-off.  The
    midpoint linearization lets the pressure equilibrium drift (badly so
    for large temperature jumps), so cells still out of mechanical
    equilibrium afterwards are finished with an exact Newton solve of the
    joint (T, alpha2) equilibrium, which is the state the relaxation pair
    converges to and conserves energy identically.
    """
    out, report = _trelax_core(U, eos1, eos2, tol, max_iter)
    if report.residual > tol or pressure_disequilibrium(out, eos1, eos2) > p_tol:
        # finish only the offending cells: the exact solve sweeps Newton
        # iterations over whole arrays, so compress to the violating subset.
        # Eligibility comes from the input state — a fraction the core
        # clipped to the floor is a failed solve, not a pure cell
        a2c = clip_alpha(np.asarray(U[ALPHA2], dtype=float))
        skip0 = np.minimum(1.0 - a2c, a2c) <= SKIP_ALPHA
        mask = _diseq_mask(out, eos1, eos2, tol, p_tol, skip0)
        if np.any(mask):
            sub = _joint_equilibrium(np.asarray(U, dtype=float)[:, mask],
                                     eos1, eos2)
            out[:, mask] = sub
            report.alpha2_new = out[ALPHA2]
    return out, report
