"""Godunov/HLLC update: limiters, flux consistency, conservation, splitting."""

import numpy as np
import pytest

from twophase import eos as eos_mod
from twophase.hyperbolic import (FIRST_ORDER, FluxDiagnostics, Limiter,
                                 MINMOD, OVERBEE, cfl_dt, godunov_step_1d,
                                 hllc_face, hyperbolic_step, minmod_slope,
                                 reconstruct, slope)
from twophase.state import (ALPHA2, ETOT, M1, M2, MOMX, MOMY, NCOMP,
                            Grid, PrimitiveState, mixture_sound_speed,
                            to_conserved, to_primitive)

from conftest import AIR, WATER, equilibrium_cells


# ---------------------------------------------------------------------------
# reconstruction

def test_minmod_basics():
    assert minmod_slope(np.array([1.0]), np.array([2.0]))[0] == 1.0
    assert minmod_slope(np.array([-3.0]), np.array([-1.0]))[0] == -1.0
    assert minmod_slope(np.array([1.0]), np.array([-1.0]))[0] == 0.0


def test_reconstruct_constant_and_monotone():
    lo, hi = reconstruct(np.array([2.0, 2.0, 2.0]), MINMOD)
    assert lo[0] == 2.0 and hi[0] == 2.0
    lo, hi = reconstruct(np.array([1.0, 2.0, 3.0]), MINMOD)
    assert lo[0] == pytest.approx(1.5) and hi[0] == pytest.approx(2.5)
    lo, hi = reconstruct(np.array([1.0, 2.0, 3.0]), FIRST_ORDER)
    assert lo[0] == 2.0 and hi[0] == 2.0


def test_overbee_doubles_minmod():
    rng = np.random.default_rng(2)
    w = rng.uniform(-1.0, 1.0, (50, 3))
    mid = w[:, 1:2]
    lo_m, hi_m = reconstruct(w, MINMOD)
    lo_o, hi_o = reconstruct(w, OVERBEE)
    assert np.allclose(hi_o - mid, 2.0 * (hi_m - mid))
    assert np.allclose(mid - lo_o, 2.0 * (mid - lo_m))


def test_reconstruction_homogeneity():
    """Rec(beta P) = beta Rec(P) for beta > 0, all limiter kinds."""
    rng = np.random.default_rng(13)
    w = rng.uniform(-5.0, 5.0, (200, 3))
    for kind in (FIRST_ORDER, MINMOD, OVERBEE):
        lo, hi = reconstruct(w, kind)
        for beta in (0.5, 3.0, 1e6):
            lo_b, hi_b = reconstruct(beta * w, kind)
            assert np.allclose(lo_b, beta * lo, rtol=1e-13)
            assert np.allclose(hi_b, beta * hi, rtol=1e-13)


def test_unknown_limiter_rejected():
    with pytest.raises(ValueError):
        slope(np.zeros((1, 3)), "superbee")


# ---------------------------------------------------------------------------
# HLLC faces

def test_hllc_consistency():
    """Equal inputs return the physical flux and the cell velocity."""
    rng = np.random.default_rng(4)
    for _ in range(20):
        U = equilibrium_cells(rng, 1)[:, 0]
        flux, ustar = hllc_face(U, U, WATER, AIR)
        P = to_primitive(U.reshape(NCOMP, 1), WATER, AIR)
        u = float(P.u[0])
        ptot = float(((1.0 - P.alpha2) * P.p1 + P.alpha2 * P.p2)[0])
        expect = u * U.copy()
        expect[MOMX] = U[MOMX] * u + ptot
        expect[ETOT] = (U[ETOT] + ptot) * u
        assert ustar == pytest.approx(u, rel=1e-12, abs=1e-12)
        assert np.allclose(flux, expect, rtol=1e-10, atol=1e-8)


def _uniform_put_interface(n, u, idx):
    """Uniform (p, T, u) with a water/air material interface at cell idx."""
    p = np.full(n, 1.0e5)
    T = np.full(n, 300.0)
    a2 = np.where(np.arange(n) < idx, 1e-8, 1.0 - 1e-8)
    P = PrimitiveState(
        rho1=eos_mod.density_from_p_T(WATER, p, T),
        rho2=eos_mod.density_from_p_T(AIR, p, T),
        p1=p, p2=p.copy(), T1=T, T2=T.copy(), alpha2=a2,
        u=np.full(n, u), v=np.zeros(n))
    return to_conserved(P, WATER, AIR)


def test_isolated_contact_convex_blend():
    """First-order update across a pure contact: U_i' = xi U_{i-1} + (1-xi) U_i."""
    n = 12
    u = 200.0
    U = _uniform_put_interface(n, u, idx=6)
    dx = 0.01
    dt = 1.0e-6
    xi = u * dt / dx
    Unew = godunov_step_1d(U.copy(), dt, dx, WATER, AIR,
                           Limiter(FIRST_ORDER, FIRST_ORDER))
    expect = xi * np.roll(U, 1, axis=-1) + (1.0 - xi) * U
    inner = slice(1, n - 1)
    assert np.allclose(Unew[:, inner], expect[:, inner], rtol=1e-11, atol=1e-11)


def test_uniform_state_is_steady():
    rng = np.random.default_rng(17)
    U = np.repeat(equilibrium_cells(rng, 1), 10, axis=-1)
    Unew = godunov_step_1d(U.copy(), 1e-7, 0.01, WATER, AIR,
                           Limiter(MINMOD, MINMOD))
    assert np.allclose(Unew, U, rtol=1e-13, atol=0.0)


def test_periodic_conservation():
    """Conservative components telescope exactly on a periodic domain."""
    n = 64
    x = (np.arange(n) + 0.5) / n
    p = np.full(n, 1.0e5)
    T = np.full(n, 300.0)
    a2 = 0.2 + 0.6 * np.exp(-((x - 0.5) / 0.1) ** 2)
    P = PrimitiveState(
        rho1=eos_mod.density_from_p_T(WATER, p, T),
        rho2=eos_mod.density_from_p_T(AIR, p, T),
        p1=p, p2=p.copy(), T1=T, T2=T.copy(), alpha2=a2,
        u=np.full(n, 100.0), v=np.zeros(n))
    U = to_conserved(P, WATER, AIR)
    totals0 = U[[M1, M2, MOMX, ETOT]].sum(axis=-1)
    for step in range(20):
        U = godunov_step_1d(U, 2e-6, 1.0 / n, WATER, AIR,
                            Limiter(MINMOD, MINMOD),
                            bc=("periodic", "periodic"))
    totals = U[[M1, M2, MOMX, ETOT]].sum(axis=-1)
    assert np.allclose(totals, totals0, rtol=1e-12)


def test_boundary_flux_budget():
    """Interior change equals the recorded boundary fluxes (open ends)."""
    n = 50
    left = np.arange(n) < n // 2
    p = np.where(left, 1.0e7, 1.0e5)
    T = np.full(n, 300.0)
    P = PrimitiveState(
        rho1=eos_mod.density_from_p_T(WATER, p, T),
        rho2=eos_mod.density_from_p_T(AIR, p, T),
        p1=p, p2=p.astype(float), T1=T, T2=T.copy(),
        alpha2=np.full(n, 0.5), u=np.zeros(n), v=np.zeros(n))
    U = to_conserved(P, WATER, AIR)
    diag = FluxDiagnostics()
    totals0 = U.sum(axis=-1)
    dx = 1.0 / n
    for step in range(10):
        U = godunov_step_1d(U, 1e-7, dx, WATER, AIR,
                            Limiter(MINMOD, MINMOD), diagnostics=diag)
    drift = (U.sum(axis=-1) - totals0) * dx - diag.boundary_flux
    for k in (M1, M2, MOMX, ETOT):
        assert abs(drift[k]) <= 1e-10 * max(abs(totals0[k] * dx), 1.0)


# ---------------------------------------------------------------------------
# CFL

def test_cfl_dt_scaling():
    rng = np.random.default_rng(23)
    U = equilibrium_cells(rng, 1)
    grid = Grid(U=U, dx=1.0, eos1=WATER, eos2=AIR)
    P = to_primitive(U, WATER, AIR)
    c = float(mixture_sound_speed(P, WATER, AIR)[0])
    u = float(abs(P.u[0]))
    assert cfl_dt(grid, 0.5) == pytest.approx(0.5 / (u + c), rel=1e-12)
    half = Grid(U=U, dx=0.5, eos1=WATER, eos2=AIR)
    assert cfl_dt(half, 0.5) == pytest.approx(0.5 * cfl_dt(grid, 0.5), rel=1e-12)
    with pytest.raises(ValueError):
        cfl_dt(grid, 0.0)


# ---------------------------------------------------------------------------
# 2D splitting

def _gaussian_column_state(n, m, axis):
    """Smooth alpha2 bump varying along one axis, advected along it."""
    coord = (np.arange(n) + 0.5) / n
    a2_1d = 0.2 + 0.5 * np.exp(-((coord - 0.5) / 0.12) ** 2)
    shape = (n, m) if axis == 0 else (m, n)
    a2 = a2_1d[:, None] * np.ones(shape) if axis == 0 else a2_1d[None, :] * np.ones(shape)
    p = np.full(shape, 1.0e5)
    T = np.full(shape, 300.0)
    vel = np.full(shape, 80.0)
    zero = np.zeros(shape)
    P = PrimitiveState(
        rho1=eos_mod.density_from_p_T(WATER, p, T),
        rho2=eos_mod.density_from_p_T(AIR, p, T),
        p1=p, p2=p.copy(), T1=T, T2=T.copy(), alpha2=a2,
        u=vel if axis == 0 else zero, v=zero if axis == 0 else vel)
    return to_conserved(P, WATER, AIR)


def test_y_invariant_matches_1d():
    n, m = 32, 6
    U2 = _gaussian_column_state(n, m, axis=0)
    grid = Grid(U=U2, dx=1.0 / n, dy=1.0 / m, bc_x=("periodic", "periodic"),
                bc_y=("periodic", "periodic"), eos1=WATER, eos2=AIR)
    dt = 2e-6
    hyperbolic_step(grid, dt, Limiter(MINMOD, MINMOD), step_index=0)
    U1 = _gaussian_column_state(n, 1, axis=0)[:, :, 0]
    U1 = godunov_step_1d(U1, dt, 1.0 / n, WATER, AIR, Limiter(MINMOD, MINMOD),
                         bc=("periodic", "periodic"))
    for j in range(m):
        assert np.allclose(grid.U[:, :, j], U1, rtol=1e-13, atol=1e-20)


def test_rotated_data_rotates_solution():
    """x-aligned and y-aligned advection agree after a two-step cycle."""
    n, m = 24, 24
    dt = 2e-6
    swap = np.arange(NCOMP)
    swap[MOMX], swap[MOMY] = MOMY, MOMX
    gx = Grid(U=_gaussian_column_state(n, m, axis=0), dx=1.0 / n, dy=1.0 / m,
              bc_x=("periodic", "periodic"), bc_y=("periodic", "periodic"),
              eos1=WATER, eos2=AIR)
    gy = Grid(U=_gaussian_column_state(n, m, axis=1), dx=1.0 / n, dy=1.0 / m,
              bc_x=("periodic", "periodic"), bc_y=("periodic", "periodic"),
              eos1=WATER, eos2=AIR)
    for step in (0, 1):
        hyperbolic_step(gx, dt, Limiter(MINMOD, MINMOD), step_index=step)
        hyperbolic_step(gy, dt, Limiter(MINMOD, MINMOD), step_index=step)
    rotated_back = np.swapaxes(gy.U[swap], 1, 2)
    for k in range(NCOMP):
        ref = np.max(np.abs(gx.U[k]))
        assert np.max(np.abs(gx.U[k] - rotated_back[k])) <= 1e-10 * max(ref, 1.0)


def test_mirror_symmetry_is_exact():
    """A y-mirror-symmetric state stays symmetric to the last bit."""
    n, m = 24, 16
    y = (np.arange(m) + 0.5) / m
    bump = 0.3 + 0.2 * np.cos(2.0 * np.pi * y)[None, :]
    bump = 0.5 * (bump + bump[:, ::-1])  # bit-exact mirror-symmetric data
    shape = (n, m)
    x = ((np.arange(n) + 0.5) / n)[:, None]
    p = np.full(shape, 1.0e5) * (1.0 + 0.5 * np.exp(-((x - 0.5) / 0.2) ** 2))
    T = np.full(shape, 300.0)
    P = PrimitiveState(
        rho1=eos_mod.density_from_p_T(WATER, p, T),
        rho2=eos_mod.density_from_p_T(AIR, p, T),
        p1=p, p2=p.copy(), T1=T, T2=T.copy(),
        alpha2=bump * np.ones(shape), u=np.zeros(shape), v=np.zeros(shape))
    grid = Grid(U=to_conserved(P, WATER, AIR), dx=1.0 / n, dy=1.0 / m,
                bc_x=("transmissive", "transmissive"),
                bc_y=("periodic", "periodic"), eos1=WATER, eos2=AIR)
    sgn = np.ones(NCOMP)
    sgn[MOMY] = -1.0  # the normal velocity is odd under the mirror
    for step in range(4):
        dt = cfl_dt(grid, 0.5)
        hyperbolic_step(grid, dt, Limiter(OVERBEE, MINMOD), step_index=step)
        for k in range(NCOMP):
            assert np.array_equal(grid.U[k], sgn[k] * grid.U[k][:, ::-1])
