"""Exact Riemann solver: classical values, wave structure, jump conditions."""

import numpy as np
import pytest

from twophase.eos import StiffenedGasEos
from twophase.riemann_exact import (RAREFACTION, SHOCK, SideState,
                                    VacuumError, exact_riemann,
                                    write_solution_csv)

G14 = StiffenedGasEos(gamma=1.4, p_inf=0.0, cv=714.0)
WATER = StiffenedGasEos(gamma=4.4, p_inf=6.0e8, cv=1606.0)


def test_identical_states_no_waves():
    s = SideState(rho=1.0, u=3.0, p=2.0, eos=G14)
    sol = exact_riemann(s, s)
    assert sol.p_star == pytest.approx(2.0, rel=1e-10)
    assert sol.u_star == pytest.approx(3.0, rel=1e-10)
    rho, u, p = sol.sample(np.array([2.0, 3.0, 4.0]))
    assert np.allclose(rho, 1.0) and np.allclose(u, 3.0) and np.allclose(p, 2.0)


def test_sod_star_values():
    """Classical Sod tube: p* ~ 0.30313, u* ~ 0.92745."""
    left = SideState(rho=1.0, u=0.0, p=1.0, eos=G14)
    right = SideState(rho=0.125, u=0.0, p=0.1, eos=G14)
    sol = exact_riemann(left, right)
    assert sol.p_star == pytest.approx(0.30313, abs=5e-6)
    assert sol.u_star == pytest.approx(0.92745, abs=5e-6)
    assert sol.left_wave == RAREFACTION
    assert sol.right_wave == SHOCK
    assert sol.rho_star_left == pytest.approx(0.42632, abs=5e-5)
    assert sol.rho_star_right == pytest.approx(0.26557, abs=5e-5)


def test_symmetric_collision_is_stationary():
    left = SideState(rho=1.0, u=1.0, p=1.0, eos=G14)
    right = SideState(rho=1.0, u=-1.0, p=1.0, eos=G14)
    sol = exact_riemann(left, right)
    assert sol.u_star == pytest.approx(0.0, abs=1e-12)
    assert sol.left_wave == SHOCK and sol.right_wave == SHOCK
    assert sol.rho_star_left == pytest.approx(sol.rho_star_right, rel=1e-10)


def test_water_air_tube_pattern():
    """High-pressure water into low-pressure air: rarefaction / contact / shock."""
    left = SideState(rho=1000.0, u=0.0, p=1.0e9, eos=WATER)
    right = SideState(rho=50.0, u=0.0, p=1.0e5, eos=G14)
    sol = exact_riemann(left, right)
    assert sol.left_wave == RAREFACTION
    assert sol.right_wave == SHOCK
    assert sol.u_star > 0.0
    head_l, tail_l, contact, tail_r, head_r = sol.wave_speeds()
    assert head_l < tail_l < contact < head_r
    assert contact == pytest.approx(sol.u_star)


def test_rankine_hugoniot_across_shock():
    """Mass and momentum jump conditions hold across the sampled shock."""
    left = SideState(rho=1.0, u=0.0, p=1.0, eos=G14)
    right = SideState(rho=0.125, u=0.0, p=0.1, eos=G14)
    sol = exact_riemann(left, right)
    S = sol.wave_speeds()[-1]
    r0, u0, p0 = right.rho, right.u, right.p
    r1, u1, p1 = sol.rho_star_right, sol.u_star, sol.p_star
    mass = r1 * (u1 - S) - r0 * (u0 - S)
    mom = (r1 * (u1 - S) * u1 + p1) - (r0 * (u0 - S) * u0 + p0)
    assert mass == pytest.approx(0.0, abs=1e-10)
    assert mom == pytest.approx(0.0, abs=1e-10)


def test_isentropic_rarefaction():
    left = SideState(rho=1.0, u=0.0, p=1.0, eos=G14)
    right = SideState(rho=0.125, u=0.0, p=0.1, eos=G14)
    sol = exact_riemann(left, right)
    # entropy function p / rho^gamma constant through the left fan
    head_l, tail_l, *_ = sol.wave_speeds()
    xi = np.linspace(head_l + 1e-6, tail_l - 1e-6, 50)
    rho, u, p = sol.sample(xi)
    K = p / rho ** G14.gamma
    assert np.allclose(K, K[0], rtol=1e-10)


def test_self_similarity():
    left = SideState(rho=1000.0, u=0.0, p=1.0e9, eos=WATER)
    right = SideState(rho=1.0, u=0.0, p=1.0e5, eos=G14)
    sol = exact_riemann(left, right)
    xi = np.linspace(-3000.0, 3000.0, 101)
    a = sol.sample(xi)
    b = sol.sample(xi)  # sampling is a pure function of x/t
    for fa, fb in zip(a, b):
        assert np.array_equal(fa, fb)


def test_vacuum_detection():
    left = SideState(rho=1.0, u=-2000.0, p=1.0e3, eos=G14)
    right = SideState(rho=1.0, u=2000.0, p=1.0e3, eos=G14)
    with pytest.raises(VacuumError):
        exact_riemann(left, right)


def test_solution_csv(tmp_path):
    left = SideState(rho=1.0, u=0.0, p=1.0, eos=G14)
    right = SideState(rho=0.125, u=0.0, p=0.1, eos=G14)
    sol = exact_riemann(left, right)
    path = tmp_path / "exact.csv"
    x = np.linspace(0.0, 1.0, 101)
    write_solution_csv(sol, x, t=0.2, path=path, x0=0.5)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "x,rho,u,p,T"
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert data.shape == (101, 5)
    # far fields keep the input states
    assert data[0, 1] == pytest.approx(1.0)
    assert data[-1, 1] == pytest.approx(0.125)
    with pytest.raises(ValueError):
        write_solution_csv(sol, x, t=0.0, path=path)
