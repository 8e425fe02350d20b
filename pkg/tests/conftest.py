"""Shared fixtures and state generators for the test suite."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from twophase.eos import StiffenedGasEos, density_from_p_T
from twophase.state import PrimitiveState, to_conserved

settings.register_profile(
    "suite", deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")

WATER = StiffenedGasEos(gamma=4.4, p_inf=6.0e8, cv=1606.0)
AIR = StiffenedGasEos(gamma=1.4, p_inf=0.0, cv=714.0)


@pytest.fixture
def water():
    return WATER


@pytest.fixture
def air():
    return AIR


def random_disequilibrium_cells(rng, n, eos1=WATER, eos2=AIR,
                                p_range=(2.0e4, 2.0e9), t_range=(20.0, 2000.0),
                                alpha_range=(1.0e-6, 1.0 - 1.0e-6)):
    """Conserved states (8, n) with independent phase pressures/temperatures.

    Phase densities follow from each phase's own (p, T) through the EOS, so
    every cell is admissible but generally far from mechanical or thermal
    equilibrium.
    """
    lo_p, hi_p = np.log(p_range[0]), np.log(p_range[1])
    lo_t, hi_t = np.log(t_range[0]), np.log(t_range[1])
    p1 = np.exp(rng.uniform(lo_p, hi_p, n))
    p2 = np.exp(rng.uniform(lo_p, hi_p, n))
    T1 = np.exp(rng.uniform(lo_t, hi_t, n))
    T2 = np.exp(rng.uniform(lo_t, hi_t, n))
    a2 = rng.uniform(*alpha_range, n)
    u = rng.uniform(-200.0, 200.0, n)
    v = rng.uniform(-200.0, 200.0, n)
    P = PrimitiveState(
        rho1=density_from_p_T(eos1, p1, T1),
        rho2=density_from_p_T(eos2, p2, T2),
        p1=p1, p2=p2, T1=T1, T2=T2, alpha2=a2, u=u, v=v)
    return to_conserved(P, eos1, eos2)


def equilibrium_cells(rng, n, eos1=WATER, eos2=AIR):
    """Cells with both phases at one (p, T): fixed points of relaxation."""
    p = np.exp(rng.uniform(np.log(1.0e5), np.log(1.0e9), n))
    T = rng.uniform(250.0, 1500.0, n)
    a2 = rng.uniform(0.05, 0.95, n)
    P = PrimitiveState(
        rho1=density_from_p_T(eos1, p, T),
        rho2=density_from_p_T(eos2, p, T),
        p1=p, p2=p.copy(), T1=T, T2=T.copy(), alpha2=a2,
        u=rng.uniform(-50.0, 50.0, n), v=np.zeros(n))
    return to_conserved(P, eos1, eos2)
