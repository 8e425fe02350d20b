"""Stiffened-gas equation of state and derived thermodynamic coefficients.

The closure for phase k is

    p = (gamma - 1) rho (e - q) - gamma p_inf
    T = (e - q - p_inf / rho) / cv

which covers ideal gases (p_inf = 0) as well as liquids and solids.
All functions are vectorized over numpy arrays and are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InvalidStateError(ValueError):
    """Raised when a thermodynamic state is outside the admissible region."""


@dataclass(frozen=True)
class StiffenedGasEos:
    """Per-phase stiffened-gas parameters.

    gamma : ratio of specific heats (> 1)
    p_inf : pressure offset, Pa (>= 0)
    cv    : specific heat at constant volume, J/(kg K) (> 0)
    q     : reference specific energy, J/kg
    """

    gamma: float
    p_inf: float = 0.0
    cv: float = 1.0
    q: float = 0.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise InvalidStateError(f"gamma must exceed 1, got {self.gamma}")
        if self.p_inf < 0.0:
            raise InvalidStateError(f"p_inf must be non-negative, got {self.p_inf}")
        if not self.cv > 0.0:
            raise InvalidStateError(f"cv must be positive, got {self.cv}")

    @property
    def gruneisen(self) -> float:
        return self.gamma - 1.0


@dataclass(frozen=True)
class PhaseCoefficients:
    """Derived acoustic/thermodynamic coefficients at a given state."""

    gruneisen: float | np.ndarray
    adiabatic_exponent: float | np.ndarray
    acoustic_impedance_sq: float | np.ndarray  # A = rho a^2 = gamma (p + p_inf)
    sound_speed: float | np.ndarray


def _check_finite(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise InvalidStateError("non-finite input")


def pressure_from_rho_e(eos: StiffenedGasEos, rho, e):
    """p = (gamma - 1) rho (e - q) - gamma p_inf."""
    _check_finite(rho, e)
    if np.any(np.asarray(rho) <= 0.0):
        raise InvalidStateError("density must be positive")
    return (eos.gamma - 1.0) * rho * (e - eos.q) - eos.gamma * eos.p_inf


def internal_energy(eos: StiffenedGasEos, rho, p):
    """Specific internal energy, inverse of pressure_from_rho_e."""
    return (p + eos.gamma * eos.p_inf) / ((eos.gamma - 1.0) * rho) + eos.q


def temperature_from_rho_e(eos: StiffenedGasEos, rho, e):
    """T = (e - q - p_inf / rho) / cv.  Returns (T, valid) with valid = T > 0."""
    _check_finite(rho, e)
    T = (e - eos.q - eos.p_inf / rho) / eos.cv
    return T, np.asarray(T) > 0.0


def temperature_from_rho_p(eos: StiffenedGasEos, rho, p):
    """T = (p + p_inf) / ((gamma - 1) cv rho)."""
    return (p + eos.p_inf) / ((eos.gamma - 1.0) * eos.cv * rho)


def energy_from_rho_T(eos: StiffenedGasEos, rho, T):
    """e = cv T + q + p_inf / rho."""
    return eos.cv * T + eos.q + eos.p_inf / rho


def density_from_p_T(eos: StiffenedGasEos, p, T):
    """rho = (p + p_inf) / ((gamma - 1) cv T)."""
    _check_finite(p, T)
    if np.any(np.asarray(T) <= 0.0):
        raise InvalidStateError("temperature must be positive")
    if np.any(np.asarray(p) + eos.p_inf <= 0.0):
        raise InvalidStateError("p + p_inf must be positive")
    return (p + eos.p_inf) / ((eos.gamma - 1.0) * eos.cv * T)


def sound_speed(eos: StiffenedGasEos, rho, p):
    """a = sqrt(gamma (p + p_inf) / rho)."""
    _check_finite(rho, p)
    radicand = eos.gamma * (p + eos.p_inf) / rho
    if np.any(np.asarray(radicand) <= 0.0):
        raise InvalidStateError("non-positive sound speed radicand")
    return np.sqrt(radicand)


def phase_coefficients(eos: StiffenedGasEos, rho, p) -> PhaseCoefficients:
    """Gruneisen coefficient, adiabatic exponent and acoustic impedance.

    For the stiffened gas: Gamma = gamma - 1, gbar = gamma (p + p_inf) / p,
    A = rho a^2 = gamma (p + p_inf).
    """
    a = sound_speed(eos, rho, p)
    A = eos.gamma * (p + eos.p_inf)
    gbar = A / p
    return PhaseCoefficients(
        gruneisen=eos.gamma - 1.0,
        adiabatic_exponent=gbar,
        acoustic_impedance_sq=A,
        sound_speed=a,
    )


def phase_entropy(eos: StiffenedGasEos, rho, p):
    """s = cv ln[(p + p_inf) / rho^gamma], an antiderivative of the Gibbs relation."""
    _check_finite(rho, p)
    arg = p + eos.p_inf
    if np.any(np.asarray(arg) <= 0.0) or np.any(np.asarray(rho) <= 0.0):
        raise InvalidStateError("inadmissible state for entropy")
    return eos.cv * (np.log(arg) - eos.gamma * np.log(rho))


def is_admissible(eos: StiffenedGasEos, rho, p):
    """Boolean mask: rho > 0, T > 0 and p + p_inf > 0."""
    rho = np.asarray(rho, dtype=float)
    p = np.asarray(p, dtype=float)
    ok = (rho > 0.0) & (p + eos.p_inf > 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        T = temperature_from_rho_p(eos, rho, p)
    return ok & (T > 0.0)
