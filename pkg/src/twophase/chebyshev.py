"""Explicit Chebyshev-scheduled iteration for stiff parabolic operators.

A parabolic step v' = v - tau*A*v + tau*f with a positive-semidefinite
operator A is advanced through 2P-1 damped explicit sub-steps whose
coefficients come from the roots of the degree-P Chebyshev polynomial.
The scheme stays stable for tau far beyond the explicit diffusion limit
(P grows like sqrt(tau*lambda_max)) while each sub-step remains a plain
stencil sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class IterationDivergedError(RuntimeError):
    """Raised when a sub-step produces non-finite values."""


@dataclass(frozen=True)
class ChebyshevSchedule:
    """Coefficient schedule for one parabolic step of length tau.

    P     : half-count; the step runs 2P - 1 sub-iterations
    betas : the P Chebyshev roots cos((2j-1) pi / 2P), sorted increasing
    a     : P damping coefficients, a[0] = 0
    b     : the 2P - 1 scheduled coefficients; b[-1] = 0 so the last
            sub-step is the pure explicit update
    """

    P: int
    betas: np.ndarray
    a: np.ndarray
    b: np.ndarray


def _interleave_descending(values: np.ndarray) -> np.ndarray:
    """Alternate the largest and smallest remaining values.

    The composite stability polynomial is order-independent, but partial
    products are not: a monotone sweep lets intermediate amplification
    reach astronomical factors, so roundoff injected mid-sweep destroys
    the solution once tau*lambda_max is large.  Pairing each strongly
    damped sub-step with a weakly damped one keeps every partial product
    bounded by ~tau*lambda_max (the unavoidable final explicit step).
    """
    arr = np.sort(np.asarray(values, dtype=float))[::-1]
    out = np.empty_like(arr)
    half = (arr.size + 1) // 2
    out[0::2] = arr[:half]
    out[1::2] = arr[arr.size - 1:half - 1:-1]
    return out


def chebyshev_schedule(tau: float, lambda_max: float) -> ChebyshevSchedule:
    """Build the coefficient schedule for step tau and spectral bound lambda_max.

    The damping coefficients measure each root's distance from the largest
    root beta* = cos(pi/2P):  a_m = lambda_max (beta* - beta_{P+1-m}) / (1 + beta*),
    so a_1 = 0 and the stability polynomial stays inside the unit disc on
    [0, lambda_max].  The sweep runs the damped coefficients a_2..a_P
    twice in an interleaved large/small order (for floating-point internal
    stability) and finishes with the undamped explicit step a_1 = 0.
    """
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    if lambda_max < 0.0:
        raise ValueError(f"lambda_max must be non-negative, got {lambda_max}")
    P = max(1, math.ceil(0.25 * math.pi * math.sqrt(tau * lambda_max + 1.0)))
    j = np.arange(1, P + 1)
    betas = np.sort(np.cos((2.0 * j - 1.0) * np.pi / (2.0 * P)))
    beta_star = betas[-1]
    # a[m-1] pairs with the roots in decreasing order: a_1 <- beta*, a_P <- smallest
    a = lambda_max * (beta_star - betas[::-1]) / (1.0 + beta_star)
    a[0] = 0.0
    damped = _interleave_descending(a[1:])
    b = np.concatenate([damped, damped, [0.0]])
    return ChebyshevSchedule(P=P, betas=betas, a=a, b=b)


def lim_solve(field, operator, source, tau: float, lambda_max: float,
              schedule: ChebyshevSchedule | None = None,
              rtol: float = 1e-6, max_cycles: int = 30, start=None):
    """Advance field by one parabolic step of length tau.

    operator(v) must apply a self-adjoint positive-semidefinite stencil A
    (for diffusion: A = -d/dx(k d/dx) discretized) with spectral bound
    lambda_max; the update solved is (1 + tau*A) v' = v + tau*source
    through cycles of the damped sub-steps

        v(m) = (v(0) + tau*b_m*v(m-1) - tau*A*v(m-1) + tau*source) / (1 + tau*b_m).

    The backward-Euler solution is the fixed point of the sub-step with
    b = 0, so repeating the cycle converges to it geometrically; cycles
    stop once the sup-norm change over a cycle falls below rtol relative
    to the field magnitude.

    `start` seeds the sweep (the fixed point does not depend on it); a
    warm start from a nearby solution cuts the cycle count.

    Returns (v_final, v_predictor) where v_predictor is the iterate
    entering the last (pure explicit) sub-step; for P = 1 and a single
    cycle it is the initial field.  Raises IterationDivergedError on
    non-finite values.
    """
    if schedule is None:
        schedule = chebyshev_schedule(tau, lambda_max)
    v0 = np.asarray(field, dtype=float)
    src = np.asarray(source, dtype=float)
    v = v0 if start is None else np.asarray(start, dtype=float)
    prev = v
    for cycle in range(1, max_cycles + 1):
        v_start = v
        for bm in schedule.b:
            prev = v
            v = (v0 + tau * bm * v - tau * operator(v) + tau * src) / (1.0 + tau * bm)
        if not np.all(np.isfinite(v)):
            raise IterationDivergedError(
                f"non-finite values during cycle {cycle}")
        scale = float(np.max(np.abs(v)))
        if float(np.max(np.abs(v - v_start))) <= rtol * max(scale, 1e-300):
            break
    return v, prev
