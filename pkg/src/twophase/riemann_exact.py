"""Exact Riemann solver for two stiffened gases separated by a contact.

A stiffened gas behaves like an ideal gas in the shifted pressure
P = p + p_inf (same gamma), so the classical two-shock/two-rarefaction
pressure-function iteration applies verbatim with each side shifted by
its own p_inf.  Used as ground truth for shock-tube comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eos import StiffenedGasEos


class VacuumError(ValueError):
    """The two states separate and a vacuum region forms: no solution."""


SHOCK = "shock"
RAREFACTION = "rarefaction"


@dataclass(frozen=True)
class SideState:
    rho: float
    u: float
    p: float
    eos: StiffenedGasEos

    @property
    def shifted_p(self):
        return self.p + self.eos.p_inf

    @property
    def a(self):
        return np.sqrt(self.eos.gamma * self.shifted_p / self.rho)


def _f_side(p_star: float, s: SideState):
    """Pressure function f_K(p*) and its derivative for one side."""
    g = s.eos.gamma
    P = s.shifted_p
    Ps = p_star + s.eos.p_inf
    if Ps > P:  # shock branch
        A = 2.0 / ((g + 1.0) * s.rho)
        B = (g - 1.0) / (g + 1.0) * P
        root = np.sqrt(A / (Ps + B))
        f = (Ps - P) * root
        df = root * (1.0 - 0.5 * (Ps - P) / (Ps + B))
    else:  # rarefaction branch
        f = 2.0 * s.a / (g - 1.0) * ((Ps / P) ** ((g - 1.0) / (2.0 * g)) - 1.0)
        df = (Ps / P) ** (-(g + 1.0) / (2.0 * g)) / (s.rho * s.a)
    return f, df


@dataclass(frozen=True)
class RiemannSolution:
    left: SideState
    right: SideState
    p_star: float
    u_star: float
    rho_star_left: float
    rho_star_right: float
    left_wave: str
    right_wave: str

    def wave_speeds(self):
        """(left head, left tail, contact, right tail, right head)."""
        L, R, g_l, g_r = self.left, self.right, self.left.eos.gamma, self.right.eos.gamma
        Ps_l = self.p_star + L.eos.p_inf
        Ps_r = self.p_star + R.eos.p_inf
        if self.left_wave == SHOCK:
            sl = L.u - L.a * np.sqrt((g_l + 1.0) / (2.0 * g_l) * Ps_l / L.shifted_p
                                     + (g_l - 1.0) / (2.0 * g_l))
            head_l = tail_l = sl
        else:
            a_star = L.a * (Ps_l / L.shifted_p) ** ((g_l - 1.0) / (2.0 * g_l))
            head_l = L.u - L.a
            tail_l = self.u_star - a_star
        if self.right_wave == SHOCK:
            sr = R.u + R.a * np.sqrt((g_r + 1.0) / (2.0 * g_r) * Ps_r / R.shifted_p
                                     + (g_r - 1.0) / (2.0 * g_r))
            head_r = tail_r = sr
        else:
            a_star = R.a * (Ps_r / R.shifted_p) ** ((g_r - 1.0) / (2.0 * g_r))
            head_r = R.u + R.a
            tail_r = self.u_star + a_star
        return head_l, tail_l, self.u_star, tail_r, head_r

    def sample(self, xi):
        """Primitive state (rho, u, p) at similarity coordinate xi = x/t."""
        xi = np.asarray(xi, dtype=float)
        rho = np.empty_like(xi)
        u = np.empty_like(xi)
        p = np.empty_like(xi)
        head_l, tail_l, contact, tail_r, head_r = self.wave_speeds()

        for side in ("left", "right"):
            if side == "left":
                s, wave = self.left, self.left_wave
                rho_star = self.rho_star_left
                sel = xi <= contact
                sign = 1.0
                head, tail = head_l, tail_l
            else:
                s, wave = self.right, self.right_wave
                rho_star = self.rho_star_right
                sel = xi > contact
                sign = -1.0
                head, tail = head_r, tail_r
            g = s.eos.gamma
            pinf = s.eos.p_inf
            P = s.shifted_p
            if wave == SHOCK:
                outer = sel & (sign * xi <= sign * head)
                star = sel & ~outer
                fan = np.zeros_like(sel)
            else:
                outer = sel & (sign * xi <= sign * head)
                star = sel & (sign * xi >= sign * tail)
                fan = sel & ~outer & ~star
            rho[outer], u[outer], p[outer] = s.rho, s.u, s.p
            rho[star], u[star], p[star] = rho_star, self.u_star, self.p_star
            if np.any(fan):
                x = xi[fan]
                a_fan = 2.0 / (g + 1.0) * (s.a + sign * (g - 1.0) / 2.0 * (s.u - x))
                u[fan] = 2.0 / (g + 1.0) * (sign * s.a + (g - 1.0) / 2.0 * s.u + x)
                rho[fan] = s.rho * (a_fan / s.a) ** (2.0 / (g - 1.0))
                p[fan] = P * (a_fan / s.a) ** (2.0 * g / (g - 1.0)) - pinf
        return rho, u, p

    def sample_temperature(self, xi):
        """Phase temperature field of the sampled exact solution."""
        rho, _, p = self.sample(xi)
        xi = np.asarray(xi, dtype=float)
        T = np.empty_like(xi)
        left = xi <= self.u_star
        for sel, s in ((left, self.left), (~left, self.right)):
            e = s.eos
            T[sel] = (p[sel] + e.p_inf) / ((e.gamma - 1.0) * e.cv * rho[sel])
        return T


def exact_riemann(left: SideState, right: SideState,
                  tol: float = 1e-12, max_iter: int = 200) -> RiemannSolution:
    """Solve the two-state problem exactly.

    Safeguarded Newton iteration on the pressure function
    f_L(p*) + f_R(p*) + (u_R - u_L) = 0; raises VacuumError when the
    states separate faster than the fans can fill.
    """
    du = right.u - left.u
    gl, gr = left.eos.gamma, right.eos.gamma
    # positivity: combined fan depth must cover the velocity difference
    if 2.0 * left.a / (gl - 1.0) + 2.0 * right.a / (gr - 1.0) <= du:
        raise VacuumError("states separate: vacuum forms between the fans")

    p_floor = -min(left.eos.p_inf, right.eos.p_inf)

    def F(p):
        fl, dfl = _f_side(p, left)
        fr, dfr = _f_side(p, right)
        return fl + fr + du, dfl + dfr

    # bracket: F is monotone increasing in p*
    lo = p_floor + 1e-300 + abs(p_floor) * 1e-14
    hi = max(left.p, right.p, 1.0)
    while F(hi)[0] < 0.0:
        hi = 2.0 * hi + max(1.0, -2.0 * p_floor)
    if F(lo)[0] > 0.0:
        raise VacuumError("pressure function positive at the vacuum floor")

    p = max(0.5 * (left.p + right.p), lo + 0.5 * (hi - lo) * 1e-6)
    if not lo < p < hi:
        p = 0.5 * (lo + hi)
    for _ in range(max_iter):
        val, dval = F(p)
        if val > 0.0:
            hi = p
        else:
            lo = p
        step = val / dval if dval > 0.0 else np.inf
        p_new = p - step
        if not lo < p_new < hi:
            p_new = 0.5 * (lo + hi)
        scale = max(abs(p_new), abs(p), 1e-300)
        if abs(p_new - p) <= tol * scale:
            p = p_new
            break
        p = p_new

    fl, _ = _f_side(p, left)
    fr, _ = _f_side(p, right)
    u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl)

    def star_density(s: SideState):
        g = s.eos.gamma
        P = s.shifted_p
        Ps = p + s.eos.p_inf
        if Ps > P:
            r = Ps / P
            gr_ = (g - 1.0) / (g + 1.0)
            return s.rho * (r + gr_) / (gr_ * r + 1.0), SHOCK
        return s.rho * (Ps / P) ** (1.0 / g), RAREFACTION

    rho_l, wave_l = star_density(left)
    rho_r, wave_r = star_density(right)
    return RiemannSolution(left=left, right=right, p_star=float(p),
                           u_star=float(u_star),
                           rho_star_left=float(rho_l), rho_star_right=float(rho_r),
                           left_wave=wave_l, right_wave=wave_r)


def write_solution_csv(sol: RiemannSolution, x, t: float, path, x0: float = 0.0):
    """Sample the solution at time t over cell centers x and write CSV."""
    x = np.asarray(x, dtype=float)
    if t <= 0.0:
        raise ValueError("sampling time must be positive")
    xi = (x - x0) / t
    rho, u, p = sol.sample(xi)
    T = sol.sample_temperature(xi)
    with open(path, "w") as fh:
        fh.write("x,rho,u,p,T\n")
        for row in zip(x, rho, u, p, T):
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
