"""Built-in experiment setups and the operator-split time stepping driver.

Each builder returns a (grid, config) pair with every number materialized;
`advance` sequences the solver stages for one time step and `simulate`
runs a case to its end time.  Initial regions are specified by pressure,
temperature and volume fraction; phase densities follow from the EOS, so
every case starts in exact mechanical and thermal equilibrium.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import eos as eos_mod
from .diffusion import (DiffusionDiagnostics, LaserSource, PlasmaParams,
                        TransportModel, conduction_step, spitzer_harm_lambda,
                        viscous_step)
from .eos import StiffenedGasEos
from .hyperbolic import (FluxDiagnostics, Limiter, MINMOD, OVERBEE,
                         cfl_dt, hyperbolic_step)
from .relaxation import relax_pressure, relax_temperature
from .state import (ALPHA2, ALPHA_FLOOR, ETOT, M1, M2,
                    Grid, PERIODIC, PrimitiveState, TRANSMISSIVE,
                    to_conserved)


@dataclass(frozen=True)
class StageToggles:
    viscous: bool = True
    pressure_relax: bool = True
    temperature_relax: bool = True
    conduction: bool = True


@dataclass
class CaseConfig:
    name: str
    nx: int
    end_time: float
    eos1: StiffenedGasEos
    eos2: StiffenedGasEos
    ny: int = 1
    x_extent: tuple = (0.0, 1.0)
    y_extent: tuple = (0.0, 1.0)
    bc_x: tuple = (TRANSMISSIVE, TRANSMISSIVE)
    bc_y: tuple = (TRANSMISSIVE, TRANSMISSIVE)
    transport: TransportModel = field(default_factory=TransportModel)
    source: LaserSource | None = None
    limiter: Limiter = field(default_factory=lambda: Limiter(MINMOD, MINMOD))
    cfl: float = 0.5
    stages: StageToggles = field(default_factory=StageToggles)
    units: str = "SI"


@dataclass
class RunDiagnostics:
    flux: FluxDiagnostics = field(default_factory=FluxDiagnostics)
    diffusion: DiffusionDiagnostics = field(default_factory=DiffusionDiagnostics)
    relax_iterations: int = 0
    steps: int = 0

    @property
    def boundary_flux(self):
        return self.flux.boundary_flux + self.diffusion.boundary_flux

    @property
    def source_energy(self):
        return self.diffusion.source_energy


def advance(grid: Grid, config: CaseConfig, dt: float, step_index: int = 0,
            diagnostics: RunDiagnostics | None = None) -> Grid:
    """One full operator-split step: hyperbolic transport, viscosity,
    pressure relaxation, temperature relaxation, heat conduction."""
    st = config.stages
    fdiag = diagnostics.flux if diagnostics is not None else None
    ddiag = diagnostics.diffusion if diagnostics is not None else None

    hyperbolic_step(grid, dt, config.limiter, step_index, fdiag)
    if st.viscous and config.transport.has_viscosity:
        viscous_step(grid, dt, config.transport, ddiag)
    if st.pressure_relax:
        grid.U, rep = relax_pressure(grid.U, grid.eos1, grid.eos2)
        if diagnostics is not None:
            diagnostics.relax_iterations += rep.iterations
    if st.temperature_relax:
        grid.U, rep = relax_temperature(grid.U, grid.eos1, grid.eos2)
        if diagnostics is not None:
            diagnostics.relax_iterations += rep.iterations
    if st.conduction and (config.transport.has_conduction
                          or config.source is not None):
        conduction_step(grid, dt, config.transport, config.source,
                        diagnostics=ddiag)
    if diagnostics is not None:
        diagnostics.steps += 1
    return grid


def simulate(grid: Grid, config: CaseConfig, end_time: float | None = None,
             callback=None, diagnostics: RunDiagnostics | None = None,
             max_steps: int = 10 ** 7) -> Grid:
    """Run the split driver to end_time with CFL-controlled steps.

    `callback(grid, t, step)` fires after every completed step.
    """
    t_end = config.end_time if end_time is None else end_time
    t = 0.0
    for step in range(max_steps):
        if t >= t_end * (1.0 - 1e-14):
            break
        dt = min(cfl_dt(grid, config.cfl), t_end - t)
        advance(grid, config, dt, step, diagnostics)
        t += dt
        if callback is not None:
            callback(grid, t, step)
    else:
        raise RuntimeError(f"step budget exhausted before t={t_end}")
    return grid


# ---------------------------------------------------------------------------
# initial-state helpers

def _grid_from_primitive(P: PrimitiveState, config: CaseConfig) -> Grid:
    U = to_conserved(P, config.eos1, config.eos2)
    dx = (config.x_extent[1] - config.x_extent[0]) / config.nx
    dy = 0.0
    if config.ny > 1:
        dy = (config.y_extent[1] - config.y_extent[0]) / config.ny
    return Grid(U=U, dx=dx, dy=dy, x0=config.x_extent[0], y0=config.y_extent[0],
                bc_x=config.bc_x, bc_y=config.bc_y,
                eos1=config.eos1, eos2=config.eos2)


def _equilibrium_primitive(p, T, alpha2, u, v, eos1, eos2) -> PrimitiveState:
    """Both phases at common (p, T): densities from the EOS inversions."""
    p = np.asarray(p, dtype=float)
    T = np.asarray(T, dtype=float)
    z = np.zeros_like(p)
    return PrimitiveState(
        rho1=eos_mod.density_from_p_T(eos1, p, T),
        rho2=eos_mod.density_from_p_T(eos2, p, T),
        p1=p.copy(), p2=p.copy(), T1=T.copy(), T2=T.copy(),
        alpha2=np.broadcast_to(np.asarray(alpha2, dtype=float), p.shape).copy(),
        u=np.broadcast_to(np.asarray(u, dtype=float), p.shape).copy(),
        v=z + v)


def cell_centers(n, lo, hi):
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


# ---------------------------------------------------------------------------
# case builders

PURE1 = ALPHA_FLOOR          # alpha2 at the floor: phase 1 fills the cell
PURE2 = 1.0 - ALPHA_FLOOR

WATER = StiffenedGasEos(gamma=4.4, p_inf=6.0e8, cv=1606.0)
AIR = StiffenedGasEos(gamma=1.4, p_inf=0.0, cv=714.0)


def _build_pvt_translation(config: CaseConfig):
    x = cell_centers(config.nx, *config.x_extent)
    p = np.full_like(x, 1.0e5)
    T = np.full_like(x, 300.0)
    a2 = np.where(x < 0.2, PURE1, PURE2)
    P = _equilibrium_primitive(p, T, a2, 1000.0, 0.0, config.eos1, config.eos2)
    return _grid_from_primitive(P, config)


def _build_shock_tube(config: CaseConfig):
    x = cell_centers(config.nx, *config.x_extent)
    left = x < 0.7
    p = np.where(left, 1.0e9, 1.0e5)
    T = np.where(left, 293.02, 7.02)
    a2 = np.where(left, PURE1, PURE2)
    P = _equilibrium_primitive(p, T, a2, 0.0, 0.0, config.eos1, config.eos2)
    return _grid_from_primitive(P, config)


def _build_water_gas_mixture(config: CaseConfig):
    x = cell_centers(config.nx, *config.x_extent)
    left = x < 0.5
    p = np.where(left, 1.0e9, 1.0e5)
    T = np.where(left, 1000.0, 300.0)
    P = _equilibrium_primitive(p, T, 0.5, 0.0, 0.0, config.eos1, config.eos2)
    return _grid_from_primitive(P, config)


def _build_gaussian_advection(config: CaseConfig):
    x = cell_centers(config.nx, *config.x_extent)
    p = np.full_like(x, 1.0e5)
    T = np.full_like(x, 300.0)
    a2 = 0.2 + 0.6 * np.exp(-((x - 0.5) / 0.1) ** 2)
    P = _equilibrium_primitive(p, T, a2, 100.0, 0.0, config.eos1, config.eos2)
    return _grid_from_primitive(P, config)


def _build_alloy_impact(config: CaseConfig, u_impact: float = 1200.0):
    x = cell_centers(config.nx, *config.x_extent)
    rho1 = np.full_like(x, 1185.0)
    rho2 = np.full_like(x, 3622.0)
    p = np.full_like(x, 1.0e5)
    T1 = eos_mod.temperature_from_rho_p(config.eos1, rho1, p)
    T2 = eos_mod.temperature_from_rho_p(config.eos2, rho2, p)
    # nominal alloy volume fractions (0.595/0.415) renormalized to sum to one
    a2 = np.full_like(x, 0.415 / (0.595 + 0.415))
    u = np.where(x < 0.5, u_impact, 0.0)
    P = PrimitiveState(rho1=rho1, rho2=rho2, p1=p, p2=p.copy(), T1=T1, T2=T2,
                       alpha2=a2, u=u, v=np.zeros_like(x))
    return _grid_from_primitive(P, config)


# ablation geometry (cm-g-us units)
ABL_L = 0.1
ABL_CH1 = StiffenedGasEos(gamma=1.666, p_inf=0.0, cv=86.27)
ABL_CH2 = StiffenedGasEos(gamma=1.220, p_inf=0.0, cv=76.27)
ABL_RHO1 = 1.0
ABL_RHO2 = 0.8
ABL_RHO_VAC = 8.0e-6
ABL_T0 = 3.0e-4
ABL_SMOOTH_WIDTH = 0.01 * ABL_L  # x_RR - x_R


def _smoothing_scale():
    # exponential decay reaching the vacuum density over the smoothing band
    return ABL_SMOOTH_WIDTH / math.log(ABL_RHO2 / ABL_RHO_VAC)


def _ablation_primitive(x, x_left_edge, x_interface, x_surface,
                        eos1, eos2, smooth_left: bool):
    """Density/pressure layout of a CH target at uniform temperature.

    x_surface may vary per row (2D perturbation); broadcasting over the
    trailing y axis handles both cases.
    """
    ell = _smoothing_scale()
    xs = x if np.ndim(x_surface) == 0 else x[:, None]
    in_ch1 = (xs >= x_left_edge) & (xs < x_interface)
    in_ch2 = (xs >= x_interface) & (xs <= x_surface)
    decay = ABL_RHO2 * np.exp(-np.maximum(xs - x_surface, 0.0) / ell)
    rho2 = np.where(in_ch2, ABL_RHO2, np.maximum(decay, ABL_RHO_VAC))
    if smooth_left:
        left_vac = xs < x_left_edge
        decay_l = ABL_RHO1 * np.exp(-np.maximum(x_left_edge - xs, 0.0) / ell)
        rho2 = np.where(left_vac, np.maximum(decay_l, ABL_RHO_VAC), rho2)
    shape = np.broadcast(xs, x_surface).shape
    T = np.full(shape, ABL_T0)
    a2 = np.where(in_ch1, PURE1, PURE2)
    # majority-phase density fixes the pressure; minority follows from (p, T)
    rho_major = np.where(in_ch1, ABL_RHO1, np.broadcast_to(rho2, shape))
    gma = np.where(in_ch1, eos1.gamma, eos2.gamma)
    cv = np.where(in_ch1, eos1.cv, eos2.cv)
    p = (gma - 1.0) * rho_major * cv * T
    rho1 = np.where(in_ch1, ABL_RHO1,
                    eos_mod.density_from_p_T(eos1, p, T))
    rho2_full = np.where(in_ch1, eos_mod.density_from_p_T(eos2, p, T),
                         np.broadcast_to(rho2, shape))
    z = np.zeros(shape)
    return PrimitiveState(rho1=rho1, rho2=rho2_full, p1=p, p2=p.copy(),
                          T1=T, T2=T.copy(), alpha2=a2 + z, u=z, v=z.copy())


def _build_laser_ablation_1d(config: CaseConfig):
    x = cell_centers(config.nx, *config.x_extent)
    P = _ablation_primitive(x, 0.0, 0.45 * ABL_L, 0.50 * ABL_L,
                            config.eos1, config.eos2, smooth_left=False)
    return _grid_from_primitive(P, config)


def _build_ablation_rt_2d(config: CaseConfig):
    x = cell_centers(config.nx, *config.x_extent)
    y = cell_centers(config.ny, *config.y_extent)
    Ly = config.y_extent[1] - config.y_extent[0]
    Am = 0.02 * Ly
    x_surface = 0.70 * ABL_L - Am * np.cos(2.0 * np.pi * y / Ly)
    P = _ablation_primitive(x, 0.50 * ABL_L, 0.65 * ABL_L, x_surface[None, :],
                            config.eos1, config.eos2, smooth_left=True)
    return _grid_from_primitive(P, config)


ABL_RHO_COND_CUT = 1.0e-2  # conductivity ramps out below this density


def _ablation_transport():
    plasma = PlasmaParams()

    def lam(T, rho):
        # the conductivity model describes a collisional plasma; ramp it
        # out in the numerical vacuum where no material is present.  The
        # linear ramp also bounds the cell heating rate lam/(rho*cv*h^2),
        # which otherwise diverges as rho -> 0 and makes the Chebyshev
        # stage count explode
        ramp = np.minimum(np.asarray(rho, dtype=float) / ABL_RHO_COND_CUT, 1.0)
        return spitzer_harm_lambda(T, rho, plasma) * ramp

    return TransportModel(lam1=lam, lam2=lam)


_CASES = {}


def _register(name, builder, **defaults):
    _CASES[name] = (builder, defaults)


_register("pvt_translation", _build_pvt_translation,
          nx=100, end_time=5.0e-4,
          eos1=StiffenedGasEos(gamma=4.4, p_inf=6.0e8, cv=500.0),
          eos2=StiffenedGasEos(gamma=1.4, p_inf=0.0, cv=200.0))
_register("shock_tube", _build_shock_tube,
          nx=1000, end_time=2.0e-4, eos1=WATER, eos2=AIR)
_register("water_gas_mixture", _build_water_gas_mixture,
          nx=1000, end_time=2.0e-4, eos1=WATER, eos2=AIR,
          transport=TransportModel(lam1=1.0e5, lam2=1.0e7))
_register("gaussian_advection", _build_gaussian_advection,
          nx=100, end_time=1.0e-2, eos1=WATER, eos2=AIR,
          bc_x=(PERIODIC, PERIODIC),
          limiter=Limiter(MINMOD, MINMOD))
_register("alloy_impact", _build_alloy_impact,
          nx=400, end_time=5.0e-5,
          eos1=StiffenedGasEos(gamma=2.94, p_inf=3.20e9, cv=1000.0),
          eos2=StiffenedGasEos(gamma=1.62, p_inf=1.41e11, cv=800.0),
          stages=StageToggles(temperature_relax=False))
_register("laser_ablation_1d", _build_laser_ablation_1d,
          nx=1200, end_time=6.0e-3, eos1=ABL_CH1, eos2=ABL_CH2,
          x_extent=(0.0, ABL_L), units="cgs-us",
          limiter=Limiter(OVERBEE, MINMOD),
          source=LaserSource(intensity=1.0e3, absorption_depth=2.0e-3,
                             rho_crt=0.39))
_register("ablation_rt_2d", _build_ablation_rt_2d,
          nx=120, ny=60, end_time=6.0e-3, eos1=ABL_CH1, eos2=ABL_CH2,
          x_extent=(0.0, ABL_L), y_extent=(0.0, 0.5 * ABL_L),
          bc_y=(PERIODIC, PERIODIC), units="cgs-us",
          limiter=Limiter(OVERBEE, MINMOD),
          source=LaserSource(intensity=1.0e3, absorption_depth=2.0e-3,
                             rho_crt=0.39))


def case_names():
    return sorted(_CASES)


def build_case(name: str, **overrides):
    """Construct (grid, config) for a named experiment.

    Overrides replace CaseConfig fields (nx, end_time, limiter, transport,
    stages, ...).  `u_impact` is forwarded to the alloy builder.
    """
    if name not in _CASES:
        raise KeyError(f"unknown case {name!r}; valid: {', '.join(case_names())}")
    builder, defaults = _CASES[name]
    builder_kwargs = {}
    if "u_impact" in overrides:
        builder_kwargs["u_impact"] = overrides.pop("u_impact")
    fields = dict(defaults)
    if name in ("laser_ablation_1d", "ablation_rt_2d"):
        fields.setdefault("transport", _ablation_transport())
    fields.update(overrides)
    config = CaseConfig(name=name, **fields)
    grid = builder(config, **builder_kwargs)
    return grid, config


# ---------------------------------------------------------------------------
# alloy impact sweep

def _track_shock(grid: Grid, x_front: float = 0.5, rel_jump: float = 0.02):
    """Position of the right-running shock front from the density jump."""
    P = grid.primitive()
    rho = P.rho
    rho0 = rho[-1]
    right = grid.x > x_front
    shocked = right & (rho > rho0 * (1.0 + rel_jump))
    if not np.any(shocked):
        return None
    return float(grid.x[np.argwhere(shocked).max()])


def alloy_sweep(velocities, nx: int = 400, end_time: float = 4.0e-5,
                **overrides):
    """Shock speed S versus impact velocity for the alloy case.

    Runs each impact without temperature relaxation, tracks the right
    shock front by density jump and fits its trajectory by least squares.
    Returns a list of (u_impact, S) pairs.
    """
    table = []
    for u in velocities:
        if u <= 0.0:
            raise ValueError("impact velocities must be positive")
        grid, config = build_case("alloy_impact", nx=nx, end_time=end_time,
                                  u_impact=float(u), **overrides)
        times, positions = [], []

        def record(g, t, step, times=times, positions=positions):
            if step % 5 == 0:
                pos = _track_shock(g)
                if pos is not None:
                    times.append(t)
                    positions.append(pos)

        simulate(grid, config, callback=record)
        if len(times) < 4:
            raise RuntimeError(f"shock not detected for u_impact={u}")
        # skip the formation transient: fit the later two thirds
        skip = len(times) // 3
        t_arr = np.asarray(times[skip:])
        x_arr = np.asarray(positions[skip:])
        S = float(np.polyfit(t_arr, x_arr, 1)[0])
        table.append((float(u), S))
    return table
