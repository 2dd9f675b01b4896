"""First-order finite-volume simulator.

Conserved densities ``U = (D, M, En)`` live on a uniform grid with outflow
(zero-gradient) boundaries.  Two interface fluxes are available:

* ``"godunov"``: the exact Riemann solution sampled at ``x/t = 0``; only
  interfaces in the classical regime are allowed.
* ``"lxf"``: ``0.5 (F_L + F_R) - 0.5 alpha (U_R - U_L)`` with ``alpha`` the
  largest characteristic speed on the grid.  This mode tolerates the mass
  concentration of a delta shock; cells whose primitive recovery fails are
  recorded and use ``v = M/En``, ``p = 0`` in the flux and ``c`` as their
  wave-speed bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigError, RecoveryError, RegimeError
from .riemann import ClassicalFan, RiemannSolution
from .state import ModelParams, PrimitiveState, require_admissible

__all__ = [
    "Grid1D",
    "SimConfig",
    "StepInfo",
    "Snapshot",
    "ConcentrationDiagnostics",
    "RunResult",
    "initial_cells",
    "step",
    "run",
    "exact_cell_averages",
    "l1_error",
    "riemann_initial",
]

FLUXES = ("godunov", "lxf")


@dataclass(frozen=True)
class Grid1D:
    xmin: float
    xmax: float
    ncells: int

    def __post_init__(self):
        if not (math.isfinite(self.xmin) and math.isfinite(self.xmax) and self.xmin < self.xmax):
            raise ConfigError(f"grid needs finite xmin < xmax, got [{self.xmin}, {self.xmax}]")
        if int(self.ncells) != self.ncells or self.ncells < 8:
            raise ConfigError(f"grid needs an integer ncells >= 8, got {self.ncells}")

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / self.ncells

    @property
    def centers(self) -> np.ndarray:
        return self.xmin + (np.arange(self.ncells) + 0.5) * self.dx

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.ncells + 1)


@dataclass(frozen=True)
class SimConfig:
    """Time-stepping controls.

    Parameters
    ----------
    cfl : float
        Courant number in (0, 1).
    t_end : float
        Final time.
    flux : {"godunov", "lxf"}
    snapshot_times : tuple of float
        Extra output times in (0, t_end); ``t_end`` is always a snapshot.
    window_cells : int
        Width, in cells, of the window around the ``En`` maximum used by the
        concentration diagnostics.
    rho_floor, v_floor : float
        A recovered cell only counts as recovered when ``rho - 1/c >= rho_floor``
        and ``1 - |v|/c >= v_floor``.
    """

    cfl: float = 0.9
    t_end: float = 0.5
    flux: str = "godunov"
    snapshot_times: tuple = ()
    window_cells: int = 10
    rho_floor: float = 0.0
    v_floor: float = 0.0

    def __post_init__(self):
        if not 0 < self.cfl < 1:
            raise ConfigError(f"cfl must lie in (0, 1), got {self.cfl}")
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if self.flux not in FLUXES:
            raise ConfigError(f"flux must be one of {FLUXES}, got {self.flux!r}")
        if any(not 0 < t <= self.t_end for t in self.snapshot_times):
            raise ConfigError(f"snapshot times must lie in (0, t_end], got {self.snapshot_times}")
        if self.window_cells < 1:
            raise ConfigError(f"window_cells must be >= 1, got {self.window_cells}")
        if self.rho_floor < 0 or self.v_floor < 0:
            raise ConfigError("recovery floors must be non-negative")

    @property
    def output_times(self) -> tuple:
        return tuple(sorted(set(float(t) for t in self.snapshot_times) | {float(self.t_end)}))


@dataclass(frozen=True)
class StepInfo:
    """Per-step bookkeeping.

    ``boundary_flux`` holds ``dt * (F_left - F_right)`` for the three
    components, i.e. the exact change of ``sum(U) * dx`` the step is allowed
    to make.  ``max_speed`` is the bound used for ``dt`` and ``failed`` the
    indices of cells whose recovery failed (LxF mode only).
    """

    boundary_flux: np.ndarray
    max_speed: float
    failed: np.ndarray


@dataclass(frozen=True)
class Snapshot:
    t: float
    x: np.ndarray
    U: np.ndarray
    n: np.ndarray
    rho: np.ndarray
    v: np.ndarray
    recovered: np.ndarray


@dataclass(frozen=True)
class ConcentrationDiagnostics:
    times: np.ndarray
    spike_position: np.ndarray
    window_mass_En: np.ndarray
    window_mass_D: np.ndarray


@dataclass(frozen=True)
class RunResult:
    snapshots: list
    diagnostics: ConcentrationDiagnostics
    boundary_flux: np.ndarray = field(default_factory=lambda: np.zeros(3))
    steps: int = 0


def initial_cells(initial, grid: Grid1D, params: ModelParams) -> np.ndarray:
    """Conserved cell values from point values of ``initial`` at cell centres."""
    prims = [initial(float(x)) for x in grid.centers]
    for i, s in enumerate(prims):
        require_admissible(s, params, f"initial state in cell {i}")
    n, rho, v = (np.array(col, dtype=float) for col in zip(*(s.as_tuple() for s in prims)))
    return np.vstack(kernels.prim_to_cons(n, rho, v, params.c))


def _recover(U, config: SimConfig, c: float):
    n, rho, v, p, ok = kernels.recover(U[0], U[1], U[2], c)
    ok = ok & (rho - 1.0 / c >= config.rho_floor) & (1.0 - np.abs(v) / c >= config.v_floor)
    return n, rho, v, p, ok


def _wave_speed(rho, v, ok, c):
    with np.errstate(all="ignore"):
        lam1 = (v - 1.0 / rho) / (1.0 - v / (rho * c * c))
        lam3 = (v + 1.0 / rho) / (1.0 + v / (rho * c * c))
    speed = np.maximum(np.abs(lam1), np.abs(lam3))
    return np.where(ok, speed, c)


def _physical_flux(D, M, v, p):
    return np.vstack((D * v, M * v + p, M))


def _pad(a):
    return np.concatenate(([a[0]], a, [a[-1]]))


def step(U, grid: Grid1D, config: SimConfig, params: ModelParams, dt_max: float = math.inf, t: float = 0.0):
    """Advance the cell array ``U`` (shape ``(3, ncells)``) by one step.

    Returns ``(U_new, dt, info)`` with ``dt = min(cfl dx / max|lambda|, dt_max)``.
    """
    c = params.c
    U = np.asarray(U, dtype=float)
    n, rho, v, p, ok = _recover(U, config, c)
    if config.flux == "godunov" and not ok.all():
        bad = int(np.flatnonzero(~ok)[0])
        raise RecoveryError(f"primitive recovery failed in cell {bad} at t={t!r}", cell=bad, time=t)

    speed = float(np.max(_wave_speed(rho, v, ok, c)))
    dt = config.cfl * grid.dx / speed if speed > 0 else dt_max
    dt = min(dt, dt_max)
    if not math.isfinite(dt):
        raise ConfigError("no finite time step: the state is at rest with zero wave speed and no t_end cap")

    if config.flux == "godunov":
        nP, rP, vP = _pad(n), _pad(rho), _pad(v)
        ns, rs, vs, status = kernels.godunov_states(nP[:-1], rP[:-1], vP[:-1], nP[1:], rP[1:], vP[1:], c)
        if status.any():
            j = int(np.flatnonzero(status)[0])
            raise RegimeError(
                f"interface {j} at t={t!r} is in the delta-shock regime; use the 'lxf' flux for such data"
            )
        Ds, Ms, Es = kernels.prim_to_cons(ns, rs, vs, c)
        F = _physical_flux(Ds, Ms, vs, -1.0 / rs)
    else:
        f = _physical_flux(U[0], U[1], v, p)
        fP = np.hstack((f[:, :1], f, f[:, -1:]))
        UP = np.hstack((U[:, :1], U, U[:, -1:]))
        F = 0.5 * (fP[:, :-1] + fP[:, 1:]) - 0.5 * speed * (UP[:, 1:] - UP[:, :-1])

    U_new = U - (dt / grid.dx) * (F[:, 1:] - F[:, :-1])
    info = StepInfo(dt * (F[:, 0] - F[:, -1]), speed, np.flatnonzero(~ok))
    return U_new, dt, info


def _diagnose(U, grid: Grid1D, k: int):
    i = int(np.argmax(U[2]))
    lo = max(0, i - k // 2)
    hi = min(grid.ncells, lo + k)
    lo = max(0, hi - k)
    return grid.centers[i], U[2, lo:hi].sum() * grid.dx, U[0, lo:hi].sum() * grid.dx


def run(initial, grid: Grid1D, config: SimConfig, params: ModelParams = ModelParams()) -> RunResult:
    """Integrate from ``t = 0`` to ``config.t_end``.

    ``initial`` maps ``x`` to a :class:`PrimitiveState`, or is an array of
    conserved cell values of shape ``(3, ncells)``.
    """
    if callable(initial):
        U = initial_cells(initial, grid, params)
    else:
        U = np.array(initial, dtype=float)
        if U.shape != (3, grid.ncells):
            raise ConfigError(f"initial cells must have shape (3, {grid.ncells}), got {U.shape}")

    t = 0.0
    steps = 0
    boundary = np.zeros(3)
    snapshots = []
    diag = []
    for t_out in config.output_times:
        while t < t_out:
            try:
                U, dt, info = step(U, grid, config, params, dt_max=t_out - t, t=t)
            except (RecoveryError, RegimeError) as exc:
                if isinstance(exc, RecoveryError) and exc.time is None:
                    exc.time = t
                raise
            boundary += info.boundary_flux
            t = t_out if t + dt >= t_out else t + dt
            steps += 1
        n, rho, v, _, ok = _recover(U, config, params.c)
        nan = np.where(ok, 0.0, np.nan)
        snapshots.append(Snapshot(t, grid.centers, U.copy(), n + nan, rho + nan, v + nan, ok))
        diag.append((t,) + _diagnose(U, grid, config.window_cells))

    times, spike, mEn, mD = (np.array(col) for col in zip(*diag))
    return RunResult(snapshots, ConcentrationDiagnostics(times, spike, mEn, mD), boundary, steps)


def exact_cell_averages(sol: RiemannSolution, grid: Grid1D, t: float) -> np.ndarray:
    """Exact cell averages of ``(n, rho, v)`` for a classical fan, shape ``(3, ncells)``."""
    wave = sol.wave
    if not isinstance(wave, ClassicalFan):
        raise RegimeError("exact cell averages are only bounded for classical solutions")
    if not t > 0:
        raise ValueError(f"need t > 0, got {t}")
    edges = grid.edges
    breaks = [-math.inf] + [s * t for s in wave.speeds] + [math.inf]
    out = np.zeros((3, grid.ncells))
    for state, lo, hi in zip(wave.states, breaks[:-1], breaks[1:]):
        overlap = np.clip(np.minimum(edges[1:], hi) - np.maximum(edges[:-1], lo), 0.0, None)
        out += np.outer(state.as_tuple(), overlap)
    return out / grid.dx


def l1_error(snapshot: Snapshot, sol: RiemannSolution, grid: Grid1D, component: str = "rho") -> float:
    """``sum |q_h - q_exact| dx`` against exact cell averages."""
    idx = {"n": 0, "rho": 1, "v": 2}[component]
    exact = exact_cell_averages(sol, grid, snapshot.t)[idx]
    return float(np.sum(np.abs(getattr(snapshot, component) - exact)) * grid.dx)


def riemann_initial(left: PrimitiveState, right: PrimitiveState, x0: float = 0.0):
    """Initial-data function for a jump at ``x0`` (the point ``x0`` itself goes right)."""
    return lambda x: left if x < x0 else right
