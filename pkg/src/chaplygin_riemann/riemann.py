"""Exact Riemann solver.

Let ``a = lambda1(U_-)`` and ``b = lambda3(U_+)``.  For ``b > a`` the
solution is a fan of three contact discontinuities with speeds ``a < v* < b``;
for ``b <= a`` it is a delta shock carrying Dirac masses in both ``n`` and
``rho``, travelling at a constant speed ``sigma`` with ``b <= sigma <= a``.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

from ._fp import speed_shift
from .eigen import characteristic_speeds
from .errors import (
    EntropyViolationError,
    InternalInconsistencyError,
    NoRealSpeedError,
    RegimeError,
)
from .state import ModelParams, PrimitiveState, require_admissible
from .wavecurves import densities_and_fluxes, n_scaling

log = logging.getLogger(__name__)

__all__ = [
    "RiemannData",
    "WaveKind",
    "Region",
    "ClassicalFan",
    "DeltaShock",
    "DeltaCarrier",
    "RiemannSolution",
    "Sample",
    "edge_speeds",
    "classify",
    "star_density",
    "solve_classical",
    "delta_coefficients",
    "solve_delta",
    "solve",
    "sample",
    "sample_xt",
]

#: relative size of E below which the E = 0 closed form is used
E_THRESHOLD = 1e-12


@dataclass(frozen=True)
class RiemannData:
    left: PrimitiveState
    right: PrimitiveState
    params: ModelParams = ModelParams()

    def __post_init__(self):
        require_admissible(self.left, self.params, "left state")
        require_admissible(self.right, self.params, "right state")


class WaveKind(enum.Enum):
    CLASSICAL = "classical"
    DELTA = "delta"


class Region(enum.Enum):
    LEFT = "Left"
    STAR1 = "Star1"
    STAR2 = "Star2"
    RIGHT = "Right"
    DELTA = "DeltaCarrier"


@dataclass(frozen=True)
class ClassicalFan:
    """Three contact discontinuities separating four constant states."""

    states: tuple[PrimitiveState, PrimitiveState, PrimitiveState, PrimitiveState]
    speeds: tuple[float, float, float]

    @property
    def rho_star(self) -> float:
        return self.states[1].rho

    @property
    def v_star(self) -> float:
        return self.states[1].v


@dataclass(frozen=True)
class DeltaShock:
    """Delta shock ``x = sigma t`` with weights ``h = h_slope t`` (on n) and
    ``w = w_slope t`` (on rho).  ``E, F, G`` are the jumps of energy density,
    momentum density and momentum flux."""

    sigma: float
    h_slope: float
    w_slope: float
    E: float
    F: float
    G: float

    @property
    def v_delta(self) -> float:
        return self.sigma


@dataclass(frozen=True)
class DeltaCarrier:
    v_delta: float
    h_slope: float
    w_slope: float


@dataclass(frozen=True)
class RiemannSolution:
    data: RiemannData
    wave: ClassicalFan | DeltaShock

    @property
    def kind(self) -> WaveKind:
        return WaveKind.CLASSICAL if isinstance(self.wave, ClassicalFan) else WaveKind.DELTA


@dataclass(frozen=True)
class Sample:
    region: Region
    state: PrimitiveState | None = None
    carrier: DeltaCarrier | None = None


def edge_speeds(data: RiemannData) -> tuple[float, float]:
    c = data.params.c
    a = characteristic_speeds(data.left.rho, data.left.v, c)[0]
    b = characteristic_speeds(data.right.rho, data.right.v, c)[2]
    return float(a), float(b)


def classify(data: RiemannData) -> WaveKind:
    a, b = edge_speeds(data)
    return WaveKind.CLASSICAL if b > a else WaveKind.DELTA


def star_density(a: float, b: float, c: float) -> float:
    """Intersection density of the family-1 and family-3 curves, ``b > a``."""
    c2 = c * c
    # c^4 + a^2 b^2 - c^2 (a^2 + b^2) factors as (c-a)(c+a)(c-b)(c+b)
    root = math.sqrt((c - a) * (c + a) * (c - b) * (c + b))
    return (c2 - a * b + root) / (c2 * (b - a))


def solve_classical(data: RiemannData) -> ClassicalFan:
    a, b = edge_speeds(data)
    if not b > a:
        raise RegimeError(f"b={b} <= a={a}: data lie in the delta-shock regime")
    c = data.params.c
    rho_s = star_density(a, b, c)
    v_s = speed_shift(rho_s, a, c, 1.0)
    if not (rho_s * c > 1.0 and abs(v_s) < c and math.isfinite(rho_s)):
        raise InternalInconsistencyError(f"star state rho*={rho_s}, v*={v_s} left the physical region")
    left, right = data.left, data.right
    n1 = n_scaling(left.n, left.rho, rho_s, data.params)
    n2 = n_scaling(right.n, right.rho, rho_s, data.params)
    star1 = PrimitiveState(n1, rho_s, v_s)
    star2 = PrimitiveState(n2, rho_s, v_s)
    return ClassicalFan((left, star1, star2, right), (a, v_s, b))


def delta_coefficients(data: RiemannData):
    """Jumps ``[q] = q_+ - q_-`` entering the delta-shock relations.

    Returns ``(E, F, G, dD, dDflux)``: energy density, momentum density,
    momentum flux, baryon density and baryon flux jumps.
    """
    c = data.params.c
    (uL, fL) = densities_and_fluxes(data.left, c)
    (uR, fR) = densities_and_fluxes(data.right, c)
    E = uR[2] - uL[2]
    F = uR[1] - uL[1]
    G = fR[1] - fL[1]
    return E, F, G, uR[0] - uL[0], fR[0] - fL[0]


def _in_window(s, b, a, tol):
    return b - tol <= s <= a + tol


def solve_delta(data: RiemannData) -> DeltaShock:
    """Delta shock from the integrated generalized jump relations.

    Eliminating position and weights leaves ``E s^2 - 2 F s + G = 0``; the
    root inside ``[b, a]`` is selected and must be the ``(F + sqrt)/E``
    branch.  For ``E = 0`` the root is ``G / (2F)``.
    """
    a, b = edge_speeds(data)
    if b > a:
        raise RegimeError(f"b={b} > a={a}: data lie in the classical regime")
    c = data.params.c
    c2 = c * c
    E, F, G, dD, dDflux = delta_coefficients(data)

    disc = F * F - E * G
    if disc < 0:
        if disc >= -1e-13 * max(F * F, abs(E * G)):
            disc = 0.0
        else:
            raise NoRealSpeedError(f"F^2 - EG = {disc} < 0 (E={E}, F={F}, G={G})")
    root = math.sqrt(disc)
    tol = 1e-12 * c

    if abs(E) > E_THRESHOLD * max(abs(F), 1.0):
        # roots without cancellation; `plus` is (F + root)/E either way
        if F >= 0:
            q = F + root
            plus, other = q / E, (G / q if q != 0 else math.inf)
        else:
            q = F - root
            plus, other = G / q, q / E
        inside = [s for s in (plus, other) if _in_window(s, b, a, tol)]
        if not inside:
            raise EntropyViolationError(f"no speed root in [b, a] = [{b}, {a}]; roots {plus}, {other}")
        if len(inside) == 2 and abs(plus - other) > tol:
            raise EntropyViolationError(f"both roots {plus}, {other} lie in [b, a] = [{b}, {a}]")
        sigma = plus if _in_window(plus, b, a, tol) else other
        if sigma != plus:
            if E > 0:
                raise InternalInconsistencyError(f"entropy root {sigma} is not the (F + sqrt)/E branch {plus}")
            log.warning("E=%g < 0: entropy root %r differs from the (F + sqrt)/E branch %r", E, sigma, plus)
        elif E < 0:
            log.info("E=%g < 0 for delta data %s; entropy root is the (F + sqrt)/E branch", E, data)
    else:
        if F == 0:
            raise NoRealSpeedError("E = F = 0: the speed relation is degenerate")
        sigma = G / (2.0 * F)
        if not _in_window(sigma, b, a, tol):
            raise EntropyViolationError(f"speed {sigma} outside [b, a] = [{b}, {a}]")
    sigma = min(max(sigma, b), a)

    contraction = 1.0 - sigma * sigma / c2
    if abs(E) > E_THRESHOLD * max(abs(F), 1.0):
        w_slope = root * contraction
    else:
        w_slope = -F * contraction
    h_slope = math.sqrt(contraction) * (dD * sigma - dDflux)
    return DeltaShock(sigma, h_slope, w_slope, E, F, G)


def solve(data: RiemannData) -> RiemannSolution:
    if classify(data) is WaveKind.CLASSICAL:
        return RiemannSolution(data, solve_classical(data))
    return RiemannSolution(data, solve_delta(data))


def sample(sol: RiemannSolution, xi: float) -> Sample:
    """State at the self-similar coordinate ``xi = x/t``.

    Star regions are closed at ``a``, ``v*`` and ``b`` on the side given by
    ``a <= xi <= v*`` and ``v* < xi <= b``.
    """
    wave = sol.wave
    if isinstance(wave, ClassicalFan):
        a, v_s, b = wave.speeds
        if xi < a:
            return Sample(Region.LEFT, wave.states[0])
        if xi <= v_s:
            return Sample(Region.STAR1, wave.states[1])
        if xi <= b:
            return Sample(Region.STAR2, wave.states[2])
        return Sample(Region.RIGHT, wave.states[3])
    if xi < wave.sigma:
        return Sample(Region.LEFT, sol.data.left)
    if xi > wave.sigma:
        return Sample(Region.RIGHT, sol.data.right)
    return Sample(Region.DELTA, carrier=DeltaCarrier(wave.sigma, wave.h_slope, wave.w_slope))


def sample_xt(sol: RiemannSolution, t: float, x: float) -> Sample:
    if not t > 0:
        raise ValueError(f"sampling needs t > 0, got {t}")
    return sample(sol, x / t)
