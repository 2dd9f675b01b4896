"""Independent checks of exact solutions.

* :func:`weak_residual` integrates the distributional form of the system
  against a smooth bump, region by region, with delta-shock masses paired as
  weighted line measures (or, as a cross-check, as mollified volume terms).
* :func:`grh_residual` evaluates the generalized jump relations of a delta shock.
* :func:`limit_study` follows classical solutions towards the delta regime and
  tracks the total mass between the outer contacts.
* :func:`entropy_window` reports the overcompression inequalities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._fp import speed_shift
from .eigen import characteristic_speeds
from .errors import DomainError, QuadratureError
from .riemann import (
    ClassicalFan,
    DeltaShock,
    RiemannData,
    RiemannSolution,
    delta_coefficients,
    edge_speeds,
    solve_classical,
)
from .state import ModelParams, PrimitiveState, require_admissible
from .wavecurves import densities_and_fluxes

__all__ = [
    "TestFunction",
    "WeightedLineMeasure",
    "QuadratureSpec",
    "WeakResidualReport",
    "GRHResidual",
    "LimitRow",
    "LimitStudy",
    "EntropyWindow",
    "gauss_nodes",
    "weak_residual",
    "delta_line_terms",
    "mollified_line_terms",
    "random_test_functions",
    "grh_residual",
    "limit_study",
    "extrapolate_to_zero",
    "entropy_window",
]


@lru_cache(maxsize=None)
def _legendre(order):
    return np.polynomial.legendre.leggauss(order)


def gauss_nodes(lo, hi, panels, order):
    """Composite Gauss-Legendre nodes and weights on ``[lo, hi]``.

    ``lo`` and ``hi`` may be arrays of shape ``(m,)``; the result then has
    shape ``(m, panels * order)``.  Empty intervals get zero weights.
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    x, w = _legendre(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    left = edges[:-1]
    width = edges[1] - edges[0]
    # reference nodes on [0, 1]
    ref = (left[:, None] + 0.5 * width * (x[None, :] + 1.0)).ravel()
    refw = np.tile(0.5 * width * w, panels)
    span = np.maximum(hi - lo, 0.0)
    nodes = lo[:, None] + span[:, None] * ref[None, :]
    weights = span[:, None] * refw[None, :]
    return nodes, weights


@dataclass(frozen=True)
class TestFunction:
    """Bump ``exp(-1/(1 - r^2))`` on the ellipse of radii ``(rt, rx)`` about ``(t0, x0)``."""

    __test__ = False  # keep pytest from collecting this class

    t0: float
    x0: float
    rt: float
    rx: float

    def __post_init__(self):
        if not (self.rt > 0 and self.rx > 0):
            raise DomainError("test-function radii must be positive")
        if not self.t0 - self.rt > 0:
            raise DomainError(f"test-function support must lie in t > 0 (t0={self.t0}, rt={self.rt})")

    @property
    def t_range(self):
        return self.t0 - self.rt, self.t0 + self.rt

    def x_range(self, t):
        tau = (np.asarray(t, dtype=float) - self.t0) / self.rt
        half = self.rx * np.sqrt(np.clip(1.0 - tau * tau, 0.0, None))
        return self.x0 - half, self.x0 + half

    def evaluate(self, t, x):
        """Return ``(phi, phi_t, phi_x)`` at arrays ``t, x``."""
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        dt = (t - self.t0) / self.rt
        dx = (x - self.x0) / self.rx
        r2 = dt * dt + dx * dx
        inside = r2 < 1.0
        s = np.where(inside, 1.0 - r2, 1.0)
        phi = np.where(inside, np.exp(-1.0 / s), 0.0)
        dphi_dr2 = -phi / (s * s)
        phi_t = dphi_dr2 * 2.0 * dt / self.rt
        phi_x = dphi_dr2 * 2.0 * dx / self.rx
        return phi, phi_t, phi_x

    def line_t_range(self, speed):
        """Interval of ``t`` on which the ray ``x = speed * t`` meets the support."""
        # ((t - t0)/rt)^2 + ((speed t - x0)/rx)^2 = 1
        A = 1.0 / self.rt**2 + speed * speed / self.rx**2
        B = -2.0 * self.t0 / self.rt**2 - 2.0 * speed * self.x0 / self.rx**2
        C = self.t0**2 / self.rt**2 + self.x0**2 / self.rx**2 - 1.0
        disc = B * B - 4.0 * A * C
        if disc <= 0:
            return None
        sq = math.sqrt(disc)
        return (-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)


@dataclass(frozen=True)
class WeightedLineMeasure:
    """Weighted delta measure ``w(s) delta_L`` on the curve ``(t(s), x(s))``, ``s`` in ``[s0, s1]``.

    Pairing with a test field ``f(t, x)`` is ``int w(s) f(t(s), x(s)) ds``.
    """

    t_of: object
    x_of: object
    weight: object
    s0: float
    s1: float

    def pair(self, f, panels=64, order=8):
        s, ws = gauss_nodes(self.s0, self.s1, panels, order)
        s, ws = s[0], ws[0]
        return float(np.sum(ws * self.weight(s) * f(self.t_of(s), self.x_of(s))))


@dataclass(frozen=True)
class QuadratureSpec:
    panels: int = 64
    order: int = 8
    #: when set, also integrate with panels // 2 and require agreement within this bound
    refinement_tol: float | None = None


@dataclass(frozen=True)
class WeakResidualReport:
    residuals: tuple[float, float, float]
    panels: int
    order: int
    #: sum of magnitudes of the separate contributions, for relative comparisons
    scale: float
    line_terms: tuple[float, float, float] = (0.0, 0.0, 0.0)
    refinement_delta: float | None = None

    @property
    def max_abs(self) -> float:
        return max(abs(r) for r in self.residuals)


def _regions(sol: RiemannSolution):
    """Wave speeds and the conserved densities/fluxes of the constant regions."""
    c = sol.data.params.c
    wave = sol.wave
    if isinstance(wave, ClassicalFan):
        speeds = list(wave.speeds)
        states = list(wave.states)
    else:
        speeds = [wave.sigma]
        states = [sol.data.left, sol.data.right]
    dens = [densities_and_fluxes(s, c) for s in states]
    return speeds, dens


def _regular_part(sol, phi, panels, order):
    speeds, dens = _regions(sol)
    t, wt = gauss_nodes(*phi.t_range, panels, order)
    t, wt = t[0], wt[0]
    xlo, xhi = phi.x_range(t)
    bounds = [xlo] + [np.clip(s * t, xlo, xhi) for s in speeds] + [xhi]
    total = np.zeros(3)
    scale = np.zeros(3)
    for k, (u, f) in enumerate(dens):
        x, wx = gauss_nodes(bounds[k], bounds[k + 1], panels, order)
        _, pt, px = phi.evaluate(t[:, None], x)
        it = np.sum(wx * pt, axis=1) @ wt
        ix = np.sum(wx * px, axis=1) @ wt
        for j in range(3):
            contrib_t = u[j] * it
            contrib_x = f[j] * ix
            total[j] += contrib_t + contrib_x
            scale[j] += abs(contrib_t) + abs(contrib_x)
    return total, scale


def _carrier_masses(ds: DeltaShock, c: float):
    """Time slopes of the carried baryon, momentum and energy masses."""
    contraction = 1.0 - ds.sigma**2 / (c * c)
    mD = ds.h_slope / math.sqrt(contraction)
    mE = ds.w_slope / contraction
    return mD, ds.sigma * mE, mE


def delta_line_terms(ds: DeltaShock, phi: TestFunction, params: ModelParams, panels=64, order=8):
    """Pairing of the carried masses (and their fluxes) with ``phi_t, phi_x``.

    The shock line carries mass ``m(t) = slope * t`` with flux ``sigma m`` for
    each conserved density; the pressure vanishes there since ``1/rho = 0``.
    """
    span = phi.line_t_range(ds.sigma)
    if span is None:
        return np.zeros(3)
    mD, mM, mE = _carrier_masses(ds, params.c)
    sigma = ds.sigma

    def transport(t, x):
        _, pt, px = phi.evaluate(t, x)
        return pt + sigma * px

    line = WeightedLineMeasure(lambda s: s, lambda s: sigma * s, lambda s: s, span[0], span[1])
    base = line.pair(transport, panels, order)  # int t (phi_t + sigma phi_x) dt along the line
    return np.array([mD * base, mM * base, mE * base])


@lru_cache(maxsize=None)
def _bump_mass():
    y, w = gauss_nodes(-1.0, 1.0, 256, 8)
    inner = np.clip(1.0 - y[0] ** 2, 1e-300, None)
    return float(np.sum(w[0] * np.exp(-1.0 / inner)))


def mollified_line_terms(ds: DeltaShock, phi: TestFunction, params: ModelParams, eps: float, panels=64, order=8):
    """Same pairing as :func:`delta_line_terms` with the line smeared by a bump of half-width ``eps``."""
    mD, mM, mE = _carrier_masses(ds, params.c)
    sigma = ds.sigma
    norm = _bump_mass() * eps
    t, wt = gauss_nodes(*phi.t_range, panels, order)
    t, wt = t[0], wt[0]
    x, wx = gauss_nodes(sigma * t - eps, sigma * t + eps, panels, order)
    y = (x - sigma * t[:, None]) / eps
    inner = np.clip(1.0 - y * y, 1e-300, None)
    kernel = np.where(np.abs(y) < 1.0, np.exp(-1.0 / inner), 0.0) / norm
    _, pt, px = phi.evaluate(t[:, None], x)
    base = (np.sum(wx * kernel * (pt + sigma * px), axis=1) * t) @ wt
    return np.array([mD * base, mM * base, mE * base])


def _weak(sol, phi, panels, order, mollify):
    regular, scale = _regular_part(sol, phi, panels, order)
    line = np.zeros(3)
    if isinstance(sol.wave, DeltaShock):
        if mollify is None:
            line = delta_line_terms(sol.wave, phi, sol.data.params, panels, order)
        else:
            line = mollified_line_terms(sol.wave, phi, sol.data.params, mollify, panels, order)
    return regular + line, scale + np.abs(line), line


def weak_residual(sol: RiemannSolution, phi: TestFunction, quad: QuadratureSpec = QuadratureSpec(), mollify: float | None = None) -> WeakResidualReport:
    """Distributional residuals of the three conservation laws against ``phi``.

    The piecewise-constant regular part is integrated separately on each
    wedge between wave lines.  For a delta shock the carried masses enter as
    exact line integrals, or as volume integrals against a mollified line
    when ``mollify`` (the mollifier half-width) is given.
    """
    res, scale, line = _weak(sol, phi, quad.panels, quad.order, mollify)
    delta = None
    if quad.refinement_tol is not None:
        coarse, _, _ = _weak(sol, phi, max(quad.panels // 2, 1), quad.order, mollify)
        delta = float(np.max(np.abs(coarse - res)))
    report = WeakResidualReport(
        tuple(float(abs(r)) for r in res),
        quad.panels,
        quad.order,
        float(np.max(scale)),
        tuple(float(x) for x in line),
        delta,
    )
    if delta is not None and delta > quad.refinement_tol:
        raise QuadratureError(
            f"quadrature with {quad.panels} panels not converged: change {delta:.3e} > {quad.refinement_tol:.3e}",
            report,
        )
    return report


def random_test_functions(sol: RiemannSolution, count: int, seed: int = 0) -> list[TestFunction]:
    """Bumps placed over the wave pattern, reproducible from ``seed``.

    The first bump is centred on the fastest-moving feature of interest
    (the delta line, or the middle contact).
    """
    rng = np.random.default_rng(seed)
    c = sol.data.params.c
    if isinstance(sol.wave, ClassicalFan):
        speeds = list(sol.wave.speeds)
    else:
        speeds = [sol.wave.sigma]
    lo, hi = min(speeds) - 0.3 * c, max(speeds) + 0.3 * c
    out = []
    for i in range(count):
        t0 = rng.uniform(0.6, 1.5)
        rt = rng.uniform(0.2, 0.5) * t0
        xi = speeds[len(speeds) // 2] if i == 0 else rng.uniform(lo, hi)
        rx = rng.uniform(0.15, 0.6) * c
        out.append(TestFunction(t0, xi * t0, rt, rx))
    return out


@dataclass(frozen=True)
class GRHResidual:
    """Absolute residuals of the four generalized jump relations."""

    position: float
    baryon: float
    momentum: float
    energy: float
    scale: float

    @property
    def values(self):
        return (self.position, self.baryon, self.momentum, self.energy)

    @property
    def max_abs(self) -> float:
        return max(self.values)

    @property
    def relative(self) -> float:
        return self.max_abs / self.scale if self.scale > 0 else self.max_abs


def grh_residual(ds: DeltaShock, data: RiemannData) -> GRHResidual:
    """Residuals of the delta-shock ODEs for the linear-in-time ansatz.

    With ``x = sigma t`` and ``h, w`` linear, each time derivative is the slope
    of the carried mass, compared with the flux imbalance across the line.
    """
    c = data.params.c
    sigma = ds.sigma
    E, F, G, dD, dDflux = delta_coefficients(data)
    mD, mM, mE = _carrier_masses(ds, c)
    x_path = sigma  # dx/dt of the ansatz x(t) = sigma t
    r1 = abs(x_path - ds.v_delta)
    r2 = abs(mD - (sigma * dD - dDflux))
    r3 = abs(mM - (sigma * F - G))
    r4 = abs(mE - (sigma * E - F))
    scale = max(abs(mD), abs(sigma * dD), abs(dDflux), abs(mM), abs(sigma * F), abs(G), abs(mE), abs(sigma * E), abs(F))
    return GRHResidual(r1, r2, r3, r4, scale)


@dataclass(frozen=True)
class LimitRow:
    eps: float
    a: float
    b: float
    rho_star: float
    v_star: float
    int_rho: float
    int_n: float
    int_v: float
    err_rho: float
    err_n: float
    err_v: float


@dataclass(frozen=True)
class LimitStudy:
    left: PrimitiveState
    params: ModelParams
    target_rho: float
    target_n: float
    target_v: float
    rows: list[LimitRow] = field(default_factory=list)

    def extrapolated(self):
        """Polynomial extrapolation of the three integrals to ``eps = 0``."""
        eps = [r.eps for r in self.rows]
        return (
            extrapolate_to_zero(eps, [r.int_rho for r in self.rows]),
            extrapolate_to_zero(eps, [r.int_n for r in self.rows]),
            extrapolate_to_zero(eps, [r.int_v for r in self.rows]),
        )


def extrapolate_to_zero(xs, ys) -> float:
    """Neville evaluation at 0 of the interpolating polynomial through ``(xs, ys)``."""
    xs = [float(x) for x in xs]
    p = [float(y) for y in ys]
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            j = i + m
            p[i] = (xs[j] * p[i] - xs[i] * p[i + 1]) / (xs[j] - xs[i])
    return p[0]


def limit_study(left: PrimitiveState, params: ModelParams, epsilons) -> LimitStudy:
    """Classical solutions with ``b = a + eps`` and their integrals over ``[a, b]``.

    The right state shares ``n`` and ``rho`` with ``left``; only its speed
    varies, chosen so that ``lambda3(right) = a + eps``.
    """
    require_admissible(left, params, "left state")
    c = params.c
    c2 = c * c
    a = float(characteristic_speeds(left.rho, left.v, c)[0])
    n_p, rho_p = left.n, left.rho
    target_rho = 2.0 * (c2 - a * a) / c2
    target_n = (c2 - a * a) / c2 * (
        left.n / math.sqrt(left.rho**2 - 1.0 / c2) + n_p / math.sqrt(rho_p**2 - 1.0 / c2)
    )
    rows = []
    for eps in epsilons:
        b = a + eps
        if not (eps > 0 and b < c):
            raise DomainError(f"eps={eps} infeasible: need 0 < eps < c - a = {c - a}")
        v_p = speed_shift(rho_p, b, c, -1.0)
        right = PrimitiveState(n_p, rho_p, v_p)
        fan = solve_classical(RiemannData(left, right, params))
        a_, v_s, b_ = fan.speeds
        s1, s2 = fan.states[1], fan.states[2]
        int_rho = s1.rho * (b_ - a_)
        int_n = s1.n * (v_s - a_) + s2.n * (b_ - v_s)
        int_v = v_s * (b_ - a_)
        rows.append(
            LimitRow(
                eps, a_, b_, s1.rho, v_s, int_rho, int_n, int_v,
                abs(int_rho - target_rho), abs(int_n - target_n), abs(int_v),
            )
        )
    return LimitStudy(left, params, target_rho, target_n, 0.0, rows)


@dataclass(frozen=True)
class EntropyWindow:
    b: float
    sigma: float
    a: float
    satisfied: bool
    #: boundary case b == a only: no characteristic leaves the shock
    characteristics_incoming: bool | None = None


def entropy_window(ds: DeltaShock | None, data: RiemannData, tol: float = 1e-12) -> EntropyWindow:
    a, b = edge_speeds(data)
    if ds is None or b > a:
        return EntropyWindow(b, math.nan if ds is None else ds.sigma, a, False)
    sigma = ds.sigma
    ok = b <= sigma <= a
    chain = None
    scale = tol * data.params.c
    if abs(a - b) <= scale:
        c = data.params.c
        right = characteristic_speeds(data.right.rho, data.right.v, c)
        left = characteristic_speeds(data.left.rho, data.left.v, c)
        seq = [float(x) for x in right] + [sigma] + [float(x) for x in left]
        chain = all(seq[i] <= seq[i + 1] + scale for i in range(len(seq) - 1))
    return EntropyWindow(b, sigma, a, ok, chain)
