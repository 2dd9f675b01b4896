"""Primitive and conserved states of the Chaplygin-gas relativistic Euler system.

The unknowns are the rest mass density ``n``, the proper energy density
``rho`` and the particle speed ``v``; the equation of state is
``p = -1/rho``.  Conserved densities are

    D  = n / sqrt(1 - v^2/c^2)
    M  = (rho + p/c^2) v / (1 - v^2/c^2)
    En = (rho + p/c^2) (v^2/c^2) / (1 - v^2/c^2) + rho

and the matching fluxes are ``D v``, ``M v + p`` and ``M``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InadmissibleStateError, InversionOutOfRegionError, NonInvertibleError

__all__ = [
    "ModelParams",
    "PrimitiveState",
    "ConservedState",
    "Admissibility",
    "pressure",
    "validate_physical",
    "require_admissible",
    "lorentz_factor",
    "to_conserved",
    "from_conserved",
    "flux",
]


@dataclass(frozen=True)
class ModelParams:
    """Model constants; only the light speed ``c`` enters the system."""

    c: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise DomainError(f"light speed must be positive and finite, got c={self.c!r}")


@dataclass(frozen=True)
class PrimitiveState:
    n: float
    rho: float
    v: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.n, self.rho, self.v)


@dataclass(frozen=True)
class ConservedState:
    D: float
    M: float
    En: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.D, self.M, self.En)


@dataclass(frozen=True)
class Admissibility:
    """Verdict of :func:`validate_physical`; truthy iff admissible."""

    ok: bool
    failed: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


def pressure(rho: float) -> float:
    """Chaplygin pressure ``-1/rho``."""
    if not rho > 0:
        raise DomainError(f"pressure needs rho > 0, got {rho!r}")
    return -1.0 / rho


def validate_physical(s: PrimitiveState, params: ModelParams) -> Admissibility:
    c = params.c
    failed = []
    if not s.n > 0:
        failed.append("n > 0")
    if not s.rho > 1.0 / c:
        failed.append("rho > 1/c")
    if not abs(s.v) < c:
        failed.append("|v| < c")
    return Admissibility(not failed, tuple(failed))


def require_admissible(s: PrimitiveState, params: ModelParams, what: str = "state") -> None:
    verdict = validate_physical(s, params)
    if not verdict:
        raise InadmissibleStateError(
            f"{what} {s.as_tuple()} is outside the physical region (c={params.c}): "
            f"violates {', '.join(verdict.failed)}",
            verdict.failed,
        )


def lorentz_factor(v: float, c: float) -> float:
    return 1.0 / math.sqrt(1.0 - (v / c) ** 2)


def to_conserved(s: PrimitiveState, params: ModelParams) -> ConservedState:
    require_admissible(s, params)
    c = params.c
    c2 = c * c
    beta2 = s.v * s.v / c2
    # factored to avoid cancellation near rho c -> 1 and |v| -> c
    rc, beta = s.rho * c, s.v / c
    contraction = (1.0 - beta) * (1.0 + beta)
    q = (rc - 1.0) * (rc + 1.0) / (s.rho * c2) / contraction
    return ConservedState(
        D=s.n / math.sqrt(contraction),
        M=q * s.v,
        En=q * beta2 + s.rho,
    )


def flux(s: PrimitiveState, params: ModelParams) -> tuple[float, float, float]:
    """Physical fluxes of (D, M, En) at an admissible state."""
    u = to_conserved(s, params)
    return (u.D * s.v, u.M * s.v - 1.0 / s.rho, u.M)


def _momentum_balance(v, M, En, c2):
    # zero at the true speed: Q(1 - v^2/c^2) = rho - 1/(rho c^2), rho = En - M v/c^2
    rho = En - M * v / c2
    return (M / v) * (1.0 - v * v / c2) - (rho - 1.0 / (rho * c2))


def from_conserved(u: ConservedState, params: ModelParams) -> PrimitiveState:
    """Invert :func:`to_conserved`.

    The speed is the root of a scalar balance on ``(0, c) * sign(M)``,
    found by bisection; ``rho = En - M v / c^2`` and ``n = D / gamma`` follow.
    """
    c = params.c
    c2 = c * c
    D, M, En = u.D, u.M, u.En
    if not all(math.isfinite(x) for x in (D, M, En)):
        raise NonInvertibleError(f"non-finite conserved state {u.as_tuple()}")

    # below this |M| the bracket end c*1e-300 no longer resolves v
    if abs(M) <= 1e-250 * max(1.0, abs(En)):
        s = PrimitiveState(D, En, 0.0)
    else:
        sign = 1.0 if M > 0 else -1.0
        m = abs(M)
        # work with |M| on (0, c); the balance is odd under v -> -v, M -> -M
        lo, hi = 0.0, c
        g_lo = _momentum_balance(c * 1e-300, m, En, c2)
        g_hi = _momentum_balance(math.nextafter(c, 0.0), m, En, c2)
        if not (g_lo > 0 and g_hi < 0):
            raise NonInvertibleError(
                f"no sign change of the speed balance on (0, c) for {u.as_tuple()}"
            )
        # bisect until the bracket stops shrinking; this is tighter than
        # 1e-14 c and also resolves small speeds to full relative precision
        for _ in range(2200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _momentum_balance(mid, m, En, c2) > 0:
                lo = mid
            else:
                hi = mid
        v = sign * 0.5 * (lo + hi)
        rho = En - M * v / c2
        s = PrimitiveState(D * math.sqrt(1.0 - v * v / c2), rho, v)

    verdict = validate_physical(s, params)
    if not verdict:
        raise InversionOutOfRegionError(
            f"recovered state {s.as_tuple()} violates {', '.join(verdict.failed)}"
        )
    return s
