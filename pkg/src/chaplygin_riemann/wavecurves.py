"""Contact-discontinuity curves and jump-condition residuals.

Shock and rarefaction curves coincide for this system, so every elementary
wave is a contact discontinuity.  Families 1 and 3 keep ``lambda1`` (resp.
``lambda3``) fixed and scale ``n`` with ``rho``; family 2 keeps ``rho`` and
``v`` fixed and lets ``n`` jump freely.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

from ._fp import sonic_gap, speed_shift
from .eigen import characteristic_speeds
from .errors import DomainError, OffCurveError
from .state import ModelParams, PrimitiveState, require_admissible

__all__ = [
    "ContactFamily",
    "DiscontinuityResidual",
    "HugoniotIdentities",
    "n_scaling",
    "curve_point",
    "rh_residual",
    "hugoniot_identities",
    "densities_and_fluxes",
]


class ContactFamily(IntEnum):
    FIRST = 1
    SECOND = 2
    THIRD = 3


@dataclass(frozen=True)
class DiscontinuityResidual:
    """Signed residuals ``-sigma [U_k] + [F_k]`` of the three jump conditions.

    ``scale`` is the largest magnitude of the terms entering the residuals,
    so ``max_abs / scale`` is a rounding-aware relative measure.
    """

    res1: float
    res2: float
    res3: float
    sigma: float
    scale: float

    @property
    def max_abs(self) -> float:
        return max(abs(self.res1), abs(self.res2), abs(self.res3))

    @property
    def relative(self) -> float:
        return self.max_abs / self.scale if self.scale > 0 else self.max_abs


@dataclass(frozen=True)
class HugoniotIdentities:
    lhs18: float
    rhs18: float
    lhs20: float
    rhs20_plus: float
    rhs20_minus: float


def n_scaling(n_ref: float, rho_ref: float, rho: float, params: ModelParams) -> float:
    """Rest-mass density along a family-1/3 curve, ``n ~ sqrt(rho^2 c^2 - 1)``."""
    c = params.c
    if not (n_ref > 0 and rho_ref * c > 1.0 and rho * c > 1.0):
        raise DomainError(f"n_scaling needs n_ref > 0 and rho, rho_ref > 1/c; got {n_ref}, {rho_ref}, {rho}")
    return n_ref * math.sqrt(sonic_gap(rho, c) * (rho * c + 1.0) / (sonic_gap(rho_ref, c) * (rho_ref * c + 1.0)))


def curve_point(base: PrimitiveState, family: ContactFamily | int, value: float, params: ModelParams):
    """Point on the contact curve of ``family`` through ``base``.

    ``value`` is ``rho`` for families 1 and 3 and ``n`` for family 2.
    Returns ``(state, speed)``.
    """
    require_admissible(base, params, "base state")
    family = ContactFamily(family)
    c = params.c
    if family is ContactFamily.SECOND:
        if not value > 0:
            raise DomainError(f"family-2 parameter n must be positive, got {value}")
        return PrimitiveState(value, base.rho, base.v), base.v

    rho = value
    if not rho * c > 1.0:
        raise OffCurveError(f"rho={rho} outside admissible range (1/c, inf) = ({1.0 / c}, inf)")
    lam1, _, lam3 = characteristic_speeds(base.rho, base.v, c)
    if rho == base.rho:
        return base, (lam1 if family is ContactFamily.FIRST else lam3)
    if family is ContactFamily.FIRST:
        lam = lam1
        v = speed_shift(rho, lam, c, 1.0)
    else:
        lam = lam3
        v = speed_shift(rho, lam, c, -1.0)
    if not abs(v) < c:
        raise OffCurveError(
            f"family {int(family)} point at rho={rho} has |v|={abs(v)} >= c; admissible rho range is (1/c, inf) = ({1.0 / c}, inf)"
        )
    n = n_scaling(base.n, base.rho, rho, params)
    return PrimitiveState(n, rho, v), lam


def densities_and_fluxes(s: PrimitiveState, c: float):
    """``(D, M, En)`` and their fluxes, without admissibility checks."""
    c2 = c * c
    beta2 = s.v * s.v / c2
    gam = 1.0 / math.sqrt(1.0 - beta2)
    q = (s.rho - 1.0 / (s.rho * c2)) / (1.0 - beta2)
    D = s.n * gam
    M = q * s.v
    En = q * beta2 + s.rho
    return (D, M, En), (D * s.v, M * s.v - 1.0 / s.rho, M)


def rh_residual(left: PrimitiveState, right: PrimitiveState, sigma: float, params: ModelParams) -> DiscontinuityResidual:
    require_admissible(left, params, "left state")
    require_admissible(right, params, "right state")
    (uL, fL) = densities_and_fluxes(left, params.c)
    (uR, fR) = densities_and_fluxes(right, params.c)
    res = [-sigma * (uR[k] - uL[k]) + (fR[k] - fL[k]) for k in range(3)]
    scale = max(max(abs(sigma * x) for x in uL + uR), max(abs(x) for x in fL + fR))
    return DiscontinuityResidual(res[0], res[1], res[2], sigma, scale)


def hugoniot_identities(left: PrimitiveState, right: PrimitiveState, params: ModelParams) -> HugoniotIdentities:
    """Both sides of the squared Hugoniot relation and the two signed branches.

    On a family-1 pair ``lhs20 == rhs20_plus``; on a family-3 pair
    ``lhs20 == rhs20_minus``.  ``lhs20`` is ``nan`` when its denominator vanishes.
    """
    require_admissible(left, params, "left state")
    require_admissible(right, params, "right state")
    c2 = params.c * params.c
    rm, vm = left.rho, left.v
    r, v = right.rho, right.v
    lhs18 = (v - vm) ** 2 / ((1.0 - v * v / c2) * (1.0 - vm * vm / c2))
    rhs18 = (r - rm) ** 2 / ((r * r - 1.0 / c2) * (rm * rm - 1.0 / c2))
    den = v * vm / c2 - 1.0
    lhs20 = (v - vm) / den if den != 0.0 else math.nan
    branch = (r - rm) / (r * rm - 1.0 / c2)
    return HugoniotIdentities(lhs18, rhs18, lhs20, branch, -branch)
