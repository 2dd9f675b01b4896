"""Quasilinear form, characteristic speeds and right eigenvectors.

For smooth solutions the system reads ``A(U) U_t + B(U) U_x = 0`` with
``U = (n, rho, v)``.  All three fields are linearly degenerate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._fp import speed_shift
from .errors import DomainError
from .state import ModelParams, PrimitiveState, require_admissible, validate_physical

__all__ = [
    "QuasilinearPair",
    "EigenTriple",
    "assemble_matrices",
    "eigenvalues",
    "eigenvectors",
    "eigen_triple",
    "characteristic_speeds",
    "degeneracy_defect",
]


@dataclass(frozen=True)
class QuasilinearPair:
    A: np.ndarray
    B: np.ndarray


@dataclass(frozen=True)
class EigenTriple:
    lambdas: tuple[float, float, float]
    vectors: tuple[np.ndarray, np.ndarray, np.ndarray]


def characteristic_speeds(rho, v, c):
    """Speeds ``(lambda1, lambda2, lambda3)``; works elementwise on arrays."""
    lam1 = speed_shift(rho, v, c, -1.0)
    lam3 = speed_shift(rho, v, c, 1.0)
    return lam1, v, lam3


def assemble_matrices(s: PrimitiveState, params: ModelParams) -> QuasilinearPair:
    require_admissible(s, params)
    n, rho, v = s.as_tuple()
    c = params.c
    c2 = c * c
    b2 = 1.0 - v * v / c2
    gam = 1.0 / np.sqrt(b2)
    q = rho - 1.0 / (rho * c2)  # rho + p/c^2
    A = np.array(
        [
            [gam, 0.0, n * v / (c2 * b2**1.5)],
            [0.0, (1.0 / (rho * rho * c2) + 1.0) * v / b2, q * (1.0 + v * v / c2) / b2**2],
            [0.0, (1.0 + v * v / (rho * rho * c2 * c2)) / b2, 2.0 * v / (c2 * c2) * (rho * c2 - 1.0 / rho) / b2**2],
        ]
    )
    B = np.array(
        [
            [v * gam, 0.0, n / b2**1.5],
            [0.0, (v * v + 1.0 / (rho * rho)) / b2, 2.0 * rho * v * (1.0 - 1.0 / (rho * rho * c2)) / b2**2],
            [0.0, (1.0 / (rho * rho * c2) + 1.0) * v / b2, q * (1.0 + v * v / c2) / b2**2],
        ]
    )
    return QuasilinearPair(A, B)


def eigenvalues(s: PrimitiveState, params: ModelParams) -> tuple[float, float, float]:
    require_admissible(s, params)
    lam1, lam2, lam3 = characteristic_speeds(s.rho, s.v, params.c)
    return (float(lam1), float(lam2), float(lam3))


def eigenvectors(s: PrimitiveState, params: ModelParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unnormalised right eigenvectors, in (n, rho, v) coordinates."""
    require_admissible(s, params)
    n, rho, v = s.as_tuple()
    c2 = params.c * params.c
    b2 = 1.0 - v * v / c2
    q = rho - 1.0 / (rho * c2)
    r1 = np.array([-n / (q * b2), -1.0 / b2, (1.0 / rho) / q])
    r2 = np.array([1.0, 0.0, 0.0])
    r3 = np.array([n / (q * b2), 1.0 / b2, (1.0 / rho) / q])
    return (r1, r2, r3)


def eigen_triple(s: PrimitiveState, params: ModelParams) -> EigenTriple:
    return EigenTriple(eigenvalues(s, params), eigenvectors(s, params))


def degeneracy_defect(s: PrimitiveState, params: ModelParams, h: float = 1e-5) -> tuple[float, float, float]:
    """``|grad(lambda_i) . r_i|`` with central differences of step ``h``.

    Linear degeneracy makes the exact value zero, so the result measures the
    O(h^2) stencil error plus rounding.  The error constant grows with
    ``|r_i|``, which is unbounded as ``rho`` approaches ``1/c``.
    """
    require_admissible(s, params)
    base = np.array(s.as_tuple(), dtype=float)
    grads = np.empty((3, 3))  # grads[i, k] = d lambda_i / d u_k
    for k in range(3):
        shifted = []
        for sign in (1.0, -1.0):
            u = base.copy()
            u[k] += sign * h
            p = PrimitiveState(*u)
            if not validate_physical(p, params):
                raise DomainError(f"difference stencil of step {h} leaves the physical region at {s.as_tuple()}")
            shifted.append(characteristic_speeds(p.rho, p.v, params.c))
        for i in range(3):
            grads[i, k] = (shifted[0][i] - shifted[1][i]) / (2.0 * h)
    vecs = eigenvectors(s, params)
    return tuple(float(abs(grads[i] @ vecs[i])) for i in range(3))
