"""Exact Riemann solver for the relativistic Euler equations of a Chaplygin gas.

The solution of a Riemann problem is either a fan of three contact
discontinuities or a delta shock carrying point masses in ``n`` and ``rho``.
"""
from .errors import ChaplyginError
from .riemann import RiemannData, RiemannSolution, WaveKind, classify, sample, sample_xt, solve
from .state import ConservedState, ModelParams, PrimitiveState, from_conserved, to_conserved

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ChaplyginError",
    "ModelParams",
    "PrimitiveState",
    "ConservedState",
    "to_conserved",
    "from_conserved",
    "RiemannData",
    "RiemannSolution",
    "WaveKind",
    "classify",
    "solve",
    "sample",
    "sample_xt",
]
