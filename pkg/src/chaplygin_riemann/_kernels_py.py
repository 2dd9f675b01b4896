"""NumPy implementation of the finite-volume kernels.

Mirrors ``_ckernels.pyx`` function for function; used when the compiled
extension is unavailable or ``CHAPLYGIN_RIEMANN_PURE`` is set.
"""
import numpy as np

BISECTION_STEPS = 120


def prim_to_cons(n, rho, v, c):
    c2 = c * c
    beta2 = v * v / c2
    q = (rho - 1.0 / (rho * c2)) / (1.0 - beta2)
    return n / np.sqrt(1.0 - beta2), q * v, q * beta2 + rho


def _balance(v, m, En, c2):
    rho = En - m * v / c2
    return (m / v) * (1.0 - v * v / c2) - (rho - 1.0 / (rho * c2))


def recover(D, M, En, c):
    """Primitive recovery for arrays of conserved densities.

    Returns ``(n, rho, v, p, ok)``.  Cells that cannot be inverted into the
    physical region get ``ok = False``, the pressureless speed ``M/En`` and
    ``p = 0`` (the value carried on a delta shock, where ``1/rho = 0``).
    """
    D = np.asarray(D, dtype=float)
    M = np.asarray(M, dtype=float)
    En = np.asarray(En, dtype=float)
    c2 = c * c
    m = np.abs(M)
    still = m <= 1e-14 * np.maximum(1.0, np.abs(En))

    with np.errstate(all="ignore"):
        lo = np.zeros_like(m)
        hi = np.full_like(m, c)
        bracket = (_balance(c * 1e-300, m, En, c2) > 0) & (_balance(np.nextafter(c, 0.0), m, En, c2) < 0)
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            up = _balance(mid, m, En, c2) > 0
            lo = np.where(up, mid, lo)
            hi = np.where(up, hi, mid)
        v = np.where(still, 0.0, np.sign(M) * 0.5 * (lo + hi))
        rho = En - M * v / c2
        n = D * np.sqrt(1.0 - v * v / c2)
        ok = (still | bracket) & (n > 0) & (rho * c > 1.0) & (np.abs(v) < c) & np.isfinite(rho)

        fallback_v = np.clip(M / En, -c * (1.0 - 1e-12), c * (1.0 - 1e-12))
        fallback_v = np.where(np.isfinite(fallback_v), fallback_v, 0.0)
        v = np.where(ok, v, fallback_v)
        rho = np.where(ok, rho, En - M * v / c2)
        n = np.where(ok, n, D * np.sqrt(1.0 - v * v / c2))
        p = np.where(ok, -1.0 / rho, 0.0)
    return n, rho, v, p, ok


def godunov_states(nL, rhoL, vL, nR, rhoR, vR, c):
    """Exact Riemann solution sampled at ``x/t = 0`` for each interface.

    Returns ``(n, rho, v, status)``; ``status`` is 1 where the local problem
    is in the delta-shock regime (no bounded interface state), else 0.
    """
    c2 = c * c
    a = (vL - 1.0 / rhoL) / (1.0 - vL / (rhoL * c2))
    b = (vR + 1.0 / rhoR) / (1.0 + vR / (rhoR * c2))
    delta = ~(b > a)
    with np.errstate(all="ignore"):
        rho_s = (c2 - a * b + np.sqrt((c2 - a * a) * (c2 - b * b))) / (c2 * (b - a))
        v_s = (a + 1.0 / rho_s) / (1.0 + a / (rho_s * c2))
        n1 = nL * np.sqrt((rho_s * c - 1.0) * (rho_s * c + 1.0) / ((rhoL * c - 1.0) * (rhoL * c + 1.0)))
        n2 = nR * np.sqrt((rho_s * c - 1.0) * (rho_s * c + 1.0) / ((rhoR * c - 1.0) * (rhoR * c + 1.0)))
    left = 0.0 < a
    star1 = ~left & (0.0 <= v_s)
    star2 = ~left & ~star1 & (0.0 <= b)
    n = np.select([left, star1, star2], [nL, n1, n2], nR)
    rho = np.select([left, star1 | star2], [rhoL, rho_s], rhoR)
    v = np.select([left, star1 | star2], [vL, v_s], vR)
    n = np.where(delta, np.nan, n)
    rho = np.where(delta, np.nan, rho)
    v = np.where(delta, np.nan, v)
    return n, rho, v, delta.astype(np.int8)
