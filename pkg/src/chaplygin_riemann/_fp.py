"""Compensated arithmetic for the relativistic speed shift."""
import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1


def two_prod(x, y):
    """``(p, e)`` with ``p = fl(x y)`` and ``p + e == x y`` exactly (Dekker)."""
    p = x * y
    t = _SPLIT * x
    xh = t - (t - x)
    xl = x - xh
    t = _SPLIT * y
    yh = t - (t - y)
    yl = y - yh
    e = ((xh * yh - p) + xh * yl + xl * yh) + xl * yl
    return p, e


def speed_shift(rho, w, c, sign):
    """``(w + s/rho) / (1 + s w / (rho c^2))`` with ``s = sign``, elementwise.

    Evaluated as ``c^2 (rho w + s) / (rho c^2 + s w)`` with error-free
    products, which keeps full accuracy when ``rho w -> -s`` or
    ``rho c^2 -> -s w`` (states near the sonic boundary or near ``|v| = c``).
    """
    c2, c2l = two_prod(c, c)
    p, pe = two_prod(rho, w)
    num = (p + sign) + pe
    q, qe = two_prod(rho, c2)
    den = (q + sign * w) + (qe + rho * c2l)
    with np.errstate(all="ignore"):
        return c2 * num / den + c2l * num / den


def sonic_gap(rho, c):
    """``rho c - 1`` without the rounding of the product."""
    p, e = two_prod(rho, c)
    return (p - 1.0) + e
