# cython: language_level=3
"""Compiled finite-volume kernels; same contracts as ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, isfinite, nextafter

cnp.import_array()


cdef inline double _balance(double v, double m, double En, double c2) noexcept nogil:
    cdef double rho = En - m * v / c2
    return (m / v) * (1.0 - v * v / c2) - (rho - 1.0 / (rho * c2))


def prim_to_cons(n, rho, v, double c):
    cdef double[::1] nn = np.ascontiguousarray(n, dtype=np.float64)
    cdef double[::1] rr = np.ascontiguousarray(rho, dtype=np.float64)
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t i, N = nn.shape[0]
    out_D = np.empty(N)
    out_M = np.empty(N)
    out_E = np.empty(N)
    cdef double[::1] D = out_D
    cdef double[::1] M = out_M
    cdef double[::1] E = out_E
    cdef double c2 = c * c, beta2, q
    with nogil:
        for i in range(N):
            beta2 = vv[i] * vv[i] / c2
            q = (rr[i] - 1.0 / (rr[i] * c2)) / (1.0 - beta2)
            D[i] = nn[i] / sqrt(1.0 - beta2)
            M[i] = q * vv[i]
            E[i] = q * beta2 + rr[i]
    return out_D, out_M, out_E


def recover(D, M, En, double c):
    cdef double[::1] d = np.ascontiguousarray(D, dtype=np.float64)
    cdef double[::1] mm = np.ascontiguousarray(M, dtype=np.float64)
    cdef double[::1] e = np.ascontiguousarray(En, dtype=np.float64)
    cdef Py_ssize_t i, N = d.shape[0]
    cdef int it
    out_n = np.empty(N)
    out_r = np.empty(N)
    out_v = np.empty(N)
    out_p = np.empty(N)
    out_ok = np.empty(N, dtype=bool)
    cdef double[::1] on = out_n
    cdef double[::1] orho = out_r
    cdef double[::1] ov = out_v
    cdef double[::1] op = out_p
    cdef cnp.npy_bool[::1] ok = out_ok
    cdef double c2 = c * c, m, lo, hi, mid, v, rho, n, sgn, vmax = c * (1.0 - 1e-12)
    cdef double c_below = nextafter(c, 0.0)
    cdef bint good
    with nogil:
        for i in range(N):
            m = fabs(mm[i])
            good = True
            if m <= 1e-14 * (fabs(e[i]) if fabs(e[i]) > 1.0 else 1.0):
                v = 0.0
            elif _balance(c * 1e-300, m, e[i], c2) > 0 and _balance(c_below, m, e[i], c2) < 0:
                lo = 0.0
                hi = c
                for it in range(2200):
                    mid = 0.5 * (lo + hi)
                    if mid <= lo or mid >= hi:
                        break
                    if _balance(mid, m, e[i], c2) > 0:
                        lo = mid
                    else:
                        hi = mid
                sgn = 1.0 if mm[i] > 0 else -1.0
                v = sgn * 0.5 * (lo + hi)
            else:
                good = False
                v = 0.0
            if good:
                rho = e[i] - mm[i] * v / c2
                n = d[i] * sqrt(1.0 - v * v / c2)
                good = n > 0 and rho * c > 1.0 and fabs(v) < c and isfinite(rho)
            if good:
                on[i] = n
                orho[i] = rho
                ov[i] = v
                op[i] = -1.0 / rho
                ok[i] = True
            else:
                v = mm[i] / e[i]
                if not isfinite(v):
                    v = 0.0
                if v > vmax:
                    v = vmax
                elif v < -vmax:
                    v = -vmax
                ov[i] = v
                orho[i] = e[i] - mm[i] * v / c2
                on[i] = d[i] * sqrt(1.0 - v * v / c2)
                op[i] = 0.0
                ok[i] = False
    return out_n, out_r, out_v, out_p, out_ok


def godunov_states(nL, rhoL, vL, nR, rhoR, vR, double c):
    cdef double[::1] nl = np.ascontiguousarray(nL, dtype=np.float64)
    cdef double[::1] rl = np.ascontiguousarray(rhoL, dtype=np.float64)
    cdef double[::1] vl = np.ascontiguousarray(vL, dtype=np.float64)
    cdef double[::1] nr = np.ascontiguousarray(nR, dtype=np.float64)
    cdef double[::1] rr = np.ascontiguousarray(rhoR, dtype=np.float64)
    cdef double[::1] vr = np.ascontiguousarray(vR, dtype=np.float64)
    cdef Py_ssize_t i, N = nl.shape[0]
    out_n = np.empty(N)
    out_r = np.empty(N)
    out_v = np.empty(N)
    out_s = np.zeros(N, dtype=np.int8)
    cdef double[::1] on = out_n
    cdef double[::1] orho = out_r
    cdef double[::1] ov = out_v
    cdef signed char[::1] st = out_s
    cdef double c2 = c * c, a, b, rho_s, v_s, nan = float("nan")
    with nogil:
        for i in range(N):
            a = (vl[i] - 1.0 / rl[i]) / (1.0 - vl[i] / (rl[i] * c2))
            b = (vr[i] + 1.0 / rr[i]) / (1.0 + vr[i] / (rr[i] * c2))
            if not b > a:
                st[i] = 1
                on[i] = nan
                orho[i] = nan
                ov[i] = nan
                continue
            if 0.0 < a:
                on[i] = nl[i]
                orho[i] = rl[i]
                ov[i] = vl[i]
                continue
            rho_s = (c2 - a * b + sqrt((c2 - a * a) * (c2 - b * b))) / (c2 * (b - a))
            v_s = (a + 1.0 / rho_s) / (1.0 + a / (rho_s * c2))
            if 0.0 <= v_s:
                on[i] = nl[i] * sqrt((rho_s * c - 1.0) * (rho_s * c + 1.0) / ((rl[i] * c - 1.0) * (rl[i] * c + 1.0)))
                orho[i] = rho_s
                ov[i] = v_s
            elif 0.0 <= b:
                on[i] = nr[i] * sqrt((rho_s * c - 1.0) * (rho_s * c + 1.0) / ((rr[i] * c - 1.0) * (rr[i] * c + 1.0)))
                orho[i] = rho_s
                ov[i] = v_s
            else:
                on[i] = nr[i]
                orho[i] = rr[i]
                ov[i] = vr[i]
    return out_n, out_r, out_v, out_s
