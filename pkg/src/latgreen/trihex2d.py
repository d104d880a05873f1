"""Triangular/honeycomb family.

Both lattices come from one contour integral
``H_{r,s}(t) = const. term of x^r y^s / (t - (x + y + 1/xy)(1/x + 1/y + xy))``.
In the honeycomb-form variables ``H_{p+q, 2q-p}(t)`` is the Fourier integral of
``e^{i(p th1 + q th2)} / (t - 3 - 2(cos th1 + cos th2 + cos(th1 + th2)))``.
"""
from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

from . import oracle
from .errors import DomainError, ParameterError, ParityError
from .numerics import DEFAULT_TOL, SeriesEval, is_nonpositive_integer, log_factorials, sum_series

# t >= SERIES_GATE keeps clear of the F_C boundary |t| = 9 (also the band edge)
SERIES_GATE = 10.0
STATED_CONSTANTS = {"honeycomb": -6.0, "triangular": -1.5}


def _shell_indices(n: int):
    i, j = np.divmod(np.arange((n + 1) * (n + 1)), n + 1)
    keep = i + j <= n
    return i[keep], j[keep]


def h_trihex_series(p: int, q: int, t, tol: float = DEFAULT_TOL,
                    gate: float = SERIES_GATE) -> SeriesEval:
    """``H_{p+q, 2q-p}(t)`` as the triple residue sum, summed shell by shell in ``n = i+j+k``.

    ``sum Gamma(1+n)^2 / (i! j! k! Gamma(1-p+i) Gamma(1+p-q+j) Gamma(1+q+k)) t^(-1-n)``;
    reciprocal gammas at nonpositive integers drop the inadmissible terms.
    """
    p, q = int(p), int(q)
    t = complex(t)
    if abs(t) < gate:
        raise DomainError(f"|t| = {abs(t)} below the series gate {gate}; "
                          "the triple series converges only for |t| > 9")
    logt = cmath.log(t)
    shifts = (-p, p - q, q)

    def shell(n: int) -> complex:
        i, j = _shell_indices(n)
        k = n - i - j
        lf = log_factorials(n + max(0, *shifts))
        args = (i + shifts[0], j + shifts[1], k + shifts[2])
        ok = (args[0] >= 0) & (args[1] >= 0) & (args[2] >= 0)
        if not ok.any():
            return 0j
        i, j, k = i[ok], j[ok], k[ok]
        logc = (2 * lf[n] - lf[i] - lf[j] - lf[k]
                - lf[i + shifts[0]] - lf[j + shifts[1]] - lf[k + shifts[2]])
        # positive coefficients: exact sum, then the complex power
        return math.fsum(np.exp(logc)) * cmath.exp(-(1 + n) * logt)

    def terms(start, count):
        return np.array([shell(start + m) for m in range(count)])

    return sum_series(terms, tol=tol, limit_ratio=9 / abs(t), first_chunk=16, max_chunk=64,
                      max_terms=20000)


def lauricella_fc3(a1, a2, b1, b2, b3, x, y, z, tol: float = DEFAULT_TOL) -> SeriesEval:
    """Lauricella ``F_C`` in three variables,
    ``sum (a1)_N (a2)_N / ((b1)_i (b2)_j (b3)_k) x^i y^j z^k / (i! j! k!)``, ``N = i+j+k``."""
    for b in (b1, b2, b3):
        if is_nonpositive_integer(b):
            raise ParameterError(f"denominator parameter {b} is a nonpositive integer")
    radius = math.sqrt(abs(x)) + math.sqrt(abs(y)) + math.sqrt(abs(z))
    if radius >= 1:
        raise DomainError(f"sqrt|x| + sqrt|y| + sqrt|z| = {radius} >= 1: F_C diverges")
    a1, a2 = complex(a1), complex(a2)

    def single(b, w, n):
        k = np.arange(n - 1, dtype=float)
        ratios = complex(w) / ((complex(b) + k) * (k + 1))
        return np.concatenate(([1 + 0j], np.cumprod(ratios)))

    def terms(start, count):
        n = start + count
        P = single(b1, x, n)
        Q = single(b2, y, n)
        R = single(b3, z, n)
        conv = np.convolve(np.convolve(P, Q)[:n], R)[:n]
        N = np.arange(n - 1, dtype=float)
        lead = np.concatenate(([1 + 0j], np.cumprod((a1 + N) * (a2 + N))))
        return (lead * conv)[start:n]

    return sum_series(terms, tol=tol, limit_ratio=radius ** 2, first_chunk=32, max_chunk=512,
                      max_terms=20000)


def fc3_representation(p: int, q: int, t, tol: float = DEFAULT_TOL) -> SeriesEval:
    """``F_C(1,1; 1-p, 1+q, 1+p-q; 1/t,1/t,1/t) / (Gamma(1-p) Gamma(1+q) Gamma(1+p-q) t)``.

    Defined as written only when no lower parameter is a nonpositive integer.
    """
    t = complex(t)
    b = (1 - p, 1 + q, 1 + p - q)
    fc = lauricella_fc3(1, 1, *b, 1 / t, 1 / t, 1 / t, tol=tol)
    norm = math.gamma(b[0]) * math.gamma(b[1]) * math.gamma(b[2])
    return fc.scaled(1 / (norm * t))


def _spectral_t(u) -> complex:
    return 2 * complex(u) + 3


def triangular_to_honeycomb(p: int, q: int) -> tuple:
    """Triangular ``(p, q)`` to the honeycomb-form pair ``(q, (p+q)/2)``."""
    if (p + q) % 2:
        raise ParityError(f"triangular indices need p + q even, got ({p}, {q})")
    return q, (p + q) // 2


def calibrated_constant(kind: str) -> complex:
    return _constant(kind)


@lru_cache(maxsize=2)
def _constant(kind: str) -> complex:
    from .validation import calibrate_prefactor
    return calibrate_prefactor(f"trihex-{kind}").constant


def green_trihex(kind: str, p: int, q: int, u, tol: float = DEFAULT_TOL, constant=None) -> complex:
    """Green's function ``c * H`` at spectral value ``u`` (``t = 2u + 3``).

    honeycomb: Fourier coefficient of ``1/(u - cos th1 - cos th2 - cos(th1+th2))``.
    triangular: of ``1/(2u - 2cos 2th1 - 2cos(th1-th2) - 2cos(th1+th2))``.
    """
    if kind not in ("honeycomb", "triangular"):
        raise ParameterError(f"unknown kind {kind!r}")
    p, q = int(p), int(q)
    u = complex(u)
    if u.imag == 0 and -1.5 <= u.real <= 3:
        raise DomainError(f"u = {u} lies on the spectrum [-3/2, 3]")
    if kind == "triangular":
        p, q = triangular_to_honeycomb(p, q)
    c = calibrated_constant(kind) if constant is None else constant
    return c * h_trihex_series(p, q, _spectral_t(u), tol).value


def correlation_trihex(p: int, q: int) -> float:
    """Regularized edge correlation on the ``{(1,0),(0,1),(-1,-1)}`` lattice."""
    return oracle.quadrature_correlation(oracle.honeycomb_family(), (int(p), int(q)))
