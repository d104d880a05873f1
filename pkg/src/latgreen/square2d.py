"""Square-lattice resolvent in contour indices.

``H_{r,s}(t)`` is the constant term of ``x^r y^s / (4t - (x + 1/x)(y + 1/y))``.
With ``r = p + q`` and ``s = p - q`` it is the Fourier integral
``(2pi)^-2 int e^{i(p th1 + q th2)} / (4t - 2cos th1 - 2cos th2)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _splitforms
from . import oracle
from .errors import ConvergenceError, DomainError, ParityError
from .numerics import (DEFAULT_TOL, HyperParams, SeriesEval, digamma, fit_log_singularity,
                       log_factorials, pfq, pochhammer, sum_series)

LOG_FIT_OFFSETS = (1e-3, 6e-4, 3e-4, 1e-4, 6e-5, 3e-5)
EDGE_OFFSETS = tuple(1e-3 * 0.5 ** k for k in range(6))
STATED_LOG_COEFFICIENT = -1 / (2 * math.pi)


def _check(r: int, s: int, t) -> complex:
    if (r - s) % 2:
        raise ParityError(f"contour indices r={r}, s={s} must share parity")
    t = complex(t)
    if abs(t) <= 1:
        raise DomainError(f"|t| = {abs(t)} <= 1: series representation needs |t| > 1")
    return t


def to_contour(p: int, q: int) -> tuple:
    return p + q, p - q


def to_physical(r: int, s: int) -> tuple:
    if (r - s) % 2:
        raise ParityError(f"contour indices r={r}, s={s} must share parity")
    return (r + s) // 2, (r - s) // 2


def h2_gamma_series(r: int, s: int, t, tol: float = DEFAULT_TOL) -> SeriesEval:
    """``sum_{n = max(|r|,|s|) + 2m} (4t)^(-1-n) (n!)^2 / prod of the four half-index factorials``."""
    r, s = int(r), int(s)
    t = _check(r, s, t)
    n0 = max(abs(r), abs(s))
    log4t = cmath.log(4 * t)

    def terms(start, count):
        n = n0 + 2 * (start + np.arange(count))
        lf = log_factorials(int(n[-1]))
        logc = (2 * lf[n] - lf[(n + r) // 2] - lf[(n - r) // 2]
                - lf[(n + s) // 2] - lf[(n - s) // 2])
        return np.exp(logc - (1 + n) * log4t)
    return sum_series(terms, tol=tol, limit_ratio=1 / abs(t) ** 2)


def _fundamental(r: int, s: int) -> tuple:
    r, s = abs(int(r)), abs(int(s))
    return max(r, s), min(r, s)


@lru_cache(maxsize=4096)
def _h2_4f3(big: int, small: int, t: complex, tol: float) -> SeriesEval:
    params = HyperParams(
        (1 + big / 2, 1 + big / 2, (1 + big) / 2, (1 + big) / 2),
        (1 + (big + small) / 2, 1 + (big - small) / 2, 1 + big),
        1 / (t * t))
    lf = log_factorials(big)
    binom = math.exp(lf[big] - lf[(big + small) // 2] - lf[(big - small) // 2])
    pref = binom * cmath.exp(-(1 + big) * cmath.log(4 * t))
    return pfq(params, tol).scaled(pref)


def h2_4f3(r: int, s: int, t, tol: float = DEFAULT_TOL) -> SeriesEval:
    """``binom(R, (R+S)/2) (1/4t)^(1+R) 4F3(1+R/2, 1+R/2, (1+R)/2, (1+R)/2; 1+(R+S)/2, 1+(R-S)/2, 1+R; 1/t^2)``.

    ``(R, S)`` is ``(r, s)`` mapped by the lattice symmetries to ``R >= |S|``.
    """
    t = _check(int(r), int(s), t)
    big, small = _fundamental(r, s)
    return _h2_4f3(big, small, t, tol)


def h2_parity_branch(r: int, s: int, t, tol: float = DEFAULT_TOL) -> SeriesEval:
    """The ``5F4`` branch of the split form whose parity matches ``r``."""
    _check(int(r), int(s), t)
    return _splitforms.parity_branch([abs(int(r)), abs(int(s))], t, tol)


def h2_two_branch(r: int, s: int, t, tol: float = DEFAULT_TOL) -> SeriesEval:
    _check(int(r), int(s), t)
    return _splitforms.two_branch_sum([abs(int(r)), abs(int(s))], t, tol)


def h2_printed_4f3(r: int, s: int, t, tol: float = DEFAULT_TOL) -> SeriesEval:
    """The ``4F3`` form with a ``(1/2t)^(1+r)`` prefactor as printed; off by ``2^(1+r)``."""
    t = _check(int(r), int(s), t)
    big, _ = _fundamental(r, s)
    return h2_4f3(r, s, t, tol).scaled(2 ** (1 + big))


def printed_combined_prefactors(p: float, q: float, t) -> tuple:
    """Printed prefactors of the two ``5F4`` terms in physical indices (non-integer p, q)."""
    t = complex(t)
    first = (math.cos(math.pi * p) - math.cos(math.pi * q)) / (p * p - q * q) / (2 * math.pi ** 2 * t)
    second = ((math.cos(math.pi * p) + math.cos(math.pi * q))
              / (((p + q) ** 2 - 1) * ((p - q) ** 2 - 1)) / (2 * math.pi ** 2 * t * t))
    return first, second


def derived_combined_prefactors(p: float, q: float, t) -> tuple:
    """Same prefactors from the reciprocal-gamma products (valid for non-integer p, q)."""
    from .numerics import recip_gamma
    t = complex(t)
    r, s = p + q, p - q
    first = (1 / (4 * t)) * (recip_gamma(1 + r / 2) * recip_gamma(1 - r / 2)
                                   * recip_gamma(1 + s / 2) * recip_gamma(1 - s / 2))
    g32 = math.sqrt(math.pi) / 2
    second = (g32 ** 2 / (4 * math.pi * t * t)) * (
        recip_gamma((3 + r) / 2) * recip_gamma((3 - r) / 2)
        * recip_gamma((3 + s) / 2) * recip_gamma((3 - s) / 2))
    return complex(first), complex(second)


def h00_elliptic(t) -> complex:
    """``H_00(t) = K(m = 1/t^2) / (2 pi t)`` for real ``t > 1``."""
    from .numerics import elliptic_k_agm
    t = float(t)
    return elliptic_k_agm(1 / (t * t)) / (2 * math.pi * t)


def h00_edge_expansion(t, n_terms: int = 200) -> complex:
    """``H_00`` near ``t = 1`` from the logarithmic continuation of ``2F1(1/2,1/2;1;z)``.

    ``2F1(a,b;a+b;z) = Gamma(a+b)/(Gamma(a)Gamma(b)) sum_n (a)_n (b)_n/n!^2
    [2 psi(n+1) - psi(a+n) - psi(b+n) - ln(1-z)] (1-z)^n``.
    """
    t = complex(t)
    w = 1 - 1 / (t * t)
    if abs(w) >= 1:
        raise DomainError("edge expansion needs |1 - 1/t^2| < 1")
    logw = cmath.log(w)
    total = 0j
    coef = 1 + 0j
    for n in range(n_terms):
        term = coef * (2 * digamma(n + 1) - 2 * digamma(0.5 + n) - logw) * w ** n
        total += term
        if n > 8 and abs(term) < 1e-17 * abs(total):
            break
        coef *= ((0.5 + n) / (n + 1)) ** 2
    return total / math.pi / (4 * t)


def square_constant() -> complex:
    """Calibrated ratio between the Fourier integral at ``lambda = 4t`` and ``H``."""
    return _square_constant()


@lru_cache(maxsize=1)
def _square_constant() -> complex:
    from .validation import calibrate_prefactor
    return calibrate_prefactor("square").constant


def green_square(p: int, q: int, t, tol: float = DEFAULT_TOL, constant=None) -> complex:
    """Green's function at ``lambda = 4t``: ``c_sq * H_{p+q, p-q}(t)``."""
    c = square_constant() if constant is None else constant
    r, s = to_contour(int(p), int(q))
    return c * h2_4f3(r, s, t, tol).value


def log_coefficient(p: int, q: int, offsets=LOG_FIT_OFFSETS, tol: float = 1e-13) -> complex:
    """Coefficient of ``ln(delta)`` in ``green_square(p, q, 1 + delta)``.

    Fitted with the first correction terms ``delta ln(delta)`` and ``delta``
    included; the two-term fit is biased at the 1e-4 level over these offsets.
    """
    samples = [(d, green_square(p, q, 1 + d, tol)) for d in offsets]
    return fit_log_singularity(samples, corrections=1)[0]


@dataclass(frozen=True)
class ContinuationCoefficients:
    k: int
    A_k: complex
    A_prime_k: complex
    A_converged: bool


def _literal_A(r: int, s: int, k: int, cap: int) -> tuple:
    lead = pochhammer(1 + r / 2, k) * pochhammer(1 - r / 2, k) / math.factorial(k)
    total = 0j
    small = 0
    for ell in range(cap):
        den = math.factorial(ell) * pochhammer(1 + r / 2, ell) * pochhammer(1 - r / 2, ell)
        if den == 0:
            return lead * complex("nan"), False
        inner = pfq(HyperParams(((1 + s) / 2, -(1 + s) / 2, -ell), (0.5, 1), 1)).value
        term = pochhammer(0.5, ell) * pochhammer(1, ell) / den * inner
        total += term
        small = small + 1 if abs(term) < 1e-14 * max(1.0, abs(total)) else 0
        if small >= 8:
            return lead * total, True
    return lead * total, False


def _literal_A_prime(r: int, s: int, k: int) -> complex:
    lead = pochhammer(1 + r / 2, k) * pochhammer(-(1 + r) / 2, k) / math.factorial(k)
    total = 0j
    for ell in range(k + 1):
        coef = pochhammer(0.5, ell) * pochhammer(0, ell) * pochhammer(-k, ell)
        if coef == 0:
            continue
        den = math.factorial(ell) * pochhammer(1 + r / 2, ell) * pochhammer(-(1 + r) / 2, ell)
        inner = pfq(HyperParams((s / 2, -s / 2, -ell), (0.5, 0), 1)).value
        total += coef / den * inner
    return lead * total


def buhring_coefficients(r: int, s: int, k_max: int, ell_cap: int = 400) -> list:
    """Continuation coefficients ``A_k``, ``A'_k`` evaluated exactly as printed.

    Experimental. The ``A_k`` inner sum carries no ``k`` dependence, its
    ``(1 - r/2)_l`` denominator vanishes for even ``r >= 2`` (reported as
    ``A_converged = False`` with a NaN value), and the results are not even in ``s``.
    """
    if not 0 <= k_max <= 20:
        raise ValueError("k_max must lie in [0, 20]")
    out = []
    for k in range(k_max + 1):
        a, ok = _literal_A(int(r), int(s), k, ell_cap)
        out.append(ContinuationCoefficients(k, a, _literal_A_prime(int(r), int(s), k), ok))
    return out


def _edge_difference(p: int, q: int, tol: float) -> float:
    samples = []
    for d in EDGE_OFFSETS:
        samples.append(green_square(p, q, 1 + d, tol) - green_square(0, 0, 1 + d, tol))
    d = np.array(EDGE_OFFSETS)
    logd = np.log(d)
    design = np.column_stack([np.ones_like(d), d * logd, d, d * d * logd, d * d])
    coef, *_ = np.linalg.lstsq(design, np.real(samples), rcond=None)
    return float(coef[0])


def correlation_square_routes(p: int, q: int, tol: float = 1e-13) -> dict:
    """Both routes to ``lim_{t->1+} G(p,q;t) - G(0,0;t)``.

    ``series``: differences of the ``4F3`` values at ``t = 1 + delta`` extrapolated
    to ``delta = 0`` with the ``delta^k ln(delta)`` and ``delta^k`` error terms
    (k = 1, 2) eliminated by least squares. ``quadrature``: the regularized
    Fourier integral.
    """
    p, q = int(p), int(q)
    if p == 0 and q == 0:
        return {"series": 0.0, "quadrature": 0.0, "difference": 0.0}
    series = _edge_difference(p, q, tol)
    quad = oracle.quadrature_correlation(oracle.square(), (p, q))
    return {"series": series, "quadrature": quad, "difference": abs(series - quad)}


def correlation_square(p: int, q: int, tol: float = 1e-6) -> float:
    routes = correlation_square_routes(p, q)
    if routes["difference"] > tol:
        raise ConvergenceError(
            f"correlation routes disagree by {routes['difference']:.3e} at ({p}, {q})")
    return routes["series"]
