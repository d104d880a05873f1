"""Body-centred cubic lattice in D dimensions and the chain with next-nearest hopping."""
from __future__ import annotations

import cmath
import math

import numpy as np

from . import _splitforms
from .errors import DomainError, ParameterError, ParityError
from .numerics import DEFAULT_TOL, SeriesEval, lgamma_signed, log_factorials, sum_series


def _bcc_index(r, dim: int) -> tuple:
    r = tuple(int(x) for x in (r if np.ndim(r) else (r,)))
    if dim < 1:
        raise ParameterError("dimension must be positive")
    if len(r) != dim:
        raise ParameterError(f"index {r} does not have {dim} components")
    return tuple(abs(x) for x in r)


def _bcc_terms(r: tuple, log_base: complex):
    n0 = max(r)

    def terms(start, count):
        n = n0 + 2 * (start + np.arange(count))
        lf = log_factorials(int(n[-1]))
        logc = sum(lf[n] - lf[(n + ri) // 2] - lf[(n - ri) // 2] for ri in r)
        return np.exp(logc - (1 + n) * log_base)
    return terms


def h_bcc_series(r, t, dim: int, tol: float = DEFAULT_TOL) -> SeriesEval:
    """``sum_n (2^D t)^(-1-n) prod_i n! / (((n+r_i)/2)! ((n-r_i)/2)!)`` over admissible ``n``.

    Sites whose components have mixed parity are unreachable and give an
    exact zero. At ``|t| = 1`` the terms decay only like ``n^(-D/2)``; that
    point is accepted for ``D >= 3`` and handled by :func:`_bcc_edge`.
    """
    r = _bcc_index(r, dim)
    t = complex(t)
    if len({x % 2 for x in r}) > 1:
        return SeriesEval(0j, 0, 0.0, True)
    if abs(t) < 1 or (abs(t) == 1 and dim < 3):
        raise DomainError(f"|t| = {abs(t)}: the bcc series needs |t| > 1"
                          + ("" if dim < 3 else " or |t| = 1"))
    if abs(t) == 1:
        return _bcc_edge(r, t, dim, tol)
    terms = _bcc_terms(r, cmath.log(2 ** dim * t))
    return sum_series(terms, tol=tol, limit_ratio=1 / abs(t) ** 2)


def _bcc_edge(r: tuple, t: complex, dim: int, tol: float) -> SeriesEval:
    # partial sums on doubling cut-offs, then Richardson in the tail exponents
    # D/2 - 1, D/2, D/2 + 1, ... of the algebraically decaying remainder
    terms = _bcc_terms(r, cmath.log(2 ** dim * t))
    levels = 6
    base = 2048
    cuts = [base * 2 ** k for k in range(levels)]
    block = terms(0, cuts[-1])
    sums = [complex(math.fsum(block[:c].real), math.fsum(block[:c].imag)) for c in cuts]
    table = list(sums)
    for j in range(levels - 1):
        f = 2.0 ** (dim / 2 - 1 + j)
        previous = table
        table = [(f * b - a) / (f - 1) for a, b in zip(table, table[1:])]
    value = table[0]
    err = abs(previous[1] - previous[0])
    return SeriesEval(value, cuts[-1], err, err <= 1e3 * tol * max(1.0, abs(value)))


def h_bcc_parity_branch(r, t, dim: int, tol: float = DEFAULT_TOL) -> SeriesEval:
    """The single ``(2D+1)F(2D)`` branch selected by the common parity of ``r``."""
    r = _bcc_index(r, dim)
    if len({x % 2 for x in r}) > 1:
        raise ParityError(f"index {r} has mixed parity")
    return _splitforms.parity_branch(r, t, tol)


def h_bcc_two_branch(r, t, dim: int, tol: float = DEFAULT_TOL) -> SeriesEval:
    """Both branches added, as printed."""
    return _splitforms.two_branch_sum(_bcc_index(r, dim), t, tol)


def _nnn_check(tau1: float, tau2: float) -> tuple:
    tau1, tau2 = float(tau1), float(tau2)
    if tau1 <= 0 or tau2 < 0:
        raise ParameterError(f"need tau1 > 0 and tau2 >= 0, got ({tau1}, {tau2})")
    if tau1 + tau2 >= 1:
        raise DomainError(f"tau1 + tau2 = {tau1 + tau2} >= 1: the expansion does not converge")
    return tau1, tau2


def h_nnn_series(r: int, tau1: float, tau2: float, tol: float = DEFAULT_TOL) -> SeriesEval:
    """Constant term of ``x^r / (2/tau1 - (x + 1/x) - (tau2/tau1)(x^2 + 1/x^2))``.

    Shell ``n`` collects ``(tau1/2)^(1+n) (tau2/tau1)^n' n! / (a! b! (n'-b)! (n-n'-a)!)``
    over ``n' <= n``, ``b <= n'`` with ``2a = n + n' - r - 4b`` fixed by the
    residue condition and ``0 <= a <= n - n'``.
    """
    tau1, tau2 = _nnn_check(tau1, tau2)
    r = abs(int(r))
    log_half = math.log(tau1 / 2)
    log_rho = math.log(tau2 / tau1) if tau2 > 0 else None

    def shell(n: int) -> float:
        lf = log_factorials(n)
        top = n if log_rho is not None else 0
        nprime, b = np.divmod(np.arange((top + 1) ** 2), top + 1)
        keep = b <= nprime
        nprime, b = nprime[keep], b[keep]
        twice_a = n + nprime - r - 4 * b
        a = twice_a // 2
        ok = (twice_a % 2 == 0) & (a >= 0) & (a <= n - nprime)
        if not ok.any():
            return 0.0
        nprime, b, a = nprime[ok], b[ok], a[ok]
        logc = lf[n] - lf[a] - lf[b] - lf[nprime - b] - lf[n - nprime - a]
        if log_rho is not None:
            logc = logc + nprime * log_rho
        return math.fsum(np.exp(logc + (1 + n) * log_half))

    def terms(start, count):
        return np.array([shell(start + m) for m in range(count)])

    return sum_series(terms, tol=tol, limit_ratio=tau1 + tau2, first_chunk=32, max_chunk=256,
                      max_terms=50000)


def green_nnn(r: int, tau1: float, tau2: float, tol: float = DEFAULT_TOL) -> complex:
    """``(2pi)^-1 int e^{i r th} / (2 - 2 tau1 cos th - 2 tau2 cos 2th)`` as ``H / tau1``."""
    return h_nnn_series(r, tau1, tau2, tol).value / tau1


def h_nnn_rearranged(r: int, tau1: float, tau2: float, tol: float = 1e-12,
                     max_degree: int = 400) -> SeriesEval:
    """Printed ``(a, b, c)`` rearrangement of the NNN series, summed by total degree.

    ``tau2^(r/2) tau1 / (2 sqrt pi) sum (tau1^2 tau2)^(a/2) tau2^(2b) (tau2/tau1^2)^(c/2) / (a! b! c!)
    Gamma(1 + m + b) Gamma(1/2 + m + b) / Gamma(1 + (r+a-c)/2 + b)`` with ``m = (3a+c+r)/4``.
    Kept as an experimental evaluator for comparison only.
    """
    tau1, tau2 = _nnn_check(tau1, tau2)
    if tau2 == 0:
        raise DomainError("the rearranged form carries tau2^(r/2) and needs tau2 > 0")
    r = abs(int(r))
    x = 0.5 * math.log(tau1 ** 2 * tau2)
    y = 2 * math.log(tau2)
    z = 0.5 * math.log(tau2 / tau1 ** 2)
    lf = log_factorials(max_degree)

    def shell(n: int) -> float:
        a, b = np.divmod(np.arange((n + 1) ** 2), n + 1)
        keep = a + b <= n
        a, b = a[keep], b[keep]
        c = n - a - b
        m = (3 * a + c + r) / 4 + b
        g1, s1 = lgamma_signed(1 + m)
        g2, s2 = lgamma_signed(0.5 + m)
        g3, s3 = lgamma_signed(1 + (r + a - c) / 2 + b)
        logc = a * x + b * y + c * z - lf[a] - lf[b] - lf[c] + g1 + g2 - g3
        return math.fsum(s1 * s2 * s3 * np.exp(logc))

    def terms(start, count):
        return np.array([shell(start + k) for k in range(count)])

    pref = tau2 ** (r / 2) * tau1 / (2 * math.sqrt(math.pi))
    return sum_series(terms, tol=tol, first_chunk=16, max_chunk=64,
                      max_terms=max_degree).scaled(pref)

