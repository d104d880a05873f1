"""Resolvent of the one-dimensional chain, ``H_r(t) = (2pi)^-1 int e^{i r th}/(2t - 2 cos th)``."""
from __future__ import annotations

import cmath

import numpy as np

from . import _splitforms
from .errors import DomainError
from .numerics import (DEFAULT_TOL, HyperParams, SeriesEval, lgamma_signed, log_factorials, pfq,
                       sum_series)


def _check_outside(t: complex) -> complex:
    t = complex(t)
    if abs(t) <= 1:
        raise DomainError(f"|t| = {abs(t)} <= 1: series representation needs |t| > 1")
    return t


def _sqrt_t2m1(t: complex) -> complex:
    # product of principal roots: cut exactly on [-1, 1], ~ t at infinity
    return cmath.sqrt(t - 1) * cmath.sqrt(t + 1)


def h1_closed(r: int, t) -> complex:
    """``1/(2 sqrt(t^2-1)) (t + sqrt(t^2-1))^(-|r|)``."""
    t = complex(t)
    if t.imag == 0 and -1 <= t.real <= 1:
        raise DomainError(f"t = {t} lies on the branch cut [-1, 1]")
    root = _sqrt_t2m1(t)
    return (1 / (t + root)) ** abs(int(r)) / (2 * root)


def h1_hyp(r: int, t, tol: float = DEFAULT_TOL) -> SeriesEval:
    """``(1/2t)^(1+r) 2F1(1 + r/2, (1+r)/2; 1+r; 1/t^2)``."""
    r = abs(int(r))
    t = _check_outside(t)
    params = HyperParams((1 + r / 2, (1 + r) / 2), (1 + r,), 1 / (t * t))
    return pfq(params, tol).scaled((1 / (2 * t)) ** (1 + r))


def h1_gamma_series(r: int, t, tol: float = DEFAULT_TOL,
                    parity_restricted: bool = True) -> SeriesEval:
    """Residue series ``sum_n (2t)^(-1-n) n!/(((n+r)/2)! ((n-r)/2)!)``.

    Only ``n = |r| + 2m`` solve the residue condition. With
    ``parity_restricted=False`` every ``n >= 0`` is summed through
    ``1/Gamma``, which is what the unrestricted formula literally says.
    """
    r = abs(int(r))
    t = _check_outside(t)
    log2t = cmath.log(2 * t)
    if parity_restricted:
        def terms(start, count):
            n = r + 2 * (start + np.arange(count))
            lf = log_factorials(int(n[-1]))
            logc = lf[n] - lf[(n + r) // 2] - lf[(n - r) // 2]
            return np.exp(logc - (1 + n) * log2t)
        return sum_series(terms, tol=tol, limit_ratio=1 / abs(t) ** 2)

    def terms(start, count):
        n = start + np.arange(count, dtype=float)
        lg_n = lgamma_signed(1 + n)[0]
        lp, sp = lgamma_signed(1 + (n + r) / 2)
        lm, sm = lgamma_signed(1 + (n - r) / 2)
        return sp * sm * np.exp(lg_n - lp - lm - (1 + n) * log2t)
    return sum_series(terms, tol=tol, limit_ratio=1 / abs(t))


def h1_parity_branch(r: int, t, tol: float = DEFAULT_TOL) -> SeriesEval:
    """The ``3F2`` branch of the split form whose parity matches ``r``."""
    return _splitforms.parity_branch([abs(int(r))], t, tol)


def h1_two_branch(r: int, t, tol: float = DEFAULT_TOL) -> SeriesEval:
    """Both ``3F2`` branches summed (the printed two-term form)."""
    return _splitforms.two_branch_sum([abs(int(r))], t, tol)


def correlation_1d(r: int) -> float:
    """``lim_{t->1+} H_r(t) - H_0(t) = -|r|/2``."""
    return -abs(int(r)) / 2
