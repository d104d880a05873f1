"""Scalar special-function kernel.

Gamma-family functions, generalized hypergeometric series, the AGM elliptic
integral and a small least-squares helper for logarithmic singularities.
Every series in the package is summed through :func:`sum_series`, which
applies one stopping rule and one compensated accumulator.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import special

from .errors import ConvergenceError, FitError, ParameterError, PoleError

DEFAULT_TOL = 1e-14
MAX_TERMS = 1_000_000
# consecutive small terms required before stopping
STOP_RUN = 8

EULER_GAMMA = 0.57721566490153286061


def is_nonpositive_integer(z) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


@dataclass(frozen=True)
class SeriesEval:
    """Value of a summed series plus its bookkeeping."""

    value: complex
    terms_used: int
    tail_estimate: float
    converged: bool = True

    def scaled(self, factor) -> "SeriesEval":
        factor = complex(factor)
        return SeriesEval(self.value * factor, self.terms_used,
                          self.tail_estimate * abs(factor), self.converged)

    def __add__(self, other: "SeriesEval") -> "SeriesEval":
        return SeriesEval(self.value + other.value,
                          self.terms_used + other.terms_used,
                          self.tail_estimate + other.tail_estimate,
                          self.converged and other.converged)


@dataclass(frozen=True)
class HyperParams:
    """Parameters of ``pFq(numerator; denominator; argument)``."""

    numerator: tuple = field(default_factory=tuple)
    denominator: tuple = field(default_factory=tuple)
    argument: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(complex(a) for a in self.numerator))
        object.__setattr__(self, "denominator", tuple(complex(b) for b in self.denominator))
        object.__setattr__(self, "argument", complex(self.argument))

    @property
    def p(self) -> int:
        return len(self.numerator)

    @property
    def q(self) -> int:
        return len(self.denominator)

    @property
    def zero_balanced(self) -> bool:
        excess = sum(self.denominator) - sum(self.numerator)
        return abs(excess) <= 1e-14 * max(1.0, sum(abs(x) for x in self.numerator + self.denominator))

    def terminating_degree(self):
        """Degree of the polynomial if some numerator is a nonpositive integer."""
        degrees = [int(-a.real) for a in self.numerator if is_nonpositive_integer(a)]
        return min(degrees) if degrees else None

    def validate(self) -> None:
        degree = self.terminating_degree()
        for b in self.denominator:
            if is_nonpositive_integer(b):
                # (b)_n stays nonzero for n <= -b, so a polynomial of at most
                # that degree never touches the zero factor
                if degree is None or degree > int(-b.real):
                    raise ParameterError(
                        f"denominator parameter {b} is a nonpositive integer "
                        "and the series does not terminate before it")


class _Accumulator:
    """Neumaier-compensated complex running sum."""

    def __init__(self):
        self.re = 0.0
        self.im = 0.0
        self.c_re = 0.0
        self.c_im = 0.0

    @staticmethod
    def _step(s, c, x):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        return t, c

    def add(self, z: complex) -> None:
        self.re, self.c_re = self._step(self.re, self.c_re, z.real)
        self.im, self.c_im = self._step(self.im, self.c_im, z.imag)

    @property
    def value(self) -> complex:
        return complex(self.re + self.c_re, self.im + self.c_im)


def sum_series(terms: Callable[[int, int], np.ndarray], *, tol: float = DEFAULT_TOL,
               max_terms: int = MAX_TERMS, limit_ratio: float = 0.0,
               first_chunk: int = 64, max_chunk: int = 65536) -> SeriesEval:
    """Sum ``sum_k T_k`` where ``terms(start, count)`` returns a block of terms.

    Stops at the first index where ``STOP_RUN`` consecutive terms satisfy
    ``|T_k| < tol * max(1, |partial|)`` and the geometric tail bound
    ``|T_k| q / (1 - q)`` is below the same threshold. ``q`` is the larger of
    the observed ratio ``|T_k / T_{k-1}|`` and ``limit_ratio``, the caller's
    bound on the asymptotic term ratio. Stopping is not allowed before the
    first nonzero term. Raises ConvergenceError at ``max_terms``.
    """
    acc = _Accumulator()
    partial = 0j
    run = 0
    prev_abs = math.inf
    seen_nonzero = False
    n = 0
    chunk = first_chunk
    while n < max_terms:
        count = min(chunk, max_terms - n)
        block = np.asarray(terms(n, count), dtype=complex)
        mags = np.abs(block)
        partials = partial + np.cumsum(block)
        thresh = tol * np.maximum(1.0, np.abs(partials))
        small = mags < thresh

        idx = np.arange(count)
        last_bad = np.maximum.accumulate(np.where(small, -(run + 1), idx))
        runs = idx - last_bad

        prev = np.concatenate(([prev_abs], mags[:-1]))
        with np.errstate(divide="ignore", invalid="ignore"):
            observed = np.where(prev > 0, mags / prev, limit_ratio)
        q = np.maximum(np.nan_to_num(observed, nan=limit_ratio, posinf=np.inf), limit_ratio)
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.where(mags == 0, 0.0,
                            np.where(q < 1, mags * q / (1 - q), np.inf))

        if seen_nonzero:
            allowed = np.ones(count, dtype=bool)
        else:
            nz = np.flatnonzero(mags)
            allowed = idx >= (nz[0] if nz.size else count)
        stop = np.flatnonzero(allowed & (runs >= STOP_RUN) & (tail <= thresh))
        if stop.size:
            k = int(stop[0])
            used = block[:k + 1]
            acc.add(complex(math.fsum(used.real), math.fsum(used.imag)))
            return SeriesEval(acc.value, n + k + 1, float(tail[k]), True)

        acc.add(complex(math.fsum(block.real), math.fsum(block.imag)))
        partial = partials[-1]
        run = int(runs[-1])
        prev_abs = mags[-1]
        seen_nonzero = seen_nonzero or bool(mags.any())
        n += count
        chunk = min(2 * chunk, max_chunk)
    raise ConvergenceError(f"series not converged after {max_terms} terms",
                           partial=acc.value, terms_used=n)


def ln_gamma(z) -> complex:
    """Principal-branch ``log Gamma(z)``."""
    if is_nonpositive_integer(z):
        raise PoleError(f"log-gamma pole at {z}")
    return complex(special.loggamma(complex(z)))


def recip_gamma(z) -> complex:
    """``1/Gamma(z)``; exactly zero at the poles of Gamma."""
    if is_nonpositive_integer(z):
        return 0j
    z = complex(z)
    if z.imag == 0.0:
        return complex(special.rgamma(z.real))
    return complex(special.rgamma(z))


def digamma(z) -> complex:
    if is_nonpositive_integer(z):
        raise PoleError(f"digamma pole at {z}")
    return complex(special.psi(complex(z)))


def pochhammer(base, n: int) -> complex:
    """Rising factorial ``(base)_n`` by its product definition."""
    if n < 0 or int(n) != n:
        raise ParameterError(f"pochhammer needs a nonnegative integer count, got {n}")
    value = 1 + 0j
    base = complex(base)
    for k in range(int(n)):
        value *= base + k
    return value


def lgamma_signed(x: np.ndarray):
    """Elementwise ``(log|Gamma(x)|, sign Gamma(x))`` for real arrays.

    At poles the sign is 0, which turns the matching term of a reciprocal
    product into an exact zero.
    """
    x = np.asarray(x, dtype=float)
    pole = (x <= 0) & (x == np.floor(x))
    safe = np.where(pole, 0.5, x)
    lg = special.gammaln(safe)
    sign = np.where(pole, 0.0, special.gammasgn(safe))
    return np.where(pole, 0.0, lg), sign


def log_factorials(n_max: int) -> np.ndarray:
    """Table of ``log(m!)`` for ``m = 0..n_max``."""
    return special.gammaln(np.arange(n_max + 1, dtype=float) + 1.0)


def _hyp_block_source(a: Sequence[complex], b: Sequence[complex], z: complex,
                      n0: int, first_term: complex):
    """Term generator for ``sum_{n>=n0} T_n`` with the pFq term ratio."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    state = {"last": None}

    def block(start: int, count: int) -> np.ndarray:
        # local index start..start+count-1 maps to n0+start..
        if start == 0:
            if count == 1:
                state["last"] = first_term
                return np.array([first_term])
            j = n0 + np.arange(count - 1, dtype=float)
            ratios = _ratios(j)
            out = first_term * np.concatenate(([1.0], np.cumprod(ratios)))
        else:
            j = n0 + start - 1 + np.arange(count, dtype=float)
            out = state["last"] * np.cumprod(_ratios(j))
        state["last"] = out[-1]
        return out

    def _ratios(j):
        num = np.ones_like(j, dtype=complex)
        for ai in a:
            num = num * (ai + j)
        den = j + 1.0
        den = den.astype(complex)
        for bi in b:
            den = den * (bi + j)
        return num / den * z

    return block


def _check_argument(params: HyperParams) -> float:
    """Return the asymptotic term ratio, refusing divergent nonterminating series."""
    z = params.argument
    if params.p <= params.q:
        return 0.0
    if params.p == params.q + 1:
        if abs(z) > 1:
            raise ParameterError(f"|z| = {abs(z)} > 1: pFq series diverges")
        if abs(z) == 1:
            excess = sum(params.denominator) - sum(params.numerator)
            if excess.real <= 0:
                raise ParameterError("pFq series diverges on |z| = 1 unless Re(sum b - sum a) > 0")
        return abs(z)
    if z != 0:
        raise ParameterError(f"{params.p}F{params.q} with p > q+1 diverges for z != 0")
    return 0.0


def _finite_sum(a, b, z, n0, first_term, degree) -> SeriesEval:
    term = first_term
    acc = _Accumulator()
    for n in range(n0, degree + 1):
        acc.add(term)
        num = 1 + 0j
        for ai in a:
            num *= ai + n
        den = complex(n + 1)
        for bi in b:
            den *= bi + n
        if num == 0:
            break
        term = term * num / den * z
    return SeriesEval(acc.value, max(degree + 1 - n0, 0), 0.0, True)


def pfq(params: HyperParams, tol: float = DEFAULT_TOL, max_terms: int = MAX_TERMS) -> SeriesEval:
    """Generalized hypergeometric series by term recursion."""
    params.validate()
    a, b, z = params.numerator, params.denominator, params.argument
    degree = params.terminating_degree()
    if degree is not None:
        return _finite_sum(a, b, z, 0, 1 + 0j, degree)
    if z == 0:
        return SeriesEval(1 + 0j, 1, 0.0, True)
    limit = _check_argument(params)
    return sum_series(_hyp_block_source(a, b, z, 0, 1 + 0j), tol=tol,
                      max_terms=max_terms, limit_ratio=limit)


def pfq_regularized(numerator: Sequence, denominator: Sequence, z,
                    tol: float = DEFAULT_TOL, max_terms: int = MAX_TERMS) -> SeriesEval:
    """``sum_n prod (a)_n / prod Gamma(b + n) z^n / n!``.

    Entire in the denominator parameters: nonpositive-integer ``b`` only drop
    the leading terms, which is the analytic limit of ``pFq / prod Gamma(b)``.
    """
    a = [complex(x) for x in numerator]
    b = [complex(x) for x in denominator]
    z = complex(z)
    n0 = 0
    for bi in b:
        if is_nonpositive_integer(bi):
            n0 = max(n0, int(-bi.real) + 1)
    degree = HyperParams(tuple(a), (), z).terminating_degree()
    if degree is not None and degree < n0:
        return SeriesEval(0j, 0, 0.0, True)
    if z == 0:
        if n0 > 0:
            return SeriesEval(0j, 0, 0.0, True)
        return SeriesEval(complex(np.prod([recip_gamma(bi) for bi in b])), 1, 0.0, True)

    log_mag = n0 * cmath.log(z) - math.lgamma(n0 + 1)
    first = cmath.exp(log_mag)
    for ai in a:
        first *= pochhammer(ai, n0)
    for bi in b:
        first *= recip_gamma(bi + n0)
    if degree is not None:
        return _finite_sum(a, b, z, n0, first, degree)
    limit = _check_argument(HyperParams(tuple(a), tuple(b), z))
    if first == 0:
        return SeriesEval(0j, 1, 0.0, True)
    return sum_series(_hyp_block_source(a, b, z, n0, first), tol=tol,
                      max_terms=max_terms, limit_ratio=limit)


def agm(a: float, b: float) -> float:
    for _ in range(64):
        if abs(a - b) <= 4e-16 * abs(a):
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def elliptic_k_agm(m: float) -> float:
    """Complete elliptic integral of the first kind, squared modulus ``m``."""
    m = float(m)
    if not 0.0 <= m < 1.0:
        raise ParameterError(f"elliptic_k_agm needs 0 <= m < 1, got {m}")
    return math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - m)))


def fit_log_singularity(samples, corrections: int = 0):
    """Least-squares fit ``value ~ c_log ln(d) + c_const`` over ``(d, value)`` pairs.

    ``corrections=1`` adds the next terms ``d ln(d)`` and ``d`` of a zero-balanced
    expansion, ``corrections=2`` also ``d^2 ln(d)`` and ``d^2``.
    Returns ``(c_log, c_const, residual)`` with the RMS residual.
    """
    deltas = np.array([float(d) for d, _ in samples])
    values = np.array([complex(v) for _, v in samples])
    if np.any(deltas <= 0):
        raise FitError("offsets must be positive")
    ncols = 2 + 2 * corrections
    if len(samples) < max(3, ncols) or np.unique(deltas).size < ncols:
        raise FitError("need at least three distinct offsets and more than the model size")
    logs = np.log(deltas)
    cols = [logs, np.ones_like(deltas)]
    for k in range(1, corrections + 1):
        cols += [deltas ** k * logs, deltas ** k]
    design = np.column_stack(cols)
    if np.linalg.cond(design) > 1e14:
        raise FitError("ill-conditioned logarithmic fit")
    coef, *_ = np.linalg.lstsq(design.astype(complex), values, rcond=None)
    resid = values - design @ coef
    return complex(coef[0]), complex(coef[1]), float(np.sqrt(np.mean(np.abs(resid) ** 2)))
