"""Brute-force Fourier-integral ground truth.

Resolvents are computed by the periodic trapezoidal rule on ``[0, 2pi)^D``,
which is spectrally accurate for off-spectrum parameters. Regularized
correlations at the band edge use the same grids with the singular node
skipped plus Richardson extrapolation in the grid spacing.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError, ParityError
from .numerics import SeriesEval


@dataclass(frozen=True)
class LatticeSpec:
    """A Bravais lattice given by its neighbor set.

    ``weights`` scale individual hoppings (unit by default); they are only
    used for the next-nearest-neighbor chain.
    """

    name: str
    neighbors: tuple
    weights: tuple | None = None

    def __post_init__(self):
        nbrs = tuple(tuple(int(c) for c in a) for a in self.neighbors)
        if not nbrs:
            raise ParameterError("lattice needs at least one neighbor")
        if len({len(a) for a in nbrs}) != 1:
            raise ParameterError("neighbor vectors must share one dimension")
        if any(not any(a) for a in nbrs):
            raise ParameterError("zero vector is not a neighbor")
        object.__setattr__(self, "neighbors", nbrs)
        if self.weights is not None:
            w = tuple(float(x) for x in self.weights)
            if len(w) != len(nbrs):
                raise ParameterError("one weight per neighbor")
            object.__setattr__(self, "weights", w)

    @property
    def dimension(self) -> int:
        return len(self.neighbors[0])

    @property
    def coordination(self) -> int:
        return len(self.neighbors)

    @property
    def hopping(self) -> np.ndarray:
        if self.weights is None:
            return np.ones(self.coordination)
        return np.asarray(self.weights)

    @property
    def band_top(self) -> float:
        """Maximum of the structure function (attained at theta = 0)."""
        return float(np.sum(np.abs(self.hopping)))


def chain() -> LatticeSpec:
    return LatticeSpec("chain1d", ((1,), (-1,)))


def square() -> LatticeSpec:
    return LatticeSpec("square", ((1, 0), (-1, 0), (0, 1), (0, -1)))


def honeycomb_family() -> LatticeSpec:
    return LatticeSpec("trihex-honeycomb", ((1, 0), (0, 1), (-1, -1)))


def triangular() -> LatticeSpec:
    return LatticeSpec("trihex-triangular",
                       ((2, 0), (-2, 0), (1, 1), (1, -1), (-1, 1), (-1, -1)))


def bcc(dim: int) -> LatticeSpec:
    if dim < 1:
        raise ParameterError("bcc dimension must be positive")
    return LatticeSpec(f"bcc{dim}", tuple(itertools.product((1, -1), repeat=dim)))


def nnn(tau1: float, tau2: float) -> LatticeSpec:
    """Chain with hoppings 1 and tau2/tau1, i.e. the contour denominator
    ``2/tau1 - 2cos(theta) - 2(tau2/tau1)cos(2 theta)`` at ``lambda = 2/tau1``."""
    ratio = tau2 / tau1
    return LatticeSpec("nnn", ((1,), (-1,), (2,), (-2,)), (1.0, 1.0, ratio, ratio))


# native spectral parameter t -> raw lambda of 1/(lambda - sum cos)
def raw_lambda(family: str, t: complex, dim: int | None = None) -> complex:
    t = complex(t)
    if family == "chain1d":
        return 2 * t
    if family == "square":
        return 4 * t
    if family == "trihex-honeycomb":
        return (t - 3) / 2
    if family == "trihex-triangular":
        return t - 3
    if family == "bcc":
        return 2 ** dim * t
    raise ParameterError(f"no native spectral map for family {family!r}")


@dataclass(frozen=True)
class SpectralPoint:
    family: str
    native_t: complex
    raw_lambda: complex

    @classmethod
    def from_native(cls, family: str, t, dim: int | None = None) -> "SpectralPoint":
        return cls(family, complex(t), raw_lambda(family, t, dim))


def structure_function(spec: LatticeSpec, theta) -> np.ndarray | float:
    """``sum_a w_a cos(a . theta)``; ``theta`` has trailing axis of length D."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape[-1:] != (spec.dimension,):
        raise ParameterError(f"theta must have trailing dimension {spec.dimension}")
    nb = np.asarray(spec.neighbors, dtype=float)
    out = np.cos(theta @ nb.T) @ spec.hopping
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=32)
def _grid_symbol(spec: LatticeSpec, n: int) -> np.ndarray:
    th = 2 * np.pi * np.arange(n) / n
    axes = np.meshgrid(*([th] * spec.dimension), indexing="ij")
    total = np.zeros((n,) * spec.dimension)
    for a, w in zip(spec.neighbors, spec.hopping):
        total += w * np.cos(sum(c * ax for c, ax in zip(a, axes)))
    total.setflags(write=False)
    return total


def _phase(r: Sequence[int], n: int) -> np.ndarray:
    th = 2 * np.pi * np.arange(n) / n
    out = np.ones(())
    for rd in r:
        out = np.multiply.outer(out, np.exp(1j * rd * th))
    return out


def _check_index(spec: LatticeSpec, r) -> tuple:
    r = tuple(r) if np.ndim(r) else (r,)
    if len(r) != spec.dimension:
        raise ParameterError(f"index {r} does not match dimension {spec.dimension}")
    if any(int(x) != x for x in r):
        raise ParameterError(f"lattice indices must be integers, got {r}")
    return tuple(int(x) for x in r)


def default_grid(dim: int) -> int:
    return 256 if dim <= 2 else 64


def _max_grid(dim: int) -> int:
    return {1: 1 << 16, 2: 2048}.get(dim, 128)


def _trapezoid(spec, r, lam, n):
    sym = _grid_symbol(spec, n)
    if lam.imag == 0.0 and sym.min() <= lam.real <= sym.max():
        raise DomainError(f"lambda = {lam} lies on the spectrum of {spec.name}")
    return complex(np.mean(_phase(r, n) / (lam - sym)))


def quadrature_resolvent_eval(spec: LatticeSpec, r, lam, n_per_dim: int | None = None,
                              tol: float = 1e-13) -> SeriesEval:
    """Trapezoidal torus quadrature of ``(2pi)^-D int e^{i r.theta}/(lambda - S)``.

    With ``n_per_dim`` given a single grid is used; otherwise the grid doubles
    from the default until consecutive values agree to ``tol``. The returned
    ``tail_estimate`` is the last change, ``terms_used`` the node count.
    """
    r = _check_index(spec, r)
    lam = complex(lam)
    if lam.imag == 0.0 and -spec.band_top <= lam.real <= spec.band_top:
        # band bottom from a grid divisible by 2 and 3, which contains the
        # extremal points of every lattice shipped here
        lo = float(_grid_symbol(spec, 192 if spec.dimension <= 2 else 24).min())
        if lo - 1e-12 <= lam.real <= spec.band_top + 1e-12:
            raise DomainError(f"lambda = {lam} lies on the spectrum of {spec.name}")
    if n_per_dim is not None:
        return SeriesEval(_trapezoid(spec, r, lam, n_per_dim), n_per_dim ** spec.dimension,
                          math.nan, True)
    n = default_grid(spec.dimension)
    value = _trapezoid(spec, r, lam, n)
    while True:
        n2 = 2 * n
        if n2 > _max_grid(spec.dimension):
            raise ConvergenceError(f"quadrature not converged at {n} nodes per dimension",
                                   partial=value)
        new = _trapezoid(spec, r, lam, n2)
        change = abs(new - value)
        if change <= tol * max(1.0, abs(new)):
            return SeriesEval(new, n2 ** spec.dimension, change, True)
        value, n = new, n2


def quadrature_resolvent(spec: LatticeSpec, r, lam, n_per_dim: int | None = None,
                         tol: float = 1e-13) -> complex:
    return quadrature_resolvent_eval(spec, r, lam, n_per_dim, tol).value


def _singular_nodes(sym: np.ndarray, top: float) -> np.ndarray:
    return np.abs(sym - top) <= 1e-12 * max(1.0, top)


def _patched_mean(spec, r, n):
    sym = _grid_symbol(spec, n)
    top = spec.band_top
    sing = _singular_nodes(sym, top)
    num = np.real(_phase(r, n)) - 1.0
    if np.any(np.abs(num[sing]) > 1e-9):
        raise ParityError(f"index {r} is not reachable on {spec.name}; "
                          "the regularized correlation diverges")
    den = np.where(sing, 1.0, top - sym)
    vals = np.where(sing, 0.0, num / den)
    if spec.dimension == 1:
        # removable singularity: limit of (cos r.th - 1)/(top - S)
        curv = float(np.sum(spec.hopping * np.asarray(spec.neighbors, float)[:, 0] ** 2))
        vals = np.where(sing, -(r[0] ** 2) / curv, vals)
    return float(np.mean(vals))


def quadrature_correlation(spec: LatticeSpec, r, n_per_dim: int | None = None) -> float:
    """Regularized correlation ``(2pi)^-D int (e^{i r.theta} - 1)/(N - S)``.

    In one dimension the singular node is replaced by its limit and the
    trapezoid is spectrally accurate. For D >= 2 the integrand has a bounded
    direction-dependent point singularity; the node is skipped and the
    ``h^D``, ``h^(D+2)`` error terms are removed by Richardson extrapolation over
    three doubling grids starting at ``n_per_dim`` (default 128, 32 for D >= 3).
    """
    r = _check_index(spec, r)
    if not any(r):
        return 0.0
    dim = spec.dimension
    if dim == 1:
        return _patched_mean(spec, r, n_per_dim or 256)
    n = n_per_dim or (128 if dim == 2 else 32)
    v0, v1, v2 = (_patched_mean(spec, r, n * 2 ** k) for k in range(3))
    f1 = 2.0 ** dim
    r1 = (f1 * v1 - v0) / (f1 - 1), (f1 * v2 - v1) / (f1 - 1)
    f2 = 2.0 ** (dim + 2)
    return (f2 * r1[1] - r1[0]) / (f2 - 1)


def resolvent_identity_residual(spec: LatticeSpec, r, lam,
                                H: Callable[[tuple], complex]) -> complex:
    """``lambda H(r) - sum_a w_a (H(r+a) + H(r-a))/2 - [r = 0]``."""
    r = _check_index(spec, r)
    lam = complex(lam)
    total = lam * complex(H(r))
    for a, w in zip(spec.neighbors, spec.hopping):
        plus = tuple(x + y for x, y in zip(r, a))
        minus = tuple(x - y for x, y in zip(r, a))
        total -= 0.5 * w * (complex(H(plus)) + complex(H(minus)))
    if not any(r):
        total -= 1.0
    return total
