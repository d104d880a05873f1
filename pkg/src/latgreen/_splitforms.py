"""Even/odd split of the hypercubic binomial series into hypergeometric branches.

For ``H_r(t) = sum_n (2^D t)^(-1-n) prod_i n!/(((n+r_i)/2)! ((n-r_i)/2)!)`` the
duplication formula turns the even-``n`` and odd-``n`` subseries into

    even: (1/(2^D t))    * pFq_reg(1^(D+1), (1/2)^D; 1 +- r_i/2;     1/t^2)
    odd:  (1/(4^D t^2))  * pFq_reg(1^(D+1), (3/2)^D; (3 +- r_i)/2;   1/t^2)

with ``pFq_reg = pFq / prod Gamma(b)``. Only the branch whose parity matches
the indices carries residues; the other one is spurious at integer indices.
D = 1 is the chain, D = 2 the square lattice in contour indices.
"""
from __future__ import annotations

from .errors import DomainError, ParityError
from .numerics import DEFAULT_TOL, SeriesEval, pfq_regularized


def _check_t(t: complex) -> complex:
    t = complex(t)
    if abs(t) <= 1:
        raise DomainError(f"|t| = {abs(t)} <= 1: hypergeometric branch needs |t| > 1")
    return t


def branch(rs, t, parity: int, tol: float = DEFAULT_TOL) -> SeriesEval:
    """One parity branch, with the gamma-ratio prefactor taken as its analytic limit."""
    t = _check_t(t)
    dim = len(rs)
    z = 1 / (t * t)
    if parity % 2 == 0:
        num = [1.0] * (dim + 1) + [0.5] * dim
        den = [x for r in rs for x in (1 + r / 2, 1 - r / 2)]
        pref = 1 / (2 ** dim * t)
    else:
        num = [1.0] * (dim + 1) + [1.5] * dim
        den = [x for r in rs for x in ((3 + r) / 2, (3 - r) / 2)]
        pref = 1 / (4 ** dim * t * t)
    return pfq_regularized(num, den, z, tol=tol).scaled(pref)


def parity_branch(rs, t, tol: float = DEFAULT_TOL) -> SeriesEval:
    """The branch selected by the common parity of the integer indices."""
    rs = [int(r) for r in rs]
    parities = {r % 2 for r in rs}
    if len(parities) != 1:
        raise ParityError(f"indices {rs} have mixed parity")
    return branch(rs, t, parities.pop(), tol)


def two_branch_sum(rs, t, tol: float = DEFAULT_TOL) -> SeriesEval:
    """Both branches added, as the printed two-term formulas do."""
    return branch(rs, t, 0, tol) + branch(rs, t, 1, tol)
