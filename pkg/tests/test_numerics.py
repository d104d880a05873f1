import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latgreen.errors import ConvergenceError, FitError, ParameterError, PoleError
from latgreen.numerics import (HyperParams, SeriesEval, digamma, elliptic_k_agm,
                               fit_log_singularity, ln_gamma, pfq, pfq_regularized, pochhammer,
                               recip_gamma, sum_series)

EULER = 0.5772156649015329


def test_ln_gamma_values():
    assert ln_gamma(1) == pytest.approx(0, abs=1e-15)
    assert ln_gamma(0.5).real == pytest.approx(0.5723649429247001, rel=1e-14)
    assert ln_gamma(5).real == pytest.approx(math.log(24), rel=1e-14)


@pytest.mark.parametrize("z", [0, -1, -7])
def test_poles(z):
    with pytest.raises(PoleError):
        ln_gamma(z)
    with pytest.raises(PoleError):
        digamma(z)
    assert recip_gamma(z) == 0


def test_recip_gamma_one():
    assert recip_gamma(1) == 1


def test_pochhammer_examples():
    assert pochhammer(1, 4) == 24
    assert pochhammer(0, 0) == 1
    assert pochhammer(0, 3) == 0
    with pytest.raises(ParameterError):
        pochhammer(1, -1)


def test_digamma_values():
    assert digamma(1).real == pytest.approx(-EULER, rel=1e-14)
    assert (digamma(2) - digamma(1)).real == pytest.approx(1, rel=1e-14)
    assert digamma(0.5).real == pytest.approx(-1.9635100260214235, rel=1e-14)


finite_z = st.complex_numbers(min_magnitude=0.1, max_magnitude=30, allow_nan=False,
                              allow_infinity=False)


@given(finite_z)
@settings(max_examples=200, deadline=None)
def test_recip_gamma_inverts_ln_gamma(z):
    if abs(z.imag) < 1e-3 and z.real < 0.5:
        # stay away from the poles; Gamma is huge or tiny there
        z += 1.0 + 1j
    assert abs(recip_gamma(z) * cmath.exp(ln_gamma(z)) - 1) < 1e-13


@given(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
       st.integers(0, 50))
@settings(max_examples=200, deadline=None)
def test_pochhammer_recurrence(a, n):
    assert pochhammer(a, n + 1) == pochhammer(a, n) * (a + n)


@given(st.floats(0.3, 20))
@settings(max_examples=100, deadline=None)
def test_duplication_formula(x):
    lhs = ln_gamma(2 * x).real
    rhs = (2 * x - 1) * math.log(2) - 0.5 * math.log(math.pi) + (ln_gamma(x) + ln_gamma(x + 0.5)).real
    assert abs(math.exp(lhs - rhs) - 1) < 1e-12


def test_pfq_examples():
    assert pfq(HyperParams((), (), 1)).value.real == pytest.approx(math.e, rel=1e-14)
    assert pfq(HyperParams((1, 1), (1,), 0.5)).value.real == pytest.approx(2, rel=1e-14)
    assert pfq(HyperParams((0.5, 0.5), (1,), 0.25)).value.real == pytest.approx(1.0731820, abs=1e-7)


@pytest.mark.parametrize("a", [0.5, 1, 2.5])
@pytest.mark.parametrize("z", [-0.9, -0.3, 0.1, 0.5, 0.9, 0.6j, 0.5 + 0.5j])
def test_pfq_binomial(a, z):
    got = pfq(HyperParams((a, 3.25), (3.25,), z)).value
    assert abs(got / (1 - z) ** (-a) - 1) < 1e-12


def test_pfq_terminating_and_invalid():
    # 2F1(-2, 1; -3; 2) terminates before the bad denominator bites
    got = pfq(HyperParams((-2, 1), (-3,), 2)).value
    assert got == pytest.approx(1 + (-2) * 1 / (-3) * 2 + (-2) * (-1) * 2 / ((-3) * (-2)) * 4 / 2)
    with pytest.raises(ParameterError):
        pfq(HyperParams((1, 1), (-3,), 0.5))
    with pytest.raises(Exception):
        pfq(HyperParams((1, 1), (1,), 1.5))


def test_zero_balanced_flag():
    assert HyperParams((0.5, 0.5), (1,), 0.1).zero_balanced
    assert not HyperParams((0.5, 0.5), (2,), 0.1).zero_balanced


def test_pfq_regularized_matches_plain():
    z = 0.3
    reg = pfq_regularized([1, 1], [2.5], z).value
    assert reg * math.gamma(2.5) == pytest.approx(pfq(HyperParams((1, 1), (2.5,), z)).value)
    # denominator at a pole: the regularized series starts past it
    assert abs(pfq_regularized([1, 1], [0], z).value - z * pfq(HyperParams((2, 2), (2,), z)).value) < 1e-14


def test_elliptic_k():
    assert elliptic_k_agm(0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert elliptic_k_agm(0.25) == pytest.approx(1.6857503548, abs=1e-9)
    with pytest.raises(ParameterError):
        elliptic_k_agm(1)
    m = 1 - 1e-10
    assert elliptic_k_agm(m) == pytest.approx(-0.5 * math.log(1 - m) + 2 * math.log(2), abs=1e-8)


@pytest.mark.parametrize("m", [0.1, 0.25, 0.5, 0.8])
def test_elliptic_k_vs_2f1(m):
    f = pfq(HyperParams((0.5, 0.5), (1,), m)).value.real
    assert abs(math.pi / 2 * f - elliptic_k_agm(m)) < 1e-10


def test_fit_log_singularity():
    samples = [(d, 2 * math.log(d) + 3) for d in (1e-2, 1e-3, 1e-4)]
    c_log, c_const, resid = fit_log_singularity(samples)
    assert c_log == pytest.approx(2) and c_const == pytest.approx(3)
    assert resid < 1e-12
    with pytest.raises(FitError):
        fit_log_singularity([(1e-3, 1.0)] * 3)


def test_fit_log_corrections():
    f = lambda d: -0.3 * math.log(d) + 1.1 + 0.7 * d * math.log(d) - 2 * d
    samples = [(d, f(d)) for d in (1e-2, 5e-3, 1e-3, 5e-4, 1e-4)]
    assert fit_log_singularity(samples, corrections=1)[0].real == pytest.approx(-0.3, abs=1e-10)


def test_sum_series_stops_and_caps():
    res = sum_series(lambda s, c: 0.5 ** (s + np.arange(c)), limit_ratio=0.5)
    assert res.value == pytest.approx(2, rel=1e-15) and res.converged
    assert res.tail_estimate <= 1e-14 * 2
    with pytest.raises(ConvergenceError) as info:
        sum_series(lambda s, c: 1 / (1 + s + np.arange(c)), max_terms=1000)
    assert info.value.terms_used == 1000


def test_sum_series_sparse_terms():
    # alternate zeros must not trigger an early stop
    res = sum_series(lambda s, c: np.where((s + np.arange(c)) % 2 == 0, 0.9 ** (s + np.arange(c)), 0),
                     limit_ratio=0.9)
    assert res.value == pytest.approx(1 / (1 - 0.81), rel=1e-13)


def test_series_eval_scaled():
    ev = SeriesEval(2 + 0j, 5, 1e-15)
    assert ev.scaled(-3).value == -6 and ev.scaled(-3).tail_estimate == pytest.approx(3e-15)
