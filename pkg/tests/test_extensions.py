import math

import pytest

from latgreen import chain1d, extensions, oracle, square2d
from latgreen.errors import DomainError, ParameterError, ParityError


@pytest.mark.parametrize("t", [1.5, 3.0, 2 + 1j])
@pytest.mark.parametrize("r", [(0, 0), (1, 1), (2, 0), (3, 1), (2, 2)])
def test_bcc_two_dimensions_is_square(t, r):
    bcc = extensions.h_bcc_series(r, t, 2).value
    assert abs(bcc - square2d.h2_gamma_series(*r, t).value) < 1e-10


@pytest.mark.parametrize("r", [0, 1, 2, 5])
def test_bcc_one_dimension_is_chain(r):
    assert abs(extensions.h_bcc_series((r,), 2, 1).value - chain1d.h1_closed(r, 2)) < 1e-12


@pytest.mark.parametrize("r", [(0, 0, 0), (1, 1, 1), (2, 0, 0)])
def test_bcc3_vs_oracle(r):
    series = extensions.h_bcc_series(r, 2, 3).value
    assert abs(series - oracle.quadrature_resolvent(oracle.bcc(3), r, 16, n_per_dim=64)) < 1e-6


@pytest.mark.parametrize("r", [(1, 0, 0), (2, 1, 0), (0, 0, 1), (1, 2, 3)])
def test_bcc_mixed_parity_is_exact_zero(r):
    assert extensions.h_bcc_series(r, 2, 3).value == 0


def test_bcc_sign_of_index_is_irrelevant():
    a = extensions.h_bcc_series((1, -1, 3), 2.5, 3).value
    assert a == extensions.h_bcc_series((1, 1, 3), 2.5, 3).value


def test_bcc_parity_branch():
    for r in [(0, 0, 0), (1, 1, 1), (2, 2, 0)]:
        a = extensions.h_bcc_parity_branch(r, 2, 3).value
        assert abs(a - extensions.h_bcc_series(r, 2, 3).value) < 1e-9
    with pytest.raises(ParityError):
        extensions.h_bcc_parity_branch((1, 0, 0), 2, 3)


def test_bcc_two_branch_is_off():
    r = (0, 0, 0)
    gap = extensions.h_bcc_two_branch(r, 2, 3).value - extensions.h_bcc_series(r, 2, 3).value
    assert abs(gap) > 1e-4


def test_bcc_watson_point():
    # value at the band edge for D = 3: the Watson integral over 8
    res = extensions.h_bcc_series((0, 0, 0), 1, 3)
    watson = math.gamma(0.25) ** 4 / (4 * math.pi ** 3) / 8
    assert res.value.real == pytest.approx(watson, rel=1e-7)


def test_bcc_domain():
    with pytest.raises(DomainError):
        extensions.h_bcc_series((0, 0), 0.5, 2)
    with pytest.raises(DomainError):
        extensions.h_bcc_series((0, 0), 1, 2)
    with pytest.raises(ParameterError):
        extensions.h_bcc_series((0, 0), 2, 3)


@pytest.mark.parametrize("r", range(5))
def test_nnn_without_second_hop_is_chain(r):
    assert abs(extensions.h_nnn_series(r, 0.5, 0.0).value - chain1d.h1_closed(r, 2)) < 1e-10
    # tau1 = 0.4 gives t = 2.5 for the chain
    assert abs(extensions.h_nnn_series(r, 0.4, 0.0).value - chain1d.h1_closed(r, 2.5)) < 1e-10


@pytest.mark.parametrize("r", range(4))
def test_nnn_vs_oracle(r):
    g = extensions.green_nnn(r, 0.3, 0.2)
    quad = oracle.quadrature_resolvent(oracle.nnn(0.3, 0.2), (r,), 2 / 0.3) / 0.3
    assert abs(g - quad) < 1e-8


def test_nnn_green_is_fourier_integral():
    # direct trapezoid of 1/(2 - 2 tau1 cos - 2 tau2 cos 2th)
    import numpy as np
    th = 2 * np.pi * np.arange(4096) / 4096
    for r in range(3):
        direct = np.mean(np.cos(r * th) / (2 - 0.6 * np.cos(th) - 0.4 * np.cos(2 * th)))
        assert extensions.green_nnn(r, 0.3, 0.2) == pytest.approx(direct, abs=1e-12)


@pytest.mark.parametrize("r", range(4))
def test_nnn_resolvent_identity(r):
    spec = oracle.nnn(0.3, 0.2)
    res = oracle.resolvent_identity_residual(
        spec, (r,), 2 / 0.3, lambda x: extensions.h_nnn_series(x[0], 0.3, 0.2).value)
    assert abs(res) < 1e-9


def test_nnn_parameter_checks():
    with pytest.raises(ParameterError):
        extensions.h_nnn_series(0, 0.0, 0.2)
    with pytest.raises(ParameterError):
        extensions.h_nnn_series(0, 0.3, -0.1)
    with pytest.raises(DomainError):
        extensions.h_nnn_series(0, 0.6, 0.4)
    with pytest.raises(DomainError):
        extensions.h_nnn_rearranged(0, 0.3, 0.0)


def test_nnn_rearranged_disagrees():
    # kept for comparison; it does not reproduce the direct sum
    a = extensions.h_nnn_rearranged(0, 0.3, 0.2)
    b = extensions.h_nnn_series(0, 0.3, 0.2)
    assert abs(a.value - b.value) > 1e-6
