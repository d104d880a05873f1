import pytest

from latgreen import oracle, trihex2d
from latgreen.errors import DomainError, ParameterError, ParityError
from latgreen.numerics import HyperParams, pfq

PAIRS = [(0, 0), (1, 0), (1, 1), (2, 1)]


@pytest.mark.parametrize("t", [12, 16])
@pytest.mark.parametrize("p,q", PAIRS)
def test_series_vs_oracle(t, p, q):
    series = trihex2d.h_trihex_series(p, q, t).value
    raw = oracle.quadrature_resolvent(oracle.honeycomb_family(), (p, q), (t - 3) / 2)
    assert abs(series - raw / 2) < 1e-8


def test_leading_term():
    t = 1e4
    assert trihex2d.h_trihex_series(0, 0, t).value * t == pytest.approx(1, abs=1e-3)


def test_first_shell_vanishes_off_origin():
    # the n = 0 shell carries 1/Gamma(1 - p) = 0 for p = 1

    res = trihex2d.h_trihex_series(1, 0, 1e6)
    assert abs(res.value) < 1e-11  # leading behaviour is t^-2, not t^-1
    assert res.value.real == pytest.approx(1e-12, rel=1e-5)


def test_gate():
    with pytest.raises(DomainError):
        trihex2d.h_trihex_series(1, 0, 5)
    with pytest.raises(DomainError):
        trihex2d.h_trihex_series(0, 0, 9.5)


def test_identity_rs_form():
    def H(r, s):
        return trihex2d.h_trihex_series((2 * r - s) // 3, (r + s) // 3, 12).value
    for r, s in ((0, 0), (1, 2), (2, -2)):
        res = (9 * H(r, s) - H(r + 1, s - 1) - H(r - 1, s + 1) - H(r + 2, s + 1)
               - H(r - 2, s - 1) - H(r + 1, s + 2) - H(r - 1, s - 2))
        assert abs(res - (r == s == 0)) < 1e-8


def test_lauricella_reductions():
    assert trihex2d.lauricella_fc3(0.5, 1.5, 2, 1, 1, 0, 0, 0).value == 1
    for slot in range(3):
        args = [0, 0, 0]
        args[slot] = 0.3
        b = (2.0, 1.25, 0.75)
        got = trihex2d.lauricella_fc3(0.5, 1.5, *b, *args).value
        assert abs(got - pfq(HyperParams((0.5, 1.5), (b[slot],), 0.3)).value) < 1e-10


def test_lauricella_representation():
    assert abs(trihex2d.fc3_representation(0, 0, 16).value
               - trihex2d.h_trihex_series(0, 0, 16).value) < 1e-10


def test_lauricella_errors():
    with pytest.raises(DomainError):
        trihex2d.lauricella_fc3(1, 1, 1, 1, 1, 0.2, 0.2, 0.2)
    with pytest.raises(ParameterError):
        trihex2d.lauricella_fc3(1, 1, 0, 1, 1, 0.01, 0.01, 0.01)


def test_green_trihex():
    u = 4.5
    hc = trihex2d.green_trihex("honeycomb", 0, 0, u)
    assert abs(hc - oracle.quadrature_resolvent(oracle.honeycomb_family(), (0, 0), u)) < 1e-8
    tri = trihex2d.green_trihex("triangular", 1, 1, u)
    assert abs(tri - oracle.quadrature_resolvent(oracle.triangular(), (1, 1), 2 * u)) < 1e-8
    assert trihex2d.triangular_to_honeycomb(1, 1) == (1, 1)
    with pytest.raises(ParityError):
        trihex2d.green_trihex("triangular", 1, 0, u)
    with pytest.raises(DomainError):
        trihex2d.green_trihex("honeycomb", 0, 0, 2.0)
    with pytest.raises(ParameterError):
        trihex2d.green_trihex("kagome", 0, 0, u)


def test_correlation():
    assert trihex2d.correlation_trihex(0, 0) == 0
    assert trihex2d.correlation_trihex(1, 0) == pytest.approx(-1 / 3, abs=1e-6)
    for p, q in ((2, 1), (3, 1)):
        assert abs(trihex2d.correlation_trihex(p, q) - trihex2d.correlation_trihex(q, p)) < 1e-10
