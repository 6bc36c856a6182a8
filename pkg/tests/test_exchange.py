import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leonard_bethe.errors import DomainError
from leonard_bethe.exchange import exchange_coeffs, f_coef, gamma, h_coef


def b(x):
    return x - 1 / x


def test_f_at_sample_point():
    q, u, v = 1.1, 2.0, 3.0
    expected = b(q * v / u) * b(u * v) / (b(v / u) * b(q * u * v))
    assert f_coef(q, u, v) == pytest.approx(expected)


def test_h_pole():
    with pytest.raises(DomainError):
        h_coef(1.3, 0.7, 0.7)
    with pytest.raises(DomainError):
        exchange_coeffs(0.4, 0.9, 1.3, 0.7, 0.7, 2)


def test_h_vanishes_at_shifted_argument():
    # h(u, v) has the zero b(q u/v) = 0 at v = q u
    q, u = 1.3, 0.8 + 0.2j
    assert abs(h_coef(q, u, q * u)) < 1e-12


nz = st.complex_numbers(min_magnitude=0.3, max_magnitude=3, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(alpha=nz, beta=nz, u=nz, m=st.integers(-3, 3))
def test_gamma_swap_symmetry(alpha, beta, u, m):
    q = 1.2 + 0.1j
    lhs = gamma(alpha, beta, q, 1, u, m)
    rhs = gamma(beta, alpha, q, -1, u, m)
    assert cmath.isclose(lhs, rhs, rel_tol=1e-12, abs_tol=1e-12)


def test_gamma_sign():
    with pytest.raises(DomainError):
        gamma(1, 1, 1.2, 0, 1, 0)


def _typed_again(alpha, beta, q, u, v, m, eps):
    """Second, independently typed copy of the coefficient table."""
    a_lo, a_hi = (alpha, beta) if eps == 1 else (beta, alpha)

    def G(x, k):
        return a_hi * q ** (-k) * x - a_lo * q ** k / x

    g1 = G(1, m + 1)
    return {
        "f": b(q * v / u) * b(u * v) / (b(v / u) * b(q * u * v)),
        "h": b(q ** 2 * u * v) * b(q * u / v) / (b(q * u * v) * b(u / v)),
        "g": G(u / v, m + 1) / g1 * b(q) * b(v ** 2) / (b(q * v ** 2) * b(u / v)),
        "w": -G(u * v, m) / g1 * b(q) / b(q * u * v),
        "k": G(v / u, m + 1) / g1 * b(q) * b(q ** 2 * u ** 2) / (b(q * u ** 2) * b(v / u)),
        "n": G(1 / (u * v), m + 2) / g1 * b(q) * b(v ** 2) * b(q ** 2 * u ** 2)
        / (b(q * u ** 2) * b(q * v ** 2) * b(q * u * v)),
        "gamma": G(u, m),
    }


@pytest.mark.parametrize("eps", [1, -1])
@pytest.mark.parametrize("point", [(0.7, 1.9, 1.3, 2), (1.1 + 0.4j, 0.6 - 0.2j, 1.25, -1)])
def test_against_second_implementation(eps, point):
    u, v, q, m = point
    alpha, beta = 0.8 + 0.1j, 1.7
    got = exchange_coeffs(alpha, beta, q, u, v, m, eps).as_dict()
    for key, val in _typed_again(alpha, beta, q, u, v, m, eps).items():
        assert got[key] == pytest.approx(val, rel=1e-12), key
    assert got["f"] == pytest.approx(f_coef(q, u, v))
    assert got["h"] == pytest.approx(h_coef(q, u, v))
