import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leonard_bethe import DIAM, PLAIN, STAR, phi43_terminating, racah_eval
from leonard_bethe import closed_forms as cf
from leonard_bethe.errors import DomainError, SingularSeries
from leonard_bethe.params import CYCLIC_TRIPLES, iter_labels_pairs
from leonard_bethe.qcalc import bfun, k_coeff, nu0_coeff, qnum, qpoch, racah_poly
from leonard_bethe.triple import nu0_simplified, orthogonality_sides


@pytest.mark.parametrize("x, expected", [(1, 0), (2, 1.5), (1j, 2j)])
def test_bfun(x, expected):
    assert bfun(x) == pytest.approx(expected)


def test_bfun_pole():
    with pytest.raises(DomainError):
        bfun(0)


@pytest.mark.parametrize("n, q, expected", [(1, 1.7, 1), (0, 2.2, 0), (2, 3, 10 / 3), (3, 2, 4 + 1 + 0.25)])
def test_qnum(n, q, expected):
    assert qnum(n, q) == pytest.approx(expected)


@pytest.mark.parametrize("q", [0, 1, -1])
def test_qnum_domain(q):
    with pytest.raises(DomainError):
        qnum(2, q)


@pytest.mark.parametrize("a, q2, n, expected", [(0.3, 2, 0, 1), (1, 5, 3, 0), (2, 9, 2, 17)])
def test_qpoch(a, q2, n, expected):
    assert qpoch(a, q2, n) == pytest.approx(expected)


def test_qpoch_multi_base():
    assert qpoch([2, 3], 9, 2) == pytest.approx(qpoch(2, 9, 2) * qpoch(3, 9, 2))


finite = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(a=finite, q2=finite, n=st.integers(0, 8))
def test_qpoch_recursion(a, q2, n):
    lhs = qpoch(a, q2, n + 1)
    rhs = qpoch(a, q2, n) * (1 - a * q2 ** n)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def _mp_sum(n, others, dens, q2, z):
    with mpmath.workdps(60):
        q2 = mpmath.mpc(q2)
        nums = [q2 ** (-n)] + [mpmath.mpc(a) for a in others]
        dens = [q2] + [mpmath.mpc(d) for d in dens]
        total = 0
        for k in range(n + 1):
            t = mpmath.mpc(z) ** k
            for a in nums:
                t *= mpmath.qp(a, q2, k)
            for d in dens:
                t /= mpmath.qp(d, q2, k)
            total += t
        return complex(total)


def test_phi43_index_zero():
    assert phi43_terminating(0, [2, 3, 4], [5, 6, 7], 1.7, 1.3) == 1


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("precision", ["double", "mp", "auto"])
def test_phi43_matches_high_precision(seed, precision):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    others = rng.uniform(0.2, 2, 3) * np.exp(1j * rng.uniform(-1, 1, 3))
    dens = rng.uniform(0.2, 2, 3) * np.exp(1j * rng.uniform(-1, 1, 3))
    q2 = rng.uniform(1.3, 2.5)
    ref = _mp_sum(n, others, dens, q2, q2)
    got = phi43_terminating(n, others, dens, q2, q2, precision=precision)
    assert abs(got - ref) <= 1e-10 * abs(ref)


def test_phi43_singular():
    q2 = 2.0
    # (d; q2)_k vanishes at k = 1 when d = 1/q2
    with pytest.raises(SingularSeries):
        phi43_terminating(3, [0.3, 0.4, 0.5], [1 / q2, 0.7, 0.9], q2, q2)


def test_phi43_argument_checks():
    with pytest.raises(DomainError):
        phi43_terminating(-1, [1, 2, 3], [1, 2, 3], 2, 2)
    with pytest.raises(DomainError):
        phi43_terminating(1, [1, 2], [1, 2, 3], 2, 2)


@pytest.mark.parametrize("two_s", [1, 2, 3, 4])
def test_racah_boundary_values(draw_params, two_s):
    p = draw_params(two_s, seed=3)
    for pair in iter_labels_pairs():
        for K in range(p.dim):
            assert racah_eval(p, pair, 0, K) == pytest.approx(1)
            assert racah_eval(p, pair, K, 0) == pytest.approx(1)


@pytest.mark.parametrize("seed", range(5))
def test_racah_spin_half_closed_form(draw_params, seed):
    p = draw_params(1, seed)
    assert racah_eval(p, (PLAIN, STAR), 1, 1) == pytest.approx(cf.racah_half(p), rel=1e-12)


@pytest.mark.parametrize("two_s", [2, 4])
def test_racah_precision_modes_agree(draw_params, two_s):
    p = draw_params(two_s, seed=9)
    labels = (PLAIN, DIAM, STAR)
    for M in range(p.dim):
        for N in range(p.dim):
            a = racah_poly(p, labels, M, N, precision="mp")
            b = racah_poly(p, labels, M, N, precision="auto")
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


@pytest.mark.parametrize("labels", CYCLIC_TRIPLES)
def test_k_coeff_at_zero(half, labels):
    assert k_coeff(half, labels, 0) == pytest.approx(1)


@pytest.mark.parametrize("seed", range(4))
def test_nu0_two_forms(draw_params, seed):
    p = draw_params(1, seed)
    for labels in CYCLIC_TRIPLES:
        a, b, c = labels
        assert nu0_coeff(p, (c, a, b)) == pytest.approx(nu0_simplified(p, labels), rel=1e-10)


@pytest.mark.parametrize("labels", CYCLIC_TRIPLES)
@pytest.mark.parametrize("two_s", [1, 2, 3, 4])
def test_orthogonality_identity(draw_params, two_s, labels):
    for seed in range(20):
        lhs, rhs = orthogonality_sides(draw_params(two_s, seed), labels)
        assert abs(lhs - rhs) <= 1e-10 * abs(rhs)
