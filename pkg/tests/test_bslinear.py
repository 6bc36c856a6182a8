import itertools

import numpy as np
import pytest

from leonard_bethe import build_system, det_route_s_half, nullspace_route, racah_via_det, solve_inhom
from leonard_bethe import closed_forms as cf
from leonard_bethe.bslinear import (
    action_residual,
    g_prod,
    proportionality_spread,
    rank_gap,
    row_residuals,
    theorem_vector,
    y_eps,
)
from leonard_bethe.errors import DomainError, SpinMismatch
from leonard_bethe.params import PLAIN, STAR
from leonard_bethe.qcalc import racah_eval
from leonard_bethe.scalprod import scalar_theorem
from leonard_bethe.verify import random_vars


def test_g_prod_empty():
    assert g_prod(1.3, 0.7, []) == 1


def test_y_eps_spin_half_diagonal(half):
    u = 1.1 + 0.4j
    assert y_eps(half, -1, u, [u]) == pytest.approx(cf.y_minus_diag_half(half, u), rel=1e-10)


def test_y_eps_sign_check(half):
    with pytest.raises(DomainError):
        y_eps(half, 0, 1.2, [])


@pytest.mark.parametrize("two_s", [1, 2, 3])
@pytest.mark.parametrize("eps", [1, -1])
def test_theorem_vector_solves_system(draw_params, rng, two_s, eps):
    p = draw_params(two_s, 2)
    for M in range(p.dim):
        sys = build_system(p, eps, M, random_vars(rng, p.dim))
        X = theorem_vector(sys)
        assert row_residuals(sys, X).max() < 1e-8
        assert action_residual(sys) < 1e-9
        assert rank_gap(sys) > 1e8
        assert proportionality_spread(nullspace_route(sys), X) < 1e-7


def test_random_vector_fails_rows(draw_params, rng):
    sys = build_system(draw_params(2, 3), -1, 1, random_vars(rng, 3))
    assert row_residuals(sys, random_vars(rng, 3)).max() > 1e-3


def test_perturbed_variables_break_solution(draw_params, rng):
    p = draw_params(2, 3)
    ys = random_vars(rng, 3)
    X = theorem_vector(build_system(p, 1, 0, ys))
    other = build_system(p, 1, 0, ys * (1 + 1e-3))
    assert row_residuals(other, X).max() > 1e-6


def test_system_input_checks(half):
    with pytest.raises(DomainError):
        build_system(half, 1, 0, [1.2])
    with pytest.raises(DomainError):
        build_system(half, 1, 0, [1.2, 1.2])
    with pytest.raises(DomainError):
        build_system(half, 1, 2, [1.2, 0.7])


@pytest.mark.parametrize("eps, M", list(itertools.product((1, -1), (0, 1))))
def test_spin_half_minors(draw_params, rng, eps, M):
    for seed in range(4):
        p = draw_params(1, seed)
        ys = random_vars(rng, 2)
        x1, x2 = det_route_s_half(p, eps, M, ys).values()
        assert x1 == pytest.approx(scalar_theorem(p, eps, M, [ys[1]]).value, rel=1e-10)
        assert x2 == pytest.approx(scalar_theorem(p, eps, M, [ys[0]]).value, rel=1e-10)


def test_minor_scale_cancels(half):
    ys = (0.8 + 0.3j, 1.4 - 0.2j)
    a = det_route_s_half(half, 1, 1, ys).values()
    b = det_route_s_half(half, 1, 1, ys, C=3.7 - 1j).values()
    assert np.allclose(a, b)


def test_minors_need_spin_half(table1):
    with pytest.raises(SpinMismatch):
        det_route_s_half(table1, 1, 0, [1.1, 1.3, 1.7])


@pytest.mark.parametrize("two_s", [1, 2, 3])
def test_racah_via_linear_system(draw_params, two_s):
    p = draw_params(two_s, 7)
    for N in range(p.dim):
        inh = solve_inhom(p, -1, N)
        for M in range(p.dim):
            ref = racah_eval(p, (PLAIN, STAR), M, N)
            assert abs(racah_via_det(p, M, N, inh) - ref) < 1e-6 * abs(ref)


def test_spin_half_det_closed_form(half):
    inh = solve_inhom(half, -1, 1)
    assert racah_via_det(half, 1, 1, inh) == pytest.approx(cf.racah_det_half(half, inh.u_roots[0]), rel=1e-10)
    assert racah_via_det(half, 1, 1, inh) == pytest.approx(cf.racah_half(half), rel=1e-8)
