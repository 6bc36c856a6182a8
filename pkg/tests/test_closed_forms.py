"""The golden formulas agree with each other independently of the solvers."""

import pytest

from leonard_bethe import closed_forms as cf
from leonard_bethe.bethe import u_of_U
from leonard_bethe.errors import SpinMismatch
from leonard_bethe.params import DIAM, PLAIN, STAR
from leonard_bethe.qcalc import racah_eval
from leonard_bethe.triple import ladder_scalars


def test_table1_layout():
    assert {len(v) for (kind, N), v in cf.TABLE1_ROOTS.items() if kind == "hom"} == {0, 1, 2}
    assert all(len(v) == 2 for (kind, _), v in cf.TABLE1_ROOTS.items() if kind == "inhom")


@pytest.mark.parametrize("fn", [cf.hom_root_half, cf.racah_half, cf.fgh0_half])
def test_spin_check(table1, fn):
    with pytest.raises(SpinMismatch):
        fn(table1)


@pytest.mark.parametrize("seed", range(5))
def test_det_form_matches_racah(draw_params, seed):
    p = draw_params(1, seed)
    y1 = u_of_U(p.q, cf.inhom_root_half(p, 1))
    assert cf.racah_det_half(p, y1) == pytest.approx(racah_eval(p, (PLAIN, STAR), 1, 1), rel=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_inhom_level_zero_racah_is_one(draw_params, seed):
    p = draw_params(1, seed)
    y1 = u_of_U(p.q, cf.inhom_root_half(p, 0))
    assert cf.racah_det_half(p, y1) == pytest.approx(1, rel=1e-9)


def test_fgh0_matches_ladders(half):
    lad = ladder_scalars(half)
    assert cf.fgh0_half(half) == pytest.approx(lad.f0 / (lad.g0 * lad.h0))


def test_diamond_spectrum_enters_inhom_root(half):
    h0, h1 = ladder_scalars(half).h
    t0, t1 = half.spectrum(DIAM)
    expected = half.kappa * (h0 * t0 - h1 * t1) / (h0 - h1)
    assert cf.inhom_root_half(half, 0) == pytest.approx(expected)
