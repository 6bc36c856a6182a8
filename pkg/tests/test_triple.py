import numpy as np
import pytest

from leonard_bethe import DIAM, LABELS, PLAIN, STAR, build_triple
from leonard_bethe import closed_forms as cf
from leonard_bethe.errors import DegenerateParams, DomainError
from leonard_bethe.report import read_matrix_csv, write_matrix_csv
from leonard_bethe.triple import (
    adiam_explicit,
    adiam_from_commutator,
    aw_residuals,
    aw_verify,
    dual_basis,
    ladder_scalars,
    spin_rep,
    tridiag_coeffs,
    tridiagonality,
    triple_report,
    triple_with_matrices,
)


def test_spin_half_rep():
    rep = spin_rep(1, 1.7)
    assert np.allclose(rep.Sp, [[0, 1], [0, 0]])
    assert np.allclose(rep.Sm, [[0, 0], [1, 0]])
    assert np.allclose(np.diag(rep.qs3), [1.7 ** 0.5, 1.7 ** -0.5])


def test_spin_one_offdiagonal():
    q = 1.4
    rep = spin_rep(2, q)
    q2 = q + 1 / q
    assert np.allclose([rep.Sp[0, 1], rep.Sp[1, 2]], [np.sqrt(q2), np.sqrt(q2)])


@pytest.mark.parametrize("two_s", [1, 2, 3, 4])
@pytest.mark.parametrize("q", [1.3, 1.2 + 0.3j, 0.7])
def test_spin_rep_commutator(two_s, q):
    rep = spin_rep(two_s, q)
    K2 = rep.qs3 @ rep.qs3
    K2i = rep.qs3_inv @ rep.qs3_inv
    lhs = rep.Sp @ rep.Sm - rep.Sm @ rep.Sp
    rhs = (K2 - K2i) / (q - 1 / q)
    assert np.abs(lhs - rhs).max() < 1e-12 * max(1, np.abs(rhs).max())
    # K S+ K^-1 = q S+
    assert np.allclose(rep.qs3 @ rep.Sp @ rep.qs3_inv, q * rep.Sp)


@pytest.mark.parametrize("q", [0, 1, -1])
def test_spin_rep_domain(q):
    with pytest.raises(DomainError):
        spin_rep(2, q)


def test_spin_half_spectrum(half):
    t = build_triple(half)
    ev = np.sort_complex(np.linalg.eigvals(t.A))
    th = np.sort_complex(np.array(half.spectrum(PLAIN)))
    assert np.allclose(ev, th)
    assert th[0] == pytest.approx(half.b * half.q ** 0 + half.c) or th[1] == pytest.approx(half.b + half.c)


@pytest.mark.parametrize("two_s", [1, 2, 3, 4])
@pytest.mark.parametrize("complex_params", [False, True])
def test_triple_report_passes(draw_params, two_s, complex_params):
    for seed in range(3):
        rep = triple_report(build_triple(draw_params(two_s, seed, complex_params)))
        assert rep.passed, rep.to_pretty()


def test_aw_residuals_count(table1):
    res = aw_residuals(build_triple(table1))
    assert len(res) == 9
    assert max(res.values()) < 1e-10


def test_perturbed_adiam_breaks_relations(table1):
    t = build_triple(table1)
    bad = table1.replace(bdiam=table1.bdiam * 1.01)
    mats = dict(t.mats)
    mats[DIAM] = adiam_explicit(bad, t.rep)
    rep = aw_verify(triple_with_matrices(t, mats))
    assert not rep.passed
    assert max(c.residual for c in rep.checks) > 1e-4


def test_adiam_two_routes(draw_params):
    p = draw_params(3, 1)
    t = build_triple(p)
    a = adiam_explicit(p, t.rep)
    b = adiam_from_commutator(p, t.A, t.Astar)
    assert np.linalg.norm(a - b) < 1e-10 * np.linalg.norm(a)


@pytest.mark.parametrize("acting, basis", [(a, b) for a in LABELS for b in LABELS if a != b])
def test_tridiag_table(draw_params, acting, basis):
    p = draw_params(3, 2)
    tab = tridiag_coeffs(p, acting, basis)
    assert tab.lower[0] == 0
    theta0 = p.theta(acting, 0)
    n = p.dim
    for M in range(n):
        up = tab.upper[M + 1] if M + 1 < n else 0
        assert tab.diag[M] + up + tab.lower[M] == pytest.approx(theta0)
    t = build_triple(p)
    B = t.duals[basis] @ t.mats[acting] @ t.eigvecs[basis]
    scale = np.abs(B).max()
    assert np.abs(np.diag(B) - tab.diag).max() < 1e-9 * scale
    # off-diagonal entries depend on the eigenvector gauge; their products do not
    prod_num = np.diag(B, -1) * np.diag(B, 1)
    prod_closed = tab.lower[1:] * tab.upper[1:]
    assert np.abs(prod_num - prod_closed).max() < 1e-9 * scale ** 2
    if (acting, basis) in ((STAR, PLAIN), (PLAIN, STAR)):
        assert np.abs(B - tab.matrix()).max() < 1e-9 * scale


def test_tridiagonality_measure(table1):
    far, near = tridiagonality(build_triple(table1))
    assert far < 1e-12 and near > 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_spin_half_ladder_closed_form(draw_params, seed):
    p = draw_params(1, seed)
    lad = ladder_scalars(p)
    assert lad.f[0] == 1 and lad.g[0] == 1
    assert lad.fgh0 == pytest.approx(cf.fgh0_half(p), rel=1e-12)
    assert lad.f0 / (lad.g0 * lad.h0) == pytest.approx(lad.fgh0)


@pytest.mark.parametrize("two_s", [1, 2, 3, 4])
def test_ladder_two_routes(draw_params, two_s):
    for seed in range(5):
        lad = ladder_scalars(draw_params(two_s, seed))
        assert abs(lad.fgh0 - lad.fgh0_sum) < 1e-10 * abs(lad.fgh0)


def test_dual_basis(draw_params):
    t = build_triple(draw_params(2, 4))
    for lab in LABELS:
        D, xi = dual_basis(t, lab)
        G = D @ t.eigvecs[lab]
        assert np.allclose(G, np.diag(xi), atol=1e-12)


def test_spin_half_eigenvector_ratios(half):
    t = build_triple(half)
    V = t.eigvecs[PLAIN]
    # A v = theta v fixes the ratio of the two components
    for M in range(2):
        v = V[:, M]
        A = t.A
        assert v[1] / v[0] == pytest.approx((half.theta(PLAIN, M) - A[0, 0]) / A[0, 1])


def test_principal_branch_flip_is_harmless(half):
    """Flipping both square-root signs conjugates by diag(1, -1)."""
    t = build_triple(half)
    S = np.diag([1, -1])
    flipped = {lab: S @ t.mats[lab] @ S for lab in LABELS}
    rep = aw_verify(triple_with_matrices(t, flipped))
    assert rep.passed


def test_degenerate_triple_rejected():
    from leonard_bethe import ParamSet

    with pytest.raises(DegenerateParams):
        build_triple(ParamSet(2.0, 1.0, 0.5, 1.3, 0.7, 1))


def test_matrix_csv_roundtrip(tmp_path, table1):
    t = build_triple(table1)
    path = tmp_path / "A.csv"
    write_matrix_csv(path, t.A)
    assert np.array_equal(read_matrix_csv(path), t.A)
