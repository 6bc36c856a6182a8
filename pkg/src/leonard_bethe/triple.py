"""Leonard triples of q-Racah type realized on the spin-s module of U_q(sl2).

The three operators are built as explicit matrices.  Their eigenbases are
generated by running the tridiagonal action forward from a seed vector, so
that every basis carries the normalization implied by the closed-form
tridiagonal coefficients.  Gauge: f_0 = g_0 = 1, xi_M = 1, and h_0 fixed by
the product identity for f_0/(g_0 h_0).
"""

from __future__ import annotations

import cmath
import time
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import mpmath
import numpy as np

from .errors import DegenerateParams, DomainError
from .params import (
    CYCLIC_TRIPLES,
    DIAM,
    LABELS,
    PLAIN,
    STAR,
    ParamSet,
    check_conditions,
    complete,
    is_cyclic,
)
from .qcalc import _MPView, k_coeff, nu0_coeff, qnum, qpoch, racah_eval, racah_poly
from .report import VerifyReport


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# spin representation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpinRep:
    qs3: np.ndarray
    qs3_inv: np.ndarray
    Sp: np.ndarray
    Sm: np.ndarray


def spin_rep(two_s: int, q: complex) -> SpinRep:
    """Matrices of q^{s3}, q^{-s3}, S+ and S- in the spin-s module (dim 2s+1)."""
    q = complex(q)
    if two_s < 1:
        raise DomainError("need 2s+1 >= 2")
    if q == 0 or abs(q * q - 1) < 1e-14:
        raise DomainError(f"inadmissible q = {q}")
    n = two_s + 1
    qh = cmath.sqrt(q)
    qs3 = np.diag([qh ** (two_s + 2 - 2 * k) for k in range(1, n + 1)])
    qs3_inv = np.diag([qh ** -(two_s + 2 - 2 * k) for k in range(1, n + 1)])
    Sp = np.zeros((n, n), complex)
    Sm = np.zeros((n, n), complex)
    for k in range(1, n):
        v = cmath.sqrt(qnum(k, q) * qnum(two_s + 1 - k, q))
        Sp[k - 1, k] = v
        Sm[k, k - 1] = v
    return SpinRep(_frozen(qs3), _frozen(qs3_inv), _frozen(Sp), _frozen(Sm))


# ---------------------------------------------------------------------------
# structure constants
# ---------------------------------------------------------------------------

def theta_s(p: ParamSet, label: str) -> complex:
    """b q^{2s} + c q^{-2s}, the eigenvalue at the middle index M = s."""
    b, c = p.bc(label)
    return b * p.q ** p.two_s + c * p.q ** (-p.two_s)


def omega(p: ParamSet, a: str, b: str, c: str) -> complex:
    q = p.q
    return -((q - 1 / q) ** 2) * (
        theta_s(p, a) * theta_s(p, b) - (q ** (p.two_s + 1) + q ** (-p.two_s - 1)) * theta_s(p, c) / p.r0
    )


def rho(p: ParamSet) -> complex:
    q = p.q
    return -((q * q - q ** -2) ** 2) / p.r0 ** 2


def eta(p: ParamSet) -> complex:
    return (p.q + 1 / p.q) / p.r0 * omega(p, PLAIN, DIAM, STAR)


def eta_star(p: ParamSet) -> complex:
    return (p.q + 1 / p.q) / p.r0 * omega(p, STAR, DIAM, PLAIN)


def qcomm(X: np.ndarray, Y: np.ndarray, q: complex) -> np.ndarray:
    """[X, Y]_q = q XY - q^{-1} YX."""
    return q * X @ Y - Y @ X / q


# ---------------------------------------------------------------------------
# tridiagonal coefficients
# ---------------------------------------------------------------------------

def _nz(x: complex, what: str) -> complex:
    if abs(x) < 1e-300:
        raise DegenerateParams(f"vanishing denominator in {what}", condition="(i)")
    return x


def _coef_formula(P, q, r0, t, row, col):
    """Entry (row, col) of A^b in the eigenbasis of A^a.

    ``P`` is ((ba, ca), (bb, cb), (bc, cc)); ``t`` = 2s.
    """
    (ba, ca), (bb, cb), (bc, cc) = P

    def low(M):  # entry (M, M-1)
        if M <= 0 or M > t:
            return 0j
        num = (q ** (2 - 2 * t) * (1 - q ** (2 * M)) * (ca - ba * q ** (2 * M + 2 * t))
               * (bb * bc * r0 * q ** (2 * t - 1) + ba * q ** (2 * M - 2))
               * (ca * cc * r0 / q + cb * q ** (2 * M - 2)))
        den = (ca - ba * q ** (4 * M - 2)) * (ca - ba * q ** (4 * M))
        return num / _nz(den, "lower tridiagonal coefficient")

    def up(M):  # entry (M-1, M)
        if M <= 0 or M > t:
            return 0j
        num = ((1 - q ** (2 * M - 2 * t - 2)) * (ca - ba * q ** (2 * M - 2))
               * (ca + bb * bc * r0 * q ** (2 * M + 2 * t - 1))
               * (cb + ba * cc * r0 * q ** (2 * M - 1)))
        den = (ca - ba * q ** (4 * M - 4)) * (ca - ba * q ** (4 * M - 2))
        return num / _nz(den, "upper tridiagonal coefficient")

    if row == col + 1:
        return low(col + 1)
    if row == col - 1:
        return up(col)
    if row == col:
        return (bb + cb) - up(col + 1) - low(col)
    return 0j


@dataclass(frozen=True)
class TridiagTable:
    """Coefficients of ``acting`` in the eigenbasis of ``basis``.

    ``lower[M]`` = entry (M, M-1), ``upper[M]`` = entry (M-1, M) and
    ``diag[M]`` = entry (M, M); out-of-range entries are zero.
    """

    acting: str
    basis: str
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def matrix(self) -> np.ndarray:
        n = len(self.diag)
        T = np.diag(self.diag).astype(complex)
        for M in range(1, n):
            T[M, M - 1] = self.lower[M]
            T[M - 1, M] = self.upper[M]
        return T


def tridiag_coeffs(p: ParamSet, acting: str, basis: str, exact: bool = False) -> TridiagTable:
    """Closed-form action of ``acting`` on the eigenbasis of ``basis``.

    When ``acting`` follows ``basis`` in the cycle the direct formula
    applies; otherwise the swapped parameter substitution is used.
    ``exact=True`` keeps the entries as computed (plain lists), so that
    mpmath inputs stay in extended precision.
    """
    if acting == basis:
        raise DomainError("acting and basis labels must differ")
    q, r0, t = p.q, p.r0, p.two_s
    if is_cyclic(basis, acting):
        a, b = basis, acting
        P = (p.bc(a), p.bc(b), p.bc(complete(a, b)))
    else:
        a, b = acting, basis
        (bc_, cc) = p.bc(complete(a, b))
        P = (p.bc(b), p.bc(a), (cc / q ** (2 * t), bc_ * q ** (2 * t)))
    n = t + 1
    lower = [_coef_formula(P, q, r0, t, M, M - 1) if M else 0j for M in range(n)]
    upper = [_coef_formula(P, q, r0, t, M - 1, M) if M else 0j for M in range(n)]
    diag = [_coef_formula(P, q, r0, t, M, M) for M in range(n)]
    if not exact:
        lower, diag, upper = _frozen(lower), _frozen(diag), _frozen(upper)
    return TridiagTable(acting, basis, lower, diag, upper)


# ---------------------------------------------------------------------------
# ladders
# ---------------------------------------------------------------------------

def _lad_f(p, k):
    (ba, ca), (bb, cb), (bc, cc) = p.bc(PLAIN), p.bc(STAR), p.bc(DIAM)
    q, r0 = p.q, p.r0
    return (ca * q ** (-2 * k - 2) + r0 / q * cb * bc) / (ba * q ** (2 * k) + r0 / q * cb * bc)


def _lad_g(p, k):
    (ba, ca), (bb, cb), (bc, cc) = p.bc(PLAIN), p.bc(STAR), p.bc(DIAM)
    q, r0 = p.q, p.r0
    return q ** (4 * k) * bb / cb * (cb * q ** (-2 * k) + r0 * q * ca * bc) / (bb * q ** (2 * k) + r0 / q * ca * bc)


def _lad_h(p, k):
    (ba, ca), (bb, cb), (bc, cc) = p.bc(PLAIN), p.bc(STAR), p.bc(DIAM)
    q, r0 = p.q, p.r0
    return q ** (4 * k) * bc / cc * (cc * q ** (-2 * k) + r0 * q * cb * ba) / (bc * q ** (2 * k) + r0 / q * cb * ba)


def _cumprod(fun, n, start=1 + 0j):
    out = [complex(start)]
    for k in range(n - 1):
        out.append(out[-1] * _nz(fun(k), "ladder factor"))
    return np.array(out)


def fgh0_closed(p: ParamSet) -> complex:
    """Closed form of f_0 / (h_0 g_0)."""
    q, r0, t = p.q, p.r0, p.two_s
    b, bs, bd = p.b, p.bstar, p.bdiam
    q2 = q * q
    num = qpoch([q2 * r0 ** 2 * b ** 2, q2 * r0 ** 2 * bd ** 2, q2 * r0 ** 2 * bs ** 2], q2, t)
    den = qpoch([-q * r0 * b * bd / bs, -q * r0 * b * bs / bd, -q * r0 * bd * bs / b], q2, t)
    return (-1) ** t * q ** (t * (t - 1)) * num / _nz(den, "f0/(g0 h0)")


def fgh0_sum(p: ParamSet) -> complex:
    """The same scalar as a finite sum over k-coefficients and g-ladder products."""
    abc = (PLAIN, STAR, DIAM)
    g = _cumprod(lambda k: _lad_g(p, k), p.dim)
    tot = sum(k_coeff(p, abc, M) * g[M] for M in range(p.dim))
    return nu0_coeff(p, (DIAM, PLAIN, STAR)) * tot


def orthogonality_sides(p: ParamSet, labels=(PLAIN, STAR, DIAM)) -> tuple[complex, complex]:
    """Both sides of the terminating sum identity behind the f0/(g0 h0) closed form.

    It is a limiting case of the q-Racah orthogonality relation.
    """
    (ba, _), (bb, cb), (bc, _) = (p.bc(x) for x in labels)
    q, r0, t = p.q, p.r0, p.two_s
    q2 = q * q
    lhs = 0j
    for M in range(t + 1):
        num = qpoch([-q * r0 * ba * bc / cb * q ** (2 * t), bb / cb, q ** (-2 * t)], q2, M)
        den = qpoch([-bb / (q * r0 * ba * bc) * q ** (2 - 2 * t), bb / cb * q ** (2 * t + 2), q2], q2, M)
        lhs += (num / den * (1 - bb / cb * q ** (4 * M)) / (1 - bb / cb)
                / (r0 * ba * bc / (q * bb)) ** M * q ** (M * (M - 1)))
    rhs = qpoch(q2 * r0 ** 2 * bb ** 2, q2, t) / qpoch(-q ** (1 - 2 * t) * bb / (r0 * ba * bc), q2, t)
    return complex(lhs), complex(rhs)


def orthogonality_residual(p: ParamSet) -> float:
    """Worst relative mismatch of :func:`orthogonality_sides` over the cyclic labellings."""
    out = 0.0
    for labels in CYCLIC_TRIPLES:
        lhs, rhs = orthogonality_sides(p, labels)
        out = max(out, abs(lhs - rhs) / abs(rhs))
    return out


def nu0_simplified(p: ParamSet, labels=(PLAIN, STAR, DIAM)) -> complex:
    """Simplified display of nu_0^{c,a,b} for labels (a, b, c)."""
    a, b, c = labels
    ba, bb, bc = p.bc(a)[0], p.bc(b)[0], p.bc(c)[0]
    q, r0, t = p.q, p.r0, p.two_s
    q2 = q * q
    num = qpoch([q2 * r0 ** 2 * ba ** 2, q2 * r0 ** 2 * bc ** 2], q2, t)
    den = qpoch([-q * r0 * ba * bb / bc, -q * r0 * bb * bc / ba], q2, t)
    return num / den / (-q * r0 * ba * bc / bb) ** t


def g_ladder_closed(p: ParamSet, M: int) -> complex:
    """Closed product of the first M g-ladder factors."""
    ba, ca = p.bc(PLAIN)
    bb, cb = p.bc(STAR)
    bc, cc = p.bc(DIAM)
    q, r0 = p.q, p.r0
    q2 = q * q
    return (qpoch(-q * r0 * bb * bc / ba, q2, M) / qpoch(-q * r0 * ba * cc / cb, q2, M)
            * q ** (M * (M - 1)) * (r0 * bc * ca / (q * bb)) ** (-M))


@dataclass(frozen=True)
class Ladders:
    f: np.ndarray
    g: np.ndarray
    h: np.ndarray
    f0: complex
    g0: complex
    h0: complex
    fgh0: complex
    fgh0_sum: complex


def ladder_scalars(p: ParamSet) -> Ladders:
    """f, g, h ladders in the gauge f_0 = g_0 = 1."""
    n = p.dim
    closed = fgh0_closed(p)
    h0 = 1 / closed
    f = _cumprod(lambda k: _lad_f(p, k), n)
    g = _cumprod(lambda k: _lad_g(p, k), n)
    h = _cumprod(lambda k: _lad_h(p, k), n, start=h0)
    return Ladders(_frozen(f), _frozen(g), _frozen(h), 1 + 0j, 1 + 0j, h0, closed, fgh0_sum(p))


# ---------------------------------------------------------------------------
# the triple
# ---------------------------------------------------------------------------

def _matrices_b(p: ParamSet, rep: SpinRep):
    q, r0, t = p.q, p.r0, p.two_s
    qh = cmath.sqrt(q)
    sr0 = cmath.sqrt(r0)
    sbd = cmath.sqrt(p.bdiam)
    scd = 1 / (r0 * sbd)  # branch fixed so that sqrt(bdiam)*sqrt(cdiam) = 1/r0
    qss = qh ** (t + 1)
    k = (q - 1 / q) / sr0
    qs3, qs3i, Sp, Sm = rep.qs3, rep.qs3_inv, rep.Sp, rep.Sm
    A = -k * sbd * qss * Sp @ qs3 + k * scd / qss * Sm @ qs3 + theta_s(p, PLAIN) * qs3 @ qs3
    As = -k * scd / qss * Sp @ qs3i + k * sbd * qss * Sm @ qs3i + theta_s(p, STAR) * qs3i @ qs3i
    return A, As


def adiam_from_commutator(p: ParamSet, A: np.ndarray, As: np.ndarray) -> np.ndarray:
    q, r0 = p.q, p.r0
    n = A.shape[0]
    return (r0 / (q * q - q ** -2) * qcomm(As, A, q)
            + r0 * omega(p, PLAIN, STAR, DIAM) / ((q - 1 / q) * (q * q - q ** -2)) * np.eye(n))


def adiam_explicit(p: ParamSet, rep: SpinRep) -> np.ndarray:
    """A-diamond written directly in the spin generators."""
    q, r0, t = p.q, p.r0, p.two_s
    qh = cmath.sqrt(q)
    sr0 = cmath.sqrt(r0)
    sbd = cmath.sqrt(p.bdiam)
    scd = 1 / (r0 * sbd)
    qs3, qs3i, Sp, Sm = rep.qs3, rep.qs3_inv, rep.Sp, rep.Sm
    n = t + 1
    th, ths, thd = theta_s(p, PLAIN), theta_s(p, STAR), theta_s(p, DIAM)
    return ((q ** (t - 1) * p.bdiam - q ** (1 - t) * p.cdiam) * (qs3 @ qs3 - qs3i @ qs3i) / (q + 1 / q)
            + (q - 1 / q) ** 2 / r0 * Sm @ Sm
            - (q - 1 / q) ** 2 / (q + 1 / q) * thd * Sm @ Sp
            + (q - 1 / q) * sr0 * Sm @ (qh ** (1 - t) * scd * ths * qs3i + qh ** (t - 1) * sbd * th * qs3)
            + r0 / (q + 1 / q) * (th * ths + omega(p, PLAIN, STAR, DIAM) / (q - 1 / q) ** 2) * np.eye(n))


def _null_vector(X: np.ndarray) -> np.ndarray:
    _, _, vh = np.linalg.svd(X)
    v = vh[-1].conj()
    return v / v[-1]


def _polish(X: np.ndarray, V: np.ndarray, spec) -> np.ndarray:
    """One inverse-iteration step per column, rescaled back onto the column.

    The forward recursion fixes the normalization but loses a few digits of
    direction for larger spins; this restores the direction without
    changing the scale.
    """
    n = X.shape[0]
    out = np.empty_like(V)
    scale = np.linalg.norm(X)
    for M in range(n):
        v = V[:, M]
        shift = spec[M] + 1e-9 * scale
        w = np.linalg.solve(X - shift * np.eye(n), v)
        out[:, M] = w * (np.vdot(w, v) / np.vdot(w, w))
    return out


def _recur(op: np.ndarray, v0: np.ndarray, tab: TridiagTable) -> np.ndarray:
    n = len(v0)
    V = [np.asarray(v0, complex)]
    for M in range(n - 1):
        w = op @ V[M] - tab.diag[M] * V[M]
        if M > 0:
            w = w - tab.upper[M] * V[M - 1]
        V.append(w / tab.lower[M + 1])
    return np.array(V).T


def _spectrum_gap(p: ParamSet):
    for lab in LABELS:
        th = np.array(p.spectrum(lab))
        scale = np.max(np.abs(th))
        d = np.abs(th[:, None] - th[None, :])
        np.fill_diagonal(d, np.inf)
        if d.min() <= 1e-8 * scale:
            raise DegenerateParams(f"condition (i): spectrum of {lab} has a repeated eigenvalue", condition="(i)")


@dataclass(frozen=True)
class TripleRealization:
    params: ParamSet
    mats: dict
    spectra: dict
    eigvecs: dict
    duals: dict
    ladders: Ladders
    rho: complex
    omega: dict
    eta: complex
    eta_star: complex
    adiam_residual: float
    rep: SpinRep = field(repr=False)

    @property
    def A(self):
        return self.mats[PLAIN]

    @property
    def Astar(self):
        return self.mats[STAR]

    @property
    def Adiam(self):
        return self.mats[DIAM]

    @property
    def xi(self) -> np.ndarray:
        return np.ones(self.params.dim)

    @cached_property
    def transitions(self) -> "TransitionSet":
        return transition_set(self)


def build_triple(p: ParamSet) -> TripleRealization:
    """Construct A, A*, A-diamond, their spectra and normalized eigenbases."""
    check_conditions(p)
    _spectrum_gap(p)
    rep = spin_rep(p.two_s, p.q)
    A, As = _matrices_b(p, rep)
    Ad = adiam_from_commutator(p, A, As)
    Ad_b = adiam_explicit(p, rep)
    res = float(np.linalg.norm(Ad - Ad_b) / np.linalg.norm(Ad))
    lad = ladder_scalars(p)

    th0 = p.theta(PLAIN, 0)
    Va = _recur(As, _null_vector(A - th0 * np.eye(p.dim)), tridiag_coeffs(p, STAR, PLAIN))
    Vs = _recur(A, Va.sum(axis=1), tridiag_coeffs(p, PLAIN, STAR))
    Vd = _recur(As, Vs @ lad.g, tridiag_coeffs(p, STAR, DIAM))
    vecs = {PLAIN: Va, STAR: Vs, DIAM: Vd}
    mats = {PLAIN: A, STAR: As, DIAM: Ad}
    vecs = {k: _polish(mats[k], v, p.spectrum(k)) for k, v in vecs.items()}
    duals = {k: _frozen(np.linalg.inv(v)) for k, v in vecs.items()}
    om = {abc: omega(p, *abc) for abc in _all_ordered_triples()}
    return TripleRealization(
        params=p,
        mats={PLAIN: _frozen(A), STAR: _frozen(As), DIAM: _frozen(Ad)},
        spectra={lab: _frozen(p.spectrum(lab)) for lab in LABELS},
        eigvecs={k: _frozen(v) for k, v in vecs.items()},
        duals=duals,
        ladders=lad,
        rho=rho(p),
        omega=om,
        eta=eta(p),
        eta_star=eta_star(p),
        adiam_residual=res,
        rep=rep,
    )


@lru_cache(maxsize=32)
def get_triple(p: ParamSet) -> TripleRealization:
    """Memoized :func:`build_triple`; realizations are immutable."""
    return build_triple(p)


def _all_ordered_triples():
    return [(a, b, complete(a, b)) for a in LABELS for b in LABELS if a != b]


def dual_basis(t: TripleRealization, label: str = PLAIN):
    """Dual covectors (rows) of the eigenbasis of ``label`` and the xi values."""
    return t.duals[label], np.ones(t.params.dim)


# ---------------------------------------------------------------------------
# Askey-Wilson relations
# ---------------------------------------------------------------------------

def aw_residuals(t: TripleRealization) -> dict:
    p = t.params
    q, r0 = p.q, p.r0
    n = p.dim
    I = np.eye(n)
    M = t.mats
    out = {}
    for a, b, c in _all_ordered_triples():
        Xa, Xb = M[a], M[b]
        om_abc = omega(p, a, b, c)
        eta_term = (q + 1 / q) / r0 * omega(p, a, c, b)
        lhs = qcomm(Xa, qcomm(Xa, Xb, q), 1 / q)
        resid = lhs - t.rho * Xb - om_abc * Xa - eta_term * I
        scale = (np.linalg.norm(Xa) ** 2 * np.linalg.norm(Xb) * (abs(q) + 1 / abs(q)) ** 2
                 + abs(t.rho) * np.linalg.norm(Xb) + abs(om_abc) * np.linalg.norm(Xa) + abs(eta_term) * np.sqrt(n))
        out[f"AW[{a},{b}]"] = float(np.linalg.norm(resid) / scale)
    for a, b, c in CYCLIC_TRIPLES:
        om_abc = omega(p, a, b, c)
        coef = r0 * om_abc / ((q - 1 / q) * (q * q - q ** -2))
        pref = r0 / (q * q - q ** -2)
        resid = pref * qcomm(M[b], M[a], q) - M[c] + coef * I
        scale = (abs(pref) * np.linalg.norm(M[a]) * np.linalg.norm(M[b]) * (abs(q) + 1 / abs(q))
                 + np.linalg.norm(M[c]) + abs(coef) * np.sqrt(n))
        out[f"Z3[{a},{b},{c}]"] = float(np.linalg.norm(resid) / scale)
    return out


def aw_verify(t: TripleRealization, tol: float = 1e-10) -> VerifyReport:
    """All six ordered Askey-Wilson relations and the three cyclic forms."""
    t0 = time.perf_counter()
    rep = VerifyReport("askey-wilson", t.params.digest())
    for name, r in aw_residuals(t).items():
        rep.add(name, r, tol)
    rep.runtime = time.perf_counter() - t0
    return rep


def triple_with_matrices(t: TripleRealization, mats: dict) -> TripleRealization:
    """Copy of ``t`` with some matrices replaced (used to test the checks)."""
    new = dict(t.mats)
    new.update({k: _frozen(v) for k, v in mats.items()})
    return TripleRealization(t.params, new, t.spectra, t.eigvecs, t.duals, t.ladders, t.rho,
                             t.omega, t.eta, t.eta_star, t.adiam_residual, t.rep)


# ---------------------------------------------------------------------------
# transition matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransitionSet:
    """Closed-form transition matrices for the three cyclic pairs.

    ``P[(a, b)][M, N] = k_N R_M(theta^b_N)`` and ``Pinv[(a, b)]`` is the
    closed-form inverse.  The eigenbases are related by

    * V_star = V_plain @ P[(A, Astar)]
    * V_diam = V_star @ diag(g) @ P[(Astar, Adiam)]
    * V_plain = V_diam @ diag(h) @ P[(Adiam, A)] @ diag(1/f)
    """

    P: dict
    Pinv: dict
    k: dict
    nu0: dict
    ladders: Ladders

    def weighted(self, pair) -> np.ndarray:
        """The actual change of basis V_a^{-1} V_b implied by the ladders."""
        lad = self.ladders
        if pair == (PLAIN, STAR):
            return self.P[pair]
        if pair == (STAR, DIAM):
            return np.diag(lad.g) @ self.P[pair]
        if pair == (DIAM, PLAIN):
            return np.diag(lad.h) @ self.P[pair] @ np.diag(1 / lad.f)
        raise DomainError(f"no weighted transition for {pair}")


def transition_matrices(p: ParamSet, a: str, b: str):
    c = complete(a, b)
    n = p.dim
    abc = (a, b, c)
    R = np.array([[racah_poly(p, abc, M, N) for N in range(n)] for M in range(n)])
    kN = np.array([k_coeff(p, abc, N) for N in range(n)])
    kM = np.array([k_coeff(p, (b, a, c), M) for M in range(n)])
    nu = nu0_coeff(p, abc)
    P = R * kN[None, :]
    Pinv = (R * kM[:, None]).T / nu
    return P, Pinv, kN, nu


def transition_set(t: TripleRealization) -> TransitionSet:
    p = t.params
    P, Pinv, ks, nus = {}, {}, {}, {}
    for a, b, c in CYCLIC_TRIPLES:
        P[(a, b)], Pinv[(a, b)], ks[(a, b)], nus[(a, b)] = (
            _frozen(x) if isinstance(x, np.ndarray) else x for x in transition_matrices(p, a, b))
    return TransitionSet(P, Pinv, ks, nus, t.ladders)


def inverse_residual(P: np.ndarray, Pinv: np.ndarray) -> float:
    """Componentwise residual max |P Pinv - I| / (|P| |Pinv|).

    The absolute residual is bounded below by roughly eps * |P| |Pinv|,
    which grows quickly with the spin, so entries are compared to that scale.
    """
    E = np.abs(P @ Pinv - np.eye(P.shape[0]))
    return float(np.max(E / (np.abs(P) @ np.abs(Pinv))))


def change_of_basis(t: TripleRealization, a: str, b: str) -> np.ndarray:
    """Numerical V_a^{-1} V_b from the constructed eigenbases."""
    return t.duals[a] @ t.eigvecs[b]


# ---------------------------------------------------------------------------
# structural checks
# ---------------------------------------------------------------------------

def _outer_norms(D: np.ndarray, V: np.ndarray) -> np.ndarray:
    return np.outer(np.linalg.norm(D, axis=1), np.linalg.norm(V, axis=0))


def tridiagonality(t: TripleRealization):
    """Max far-off-diagonal size and min off-diagonal size, all ordered pairs.

    Entry (i, j) is measured against |row i of V_a^-1| ||B|| |column j of V_a|,
    which bounds its rounding error and is blind to how the eigenvectors
    happen to be scaled.
    """
    worst_far, worst_near = 0.0, np.inf
    for a in LABELS:
        D, V = t.duals[a], t.eigvecs[a]
        for b in LABELS:
            if a == b:
                continue
            T = D @ t.mats[b] @ V
            scale = _outer_norms(D, V) * np.linalg.norm(t.mats[b], 2)
            rel = np.abs(T) / scale
            i, j = np.indices(T.shape)
            far = np.abs(i - j) > 1
            near = np.abs(i - j) == 1
            if far.any():
                worst_far = max(worst_far, float(rel[far].max()))
            worst_near = min(worst_near, float(rel[near].min()))
    return worst_far, worst_near


def transition_residual(t: TripleRealization, a: str, b: str) -> float:
    """Gap between V_a^-1 V_b and the closed-form weighted transition.

    Each entry is scaled by its rounding bound and the result by the larger
    eigenbasis condition number: the eigenvectors themselves are only known
    to about eps * cond, which grows quickly with the spin.
    """
    D, V = t.duals[a], t.eigvecs[b]
    num = D @ V
    cond = max(np.linalg.cond(t.eigvecs[a]), np.linalg.cond(V))
    return float(np.max(np.abs(num - t.transitions.weighted((a, b))) / _outer_norms(D, V)) / cond)


def transition_mp(p: ParamSet, dps: int = 40) -> np.ndarray:
    """V_A^-1 V_A* from eigenbases built exactly as in :func:`build_triple`, at ``dps`` digits.

    The forward recursion loses roughly cond(V) in double precision, which
    at larger spin swamps small transition entries; this rebuild keeps the
    numerical route independent of the 4phi3 evaluation while making its
    rounding negligible.
    """
    with mpmath.workdps(dps):
        v = _MPView(p)
        q, r0, t = v.q, v.r0, p.two_s
        n = t + 1
        qh = mpmath.sqrt(q)
        qs3 = [qh ** (t + 2 - 2 * k) for k in range(1, n + 1)]
        spm = [mpmath.sqrt(qnum(k, q) * qnum(t + 1 - k, q)) for k in range(1, n)]
        sbd = mpmath.sqrt(v.bc(DIAM)[0])
        scd = 1 / (r0 * sbd)
        qss = qh ** (t + 1)
        kk = (q - 1 / q) / mpmath.sqrt(r0)
        th, ths = theta_s(v, PLAIN), theta_s(v, STAR)
        A = mpmath.matrix(n, n)
        As = mpmath.matrix(n, n)
        for i in range(n):
            A[i, i] = th * qs3[i] ** 2
            As[i, i] = ths / qs3[i] ** 2
        for i in range(n - 1):
            # S+ sits at (i, i+1), S- at (i+1, i)
            A[i, i + 1] = -kk * sbd * qss * spm[i] * qs3[i + 1]
            A[i + 1, i] = kk * scd / qss * spm[i] * qs3[i]
            As[i, i + 1] = -kk * scd / qss * spm[i] / qs3[i + 1]
            As[i + 1, i] = kk * sbd * qss * spm[i] / qs3[i]
        b0, c0 = v.bc(PLAIN)
        X = A - (b0 + c0) * mpmath.eye(n)
        x, _ = mpmath.qr_solve(X[:, : n - 1], -X[:, n - 1])
        v0 = mpmath.matrix([x[i] for i in range(n - 1)] + [1])

        def recur(op, start, tab):
            cols = [start]
            for M in range(n - 1):
                w = op * cols[M] - cols[M] * mpmath.mpc(tab.diag[M])
                if M > 0:
                    w = w - cols[M - 1] * mpmath.mpc(tab.upper[M])
                cols.append(w / mpmath.mpc(tab.lower[M + 1]))
            out = mpmath.matrix(n, n)
            for j, c in enumerate(cols):
                for i in range(n):
                    out[i, j] = c[i]
            return out

        Va = recur(As, v0, tridiag_coeffs(v, STAR, PLAIN, exact=True))
        rowsum = mpmath.matrix([sum(Va[i, j] for j in range(n)) for i in range(n)])
        Vs = recur(A, rowsum, tridiag_coeffs(v, PLAIN, STAR, exact=True))
        T = mpmath.inverse(Va) * Vs
        return np.array([[complex(T[i, j]) for j in range(n)] for i in range(n)])


def racah_entry_residual(t: TripleRealization) -> float:
    """Entrywise relative gap between the numerical A -> A* transition over k_N and the 4phi3 values."""
    p = t.params
    pair = (PLAIN, STAR)
    num = transition_mp(p) / t.transitions.k[pair][None, :]
    R = np.array([[racah_eval(p, pair, M, N) for N in range(p.dim)] for M in range(p.dim)])
    return float(np.max(np.abs(num - R) / np.abs(R)))


def fgh0_consistency(t: TripleRealization) -> float:
    """Componentwise deviation of the ladder-consistency identity.

    For every (M', N), h_N [P(A,A*) diag(g) P(A*,A_diam)]_{M'N} must equal
    f0/(g0 h0) f_{M'} [P(A_diam,A)^-1]_{M'N}.  Entries of the product can be
    tiny after cancellation, so each difference is scaled by the magnitude
    of the terms that produced it rather than by the entry itself.
    """
    ts = t.transitions
    p = t.params
    n = p.dim
    f = _cumprod(lambda k: _lad_f(p, k), n)
    g = _cumprod(lambda k: _lad_g(p, k), n)
    h = _cumprod(lambda k: _lad_h(p, k), n)
    P1 = ts.P[(PLAIN, STAR)]
    P2 = ts.P[(STAR, DIAM)]
    lhs = (P1 @ np.diag(g) @ P2) * h[None, :]
    rhs = t.ladders.fgh0 * ts.Pinv[(DIAM, PLAIN)] * f[:, None]
    scale = (np.abs(P1) @ np.diag(np.abs(g)) @ np.abs(P2)) * np.abs(h)[None, :] + np.abs(rhs)
    return float(np.max(np.abs(lhs - rhs) / scale))


def diamond_two_route(t: TripleRealization) -> float:
    """A-diamond eigenbasis built from the A* basis vs from the A basis (componentwise)."""
    ts = t.transitions
    lad = t.ladders
    c_star = np.diag(lad.g) @ ts.P[(STAR, DIAM)]
    c_plain = np.diag(lad.f) @ ts.Pinv[(DIAM, PLAIN)] @ np.diag(1 / lad.h)
    via_star = t.eigvecs[STAR] @ c_star
    via_plain = t.eigvecs[PLAIN] @ c_plain
    scale = np.abs(t.eigvecs[STAR]) @ np.abs(c_star) + np.abs(t.eigvecs[PLAIN]) @ np.abs(c_plain)
    return float(np.max(np.abs(via_star - via_plain) / scale))


def triple_report(t: TripleRealization, tol: float = 1e-10) -> VerifyReport:
    """Full structural suite used by the ``triple`` command."""
    t0 = time.perf_counter()
    p = t.params
    rep = aw_verify(t, tol)
    rep.title = "triple"
    rep.add("Adiam explicit vs commutator", t.adiam_residual, tol)
    for lab in LABELS:
        V = t.eigvecs[lab]
        r = np.linalg.norm(t.mats[lab] @ V - V * t.spectra[lab][None, :]) / (
            np.linalg.norm(t.mats[lab]) * np.linalg.norm(V))
        rep.add(f"eigenvectors {lab}", r, tol)
    far, near = tridiagonality(t)
    rep.add("tridiagonal action (far entries)", far, tol)
    rep.add("irreducible action (1/min off-diagonal)", 1.0 / near if near > 0 else np.inf, 1e12)
    ts = t.transitions
    for pair in ts.P:
        r = inverse_residual(ts.P[pair], ts.Pinv[pair])
        rep.add(f"P P^-1 = I {pair[0]},{pair[1]}", r, tol)
        # numerical eigenbases carry recursion error on top of rounding
        rep.add(f"eigenbasis transition {pair[0]},{pair[1]}", transition_residual(t, *pair), 1e2 * tol)
    rep.add("P(A,A*)/k_N vs racah_eval, entrywise", racah_entry_residual(t), 10 * tol)
    lad = t.ladders
    rep.add("orthogonality sum identity", orthogonality_residual(p), tol)
    rep.add("f0/(g0 h0): closed vs sum", abs(lad.fgh0 - lad.fgh0_sum) / abs(lad.fgh0), tol)
    rep.add("f0/(g0 h0): closed vs every (M', N)", fgh0_consistency(t), tol)
    rep.add("diamond basis: two routes", diamond_two_route(t), tol)
    rep.runtime = time.perf_counter() - t0
    return rep
