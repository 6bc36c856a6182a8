"""Off-shell Bethe states as explicit vectors and their scalar products.

With the gauge parameter beta = 0, a string of B-operators acting on a
reference state collapses to a polynomial in A-diamond,

    |Psi^eps(u)> = G^eps(u) * prod_i (U_i - kappa A_diam) |Omega^eps>,

with kappa = r0/(q + 1/q), |Omega^-> = |theta_0> and |Omega^+> = |theta*_0>.
The closed-form scalar products <theta_M|Psi>/<theta_M|theta_M> are sums over
the A-diamond spectrum weighted by the inverse transition matrix between the
A-diamond and A eigenbases.  Both routes are implemented so they can be
compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
import numpy as np

from .bethe import HOM, INHOM, BetheRootSet, make_root_set, relative_residuals, sym_root
from .errors import DomainError, InterpolationDegenerate, KindMismatch, RootExtractionFailure
from .params import DIAM, PLAIN, STAR, ParamSet
from .qcalc import k_coeff, nu0_coeff, racah_poly
from .triple import get_triple, tridiag_coeffs

THEOREM, DIRECT = "theorem", "direct"


def _b(x):
    return x - 1 / x


def _eps(eps: int) -> int:
    if eps not in (1, -1):
        raise DomainError("epsilon must be +1 or -1")
    return eps


def _us(us) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(us, dtype=complex))
    if (arr == 0).any():
        raise DomainError("Bethe variables must be nonzero")
    return arr


def prefactor(p: ParamSet, eps: int, us) -> complex:
    """Scalar G^eps(u) multiplying the A-diamond polynomial."""
    eps = _eps(eps)
    us = _us(us)
    q, m = p.q, len(us)
    base = eps * (q + 1 / q) * q ** (-eps * (m + 1)) * (p.b if eps == -1 else p.cstar)
    return complex(base ** m * np.prod(_b(us * us) * us ** (-eps)))


def poly_in_adiam(p: ParamSet, U, X: np.ndarray) -> np.ndarray:
    """prod_i (U_i I - kappa X) for a square matrix X."""
    out = np.eye(X.shape[0], dtype=complex)
    for Ui in U:
        out = out @ (Ui * np.eye(X.shape[0]) - p.kappa * X)
    return out


def string_b_matrix(p: ParamSet, eps: int, us) -> tuple[np.ndarray, complex]:
    """The A-diamond polynomial matrix and the scalar G for variables ``us``."""
    us = _us(us) if len(us) else np.zeros(0, complex)
    t = get_triple(p)
    U = sym_root(p.q, us)
    return poly_in_adiam(p, U, t.Adiam), prefactor(p, eps, us)


@dataclass(frozen=True)
class OffShellState:
    epsilon: int
    u: tuple
    vector: np.ndarray
    prefactor: complex
    # coefficients over the A-diamond eigenbasis; sum(c_k |theta_diam_k>) == vector
    diam_coeffs: np.ndarray = field(repr=False)
    # m0 cancels against alpha and G when beta = 0; kept only as a record
    m0: int | None = None


def reference_state(p: ParamSet, eps: int) -> np.ndarray:
    t = get_triple(p)
    return t.eigvecs[PLAIN][:, 0] if _eps(eps) == -1 else t.eigvecs[STAR][:, 0]


def _reference_in_diam(p: ParamSet, eps: int) -> np.ndarray:
    """Closed-form components of the reference state in the A-diamond eigenbasis."""
    tr = get_triple(p).transitions
    lad = tr.ladders
    if eps == -1:
        # V_plain = V_diam diag(h) P(diam, plain) diag(1/f)
        return lad.h * tr.P[(DIAM, PLAIN)][:, 0] / lad.f[0]
    # V_star = V_diam Pinv(star, diam) diag(1/g)
    return tr.Pinv[(STAR, DIAM)][:, 0] / lad.g[0]


def off_shell_state(p: ParamSet, eps: int, us) -> OffShellState:
    eps = _eps(eps)
    us = _us(us) if len(us) else np.zeros(0, complex)
    Mx, G = string_b_matrix(p, eps, us)
    vec = G * (Mx @ reference_state(p, eps))
    U = sym_root(p.q, us)
    nodes = p.kappa * np.array(p.spectrum(DIAM))
    vals = np.array([np.prod(U - x) for x in nodes])
    coeffs = G * _reference_in_diam(p, eps) * vals
    return OffShellState(eps, tuple(complex(u) for u in us), vec, G, coeffs)


def expansion_residual(p: ParamSet, st: OffShellState) -> float:
    """Relative mismatch between the vector and its re-summed diamond expansion."""
    Vd = get_triple(p).eigvecs[DIAM]
    resum = Vd @ st.diam_coeffs
    scale = max(np.linalg.norm(st.vector), np.abs(st.diam_coeffs) @ np.linalg.norm(Vd, axis=0))
    return float(np.linalg.norm(resum - st.vector) / scale)


@dataclass(frozen=True)
class ScalarProductValue:
    M: int
    epsilon: int
    value: complex
    route: str


def _diam_values(p: ParamSet, U) -> np.ndarray:
    nodes = p.kappa * np.array(p.spectrum(DIAM))
    return np.array([np.prod(np.asarray(U) - x) for x in nodes])


def _check_M(p: ParamSet, M: int):
    if not 0 <= M <= p.two_s:
        raise DomainError(f"M must lie in 0..{p.two_s}")


def scalar_theorem(p: ParamSet, eps: int, M: int, us) -> ScalarProductValue:
    """Closed-form <theta_M|Psi^eps(u)> / <theta_M|theta_M>."""
    eps = _eps(eps)
    _check_M(p, M)
    us = _us(us) if len(us) else np.zeros(0, complex)
    tr = get_triple(p).transitions
    lad = tr.ladders
    Pinv = tr.Pinv[(DIAM, PLAIN)]
    G = prefactor(p, eps, us)
    vals = _diam_values(p, sym_root(p.q, us))
    if eps == -1:
        val = G * lad.f[M] / lad.f[0] * np.sum(Pinv[M] * vals)
    else:
        nu = nu0_coeff(p, (STAR, DIAM, PLAIN))
        val = G * lad.f[M] / (lad.g[0] * nu) * np.sum(Pinv[M] * vals / lad.h)
    return ScalarProductValue(M, eps, complex(val), THEOREM)


def scalar_direct(p: ParamSet, eps: int, M: int, us) -> ScalarProductValue:
    """Dual covector of theta_M contracted with the explicit state, over xi_M."""
    _check_M(p, M)
    t = get_triple(p)
    st = off_shell_state(p, eps, us)
    return ScalarProductValue(M, eps, complex(t.duals[PLAIN][M] @ st.vector / t.xi[M]), DIRECT)


def scalar_residual(p: ParamSet, eps: int, M: int, us) -> float:
    """Relative theorem-vs-direct residual, scaled by the size of the state."""
    a = scalar_theorem(p, eps, M, us).value
    b = scalar_direct(p, eps, M, us).value
    t = get_triple(p)
    st = off_shell_state(p, eps, us)
    # |<theta_M|psi>| can cancel far below the size of the state itself
    scale = max(abs(b), np.abs(t.duals[PLAIN][M]) @ np.abs(st.vector))
    return abs(a - b) / scale if scale else abs(a - b)


# ---------------------------------------------------------------------------
# normalization of on-shell states
# ---------------------------------------------------------------------------

def _hom_norm(p: ParamSet, eps: int, us) -> complex:
    q = p.q
    if eps == -1:
        low = tridiag_coeffs(p, STAR, PLAIN).lower
        facs = [q * u * _b(u * u) * low[k] for k, u in enumerate(us, start=1)]
    else:
        low = tridiag_coeffs(p, PLAIN, STAR).lower
        facs = [-_b(u * u) / (q * u) * low[k] for k, u in enumerate(us, start=1)]
    den = np.prod(facs) if facs else 1
    if den == 0:
        raise DomainError("vanishing tridiagonal coefficient in normalization")
    return complex(1 / den)


def norm_factors(p: ParamSet, roots: BetheRootSet) -> complex:
    """Scalar turning the on-shell state at ``roots`` into an eigenvector.

    Homogeneous, eps=-1: N_M with N_M |Psi^-> = |theta_M>.
    Homogeneous, eps=+1: N*_N with N*_N |Psi^+> = |theta*_N>.
    Inhomogeneous, eps=-1 at level N: N_{2s} P_{2s,N} with the result |theta*_N>.
    Inhomogeneous, eps=+1 at level M: N*_{2s} Pinv_{2s,M} with the result |theta_M>.
    """
    eps = roots.epsilon
    us = list(roots.u_roots)
    base = _hom_norm(p, eps, us)
    if roots.kind == HOM:
        return base
    if roots.level is None:
        raise DomainError("inhomogeneous normalization needs a level")
    tr = get_triple(p).transitions
    P = tr.P[(PLAIN, STAR)]
    Pi = tr.Pinv[(PLAIN, STAR)]
    t = p.two_s
    return base * (P[t, roots.level] if eps == -1 else Pi[t, roots.level])


def on_shell_vector(p: ParamSet, roots: BetheRootSet) -> np.ndarray:
    return norm_factors(p, roots) * off_shell_state(p, roots.epsilon, roots.u_roots).vector


def target_eigenvector(p: ParamSet, roots: BetheRootSet) -> np.ndarray:
    """The eigenvector the normalized on-shell state should reproduce."""
    t = get_triple(p)
    lvl = roots.level
    if roots.kind == HOM:
        lab = PLAIN if roots.epsilon == -1 else STAR
    else:
        lab = STAR if roots.epsilon == -1 else PLAIN
    return t.eigvecs[lab][:, lvl]


# ---------------------------------------------------------------------------
# q-Racah decompositions
# ---------------------------------------------------------------------------

def _racah_weights(p: ParamSet, M: int) -> np.ndarray:
    """k_{M'} R_{M'}(theta_M) along the diamond index M'."""
    abc = (PLAIN, DIAM, STAR)
    return np.array([k_coeff(p, abc, m) * racah_poly(p, (DIAM, PLAIN, STAR), m, M)
                     for m in range(p.dim)])


def racah_from_hom(p: ParamSet, M: int, hom_roots) -> complex:
    """R_M(theta*_N) from the homogeneous eps=+1 roots at level N."""
    _check_M(p, M)
    lad = get_triple(p).ladders
    U = hom_roots.sym_roots if isinstance(hom_roots, BetheRootSet) else hom_roots
    vals = _diam_values(p, U) / lad.h
    num = lad.f[M] * np.sum(_racah_weights(p, M) * vals)
    den = lad.f[0] * np.sum(_racah_weights(p, 0) * vals)
    return complex(num / den)


def racah_from_inhom(p: ParamSet, M: int, inhom_roots) -> complex:
    """R_M(theta*_N) from the 2s inhomogeneous eps=-1 roots at level N."""
    _check_M(p, M)
    lad = get_triple(p).ladders
    U = inhom_roots.sym_roots if isinstance(inhom_roots, BetheRootSet) else inhom_roots
    vals = _diam_values(p, U)
    num = lad.f[M] * np.sum(_racah_weights(p, M) * vals)
    den = lad.f[0] * np.sum(_racah_weights(p, 0) * vals)
    return complex(num / den)


def racah_decompositions(p: ParamSet, M: int, N: int, hom_roots, inhom_roots) -> tuple[complex, complex]:
    """(homogeneous-type, inhomogeneous-type) values of R_M(theta*_N)."""
    for rs, kind, eps in ((hom_roots, HOM, 1), (inhom_roots, INHOM, -1)):
        if isinstance(rs, BetheRootSet):
            if rs.kind != kind or rs.epsilon != eps:
                raise KindMismatch(f"expected {kind} roots with eps={eps:+d}")
            if rs.level is not None and rs.level != N:
                raise KindMismatch(f"roots are for level {rs.level}, not {N}")
    return racah_from_hom(p, M, hom_roots), racah_from_inhom(p, M, inhom_roots)


# ---------------------------------------------------------------------------
# inhomogeneous roots from homogeneous ones
# ---------------------------------------------------------------------------

def _monic_from_values(nodes: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """Coefficients (highest first) of the interpolant, scaled to be monic."""
    n = len(nodes)
    poly = np.zeros(n, dtype=complex)
    for j in range(n):
        others = np.delete(nodes, j)
        basis = np.poly(others)
        poly += vals[j] * basis / np.prod(nodes[j] - others)
    lead = poly[0]
    if abs(lead) <= 1e-14 * np.abs(poly).max():
        raise InterpolationDegenerate("interpolant has vanishing leading coefficient")
    return poly / lead


def _mp_roots(nodes, vals, deg):
    with mpmath.workdps(60):
        xs = [mpmath.mpc(x) for x in nodes]
        ys = [mpmath.mpc(v) for v in vals]
        coeffs = [mpmath.mpc(0)] * (deg + 1)  # highest first
        for j in range(len(xs)):
            basis = [mpmath.mpc(1)]
            den = mpmath.mpc(1)
            for k, xk in enumerate(xs):
                if k == j:
                    continue
                basis = [a - xk * b for a, b in zip(basis + [0], [0] + basis)]
                den *= xs[j] - xk
            for i in range(deg + 1):
                coeffs[i] += ys[j] * basis[i] / den
        lead = coeffs[0]
        coeffs = [c / lead for c in coeffs]
        rts = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
        return np.array([complex(r) for r in rts])


def inhom_from_hom(p: ParamSet, N: int, hom_roots) -> BetheRootSet:
    """The inhomogeneous eps=-1 root set at level N built from homogeneous eps=+1 roots.

    Equating the two q-Racah decompositions for every M forces the degree-2s
    monic polynomial prod_j (x - U_j) to be proportional to
    prod_i (U^h_i - x) / h_{M'} at the nodes x = kappa theta_diam_{M'}.
    """
    _check_M(p, N)
    if isinstance(hom_roots, BetheRootSet):
        if hom_roots.kind != HOM or hom_roots.epsilon != 1:
            raise KindMismatch("need homogeneous roots with eps=+1")
        Uh = np.array(hom_roots.sym_roots, dtype=complex)
    else:
        Uh = np.asarray(hom_roots, dtype=complex)
    if len(Uh) != N:
        raise KindMismatch(f"level {N} needs {N} homogeneous roots, got {len(Uh)}")
    nodes = p.kappa * np.array(p.spectrum(DIAM))
    scale = np.abs(nodes).max()
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if abs(nodes[i] - nodes[j]) <= 1e-12 * scale:
                raise InterpolationDegenerate("diamond spectrum nodes collide")
    vals = _diam_values(p, Uh) / get_triple(p).ladders.h
    deg = p.two_s
    coeffs = _monic_from_values(nodes, vals)
    U = np.roots(coeffs)

    def poly_residual(rts):
        rts = np.asarray(rts)
        fit = np.array([np.prod(x - rts) for x in nodes])
        lam = np.vdot(fit, vals) / np.vdot(fit, fit)
        return np.linalg.norm(lam * fit - vals) / np.linalg.norm(vals)

    res = poly_residual(U)
    if not res < 1e-6:
        U = _mp_roots(nodes, vals, deg)
        res = poly_residual(U)
        if not res < 1e-6:
            raise RootExtractionFailure(f"root extraction residual {res:.2e}")
    if len(U) != deg:
        raise RootExtractionFailure("wrong number of roots")
    rs = make_root_set(p, -1, INHOM, U, level=N)
    return rs
