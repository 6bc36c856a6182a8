"""Belliard-Slavnov linear system for normalized off-shell scalar products.

For 2s+1 distinct variables Y = (y_1, ..., y_{2s+1}) write Y_k for Y with
y_k removed.  The action of A on the off-shell states |Psi^eps(Y_j)> closes
on that family through a matrix L, so the scalar products
X_k = <theta_M|Psi^eps(Y_k)>/<theta_M|theta_M> lie in the kernel of
L - theta_M I.  The kernel is one-dimensional, which gives a numerical
stand-in for the Cramer-rule determinant formula at general spin; at spin
1/2 the explicit minors are available and implemented as well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import closed_forms as cf
from .bethe import _lambda1, _lambda2, nu_coeff, solve_inhom, sym_root
from .errors import DomainError, RankDeficiencyUnexpected, SpinMismatch
from .params import PLAIN, ParamSet
from .report import VerifyReport
from .scalprod import off_shell_state, scalar_theorem
from .triple import get_triple

RANK_GAP = 1e8


def _b(x):
    return x - 1 / x


def _nz(x, what):
    if abs(x) < 1e-300 or not np.isfinite(x):
        raise DomainError(f"pole: {what}")
    return x


def g_prod(q: complex, u: complex, us) -> complex:
    """g(u, us) = prod_i 1 / (b(u/u_i) b(q u u_i))."""
    out = 1 + 0j
    for v in us:
        out /= _nz(_b(u / v) * _b(q * u * v), "b(u/v) b(quv)")
    return out


def y_eps(p: ParamSet, eps: int, u: complex, us) -> complex:
    """Y_eps(u | us); the zeta-product term is present only for eps = +1."""
    if eps not in (1, -1):
        raise DomainError("epsilon must be +1 or -1")
    q, t, z = p.q, p.two_s, p.zeta
    u = complex(u)
    d1 = _nz(_b(u * u) * _b(q * u * u), "b(u^2) b(qu^2)")
    d2 = _nz(_b(u * u) * _b(q * q * u * u), "b(u^2) b(q^2u^2)")
    p1 = np.prod([_b(u / (q * v)) * _b(u * v) for v in us]) if len(us) else 1
    p2 = np.prod([_b(q * u / v) * _b(q * q * u * v) for v in us]) if len(us) else 1
    out = u ** (2 * eps + 1) * _lambda1(p, eps, u) / d1 * p1
    out += q ** (-eps - 1) / u * _lambda2(p, eps, u) / d2 * p2
    if eps == 1:
        qh = np.sqrt(complex(q))
        zp = 1 + 0j
        for k in range(t + 1):
            c = qh ** (1 + 2 * k - t)
            zp *= _b(c * u * z) * _b(c * u / z)
        out -= nu_coeff(p, 1) * zp
    return complex(out)


@dataclass(frozen=True)
class BSSystem:
    params: ParamSet
    epsilon: int
    M: int
    ys: tuple
    L: np.ndarray
    matrix: np.ndarray
    theta: complex
    eta: complex
    eta_star: complex
    rho: complex

    def subset(self, k: int) -> list:
        """Y_k: all variables but the k-th (0-based)."""
        return [y for i, y in enumerate(self.ys) if i != k]


def _check_ys(p: ParamSet, ys) -> np.ndarray:
    ys = np.asarray(ys, dtype=complex)
    if len(ys) != p.dim:
        raise DomainError(f"need {p.dim} variables, got {len(ys)}")
    if (ys == 0).any():
        raise DomainError("variables must be nonzero")
    U = sym_root(p.q, ys)
    scale = max(np.abs(U).max(), 1.0)
    for i in range(len(U)):
        for j in range(i + 1, len(U)):
            if abs(U[i] - U[j]) <= 1e-8 * scale:
                raise DomainError("variables must be distinct")
    return ys


def build_system(p: ParamSet, eps: int, M: int, ys) -> BSSystem:
    """Assemble L and L - theta_M I for the variables ``ys``."""
    ys = _check_ys(p, ys)
    if not 0 <= M <= p.two_s:
        raise DomainError(f"M must lie in 0..{p.two_s}")
    t = get_triple(p)
    q, n = p.q, len(ys)
    subsets = [np.delete(ys, k) for k in range(n)]
    g = [g_prod(q, ys[k], subsets[k]) for k in range(n)]
    L = np.empty((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            L[j, k] = ((ys[j] / ys[k]) ** eps * _b(ys[k] ** 2) / _b(ys[j] ** 2)
                       * g[k] * y_eps(p, eps, ys[k], subsets[j]))
        Uj = sym_root(q, ys[j])
        L[j, j] += ((q + 1 / q) ** 2 / (t.rho * _b(ys[j] ** 2) * _b(q * q * ys[j] ** 2))
                    * (t.eta_star + t.eta * Uj))
    theta = p.theta(PLAIN, M)
    return BSSystem(p, eps, M, tuple(complex(y) for y in ys), L, L - theta * np.eye(n),
                    theta, t.eta, t.eta_star, t.rho)


def action_residual(sys: BSSystem) -> float:
    """|A Psi(Y_j) - sum_k L_jk Psi(Y_k)| relative to the size of both sides."""
    p = sys.params
    A = get_triple(p).A
    psis = np.array([off_shell_state(p, sys.epsilon, sys.subset(k)).vector for k in range(len(sys.ys))])
    lhs = psis @ A.T
    rhs = sys.L @ psis
    scale = np.linalg.norm(lhs) + np.abs(sys.L).max() * np.linalg.norm(psis)
    return float(np.linalg.norm(lhs - rhs) / scale)


def theorem_vector(sys: BSSystem) -> np.ndarray:
    """(X_M(Y_k))_k from the closed-form scalar products."""
    return np.array([scalar_theorem(sys.params, sys.epsilon, sys.M, sys.subset(k)).value
                     for k in range(len(sys.ys))])


def row_residuals(sys: BSSystem, X: np.ndarray) -> np.ndarray:
    """|sum_k Mat_jk X_k| / sum_k |Mat_jk X_k| for each row j."""
    terms = sys.matrix * X[None, :]
    return np.abs(terms.sum(1)) / np.abs(terms).sum(1)


def singular_values(sys: BSSystem) -> np.ndarray:
    A, _ = _equilibrate(sys.matrix)
    return np.linalg.svd(A, compute_uv=False)


def _equilibrate(Mx: np.ndarray):
    """Row and column scaling; the kernel of Mx is D_c times the kernel of the result."""
    r = np.abs(Mx).max(axis=1)
    r[r == 0] = 1
    A = Mx / r[:, None]
    c = np.abs(A).max(axis=0)
    c[c == 0] = 1
    return A / c[None, :], 1 / c


def rank_gap(sys: BSSystem) -> float:
    """Ratio of the second-smallest to the smallest singular value."""
    s = singular_values(sys)
    if s[-1] == 0:
        return np.inf
    return float(s[-2] / s[-1])


def nullspace_route(sys: BSSystem, gap: float = RANK_GAP) -> np.ndarray:
    """Unit-norm kernel vector of the system matrix."""
    A, dc = _equilibrate(sys.matrix)
    _, s, Vh = np.linalg.svd(A)
    if not (s[-1] == 0 or s[-2] / s[-1] >= gap) or s[-2] <= 1e-13 * s[0]:
        raise RankDeficiencyUnexpected(
            f"expected rank {len(s) - 1}: singular values {s[-2]:.3e}, {s[-1]:.3e}")
    v = dc * Vh[-1].conj()
    return v / np.linalg.norm(v)


def proportionality_spread(kernel: np.ndarray, X: np.ndarray) -> float:
    """Spread of kernel/X across components, relative to the mean ratio."""
    ratio = kernel / X
    mean = ratio.mean()
    return float(np.abs(ratio - mean).max() / abs(mean))


def verify_solution(sys: BSSystem, tol: float = 1e-8) -> VerifyReport:
    p = sys.params
    rep = VerifyReport(f"bs[eps={sys.epsilon:+d},M={sys.M}]", p.digest())
    X = theorem_vector(sys)
    rep.add("rows", float(row_residuals(sys, X).max()), tol)
    rep.add("action", action_residual(sys), 1e-9)
    s = singular_values(sys)
    rep.add("rank_gap", float(s[-1] / s[-2]) if s[-2] else np.inf, 1 / RANK_GAP,
            singular_values=[float(x) for x in s])
    try:
        v = nullspace_route(sys)
        rep.add("kernel_proportional", proportionality_spread(v, X), 1e-7)
    except RankDeficiencyUnexpected as exc:
        rep.add("kernel_proportional", np.inf, 1e-7, error=str(exc))
    return rep


# ---------------------------------------------------------------------------
# explicit minors at spin 1/2
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DetRoute:
    epsilon: int
    M: int
    ys: tuple
    m11: complex
    m12: complex
    psi: complex
    C: complex = 1.0

    def values(self) -> tuple[complex, complex]:
        """(X_M(Y_1), X_M(Y_2)) = (-psi m12, psi m11); Y_1 = {y2}, Y_2 = {y1}."""
        return -self.psi * self.m12, self.psi * self.m11


def det_route_s_half(p: ParamSet, eps: int, M: int, ys, C: complex = 1.0) -> DetRoute:
    """Nonvanishing entries of the reduced 2x2 matrix and the prefactor psi."""
    if p.two_s != 1:
        raise SpinMismatch("explicit minors are only available at spin 1/2")
    y1, y2 = (complex(y) for y in ys)
    q, r0, b, bs, bd = p.q, p.r0, p.b, p.bstar, p.bdiam
    w = 1 - q * q * r0 * r0 * b * b
    if eps == -1 and M == 0:
        m11 = q * y1 * _b(y1 ** 2) * y_eps(p, -1, y1, [y1]) * C
        m12 = -q * y2 * _b(y2 ** 2) * y_eps(p, -1, y2, [y2]) * C
        psi = q * q * r0 * r0 * b * b / (_b(q) * w * C)
    elif eps == -1 and M == 1:
        K = _b(q) / (q * q * r0 ** 3 * b * bs * bd)
        m11 = K * y1 * _b(y1 ** 2) * C
        m12 = -K * y2 * _b(y2 ** 2) * C
        psi = -q ** 3 * r0 ** 2 * b * b * bs * (1 + q * r0 * b * bd / bs) * (1 + q * r0 * bd * bs / b) / (w * C)
    elif eps == 1 and M in (0, 1):
        K = 1 / (q ** 4 * r0 ** 4 * b * bs * bd ** 2)
        Z = cf.z1 if M == 0 else cf.z2
        m11 = -K / y1 * _b(y1 ** 2) * Z(p, y1) * C
        m12 = K / y2 * _b(y2 ** 2) * Z(p, y2) * C
        psi = -r0 * b * bd / C if M == 0 else -r0 * bd / C
    else:
        raise DomainError("need eps in {+1,-1} and M in {0,1}")
    return DetRoute(eps, M, (y1, y2), complex(m11), complex(m12), complex(psi), C)


# ---------------------------------------------------------------------------
# q-Racah polynomials from the linear system
# ---------------------------------------------------------------------------

def _default_extra(p: ParamSet, k: int = 0) -> complex:
    # generic point away from the unit circle and the real axis
    return complex(1.37 + 0.41 * k, 0.29 + 0.17 * k)


def racah_kernel(p: ParamSet, M: int, inhom_roots, y_extra: complex | None = None) -> complex:
    """R_M(theta*_N) from kernel vectors of the eps=-1 system at Y = roots + (y_extra,).

    The kernel fixes X_M(Y_k) up to an M-dependent scale; the scale is pinned
    at the off-shell component k = 1 (which contains y_extra) with the closed
    form scalar product, and the on-shell component k = 2s+1 is then read off.
    """
    us = list(inhom_roots.u_roots)
    y = _default_extra(p) if y_extra is None else complex(y_extra)
    ys = us + [y]

    def onshell(m):
        sys = build_system(p, -1, m, ys)
        v = nullspace_route(sys)
        anchor = scalar_theorem(p, -1, m, sys.subset(0)).value
        return anchor * v[-1] / v[0]

    return complex(onshell(M) / onshell(0))


def racah_det_half(p: ParamSet, M: int, inhom_roots) -> complex:
    """Spin 1/2: psi_M/psi_0 times the ratio of the (2,2) minors at y1."""
    y1 = inhom_roots.u_roots[0]
    ys = (y1, _default_extra(p))
    a = det_route_s_half(p, -1, M, ys)
    b = det_route_s_half(p, -1, 0, ys)
    return complex(a.psi / b.psi * a.m11 / b.m11)


def racah_via_det(p: ParamSet, M: int, N: int, inhom_roots=None, y_extra=None) -> complex:
    """R_M(theta*_N) for the pair (A, A*) from the linear-system route."""
    if inhom_roots is None:
        inhom_roots = solve_inhom(p, -1, N)
    if M == 0:
        return 1 + 0j
    if p.two_s == 1:
        return racah_det_half(p, M, inhom_roots)
    return racah_kernel(p, M, inhom_roots, y_extra)
