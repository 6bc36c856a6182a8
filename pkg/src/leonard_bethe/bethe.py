"""Bethe equations attached to the Leonard pair (A, A*) and a root solver.

Roots are reported in the symmetric variable U = (q u^2 + q^{-1} u^{-2})/(q + q^{-1}).
The solver runs a batched, damped Newton iteration directly in the u
variables (the equations are rational, hence holomorphic, in u) from many
deterministic seeds, then deduplicates the converged points as U-multisets
and filters out non-admissible ones.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AmbiguousSolution,
    DomainError,
    KindMismatch,
    NoMatchingLevel,
    SolverFailure,
)
from .params import ParamSet
from .qcalc import qnum

HOM, INHOM = "homogeneous", "inhomogeneous"

# residuals are |E_i| / sum_k |term_k|: the individual terms of E can be
# many orders of magnitude larger than one at |q| = 3
RESIDUAL_TOL = 1e-9
DEDUP_TOL = 1e-7
SEPARATION_TOL = 1e-8
WIDEN_FACTOR = 30.0


def _b(x):
    return x - 1 / x


# ---------------------------------------------------------------------------
# the functions Lambda_1, Lambda_2 and E
# ---------------------------------------------------------------------------

def _eps_pows(p: ParamSet, eps: int):
    """(c/c*)^{(1-eps)/2} and (b*/b)^{(1+eps)/2}."""
    if eps == 1:
        return 1.0, p.bstar / p.b
    if eps == -1:
        return p.c / p.cstar, 1.0
    raise DomainError("epsilon must be +1 or -1")


def _lambda1(p: ParamSet, eps: int, u):
    q, t, z = p.q, p.two_s, p.zeta
    e1, e2 = _eps_pows(p, eps)
    return (q ** (-t - 1) / u ** eps
            * (q ** (t + 1) * u / z - z / u) * (q ** (t + 1) * u * z - 1 / (u * z))
            * (u * p.cstar * q ** (-t) + p.b * q ** t / u)
            * (u * e1 + e2 / u))


def _lambda2(p: ParamSet, eps: int, u):
    q, t, z = p.q, p.two_s, p.zeta
    e1, e2 = _eps_pows(p, eps)
    return ((u * u - u ** -2) * q ** (-t - 1) / (u ** eps * (q * u * u - 1 / (q * u * u)))
            * (q ** (t - 1) * z / u - u / z) * (q ** (t - 1) / (u * z) - u * z)
            * (q * q * u * p.b * q ** t + p.cstar * q ** (-t) / u)
            * (q * q * u * e2 + e1 / u))


def lambda12(p: ParamSet, eps: int, u: complex) -> tuple[complex, complex]:
    """Reference-state eigenvalues (Lambda_1^eps(u), Lambda_2^eps(u))."""
    u = complex(u)
    if u == 0:
        raise DomainError("u must be nonzero")
    if abs(_b(p.q * u * u)) < 1e-14 * abs(p.q * u * u):
        raise DomainError("Lambda_2 has a pole at q u^2 = q^{-1} u^{-2}")
    return complex(_lambda1(p, eps, u)), complex(_lambda2(p, eps, u))


def nu_coeff(p: ParamSet, eps: int) -> complex:
    """Strength of the inhomogeneous term."""
    if eps == 1:
        return p.q ** (-1 - 2 * p.two_s) * p.cstar
    return p.q ** (1 + 2 * p.two_s) * p.b


def _pair_products(q, us):
    """Products over j != i of f(u_i,u_j), h(u_i,u_j) and the inhomogeneous denominator."""
    n = us.shape[-1]
    ui = us[..., :, None]
    uj = us[..., None, :]
    eye = np.eye(n, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        F = _b(q * uj / ui) * _b(ui * uj) / (_b(uj / ui) * _b(q * ui * uj))
        H = _b(q * q * ui * uj) * _b(q * ui / uj) / (_b(q * ui * uj) * _b(ui / uj))
        D = _b(ui / uj) * _b(q * ui * uj)
    F = np.where(eye, 1, F).prod(axis=-1)
    H = np.where(eye, 1, H).prod(axis=-1)
    D = np.where(eye, 1, D).prod(axis=-1)
    return F, H, D


def _terms(p: ParamSet, eps: int, kind: str, us: np.ndarray) -> np.ndarray:
    """Signed terms of E_i for every i; E_i is their sum along the last axis."""
    q = p.q
    us = np.asarray(us, dtype=complex)
    F, H, D = _pair_products(q, us)
    with np.errstate(divide="ignore", invalid="ignore"):
        L1 = _lambda1(p, eps, us)
        L2 = _lambda2(p, eps, us)
        ratio = _b(us * us) / _b(q * us * us)
        if kind == HOM:
            return np.stack([-ratio * F * L1, H * L2], axis=-1)
        t = p.two_s
        qh = np.sqrt(complex(q))
        z = p.zeta
        num = np.ones_like(us)
        for k in range(t + 1):
            c = qh ** (1 + 2 * k - t)
            num = num * _b(c * z * us) * _b(c / z * us)
        t1 = ratio * us ** eps * F * L1
        t2 = -((q * q * us ** 3) ** (-eps)) * H * L2
        t3 = nu_coeff(p, eps) * us ** (-2 * eps) * _b(us * us) / _b(q) * num / D
        return np.stack([t1, t2, t3], axis=-1)


def _relres(terms: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.abs(terms.sum(-1)) / np.abs(terms).sum(-1)


def _check_roots(us, need=None):
    us = [complex(u) for u in us]
    if need is not None and len(us) != need:
        raise DomainError(f"expected {need} roots, got {len(us)}")
    if any(u == 0 for u in us):
        raise DomainError("roots must be nonzero")
    return np.array(us)


def e_hom(p: ParamSet, eps: int, i: int, roots) -> complex:
    """E^M_eps(u_i, rest) for the homogeneous equations, M = len(roots)."""
    us = _check_roots(roots)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = _terms(p, eps, HOM, us)[i].sum()
    if not np.isfinite(val):
        raise DomainError("coincident roots or pole")
    return complex(val)


def e_inhom(p: ParamSet, eps: int, i: int, roots) -> complex:
    """E_eps(u_i, rest) for the inhomogeneous equations (2s roots)."""
    us = _check_roots(roots, p.two_s)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = _terms(p, eps, INHOM, us)[i].sum()
    if not np.isfinite(val):
        raise DomainError("coincident roots or pole")
    return complex(val)


def relative_residuals(p: ParamSet, eps: int, kind: str, roots) -> np.ndarray:
    """|E_i| divided by the sum of magnitudes of its terms, for each i."""
    us = np.asarray(roots, dtype=complex)
    if us.size == 0:
        return np.zeros(0)
    return _relres(_terms(p, eps, kind, us))


# ---------------------------------------------------------------------------
# symmetric variables
# ---------------------------------------------------------------------------

def sym_root(q: complex, u) -> complex:
    """U = (q u^2 + q^{-1} u^{-2}) / (q + q^{-1})."""
    return (q * u * u + 1 / (q * u * u)) / (q + 1 / q)


def u_branches(q: complex, U: complex) -> list[complex]:
    """The two square-root branches u with the given U, representative first.

    Solves q x^2 - (q + 1/q) U x + 1/q = 0 for x = u^2; the representative
    takes the root with |u| >= 1 (larger |x|), ties broken by positive real
    part, and the principal square root.
    """
    q = complex(q)
    x1, x2 = np.roots([q, -(q + 1 / q) * U, 1 / q])
    xs = sorted([complex(x1), complex(x2)], key=lambda x: (-round(abs(x), 12), -x.real))
    return [complex(np.sqrt(x)) for x in xs]


def u_of_U(q: complex, U: complex) -> complex:
    return u_branches(q, U)[0]


# ---------------------------------------------------------------------------
# root sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BetheRootSet:
    kind: str
    epsilon: int
    level: int | None
    sym_roots: tuple
    u_roots: tuple
    residuals: tuple
    eigenvalue: complex | None = None
    info: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.sym_roots)

    @property
    def U(self) -> np.ndarray:
        return np.array(self.sym_roots, dtype=complex)

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    def to_dict(self) -> dict:
        from .report import cjson

        d = {
            "kind": self.kind,
            "epsilon": self.epsilon,
            "level": self.level,
            "U": cjson(list(self.sym_roots)),
            "residuals": [float(r) for r in self.residuals],
        }
        if self.eigenvalue is not None:
            d["eigenvalue"] = cjson(self.eigenvalue)
        return d


def make_root_set(p: ParamSet, eps: int, kind: str, U, level=None) -> BetheRootSet:
    """Wrap symmetric roots, choosing representatives and evaluating residuals."""
    U = [complex(x) for x in U]
    if p.is_real:
        # real data: round-off imaginary parts are noise, true complex pairs are kept
        U = [complex(x.real) if abs(x.imag) <= 1e-13 * abs(x) else x for x in U]
    U.sort(key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    reps = [u_of_U(p.q, x) for x in U]
    res = relative_residuals(p, eps, kind, reps) if U else np.zeros(0)
    eig = None
    if kind == INHOM:
        eig = _eigenvalue(p, eps, U)
    return BetheRootSet(kind, eps, level, tuple(U), tuple(reps), tuple(float(r) for r in res), eig)


def branch_residuals(p: ParamSet, rs: BetheRootSet) -> np.ndarray:
    """Residual vector for each choice of square-root branch per root (all 2^n)."""
    branches = [u_branches(p.q, U) for U in rs.sym_roots]
    out = []
    for choice in itertools.product(*branches):
        out.append(relative_residuals(p, rs.epsilon, rs.kind, list(choice)).max(initial=0.0))
    return np.array(out)


# ---------------------------------------------------------------------------
# eigenvalues from roots
# ---------------------------------------------------------------------------

def _eigenvalue(p: ParamSet, eps: int, U) -> complex:
    q, t, z = p.q, p.two_s, p.zeta
    ssum = (q + 1 / q) * sum(U)
    if eps == 1:
        return q ** (-2 * t) * (p.cstar * (z * z + z ** -2) * qnum(t, q)
                                + q ** t * (p.b * q ** t + p.c * q ** (-t)) - q * p.cstar * ssum)
    return q ** (2 * t) * (p.b * (z * z + z ** -2) * qnum(t, q)
                           + q ** (-t) * (p.bstar * q ** t + p.cstar * q ** (-t)) - p.b / q * ssum)


def eigenvalue_from_roots(p: ParamSet, eps: int, roots) -> complex:
    """theta_M (eps=+1) or theta*_N (eps=-1) from 2s inhomogeneous roots.

    ``roots`` is a :class:`BetheRootSet` of inhomogeneous kind or a plain
    sequence of symmetric roots.
    """
    if isinstance(roots, BetheRootSet):
        if roots.kind != INHOM:
            raise KindMismatch("eigenvalue formula needs inhomogeneous roots")
        U = roots.sym_roots
    else:
        U = list(roots)
    if len(U) != p.two_s:
        raise KindMismatch(f"need {p.two_s} roots, got {len(U)}")
    return complex(_eigenvalue(p, eps, U))


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolverOptions:
    budget_factor: int = 200
    seed: int = 0
    max_iter: int = 80
    converge_tol: float = 1e-13
    accept_tol: float = RESIDUAL_TOL
    dedup_tol: float = DEDUP_TOL
    real_first: bool = True


def _root_scale(p: ParamSet) -> float:
    vals = [abs(p.kappa * th) for lab in ("A", "Astar", "Adiam") for th in p.spectrum(lab)]
    return float(max(vals + [1.0]))


def _level_sums(p: ParamSet, eps: int) -> np.ndarray:
    """Root sums sum(U) that reproduce each eigenvalue of the target spectrum."""
    e0 = _eigenvalue(p, eps, [0.0] * p.two_s)
    e1 = _eigenvalue(p, eps, [1.0] + [0.0] * (p.two_s - 1)) - e0
    return np.array([(th - e0) / e1 for th in _spectrum_for(p, eps)])


def _seeds_U(p: ParamSet, n: int, count: int, rng, real: bool, hi: float | None = None,
             widen: float = 1.0) -> np.ndarray:
    R = _root_scale(p)
    top = 3 * widen * max(R, hi or 0.0)
    mag = np.exp(rng.uniform(np.log(R * 1e-3), np.log(top), size=(count, n)))
    if real:
        sign = rng.choice([-1.0, 1.0], size=(count, n), p=[0.25, 0.75])
        return mag * sign
    phase = rng.uniform(-np.pi, np.pi, size=(count, n))
    return mag * np.exp(1j * phase)


def _U_to_u_batch(q, U):
    """Representative branch, vectorized."""
    a = q
    bq = -(q + 1 / q) * U
    c = 1 / q
    disc = np.sqrt(bq * bq - 4 * a * c + 0j)
    x1 = (-bq + disc) / (2 * a)
    x2 = (-bq - disc) / (2 * a)
    x = np.where(np.abs(x1) >= np.abs(x2), x1, x2)
    return np.sqrt(x + 0j)


def _newton(p: ParamSet, eps: int, kind: str, u0: np.ndarray, opts: SolverOptions):
    """Batched damped Newton; returns final points and relative residuals."""
    u = u0.astype(complex).copy()
    B, n = u.shape

    def evaluate(x):
        T = _terms(p, eps, kind, x)
        E = T.sum(-1)
        S = np.abs(T).sum(-1)
        return E, S

    E, S = evaluate(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.nanmax(np.where(S > 0, np.abs(E) / S, np.nan), axis=-1)
    r = np.where(np.isfinite(r), r, np.inf)
    active = np.ones(B, dtype=bool)
    for _ in range(opts.max_iter):
        idx = np.nonzero(active & (r > opts.converge_tol))[0]
        if idx.size == 0:
            break
        x = u[idx]
        Ex = E[idx]
        J = np.empty((idx.size, n, n), complex)
        for k in range(n):
            h = 1e-7 * np.maximum(np.abs(x[:, k]), 1e-3)
            xp = x.copy()
            xm = x.copy()
            xp[:, k] += h
            xm[:, k] -= h
            J[:, :, k] = (evaluate(xp)[0] - evaluate(xm)[0]) / (2 * h[:, None])
        bad = ~np.isfinite(J).all(axis=(1, 2)) | ~np.isfinite(Ex).all(axis=1)
        J[bad] = np.eye(n)
        Ex = np.where(np.isfinite(Ex), Ex, 0)
        try:
            step = -np.linalg.solve(J, Ex[..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = -np.einsum("bij,bj->bi", np.linalg.pinv(J), Ex)
        # cap each component's relative move
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.abs(step) / (0.5 * np.abs(x))
        cap = np.nanmax(np.where(np.isfinite(ratio), ratio, 1e300), axis=1)
        step = step / np.maximum(cap, 1.0)[:, None]
        lam = np.ones(idx.size)
        r_old = r[idx]
        accepted = np.zeros(idx.size, dtype=bool)
        new_x = x.copy()
        new_E = E[idx].copy()
        new_S = S[idx].copy()
        new_r = r_old.copy()
        for _half in range(6):
            todo = ~accepted
            if not todo.any():
                break
            cand = x[todo] + lam[todo, None] * step[todo]
            Ec, Sc = evaluate(cand)
            with np.errstate(divide="ignore", invalid="ignore"):
                rc = np.max(np.abs(Ec) / Sc, axis=-1)
            rc = np.where(np.isfinite(rc), rc, np.inf)
            ok = (rc < r_old[todo] * (1 - 1e-4 * lam[todo])) | (_half == 5)
            sel = np.nonzero(todo)[0][ok]
            new_x[sel] = cand[ok]
            new_E[sel] = Ec[ok]
            new_S[sel] = Sc[ok]
            new_r[sel] = rc[ok]
            accepted[sel] = True
            lam[todo] *= 0.5
        moved = np.abs(new_x - x).max(axis=1) <= 1e-15 * np.abs(x).max(axis=1)
        u[idx] = new_x
        E[idx] = new_E
        S[idx] = new_S
        r[idx] = new_r
        stuck = moved | ~np.isfinite(new_r) | (np.abs(new_x) > 1e12).any(axis=1) | (np.abs(new_x) < 1e-12).any(axis=1)
        active[idx[stuck]] = False
    return u, r


def _admissible(p: ParamSet, u: np.ndarray) -> bool:
    if not np.all(np.isfinite(u)):
        return False
    au = np.abs(u)
    if (au < 1e-8).any() or (au > 1e8).any():
        return False
    x = u * u
    if (np.abs(x - 1 / x) < 1e-6 * np.abs(x)).any():  # u^2 = u^{-2}
        return False
    U = sym_root(p.q, u)
    scale = max(np.abs(U).max(), 1.0)
    n = len(U)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(U[i] - U[j]) <= SEPARATION_TOL * scale:
                return False
    return True


def _same_multiset(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    if len(a) != len(b):
        return False
    scale = max(np.abs(a).max(initial=0), np.abs(b).max(initial=0), 1.0)
    if len(a) <= 6:
        return any(np.all(np.abs(a - np.asarray(perm)) <= tol * scale) for perm in itertools.permutations(b))
    return np.allclose(np.sort_complex(a), np.sort_complex(b), atol=tol * scale, rtol=0)


def _collect(p, eps, kind, n, opts: SolverOptions, stop_count=None, hi=None):
    """Run multistart Newton and return distinct admissible U-multisets."""
    rng = np.random.default_rng(opts.seed)
    budget = opts.budget_factor * n * n
    phases = []
    if opts.real_first and p.is_real:
        phases.append(True)
    phases.append(False)
    found: list[np.ndarray] = []
    for real in phases:
        _run_phase(p, eps, kind, n, opts, rng, budget, real, hi, 1.0, found)
        if stop_count is not None and len(found) >= stop_count:
            break
    want = stop_count if stop_count is not None else 1
    if len(found) < want:
        # roots can sit well outside the spectral scale; one wider complex pass
        _run_phase(p, eps, kind, n, opts, rng, budget, False, hi, WIDEN_FACTOR, found)
    return found


def _run_phase(p, eps, kind, n, opts, rng, budget, real, hi, widen, found):
    U0 = _seeds_U(p, n, budget, rng, real, hi, widen)
    u0 = _U_to_u_batch(p.q, U0)
    u, r = _newton(p, eps, kind, u0, opts)
    order = np.argsort(r)
    for bidx in order:
        if not r[bidx] < opts.accept_tol:
            break
        ub = u[bidx]
        if not _admissible(p, ub):
            continue
        U = sym_root(p.q, ub)
        if not any(_same_multiset(U, f, opts.dedup_tol) for f in found):
            found.append(U)


def solve_hom(p: ParamSet, eps: int, N: int, opts: SolverOptions | None = None) -> BetheRootSet:
    """Unique admissible solution of the homogeneous equations with N roots."""
    opts = opts or SolverOptions()
    if not 0 <= N <= p.two_s:
        raise DomainError(f"level must lie in 0..{p.two_s}")
    if N == 0:
        return make_root_set(p, eps, HOM, [], level=0)
    found = _collect(p, eps, HOM, N, opts)
    if not found:
        raise SolverFailure(f"no admissible homogeneous solution (eps={eps}, N={N})")
    if len(found) > 1:
        raise AmbiguousSolution(
            f"{len(found)} distinct admissible homogeneous solutions (eps={eps}, N={N}): "
            + "; ".join(str(np.round(f, 6)) for f in found))
    return make_root_set(p, eps, HOM, found[0], level=N)


def _spectrum_for(p: ParamSet, eps: int):
    return p.spectrum("A") if eps == 1 else p.spectrum("Astar")


def solve_inhom_all(p: ParamSet, eps: int, opts: SolverOptions | None = None,
                    exhaustive: bool = False) -> list[BetheRootSet]:
    """All admissible inhomogeneous solutions found, labelled by eigenvalue level.

    By default the search stops once 2s+1 distinct solutions are in hand;
    ``exhaustive=True`` spends the whole seed budget in every phase.
    """
    return list(_inhom_all_cached(p, eps, opts or SolverOptions(), exhaustive))


@functools.lru_cache(maxsize=64)
def _inhom_all_cached(p: ParamSet, eps: int, opts: SolverOptions, exhaustive: bool):
    n = p.two_s
    hi = float(np.abs(_level_sums(p, eps)).max())
    found = _collect(p, eps, INHOM, n, opts, stop_count=None if exhaustive else n + 1, hi=hi)
    spec = np.array(_spectrum_for(p, eps))
    scale = np.abs(spec).max()
    out = []
    for U in found:
        eig = _eigenvalue(p, eps, U)
        d = np.abs(spec - eig)
        lvl = int(np.argmin(d)) if d.min() < 1e-8 * scale else None
        out.append(make_root_set(p, eps, INHOM, U, level=lvl))
    out.sort(key=lambda rs: (rs.level is None, rs.level if rs.level is not None else 0))
    return tuple(out)


def solve_inhom(p: ParamSet, eps: int, level: int, opts: SolverOptions | None = None) -> BetheRootSet:
    """The inhomogeneous solution whose eigenvalue is theta_level (eps=+1) or theta*_level."""
    if not 0 <= level <= p.two_s:
        raise DomainError(f"level must lie in 0..{p.two_s}")
    sols = solve_inhom_all(p, eps, opts)
    if not sols:
        raise SolverFailure(f"no admissible inhomogeneous solution (eps={eps})")
    match = [s for s in sols if s.level == level]
    if not match:
        raise NoMatchingLevel(f"no inhomogeneous solution reproduces level {level} (eps={eps})")
    return match[0]
