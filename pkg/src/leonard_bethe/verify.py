"""Identity suites shared by the CLI and the acceptance tests.

Each suite takes a parameter set and returns a :class:`VerifyReport`.  Random
draws come from ``numpy.random.default_rng(seed)`` so that a given seed
always produces the same report.
"""

from __future__ import annotations

import csv
import io
import itertools
import time
from dataclasses import dataclass

import numpy as np

from . import closed_forms as cf
from .bethe import HOM, INHOM, solve_hom, solve_inhom, solve_inhom_all
from .bslinear import build_system, det_route_s_half, racah_kernel, racah_via_det, verify_solution
from .errors import DomainError
from .params import PLAIN, STAR, ParamSet
from .qcalc import racah_eval
from .report import VerifyReport, merge
from .scalprod import (
    expansion_residual,
    inhom_from_hom,
    off_shell_state,
    on_shell_vector,
    racah_decompositions,
    scalar_direct,
    scalar_residual,
    scalar_theorem,
    target_eigenvector,
)
from .triple import get_triple, triple_report

SUITES = ("triple", "scalar", "bs", "racah", "all")


@dataclass(frozen=True)
class Tolerances:
    identity: float = 1e-10
    scalar: float = 1e-8
    bs_rows: float = 1e-8
    racah: float = 1e-6
    closure: float = 1e-8
    match: float = 1e-6

    @classmethod
    def uniform(cls, tol: float) -> "Tolerances":
        if not tol > 0:
            raise DomainError("tolerance must be positive")
        return cls(tol, tol, tol, tol, tol, tol)


DEFAULT_TOLS = Tolerances()


# ---------------------------------------------------------------------------
# random draws
# ---------------------------------------------------------------------------

def random_params(rng: np.random.Generator, two_s: int, complex_params: bool = False) -> ParamSet:
    """Generic parameters with |q| in [1.15, 1.6]; optionally with complex phases."""
    q = rng.uniform(1.15, 1.6)
    r0 = rng.uniform(0.6, 1.4)
    bs = rng.uniform(0.3, 2.0, 3)
    if complex_params:
        q = q * np.exp(0.15j * rng.uniform(-1, 1))
        bs = bs * np.exp(1j * rng.uniform(-1, 1, 3))
    return ParamSet(q, r0, *bs, two_s)


def random_vars(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a - b)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_triple(p: ParamSet, tols: Tolerances = DEFAULT_TOLS) -> VerifyReport:
    return triple_report(get_triple(p), tols.identity)


def scalar_sweep(p: ParamSet, seed: int = 0, draws: int = 50) -> list[dict]:
    """Random (eps, M, u) draws with theorem and direct values side by side."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(draws):
        eps = int(rng.choice([-1, 1]))
        M = int(rng.integers(p.dim))
        us = random_vars(rng, int(rng.integers(1, p.two_s + 2)))
        rows.append({
            "epsilon": eps,
            "M": M,
            "u": us,
            "theorem": scalar_theorem(p, eps, M, us).value,
            "direct": scalar_direct(p, eps, M, us).value,
            "residual": scalar_residual(p, eps, M, us),
        })
    return rows


def scalar_sweep_csv(rows: list[dict]) -> str:
    width = max((len(r["u"]) for r in rows), default=0)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = ["epsilon", "M"]
    for i in range(width):
        head += [f"u{i + 1}_re", f"u{i + 1}_im"]
    w.writerow(head + ["theorem_value_re", "theorem_value_im", "direct_value_re", "direct_value_im", "residual"])
    for r in rows:
        cells = [r["epsilon"], r["M"]]
        for i in range(width):
            cells += [repr(r["u"][i].real), repr(r["u"][i].imag)] if i < len(r["u"]) else ["", ""]
        for key in ("theorem", "direct"):
            cells += [repr(r[key].real), repr(r[key].imag)]
        w.writerow(cells + [repr(float(r["residual"]))])
    return buf.getvalue()


def suite_scalar(p: ParamSet, tols: Tolerances = DEFAULT_TOLS, seed: int = 0, draws: int = 50,
                 on_shell: bool = True) -> VerifyReport:
    """Closed-form scalar products, state expansion, on-shell normalization, root closure."""
    t0 = time.perf_counter()
    rep = VerifyReport("scalar", p.digest())
    rows = scalar_sweep(p, seed, draws)
    rep.add("theorem vs direct contraction", max(r["residual"] for r in rows), tols.scalar, draws=draws)
    rng = np.random.default_rng([seed, 1])
    worst_exp, worst_perm = 0.0, 0.0
    for r in rows:
        us = r["u"]
        worst_exp = max(worst_exp, expansion_residual(p, off_shell_state(p, r["epsilon"], us)))
        b = scalar_theorem(p, r["epsilon"], r["M"], us[rng.permutation(len(us))]).value
        worst_perm = max(worst_perm, _rel(b, r["theorem"]))
    rep.add("state expansion in the diamond basis", worst_exp, tols.scalar)
    rep.add("permutation invariance", worst_perm, tols.identity)
    if on_shell:
        _on_shell_checks(p, tols, seed, rep)
    rep.runtime = time.perf_counter() - t0
    return rep


def _on_shell_checks(p: ParamSet, tols: Tolerances, seed: int, rep: VerifyReport) -> None:
    from .bethe import SolverOptions

    opts = SolverOptions(seed=seed)
    root_sets = []
    for eps in (1, -1):
        root_sets += [solve_hom(p, eps, N, opts) for N in range(p.dim)]
        root_sets += list(solve_inhom_all(p, eps, opts))
    for rs in root_sets:
        v = on_shell_vector(p, rs)
        w = target_eigenvector(p, rs)
        tag = f"{rs.kind[:5]} eps={rs.epsilon:+d} level {rs.level}"
        rep.add(f"on-shell norm {tag}", np.linalg.norm(v - w) / np.linalg.norm(w), tols.scalar)
    inhom = {rs.level: rs for rs in root_sets if rs.kind == INHOM and rs.epsilon == -1}
    for N in range(p.dim):
        hom = next(rs for rs in root_sets if rs.kind == HOM and rs.epsilon == 1 and rs.level == N)
        built = inhom_from_hom(p, N, hom)
        rep.add(f"inhom_from_hom residual, level {N}", built.max_residual, tols.closure)
        rep.add(f"inhom_from_hom vs solver, level {N}", multiset_distance(built.U, inhom[N].U), tols.match)


def multiset_distance(a, b) -> float:
    """Relative distance between two multisets, minimized over pairings."""
    a = np.asarray(a, complex)
    b = np.asarray(b, complex)
    if len(a) != len(b):
        return np.inf
    if len(a) == 0:
        return 0.0
    scale = max(np.abs(b).max(), 1e-300)
    best = min(np.abs(a[list(perm)] - b).max() for perm in itertools.permutations(range(len(a))))
    return float(best / scale)


def suite_bs(p: ParamSet, tols: Tolerances = DEFAULT_TOLS, seed: int = 0, draws: int = 10) -> VerifyReport:
    """Linear-system solution, rank and kernel checks; explicit minors at spin 1/2."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    rep = VerifyReport("bs", p.digest())
    for eps in (-1, 1):
        for M in range(p.dim):
            acc: dict[str, list] = {}
            for _ in range(draws):
                sub = verify_solution(build_system(p, eps, M, random_vars(rng, p.dim)), tols.bs_rows)
                for c in sub.checks:
                    acc.setdefault(c.name, []).append(c)
            for name, cs in acc.items():
                w = max(cs, key=lambda c: c.residual if c.residual == c.residual else np.inf)
                rep.add(f"eps={eps:+d} M={M} {name}", w.residual, w.tol, draws=draws)
    if p.two_s == 1:
        worst = 0.0
        for _ in range(draws):
            ys = random_vars(rng, 2)
            for eps, M in itertools.product((-1, 1), (0, 1)):
                d = det_route_s_half(p, eps, M, ys)
                x1, x2 = d.values()
                worst = max(worst, _rel(x1, scalar_theorem(p, eps, M, [ys[1]]).value),
                            _rel(x2, scalar_theorem(p, eps, M, [ys[0]]).value))
        rep.add("spin 1/2 minors vs closed-form scalar products", worst, tols.identity)
    rep.runtime = time.perf_counter() - t0
    return rep


def racah_table(p: ParamSet, seed: int = 0) -> list[dict]:
    """Every route to R_M(theta*_N) for the pair (A, A*), one row per (M, N)."""
    from .bethe import SolverOptions

    opts = SolverOptions(seed=seed)
    rows = []
    for N in range(p.dim):
        hom = solve_hom(p, 1, N, opts)
        inh = solve_inhom(p, -1, N, opts)
        for M in range(p.dim):
            via_hom, via_inhom = racah_decompositions(p, M, N, hom, inh)
            row = {
                "M": M,
                "N": N,
                "phi43": racah_eval(p, (PLAIN, STAR), M, N),
                "hom_decomposition": via_hom,
                "inhom_decomposition": via_inhom,
                "linear_system": racah_via_det(p, M, N, inh),
            }
            if p.two_s == 1 and M == 1:
                row["closed_form_det"] = cf.racah_det_half(p, inh.u_roots[0])
                if N == 1:
                    row["closed_form"] = cf.racah_half(p)
            rows.append(row)
    return rows


def suite_racah(p: ParamSet, tols: Tolerances = DEFAULT_TOLS, seed: int = 0) -> VerifyReport:
    """Agreement of every q-Racah route with the terminating series."""
    t0 = time.perf_counter()
    rep = VerifyReport("racah", p.digest())
    rows = racah_table(p, seed)
    routes = [k for k in rows[0] if k not in ("M", "N", "phi43")]
    routes += [k for k in ("closed_form_det", "closed_form") if k not in routes and any(k in r for r in rows)]
    for route in routes:
        worst = max(_rel(r[route], r["phi43"]) for r in rows if route in r)
        shown = {f"{r['M']},{r['N']}": r[route] for r in rows if route in r and route.startswith("closed")}
        rep.add(f"{route} vs 4phi3", worst, tols.racah, **({"values": shown} if shown else {}))
    if p.two_s > 1:
        # the kernel route must not depend on the padding variable
        rng = np.random.default_rng(seed)
        spread = 0.0
        for N in range(p.dim):
            inh = solve_inhom(p, -1, N)
            for M in range(1, p.dim):
                vals = [racah_kernel(p, M, inh, complex(*rng.uniform(0.6, 1.8, 2))) for _ in range(3)]
                spread = max(spread, max(_rel(v, vals[0]) for v in vals))
        rep.add("linear-system route independent of padding variable", spread, tols.racah)
    rep.runtime = time.perf_counter() - t0
    return rep


def run_suite(p: ParamSet, name: str, tols: Tolerances = DEFAULT_TOLS, seed: int = 0) -> VerifyReport:
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    runners = {
        "triple": lambda: suite_triple(p, tols),
        "scalar": lambda: suite_scalar(p, tols, seed),
        "bs": lambda: suite_bs(p, tols, seed),
        "racah": lambda: suite_racah(p, tols, seed),
    }
    if name != "all":
        return runners[name]()
    return merge("all", p.digest(), [runners[k]() for k in ("triple", "scalar", "bs", "racah")])


__all__ = [
    "SUITES",
    "Tolerances",
    "DEFAULT_TOLS",
    "random_params",
    "random_vars",
    "multiset_distance",
    "scalar_sweep",
    "scalar_sweep_csv",
    "suite_triple",
    "suite_scalar",
    "suite_bs",
    "suite_racah",
    "racah_table",
    "run_suite",
]
