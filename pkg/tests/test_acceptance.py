"""Acceptance criteria, one test each.

Every test logs a single ``criterion k: PASS|FAIL ...`` line, which the
conftest prints in the terminal summary.  Run this file directly for the
same lines on stdout without pytest.
"""

import itertools
import time
from functools import lru_cache

import numpy as np

from leonard_bethe import TABLE1_PARAMS
from leonard_bethe import closed_forms as cf
from leonard_bethe.bethe import solve_hom, solve_inhom
from leonard_bethe.bslinear import build_system, rank_gap, row_residuals, theorem_vector
from leonard_bethe.scalprod import inhom_from_hom, scalar_residual
from leonard_bethe.triple import (
    aw_residuals,
    build_triple,
    diamond_two_route,
    fgh0_consistency,
    inverse_residual,
    orthogonality_residual,
    racah_entry_residual,
)
from leonard_bethe.verify import multiset_distance, racah_table, random_params, random_vars

SPINS_TRIPLE = (1, 2, 3, 4)  # 2s
SWEEP = 20


def _line(k, ok, text):
    return f"criterion {k}: {'PASS' if ok else 'FAIL'}  {text}"


def _report(log, k, ok, text):
    line = _line(k, ok, text)
    print(line)
    log(line)
    assert ok, line


def _per_root_rel(a, b):
    a = np.asarray(a, complex)
    b = np.asarray(b, complex)
    if len(a) != len(b):
        return np.inf
    if len(a) == 0:
        return 0.0
    return min(float(np.max(np.abs(a[list(pm)] - b) / np.abs(b)))
               for pm in itertools.permutations(range(len(a))))


@lru_cache(maxsize=None)
def triple_sweep():
    """Shared by criteria 3, 5 and 9: 20 positive real draws for each s up to 2."""
    out = {}
    for two_s in SPINS_TRIPLE:
        rng = np.random.default_rng([7, two_s])
        rows = []
        for _ in range(SWEEP):
            t = build_triple(random_params(rng, two_s))
            rows.append({
                "aw": max(aw_residuals(t).values()),
                "orth": orthogonality_residual(t.params),
                "closed_sum": abs(t.ladders.fgh0 - t.ladders.fgh0_sum) / abs(t.ladders.fgh0),
                "fgh0": fgh0_consistency(t),
                "two_route": diamond_two_route(t),
                "inverse": max(inverse_residual(t.transitions.P[pr], t.transitions.Pinv[pr])
                               for pr in t.transitions.P),
                "racah_entries": racah_entry_residual(t),
            })
        out[two_s] = {k: max(r[k] for r in rows) for k in rows[0]}
    return out


def _sweep_text(key):
    sw = triple_sweep()
    return ", ".join(f"2s={s}: {sw[s][key]:.1e}" for s in SPINS_TRIPLE), max(sw[s][key] for s in SPINS_TRIPLE)


# ---------------------------------------------------------------------------

def check_1():
    t0 = time.perf_counter()
    worst = 0.0
    for (kind, N), expected in cf.TABLE1_ROOTS.items():
        rs = solve_hom(TABLE1_PARAMS, 1, N) if kind == "hom" else solve_inhom(TABLE1_PARAMS, -1, N)
        worst = max(worst, _per_root_rel(rs.U, expected))
    dt = time.perf_counter() - t0
    ok = worst < cf.TABLE1_RTOL and dt < 30
    return ok, f"Table 1 roots, worst relative deviation {worst:.1e} (< 5e-4), {dt:.1f} s (< 30 s)"


def check_2():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(SWEEP):
        p = random_params(rng, 1)
        worst = max(worst, abs(solve_hom(p, 1, 1).U[0] - cf.hom_root_half(p)) / abs(cf.hom_root_half(p)))
        for N in (0, 1):
            ref = cf.inhom_root_half(p, N)
            worst = max(worst, abs(solve_inhom(p, -1, N).U[0] - ref) / abs(ref))
    return worst < 1e-10, f"spin 1/2 closed-form roots, {SWEEP} draws, worst {worst:.1e} (< 1e-10)"


def check_3():
    text, worst = _sweep_text("aw")
    return worst < 1e-10, f"Askey-Wilson relations, 6 + 3 forms, {SWEEP} draws per s: {text}"


def check_4():
    worst, count = 0.0, 0
    for two_s in (1, 2, 3):
        rng = np.random.default_rng([4, two_s])
        for _ in range(10):
            p = random_params(rng, two_s)
            for _ in range(6):
                eps = int(rng.choice([-1, 1]))
                M = int(rng.integers(p.dim))
                us = random_vars(rng, int(rng.integers(1, two_s + 2)))
                worst = max(worst, scalar_residual(p, eps, M, us))
                count += 1
    per_s = count // 3
    return worst < 1e-8, f"scalar products theorem vs direct, {per_s} draws per s, worst {worst:.1e} (< 1e-8)"


def check_5():
    parts, ok = [], True
    for key, label in (("orth", "orthogonality sum"), ("closed_sum", "f0/(g0 h0) closed vs sum"),
                       ("fgh0", "f0/(g0 h0) every entry"), ("two_route", "two-route basis")):
        text, worst = _sweep_text(key)
        ok = ok and worst < 1e-10
        parts.append(f"{label} [{text}]")
    return ok, "; ".join(parts) + " (< 1e-10)"


def check_6():
    min_gap, worst_rows = np.inf, 0.0
    for two_s in (1, 2, 3):
        rng = np.random.default_rng([6, two_s])
        for _ in range(2):
            p = random_params(rng, two_s)
            for eps, M in itertools.product((-1, 1), range(p.dim)):
                for _ in range(10):
                    sys = build_system(p, eps, M, random_vars(rng, p.dim))
                    min_gap = min(min_gap, rank_gap(sys))
                    worst_rows = max(worst_rows, float(row_residuals(sys, theorem_vector(sys)).max()))
    ok = min_gap >= 1e8 and worst_rows < 1e-8
    return ok, f"rank 2s: min singular gap {min_gap:.1e} (>= 1e8); solution rows {worst_rows:.1e} (< 1e-8)"


def check_7():
    cases = [TABLE1_PARAMS] + [random_params(np.random.default_rng([7, k]), 1) for k in range(3)]
    cases.append(random_params(np.random.default_rng(70), 2))
    worst_res, worst_match = 0.0, 0.0
    for p in cases:
        for N in range(p.dim):
            built = inhom_from_hom(p, N, solve_hom(p, 1, N))
            worst_res = max(worst_res, built.max_residual)
            worst_match = max(worst_match, multiset_distance(built.U, solve_inhom(p, -1, N).U))
    ok = worst_res < 1e-8 and worst_match < 1e-6
    return ok, (f"roots built from homogeneous ones: residual {worst_res:.1e} (< 1e-8), "
                f"match to solver {worst_match:.1e} (< 1e-6)")


def check_8():
    cases = [random_params(np.random.default_rng([8, k]), 1) for k in range(3)]
    cases += [TABLE1_PARAMS, random_params(np.random.default_rng(80), 2)]
    worst, closed_seen = 0.0, 0
    for p in cases:
        for row in racah_table(p):
            ref = row["phi43"]
            for key, val in row.items():
                if key in ("M", "N", "phi43"):
                    continue
                closed_seen += key == "closed_form"
                worst = max(worst, abs(val - ref) / abs(ref))
    ok = worst < 1e-6 and closed_seen == 3
    return ok, f"q-Racah routes vs 4phi3 (incl. spin 1/2 closed form), worst {worst:.1e} (< 1e-6)"


def check_9():
    t1, w1 = _sweep_text("inverse")
    t2, w2 = _sweep_text("racah_entries")
    ok = w1 < 1e-10 and w2 < 1e-9
    return ok, f"P P^-1 = I [{t1}] (< 1e-10); P/k vs racah_eval [{t2}] (< 1e-9)"


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9]


# ---------------------------------------------------------------------------

def test_criterion_1_table1(acceptance_log):
    _report(acceptance_log, 1, *check_1())


def test_criterion_2_spin_half_closed_forms(acceptance_log):
    _report(acceptance_log, 2, *check_2())


def test_criterion_3_askey_wilson(acceptance_log):
    _report(acceptance_log, 3, *check_3())


def test_criterion_4_scalar_oracle(acceptance_log):
    _report(acceptance_log, 4, *check_4())


def test_criterion_5_ladder_identities(acceptance_log):
    _report(acceptance_log, 5, *check_5())


def test_criterion_6_rank(acceptance_log):
    _report(acceptance_log, 6, *check_6())


def test_criterion_7_closure(acceptance_log):
    _report(acceptance_log, 7, *check_7())


def test_criterion_8_racah_routes(acceptance_log):
    _report(acceptance_log, 8, *check_8())


def test_criterion_9_transitions(acceptance_log):
    _report(acceptance_log, 9, *check_9())


if __name__ == "__main__":
    for k, fn in enumerate(CHECKS, 1):
        print(_line(k, *fn()), flush=True)
