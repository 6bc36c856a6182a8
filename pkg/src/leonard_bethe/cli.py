"""Command-line front end.

    leonard-bethe [options] triple
    leonard-bethe [options] bethe {hom,inhom,table1} [--epsilon E] [--level N | --all]
    leonard-bethe [options] verify [--suite {triple,scalar,bs,racah,all}]
    leonard-bethe [options] racah [--M M] [--N N]

Exit codes: 0 pass, 1 configuration or usage error, 2 degenerate parameters,
3 solver failure, 4 identity failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import closed_forms as cf
from .bethe import HOM, INHOM, RESIDUAL_TOL, SolverOptions, solve_hom, solve_inhom, solve_inhom_all
from .errors import (
    AmbiguousSolution,
    ConfigError,
    DegenerateParams,
    DomainError,
    InterpolationDegenerate,
    NoMatchingLevel,
    RankDeficiencyUnexpected,
    RootExtractionFailure,
    SolverFailure,
)
from .params import LABELS, TABLE1_PARAMS, ParamSet, check_conditions, load_config
from .report import VerifyReport, cjson, write_matrix_csv
from .triple import get_triple, triple_report
from .verify import (
    DEFAULT_TOLS,
    SUITES,
    Tolerances,
    multiset_distance,
    racah_table,
    run_suite,
    scalar_sweep,
    scalar_sweep_csv,
)

TOL_ENV = "LEONARD_BETHE_TOL"

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_SOLVER, EXIT_IDENTITY = 0, 1, 2, 3, 4

_SOLVER_ERRORS = (SolverFailure, AmbiguousSolution, NoMatchingLevel, RootExtractionFailure,
                  InterpolationDegenerate, RankDeficiencyUnexpected)


@dataclass(frozen=True)
class RunConfig:
    params: ParamSet
    params_path: str | None
    tol: float | None
    seed: int
    fmt: str
    export: Path | None
    timing: bool

    @property
    def tolerances(self) -> Tolerances:
        return DEFAULT_TOLS if self.tol is None else Tolerances.uniform(self.tol)

    @property
    def solver(self) -> SolverOptions:
        if self.tol is None:
            return SolverOptions(seed=self.seed)
        return SolverOptions(seed=self.seed, accept_tol=self.tol)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would collide with the
    # degenerate-parameter code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(suppress: bool) -> argparse.ArgumentParser:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--params", metavar="FILE", default=d(None),
                   help="parameter file with q, r0, b, bstar, bdiam, s (default: the s=1 Table 1 example)")
    c.add_argument("--tol", type=float, default=d(None),
                   help=f"override every check tolerance (env {TOL_ENV})")
    c.add_argument("--seed", type=int, default=d(0), help="seed for random draws and multistart")
    c.add_argument("--format", choices=("json", "csv", "pretty"), default=d("pretty"), dest="fmt")
    c.add_argument("--export", metavar="DIR", default=d(None), help="write CSV/JSON artifacts here")
    c.add_argument("--timing", action="store_true", default=d(False),
                   help="include runtimes (makes JSON output non-reproducible)")
    return c


def build_parser() -> argparse.ArgumentParser:
    sub_common = _common(suppress=True)
    ap = _Parser(prog="leonard-bethe", description="Leonard triples, Bethe roots and q-Racah identities.",
                 parents=[_common(suppress=False)])
    sp = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp.add_parser("triple", parents=[sub_common], help="build the triple and run the structural suite")

    b = sp.add_parser("bethe", parents=[sub_common], help="solve Bethe equations")
    b.add_argument("kind", choices=("hom", "inhom", "table1"))
    b.add_argument("--epsilon", type=int, choices=(-1, 1), default=None,
                   help="sign (default +1 for hom, -1 for inhom)")
    g = b.add_mutually_exclusive_group()
    g.add_argument("--level", type=int, default=None)
    g.add_argument("--all", action="store_true", help="every level (default when --level is absent)")

    v = sp.add_parser("verify", parents=[sub_common], help="run an identity suite")
    v.add_argument("--suite", choices=SUITES, default="all")

    r = sp.add_parser("racah", parents=[sub_common], help="q-Racah values from every route")
    r.add_argument("--M", type=int, default=None)
    r.add_argument("--N", type=int, default=None)
    return ap


def _resolve_tol(arg: float | None) -> float | None:
    if arg is not None:
        tol = arg
    elif os.environ.get(TOL_ENV):
        try:
            tol = float(os.environ[TOL_ENV])
        except ValueError:
            raise ConfigError(f"{TOL_ENV} must be a number, got {os.environ[TOL_ENV]!r}") from None
    else:
        return None
    if not tol > 0:
        raise ConfigError("tolerance must be positive")
    return tol


def make_config(ns: argparse.Namespace) -> RunConfig:
    p = load_config(ns.params) if ns.params else TABLE1_PARAMS
    return RunConfig(p, ns.params, _resolve_tol(ns.tol), ns.seed, ns.fmt,
                     Path(ns.export) if ns.export else None, ns.timing)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _payload(cfg: RunConfig, command: str, rep: VerifyReport, **extra) -> dict:
    d = {"command": command, "params": cfg.params.to_dict(), "seed": cfg.seed,
         "report": rep.to_dict(cfg.timing)}
    d.update({k: cjson(v) for k, v in extra.items()})
    return d


def _emit(cfg: RunConfig, payload: dict, rep: VerifyReport, csv_text: str | None = None,
          pretty_extra: str = "") -> None:
    if cfg.fmt == "json":
        out = json.dumps(payload, indent=2, sort_keys=True)
    elif cfg.fmt == "csv":
        out = csv_text if csv_text is not None else rep.to_csv()
    else:
        out = (pretty_extra + "\n" if pretty_extra else "") + rep.to_pretty()
    sys.stdout.write(out.rstrip("\n") + "\n")


def _export_dir(cfg: RunConfig) -> Path | None:
    if cfg.export is None:
        return None
    cfg.export.mkdir(parents=True, exist_ok=True)
    return cfg.export


def _write_report(d: Path, name: str, payload: dict, rep: VerifyReport) -> None:
    (d / f"{name}.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    (d / f"{name}_checks.csv").write_text(rep.to_csv())


def _fmt(z) -> str:
    z = complex(z)
    return f"{z.real:.10g}" if z.imag == 0 else f"{z.real:.10g}{z.imag:+.10g}j"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_triple(cfg: RunConfig) -> int:
    t = get_triple(cfg.params)
    rep = triple_report(t, cfg.tolerances.identity)
    payload = _payload(cfg, "triple", rep, spectra={lab: t.spectra[lab] for lab in LABELS})
    d = _export_dir(cfg)
    if d is not None:
        for lab in LABELS:
            write_matrix_csv(d / f"matrix_{lab}.csv", t.mats[lab])
            write_matrix_csv(d / f"eigvecs_{lab}.csv", t.eigvecs[lab])
        for (a, b), P in t.transitions.P.items():
            write_matrix_csv(d / f"P_{a}_{b}.csv", P)
            write_matrix_csv(d / f"Pinv_{a}_{b}.csv", t.transitions.Pinv[(a, b)])
        _write_report(d, "triple", payload, rep)
    _emit(cfg, payload, rep)
    return EXIT_OK if rep.passed else EXIT_IDENTITY


def _roots_csv(sets) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "epsilon", "level", "index", "U_re", "U_im", "u_re", "u_im", "residual"])
    for rs in sets:
        for i, (U, u, r) in enumerate(zip(rs.sym_roots, rs.u_roots, rs.residuals)):
            w.writerow([rs.kind, rs.epsilon, rs.level, i, repr(U.real), repr(U.imag),
                        repr(u.real), repr(u.imag), repr(r)])
    return buf.getvalue()


def _roots_pretty(sets) -> str:
    lines = []
    for rs in sets:
        head = f"{rs.kind} eps={rs.epsilon:+d} level={rs.level}"
        if rs.eigenvalue is not None:
            head += f"  eigenvalue={_fmt(rs.eigenvalue)}"
        lines.append(head)
        if not rs.sym_roots:
            lines.append("    (no roots)")
        for U, r in zip(rs.sym_roots, rs.residuals):
            lines.append(f"    U = {_fmt(U):<28s} residual={r:.2e}")
    return "\n".join(lines)


def _table1(cfg: RunConfig, rep: VerifyReport) -> list:
    p = TABLE1_PARAMS
    opts = SolverOptions(seed=cfg.seed)
    sets = []
    for (kind, N), expected in sorted(cf.TABLE1_ROOTS.items()):
        rs = solve_hom(p, 1, N, opts) if kind == "hom" else solve_inhom(p, -1, N, opts)
        sets.append(rs)
        rep.add(f"Table 1 {kind} level {N}", multiset_distance(rs.U, np.array(expected, complex)),
                cf.TABLE1_RTOL, expected=list(expected))
    return sets


def cmd_bethe(cfg: RunConfig, kind: str, epsilon: int | None, level: int | None) -> int:
    t0 = time.perf_counter()
    p = TABLE1_PARAMS if kind == "table1" else cfg.params
    check_conditions(p)
    rep = VerifyReport(f"bethe {kind}", p.digest())
    accept = cfg.tol if cfg.tol is not None else RESIDUAL_TOL
    if kind == "table1":
        sets = _table1(cfg, rep)
    else:
        eps = epsilon if epsilon is not None else (1 if kind == "hom" else -1)
        if level is not None and not 0 <= level <= p.two_s:
            raise DomainError(f"level must lie in 0..{p.two_s}")
        levels = [level] if level is not None else list(range(p.dim))
        if kind == "hom":
            sets = [solve_hom(p, eps, N, cfg.solver) for N in levels]
        elif level is not None:
            sets = [solve_inhom(p, eps, level, cfg.solver)]
        else:
            sets = list(solve_inhom_all(p, eps, cfg.solver))
            found = sorted(rs.level for rs in sets if rs.level is not None)
            rep.add("one solution per level", float(found != list(range(p.dim))), 0.5,
                    count=len(sets), expected=p.dim)
    for rs in sets:
        rep.add(f"residual {rs.kind} eps={rs.epsilon:+d} level {rs.level}", rs.max_residual, accept)
    rep.runtime = time.perf_counter() - t0
    payload = _payload(cfg, "bethe", rep, solutions=[rs.to_dict() for rs in sets])
    if kind == "table1":
        payload["params"] = p.to_dict()
    d = _export_dir(cfg)
    if d is not None:
        (d / f"bethe_{kind}.csv").write_text(_roots_csv(sets))
        _write_report(d, f"bethe_{kind}", payload, rep)
    _emit(cfg, payload, rep, _roots_csv(sets), _roots_pretty(sets))
    return EXIT_OK if rep.passed else EXIT_IDENTITY


def cmd_verify(cfg: RunConfig, suite: str) -> int:
    rep = run_suite(cfg.params, suite, cfg.tolerances, cfg.seed)
    payload = _payload(cfg, "verify", rep, suite=suite)
    d = _export_dir(cfg)
    if d is not None:
        _write_report(d, f"verify_{suite}", payload, rep)
        if suite in ("scalar", "all"):
            (d / "scalar_sweep.csv").write_text(scalar_sweep_csv(scalar_sweep(cfg.params, cfg.seed)))
    _emit(cfg, payload, rep)
    return EXIT_OK if rep.passed else EXIT_IDENTITY


_ROUTES = ("phi43", "hom_decomposition", "inhom_decomposition", "linear_system", "closed_form_det", "closed_form")


def _racah_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["M", "N", "route", "re", "im"])
    for r in rows:
        for k in _ROUTES:
            if k in r:
                z = complex(r[k])
                w.writerow([r["M"], r["N"], k, repr(z.real), repr(z.imag)])
    return buf.getvalue()


def _racah_pretty(rows) -> str:
    lines = []
    for r in rows:
        lines.append(f"R_{r['M']}(theta*_{r['N']})")
        for k in _ROUTES:
            if k in r:
                lines.append(f"    {k:<22s}{_fmt(r[k])}")
    return "\n".join(lines)


def cmd_racah(cfg: RunConfig, M: int | None, N: int | None) -> int:
    t0 = time.perf_counter()
    p = cfg.params
    check_conditions(p)
    for name, v in (("M", M), ("N", N)):
        if v is not None and not 0 <= v <= p.two_s:
            raise DomainError(f"{name} must lie in 0..{p.two_s}")
    rows = [r for r in racah_table(p, cfg.seed)
            if (M is None or r["M"] == M) and (N is None or r["N"] == N)]
    rep = VerifyReport("racah", p.digest())
    tol = cfg.tolerances.racah
    for k in _ROUTES[1:]:
        have = [r for r in rows if k in r]
        if have:
            worst = max(abs(r[k] - r["phi43"]) / abs(r["phi43"]) for r in have)
            rep.add(f"{k} vs 4phi3", worst, tol)
    rep.runtime = time.perf_counter() - t0
    payload = _payload(cfg, "racah", rep, table=rows)
    d = _export_dir(cfg)
    if d is not None:
        (d / "racah.csv").write_text(_racah_csv(rows))
        _write_report(d, "racah", payload, rep)
    _emit(cfg, payload, rep, _racah_csv(rows), _racah_pretty(rows))
    return EXIT_OK if rep.passed else EXIT_IDENTITY


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = make_config(ns)
        if ns.command == "triple":
            return cmd_triple(cfg)
        if ns.command == "bethe":
            return cmd_bethe(cfg, ns.kind, ns.epsilon, ns.level)
        if ns.command == "verify":
            return cmd_verify(cfg, ns.suite)
        return cmd_racah(cfg, ns.M, ns.N)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateParams as exc:
        cond = f" [condition {exc.condition}]" if exc.condition else ""
        print(f"degenerate parameters{cond}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except _SOLVER_ERRORS as exc:
        print(f"solver failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
