"""Structured verification reports with JSON and CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable


def cjson(x: Any) -> Any:
    """Recursively convert complex numbers (and numpy scalars/arrays) for JSON."""
    try:
        import numpy as np
    except ImportError:  # pragma: no cover
        np = None
    if np is not None and isinstance(x, np.ndarray):
        return [cjson(v) for v in x.tolist()]
    if np is not None and isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, complex):
        return [_fnum(x.real), _fnum(x.imag)]
    if isinstance(x, float):
        return _fnum(x)
    if isinstance(x, dict):
        return {str(k): cjson(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [cjson(v) for v in x]
    return x


def _fnum(v: float):
    if math.isnan(v) or math.isinf(v):
        return str(v)
    return float(v)


@dataclass
class Check:
    """One identity check.  ``passed`` is derived from residual and tol."""

    name: str
    residual: float
    tol: float
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        r = self.residual
        return bool(r == r and r < self.tol)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": _fnum(float(self.residual)),
            "tol": float(self.tol),
            "passed": self.passed,
            "info": cjson(self.info),
        }


@dataclass
class VerifyReport:
    title: str
    params_hash: str
    checks: list[Check] = field(default_factory=list)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def add(self, name: str, residual: float, tol: float, **info) -> Check:
        c = Check(name, float(residual), float(tol), info)
        self.checks.append(c)
        return c

    def extend(self, other: "VerifyReport") -> None:
        self.checks.extend(other.checks)
        self.runtime += other.runtime

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "title": self.title,
            "params_hash": self.params_hash,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }
        if timing:
            d["runtime_s"] = round(self.runtime, 3)
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["title", "name", "residual", "tol", "passed"])
        for c in self.checks:
            w.writerow([self.title, c.name, repr(float(c.residual)), repr(c.tol), c.passed])
        return buf.getvalue()

    def to_pretty(self) -> str:
        lines = [f"== {self.title} [{self.params_hash}] =="]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  {mark}  {c.name:<48s} residual={c.residual:.3e}  tol={c.tol:.0e}")
            for key, val in c.info.get("values", {}).items():
                lines.append(f"          {key}: {_pretty_num(val)}")
        lines.append(f"  -> {'PASS' if self.passed else 'FAIL'} ({len(self.checks)} checks, {self.runtime:.2f} s)")
        return "\n".join(lines)


def _pretty_num(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def merge(title: str, params_hash: str, reports: Iterable[VerifyReport]) -> VerifyReport:
    out = VerifyReport(title, params_hash)
    for r in reports:
        for c in r.checks:
            out.checks.append(Check(f"{r.title}/{c.name}", c.residual, c.tol, c.info))
        out.runtime += r.runtime
    return out


def write_matrix_csv(path, mat) -> None:
    """Row-major CSV with one "re,im" cell per entry."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in mat:
            w.writerow([f"{complex(z).real!r},{complex(z).imag!r}" for z in row])


def read_matrix_csv(path):
    import numpy as np

    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            vals = []
            for cell in row:
                re_, im_ = cell.split(",")
                vals.append(complex(float(re_), float(im_)))
            rows.append(vals)
    return np.array(rows, dtype=complex)
