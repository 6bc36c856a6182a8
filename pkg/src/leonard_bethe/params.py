"""Parameter sets for q-Racah Leonard triples and their text config format.

A triple is fixed by ``q``, ``r0``, the three leading spectral coefficients
``b, bstar, bdiam`` and the spin ``s``.  The partner coefficients follow from
``r0**-2 = b*c = bstar*cstar = bdiam*cdiam``.

Labels
------
The three operators are labelled ``"A"``, ``"Astar"`` and ``"Adiam"``.  They
are cyclically ordered ``A -> Astar -> Adiam -> A``; most formulas take an
ordered triple of labels that is a rotation of this cycle.
"""

from __future__ import annotations

import cmath
import hashlib
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .errors import ConfigError, DegenerateParams, DomainError

PLAIN, STAR, DIAM = "A", "Astar", "Adiam"
LABELS = (PLAIN, STAR, DIAM)
CYCLIC_TRIPLES = ((PLAIN, STAR, DIAM), (STAR, DIAM, PLAIN), (DIAM, PLAIN, STAR))

# relative tolerance of the nondegeneracy gate
GATE_RTOL = 1e-8


def complete(a: str, b: str) -> str:
    """Return the label that is neither ``a`` nor ``b``."""
    if a == b or a not in LABELS or b not in LABELS:
        raise DomainError(f"need two distinct labels from {LABELS}, got {a!r}, {b!r}")
    return next(x for x in LABELS if x not in (a, b))


def is_cyclic(a: str, b: str) -> bool:
    """True when ``b`` follows ``a`` in the cycle A -> Astar -> Adiam."""
    return LABELS[(LABELS.index(a) + 1) % 3] == b


def _parse_spin(s) -> int:
    """Return 2s as an int; accepts 0.5, "1/2", Fraction(3, 2), 1, ..."""
    try:
        two_s = Fraction(str(s).strip()) * 2 if isinstance(s, str) else Fraction(s) * 2
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ConfigError(f"cannot read spin {s!r}") from exc
    if two_s.denominator != 1 or two_s < 1:
        raise ConfigError(f"spin must be a positive half-integer, got {s!r}")
    return int(two_s)


@dataclass(frozen=True)
class ParamSet:
    """Scalar data of one q-Racah Leonard triple.

    ``two_s`` stores 2s so that all exponents stay integral.
    """

    q: complex
    r0: complex
    b: complex
    bstar: complex
    bdiam: complex
    two_s: int

    def __post_init__(self):
        for name in ("q", "r0", "b", "bstar", "bdiam"):
            v = complex(getattr(self, name))
            if not cmath.isfinite(v):
                raise DomainError(f"{name} must be finite")
            if v == 0:
                raise DomainError(f"{name} must be nonzero")
            object.__setattr__(self, name, v)
        if int(self.two_s) != self.two_s or self.two_s < 1:
            raise DomainError("two_s must be a positive integer")
        object.__setattr__(self, "two_s", int(self.two_s))
        q = self.q
        for M in range(1, 2 * self.two_s + 1):
            if abs(q ** (2 * M) - 1) < 1e-12:
                raise DomainError(f"q^{2 * M} = 1: q is a root of unity at a relevant order")
        # zeta**-2 must equal bdiam*r0*q^{2s}
        z = self.zeta
        if abs(z ** -2 - self.bdiam * self.r0 * q ** self.two_s) > 1e-10 * abs(z ** -2):
            raise DomainError("inconsistent zeta branch")

    @classmethod
    def from_spin(cls, q, r0, b, bstar, bdiam, s) -> "ParamSet":
        """Build from spin ``s`` given as 0.5, "1/2", Fraction, ..."""
        return cls(q, r0, b, bstar, bdiam, _parse_spin(s))

    # ---- derived data -------------------------------------------------
    @property
    def s(self) -> Fraction:
        return Fraction(self.two_s, 2)

    @property
    def dim(self) -> int:
        return self.two_s + 1

    @property
    def c(self) -> complex:
        return 1 / (self.r0 ** 2 * self.b)

    @property
    def cstar(self) -> complex:
        return 1 / (self.r0 ** 2 * self.bstar)

    @property
    def cdiam(self) -> complex:
        return 1 / (self.r0 ** 2 * self.bdiam)

    @property
    def zeta(self) -> complex:
        """Principal square root of ``cdiam * r0 * q**(-2s)``."""
        return cmath.sqrt(self.cdiam * self.r0 * self.q ** (-self.two_s))

    @property
    def kappa(self) -> complex:
        """The recurring factor r0/(q+1/q)."""
        return self.r0 / (self.q + 1 / self.q)

    def bc(self, label: str) -> tuple[complex, complex]:
        """Spectral coefficients (b, c) of the operator ``label``."""
        if label == PLAIN:
            return self.b, self.c
        if label == STAR:
            return self.bstar, self.cstar
        if label == DIAM:
            return self.bdiam, self.cdiam
        raise DomainError(f"unknown label {label!r}")

    def theta(self, label: str, M: int) -> complex:
        b, c = self.bc(label)
        return b * self.q ** (2 * M) + c * self.q ** (-2 * M)

    def spectrum(self, label: str) -> list[complex]:
        return [self.theta(label, M) for M in range(self.dim)]

    def replace(self, **kw) -> "ParamSet":
        d = dict(q=self.q, r0=self.r0, b=self.b, bstar=self.bstar, bdiam=self.bdiam, two_s=self.two_s)
        d.update(kw)
        return ParamSet(**d)

    @property
    def is_real(self) -> bool:
        return all(abs(v.imag) == 0 for v in (self.q, self.r0, self.b, self.bstar, self.bdiam))

    def to_dict(self) -> dict:
        return {
            "q": _cpair(self.q),
            "r0": _cpair(self.r0),
            "b": _cpair(self.b),
            "bstar": _cpair(self.bstar),
            "bdiam": _cpair(self.bdiam),
            "s": str(self.s),
        }

    def digest(self) -> str:
        """Short stable hash used to tag reports."""
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _cpair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


# ---- nondegeneracy gate ------------------------------------------------

def _near(x: complex, y: complex) -> bool:
    return abs(x - y) <= GATE_RTOL * max(abs(x), abs(y))


def condition_violations(p: ParamSet) -> list[str]:
    """List human-readable violations of the Leonard-triple conditions.

    Condition (i) rules out repeated eigenvalues; condition (ii) rules out
    vanishing off-diagonal coefficients.  Both are checked for every cyclic
    rotation of the labels.
    """
    q, r0, two_s = p.q, p.r0, p.two_s
    out = []
    for lab in LABELS:
        b, c = p.bc(lab)
        for M in range(1, 2 * two_s):
            if _near(b / c, q ** (-2 * M)):
                out.append(f"condition (i): {lab} has b/c = q^(-{2 * M}) (repeated eigenvalue)")
    for a, b_, c_ in CYCLIC_TRIPLES:
        ba, ca = p.bc(a)
        bb, cb = p.bc(b_)
        bc_, cc = p.bc(c_)
        for M in range(1, two_s + 1):
            checks = (
                (cb, -r0 * q ** (-2 * M + 1) * ca * cc),
                (ba, -r0 * q ** (-2 * M + 1 + 2 * two_s) * bb * bc_),
                (ca, -r0 * q ** (2 * M + 2 * two_s - 1) * bb * bc_),
                (cb, -r0 * q ** (2 * M - 1) * ba * cc),
            )
            for lhs, rhs in checks:
                if _near(lhs, rhs):
                    out.append(f"condition (ii): ({a},{b_},{c_}) at M={M} gives a vanishing off-diagonal entry")
    return out


def check_conditions(p: ParamSet) -> None:
    """Raise :class:`DegenerateParams` naming the first violated condition."""
    bad = condition_violations(p)
    if bad:
        cond = "(i)" if bad[0].startswith("condition (i)") else "(ii)"
        raise DegenerateParams("; ".join(bad), condition=cond)


# ---- config files ------------------------------------------------------

_KEYS = {"q", "r0", "b", "bstar", "bdiam", "s"}
_ALIASES = {"b*": "bstar", "bstar": "bstar", "b_star": "bstar", "bd": "bdiam", "b_diam": "bdiam"}


def parse_complex(text: str) -> complex:
    """Parse ``"1.5"``, ``"2-0.3i"``, ``"0.5i"`` or ``"1/2"`` into a complex."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ConfigError("empty value")
    if re.fullmatch(r"[+-]?\d+/\d+", t):
        return complex(float(Fraction(t)))
    t2 = re.sub(r"i$", "j", t)
    if t2 in ("j", "+j", "-j"):
        t2 = t2.replace("j", "1j")
    try:
        return complex(t2)
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex value {text!r}") from exc


def parse_config_text(text: str, source: str = "<string>") -> ParamSet:
    """Parse ``key = value`` lines (``#`` starts a comment)."""
    vals: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, val = (x.strip() for x in line.split("=", 1))
        key = _ALIASES.get(key.lower(), key.lower())
        if key not in _KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in vals:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        vals[key] = val
    missing = sorted(_KEYS - vals.keys())
    if missing:
        raise ConfigError(f"{source}: missing keys {missing}")
    nums = {}
    for k in ("q", "r0", "b", "bstar", "bdiam"):
        try:
            nums[k] = parse_complex(vals[k])
        except ConfigError as exc:
            raise ConfigError(f"{source}: key {k!r}: {exc}") from None
    try:
        return ParamSet.from_spin(s=vals["s"], **nums)
    except DomainError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_config(path: str | Path) -> ParamSet:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config_text(text, source=str(path))


def format_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}i"


def dump_config(p: ParamSet) -> str:
    lines = [
        f"q = {format_complex(p.q)}",
        f"r0 = {format_complex(p.r0)}",
        f"b = {format_complex(p.b)}",
        f"bstar = {format_complex(p.bstar)}",
        f"bdiam = {format_complex(p.bdiam)}",
        f"s = {p.s}",
    ]
    return "\n".join(lines) + "\n"


# The worked example used for the s = 1 root table.
TABLE1_PARAMS = ParamSet(3.0, 1.0, 5.0, 7.0, 0.5, 2)


def iter_labels_pairs() -> Iterable[tuple[str, str]]:
    for a in LABELS:
        for b in LABELS:
            if a != b:
                yield a, b
