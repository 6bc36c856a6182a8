"""q-calculus primitives and q-Racah polynomials.

Everything here is a pure function of complex scalars.  Terminating
basic hypergeometric sums are evaluated by multiplying successive term
ratios, which keeps intermediate values in range for |q| well above 1.

``precision="mp"`` evaluates the sums with :mod:`mpmath` at 50 significant
digits; the default ``"auto"`` does so only when the double-precision sum
has cancelled more than ``AUTO_CANCEL`` of its terms' total magnitude.
"""

from __future__ import annotations

from typing import Sequence

import mpmath

from .errors import DegenerateParams, DomainError, SingularSeries
from .params import DIAM, PLAIN, STAR, ParamSet, check_conditions, complete

MP_DPS = 50
AUTO_CANCEL = 1e4
_SING_RTOL = 1e-13


def bfun(x: complex) -> complex:
    """b(x) = x - 1/x."""
    if x == 0:
        raise DomainError("b(x) is singular at x = 0")
    return x - 1 / x


def qnum(n: int, q: complex) -> complex:
    """Symmetric q-number [n]_q."""
    if q == 0 or q == 1 or q == -1:
        raise DomainError(f"[n]_q undefined at q = {q}")
    return (q ** n - q ** (-n)) / (q - 1 / q)


def qpoch(a, q2: complex, n: int) -> complex:
    """q-shifted factorial (a; q2)_n.

    ``a`` may also be a sequence of bases, in which case the product of the
    individual factorials is returned.
    """
    if n < 0:
        raise DomainError("qpoch length must be nonnegative")
    if isinstance(a, (list, tuple)):
        out = 1 + 0j
        for x in a:
            out *= qpoch(x, q2, n)
        return out
    out = 1 + 0j
    p = 1 + 0j
    for _ in range(n):
        out *= 1 - a * p
        p *= q2
    return out


def _phi_terms_double(n, others, dens, q2, z, with_mass=False):
    total = 1 + 0j
    mass = 1.0
    term = 1 + 0j
    p = 1 + 0j  # q2**k
    for k in range(n):
        num = (1 - p * q2 ** (-n))
        for a in others:
            num *= 1 - a * p
        den = 1 - p * q2
        for d in dens:
            f = 1 - d * p
            if abs(f) <= _SING_RTOL * max(1.0, abs(d * p)):
                raise SingularSeries(f"denominator factor (1 - {d}*q2^{k}) vanishes")
            den *= f
        term *= num / den * z
        total += term
        mass += abs(term)
        p *= q2
    return (total, mass) if with_mass else total


def _phi_terms_mp(n, others, dens, q2, z):
    with mpmath.workdps(MP_DPS):
        q2m = mpmath.mpc(q2)
        zm = mpmath.mpc(z)
        om = [mpmath.mpc(a) for a in others]
        dm = [mpmath.mpc(d) for d in dens]
        total = mpmath.mpc(1)
        term = mpmath.mpc(1)
        p = mpmath.mpc(1)
        for k in range(n):
            num = 1 - p * q2m ** (-n)
            for a in om:
                num *= 1 - a * p
            den = 1 - p * q2m
            for d in dm:
                f = 1 - d * p
                if abs(f) <= _SING_RTOL * max(1, abs(d * p)):
                    raise SingularSeries(f"denominator factor (1 - {d}*q2^{k}) vanishes")
                den *= f
            term *= num / den * zm
            total += term
            p *= q2m
        return complex(total)


def phi43_terminating(
    n: int,
    others: Sequence[complex],
    denominators: Sequence[complex],
    q2: complex,
    z: complex,
    precision: str = "auto",
) -> complex:
    """Terminating 4phi3 with first numerator q2**(-n).

    The terminating numerator is fixed structurally by the integer ``n``;
    ``others`` holds the remaining three numerator parameters.
    Raises :class:`SingularSeries` if a denominator factor vanishes for
    some k < n.
    """
    if n < 0:
        raise DomainError("termination index must be nonnegative")
    if len(others) != 3 or len(denominators) != 3:
        raise DomainError("4phi3 needs 3 free numerators and 3 denominators")
    if precision == "double":
        return _phi_terms_double(n, others, denominators, q2, z)
    if precision == "auto":
        total, mass = _phi_terms_double(n, others, denominators, q2, z, with_mass=True)
        if mass <= AUTO_CANCEL * abs(total):
            return total
        return _phi_terms_mp(n, others, denominators, q2, z)
    if precision == "mp":
        return _phi_terms_mp(n, others, denominators, q2, z)
    raise DomainError(f"unknown precision {precision!r}")


def _abc(p: ParamSet, labels: Sequence[str]):
    a, b, c = labels
    return p.bc(a), p.bc(b), p.bc(c)


def racah_args(p: ParamSet, labels: Sequence[str], M: int, N: int):
    """The 4phi3 data of R^{a,c}_M(theta^b_N) for labels (a, b, c)."""
    (ba, ca), (bb, cb), (bc, cc) = _abc(p, labels)
    q, r0, t = p.q, p.r0, p.two_s
    nums = [q ** (-2 * M), ba / ca * q ** (2 * M), q ** (-2 * N), bb / cb * q ** (2 * N)]
    dens = [-ba * cc / cb * r0 * q, -bb * bc / ca * r0 * q ** (2 * t + 1), q ** (-2 * t)]
    return nums, dens


class _MPView:
    """Parameter view whose derived quantities are formed in mpmath.

    Passing double-rounded arguments (c = 1/(r0^2 b) and friends) into an
    extended-precision sum does not help when the sum itself is badly
    conditioned, so the arguments are rebuilt from the primary parameters.
    """

    def __init__(self, p: ParamSet):
        self.q = mpmath.mpc(p.q)
        self.r0 = mpmath.mpc(p.r0)
        self.two_s = p.two_s
        self._b = {PLAIN: mpmath.mpc(p.b), STAR: mpmath.mpc(p.bstar), DIAM: mpmath.mpc(p.bdiam)}

    def bc(self, label):
        b = self._b[label]
        return b, 1 / (self.r0 ** 2 * b)


def _termination(nums, M, N):
    if M <= N:
        return M, [nums[1], nums[2], nums[3]]
    return N, [nums[0], nums[1], nums[3]]


def racah_poly(p: ParamSet, labels: Sequence[str], M: int, N: int, precision: str = "auto") -> complex:
    """R^{a,c}_M(theta^b_N) for an explicit label triple (a, b, c)."""
    if not (0 <= M <= p.two_s and 0 <= N <= p.two_s):
        raise DomainError(f"indices must lie in 0..{p.two_s}")
    if precision not in ("double", "auto", "mp"):
        raise DomainError(f"unknown precision {precision!r}")
    if precision != "mp":
        nums, dens = racah_args(p, labels, M, N)
        q2 = p.q ** 2
        # terminate on whichever index is smaller
        n, others = _termination(nums, M, N)
        total, mass = _phi_terms_double(n, others, dens, q2, q2, with_mass=True)
        if precision == "double" or mass <= AUTO_CANCEL * abs(total):
            return total
    with mpmath.workdps(MP_DPS):
        v = _MPView(p)
        nums, dens = racah_args(v, labels, M, N)
        n, others = _termination(nums, M, N)
        q2 = v.q ** 2
        return _phi_terms_mp(n, others, dens, q2, q2)


def racah_eval(p: ParamSet, pair: tuple[str, str], M: int, N: int, precision: str = "auto") -> complex:
    """R^{a,c}_M(theta^b_N) for the ordered pair (a, b); c is the third label."""
    check_conditions(p)
    a, b = pair
    return racah_poly(p, (a, b, complete(a, b)), M, N, precision=precision)


def _nonzero(x: complex, what: str) -> complex:
    if x == 0 or not abs(x) > 1e-300:
        raise DegenerateParams(f"vanishing denominator in {what}")
    return x


def k_coeff(p: ParamSet, labels: Sequence[str], N: int) -> complex:
    """Normalization k^{a,b,c}_N of the transition-matrix columns."""
    (ba, ca), (bb, cb), (bc, cc) = _abc(p, labels)
    q, r0, t = p.q, p.r0, p.two_s
    q2 = q * q
    num = qpoch([-bb * bc / ca * r0 * q ** (2 * t + 1), -ba * cc / cb * r0 * q, bb / cb, q ** (-2 * t)], q2, N)
    den = qpoch([q2, -bb * bc / ba * r0 * q, -ca * cc / cb * r0 * q ** (1 - 2 * t), bb / cb * q ** (2 * t + 2)], q2, N)
    den *= (ba / ca) ** N * (1 - bb / cb)
    return num * (1 - bb / cb * q ** (4 * N)) / _nonzero(den, "k coefficient")


def k_coeff_swapped(p: ParamSet, labels: Sequence[str], M: int) -> complex:
    """k^{b,a,c}_M: the a <-> b relabelling of :func:`k_coeff`."""
    a, b, c = labels
    return k_coeff(p, (b, a, c), M)


def nu0_coeff(p: ParamSet, labels: Sequence[str]) -> complex:
    """Normalization nu_0^{a,b,c} of the inverse transition matrix."""
    (ba, ca), (bb, cb), (bc, cc) = _abc(p, labels)
    q, r0, t = p.q, p.r0, p.two_s
    q2 = q * q
    num = qpoch([ba / ca * q2, bb / cb * q2], q2, t)
    den = (-bb * bc / ca * r0 * q ** (2 * t + 1)) ** t
    den *= qpoch([-ba * cc / bb * r0 * q ** (1 - 2 * t), -ca * cc / cb * r0 * q ** (1 - 2 * t)], q2, t)
    return num / _nonzero(den, "nu0 coefficient")
