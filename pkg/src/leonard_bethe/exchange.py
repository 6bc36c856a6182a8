"""Coefficient functions of the dynamical exchange relations.

Pure functions of (alpha, beta, q, u, v, m).  The shift function
``gamma`` carries the sign ``eps``; every coefficient below is built from
``gamma`` with the same ``eps``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import DomainError

_POLE = 1e-13


def _b(x: complex) -> complex:
    if x == 0:
        raise DomainError("b(x) is singular at x = 0")
    return x - 1 / x


def _den(x: complex, what: str) -> complex:
    if abs(x) < _POLE:
        raise DomainError(f"pole: {what} vanishes")
    return x


def gamma(alpha: complex, beta: complex, q: complex, eps: int, u: complex, m: int) -> complex:
    """gamma^eps(u, m) = a^{(1-eps)/2} b^{(1+eps)/2} q^{-m} u - a^{(1+eps)/2} b^{(1-eps)/2} q^m / u."""
    if eps not in (1, -1):
        raise DomainError("eps must be +1 or -1")
    lo, hi = (alpha, beta) if eps == 1 else (beta, alpha)
    # eps=+1: beta q^{-m} u - alpha q^m/u ; eps=-1: alpha q^{-m} u - beta q^m/u
    return hi * q ** (-m) * u - lo * q ** m / u


def f_coef(q: complex, u: complex, v: complex) -> complex:
    return _b(q * v / u) * _b(u * v) / (_den(_b(v / u), "b(v/u)") * _den(_b(q * u * v), "b(quv)"))


def h_coef(q: complex, u: complex, v: complex) -> complex:
    return _b(q * q * u * v) * _b(q * u / v) / (_den(_b(q * u * v), "b(quv)") * _den(_b(u / v), "b(u/v)"))


@dataclass(frozen=True)
class ExchangeCoeffs:
    f: complex
    h: complex
    g: complex
    w: complex
    k: complex
    n: complex
    qc: complex
    r: complex
    sc: complex
    x: complex
    y: complex
    z: complex
    gamma: complex

    def as_dict(self) -> dict:
        return asdict(self)


def exchange_coeffs(alpha, beta, q, u, v, m, eps: int = 1) -> ExchangeCoeffs:
    """All twelve exchange coefficients at (u, v, m) plus gamma^eps(u, m)."""
    if alpha == 0 and beta == 0:
        raise DomainError("alpha and beta cannot both vanish")
    B = _b

    def G(x, mm):
        return gamma(alpha, beta, q, eps, x, mm)

    g1 = _den(G(1, m + 1), "gamma(1, m+1)")
    bq = B(q)
    bqu2 = _den(B(q * u * u), "b(q u^2)")
    bqv2 = _den(B(q * v * v), "b(q v^2)")
    bquv = _den(B(q * u * v), "b(quv)")
    buv_ = _den(B(u / v), "b(u/v)")
    bvu_ = _den(B(v / u), "b(v/u)")

    f = B(q * v / u) * B(u * v) / (bvu_ * bquv)
    h = B(q * q * u * v) * B(q * u / v) / (bquv * buv_)
    g = G(u / v, m + 1) / g1 * bq * B(v * v) / (bqv2 * buv_)
    w = -G(u * v, m) / g1 * bq / bquv
    k = G(v / u, m + 1) / g1 * bq * B(q * q * u * u) / (bqu2 * bvu_)
    n = G(1 / (u * v), m + 2) / g1 * bq * B(v * v) * B(q * q * u * u) / (bqu2 * bqv2 * bquv)
    qc = G(u / v, m) * bq * B(u * v) / (g1 * buv_ * bquv)
    r = bq * B(u * u) * G(1, m) * G(v / u, m + 1) / (g1 ** 2 * bqu2 * bvu_)
    sc = bq ** 2 * B(u * u) * G(v ** -2, m + 1) * G(v / u, m + 1) / (g1 ** 2 * bqu2 * bqv2 * bvu_)
    x = bq * B(u * u) * B(q * u / v) * G(1 / (u * v), m + 1) / (g1 * bqu2 * buv_ * bquv)
    y = -(bq ** 2) * G(v ** -2, m + 1) * G(u * v, m) / (g1 ** 2 * bqv2 * bquv)
    z = -bq * G(1, m) * G(u * v, m) / (g1 ** 2 * bquv)
    return ExchangeCoeffs(f, h, g, w, k, n, qc, r, sc, x, y, z, G(u, m))
