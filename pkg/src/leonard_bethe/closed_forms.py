"""Golden data and closed-form expressions used as test fixtures.

Everything here is independent of the numerical machinery: plain formulas
in the parameters, for spin 1/2 unless noted, plus the reference Bethe roots
of the q=3, r0=1, b=5, b*=7, b_diam=1/2, s=1 configuration.
"""

from __future__ import annotations

from .params import ParamSet
from .triple import ladder_scalars


def _b(x):
    return x - 1 / x


# Reference roots, printed to six significant figures in the source table.
# Keys: ("hom", N) for homogeneous eps=+1, ("inhom", N) for inhomogeneous eps=-1.
TABLE1_ROOTS = {
    ("hom", 0): (),
    ("hom", 1): (18.5087,),
    ("hom", 2): (2.72742, 12.0749),
    ("inhom", 0): (3.50405, 11.9071),
    ("inhom", 1): (3.208, 12.0789),
    ("inhom", 2): (2.01305, 12.1539),
}
TABLE1_RTOL = 5e-4


def _need_half(p: ParamSet):
    from .errors import SpinMismatch

    if p.two_s != 1:
        raise SpinMismatch("closed form is specific to spin 1/2")


def hom_root_half(p: ParamSet) -> complex:
    """The single homogeneous eps=+1 root U at level 1, spin 1/2."""
    _need_half(p)
    q, r0, b, bs, bd, cs = p.q, p.r0, p.b, p.bstar, p.bdiam, p.cstar
    num = b * (q * q * bs - cs / q ** 2) * (1 + q * q * r0 ** 2 * bd ** 2) + (q - 1 / q) / r0 * bd * (1 + q * q * r0 ** 2 * b ** 2)
    return num / ((q + 1 / q) * r0 * b * bd * (q * q * bs - cs))


def inhom_root_half(p: ParamSet, N: int) -> complex:
    """The inhomogeneous eps=-1 root U at level N in {0, 1}, spin 1/2."""
    _need_half(p)
    lad = ladder_scalars(p)
    h0, h1 = lad.h
    t0, t1 = p.spectrum("Adiam")
    k = p.kappa
    if N == 0:
        return k * (h0 * t0 - h1 * t1) / (h0 - h1)
    if N == 1:
        Uh = hom_root_half(p)
        return k * (k * (h1 - h0) * t0 * t1 + (h0 * t0 - h1 * t1) * Uh) / (k * (h1 * t0 - h0 * t1) + (h0 - h1) * Uh)
    raise ValueError("N must be 0 or 1")


def y_minus_diag_half(p: ParamSet, u: complex) -> complex:
    """Y_-(u|u) at spin 1/2 in expanded form."""
    _need_half(p)
    q, r0, b, bs, bd = p.q, p.r0, p.b, p.bstar, p.bdiam
    return _b(q) / (q ** 3 * r0 ** 3 * b * bs * bd) * (
        q * r0 * bd * bs * (q * q * r0 ** 2 * b ** 2 - 1) / u ** 2
        + q ** 3 * u ** 2 * r0 * bd * bs * (q * q * r0 * r0 * b * b - 1)
        + bs * (1 - q ** 4 * r0 ** 2 * b ** 2)
        - (q * q - 1) * q * r0 * b * bd * (q * q * r0 * r0 * bs ** 2 + 1)
        + q * q * r0 * r0 * bd ** 2 * bs * (1 - q ** 4 * r0 * r0 * b * b))


def z1(p: ParamSet, y: complex) -> complex:
    q, r0, b, bs, bd = p.q, p.r0, p.b, p.bstar, p.bdiam
    return q ** 3 * r0 * bd * y ** 2 + q * r0 * bd / y ** 2 - 1 + q * q * r0 * r0 * bd * (q * (q * q - 1) * r0 * b * bs - bd)


def z2(p: ParamSet, y: complex) -> complex:
    q, r0, b, bs, bd = p.q, p.r0, p.b, p.bstar, p.bdiam
    return q ** 3 * r0 * b * bd * y ** 2 + q * r0 * b * bd / y ** 2 + q * (q * q - 1) * r0 * bd * bs - b * (q * q * r0 * r0 * bd ** 2 + 1)


def scalar_half(p: ParamSet, eps: int, M: int, u: complex) -> complex:
    """<theta_M|Psi^eps(u)>/<theta_M|theta_M> for one variable, spin 1/2."""
    _need_half(p)
    q, r0, b, bs, bd = p.q, p.r0, p.b, p.bstar, p.bdiam
    w = 1 - q * q * r0 * r0 * b * b
    if eps == -1 and M == 0:
        return q ** 3 * r0 ** 2 * b ** 2 / (_b(q) * w) * u * _b(u * u) * y_minus_diag_half(p, u)
    if eps == -1 and M == 1:
        return (-q * _b(q) * b * (1 + q * r0 * b * bd / bs) * (1 + q * r0 * bd * bs / b)
                / (r0 * bd * w) * u * _b(u * u))
    if eps == 1 and M == 0:
        return _b(u * u) / (q ** 4 * r0 ** 3 * bs * bd * u) * z1(p, u)
    if eps == 1 and M == 1:
        return _b(u * u) / (q ** 4 * r0 ** 3 * b * bs * bd * u) * z2(p, u)
    raise ValueError("need eps in {+1,-1} and M in {0,1}")


def racah_half(p: ParamSet) -> complex:
    """R_1(theta*_1) for the pair (A, A*) at spin 1/2."""
    _need_half(p)
    q, r0, b, bs, bd = p.q, p.r0, p.b, p.bstar, p.bdiam
    return q * r0 * (b + q * r0 * bs * bd) * (bs + q * r0 * b * bd) / ((bd + q * r0 * b * bs) * (1 + q ** 3 * r0 ** 3 * b * bs * bd))


def fgh0_half(p: ParamSet) -> complex:
    """f_0/(g_0 h_0) at spin 1/2."""
    _need_half(p)
    q, r0, b, bs, bd = p.q, p.r0, p.b, p.bstar, p.bdiam
    return (-(1 - q * q * r0 * r0 * b * b) * (1 - q * q * r0 * r0 * bd ** 2) * (1 - q * q * r0 * r0 * bs ** 2)
            / ((q * r0 * b * bd / bs + 1) * (q * r0 * b * bs / bd + 1) * (q * r0 * bd * bs / b + 1)))


def racah_det_half(p: ParamSet, y1: complex) -> complex:
    """Determinant-route value of R_1(theta*_N) at the inhomogeneous root y1."""
    _need_half(p)
    q, r0, b, bs, bd = p.q, p.r0, p.b, p.bstar, p.bdiam
    return (-_b(q) ** 2 * (1 + q * r0 * b * bd / bs) * (1 + q * r0 * bd * bs / b)
            / (q * q * r0 ** 3 * b * bd) / y_minus_diag_half(p, y1))
