"""Special functions behind the closed-form bound constants.

All routines work on plain Python floats and are pure, so they can be
called from parallel sweep workers without coordination.

The incomplete beta function here is the *unregularized* one,
``B_x(a, b) = int_0^x t^(a-1) (1-t)^(b-1) dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "SpecFunResult",
    "log_gamma",
    "gamma",
    "beta",
    "incomplete_beta",
    "gauss_2f1",
]

# fdlibm split of ln 2: the high part has trailing zero bits so e*LN2_HI is exact
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10
_HALF_LN_2PI_HI = 0.9189385332046727
_HALF_LN_2PI_LO = 4.1735738455078346e-17

# B_2k / (2k (2k-1)), k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN_X = 15.0

_SERIES_MAX_TERMS = 10_000
_SERIES_HITS = 3


@dataclass(frozen=True)
class SpecFunResult:
    """Value of a special function with an a-posteriori error estimate."""

    value: float
    est_abs_error: float
    converged: bool

    def __float__(self):
        return float(self.value)


def _check_positive(name, x):
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {x!r}")


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = 134217729.0 * a  # 2**27 + 1
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _log_dd(x):
    """ln x as an unevaluated (hi, lo) pair."""
    m, e = math.frexp(x)
    if m < 0.7071067811865476:
        m *= 2.0
        e -= 1
    hi, lo = _two_sum(e * _LN2_HI, math.log(m))
    return hi, lo + e * _LN2_LO


def _stirling(x):
    # (x - 1/2) ln x - x + ln(2 pi)/2 + sum B_2k / (2k (2k-1) x^(2k-1))
    lh, ll = _log_dd(x)
    h = x - 0.5
    p, perr = _two_prod(h, lh)
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    series *= inv
    return math.fsum((p, perr, h * ll, -x, _HALF_LN_2PI_HI, _HALF_LN_2PI_LO, series))


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for real ``x > 0``.

    Stirling's series with eight Bernoulli terms, shifted upward by the
    recurrence until the argument reaches 15. Absolute error stays below
    1e-13 on [0.5, 200].
    """
    x = float(x)
    _check_positive("x", x)
    if x >= _STIRLING_MIN_X:
        return _stirling(x)
    shift = math.ceil(_STIRLING_MIN_X - x)
    prod = 1.0
    for k in range(shift):
        prod *= x + k
    return _stirling(x + shift) - math.log(prod)


def gamma(x: float) -> float:
    """Gamma function for ``x > 0`` via :func:`log_gamma`."""
    return math.exp(log_gamma(x))


def beta(a: float, b: float) -> float:
    """Complete beta function ``B(a, b)`` for ``a, b > 0``."""
    a = float(a)
    b = float(b)
    _check_positive("a", a)
    _check_positive("b", b)
    return math.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))


def _beta_cf(x, a, b, tol, max_iter):
    """Modified Lentz evaluation of the incomplete beta continued fraction."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= tol:
            return h, abs(delta - 1.0), True
    return h, abs(delta - 1.0), False


def _lower_tail(x, a, b, tol, max_iter):
    # B_x(a, b) = x^a (1-x)^b / a * CF
    cf, rel, ok = _beta_cf(x, a, b, tol, max_iter)
    front = math.exp(a * math.log(x) + b * math.log1p(-x)) / a
    value = front * cf
    # CF error plus a few ulps from the exp/log prefactor
    err = abs(value) * (rel + 64 * 2.220446049250313e-16)
    return value, err, ok


def incomplete_beta(
    x: float, a: float, b: float, *, tol: float = 1e-15, max_iter: int = 10_000
) -> SpecFunResult:
    """Unregularized incomplete beta function ``B_x(a, b)``.

    Uses the continued fraction on the side where it converges fast; on
    the other side ``B(a, b) - B_{1-x}(b, a)`` is returned.
    """
    x = float(x)
    a = float(a)
    b = float(b)
    if not math.isfinite(x) or not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    _check_positive("a", a)
    _check_positive("b", b)
    if x == 0.0:
        return SpecFunResult(0.0, 0.0, True)
    full = beta(a, b)
    if x == 1.0:
        return SpecFunResult(full, abs(full) * 1e-14, True)
    if x < (a + 1.0) / (a + b + 2.0):
        value, err, ok = _lower_tail(x, a, b, tol, max_iter)
    else:
        tail, err, ok = _lower_tail(1.0 - x, b, a, tol, max_iter)
        value = full - tail
        err += abs(full) * 1e-14
    if not ok:
        raise ConvergenceError(
            f"incomplete beta continued fraction did not converge for "
            f"x={x}, a={a}, b={b}",
            partial=value,
        )
    return SpecFunResult(value, err, True)


def _is_nonpositive_integer(c):
    return c <= 0.0 and c == math.floor(c)


def gauss_2f1(
    a: float, b: float, c: float, z: float, tol: float = 1e-15
) -> SpecFunResult:
    """Gauss hypergeometric function by direct summation of its series.

    ``sum (a)_n (b)_n / (c)_n * z^n / n!`` with term-ratio recurrence.
    Summation stops once three consecutive terms fall below
    ``tol * |partial sum|`` *and* the geometric tail bound does too, so
    ``tol`` is a relative tolerance. Any ``c`` that is not a non-positive
    integer is accepted; in particular ``c = -1/2`` works, which the Euler
    integral representation would not allow.
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    for name, v in (("a", a), ("b", b), ("c", c), ("z", z)):
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")
    if _is_nonpositive_integer(c):
        raise PoleError(f"c={c} is a non-positive integer (pole of 2F1)")
    if not abs(z) < 1.0:
        raise DomainError(f"|z| must be < 1 for the Gauss series, got z={z}")

    total = 1.0
    comp = 0.0  # Kahan compensation
    term = 1.0
    hits = 0
    tail = 0.0
    for n in range(_SERIES_MAX_TERMS):
        ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        term *= ratio
        if term == 0.0:
            return SpecFunResult(total, 0.0, True)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        rho = max(abs(ratio), abs(z))
        tail = abs(term) * rho / (1.0 - rho) if rho < 1.0 else math.inf
        if abs(term) < tol * abs(total):
            hits += 1
            if hits >= _SERIES_HITS and tail <= tol * abs(total):
                return SpecFunResult(total, tail, True)
        else:
            hits = 0
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {z}) series did not converge in "
        f"{_SERIES_MAX_TERMS} terms",
        partial=SpecFunResult(total, tail, False),
    )
