"""Function instances, invexity maps and grid certification of lambda-preinvexity.

A nonnegative ``f`` is lambda-preinvex with respect to ``eta`` when, for all
``u, v`` in its domain and ``t`` in ``(0, 1)``::

    f(u + t eta(v, u)) <= sqrt(t) / (2 sqrt(1-t)) f(v)
                          + (1-lam) sqrt(1-t) / (2 lam sqrt(t)) f(u)

:func:`certify_lambda_preinvex` samples that inequality on a finite grid.
Passing is a *necessary* condition only; reports say "grid-certified",
never "proven".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import CapabilityError, DomainError

__all__ = [
    "FunctionSpec",
    "InvexityMap",
    "Instance",
    "CertificationReport",
    "certify_lambda_preinvex",
    "certify_mt",
    "check_power_difference",
    "check_one_minus_t_bound",
    "get_function",
    "get_map",
    "FUNCTION_IDS",
    "MAP_IDS",
    "DEFAULT_GRID",
    "IDENTITY",
    "scaled_map",
    "constant",
    "linear",
    "square",
    "shifted_square",
    "exponential",
    "power_three_halves",
    "hinge_square",
]

DEFAULT_GRID = (21, 21, 99)
CERT_TOL = 1e-12
_EPS = np.finfo(float).eps

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FunctionSpec:
    """A scalar function with optional analytic derivatives.

    Evaluators take and return numpy arrays. ``nonneg`` is a claim that
    ``f >= 0`` on the domain; :meth:`check` verifies it on a grid.
    """

    id: str
    f: Evaluator
    f_prime: Evaluator | None = None
    f_second: Evaluator | None = None
    domain: tuple[float, float] = (0.0, 1.0)
    nonneg: bool = False

    def __post_init__(self):
        lo, hi = self.domain
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise DomainError(f"{self.id}: bad domain {self.domain!r}")

    def __call__(self, x):
        return _evaluate(self.f, x)

    def derivative(self, order: int) -> Evaluator:
        if order == 0:
            return self.f
        ev = {1: self.f_prime, 2: self.f_second}.get(order)
        if ev is None:
            raise CapabilityError(f"function {self.id!r} has no derivative of order {order}")
        return ev

    def has_derivative(self, order: int) -> bool:
        return order == 0 or {1: self.f_prime, 2: self.f_second}.get(order) is not None

    def magnitude(self, order: int = 0, q: float = 1.0) -> "FunctionSpec":
        """``|f^(order)|^q`` as a new nonnegative :class:`FunctionSpec`."""
        ev = self.derivative(order)
        q = float(q)

        def mag(x, ev=ev, q=q):
            v = np.abs(_evaluate(ev, x))
            return v if q == 1.0 else v**q

        suffix = "" if order == 0 else "'" * order
        ident = f"|{self.id}{suffix}|" + ("" if q == 1.0 else f"^{q!r}")
        return FunctionSpec(ident, mag, domain=self.domain, nonneg=True)

    def contains(self, lo, hi) -> bool:
        d_lo, d_hi = self.domain
        slack = 16 * _EPS * max(1.0, abs(d_lo), abs(d_hi))
        return d_lo - slack <= lo and hi <= d_hi + slack

    def check(self, n: int = 101) -> dict:
        """Check the declared derivatives and the nonneg claim on a grid.

        Returns the worst scaled mismatch for each available derivative
        (``<= 1`` means within ``max(1e-6, 1e-6 |f^(k)|)``) and whether the
        nonneg claim held. Cell midpoints are used so stencils stay inside
        the domain even where a derivative blows up at an endpoint.
        """
        lo, hi = self.domain
        x = lo + (hi - lo) * (np.arange(n) + 0.5) / n
        h = 1e-5 * max(1.0, abs(lo), abs(hi))
        out = {"nonneg_ok": (not self.nonneg) or bool(np.all(self(x) >= 0.0))}
        chain = [self.f, self.f_prime, self.f_second]
        for k in (1, 2):
            lower, ev = chain[k - 1], chain[k]
            if ev is None or lower is None:
                continue
            fd = (_evaluate(lower, x + h) - _evaluate(lower, x - h)) / (2 * h)
            exact = _evaluate(ev, x)
            allowed = np.maximum(1e-6, 1e-6 * np.abs(exact))
            out[f"d{k}_ratio"] = float(np.max(np.abs(fd - exact) / allowed))
        return out


def _evaluate(ev, x):
    x = np.asarray(x, dtype=float)
    v = np.asarray(ev(x), dtype=float)
    if v.shape != x.shape:
        v = np.broadcast_to(v, x.shape).copy()
    return v


@dataclass(frozen=True)
class InvexityMap:
    """The bifunction ``eta(v, u)``; vectorised over numpy arrays."""

    id: str
    eta: Callable[[np.ndarray, np.ndarray], np.ndarray]

    def __call__(self, v, u):
        return self.eta(v, u)


@dataclass(frozen=True)
class Instance:
    """One verification configuration."""

    fn: FunctionSpec
    map: InvexityMap
    a: float
    b: float
    alpha: float
    lam: float = 0.5
    q: float = 2.0

    def __post_init__(self):
        self.validate()

    @property
    def eta(self) -> float:
        return float(self.map(np.float64(self.b), np.float64(self.a)))

    @property
    def end(self) -> float:
        """Right endpoint ``a + eta(b, a)``."""
        return self.a + self.eta

    @property
    def p(self) -> float:
        """Hölder conjugate of ``q`` (infinite when ``q == 1``)."""
        return math.inf if self.q == 1.0 else self.q / (self.q - 1.0)

    @property
    def ratio(self) -> float:
        """``(1 - lam) / lam``."""
        return (1.0 - self.lam) / self.lam

    @property
    def hull(self) -> tuple[float, float]:
        """Smallest interval holding ``a``, ``b`` and ``a + eta(b, a)``."""
        pts = (self.a, self.b, self.end)
        return (min(pts), max(pts))

    @property
    def key(self) -> str:
        return (
            f"{self.fn.id}|{self.map.id}|a={self.a!r}|b={self.b!r}"
            f"|alpha={self.alpha!r}|lambda={self.lam!r}|q={self.q!r}"
        )

    def validate(self):
        for name in ("a", "b", "alpha", "lam", "q"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"{name} must be a finite number, got {v!r}")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha!r}")
        if not 0 < self.lam <= 0.5:
            raise DomainError(f"lambda must lie in (0, 1/2], got {self.lam!r}")
        if not self.q >= 1:
            raise DomainError(f"q must be >= 1, got {self.q!r}")
        if not self.a < self.end:
            raise DomainError(
                f"need a < a + eta(b, a); got a={self.a}, eta(b, a)={self.eta}"
            )
        lo, hi = self.hull
        if not self.fn.contains(lo, hi):
            raise DomainError(
                f"[{lo}, {hi}] is not inside the domain {self.fn.domain} of {self.fn.id!r}"
            )


@dataclass(frozen=True)
class CertificationReport:
    passed: bool
    max_violation: float
    argmax: tuple[float, float, float]
    grid_sizes: tuple[int, int, int]
    fn_id: str = ""
    map_id: str = ""
    lam: float = 0.5
    domain: tuple[float, float] = (0.0, 1.0)
    tolerance: float = CERT_TOL
    qualifier: str = field(default="grid-certified", compare=False)

    @property
    def status(self) -> str:
        # not being certifiable is a property of the function, not a defect
        return "pass" if self.passed else "flag"


def _t_grid(n_t):
    return np.arange(1, n_t + 1, dtype=float) / (n_t + 1)


def _check_grid(grid):
    if len(grid) != 3:
        raise DomainError(f"grid must be (n_u, n_v, n_t), got {grid!r}")
    n_u, n_v, n_t = (int(g) for g in grid)
    if min(n_u, n_v) < 2 or n_t < 1:
        raise DomainError(f"grid needs n_u, n_v >= 2 and n_t >= 1, got {grid!r}")
    return n_u, n_v, n_t


def certify_lambda_preinvex(
    fn: FunctionSpec,
    map: InvexityMap,
    lam: float,
    domain: tuple[float, float] | None = None,
    grid: tuple[int, int, int] = DEFAULT_GRID,
    tol: float = CERT_TOL,
) -> CertificationReport:
    """Sample the lambda-preinvex inequality on a ``(u, v, t)`` grid.

    ``u`` and ``v`` run over ``n`` equispaced points of ``domain``
    (endpoints included) and ``t`` over ``k/(n_t+1)``, ``k = 1..n_t``; the
    endpoints 0 and 1 are excluded because the coefficients diverge there.
    Ties in the maximum violation resolve to the lexicographically
    smallest ``(u, v, t)``. Non-finite values count as infinite violation.
    """
    if not fn.nonneg:
        raise DomainError(f"{fn.id!r} is not declared nonnegative; lambda-preinvexity needs f >= 0")
    lam = float(lam)
    if not 0 < lam <= 0.5:
        raise DomainError(f"lambda must lie in (0, 1/2], got {lam!r}")
    n_u, n_v, n_t = _check_grid(grid)
    lo, hi = domain if domain is not None else fn.domain
    if not fn.contains(lo, hi):
        raise DomainError(f"certification domain [{lo}, {hi}] is outside {fn.domain}")

    u = np.linspace(lo, hi, n_u)
    v = np.linspace(lo, hi, n_v)
    t = _t_grid(n_t)
    fu = fn(u)
    fv = fn(v)
    if np.any(fu < 0) or np.any(fv < 0):
        raise DomainError(f"{fn.id!r} takes negative values on the grid")
    c_v = np.sqrt(t) / (2.0 * np.sqrt(1.0 - t))
    c_u = (1.0 - lam) * np.sqrt(1.0 - t) / (2.0 * lam * np.sqrt(t))

    uu, vv = np.meshgrid(u, v, indexing="ij")
    eta = np.asarray(map(vv, uu), dtype=float)
    pts = uu[..., None] + t * eta[..., None]
    slack = 16 * _EPS * max(1.0, abs(lo), abs(hi))
    outside = (pts < lo - slack) | (pts > hi + slack)
    if outside.any():
        i, j, k = np.unravel_index(int(np.argmax(outside)), outside.shape)
        raise DomainError(
            f"u + t*eta(v, u) leaves [{lo}, {hi}] at (u, v, t)=({u[i]!r}, {v[j]!r}, {t[k]!r})"
        )
    pts = np.clip(pts, lo, hi)
    with np.errstate(invalid="ignore", over="ignore"):
        lhs = fn(pts)
        rhs = c_v * fv[None, :, None] + c_u * fu[:, None, None]
        viol = lhs - rhs
    viol = np.where(np.isnan(viol), np.inf, viol)
    flat = int(np.argmax(viol))
    i, j, k = np.unravel_index(flat, viol.shape)
    worst = float(viol[i, j, k])
    return CertificationReport(
        passed=bool(worst <= tol),
        max_violation=worst,
        argmax=(float(u[i]), float(v[j]), float(t[k])),
        grid_sizes=(n_u, n_v, n_t),
        fn_id=fn.id,
        map_id=map.id,
        lam=lam,
        domain=(float(lo), float(hi)),
        tolerance=tol,
    )


def certify_mt(
    fn: FunctionSpec,
    domain: tuple[float, float] | None = None,
    grid: tuple[int, int, int] = DEFAULT_GRID,
    tol: float = CERT_TOL,
) -> CertificationReport:
    """MT-convexity: the ``lam = 1/2``, ``eta(v, u) = v - u`` special case."""
    return certify_lambda_preinvex(fn, IDENTITY, 0.5, domain, grid, tol)


def check_power_difference(A1: float, A2: float, p: float) -> bool:
    """Check ``(A1 - A2)^p <= A1^p - A2^p`` for ``A1 > A2 >= 0``, ``p >= 1``.

    A few ulps of ``A1^p`` are allowed so equality cases (``p = 1``,
    ``A2 = 0``) survive rounding.
    """
    A1, A2, p = float(A1), float(A2), float(p)
    if not (math.isfinite(A1) and math.isfinite(A2) and math.isfinite(p)):
        raise DomainError("arguments must be finite")
    if not (A1 > A2 >= 0.0):
        raise DomainError(f"need A1 > A2 >= 0, got A1={A1}, A2={A2}")
    if not p >= 1.0:
        raise DomainError(f"need p >= 1, got {p}")
    lhs = (A1 - A2) ** p
    rhs = A1**p - A2**p
    return lhs <= rhs + 8 * _EPS * A1**p


def check_one_minus_t_bound(t: float, m: float) -> bool:
    """Check ``(1-t)^m`` against ``2^(1-m) - t^m`` on ``[0, 1]``.

    The inequality is ``<=`` for ``m`` in ``[0, 1]`` and ``>=`` for
    ``m >= 1`` (both hold with equality at ``m = 1``). A rounding slack
    of a few ulps is allowed.
    """
    t, m = float(t), float(m)
    if not (math.isfinite(t) and 0.0 <= t <= 1.0):
        raise DomainError(f"t must lie in [0, 1], got {t}")
    if not (math.isfinite(m) and m >= 0.0):
        raise DomainError(f"m must be >= 0, got {m}")
    lhs = (1.0 - t) ** m
    rhs = 2.0 ** (1.0 - m) - t**m
    slack = 8 * _EPS * max(1.0, 2.0 ** (1.0 - m))
    if m <= 1.0:
        return lhs <= rhs + slack
    return lhs >= rhs - slack


# -- built-in library ---------------------------------------------------------

_WIDE = (-1.0, 2.0)


def constant(c: float = 2.0) -> FunctionSpec:
    c = float(c)
    return FunctionSpec(
        f"const:{c!r}" if c != 2.0 else "const",
        lambda x: np.full_like(x, c, dtype=float),
        lambda x: np.zeros_like(x, dtype=float),
        lambda x: np.zeros_like(x, dtype=float),
        domain=_WIDE,
        nonneg=c >= 0,
    )


def linear(slope: float = 1.0, intercept: float = 0.0) -> FunctionSpec:
    return FunctionSpec(
        "linear",
        lambda x: slope * x + intercept,
        lambda x: np.full_like(x, slope, dtype=float),
        lambda x: np.zeros_like(x, dtype=float),
        domain=_WIDE,
        nonneg=False,
    )


def square() -> FunctionSpec:
    return FunctionSpec(
        "square",
        lambda x: x * x,
        lambda x: 2.0 * x,
        lambda x: np.full_like(x, 2.0, dtype=float),
        domain=_WIDE,
        nonneg=True,
    )


def shifted_square(c: float = 0.3) -> FunctionSpec:
    c = float(c)
    return FunctionSpec(
        "sqshift" if c == 0.3 else f"sqshift:{c!r}",
        lambda x: (x - c) ** 2,
        lambda x: 2.0 * (x - c),
        lambda x: np.full_like(x, 2.0, dtype=float),
        domain=_WIDE,
        nonneg=True,
    )


def exponential(k: float = 1.0) -> FunctionSpec:
    k = float(k)
    ident = {1.0: "exp", -1.0: "exp_neg"}.get(k, f"exp:{k!r}")
    return FunctionSpec(
        ident,
        lambda x: np.exp(k * x),
        lambda x: k * np.exp(k * x),
        lambda x: k * k * np.exp(k * x),
        domain=_WIDE,
        nonneg=True,
    )


def _pow32_second(x):
    # 3/(4 sqrt(x)) is +inf at 0; that is the intended value
    with np.errstate(divide="ignore"):
        return 0.75 / np.sqrt(x)


def power_three_halves() -> FunctionSpec:
    return FunctionSpec(
        "pow32",
        lambda x: x**1.5,
        lambda x: 1.5 * np.sqrt(x),
        _pow32_second,
        domain=(0.0, 2.0),
        nonneg=True,
    )


def hinge_square(c: float = 0.8) -> FunctionSpec:
    """``max(x - c, 0)^2``: f' is a kink at ``c``, so no f'' is declared."""
    c = float(c)
    return FunctionSpec(
        "hinge2" if c == 0.8 else f"hinge2:{c!r}",
        lambda x: np.maximum(x - c, 0.0) ** 2,
        lambda x: 2.0 * np.maximum(x - c, 0.0),
        None,
        domain=_WIDE,
        nonneg=True,
    )


IDENTITY = InvexityMap("identity", lambda v, u: v - u)


def scaled_map(k: float) -> InvexityMap:
    k = float(k)
    if not 0.0 < k <= 1.0:
        raise DomainError(f"scaled map needs k in (0, 1], got {k!r}")
    if k == 1.0:
        return IDENTITY
    return InvexityMap(f"scaled:{k!r}", lambda v, u, k=k: k * (v - u))


_FUNCTIONS = {
    "const": lambda arg: constant(2.0 if arg is None else arg),
    "linear": lambda arg: linear(1.0 if arg is None else arg),
    "square": lambda arg: square(),
    "sqshift": lambda arg: shifted_square(0.3 if arg is None else arg),
    "exp": lambda arg: exponential(1.0 if arg is None else arg),
    "exp_neg": lambda arg: exponential(-1.0),
    "pow32": lambda arg: power_three_halves(),
    "hinge2": lambda arg: hinge_square(0.8 if arg is None else arg),
}
_TAKES_ARG = {"const", "linear", "sqshift", "exp", "hinge2"}
_MAPS = {
    "identity": lambda arg: IDENTITY,
    "scaled": lambda arg: scaled_map(0.7 if arg is None else arg),
}

FUNCTION_IDS = tuple(_FUNCTIONS)
MAP_IDS = tuple(_MAPS)


def _parse_id(ident, table, kind, takes_arg):
    name, sep, arg = str(ident).partition(":")
    if name not in table:
        raise KeyError(f"unknown {kind} id {ident!r}; known: {', '.join(table)}")
    if not sep:
        return table[name](None)
    if name not in takes_arg:
        raise KeyError(f"{kind} id {name!r} takes no parameter")
    try:
        value = float(arg)
    except ValueError:
        raise KeyError(f"bad parameter in {kind} id {ident!r}") from None
    return table[name](value)


def get_function(ident: str) -> FunctionSpec:
    """Resolve a library function id such as ``"exp"`` or ``"exp:0.5"``."""
    return _parse_id(ident, _FUNCTIONS, "function", _TAKES_ARG)


def get_map(ident: str) -> InvexityMap:
    """Resolve a map id: ``"identity"`` or ``"scaled:<k>"``."""
    return _parse_id(ident, _MAPS, "map", {"scaled"})
