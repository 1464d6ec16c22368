"""Adaptive panel quadrature with endpoint-singularity removal.

The core is a vectorised Gauss-Legendre panel rule. Each panel is
integrated once whole and once as two halves; the difference is the
panel's error estimate and the halved value is kept. Panels whose error
exceeds their share of the tolerance are bisected until the summed
estimate meets ``max(abs_tol, rel_tol * |value|)``.

Singular endpoint weights are removed by a change of variables before
the core ever sees them:

* ``(x - t)^(alpha-1)`` and ``(t - x)^(alpha-1)``: ``distance = u^k``.
  With ``k = 1/alpha`` the weight becomes the constant ``1/alpha``; when
  ``1/alpha`` is not an integer, ``k = m/alpha`` leaves the polynomial
  ``u^(m-1)``.
  Integer alpha needs no substitution.
* ``sqrt(t/(1-t))`` and ``sqrt((1-t)/t)`` on ``[0, 1]``:
  ``t = sin^2(theta)`` turns them into ``2 sin^2`` and ``2 cos^2``.

Summation order is fixed, so results are bit-for-bit reproducible for a
given configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, EvaluationError
from .specfun import gamma

__all__ = [
    "QuadratureConfig",
    "WeightKind",
    "QuadResult",
    "integrate",
    "rl_left",
    "rl_right",
]

Evaluator = Callable[[np.ndarray], np.ndarray]

SINGULARITY_POLICIES = ("substitution", "panel_refinement")
_WEIGHT_KINDS = ("none", "left_power", "right_power", "sqrt_left", "sqrt_right")


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_panels: int = 4096
    nodes_per_panel: int = 15
    singularity_policy: str = "substitution"

    def __post_init__(self):
        if not (self.rel_tol > 0 and math.isfinite(self.rel_tol)):
            raise DomainError(f"rel_tol must be > 0, got {self.rel_tol!r}")
        if not (self.abs_tol > 0 and math.isfinite(self.abs_tol)):
            raise DomainError(f"abs_tol must be > 0, got {self.abs_tol!r}")
        if int(self.max_panels) != self.max_panels or self.max_panels < 1:
            raise DomainError(f"max_panels must be an integer >= 1, got {self.max_panels!r}")
        if int(self.nodes_per_panel) != self.nodes_per_panel or self.nodes_per_panel < 2:
            raise DomainError(
                f"nodes_per_panel must be an integer >= 2, got {self.nodes_per_panel!r}"
            )
        if self.singularity_policy not in SINGULARITY_POLICIES:
            raise DomainError(
                f"singularity_policy must be one of {SINGULARITY_POLICIES}, "
                f"got {self.singularity_policy!r}"
            )

    def replace(self, **changes) -> "QuadratureConfig":
        values = {
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "max_panels": self.max_panels,
            "nodes_per_panel": self.nodes_per_panel,
            "singularity_policy": self.singularity_policy,
        }
        values.update(changes)
        return QuadratureConfig(**values)


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class WeightKind:
    """Weight ``w(t)`` multiplying the integrand.

    ``left_power`` is ``(hi - t)^(alpha-1)``, singular at the upper limit;
    ``right_power`` is ``(t - lo)^(alpha-1)``, singular at the lower limit.
    The square-root weights are defined in absolute ``t`` and need
    ``[lo, hi]`` inside ``[0, 1]``.
    """

    kind: str = "none"
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in _WEIGHT_KINDS:
            raise DomainError(f"unknown weight kind {self.kind!r}")
        if self.kind in ("left_power", "right_power"):
            if self.alpha is None or not (self.alpha > 0 and math.isfinite(self.alpha)):
                raise DomainError(f"power weight needs alpha > 0, got {self.alpha!r}")
        elif self.alpha is not None:
            raise DomainError(f"weight {self.kind!r} takes no alpha")

    @classmethod
    def none(cls):
        return cls("none")

    @classmethod
    def left_power(cls, alpha):
        return cls("left_power", float(alpha))

    @classmethod
    def right_power(cls, alpha):
        return cls("right_power", float(alpha))

    @classmethod
    def sqrt_left(cls):
        return cls("sqrt_left")

    @classmethod
    def sqrt_right(cls):
        return cls("sqrt_right")

    def __call__(self, t, lo, hi):
        """Evaluate the weight directly (no substitution)."""
        t = np.asarray(t, dtype=float)
        if self.kind == "none":
            return np.ones_like(t)
        if self.kind == "left_power":
            return (hi - t) ** (self.alpha - 1.0)
        if self.kind == "right_power":
            return (t - lo) ** (self.alpha - 1.0)
        if self.kind == "sqrt_left":
            return np.sqrt(t) / np.sqrt(1.0 - t)
        return np.sqrt(1.0 - t) / np.sqrt(t)


@dataclass(frozen=True)
class QuadResult:
    value: float
    est_abs_error: float
    evaluations: int
    converged: bool
    panels: int = field(default=0, compare=False)

    def __float__(self):
        return float(self.value)


@lru_cache(maxsize=None)
def _gauss_legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _call(f, t):
    vals = np.asarray(f(t), dtype=float)
    if vals.shape != t.shape:
        vals = np.broadcast_to(vals, t.shape)
    return vals


def _checked(f, to_t):
    """Wrap ``f`` so non-finite values raise with the offending abscissa."""

    def g(s):
        t = to_t(s)
        vals = _call(f, t)
        bad = ~np.isfinite(vals)
        if bad.any():
            where = float(t.flat[int(np.argmax(bad.ravel()))])
            raise EvaluationError(f"integrand is not finite at t={where!r}", abscissa=where)
        return t, vals

    return g


def _panel_sums(g, left, right, n):
    """Whole-panel and two-half Gauss-Legendre sums for every panel."""
    x, w = _gauss_legendre(n)
    mid = 0.5 * (left + right)
    half = 0.5 * (right - left)
    quarter = 0.5 * half
    pts = np.concatenate(
        [
            mid[:, None] + half[:, None] * x,
            (left + quarter)[:, None] + quarter[:, None] * x,
            (mid + quarter)[:, None] + quarter[:, None] * x,
        ],
        axis=1,
    )
    vals = g(pts)
    whole = half * (vals[:, :n] @ w)
    halves = quarter * (vals[:, n : 2 * n] @ w) + quarter * (vals[:, 2 * n :] @ w)
    return halves, np.abs(halves - whole), pts.size


def _adaptive(g, edges, cfg):
    """Adaptive bisection over the panels delimited by ``edges``."""
    n = cfg.nodes_per_panel
    edges = np.asarray(edges, dtype=float)
    left = edges[:-1].copy()
    right = edges[1:].copy()
    values, errors, evals = _panel_sums(g, left, right, n)
    scale = max(abs(edges[0]), abs(edges[-1]), 1.0)
    min_width = 64 * np.finfo(float).eps * scale

    while True:
        total = math.fsum(values)
        total_err = math.fsum(errors)
        if not (math.isfinite(total) and math.isfinite(total_err)):
            return QuadResult(total, math.inf, evals, False, len(left))
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if total_err <= tol:
            return QuadResult(total, total_err, evals, True, len(left))
        share = tol / (2.0 * len(left))
        split = (errors > share) & ((right - left) > min_width)
        n_split = int(split.sum())
        if n_split == 0 or len(left) + n_split > cfg.max_panels:
            return QuadResult(total, total_err, evals, False, len(left))
        keep = ~split
        mid = 0.5 * (left[split] + right[split])
        new_left = np.concatenate([left[split], mid])
        new_right = np.concatenate([mid, right[split]])
        new_vals, new_errs, k = _panel_sums(g, new_left, new_right, n)
        evals += k
        # keep panels ordered by position so the summation order is fixed
        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        values = np.concatenate([values[keep], new_vals])
        errors = np.concatenate([errors[keep], new_errs])
        order = np.argsort(left, kind="stable")
        left, right = left[order], right[order]
        values, errors = values[order], errors[order]


def _validate_interval(lo, hi):
    lo = float(lo)
    hi = float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError(f"integration limits must be finite, got [{lo}, {hi}]")
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    return lo, hi


def _knots(lo, hi, breakpoints):
    inner = sorted(float(p) for p in breakpoints if lo < float(p) < hi)
    return [lo, *inner, hi]


def integrate(
    f: Evaluator,
    lo: float,
    hi: float,
    weight: WeightKind | None = None,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    *,
    breakpoints: Sequence[float] = (),
) -> QuadResult:
    """Integrate ``w(t) f(t)`` over ``[lo, hi]``.

    ``f`` must accept and return numpy arrays. ``breakpoints`` inside the
    interval start the panel mesh there (use it for kinks such as the
    one at ``t = 1/2`` in ``|(1-t)^alpha - t^alpha|``).
    """
    lo, hi = _validate_interval(lo, hi)
    weight = weight or WeightKind.none()
    knots = _knots(lo, hi, breakpoints)
    substitute = cfg.singularity_policy == "substitution"
    kind = weight.kind

    if kind in ("sqrt_left", "sqrt_right") and not (0.0 <= lo and hi <= 1.0):
        raise DomainError(f"square-root weights need [lo, hi] within [0, 1], got [{lo}, {hi}]")

    if kind == "none":
        g = _checked(f, lambda s: s)
        return _adaptive(lambda s: g(s)[1], knots, cfg)

    if kind in ("left_power", "right_power") and (not substitute or _is_integer(weight.alpha)):
        # work in the distance to the singular end so nodes never round onto it
        expo = weight.alpha - 1.0
        if kind == "left_power":
            g = _checked(f, lambda d: hi - d)
            edges = [hi - p for p in reversed(knots)]
        else:
            g = _checked(f, lambda d: lo + d)
            edges = [p - lo for p in knots]
        if expo == 0.0:
            return _adaptive(lambda d: g(d)[1], edges, cfg)
        return _adaptive(lambda d: d**expo * g(d)[1], edges, cfg)

    if not substitute:
        if kind == "sqrt_left":
            # singular at t = 1: integrate in d = 1 - t
            g = _checked(f, lambda d: 1.0 - d)
            edges = [1.0 - p for p in reversed(knots)]
            return _adaptive(lambda d: np.sqrt(1.0 - d) / np.sqrt(d) * g(d)[1], edges, cfg)
        g = _checked(f, lambda s: s)

        def raw(s):
            t, vals = g(s)
            return weight(t, lo, hi) * vals

        return _adaptive(raw, knots, cfg)

    if kind in ("left_power", "right_power"):
        alpha = weight.alpha
        k = _grading(alpha)
        if kind == "left_power":
            g = _checked(f, lambda u: hi - u**k)
            edges = [(hi - p) ** (1.0 / k) for p in reversed(knots)]
        else:
            g = _checked(f, lambda u: lo + u**k)
            edges = [(p - lo) ** (1.0 / k) for p in knots]
        # dt = k u^(k-1) du and distance^(alpha-1) = u^(k(alpha-1))
        power = k * alpha - 1.0
        if power == 0.0:
            return _adaptive(lambda u: k * g(u)[1], edges, cfg)
        return _adaptive(lambda u: k * u**power * g(u)[1], edges, cfg)

    g = _checked(f, lambda th: np.sin(th) ** 2)
    edges = [math.asin(math.sqrt(k)) for k in knots]
    if kind == "sqrt_left":
        return _adaptive(lambda th: 2.0 * np.sin(th) ** 2 * g(th)[1], edges, cfg)
    return _adaptive(lambda th: 2.0 * np.cos(th) ** 2 * g(th)[1], edges, cfg)


def _is_integer(x):
    return float(x).is_integer()


def _grading(alpha):
    """Exponent k of the substitution ``distance = u^k`` for a power weight.

    When ``1/alpha`` is an integer the weight disappears exactly.
    Otherwise ``k = m/alpha`` with integer ``m >= 4`` turns the leftover
    factor into the polynomial ``u^(m-1)``; ``m >= alpha`` keeps ``k >= 1``
    so ``f(hi - u^k)`` stays smooth at ``u = 0``.
    """
    inv = 1.0 / alpha
    if _is_integer(inv):
        return inv
    return max(4.0, float(math.ceil(alpha))) / alpha


def _scaled(res, c):
    return QuadResult(res.value * c, res.est_abs_error * abs(c), res.evaluations, res.converged, res.panels)


def _check_alpha(alpha):
    alpha = float(alpha)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be > 0, got {alpha!r}")
    return alpha


def rl_left(
    f: Evaluator, a: float, x: float, alpha: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> QuadResult:
    """Left-sided Riemann-Liouville integral ``J_{a+}^alpha f(x)``."""
    alpha = _check_alpha(alpha)
    if not float(a) < float(x):
        raise DomainError(f"left-sided RL integral needs a < x, got a={a}, x={x}")
    res = integrate(f, a, x, WeightKind.left_power(alpha), cfg)
    return _scaled(res, 1.0 / gamma(alpha))


def rl_right(
    f: Evaluator, x: float, b: float, alpha: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> QuadResult:
    """Right-sided Riemann-Liouville integral ``J_{b-}^alpha f(x)``."""
    alpha = _check_alpha(alpha)
    if not float(x) < float(b):
        raise DomainError(f"right-sided RL integral needs x < b, got x={x}, b={b}")
    res = integrate(f, x, b, WeightKind.right_power(alpha), cfg)
    return _scaled(res, 1.0 / gamma(alpha))
