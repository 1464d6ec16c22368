"""Both sides of the first- and second-derivative fractional HH identities.

With ``e = a + eta(b, a)`` the common left side is::

    (f(a) + f(e)) / 2 - Gamma(alpha+1) / (2 eta^alpha) * [J_{a+} f(e) + J_{e-} f(a)]

and the two right sides are::

    eta/2                  * int_0^1 [(1-t)^alpha - t^alpha]           f'(a + (1-t) eta) dt
    eta^2 / (2 (alpha+1))  * int_0^1 [1 - (1-t)^(alpha+1) - t^(alpha+1)] f''(a + (1-t) eta) dt

Both are equalities with sign; the second one is sometimes printed with
absolute value bars on the left, so ``| |lhs| - |rhs| |`` is reported too.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fracquad import DEFAULT_CONFIG, QuadratureConfig, integrate, rl_left, rl_right
from .preinvex import FunctionSpec, Instance
from .specfun import gamma

__all__ = [
    "IdentityResidual",
    "hh_left_side",
    "hh_left_side_with_error",
    "lemma1_rhs",
    "lemma2_rhs",
    "lemma1_residual",
    "lemma2_residual",
    "classical_left_side",
    "classical_first_order_rhs",
    "classical_second_order_rhs",
    "RESIDUAL_FLOOR",
]

RESIDUAL_FLOOR = 1e-8
_KINK = (0.5,)


@dataclass(frozen=True)
class IdentityResidual:
    lhs: float
    rhs: float
    residual: float
    combined_quadrature_error: float
    passed: bool
    lemma: str = ""
    abs_residual: float = 0.0
    key: str = ""

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


def _fractional_mean(fn, lo, hi, alpha, cfg):
    """``Gamma(alpha+1) / (2 L^alpha) [J_{lo+} f(hi) + J_{hi-} f(lo)]`` and its error."""
    left = rl_left(fn.f, lo, hi, alpha, cfg)
    right = rl_right(fn.f, lo, hi, alpha, cfg)
    scale = gamma(alpha + 1.0) / (2.0 * (hi - lo) ** alpha)
    return scale * (left.value + right.value), scale * (left.est_abs_error + right.est_abs_error)


def hh_left_side_with_error(inst: Instance, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Signed left side of both identities plus its quadrature error estimate."""
    a, e = inst.a, inst.end
    ends = inst.fn(np.array([a, e]))
    mean, err = _fractional_mean(inst.fn, a, e, inst.alpha, cfg)
    return float(0.5 * (ends[0] + ends[1]) - mean), float(err)


def hh_left_side(inst: Instance, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Signed endpoint average minus the symmetrised fractional mean."""
    return hh_left_side_with_error(inst, cfg)[0]


def _kernel1(alpha):
    return lambda t: (1.0 - t) ** alpha - t**alpha


def _kernel2(alpha):
    return lambda t: 1.0 - (1.0 - t) ** (alpha + 1.0) - t ** (alpha + 1.0)


def _t_integral(kernel, deriv, a, eta, cfg):
    def integrand(t):
        return kernel(t) * deriv(a + (1.0 - t) * eta)

    return integrate(integrand, 0.0, 1.0, cfg=cfg, breakpoints=_KINK)


def lemma1_rhs(inst: Instance, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Right side of the first-derivative identity as ``(value, error)``."""
    eta = inst.eta
    res = _t_integral(_kernel1(inst.alpha), inst.fn.derivative(1), inst.a, eta, cfg)
    return 0.5 * eta * res.value, 0.5 * eta * res.est_abs_error


def lemma2_rhs(inst: Instance, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Right side of the second-derivative identity as ``(value, error)``."""
    eta = inst.eta
    res = _t_integral(_kernel2(inst.alpha), inst.fn.derivative(2), inst.a, eta, cfg)
    c = eta * eta / (2.0 * (inst.alpha + 1.0))
    return c * res.value, c * res.est_abs_error


def _residual(lhs, lhs_err, rhs, rhs_err, lemma, key):
    residual = abs(lhs - rhs)
    combined = lhs_err + rhs_err
    return IdentityResidual(
        lhs=lhs,
        rhs=rhs,
        residual=residual,
        combined_quadrature_error=combined,
        passed=bool(residual <= max(10.0 * combined, RESIDUAL_FLOOR)),
        lemma=lemma,
        abs_residual=abs(abs(lhs) - abs(rhs)),
        key=key,
    )


def lemma1_residual(inst: Instance, cfg: QuadratureConfig = DEFAULT_CONFIG) -> IdentityResidual:
    """Compare both sides of the first-derivative identity.

    Raises :class:`~fracineq.errors.CapabilityError` when the function has
    no first derivative.
    """
    inst.fn.derivative(1)
    lhs, lhs_err = hh_left_side_with_error(inst, cfg)
    rhs, rhs_err = lemma1_rhs(inst, cfg)
    return _residual(lhs, lhs_err, rhs, rhs_err, "L1", inst.key)


def lemma2_residual(inst: Instance, cfg: QuadratureConfig = DEFAULT_CONFIG) -> IdentityResidual:
    """Compare both sides of the second-derivative identity (signed)."""
    inst.fn.derivative(2)
    lhs, lhs_err = hh_left_side_with_error(inst, cfg)
    rhs, rhs_err = lemma2_rhs(inst, cfg)
    return _residual(lhs, lhs_err, rhs, rhs_err, "L2", inst.key)


# Classical forms on [a, b] written out independently of Instance/eta.


def classical_left_side(fn: FunctionSpec, a: float, b: float, alpha: float,
                        cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``(f(a)+f(b))/2 - Gamma(alpha+1)/(2 (b-a)^alpha) [J_{a+} f(b) + J_{b-} f(a)]``."""
    j_left = rl_left(fn.f, a, b, alpha, cfg).value
    j_right = rl_right(fn.f, a, b, alpha, cfg).value
    fa, fb = (float(v) for v in fn(np.array([a, b])))
    return (fa + fb) / 2.0 - gamma(alpha + 1.0) / (2.0 * (b - a) ** alpha) * (j_left + j_right)


def classical_first_order_rhs(fn: FunctionSpec, a: float, b: float, alpha: float,
                              cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``(b-a)/2 int_0^1 [(1-t)^alpha - t^alpha] f'(t a + (1-t) b) dt``."""
    d1 = fn.derivative(1)
    res = integrate(lambda t: ((1 - t) ** alpha - t**alpha) * d1(t * a + (1 - t) * b),
                    0.0, 1.0, cfg=cfg, breakpoints=_KINK)
    return (b - a) / 2.0 * res.value


def classical_second_order_rhs(fn: FunctionSpec, a: float, b: float, alpha: float,
                               cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``(b-a)^2/2 int_0^1 (1 - (1-t)^(alpha+1) - t^(alpha+1))/(alpha+1) f''(t a + (1-t) b) dt``."""
    d2 = fn.derivative(2)
    res = integrate(
        lambda t: (1 - (1 - t) ** (alpha + 1) - t ** (alpha + 1)) / (alpha + 1) * d2(t * a + (1 - t) * b),
        0.0, 1.0, cfg=cfg, breakpoints=_KINK,
    )
    return (b - a) ** 2 / 2.0 * res.value
