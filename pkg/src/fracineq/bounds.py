"""Closed-form HH bounds versus quadrature oracles versus the actual gap.

For each theorem two numbers are produced:

* ``paper_bound``: the printed right-hand side, assembled from
  :mod:`fracineq.specfun` exactly as typeset.
* ``oracle_bound``: the same estimate with every integral the argument
  passes through computed numerically instead of in closed form. This is
  what the argument actually establishes, so ``gap <= oracle_bound`` is a
  hard check on grid-certified instances.

Notation used below, with ``L = (1 - lam) / lam``::

    d(t) = (1-t)^alpha - t^alpha
    D(t) = 1 - (1-t)^(alpha+1) - t^(alpha+1)
    w(t; A, B) = sqrt(t)/(2 sqrt(1-t)) A + L sqrt(1-t)/(2 sqrt(t)) B

Theorems T3 and T5 are evaluated in two modes. ``as_stated`` follows the
printed formula; ``proof_consistent`` puts the ``1/q`` power where the
power-mean/Hölder step would put it (on the bracket in T3, on ``pi/4`` in
T5).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, PreconditionError
from .fracquad import DEFAULT_CONFIG, QuadratureConfig, WeightKind, integrate
from .identities import hh_left_side_with_error
from .preinvex import (
    DEFAULT_GRID,
    IDENTITY,
    CertificationReport,
    Instance,
    certify_lambda_preinvex,
)
from .specfun import gamma, gauss_2f1, incomplete_beta, log_gamma

__all__ = [
    "THEOREMS",
    "MODES",
    "BoundReport",
    "brace_constant",
    "second_order_constant",
    "paper_bound",
    "oracle_integrals",
    "certify_for",
    "t1_bounds",
    "t2_bounds",
    "t3_bounds",
    "t4_bounds",
    "t5_bounds",
    "t6_bounds",
    "evaluate_theorem",
    "evaluate_instance",
    "REMARKS",
    "remark_bound",
    "remark_reduction_check",
]

THEOREMS = ("T1", "T2", "T3", "T4", "T5", "T6")
MODES = ("as_stated", "proof_consistent")
DUAL_MODE = ("T3", "T5")
BOUND_FLOOR = 1e-9
_SQRT_PI = math.sqrt(math.pi)
_KINK = (0.5,)

# derivative order and whether |f^(k)| is raised to q
_NEEDS = {
    "T1": (1, False),
    "T2": (1, True),
    "T3": (1, True),
    "T4": (2, False),
    "T5": (2, True),
    "T6": (2, True),
}


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    gap: float
    paper_bound: float
    oracle_bound: float
    bound_holds_oracle: bool
    bound_holds_paper: bool
    paper_vs_oracle_rel_diff: float
    mode: str = "as_stated"
    key: str = ""
    certified: bool = True
    tolerance: float = BOUND_FLOOR
    gap_error: float = 0.0
    oracle_error: float = 0.0
    oracle_bound_loose: float | None = None
    paper_below_oracle: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def slack_ratio(self) -> float | None:
        """``gap / oracle_bound``; ``None`` for the 0/0 exact-equality class."""
        if self.oracle_bound == 0.0:
            return None if self.gap <= self.tolerance else math.inf
        return self.gap / self.oracle_bound

    @property
    def status(self) -> str:
        if not self.certified:
            return "flag"
        if not self.bound_holds_oracle:
            return "fail"
        if not self.bound_holds_paper or self.paper_below_oracle:
            return "flag"
        return "pass"


# -- closed-form constants ----------------------------------------------------


def brace_constant(alpha: float) -> float:
    """The curly-brace constant shared by T1 and T3, term by term as printed."""
    a = float(alpha)
    if not a > 0:
        raise DomainError(f"alpha must be > 0, got {alpha!r}")
    g2 = gamma(a + 2.0)
    first = 2.0 * _SQRT_PI * gamma(a + 1.5) / g2
    second = _SQRT_PI * gamma(a + 0.5) / g2
    third = 4.0 * incomplete_beta(0.5, a + 1.5, 0.5).value
    f_half = gauss_2f1(1.0, a + 2.0, 0.5, 0.5).value
    f_mhalf = gauss_2f1(1.0, a + 2.0, -0.5, 0.5).value
    fourth = (
        2.0 ** (-a)
        * (-(4.0 * a * a + 18.0 * a + 19.0) * f_half - 2.0 * (a + 2.0) * f_mhalf)
        / (4.0 * a * a + 8.0 * a + 3.0)
    )
    f_last = gauss_2f1(-0.5, 0.5 - a, 0.5, 0.5).value
    fifth = 2.0 ** (-a) * (-a + 2.0 ** (a + 0.5) * f_last - 1.0) / (a * (a + 1.0))
    return first - second - third + fourth + fifth


def second_order_constant(alpha: float) -> float:
    """``pi/2 - sqrt(pi) Gamma(alpha+3/2) / Gamma(alpha+2)`` (T4 and T6)."""
    a = float(alpha)
    return math.pi / 2.0 - _SQRT_PI * math.exp(
        log_gamma(a + 1.5) - log_gamma(a + 2.0)
    )


def _endpoint_values(inst, order):
    ev = inst.fn.derivative(order)
    vals = np.abs(np.asarray(ev(np.array([inst.a, inst.b], dtype=float)), dtype=float))
    return float(vals[0]), float(vals[1])


def _check_q(theorem, inst):
    if _NEEDS[theorem][1] and not inst.q > 1.0:
        raise DomainError(f"{theorem} needs q > 1, got q={inst.q!r}")


def paper_bound(theorem: str, inst: Instance, mode: str = "as_stated") -> float:
    """Printed right-hand side of ``theorem`` for ``inst``."""
    if theorem not in THEOREMS:
        raise DomainError(f"unknown theorem {theorem!r}")
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}")
    _check_q(theorem, inst)
    alpha, eta, L, q = inst.alpha, inst.eta, inst.ratio, inst.q
    order, _ = _NEEDS[theorem]
    fa, fb = _endpoint_values(inst, order)

    if theorem == "T1":
        return eta / 8.0 * (fa + L * fb) * brace_constant(alpha)
    p = inst.p
    A, B = fa**q, fb**q
    if theorem == "T2":
        major = (2.0 - 2.0 ** (1.0 - alpha * p)) / (p * alpha + 1.0)
        return eta / 2.0 * (math.pi / 4.0) ** (1.0 / q) * major ** (1.0 / p) * (A + L * B) ** (1.0 / q)
    if theorem == "T3":
        bracket = A + L * B
        if mode == "proof_consistent":
            bracket = bracket ** (1.0 / q)
        return (
            ((1.0 - 2.0 ** (-alpha)) / (alpha + 1.0)) ** ((q - 1.0) / q)
            * eta / 2.0 ** (1.0 + 1.0 / q)
            * bracket
            * brace_constant(alpha) ** (1.0 / q)
        )
    c2 = eta * eta / (2.0 * (alpha + 1.0))
    if theorem == "T4":
        return eta * eta / (4.0 * (alpha + 1.0)) * second_order_constant(alpha) * (fa + L * fb)
    if theorem == "T5":
        quarter_pi = math.pi / 4.0
        if mode == "proof_consistent":
            quarter_pi = quarter_pi ** (1.0 / q)
        return c2 * (1.0 - 2.0 ** (-alpha)) * quarter_pi * (A + L * B) ** (1.0 / q)
    return (
        c2
        * (alpha / (alpha + 2.0)) ** (1.0 - 1.0 / q)
        * second_order_constant(alpha) ** (1.0 / q)
        * (A / 2.0 + L * B / 2.0) ** (1.0 / q)
    )


# -- oracle integrals ---------------------------------------------------------



def _abs_d(alpha):
    return lambda t: np.abs((1.0 - t) ** alpha - t**alpha)


def _big_d(alpha):
    ap1 = alpha + 1.0
    # 1 - (1-t)^(alpha+1) without cancellation near t = 0
    return lambda t: -np.expm1(ap1 * np.log1p(-t)) - t**ap1


@dataclass(frozen=True)
class _Integral:
    value: float
    error: float

    @property
    def rel(self):
        return self.error / abs(self.value) if self.value else 0.0


def _q(f, weight, cfg):
    res = integrate(f, 0.0, 1.0, weight, cfg, breakpoints=_KINK)
    return _Integral(res.value, res.est_abs_error)


@lru_cache(maxsize=4096)
def _first_order_integrals(alpha, cfg):
    half = lambda g: (lambda t: 0.5 * g(t))  # noqa: E731
    absd = _abs_d(alpha)
    plus = lambda t: (1.0 - t) ** alpha + t**alpha  # noqa: E731
    return {
        "abs_d": _q(absd, None, cfg),
        "abs_d_left": _q(half(absd), WeightKind.sqrt_left(), cfg),
        "abs_d_right": _q(half(absd), WeightKind.sqrt_right(), cfg),
        "sum_left": _q(half(plus), WeightKind.sqrt_left(), cfg),
        "sum_right": _q(half(plus), WeightKind.sqrt_right(), cfg),
    }


@lru_cache(maxsize=4096)
def _second_order_integrals(alpha, cfg):
    D = _big_d(alpha)
    return {
        "D": _q(D, None, cfg),
        "D_left": _q(lambda t: 0.5 * D(t), WeightKind.sqrt_left(), cfg),
        "D_right": _q(lambda t: 0.5 * D(t), WeightKind.sqrt_right(), cfg),
    }


@lru_cache(maxsize=16)
def _weight_integrals(cfg):
    half = lambda t: np.full_like(t, 0.5)  # noqa: E731
    return {
        "w_left": _q(half, WeightKind.sqrt_left(), cfg),
        "w_right": _q(half, WeightKind.sqrt_right(), cfg),
    }


@lru_cache(maxsize=4096)
def _power_integrals(alpha, p, cfg):
    absd = _abs_d(alpha)
    D = _big_d(alpha)
    return {
        "abs_d_p": _q(lambda t: absd(t) ** p, None, cfg),
        "D_p": _q(lambda t: np.maximum(D(t), 0.0) ** p, None, cfg),
    }


def oracle_integrals(alpha: float, p: float | None = None,
                     cfg: QuadratureConfig = DEFAULT_CONFIG) -> dict[str, float]:
    """Every proof integral for ``alpha`` (and ``p``), keyed by name.

    ``abs_d_left`` is ``int |d| sqrt(t)/(2 sqrt(1-t))``, ``D_right`` is
    ``int D sqrt(1-t)/(2 sqrt(t))`` and so on; ``w_left``/``w_right`` are the
    bare weight integrals (both ``pi/4``).
    """
    alpha = float(alpha)
    out = {}
    for table in (_first_order_integrals(alpha, cfg), _second_order_integrals(alpha, cfg),
                  _weight_integrals(cfg)):
        out.update({k: v.value for k, v in table.items()})
    if p is not None:
        out.update({k: v.value for k, v in _power_integrals(alpha, float(p), cfg).items()})
    return out


def _oracle(theorem, inst, cfg):
    """Oracle bound, its error estimate and (T1 only) the loose variant."""
    alpha, eta, L, q = inst.alpha, inst.eta, inst.ratio, inst.q
    order, _ = _NEEDS[theorem]
    fa, fb = _endpoint_values(inst, order)

    if order == 1:
        ints = _first_order_integrals(alpha, cfg)
        if theorem == "T1":
            il, ir = ints["abs_d_left"], ints["abs_d_right"]
            tight = eta / 2.0 * (fa * il.value + L * fb * ir.value)
            err = eta / 2.0 * (fa * il.error + L * fb * ir.error)
            sl, sr = ints["sum_left"], ints["sum_right"]
            loose = eta / 2.0 * (fa * sl.value + L * fb * sr.value)
            return tight, err, loose
        A, B = fa**q, fb**q
        if theorem == "T2":
            P = _power_integrals(alpha, inst.p, cfg)["abs_d_p"]
            w = _weight_integrals(cfg)
            inner = w["w_left"].value * A + L * w["w_right"].value * B
            value = eta / 2.0 * P.value ** (1.0 / inst.p) * inner ** (1.0 / q)
            return value, value * (P.rel / inst.p + w["w_left"].rel / q), None
        M, il, ir = ints["abs_d"], ints["abs_d_left"], ints["abs_d_right"]
        inner = A * il.value + L * B * ir.value
        value = eta / 2.0 * M.value ** (1.0 - 1.0 / q) * inner ** (1.0 / q)
        return value, value * (M.rel + max(il.rel, ir.rel)), None

    ints = _second_order_integrals(alpha, cfg)
    c2 = eta * eta / (2.0 * (alpha + 1.0))
    if theorem == "T4":
        il, ir = ints["D_left"], ints["D_right"]
        value = c2 * (fa * il.value + L * fb * ir.value)
        return value, c2 * (fa * il.error + L * fb * ir.error), None
    A, B = fa**q, fb**q
    if theorem == "T5":
        Q = _power_integrals(alpha, inst.p, cfg)["D_p"]
        w = _weight_integrals(cfg)
        inner = w["w_left"].value * A + L * w["w_right"].value * B
        value = c2 * Q.value ** (1.0 / inst.p) * inner ** (1.0 / q)
        return value, value * (Q.rel / inst.p + w["w_left"].rel / q), None
    N, il, ir = ints["D"], ints["D_left"], ints["D_right"]
    inner = A * il.value + L * B * ir.value
    value = c2 * N.value ** (1.0 - 1.0 / q) * inner ** (1.0 / q)
    return value, value * (N.rel + max(il.rel, ir.rel)), None


# -- certification gate -------------------------------------------------------


def certify_for(theorem: str, inst: Instance,
                grid: tuple[int, int, int] = DEFAULT_GRID) -> CertificationReport:
    """Certify the derivative magnitude ``theorem`` assumes lambda-preinvex.

    T1/T4 need ``|f'|``/``|f''|``; the others need its ``q``-th power. The
    check runs on the hull of ``a``, ``b`` and ``a + eta(b, a)``.
    """
    order, powered = _NEEDS[theorem]
    mag = inst.fn.magnitude(order, inst.q if powered else 1.0)
    return certify_lambda_preinvex(mag, inst.map, inst.lam, inst.hull, grid)


# -- reports ------------------------------------------------------------------


def _make_report(theorem, mode, inst, gap_pair, cfg, certification, require_certified):
    _check_q(theorem, inst)
    gap_signed, gap_err = gap_pair
    gap = abs(gap_signed)
    certified = certification.passed if certification is not None else False
    if require_certified and not certified:
        raise PreconditionError(
            f"{theorem}: derivative magnitude is not grid-certified for {inst.key}"
        )
    paper = paper_bound(theorem, inst, mode)
    oracle, oracle_err, loose = _oracle(theorem, inst, cfg)
    tol = max(BOUND_FLOOR, 10.0 * (gap_err + oracle_err))
    if oracle == 0.0:
        rel = 0.0 if paper == 0.0 else math.inf
    else:
        rel = abs(paper - oracle) / abs(oracle)
    below = (oracle - paper) > max(tol, 1e-8 * abs(oracle))
    notes = []
    if not certified:
        notes.append("exploratory: derivative magnitude not grid-certified")
    if below:
        notes.append("printed bound is smaller than the proof oracle")
    if theorem in ("T2", "T3", "T5", "T6") and inst.alpha > 1.0:
        notes.append("alpha outside the stated range [0, 1]")
    return BoundReport(
        theorem=theorem,
        gap=gap,
        paper_bound=paper,
        oracle_bound=oracle,
        bound_holds_oracle=bool(gap <= oracle + tol),
        bound_holds_paper=bool(gap <= paper + tol),
        paper_vs_oracle_rel_diff=rel,
        mode=mode,
        key=inst.key,
        certified=certified,
        tolerance=tol,
        gap_error=gap_err,
        oracle_error=oracle_err,
        oracle_bound_loose=loose,
        paper_below_oracle=bool(below),
        notes=tuple(notes),
    )


def _bounds(theorem, inst, cfg, mode, gap, certification, grid, require_certified):
    if gap is None:
        gap = hh_left_side_with_error(inst, cfg)
    if certification is None:
        certification = certify_for(theorem, inst, grid)
    return _make_report(theorem, mode, inst, gap, cfg, certification, require_certified)


def _theorem_fn(theorem):
    def run(inst: Instance, cfg: QuadratureConfig = DEFAULT_CONFIG, *, mode: str = "as_stated",
            gap=None, certification=None, grid=DEFAULT_GRID, require_certified=False):
        return _bounds(theorem, inst, cfg, mode, gap, certification, grid, require_certified)

    run.__name__ = f"{theorem.lower()}_bounds"
    return run


t1_bounds = _theorem_fn("T1")
t1_bounds.__doc__ = """First-derivative bound with the printed brace constant.

The oracle is the split-at-1/2 integral of ``|d| w(t; |f'(a)|, |f'(b)|)``;
the report also carries the looser variant with ``(1-t)^alpha + t^alpha``.
"""
t2_bounds = _theorem_fn("T2")
t2_bounds.__doc__ = """Hölder bound; oracle uses the exact ``int |d|^p`` instead of its majorant."""
t3_bounds = _theorem_fn("T3")
t3_bounds.__doc__ = """Power-mean bound; ``mode`` picks as-printed or proof-consistent bracket power."""
t4_bounds = _theorem_fn("T4")
t4_bounds.__doc__ = """Second-derivative bound with ``pi/2 - sqrt(pi) Gamma(alpha+3/2)/Gamma(alpha+2)``."""
t5_bounds = _theorem_fn("T5")
t5_bounds.__doc__ = """Second-derivative Hölder bound; oracle uses the exact ``int D^p``."""
t6_bounds = _theorem_fn("T6")
t6_bounds.__doc__ = """Second-derivative power-mean bound."""

_BY_NAME = dict(zip(THEOREMS, (t1_bounds, t2_bounds, t3_bounds, t4_bounds, t5_bounds, t6_bounds)))


def evaluate_theorem(theorem: str, inst: Instance, cfg: QuadratureConfig = DEFAULT_CONFIG, *,
                     gap=None, certification=None, grid=DEFAULT_GRID) -> list[BoundReport]:
    """All reports for one theorem: both modes for T3/T5, one otherwise."""
    if theorem not in _BY_NAME:
        raise DomainError(f"unknown theorem {theorem!r}")
    if gap is None:
        gap = hh_left_side_with_error(inst, cfg)
    if certification is None:
        certification = certify_for(theorem, inst, grid)
    modes = MODES if theorem in DUAL_MODE else ("as_stated",)
    return [
        _BY_NAME[theorem](inst, cfg, mode=m, gap=gap, certification=certification)
        for m in modes
    ]


def evaluate_instance(inst: Instance, theorems=THEOREMS, cfg: QuadratureConfig = DEFAULT_CONFIG,
                      grid=DEFAULT_GRID) -> list[BoundReport]:
    """Reports for several theorems on one instance.

    The gap is computed once and certifications are shared between
    theorems that need the same derivative magnitude.
    """
    gap = hh_left_side_with_error(inst, cfg)
    certs = {}
    out = []
    for th in theorems:
        need = _NEEDS[th] if th in _NEEDS else None
        if need is None:
            raise DomainError(f"unknown theorem {th!r}")
        if need not in certs:
            certs[need] = certify_for(th, inst, grid)
        out.extend(evaluate_theorem(th, inst, cfg, gap=gap, certification=certs[need], grid=grid))
    return out


# -- remarks ------------------------------------------------------------------

# (theorem, variant) -> (pinned alpha, pinned lambda, mode of the general bound)
REMARKS = {
    ("T1", "alpha1_lambda_half"): (1.0, 0.5, "as_stated"),
    ("T2", "eta"): (None, None, "as_stated"),
    ("T2", "alpha1"): (1.0, None, "as_stated"),
    ("T2", "alpha1_lambda_half"): (1.0, 0.5, "as_stated"),
    ("T3", "alpha1"): (1.0, None, "as_stated"),
    ("T3", "alpha1_lambda_half"): (1.0, 0.5, "as_stated"),
    ("T4", "eta"): (None, None, "as_stated"),
    ("T4", "alpha1"): (1.0, None, "as_stated"),
    ("T4", "alpha1_lambda_half"): (1.0, 0.5, "as_stated"),
    ("T5", "eta"): (None, None, "as_stated"),
    ("T5", "alpha1"): (1.0, None, "as_stated"),
    ("T5", "alpha1_lambda_half"): (1.0, 0.5, "as_stated"),
    ("T6", "eta"): (None, None, "as_stated"),
    ("T6", "alpha1"): (1.0, None, "as_stated"),
    ("T6", "alpha1_lambda_half"): (1.0, 0.5, "as_stated"),
}


def remark_bound(theorem: str, variant: str, inst: Instance) -> float:
    """The specialised bound displayed in a remark, written out directly."""
    if (theorem, variant) not in REMARKS:
        raise DomainError(f"no remark {variant!r} for {theorem}")
    ba = inst.b - inst.a
    lam_ratio = inst.ratio
    order, _ = _NEEDS[theorem]
    fa, fb = _endpoint_values(inst, order)
    q = inst.q
    p = inst.p if q > 1.0 else math.inf
    A, B = fa**q, fb**q

    if theorem == "T1":
        return ba / 8.0 * (fa + fb)
    if theorem == "T2":
        if variant == "eta":
            alpha = inst.alpha
            return (ba / 2.0 * (math.pi / 4.0) ** (1.0 / q)
                    * ((2.0 - 2.0 ** (1.0 - alpha * p)) / (p * alpha + 1.0)) ** (1.0 / p)
                    * (A + lam_ratio * B) ** (1.0 / q))
        tail = ((2.0 - 2.0 ** (1.0 - p)) / (p + 1.0)) ** (1.0 / p)
        if variant == "alpha1":
            return ba / 2.0 * (math.pi / 4.0 * A + math.pi / 4.0 * lam_ratio * B) ** (1.0 / q) * tail
        return ba / 8.0 * math.pi * (A + B) ** (1.0 / q) * tail
    if theorem == "T3":
        if variant == "alpha1":
            return 0.25 ** ((q - 1.0) / q) * ba / 2.0 ** (1.0 + 1.0 / q) * (A + lam_ratio * B)
        return 2.0 ** (1.0 / q) * ba / 8.0 * (A + B)
    if theorem == "T4":
        if variant == "eta":
            alpha = inst.alpha
            return (ba**2 / (4.0 * (alpha + 1.0))
                    * (math.pi / 2.0 - _SQRT_PI * gamma(alpha + 1.5) / gamma(alpha + 2.0))
                    * (fa + lam_ratio * fb))
        if variant == "alpha1":
            return math.pi * ba**2 / 64.0 * (fa + lam_ratio * fb)
        return math.pi * ba**2 / 64.0 * (fa + fb)
    if theorem == "T5":
        if variant == "eta":
            alpha = inst.alpha
            return (ba**2 / (2.0 * (alpha + 1.0)) * (1.0 - 2.0 ** (-alpha)) * math.pi / 4.0
                    * (A + lam_ratio * B) ** (1.0 / q))
        if variant == "alpha1":
            return ba**2 / 8.0 * math.pi / 4.0 * (A + lam_ratio * B) ** (1.0 / q)
        return ba**2 / 8.0 * math.pi / 4.0 * (A + B) ** (1.0 / q)
    if variant == "eta":
        alpha = inst.alpha
        return (ba**2 / (2.0 * (alpha + 1.0)) * (alpha / (alpha + 2.0)) ** (1.0 - 1.0 / q)
                * (math.pi / 2.0 - _SQRT_PI * gamma(alpha + 1.5) / gamma(alpha + 2.0)) ** (1.0 / q)
                * (A / 2.0 + lam_ratio * B / 2.0) ** (1.0 / q))
    if variant == "alpha1":
        return (ba**2 / 4.0 * (1.0 / 3.0) ** (1.0 - 1.0 / q) * (math.pi / 8.0) ** (1.0 / q)
                * (A / 2.0 + lam_ratio * B / 2.0) ** (1.0 / q))
    return (ba**2 / 4.0 * (1.0 / 3.0) ** (1.0 - 1.0 / q) * (math.pi / 8.0) ** (1.0 / q)
            * (A / 2.0 + B / 2.0) ** (1.0 / q))


def remark_applies(theorem: str, variant: str, inst: Instance) -> bool:
    alpha, lam, _ = REMARKS[(theorem, variant)]
    if inst.map.id != IDENTITY.id:
        return False
    if alpha is not None and inst.alpha != alpha:
        return False
    if lam is not None and inst.lam != lam:
        return False
    return not (_NEEDS[theorem][1] and not inst.q > 1.0)


def remark_reduction_check(theorem: str, inst: Instance, variant: str | None = None,
                           part: str = "full") -> float:
    """Relative difference between the general bound and a remark's display.

    ``inst`` must use the identity map and the remark's pinned ``alpha`` and
    ``lambda``. ``part="prefactor"`` drops the brace constant (T1/T3) from
    the general bound, which is how the remarks display it. Returns 0 when
    both sides vanish.
    """
    if variant is None:
        variant = "alpha1_lambda_half" if theorem == "T1" else "alpha1"
    if (theorem, variant) not in REMARKS:
        raise DomainError(f"no remark {variant!r} for {theorem}")
    if part not in ("full", "prefactor"):
        raise DomainError(f"part must be 'full' or 'prefactor', got {part!r}")
    if not remark_applies(theorem, variant, inst):
        raise DomainError(f"instance {inst.key} does not match the pinning of {theorem}/{variant}")
    _, _, mode = REMARKS[(theorem, variant)]
    general = paper_bound(theorem, inst, mode)
    if part == "prefactor" and theorem in ("T1", "T3"):
        c = brace_constant(inst.alpha)
        general /= c if theorem == "T1" else c ** (1.0 / inst.q)
    shown = remark_bound(theorem, variant, inst)
    if general == 0.0 and shown == 0.0:
        return 0.0
    return abs(general - shown) / max(abs(general), abs(shown))

