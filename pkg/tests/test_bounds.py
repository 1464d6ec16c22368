import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fracineq.bounds import (
    BoundReport,
    brace_constant,
    certify_for,
    evaluate_instance,
    oracle_integrals,
    paper_bound,
    remark_reduction_check,
    second_order_constant,
    t1_bounds,
    t2_bounds,
    t3_bounds,
    t4_bounds,
    t5_bounds,
    t6_bounds,
)
from fracineq.errors import DomainError, PreconditionError
from fracineq.fracquad import QuadratureConfig
from fracineq.preinvex import IDENTITY, Instance, get_function, scaled_map

# brace constant as printed, each term evaluated with mpmath (betainc, hyp2f1) at 40 digits
BRACE = {
    0.25: 1.1618636991415741687,
    0.5: 1.6568542494923801952,
    1.0: 2.0,
    1.5: 2.0473785412436501627,
    2.0: 2.0,
    3.0: 1.8333333333333333333,
}

# int_0^1 |(1-t)^a - t^a| sqrt(t) / (2 sqrt(1-t)) dt, mpmath tanh-sinh split at 1/2
ABS_D_LEFT = {
    0.25: 0.29046592478539354218,
    0.5: 0.4142135623730950488,
    1.0: 0.5,
    1.5: 0.51184463531091254067,
    2.0: 0.5,
    3.0: 0.45833333333333333333,
}


# frozen-value checks run the oracle tighter than the default rel_tol of 1e-10
TIGHT = QuadratureConfig(rel_tol=1e-14, abs_tol=1e-16, max_panels=20000)


def make(fn="exp", mp=IDENTITY, a=0.5, b=1.5, alpha=1.0, lam=0.5, q=2.0):
    return Instance(get_function(fn), mp, a, b, alpha, lam, q)


@pytest.mark.parametrize("alpha", sorted(BRACE))
def test_brace_constant_matches_printed_terms(alpha):
    assert brace_constant(alpha) == pytest.approx(BRACE[alpha], rel=1e-12)


@pytest.mark.parametrize("alpha", sorted(ABS_D_LEFT))
def test_first_order_oracle_integrals(alpha):
    ints = oracle_integrals(alpha, cfg=TIGHT)
    assert ints["abs_d_left"] == pytest.approx(ABS_D_LEFT[alpha], rel=1e-11)
    # |d| is symmetric under t -> 1 - t, so both weighted integrals agree
    assert ints["abs_d_right"] == pytest.approx(ABS_D_LEFT[alpha], rel=1e-11)
    assert ints["abs_d"] == pytest.approx(2 * (1 - 2.0**-alpha) / (alpha + 1), rel=1e-12)


@pytest.mark.parametrize("alpha", sorted(BRACE))
def test_brace_equals_four_times_tight_integral(alpha):
    # the printed brace is exactly the tight split-at-1/2 integral, not the loose sum
    assert brace_constant(alpha) == pytest.approx(4 * oracle_integrals(alpha, cfg=TIGHT)["abs_d_left"], rel=1e-11)


def test_weight_integrals_are_quarter_pi():
    ints = oracle_integrals(1.0)
    assert ints["w_left"] == pytest.approx(math.pi / 4, rel=1e-14)
    assert ints["w_right"] == pytest.approx(math.pi / 4, rel=1e-14)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0, 1.5, 2.0, 3.0])
def test_second_order_integrals(alpha):
    ints = oracle_integrals(alpha, cfg=TIGHT)
    assert ints["D"] == pytest.approx(alpha / (alpha + 2), rel=1e-12)
    # the weighted D integral is exactly what the printed T4 constant encodes
    assert ints["D_left"] + ints["D_right"] == pytest.approx(second_order_constant(alpha), rel=1e-11)


def test_second_order_constant_alpha_one():
    assert second_order_constant(1.0) / 8 == pytest.approx(math.pi / 64, rel=1e-12)


def test_t2_exact_integral_alpha_half():
    # int |sqrt(1-t) - sqrt(t)|^2 = 1 - pi/4, below the majorant 1/2
    val = oracle_integrals(0.5, 2.0, TIGHT)["abs_d_p"]
    assert val == pytest.approx(1 - math.pi / 4, rel=1e-12)
    assert val <= 0.5


def test_t5_exact_integral_alpha_half():
    val = oracle_integrals(0.5, 2.0, TIGHT)["D_p"]
    assert val == pytest.approx(0.047262155637021558053, rel=1e-11)
    assert val <= (1 - 2**-0.5) ** 2


@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.5, 0.75, 1.0])
@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 4.0])
def test_majorants(alpha, p):
    ints = oracle_integrals(alpha, p)
    assert ints["abs_d_p"] <= (2 - 2 ** (1 - alpha * p)) / (alpha * p + 1) + 1e-14
    assert ints["D_p"] <= (1 - 2**-alpha) ** p + 1e-14


def test_constant_function_is_trivial():
    for rep in evaluate_instance(make("const")):
        assert rep.gap <= 1e-14
        assert rep.oracle_bound == 0.0
        assert rep.paper_bound == 0.0
        assert rep.bound_holds_oracle
        assert rep.slack_ratio is None
        assert rep.status == "pass"


def test_linear_second_order_bounds_vanish():
    i = make("linear", a=-0.5, b=1.5)
    for fn in (t4_bounds, t5_bounds, t6_bounds):
        rep = fn(i)
        assert rep.gap <= 1e-13
        assert rep.oracle_bound == 0.0
        assert rep.bound_holds_oracle


def test_t1_alpha_one_lambda_half_values():
    i = make("square", a=0.0, b=1.0)
    rep = t1_bounds(i)
    # |f'(0)| = 0, |f'(1)| = 2, tight integral 1/2 on each side
    assert rep.oracle_bound == pytest.approx(0.5 * (0.0 + 2.0 * 0.5), rel=1e-12)
    assert rep.paper_bound == pytest.approx(1.0 / 8 * 2.0 * 2.0, rel=1e-12)
    assert rep.gap == pytest.approx(1 / 6, rel=1e-12)


@pytest.mark.parametrize("fn", ["square", "exp", "exp_neg", "sqshift"])
@pytest.mark.parametrize("alpha", [0.25, 1.0, 3.0])
def test_tight_oracle_below_loose(fn, alpha):
    rep = t1_bounds(make(fn, alpha=alpha, lam=0.25))
    assert rep.oracle_bound <= rep.oracle_bound_loose * (1 + 1e-12)


@pytest.mark.parametrize("theorem_fn", [t1_bounds, t4_bounds, t6_bounds])
@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_printed_and_oracle_agree_where_algebra_says_so(theorem_fn, alpha):
    rep = theorem_fn(make("exp", alpha=alpha, lam=0.25, q=3.0))
    assert rep.paper_vs_oracle_rel_diff <= 1e-10


def test_t2_printed_is_above_oracle():
    rep = t2_bounds(make("exp", alpha=0.5, q=2.0))
    assert rep.paper_bound > rep.oracle_bound
    assert not rep.paper_below_oracle
    assert rep.status == "pass"


def test_dual_modes_differ_only_in_the_q_power():
    i = make("exp", alpha=0.5, q=3.0)
    a = t5_bounds(i, mode="as_stated")
    b = t5_bounds(i, mode="proof_consistent")
    assert a.oracle_bound == b.oracle_bound
    assert b.paper_bound / a.paper_bound == pytest.approx((math.pi / 4) ** (1 / 3 - 1), rel=1e-13)
    c = t3_bounds(i, mode="as_stated")
    d = t3_bounds(i, mode="proof_consistent")
    bracket = math.exp(0.5) ** 3 + math.exp(1.5) ** 3
    assert c.paper_bound / d.paper_bound == pytest.approx(bracket ** (1 - 1 / 3), rel=1e-12)


def test_evaluate_instance_covers_both_modes():
    reps = evaluate_instance(make("square"))
    names = [(r.theorem, r.mode) for r in reps]
    assert names == [
        ("T1", "as_stated"), ("T2", "as_stated"), ("T3", "as_stated"), ("T3", "proof_consistent"),
        ("T4", "as_stated"), ("T5", "as_stated"), ("T5", "proof_consistent"), ("T6", "as_stated"),
    ]


def test_q_must_exceed_one():
    i = make("exp", q=1.0)
    with pytest.raises(DomainError):
        t2_bounds(i)
    assert t1_bounds(i).bound_holds_oracle


def test_unknown_theorem_and_mode():
    with pytest.raises(DomainError):
        paper_bound("T7", make())
    with pytest.raises(DomainError):
        paper_bound("T3", make(), mode="other")


def test_uncertified_is_exploratory():
    i = make("pow32", lam=0.5)
    rep = t1_bounds(i)
    assert not rep.certified
    assert rep.status == "flag"
    assert any("exploratory" in n for n in rep.notes)
    with pytest.raises(PreconditionError):
        t1_bounds(i, require_certified=True)


def test_status_rules():
    base = dict(theorem="T1", gap=1.0, paper_bound=2.0, oracle_bound=2.0, bound_holds_oracle=True,
                bound_holds_paper=True, paper_vs_oracle_rel_diff=0.0)
    assert BoundReport(**base).status == "pass"
    assert BoundReport(**{**base, "bound_holds_oracle": False}).status == "fail"
    assert BoundReport(**{**base, "bound_holds_paper": False}).status == "flag"
    assert BoundReport(**{**base, "certified": False}).status == "flag"


def test_remark_t4_is_pi_over_64():
    i = make("exp", a=0.0, b=1.0, alpha=1.0, lam=0.5)
    assert remark_reduction_check("T4", i, "alpha1_lambda_half") <= 1e-12
    assert remark_reduction_check("T4", i, "eta") <= 1e-12


@pytest.mark.parametrize("q", [1.5, 2.0, 4.0])
def test_remark_reproductions(q):
    i = make("exp", alpha=1.0, lam=0.25, q=q)
    assert remark_reduction_check("T2", i, "alpha1") <= 1e-12
    assert remark_reduction_check("T3", i, "alpha1", part="prefactor") <= 1e-12
    assert remark_reduction_check("T5", i, "alpha1") <= 1e-12
    assert remark_reduction_check("T6", i, "alpha1") <= 1e-12


def test_remark_findings_are_recorded():
    i = make("exp", alpha=1.0, lam=0.5, q=2.0)
    # the general T1 bound is twice the specialised display
    assert remark_reduction_check("T1", i) == pytest.approx(0.5, rel=1e-12)
    assert remark_reduction_check("T1", i, part="prefactor") <= 1e-12
    # T2 at lambda = 1/2 displays pi/8 where the general bound gives (pi/4)^(1/q) / 2
    expected = 1 - (math.pi / 8) / ((math.pi / 4) ** 0.5 / 2)
    assert remark_reduction_check("T2", i, "alpha1_lambda_half") == pytest.approx(abs(expected), rel=1e-12)


def test_remark_requires_pinning():
    with pytest.raises(DomainError):
        remark_reduction_check("T4", make(alpha=0.5), "alpha1")
    with pytest.raises(DomainError):
        remark_reduction_check("T4", make(mp=scaled_map(0.7), lam=0.25), "eta")
    with pytest.raises(DomainError):
        remark_reduction_check("T4", make(), "bogus")


def test_certify_for_uses_the_right_magnitude():
    i = make("pow32", lam=0.5, q=2.0)
    assert not certify_for("T1", i).passed     # 1.5 sqrt(x) is concave
    assert certify_for("T2", i).passed         # 2.25 x is linear
    assert certify_for("T4", i).passed         # 0.75 / sqrt(x) is convex


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(["square", "exp", "exp_neg", "sqshift", "pow32"]),
    st.sampled_from([1.0, 0.7, 0.5]),
    st.floats(min_value=0.25, max_value=1.0),
    st.floats(min_value=0.1, max_value=0.9),
    st.floats(min_value=0.1, max_value=3.0),
    st.floats(min_value=0.05, max_value=0.5),
    st.floats(min_value=1.1, max_value=5.0),
)
def test_gap_never_exceeds_oracle_when_certified(fn, k, a, length, alpha, lam, q):
    i = Instance(get_function(fn), scaled_map(k), a, a + length, alpha, lam, q)
    for rep in evaluate_instance(i, grid=(11, 11, 49)):
        if rep.certified:
            assert rep.bound_holds_oracle, rep


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(["square", "exp", "sqshift"]),
    st.floats(min_value=0.1, max_value=3.0),
    st.floats(min_value=0.05, max_value=0.5),
    st.floats(min_value=0.05, max_value=0.5),
    st.floats(min_value=1.1, max_value=5.0),
)
def test_bounds_monotone_in_lambda(fn, alpha, lam1, lam2, q):
    assume(lam1 != lam2)
    lo, hi = sorted((lam1, lam2))
    small = make(fn, alpha=alpha, lam=lo, q=q)
    large = make(fn, alpha=alpha, lam=hi, q=q)
    for th in ("T1", "T2", "T3", "T4", "T5", "T6"):
        assert paper_bound(th, small) >= paper_bound(th, large) * (1 - 1e-14)
    for fn_ in (t1_bounds, t2_bounds, t3_bounds, t4_bounds, t5_bounds, t6_bounds):
        a = fn_(small, certification=certify_for("T1", small), gap=(0.0, 0.0))
        b = fn_(large, certification=certify_for("T1", large), gap=(0.0, 0.0))
        assert a.oracle_bound >= b.oracle_bound * (1 - 1e-14)
