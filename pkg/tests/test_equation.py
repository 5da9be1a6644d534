"""Tests for the equation model, tail sums and form classification."""
import math

import pytest

from oscdelay import (
    DelayForm,
    FormClass,
    HalfLinearEquation,
    R_partial,
    RationalExponent,
    Sequence,
    TailConfig,
    classify_form,
    example_equation,
    theta,
    theta_extended,
    validate,
)
from oscdelay.errors import DomainError, NonConvergentError


def make_eq(r_text, alpha, zeta0=1, q_text="1", sigma=0, theta_cf=None,
            form=DelayForm.MINUS_SIGMA):
    return HalfLinearEquation(
        r=Sequence.from_expression(r_text),
        q=Sequence.from_expression(q_text),
        alpha=alpha,
        sigma=sigma,
        delay_form=form,
        zeta0=zeta0,
        theta_closed_form=theta_cf,
    )


class TestModel:
    def test_plus_one_form_needs_sigma(self):
        with pytest.raises(ValueError):
            make_eq("z", RationalExponent(1, 1), form=DelayForm.MINUS_SIGMA_PLUS_ONE)

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            HalfLinearEquation(
                r=Sequence.from_expression("1"),
                q=Sequence.from_expression("1"),
                alpha=RationalExponent(1, 1),
                sigma=-1,
                delay_form=DelayForm.MINUS_SIGMA,
                zeta0=0,
            )

    def test_delayed_index(self):
        eq = example_equation(3)
        assert eq.delayed_index(10) == 10 - 2 + 1
        eq2 = example_equation(2)
        assert eq2.delayed_index(10) == 10 - 1


class TestRPartial:
    def test_example3_telescopes(self):
        # r^(1/alpha) = z(z+1), so the sum telescopes: 1/2 + 1/6 = 2/3
        eq = example_equation(3)
        assert R_partial(eq, 3) == pytest.approx(2.0 / 3.0, rel=1e-12)

    def test_empty_sum(self):
        eq = example_equation(1)
        assert R_partial(eq, eq.zeta0) == 0.0

    def test_constant_r(self):
        eq = make_eq("1", RationalExponent(1, 1), zeta0=0)
        assert R_partial(eq, 5) == pytest.approx(5.0)

    def test_below_zeta0_rejected(self):
        eq = example_equation(1)
        with pytest.raises(DomainError):
            R_partial(eq, eq.zeta0 - 1)


class TestTheta:
    def test_example2_closed_form(self):
        assert theta(example_equation(2), 3).value == pytest.approx(0.5, abs=1e-12)

    def test_example3_closed_form(self):
        assert theta(example_equation(3), 4).value == pytest.approx(0.25, abs=1e-12)

    def test_example1_geometric(self):
        assert theta(example_equation(1), 1).value == pytest.approx(1.0, abs=1e-12)

    def test_numeric_geometric_tail_certifies(self):
        eq = make_eq("2^(z/3)", RationalExponent(1, 3))
        res = theta(eq, 1)
        assert res.certified
        assert res.method == "geometric"
        assert res.value == pytest.approx(1.0, abs=1e-9)
        assert res.tail_bound is not None and res.tail_bound >= 0

    def test_numeric_polynomial_tail(self):
        # r^(1/alpha) = z(z+1): tail telescopes to exactly 1/z
        eq = make_eq("(z*(z+1))^(5/3)", RationalExponent(5, 3))
        res = theta(eq, 5)
        assert abs(res.value - 0.2) <= 1e-9
        assert res.method in ("geometric", "poly_tail")

    def test_divergent_tail_raises(self):
        eq = make_eq("1", RationalExponent(1, 1))
        with pytest.raises(NonConvergentError):
            theta(eq, 1)

    def test_closed_form_cross_check_catches_lies(self):
        eq = make_eq(
            "2^(z/3)",
            RationalExponent(1, 3),
            theta_cf=Sequence.closed_form("bogus", lambda z: 42.0),
        )
        with pytest.raises(ValueError):
            theta(eq, 1)

    def test_theta_recurrence(self):
        # theta(z) - theta(z+1) = r(z)^(-1/alpha)
        for n in (1, 2, 3):
            eq = example_equation(n)
            for z in range(eq.zeta0, eq.zeta0 + 30):
                lhs = theta(eq, z).value - theta(eq, z + 1).value
                rhs = eq.inv_r_alpha(z)
                assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs)), (n, z)

    def test_theta_strictly_decreasing(self):
        for n in (1, 2, 3):
            eq = example_equation(n)
            vals = [theta(eq, z).value for z in range(eq.zeta0, eq.zeta0 + 30)]
            assert all(b < a for a, b in zip(vals, vals[1:])), n

    def test_conservation_identity(self):
        # R(z) + theta(z) = theta(zeta0)
        for n in (1, 2, 3):
            eq = example_equation(n)
            total = theta(eq, eq.zeta0).value
            for z in range(eq.zeta0 + 1, eq.zeta0 + 40):
                got = R_partial(eq, z) + theta(eq, z).value
                assert abs(got - total) <= 1e-9 * abs(total), (n, z)

    def test_memoization_invisible(self):
        eq = example_equation(2)
        first = theta(eq, 7)
        second = theta(eq, 7)
        assert first == second

    def test_extension_below_domain(self):
        # theta(zeta0 - k) = theta(zeta0) + sum of r^(-1/alpha) over the gap
        eq = example_equation(1)
        ext = theta_extended(eq, 0)
        want = theta(eq, eq.zeta0).value + eq.inv_r_alpha(0)
        assert ext.value == pytest.approx(want, rel=1e-12)

    def test_extension_needs_positive_r(self):
        eq = example_equation(2)  # r(1) = 0
        with pytest.raises(DomainError):
            theta_extended(eq, 1)


class TestClassifyForm:
    def test_example1_non_canonical(self):
        assert classify_form(example_equation(1)) is FormClass.NON_CANONICAL

    def test_constant_r_canonical(self):
        eq = make_eq("1", RationalExponent(1, 1))
        assert classify_form(eq) is FormClass.CANONICAL

    def test_geometric_r_non_canonical(self):
        eq = make_eq("2^(z/3)", RationalExponent(1, 3))
        assert classify_form(eq) is FormClass.NON_CANONICAL

    def test_slow_polynomial_tail_inconclusive(self):
        # r^(-1/alpha) ~ z^(-1.5): converges but too slowly for the geometric
        # certificate, and no closed form is registered
        eq = make_eq("pow(z, 1.5)", RationalExponent(1, 1))
        assert classify_form(eq, TailConfig(max_terms=20_000)) in (
            FormClass.INCONCLUSIVE,
            FormClass.NON_CANONICAL,
        )


class TestValidate:
    def test_example1_ok(self):
        report = validate(example_equation(1), 100)
        assert report.ok

    def test_zero_q_flagged(self):
        eq = make_eq("1", RationalExponent(1, 1), q_text="0")
        report = validate(eq, 100)
        assert not report.ok
        assert report.violations[0].hypothesis == "H2"

    def test_sign_changing_r_flagged_at_first_offender(self):
        eq = make_eq("z-10", RationalExponent(1, 1), zeta0=1)
        report = validate(eq, 20)
        h1 = [v for v in report.violations if v.hypothesis == "H1"]
        assert h1 and h1[0].index == 1  # r(1) = -9 is the first offender

    def test_vanishing_r_flagged(self):
        eq = make_eq("z-10", RationalExponent(1, 1), zeta0=10)
        report = validate(eq, 20)
        h1 = [v for v in report.violations if v.hypothesis == "H1"]
        assert h1 and h1[0].index == 10  # r(10) = 0 violates strict positivity

    def test_negative_q_flagged(self):
        eq = make_eq("1", RationalExponent(1, 1), q_text="1-z", zeta0=0)
        report = validate(eq, 10)
        h2 = [v for v in report.violations if v.hypothesis == "H2"]
        assert h2 and h2[0].index == 2
