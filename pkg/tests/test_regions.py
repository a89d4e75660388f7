import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dkg1d import regions
from dkg1d.counterexamples import ExponentTuple
from dkg1d.regions import ParameterChoice


def region_grid(ns=60, nr=60):
    s_values = np.linspace(-0.3, 0.5, ns)
    r_values = 1.5 * (np.arange(nr) + 1) / nr  # half-open (0, 1.5]
    return s_values, r_values


def in_region_points():
    # Uniform over the bounding box, filtered to the region interior.
    return (
        st.tuples(
            st.floats(min_value=-0.249, max_value=0.5),
            st.floats(min_value=1e-6, max_value=1.5),
        )
        .filter(lambda p: regions.in_wellposed_region(*p))
    )


class TestRegionMembership:
    def test_wellposed_examples(self):
        assert regions.in_wellposed_region(0.0, 0.5)
        assert not regions.in_wellposed_region(-0.25, 0.25)  # s bound is strict
        assert not regions.in_wellposed_region(-0.1, 0.95)  # r <= 1+s fails

    def test_pecher_examples(self):
        assert regions.in_pecher_region(0.5, 1.2)
        assert not regions.in_pecher_region(-0.2, 0.7)  # r < 1+2s fails

    def test_machihara_examples(self):
        assert regions.in_machihara_region(-0.2, 0.5)
        assert not regions.in_machihara_region(0.1, 0.5)  # s <= 0 fails

    def test_violation_names(self):
        assert regions.region_violations(-0.2, 0.85) == ("r <= 1+s",)
        assert regions.region_violations(-0.3, -1.0) == ("s > -1/4", "r > 0", "|s| <= r")
        assert regions.region_violations(0.0, 0.5) == ()

    def test_prior_regions_contained(self):
        s_values, r_values = region_grid()
        for s in s_values:
            for r in r_values:
                if regions.in_pecher_region(s, r) or regions.in_machihara_region(s, r):
                    assert regions.in_wellposed_region(s, r)

    def test_containment_strict(self):
        s_values, r_values = region_grid()
        found = any(
            regions.in_wellposed_region(s, r)
            and not regions.in_pecher_region(s, r)
            and not regions.in_machihara_region(s, r)
            for s in s_values
            for r in r_values
        )
        assert found

    def test_gain_strip(self):
        # In the strip -1/4 < s <= 0 the band 1+2s < r <= 1+s is newly covered.
        s, r = -0.1, 0.85
        assert regions.in_wellposed_region(s, r)
        assert not regions.in_pecher_region(s, r)
        assert not regions.in_machihara_region(s, r)

    @given(in_region_points())
    @settings(max_examples=300, deadline=None)
    def test_region_implies_slope_bound(self, point):
        # Every certified point satisfies r < 3/2 + 2s.
        s, r = point
        assert r < 1.5 + 2 * s


class TestCheckConstraints:
    def test_reference_choice_passes(self):
        report = regions.check_constraints(0.0, 0.5, ParameterChoice(0.75, 9 / 16, 1 / 16))
        assert regions.all_constraints_hold(report)
        assert set(report) == set(regions.CONSTRAINT_KEYS)

    def test_sigma_cap(self):
        report = regions.check_constraints(0.0, 0.5, ParameterChoice(1.0, 9 / 16, 1 / 16))
        assert not report["sigma1"]

    def test_s2_unreachable_below_quarter(self):
        # For s < -1/4 the spinor constraint fails for every rho > 1/2, eps > 0.
        for rho in np.linspace(0.5 + 1e-9, 1.0, 25):
            for eps in np.geomspace(1e-9, 0.25, 25):
                report = regions.check_constraints(-0.3, 0.3, ParameterChoice(0.75, rho, eps))
                assert not report["s2"]

    @given(
        in_region_points(),
        st.floats(min_value=0.51, max_value=1.0),
        st.floats(min_value=0.51, max_value=1.0),
        st.floats(min_value=1e-6, max_value=0.2),
    )
    @settings(max_examples=300, deadline=None)
    def test_r4_equals_r6(self, point, sigma, rho, eps):
        s, r = point
        report = regions.check_constraints(s, r, ParameterChoice(sigma, rho, eps))
        assert report["r4"] == report["r6"]


class TestChooseParameters:
    def test_feasible_roundtrip(self):
        choice = regions.choose_parameters(0.0, 0.5)
        assert isinstance(choice, ParameterChoice)
        assert choice.rho == 0.5 + choice.eps
        assert regions.all_constraints_hold(regions.check_constraints(0.0, 0.5, choice))

    def test_infeasible_reason(self):
        result = regions.choose_parameters(-0.2, 0.85)
        assert isinstance(result, regions.Infeasible)
        assert result.violated == ("r <= 1+s",)
        assert "r <= 1+s violated" in result.reason

    def test_near_corner_needs_small_eps(self):
        # Close to s = -1/4 the halving search must go below its start value.
        choice = regions.choose_parameters(-0.24, 0.25)
        assert isinstance(choice, ParameterChoice)
        assert choice.eps < 0.125
        assert regions.all_constraints_hold(regions.check_constraints(-0.24, 0.25, choice))

    @given(in_region_points())
    @settings(max_examples=500, deadline=None)
    def test_always_feasible_in_region(self, point):
        s, r = point
        choice = regions.choose_parameters(s, r)
        assert isinstance(choice, ParameterChoice)
        assert regions.all_constraints_hold(regions.check_constraints(s, r, choice))


class TestProductLawConditions:
    def test_sufficient(self):
        assert regions.product_law_conditions(1, 1, 0, 0.3, 0.3, 0.3) == "sufficient"

    def test_total_sum(self):
        assert regions.product_law_conditions(0.2, 0.2, 0.05, 0.3, 0.3, 0.3) == "fails_abc1"

    def test_pairwise_before_total(self):
        # b + c < 0 is reported even though the total sum also fails.
        assert regions.product_law_conditions(1, -0.5, -0.6, 0.3, 0.3, 0.3) == "fails_abc2"

    def test_weights(self):
        assert regions.product_law_conditions(1, 1, 1, 0.1, 0.1, 0.1) == "fails_weights"
        assert regions.product_law_conditions(1, 1, 1, -0.1, 0.5, 0.5) == "fails_weights"


class TestNecessaryConditions:
    def test_boundary_case_holds(self):
        report = regions.bilinear_necessary_conditions(ExponentTuple(1, 2, -1, 0, 0, 0))
        assert report["cond3"]["holds"]
        assert report["cond3"]["margin"] == 0.0

    def test_cond3_fails(self):
        report = regions.bilinear_necessary_conditions(ExponentTuple(0, 0, -1, 1, 1, 1))
        assert not report["cond3"]["holds"]
        assert report["cond3"]["family"] == "cond3"

    def test_dirac_side_mapping(self):
        # Exponents (s, s, 1-r; sigma, sigma, 1-rho-eps) at s = -0.3: the
        # spinor bound s >= -1/2 + (rho+eps)/2 fails, and so must cond1.
        s, r, sigma, rho, eps = -0.3, 0.5, 0.75, 0.6, 0.01
        e = ExponentTuple(s, s, 1 - r, sigma, sigma, 1 - rho - eps)
        report = regions.bilinear_necessary_conditions(e)
        assert not report["cond1"]["holds"]
        assert s < -0.5 + (rho + eps) / 2

    def test_wave_side_mapping(self):
        # Exponents (s, -s, r; ...): cond3 fails exactly when r < |s|.
        for s in (-0.6, -0.2, 0.0, 0.3, 0.8):
            for r in (0.0, 0.1, 0.5, 1.0):
                e = ExponentTuple(s, -s, r, 0.7, 0.3, 0.6)
                report = regions.bilinear_necessary_conditions(e)
                assert report["cond3"]["holds"] == (r >= abs(s))

    def test_cond1_family_selection(self):
        gamma_min = regions.bilinear_necessary_conditions(ExponentTuple(0, 0, 0, 1, 1, 0.2))
        assert gamma_min["cond1"]["family"] == "cond1_gamma"
        beta_min = regions.bilinear_necessary_conditions(ExponentTuple(0, 0, 0, 1, 0.2, 1))
        assert beta_min["cond1"]["family"] == "cond1_ab"
