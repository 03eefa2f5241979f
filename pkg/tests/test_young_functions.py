"""Unit tests for young_functions.py - Young functions, growth checks and Orlicz norms.

These tests verify the numeric verdicts in isolation. Randomized suites use
numpy generators with fixed seeds.
"""
import math
import sys
import os

import numpy as np
import pytest

# Add parent directory to path to import our modules
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from degree_lab.config import load_table
from degree_lab.const import RADIAL_FINITE, RADIAL_INFINITE, STATUS_FAILS, STATUS_HOLDS
from degree_lab.exceptions import ConfigurationError, DomainError, YoungFunctionError
from degree_lab.young_functions import (
    Power,
    PowerOverLogPower,
    Tabulated,
    WeightedField,
    check_admissible,
    check_divergence,
    check_doubling,
    check_growth_alpha,
    check_small_o,
    eval_young,
    luxemburg_norm,
    orlicz_mean,
    radial_projection_energy,
)


class TestEvaluation:
    """Tests for eval_young and the family constructors."""

    def test_power_scalar(self):
        """Test scalar evaluation returns a float."""
        assert eval_young(Power(3), 2.0) == pytest.approx(8.0)

    def test_zero_maps_to_zero(self):
        """Test P(0) = 0 for every family."""
        for P in (Power(1.5), PowerOverLogPower(2, 1)):
            assert eval_young(P, 0.0) == 0.0

    def test_array_shape_preserved(self):
        """Test array input keeps its shape."""
        values = eval_young(Power(2), np.array([[1.0, 2.0], [3.0, 0.0]]))
        assert values.shape == (2, 2)
        assert values[1, 0] == pytest.approx(9.0)

    def test_powlog_closed_form(self):
        """Test t^n / log^a(e + t) at a sample point."""
        P = PowerOverLogPower(2, 1)
        assert P(3.0) == pytest.approx(9.0 / math.log(math.e + 3.0))

    def test_negative_argument_raises(self):
        """Test a negative argument is a domain error."""
        with pytest.raises(DomainError):
            eval_young(Power(2), -1.0)

    def test_power_below_one_rejected(self):
        """Test that p < 1 is not convex and is rejected."""
        with pytest.raises(YoungFunctionError):
            Power(0.5)

    def test_negative_log_power_rejected(self):
        """Test a < 0 is rejected."""
        with pytest.raises(YoungFunctionError):
            PowerOverLogPower(2, -1)

    def test_description(self):
        """Test descriptions name the family parameters."""
        assert Power(1.5).description == "t^1.5"
        assert PowerOverLogPower(2, 1).description == "t^2/log^1(e+t)"


class TestTabulated:
    """Tests for the tabulated family."""

    def test_interpolates_in_log_space(self):
        """Test log-log interpolation reproduces a sampled power exactly."""
        P = Tabulated.from_arrays([0, 1, 2, 4], [0, 1, 4, 16])
        assert P(3.0) == pytest.approx(9.0)

    def test_extrapolates_with_end_slopes(self):
        """Test evaluation beyond the table follows the end slopes."""
        P = Tabulated.from_arrays([1, 2, 4], [1, 4, 16])
        assert P(8.0) == pytest.approx(64.0)
        assert P(0.5) == pytest.approx(0.25)
        assert P.extrapolates(0.5, 2.0)
        assert not P.extrapolates(1.0, 4.0)

    def test_nonzero_origin_rejected(self):
        """Test a (0, P) row with P != 0 is rejected."""
        with pytest.raises(YoungFunctionError):
            Tabulated.from_arrays([0, 1, 2], [1, 2, 4])

    def test_non_monotone_rejected(self):
        """Test a decreasing column is rejected."""
        with pytest.raises(YoungFunctionError):
            Tabulated.from_arrays([1, 2, 3], [1, 4, 3])

    def test_concave_table_rejected(self):
        """Test a concave table fails the convexity check."""
        with pytest.raises(YoungFunctionError):
            Tabulated.from_arrays([1, 2, 3], [1.0, 1.5, 1.8])

    def test_load_table_skips_header(self, table_csv):
        """Test CSV loading skips header and comment lines."""
        P = load_table(table_csv)
        assert P(3.0) == pytest.approx(9.0)
        assert P.description == "table:square.csv"

    def test_load_missing_table(self, tmp_path):
        """Test a missing file is a configuration error."""
        with pytest.raises(ConfigurationError):
            load_table(tmp_path / "missing.csv")


class TestDivergence:
    """Tests for the divergence check and its radial-projection complement."""

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_verdicts_and_complement(self, n):
        """Test the four reference gauges in dimensions 2 to 4."""
        cases = [
            (Power(n), STATUS_HOLDS),
            (PowerOverLogPower(n, 1), STATUS_HOLDS),
            (PowerOverLogPower(n, 1.5), STATUS_FAILS),
            (Power(n - 1), STATUS_FAILS),
        ]
        for P, expected in cases:
            verdict = check_divergence(P, n)
            assert verdict.status == expected, P.description
            radial = radial_projection_energy(P, n)
            complement = RADIAL_INFINITE if expected == STATUS_HOLDS else RADIAL_FINITE
            assert radial.verdict == complement, P.description

    def test_partial_sums_witness(self):
        """Test the verdict carries increasing partial sums."""
        verdict = check_divergence(Power(2), 2)
        partials = verdict.witness["partial_sums"]
        assert len(partials) == verdict.parameters["last_window"] + 1
        assert all(b > a for a, b in zip(partials, partials[1:]))

    def test_radial_energy_value(self):
        """Test the radial projection energy for t^1.5 in the plane is 4 pi."""
        result = radial_projection_energy(Power(1.5), 2)
        assert result.verdict == RADIAL_FINITE
        assert result.value == pytest.approx(4.0 * math.pi, rel=0.01)

    def test_dimension_one_rejected(self):
        """Test n < 2 is a configuration error."""
        with pytest.raises(ConfigurationError):
            check_divergence(Power(2), 1)


class TestGrowthConditions:
    """Tests for small-o, doubling and growth checks."""

    def test_small_o_log_gauge(self):
        """Test t^2/log(e+t) is o(t^2)."""
        assert check_small_o(PowerOverLogPower(2, 1), 2).status == STATUS_HOLDS

    def test_small_o_power_fails(self):
        """Test t^n is not o(t^n)."""
        assert check_small_o(Power(2), 2).status == STATUS_FAILS

    def test_doubling_power(self):
        """Test t^p doubles with K = 2^p."""
        verdict = check_doubling(Power(3))
        assert verdict.status == STATUS_HOLDS
        assert verdict.witness["K"] == pytest.approx(8.0)

    def test_doubling_fails_for_steep_table(self):
        """Test a t^20 table exceeds the doubling bound."""
        steep = Tabulated.from_arrays([1, 2], [1, 2 ** 20])
        assert check_doubling(steep).status == STATUS_FAILS

    def test_growth_fails_with_violation(self):
        """Test t^-2 t^1.5 is decreasing and the witness names the point."""
        verdict = check_growth_alpha(Power(1.5), 2.0)
        assert verdict.status == STATUS_FAILS
        assert verdict.witness["t"] >= 1.0

    def test_growth_alpha_must_be_positive(self):
        """Test alpha <= 0 is rejected."""
        with pytest.raises(ConfigurationError):
            check_growth_alpha(Power(2), 0.0)

    def test_fundamental_gauge_admissible(self):
        """Test t^2/log(e+t) satisfies all four conditions for n = 2."""
        report = check_admissible(PowerOverLogPower(2, 1), 2)
        assert [v.status for v in report.verdicts] == [STATUS_HOLDS] * 4
        assert report.overall == STATUS_HOLDS

    def test_power_not_admissible(self):
        """Test t^2 fails small-o so the overall verdict fails."""
        assert check_admissible(Power(2), 2).overall == STATUS_FAILS


NORM_GAUGES = {
    "powlog": PowerOverLogPower(2, 1),
    "table": Tabulated.from_arrays([1, 2, 4, 8], [1, 3, 10, 40]),
}


class TestOrliczNorms:
    """Tests for Orlicz means and Luxemburg norms of weighted fields."""

    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
    def test_luxemburg_matches_p_norm(self, p):
        """Test the Luxemburg norm of t^p is the weighted p-norm."""
        rng = np.random.default_rng(2024)
        for _ in range(50):
            values = rng.uniform(0.0, 5.0, size=40)
            weights = rng.uniform(0.0, 1.0, size=40)
            field = WeightedField(values, weights)
            expected = float(np.sum(weights * values ** p)) ** (1.0 / p)
            assert luxemburg_norm(field, Power(p)) == pytest.approx(expected, rel=1e-6)

    @pytest.mark.parametrize("gauge", sorted(NORM_GAUGES))
    @pytest.mark.parametrize("scale", [0.01, 0.5, 3.0, 250.0])
    def test_luxemburg_homogeneous(self, gauge, scale):
        """Test scaling a field by lambda scales its Luxemburg norm by lambda."""
        P = NORM_GAUGES[gauge]
        rng = np.random.default_rng(7)
        for _ in range(20):
            values = rng.uniform(0.0, 5.0, size=30)
            weights = rng.uniform(0.0, 1.0, size=30)
            norm = luxemburg_norm(WeightedField(values, weights), P)
            scaled = luxemburg_norm(WeightedField(scale * values, weights), P)
            assert scaled == pytest.approx(scale * norm, rel=1e-6)

    @pytest.mark.parametrize("gauge", sorted(NORM_GAUGES))
    def test_unit_ball(self, gauge):
        """Test the norm is at most 1 exactly when the Orlicz mean is at most 1."""
        P = NORM_GAUGES[gauge]
        rng = np.random.default_rng(13)
        values = rng.uniform(0.0, 5.0, size=30)
        weights = rng.uniform(0.0, 1.0, size=30)
        norm = luxemburg_norm(WeightedField(values, weights), P)
        unit = WeightedField(values / norm, weights)
        assert luxemburg_norm(unit, P) == pytest.approx(1.0, rel=1e-6)
        assert orlicz_mean(unit, P) == pytest.approx(1.0, rel=1e-5)
        inside = WeightedField(0.9 * values / norm, weights)
        outside = WeightedField(1.1 * values / norm, weights)
        assert orlicz_mean(inside, P) < 1.0
        assert luxemburg_norm(inside, P) <= 1.0
        assert orlicz_mean(outside, P) > 1.0
        assert luxemburg_norm(outside, P) > 1.0

    def test_zero_field(self):
        """Test an all-zero field has norm 0."""
        field = WeightedField(np.zeros(5), np.ones(5))
        assert luxemburg_norm(field, Power(2)) == 0.0

    def test_orlicz_mean(self):
        """Test the weighted sum of P(v)."""
        field = WeightedField(np.array([1.0, 2.0]), np.array([0.5, 0.25]))
        assert orlicz_mean(field, Power(2)) == pytest.approx(1.5)

    def test_negative_field_rejected(self):
        """Test negative samples are a domain error."""
        with pytest.raises(DomainError):
            WeightedField(np.array([-1.0]), np.array([1.0]))

    def test_shape_mismatch_rejected(self):
        """Test values and weights must match."""
        with pytest.raises(ConfigurationError):
            WeightedField(np.ones(3), np.ones(2))
