"""Unit tests for energy.py - p-energies, Orlicz energies and decay experiments.

The experiments run the registered families at N_theta = 64 k, so every
test stays within a few seconds.
"""
import sys
import os

import numpy as np
import pytest

# Add parent directory to path to import our modules
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from degree_lab.config import parse_family
from degree_lab.const import VERDICT_BOUNDED, VERDICT_DECAYS
from degree_lab.energy import (
    ExperimentFamily,
    decay_experiment,
    fit_slope,
    orlicz_energy,
    p_energy,
)
from degree_lab.exceptions import ConfigurationError, ResolutionError
from degree_lab.map_families import Bubble
from degree_lab.mesh import build_mesh
from degree_lab.young_functions import Power, PowerOverLogPower

K_LIST = (4, 8, 16, 32, 64)


@pytest.fixture(scope="module")
def bubble():
    """The bubble family on S2."""
    return parse_family("bubble")


class TestSingleMapEnergy:
    """Tests for p_energy and orlicz_energy."""

    def test_p_energy_is_power_gauge(self):
        """Test the p-energy equals the Orlicz energy of t^p."""
        mesh = build_mesh("s2", (256, 16))
        assert p_energy(Bubble(4), mesh, 2.0) == pytest.approx(orlicz_energy(Bubble(4), mesh, Power(2)))

    def test_two_energy_value(self):
        """Test the 2-energy of a bubble on its resolved mesh, about 2 pi (4.73 + 1.22)."""
        energy = p_energy(Bubble(4), build_mesh("s2", (256, 16)), 2.0)
        assert energy == pytest.approx(37.4, rel=0.03)

    def test_under_resolved(self):
        """Test an under-resolved mesh is refused."""
        with pytest.raises(ResolutionError):
            p_energy(Bubble(16), build_mesh("s2", (256, 16)), 1.0)


class TestPowerDecay:
    """Tests for p-energy decay rates along the bubble family."""

    def test_p_one_slope(self, bubble):
        """Test the slope is near p - n = -1 for p = 1."""
        report = decay_experiment(bubble, Power(1), K_LIST)
        assert -1.15 <= report.slope <= -0.85
        assert report.verdict == VERDICT_DECAYS
        assert report.luxemburg_decays

    def test_p_one_and_a_half_slope(self, bubble):
        """Test the slope is near p - n = -0.5 for p = 1.5."""
        report = decay_experiment(bubble, Power(1.5), K_LIST)
        assert -0.65 <= report.slope <= -0.35
        assert report.verdict == VERDICT_DECAYS

    def test_critical_exponent_bounded(self, bubble):
        """Test the 2-energy stays above 30 and varies by less than 10%."""
        report = decay_experiment(bubble, Power(2), K_LIST)
        energies = report.energies
        assert energies.min() >= 30.0
        assert energies.max() / energies.min() < 1.1
        assert report.verdict == VERDICT_BOUNDED

    def test_rows_in_increasing_k(self, bubble):
        """Test rows come back sorted whatever the input order."""
        report = decay_experiment(bubble, Power(1), (16, 4, 64, 8))
        assert [row.k for row in report.rows] == [4, 8, 16, 64]

    def test_threads_do_not_change_rows(self, bubble):
        """Test parallel rows equal sequential rows."""
        sequential = decay_experiment(bubble, Power(1), (1, 2, 3, 4), threads=1)
        parallel = decay_experiment(bubble, Power(1), (1, 2, 3, 4), threads=4)
        assert sequential.rows == parallel.rows


class TestOrliczDecay:
    """Tests for the logarithmic gauge t^2/log(e+t)."""

    @pytest.fixture(scope="class")
    def report(self):
        """Decay experiment of the bubble family under the logarithmic gauge."""
        return decay_experiment(parse_family("bubble"), PowerOverLogPower(2, 1), K_LIST)

    def test_strictly_decreasing(self, report):
        """Test energies decrease strictly and by a quarter end to end."""
        energies = report.energies
        assert np.all(np.diff(energies) < 0)
        assert energies[-1] < 0.75 * energies[0]

    def test_certificates(self, report):
        """Test energy <= P(sup |Df|) |C_k| on every row."""
        assert report.certificates_hold

    def test_reference_band(self, report):
        """Test energy / (P(k) k^-2) stays within a factor 10."""
        band = report.energies / np.array([row.reference for row in report.rows])
        assert band.max() / band.min() <= 10.0

    def test_verdict(self, report):
        """Test the decay is classified through the Orlicz regime."""
        assert report.verdict == VERDICT_DECAYS

    def test_cap_measure_reported(self, report):
        """Test rows report the clipped cap, which covers the support."""
        for row in report.rows:
            assert row.cap_measure >= row.support_measure


class TestParadox:
    """Tests for the degree column of paradox experiments."""

    def test_bubble_degree_constant(self, bubble):
        """Test the bubble family keeps degree 1 while the energy decays."""
        report = decay_experiment(bubble, PowerOverLogPower(2, 1), K_LIST, with_degree=True)
        assert report.degrees == [1] * len(K_LIST)
        assert report.degree_constant
        assert report.verdict == VERDICT_DECAYS
        assert report.to_dict()["rows"][0]["degree"] == 1

    def test_composite_degree_two(self):
        """Test the torus composite keeps degree 2 while the energy decays."""
        family = parse_family("composite")
        report = decay_experiment(family, PowerOverLogPower(2, 1), K_LIST, with_degree=True)
        assert report.degrees == [2] * len(K_LIST)
        assert all(row.degree.residual < 0.05 for row in report.rows)
        assert report.verdict == VERDICT_DECAYS

    def test_no_degree_column_by_default(self, bubble):
        """Test plain experiments carry no degree data."""
        report = decay_experiment(bubble, Power(1), (1, 2, 3, 4))
        assert report.degrees is None
        assert "degree" not in report.rows[0].to_dict()


class TestExperimentErrors:
    """Tests for experiment validation and partial reports."""

    def test_needs_four_values(self, bubble):
        """Test fewer than four k values are refused."""
        with pytest.raises(ConfigurationError):
            decay_experiment(bubble, Power(1), (4, 8, 16))

    def test_distinct_values(self, bubble):
        """Test repeated k values are refused."""
        with pytest.raises(ConfigurationError):
            decay_experiment(bubble, Power(1), (4, 4, 8, 16, 32))

    def test_partial_report(self):
        """Test a resolution failure carries the rows computed before it."""
        fixed = ExperimentFamily("fixed", 2, lambda k: (Bubble(k), build_mesh("s2", (256, 16))), True)
        with pytest.raises(ResolutionError) as err:
            decay_experiment(fixed, Power(2), (1, 2, 4, 8))
        assert "k=8" in str(err.value)
        assert [row.k for row in err.value.partial.rows] == [1, 2, 4]

    def test_fit_slope_needs_positive_values(self):
        """Test no slope is fitted through a zero energy."""
        assert fit_slope([1, 2, 4], [1.0, 0.0, 0.5]) is None
        assert fit_slope([1, 2, 4], [1.0, 0.5, 0.25]) == pytest.approx(-1.0)
