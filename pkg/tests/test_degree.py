"""Unit tests for degree.py - Jacobian quadrature and preimage counting."""
import math
import sys
import os

import pytest

# Add parent directory to path to import our modules
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from degree_lab.config import family_instance
from degree_lab.exceptions import (
    ConfigurationError,
    NonIntegralDegreeError,
    RegularValueError,
    ResolutionError,
)
from degree_lab.degree import degree_by_jacobian, degree_by_preimage
from degree_lab.map_families import Bubble, Collapse, Compose, Constant, Identity, PowerMap
from degree_lab.mesh import build_mesh


class TestJacobianDegree:
    """Tests for degree_by_jacobian."""

    @pytest.mark.parametrize("k", [2, 4, 8, 16, 32, 64])
    def test_bubble_degree_one(self, k):
        """Test bubble maps have degree 1 at N_theta = 64 k."""
        estimate = degree_by_jacobian(Bubble(k), build_mesh("s2", (64 * k, 16)))
        assert estimate.rounded == 1
        assert estimate.residual < 0.01
        assert estimate.method == "jacobian"

    @pytest.mark.parametrize("d", [3, -2, 0])
    def test_power_map(self, d):
        """Test PowerMap(d) has degree d."""
        assert degree_by_jacobian(PowerMap(d), build_mesh("s2")).rounded == d

    def test_identity_three_sphere(self):
        """Test the identity of S3 has degree 1."""
        assert degree_by_jacobian(Identity("s3"), build_mesh("s3", 32)).rounded == 1

    def test_constant(self):
        """Test constant maps have degree 0."""
        estimate = degree_by_jacobian(Constant(), build_mesh("s2"))
        assert estimate.rounded == 0
        assert estimate.residual == pytest.approx(0.0)

    def test_composite_degree_two(self):
        """Test PowerMap(2) after a bubble after the collapse has degree 2."""
        map_expr, mesh = family_instance("composite", 4)
        estimate = degree_by_jacobian(map_expr, mesh)
        assert estimate.rounded == 2
        assert estimate.residual < 0.05

    def test_collapse_degree_one(self):
        """Test the collapse T2 -> S2 has degree 1."""
        assert degree_by_jacobian(Collapse(), build_mesh("t2", 256)).rounded == 1

    def test_under_resolved(self):
        """Test a mesh below the resolution rule is refused."""
        with pytest.raises(ResolutionError):
            degree_by_jacobian(Bubble(8), build_mesh("s2", (64, 16)))

    def test_non_integral(self):
        """Test a wrong target volume yields a non-integral degree error."""
        with pytest.raises(NonIntegralDegreeError) as err:
            degree_by_jacobian(PowerMap(1), build_mesh("s2"), target_volume=8.0 * math.pi / 3.0)
        assert err.value.raw == pytest.approx(1.5, rel=1e-3)
        assert err.value.exit_code == 3

    def test_unequal_dimensions(self):
        """Test the degree needs equal dimensions."""
        with pytest.raises(ConfigurationError):
            degree_by_jacobian(Constant(on="s3", to_kind="s2"), build_mesh("s3", 16))


class TestPreimageDegree:
    """Tests for degree_by_preimage."""

    def test_power_map(self):
        """Test three preimages of positive sign for PowerMap(3)."""
        estimate = degree_by_preimage(PowerMap(3), (0.3, math.pi / 3), build_mesh("s2", (64, 128)))
        assert estimate.rounded == 3
        assert estimate.preimages == 3

    def test_negative_power_map(self):
        """Test PowerMap(-2) preimages count negatively."""
        estimate = degree_by_preimage(PowerMap(-2), (1.0, 1.2), build_mesh("s2", (64, 128)))
        assert estimate.rounded == -2

    def test_bubble(self):
        """Test the bubble has a single positive preimage."""
        estimate = degree_by_preimage(Bubble(2), (1.0, math.pi / 2), build_mesh("s2", (128, 16)))
        assert estimate.rounded == 1
        assert estimate.preimages == 1

    def test_agrees_with_jacobian(self):
        """Test both methods agree on a composite sphere map."""
        map_expr = Compose((PowerMap(2), Bubble(2)))
        mesh = build_mesh("s2", (128, 64))
        assert degree_by_preimage(map_expr, (2.0, 1.0), mesh).rounded == degree_by_jacobian(map_expr, mesh).rounded

    def test_value_near_pole(self):
        """Test values within 0.1 of a pole are refused."""
        with pytest.raises(RegularValueError):
            degree_by_preimage(PowerMap(2), (1.0, 0.05), build_mesh("s2"))

    def test_missed_value(self):
        """Test a value with no preimage has degree 0."""
        estimate = degree_by_preimage(Constant(point=(0.0, math.pi)), (1.0, 1.0), build_mesh("s2"))
        assert estimate.rounded == 0
        assert estimate.preimages == 0

    def test_value_size(self):
        """Test the value must fit the target chart."""
        with pytest.raises(ConfigurationError):
            degree_by_preimage(PowerMap(2), (1.0, 1.0, 1.0), build_mesh("s2"))
