"""Unit tests for mesh.py - quadrature meshes, cap measures and node export."""
import csv
import math
import sys
import os

import numpy as np
import pytest

# Add parent directory to path to import our modules
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from degree_lab.exceptions import ConfigurationError, EvaluationError
from degree_lab.map_families import cap_measure
from degree_lab.mesh import build_mesh, embed, export_nodes_csv, integrate, polar_cap_measure


class TestVolumes:
    """Tests for total volumes against the analytic values."""

    @pytest.mark.parametrize("kind", ["s2", "s3", "t2"])
    def test_default_resolution(self, kind):
        """Test volumes within 0.5% at the default resolution."""
        mesh = build_mesh(kind)
        assert mesh.total_volume == pytest.approx(mesh.analytic_volume, rel=5e-3)

    def test_refined_sphere(self):
        """Test S2 volume within 0.05% at four times the resolution."""
        mesh = build_mesh("s2", (256, 512))
        assert mesh.total_volume == pytest.approx(4.0 * math.pi, rel=5e-4)

    @pytest.mark.parametrize("kind, coarse, fine", [
        ("s2", (32, 64), (64, 128)),
        ("s3", (16, 16, 8), (32, 32, 8)),
    ])
    def test_doubling_reduces_error(self, kind, coarse, fine):
        """Test doubling the curved-axis resolution cuts the volume error by at least 3."""
        coarse_mesh = build_mesh(kind, coarse)
        fine_mesh = build_mesh(kind, fine)
        coarse_error = abs(coarse_mesh.total_volume - coarse_mesh.analytic_volume)
        fine_error = abs(fine_mesh.total_volume - fine_mesh.analytic_volume)
        assert fine_error > 0
        assert coarse_error / fine_error >= 3.0

    def test_refined_three_sphere(self):
        """Test S3 volume within 0.05% at four times the resolution along theta and chi."""
        mesh = build_mesh("s3", (256, 256, 16))
        assert mesh.total_volume == pytest.approx(2.0 * math.pi ** 2, rel=5e-4)

    def test_torus_exact(self):
        """Test the flat torus has unit area up to rounding."""
        assert build_mesh("t2", 64).total_volume == pytest.approx(1.0, abs=1e-12)

    def test_focused_torus_keeps_area(self):
        """Test a focused torus mesh still has unit area and most cells in the window."""
        mesh = build_mesh("t2", 192, focus=0.02)
        assert mesh.total_volume == pytest.approx(1.0, abs=1e-12)
        x = mesh.axis("x").midpoints
        assert np.count_nonzero(np.abs(x - 0.5) < 0.02) == 128


class TestConstruction:
    """Tests for descriptors and validation."""

    def test_descriptor_order(self):
        """Test descriptors list theta first on spheres."""
        mesh = build_mesh("s2", (256, 512))
        assert mesh.descriptor == "s2:256x512"
        assert mesh.axis("phi").size == 512
        assert mesh.axis("theta").size == 256

    def test_focus_descriptor(self):
        """Test focused meshes carry the focus in their descriptor."""
        assert build_mesh("t2", 192, focus=0.01).descriptor == "t2:192x192,focus=0.01"

    def test_unknown_kind(self):
        """Test unknown kinds are rejected."""
        with pytest.raises(ConfigurationError):
            build_mesh("s5")

    def test_resolution_minimum(self):
        """Test counts below 8 are rejected."""
        with pytest.raises(ConfigurationError):
            build_mesh("s2", (4, 64))

    def test_wrong_count_length(self):
        """Test the number of counts must match the dimension."""
        with pytest.raises(ConfigurationError):
            build_mesh("s3", (64, 64))

    def test_focus_only_on_torus(self):
        """Test focus windows on spheres are rejected."""
        with pytest.raises(ConfigurationError):
            build_mesh("s2", 64, focus=0.1)

    def test_focus_window_inside_unit_square(self):
        """Test a focus window leaving (0, 1) is rejected."""
        with pytest.raises(ConfigurationError):
            build_mesh("t2", 64, focus=0.6)

    def test_sphere_points_on_unit_sphere(self):
        """Test embedded S3 nodes have unit norm."""
        mesh = build_mesh("s3", 16)
        norms = np.linalg.norm(embed("s3", mesh.coords), axis=1)
        assert np.allclose(norms, 1.0)


class TestCapsAndIntegration:
    """Tests for polar caps and the quadrature sum."""

    @pytest.mark.parametrize("k", [1, 4, 16])
    def test_cap_measure_within_one_percent(self, k):
        """Test the clipped cap measure against 2 pi (1 - cos(1/k))."""
        exact = 2.0 * math.pi * (1.0 - math.cos(1.0 / k))
        assert cap_measure(k, 2) == pytest.approx(exact, rel=0.01)

    def test_polar_cap_on_torus(self):
        """Test polar caps need a sphere mesh."""
        with pytest.raises(ConfigurationError):
            polar_cap_measure(build_mesh("t2", 16), 0.5)

    def test_full_cap_is_whole_sphere(self):
        """Test the cap theta <= pi is the whole mesh."""
        mesh = build_mesh("s2")
        assert polar_cap_measure(mesh, math.pi) == pytest.approx(mesh.total_volume)

    def test_integrate_constant(self):
        """Test integrating 1 gives the total volume."""
        mesh = build_mesh("s2")
        assert integrate(mesh, np.ones(mesh.node_count)) == pytest.approx(mesh.total_volume)

    def test_integrate_odd_in_theta(self):
        """Test cos(theta) integrates to zero on S2."""
        mesh = build_mesh("s2")
        theta = mesh.coords[:, mesh.axis_position("theta")]
        assert integrate(mesh, np.cos(theta)) == pytest.approx(0.0, abs=1e-9)

    def test_integrate_sin_squared(self):
        """Test sin^2(theta) integrates to 8 pi / 3 on S2 within 0.5%."""
        mesh = build_mesh("s2")
        theta = mesh.coords[:, mesh.axis_position("theta")]
        assert integrate(mesh, np.sin(theta) ** 2) == pytest.approx(8.0 * math.pi / 3.0, rel=5e-3)

    def test_integrate_size_mismatch(self):
        """Test a field of the wrong size is rejected."""
        with pytest.raises(ConfigurationError):
            integrate(build_mesh("t2", 16), np.ones(10))

    def test_integrate_nan_reports_index(self):
        """Test NaN values raise with the node index."""
        mesh = build_mesh("t2", 16)
        values = np.ones(mesh.node_count)
        values[7] = np.nan
        with pytest.raises(EvaluationError) as err:
            integrate(mesh, values)
        assert err.value.index == 7


class TestExport:
    """Tests for the node CSV export."""

    def test_export_rows(self, tmp_path):
        """Test one row per node plus a header."""
        mesh = build_mesh("s2", (8, 16))
        path = tmp_path / "nodes.csv"
        assert export_nodes_csv(mesh, path) == 128
        with open(path, newline="", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["phi", "theta", "weight"]
        assert len(rows) == 129
        assert sum(float(row[2]) for row in rows[1:]) == pytest.approx(mesh.total_volume)
