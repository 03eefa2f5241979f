"""Quadrature meshes on S2, S3 and the flat torus T2.

Meshes are tensor-product midpoint grids in chart coordinates. Spheres use
recursive coordinates (z, theta) -> (z sin theta, cos theta) with z on the
next lower sphere, so the chart order is (phi, theta) on S2 and
(phi, chi, theta) on S3. The torus uses (x, y) in [0, 1)^2.

Weights are products of per-axis factors, which keeps every weight exact for
the flat torus and lets cap measures be clipped along the theta axis.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .const import (
    FOCUS_INNER_SHARE,
    MESH_KINDS,
    MESH_T2,
    MIN_RESOLUTION,
    SPHERE_KINDS,
)
from .exceptions import ConfigurationError, EvaluationError

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Axis:
    """One chart axis of a product grid."""

    name: str
    edges: np.ndarray
    periodic: bool

    @property
    def size(self) -> int:
        return self.edges.size - 1

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def period(self) -> float:
        return float(self.edges[-1] - self.edges[0])


@dataclass(frozen=True, eq=False)
class ManifoldMesh:
    """Immutable midpoint quadrature mesh.

    Attributes:
        kind: Mesh kind key ("s2", "s3", "t2")
        axes: Chart axes in chart order
        coords: Node chart coordinates, shape (nodes, dimension)
        weights: Node quadrature weights
        axis_factors: Per-axis weight factors whose outer product gives weights
        focus: Focus window (half-width, center) for graded torus meshes
    """

    kind: str
    axes: tuple[Axis, ...]
    focus: tuple[float, tuple[float, float]] | None = None
    coords: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)
    axis_factors: tuple[np.ndarray, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        factors = tuple(_axis_weight_factor(self.kind, index, axis) for index, axis in enumerate(self.axes))
        grids = np.meshgrid(*(axis.midpoints for axis in self.axes), indexing="ij")
        coords = np.stack([grid.ravel() for grid in grids], axis=1)
        weights = factors[0]
        for factor in factors[1:]:
            weights = np.multiply.outer(weights, factor)
        object.__setattr__(self, "axis_factors", factors)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "weights", np.ascontiguousarray(weights).ravel())

    @property
    def info(self) -> dict:
        return MESH_KINDS[self.kind]

    @property
    def dimension(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(axis.size for axis in self.axes)

    @property
    def resolution(self) -> tuple[int, ...]:
        """Cell counts in descriptor order (theta first on spheres)."""
        sizes = {axis.name: axis.size for axis in self.axes}
        return tuple(sizes[name] for name in self.info["descriptor_axes"])

    @property
    def node_count(self) -> int:
        return self.weights.size

    @property
    def total_volume(self) -> float:
        return float(np.sum(self.weights))

    @property
    def analytic_volume(self) -> float:
        return float(self.info["volume"])

    @property
    def orientation(self) -> int:
        return int(self.info["orientation"])

    @property
    def is_sphere(self) -> bool:
        return self.kind in SPHERE_KINDS

    def axis(self, name: str) -> Axis:
        for axis in self.axes:
            if axis.name == name:
                return axis
        raise KeyError(f"Mesh {self.kind} has no axis '{name}'")

    def axis_position(self, name: str) -> int:
        return [axis.name for axis in self.axes].index(name)

    def ambient_points(self) -> np.ndarray:
        return embed(self.kind, self.coords)

    @property
    def descriptor(self) -> str:
        text = f"{self.kind}:" + "x".join(str(n) for n in self.resolution)
        if self.focus is not None:
            width, (cx, cy) = self.focus
            text += f",focus={width:g}"
            if (cx, cy) != (0.5, 0.5):
                text += f",center={cx:g};{cy:g}"
        return text


# =============================================================================
# Construction
# =============================================================================

def build_mesh(
    kind: str,
    resolution: int | Sequence[int] | None = None,
    focus: float | None = None,
    center: tuple[float, float] = (0.5, 0.5),
) -> ManifoldMesh:
    """Build a midpoint product mesh.

    Args:
        kind: "s2", "s3" or "t2"
        resolution: One count for every axis, or counts in descriptor order
            (N_theta x N_phi on S2, N_theta x N_chi x N_phi on S3, N_x x N_y on T2)
        focus: Torus only, half-width of a window around center that
            receives two thirds of the cells along each axis
        center: Center of the focus window

    Returns:
        The mesh

    Raises:
        ConfigurationError: Unknown kind, wrong number of counts, a count
            below 8, or an invalid focus window

    Example:
        >>> build_mesh("s2", (256, 512)).total_volume  # about 4 pi
    """
    if kind not in MESH_KINDS:
        raise ConfigurationError(f"Unknown mesh kind '{kind}', expected one of {sorted(MESH_KINDS)}")
    info = MESH_KINDS[kind]
    counts = _resolution_by_axis(kind, resolution)
    if focus is not None and kind != MESH_T2:
        raise ConfigurationError("Focus windows are only supported on t2 meshes")

    axes = []
    for index, name in enumerate(info["axes"]):
        count = counts[name]
        if kind in SPHERE_KINDS:
            if index == 0:
                axes.append(Axis(name, np.linspace(0.0, 2.0 * math.pi, count + 1), True))
            else:
                axes.append(Axis(name, np.linspace(0.0, math.pi, count + 1), False))
        elif focus is None:
            axes.append(Axis(name, np.linspace(0.0, 1.0, count + 1), True))
        else:
            axes.append(Axis(name, _focused_edges(count, focus, center[index]), True))
    mesh = ManifoldMesh(kind, tuple(axes), None if focus is None else (float(focus), tuple(center)))
    _LOGGER.debug("Built mesh %s with %d nodes", mesh.descriptor, mesh.node_count)
    return mesh


def _resolution_by_axis(kind: str, resolution: int | Sequence[int] | None) -> dict[str, int]:
    info = MESH_KINDS[kind]
    if resolution is None:
        counts = tuple(info["default_resolution"])
    elif isinstance(resolution, (int, np.integer)):
        counts = (int(resolution),) * info["dimension"]
    else:
        counts = tuple(int(n) for n in resolution)
    if len(counts) != info["dimension"]:
        raise ConfigurationError(
            f"Mesh {kind} needs {info['dimension']} counts ({'x'.join(info['descriptor_axes'])}), got {counts}"
        )
    for name, count in zip(info["descriptor_axes"], counts):
        if count < MIN_RESOLUTION:
            raise ConfigurationError(f"Resolution {count} along {name} is below the minimum {MIN_RESOLUTION}")
    return dict(zip(info["descriptor_axes"], counts))


def _focused_edges(count: int, half_width: float, center: float) -> np.ndarray:
    """Edges on [0, 1] with most cells inside [center - w, center + w]."""
    low, high = center - half_width, center + half_width
    if not (half_width > 0 and 0.0 < low and high < 1.0):
        raise ConfigurationError(
            f"Focus window [{low:g}, {high:g}] must lie strictly inside (0, 1)"
        )
    inner = int(round(count * FOCUS_INNER_SHARE))
    outer = count - inner
    if outer < 2:
        raise ConfigurationError(f"Focused mesh with {count} cells leaves no cells outside the window")
    left = min(max(1, int(round(outer * low / (1.0 - 2.0 * half_width)))), outer - 1)
    right = outer - left
    return np.concatenate((
        np.linspace(0.0, low, left + 1),
        np.linspace(low, high, inner + 1)[1:],
        np.linspace(high, 1.0, right + 1)[1:],
    ))


def _axis_weight_factor(kind: str, index: int, axis: Axis) -> np.ndarray:
    # Volume density on S^n is prod_i sin^i(angle_i) over the non-phi angles
    if kind in SPHERE_KINDS and index > 0:
        return np.sin(axis.midpoints) ** index * axis.widths
    return axis.widths


# =============================================================================
# Geometry
# =============================================================================

def scale_factors(kind: str, coords: np.ndarray) -> np.ndarray:
    """Length of each chart coordinate vector at the given points.

    On spheres h_phi is the product of sines of all later angles and the
    angle at chart position i has h = product of sines of the angles after it.
    The torus is flat.

    Returns:
        Array of shape (points, dimension)
    """
    coords = np.asarray(coords, dtype=float)
    scales = np.ones_like(coords)
    if kind in SPHERE_KINDS:
        # column c of sines is the angle at chart position c + 1
        sines = np.sin(coords[:, 1:])
        scales[:, 0] = np.prod(sines, axis=1)
        for position in range(1, coords.shape[1]):
            scales[:, position] = np.prod(sines[:, position:], axis=1)
    return scales


def embed(kind: str, coords: np.ndarray) -> np.ndarray:
    """Ambient coordinates of chart points.

    S2 and S3 embed as unit spheres in R3 and R4, T2 as the flat Clifford
    torus of unit area in R4.
    """
    coords = np.asarray(coords, dtype=float)
    if kind in SPHERE_KINDS:
        points = np.stack((np.cos(coords[:, 0]), np.sin(coords[:, 0])), axis=1)
        for position in range(1, coords.shape[1]):
            angle = coords[:, position]
            points = np.concatenate((points * np.sin(angle)[:, None], np.cos(angle)[:, None]), axis=1)
        return points
    turn = 2.0 * math.pi
    return np.stack((
        np.cos(turn * coords[:, 0]), np.sin(turn * coords[:, 0]),
        np.cos(turn * coords[:, 1]), np.sin(turn * coords[:, 1]),
    ), axis=1) / turn


def periodic_axes(kind: str) -> list[tuple[int, float]]:
    """(chart position, period) for the periodic chart axes of a kind."""
    if kind in SPHERE_KINDS:
        return [(0, 2.0 * math.pi)]
    return [(0, 1.0), (1, 1.0)]


# =============================================================================
# Integration
# =============================================================================

def integrate(mesh: ManifoldMesh, values: np.ndarray) -> float:
    """Return the quadrature sum of w_i f_i.

    Raises:
        ConfigurationError: If the field size does not match the mesh
        EvaluationError: If the field contains NaN, with the node index
    """
    values = np.asarray(values, dtype=float).ravel()
    if values.size != mesh.node_count:
        raise ConfigurationError(f"Field has {values.size} values, mesh has {mesh.node_count} nodes")
    if np.any(np.isnan(values)):
        index = int(np.flatnonzero(np.isnan(values))[0])
        raise EvaluationError(f"Field is NaN at node {index} ({mesh.coords[index].tolist()})", index=index)
    return float(np.sum(mesh.weights * values))


def polar_cap_measure(mesh: ManifoldMesh, theta_max: float) -> float:
    """Measure of {theta <= theta_max} with the straddling theta cell clipped."""
    if not mesh.is_sphere:
        raise ConfigurationError(f"Polar caps need a sphere mesh, got {mesh.kind}")
    position = mesh.axis_position("theta")
    theta = mesh.axes[position]
    covered = np.clip(theta_max - theta.edges[:-1], 0.0, theta.widths) / theta.widths
    measure = 1.0
    for index, factor in enumerate(mesh.axis_factors):
        measure *= float(np.sum(factor * covered)) if index == position else float(np.sum(factor))
    return measure


def export_nodes_csv(mesh: ManifoldMesh, path: str | Path) -> int:
    """Write one row per node: chart coordinates then weight.

    Returns:
        Number of rows written
    """
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow([axis.name for axis in mesh.axes] + ["weight"])
        for coords, weight in zip(mesh.coords, mesh.weights):
            writer.writerow([repr(float(c)) for c in coords] + [repr(float(weight))])
    return mesh.node_count
