"""Constants for the degree lab.

This module defines all constants used throughout the package:
- Artifact identity and version
- Young function families and the numeric thresholds of their checks
- Mesh kinds and the resolution rule for cap-supported maps
- Map variants and experiment families
- Degree, energy and verdict thresholds
- Exit codes of the command line
"""
from __future__ import annotations

import math

DOMAIN = "degree_lab"
VERSION = "1.0.0"

# =============================================================================
# Young functions
# =============================================================================

YOUNG_POWER = "power"
YOUNG_POWLOG = "powlog"
YOUNG_TABLE = "table"

STATUS_HOLDS = "Holds"
STATUS_FAILS = "Fails"
STATUS_INCONCLUSIVE = "Inconclusive"

RADIAL_FINITE = "Finite"
RADIAL_INFINITE = "Infinite"

YOUNG_FAMILIES = {
    YOUNG_POWER: {
        "name": "Power",
        "description": "P(t) = t^p, p >= 1",
        "params": ("p",),
    },
    YOUNG_POWLOG: {
        "name": "PowerOverLogPower",
        "description": "P(t) = t^n / log^a(e + t)",
        "params": ("n", "a"),
    },
    YOUNG_TABLE: {
        "name": "Tabulated",
        "description": "Monotone sample table, log-log interpolation",
        "params": ("path",),
    },
}

# Standard validation grid for Young function invariants
STANDARD_GRID_MIN = 1e-6
STANDARD_GRID_MAX = 1e6
STANDARD_GRID_POINTS = 1000
CONVEXITY_RTOL = 1e-12

# Divergence of the integral of P(t)/t^(n+1) over dyadic windows
DIVERGENCE_LAST_WINDOW = 40
DIVERGENCE_TAIL_START = 30
RATIO_DIVERGES = 0.98
RATIO_CONVERGES = 0.9
LOG_EXPONENT_DIVERGES = 1.05
LOG_EXPONENT_CONVERGES = 1.15
WINDOW_QUAD_EPSREL = 1e-10
WINDOW_QUAD_LIMIT = 200

# P(t) = o(t^n) on t = 2^j
SMALL_O_J_MAX = 4096
SMALL_O_THRESHOLD = 1e-3

DOUBLING_K_MAX = 2.0 ** 16
DOUBLING_DEFAULT_RANGE = (STANDARD_GRID_MIN, STANDARD_GRID_MAX)
GROWTH_RTOL = 1e-12
GROWTH_DEFAULT_RANGE = (1.0, STANDARD_GRID_MAX)
DEFAULT_SAMPLES = 1000

# Admissibility searches alpha = n - 1 + delta, first delta that holds wins
GROWTH_ALPHA_OFFSETS = (0.5, 0.25, 0.1, 0.05)

# Radial projection x/|x| on the unit ball, windows r in [2^-(j+1), 2^-j]
RADIAL_LAST_WINDOW = 60

LUXEMBURG_RTOL = 1e-8

# =============================================================================
# Meshes
# =============================================================================

MESH_S2 = "s2"
MESH_S3 = "s3"
MESH_T2 = "t2"

# Axis order is chart order. Descriptors list resolutions in "descriptor_axes" order.
MESH_KINDS = {
    MESH_S2: {
        "name": "Sphere(2)",
        "dimension": 2,
        "axes": ("phi", "theta"),
        "descriptor_axes": ("theta", "phi"),
        "default_resolution": (64, 128),
        "volume": 4.0 * math.pi,
        # (phi, theta) is opposite to the outward-normal orientation
        "orientation": -1,
    },
    MESH_S3: {
        "name": "Sphere(3)",
        "dimension": 3,
        "axes": ("phi", "chi", "theta"),
        "descriptor_axes": ("theta", "chi", "phi"),
        "default_resolution": (64, 64, 64),
        "volume": 2.0 * math.pi ** 2,
        "orientation": 1,
    },
    MESH_T2: {
        "name": "Torus2",
        "dimension": 2,
        "axes": ("x", "y"),
        "descriptor_axes": ("x", "y"),
        "default_resolution": (128, 128),
        "volume": 1.0,
        "orientation": 1,
    },
}

SPHERE_KINDS = (MESH_S2, MESH_S3)
MIN_RESOLUTION = 8

# Resolution rule: N_theta >= 64 k on spheres for every Bubble(k) factor,
# elsewhere the support must span this many cells along some axis.
BUBBLE_CELLS_PER_K = 64
MIN_SUPPORT_CELLS = 20

# Focused torus meshes put this share of the cells inside the focus window
FOCUS_INNER_SHARE = 2.0 / 3.0

# =============================================================================
# Maps
# =============================================================================

MAP_BUBBLE = "bubble"
MAP_POWER = "power"
MAP_COLLAPSE = "collapse"
MAP_IDENTITY = "identity"
MAP_CONSTANT = "constant"
MAP_COMPOSE = "compose"

MAP_VARIANTS = {
    MAP_BUBBLE: {
        "name": "Bubble",
        "description": "Stretches the polar cap theta <= 1/k onto the sphere",
        "params": ("k",),
    },
    MAP_POWER: {
        "name": "PowerMap",
        "description": "(phi, theta) -> (d phi mod 2 pi, theta) on S2",
        "params": ("d",),
    },
    MAP_COLLAPSE: {
        "name": "Collapse",
        "description": "Disk about a center of T2 onto S2, complement to the south pole",
        "params": ("rho", "cx", "cy"),
    },
    MAP_IDENTITY: {
        "name": "Identity",
        "description": "Identity on a mesh kind",
        "params": ("on",),
    },
    MAP_CONSTANT: {
        "name": "Constant",
        "description": "Constant map to a chart point",
        "params": ("on", "to"),
    },
    MAP_COMPOSE: {
        "name": "Compose",
        "description": "Composition applied right-to-left",
        "params": (),
    },
}

DEFAULT_COLLAPSE_CENTER = (0.5, 0.5)
DEFAULT_COLLAPSE_RADIUS = 0.25

SINGULAR_LOCUS_TOL = 1e-12
FD_STEP = 1e-5
FD_RTOL = 1e-3
# Minimum chart distance from a kink for finite-difference sample nodes
FD_SMOOTH_MARGIN = 1e-3

# =============================================================================
# Degree
# =============================================================================

METHOD_JACOBIAN = "jacobian"
METHOD_PREIMAGE = "preimage"
DEGREE_METHODS = (METHOD_JACOBIAN, METHOD_PREIMAGE)

INTEGRALITY_THRESHOLD = 0.05
NEWTON_STEPS = 20
NEWTON_TOL = 1e-10
ROOT_DEDUP_TOL = 1e-7
POLE_EXCLUSION = 0.1
# Residual in phi must stay below this on every corner of a candidate cell
PHI_RESIDUAL_LIMIT = math.pi / 2.0

# =============================================================================
# Energy
# =============================================================================

VERDICT_DECAYS = "DecaysToZero"
VERDICT_BOUNDED = "BoundedAway"
VERDICT_INCONCLUSIVE = "Inconclusive"

DECAY_SLOPE_MAX = -0.2
DECAY_END_RATIO = 0.5
BOUNDED_SLOPE_MAX = 0.1
BOUNDED_SPREAD_MAX = 2.0
REFERENCE_BAND_MAX = 10.0
CERTIFICATE_SLACK = 1e-6
MIN_K_VALUES = 4

# Experiment families. "{k}" is substituted per row.
FAMILY_BUBBLE = "bubble"
FAMILY_BUBBLE3 = "bubble3"
FAMILY_COMPOSITE = "composite"

FAMILIES = {
    FAMILY_BUBBLE: {
        "name": "Bubble maps on S2",
        "map": "bubble:k={k}",
        "mesh": "s2:{n_theta}x16",
        "dimension": 2,
    },
    FAMILY_BUBBLE3: {
        "name": "Bubble maps on S3",
        "map": "bubble:k={k},on=s3",
        "mesh": "s3:{n_theta}x32x16",
        "dimension": 3,
    },
    FAMILY_COMPOSITE: {
        "name": "Degree-2 power map after bubble after collapse, T2 to S2",
        "map": "compose:power:d=2|bubble:k={k}|collapse",
        "mesh": "t2:192,focus={focus}",
        "dimension": 2,
    },
}

# Focus half-width for the composite family is FOCUS_WIDTH_FACTOR * rho / (pi k)
FOCUS_WIDTH_FACTOR = 2.0

# =============================================================================
# Homology and catalog
# =============================================================================

COEFF_Z = "Z"
COEFF_Q = "Q"
COEFFICIENTS = (COEFF_Z, COEFF_Q)

COVER_SELF = "self"
COVER_NAMED = "named"
COVER_NONCOMPACT = "noncompact"
COVER_TYPES = (COVER_SELF, COVER_NAMED, COVER_NONCOMPACT)

PI_ZERO = "zero"
PI_NONZERO = "nonzero"
PI_UNKNOWN = "unknown"
PI_STATUSES = (PI_ZERO, PI_NONZERO, PI_UNKNOWN)

ANSWER_YES = "Yes"
ANSWER_NO = "No"
ANSWER_UNKNOWN = "Unknown"

SPACE_H = "H"
SPACE_W = "W"
SOBOLEV_SPACES = (SPACE_H, SPACE_W)

CATALOG_FILENAME = "catalog.json"
INFINITE_SHEETS = "infinite"

PREDICATE_DEGREE = "degree"
PREDICATE_DEGREE_DIM4 = "degree-dim4"
PREDICATE_HOMOTOPY = "homotopy"
PREDICATE_DEGREE_SOBOLEV = "degree-sobolev"
PREDICATE_HOMOTOPY_SOBOLEV = "homotopy-sobolev"
PREDICATE_KEYS = (
    PREDICATE_DEGREE,
    PREDICATE_DEGREE_DIM4,
    PREDICATE_HOMOTOPY,
    PREDICATE_DEGREE_SOBOLEV,
    PREDICATE_HOMOTOPY_SOBOLEV,
)

# =============================================================================
# Command line
# =============================================================================

ENV_THREADS = "DEGREE_LAB_THREADS"

FORMAT_CSV = "csv"
FORMAT_JSON = "json"
OUTPUT_FORMATS = (FORMAT_CSV, FORMAT_JSON)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOLUTION = 3
EXIT_INTERNAL = 4

SUBCOMMANDS = (
    "young-check",
    "degree",
    "energy",
    "homology",
    "verdict",
    "paradox",
    "catalog-list",
    "mesh-dump",
)

ENERGY_CSV_COLUMNS = (
    "k",
    "energy",
    "cap_measure",
    "sup_df",
    "bound_certificate",
    "support_measure",
    "luxemburg",
    "reference",
)
PARADOX_CSV_COLUMNS = ("k", "degree", "degree_residual", "energy", "sup_df", "reference")
