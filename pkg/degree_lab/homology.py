"""Exact integer cellular homology.

Contains:
- smith_normal_form: invariant factors with Python integers
- ChainComplex: boundary matrices validated for d o d = 0
- homology over Z or Q, Betti numbers, torsion, Euler characteristic
- the rational homology sphere predicate and the covering chi check
- builders for spheres, lens spaces, projective spaces, tori and products
- JSON import and export of chain complexes
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import sympy
import voluptuous as vol

from .const import COEFF_Q, COEFF_Z, COEFFICIENTS
from .exceptions import ChainComplexError, ConfigurationError, InternalConsistencyError

_LOGGER = logging.getLogger(__name__)

Matrix = tuple[tuple[int, ...], ...]


# =============================================================================
# Smith normal form
# =============================================================================

@dataclass(frozen=True)
class SNFResult:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""

    invariant_factors: tuple[int, ...]
    rank: int
    shape: tuple[int, int]

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)

    @property
    def determinant_magnitude(self) -> int:
        """Product of the invariant factors; |det| for a square nonsingular matrix."""
        product = 1
        for factor in self.invariant_factors:
            product *= factor
        return product


def _integer_rows(matrix: Any) -> list[list[int]]:
    rows = []
    for row in matrix:
        converted = []
        for entry in row:
            value = int(entry)
            if value != entry:
                raise ConfigurationError(f"Matrix entry {entry!r} is not an integer")
            converted.append(value)
        rows.append(converted)
    if rows and len({len(row) for row in rows}) != 1:
        raise ConfigurationError("Matrix rows have different lengths")
    return rows


def _smallest_entry(rows: list[list[int]], start: int) -> tuple[int, int] | None:
    best = None
    for i in range(start, len(rows)):
        for j in range(start, len(rows[i])):
            value = abs(rows[i][j])
            if value and (best is None or value < best[0]):
                best = (value, i, j)
    return None if best is None else (best[1], best[2])


def _swap(rows: list[list[int]], t: int, i: int, j: int) -> None:
    rows[t], rows[i] = rows[i], rows[t]
    for row in rows:
        row[t], row[j] = row[j], row[t]


def smith_normal_form(matrix: Any) -> SNFResult:
    """Invariant factors by elementary integer row and column operations.

    The pivot is always an entry of minimal nonzero magnitude; entries are
    Python integers so no intermediate value can overflow.

    Args:
        matrix: Any nested sequence (or array) of integers, possibly empty

    Returns:
        SNFResult whose factors form a divisibility chain

    Example:
        >>> smith_normal_form([[2, 4], [6, 8]]).invariant_factors
        (2, 4)
    """
    rows = _integer_rows(matrix)
    height = len(rows)
    width = len(rows[0]) if rows else 0
    factors: list[int] = []
    t = 0
    while t < min(height, width):
        position = _smallest_entry(rows, t)
        if position is None:
            break
        _swap(rows, t, *position)
        while True:
            pivot = rows[t][t]
            for i in range(t + 1, height):
                quotient = rows[i][t] // pivot
                if quotient:
                    rows[i] = [a - quotient * b for a, b in zip(rows[i], rows[t])]
            for j in range(t + 1, width):
                quotient = rows[t][j] // pivot
                if quotient:
                    for row in rows:
                        row[j] -= quotient * row[t]
            leftovers = [(abs(rows[i][t]), i, t) for i in range(t + 1, height) if rows[i][t]]
            leftovers += [(abs(rows[t][j]), t, j) for j in range(t + 1, width) if rows[t][j]]
            if leftovers:
                _, i, j = min(leftovers)
                _swap(rows, t, i, j)
                continue
            # the pivot must divide the remaining block
            stray = next(
                (i for i in range(t + 1, height) for j in range(t + 1, width) if rows[i][j] % pivot),
                None,
            )
            if stray is None:
                break
            rows[t] = [a + b for a, b in zip(rows[t], rows[stray])]
        factors.append(abs(rows[t][t]))
        t += 1
    return SNFResult(tuple(factors), len(factors), (height, width))


def rational_rank(matrix: Matrix | Sequence[Sequence[int]], shape: tuple[int, int]) -> int:
    """Rank over Q by exact rational elimination."""
    height, width = shape
    if height == 0 or width == 0:
        return 0
    return int(sympy.Matrix(height, width, [entry for row in matrix for entry in row]).rank())


# =============================================================================
# Chain complexes
# =============================================================================

@dataclass(frozen=True)
class ChainComplex:
    """Cell counts per dimension and boundary matrices d_i : C_i -> C_{i-1}.

    ``boundaries[i - 1]`` is d_i, stored as r_{i-1} rows of r_i integers.
    Shapes and d_{i} o d_{i+1} = 0 are validated at construction.
    """

    ranks: tuple[int, ...]
    boundaries: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        if not self.ranks or any(rank < 0 for rank in self.ranks):
            raise ChainComplexError(f"Invalid cell counts {self.ranks}")
        if len(self.boundaries) != len(self.ranks) - 1:
            raise ChainComplexError(
                f"{len(self.ranks)} cell dimensions need {len(self.ranks) - 1} boundary maps, "
                f"got {len(self.boundaries)}"
            )
        for i in range(1, self.dimension + 1):
            matrix = self.boundary(i)
            if len(matrix) != self.ranks[i - 1] or any(len(row) != self.ranks[i] for row in matrix):
                raise ChainComplexError(
                    f"Boundary d_{i} must be {self.ranks[i - 1]}x{self.ranks[i]}"
                )
        for i in range(1, self.dimension):
            if not self._composes_to_zero(i):
                raise ChainComplexError(f"d_{i} o d_{i + 1} is not zero")

    @classmethod
    def from_matrices(cls, ranks: Sequence[int], boundaries: Sequence[Any]) -> ChainComplex:
        """Build from lists or arrays, converting entries to Python integers."""
        ranks = tuple(int(rank) for rank in ranks)
        matrices = []
        for matrix in boundaries:
            matrices.append(tuple(tuple(row) for row in _integer_rows(matrix)))
        return cls(ranks, tuple(matrices))

    @property
    def dimension(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, i: int) -> Matrix:
        """d_i; the zero map outside 1..dimension."""
        if 1 <= i <= self.dimension:
            return self.boundaries[i - 1]
        rows = self.ranks[i - 1] if 0 < i <= self.dimension + 1 else 0
        return tuple(() for _ in range(rows))

    def shape(self, i: int) -> tuple[int, int]:
        if 1 <= i <= self.dimension:
            return self.ranks[i - 1], self.ranks[i]
        return 0, 0

    def _composes_to_zero(self, i: int) -> bool:
        outer, inner = self.boundary(i), self.boundary(i + 1)
        middle = self.ranks[i]
        for row in outer:
            for column in range(self.ranks[i + 1]):
                if sum(row[m] * inner[m][column] for m in range(middle)):
                    return False
        return True


@dataclass(frozen=True)
class HomologyGroup:
    """Z^betti plus the cyclic torsion groups Z_d, d1 | d2 | ..."""

    betti: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.betti < 0 or any(d <= 1 for d in self.torsion):
            raise InternalConsistencyError(f"Invalid homology group data {self.betti}, {self.torsion}")
        for first, second in zip(self.torsion, self.torsion[1:]):
            if second % first:
                raise InternalConsistencyError(f"Torsion {self.torsion} breaks the divisibility chain")

    def __str__(self) -> str:
        parts = []
        if self.betti == 1:
            parts.append("Z")
        elif self.betti > 1:
            parts.append(f"Z^{self.betti}")
        parts.extend(f"Z_{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict[str, Any]:
        return {"betti": self.betti, "torsion": list(self.torsion), "group": str(self)}


def homology(complex_: ChainComplex, coefficients: str = COEFF_Z) -> list[HomologyGroup]:
    """Homology groups H_0 .. H_n.

    betti_i = r_i - rank d_i - rank d_{i+1}; integer torsion in degree i
    consists of the invariant factors of d_{i+1} above 1. Rational
    coefficients drop the torsion.
    """
    if coefficients not in COEFFICIENTS:
        raise ConfigurationError(f"Unknown coefficients '{coefficients}', expected one of {COEFFICIENTS}")
    n = complex_.dimension
    ranks = [0] * (n + 2)
    torsion: list[tuple[int, ...]] = [()] * (n + 2)
    for i in range(1, n + 1):
        if coefficients == COEFF_Z:
            snf = smith_normal_form(complex_.boundary(i))
            ranks[i] = snf.rank
            torsion[i] = snf.torsion
        else:
            ranks[i] = rational_rank(complex_.boundary(i), complex_.shape(i))
    groups = [
        HomologyGroup(complex_.ranks[i] - ranks[i] - ranks[i + 1], torsion[i + 1])
        for i in range(n + 1)
    ]
    _LOGGER.debug("Homology over %s: %s", coefficients, [str(group) for group in groups])
    return groups


def rational_betti(complex_: ChainComplex) -> tuple[int, ...]:
    return tuple(group.betti for group in homology(complex_, COEFF_Q))


def is_rhs_betti(betti: Sequence[int]) -> bool:
    """Betti vector (1, 0, ..., 0, 1)."""
    betti = tuple(betti)
    return len(betti) >= 2 and betti == (1,) + (0,) * (len(betti) - 2) + (1,)


def is_rational_homology_sphere(complex_: ChainComplex) -> tuple[bool, tuple[int, ...]]:
    """Whether the rational Betti numbers are those of a sphere.

    Returns:
        (answer, betti witness)
    """
    if complex_.dimension < 1 or complex_.ranks[-1] == 0:
        raise ConfigurationError(
            f"Need a complex of dimension >= 1 with top cells, got ranks {complex_.ranks}"
        )
    betti = rational_betti(complex_)
    return is_rhs_betti(betti), betti


def euler_characteristic(complex_: ChainComplex) -> tuple[int, int]:
    """Alternating sums of cell counts and of Betti numbers.

    Raises:
        InternalConsistencyError: If the two sums differ
    """
    by_cells = sum((-1) ** i * rank for i, rank in enumerate(complex_.ranks))
    by_betti = sum((-1) ** i * b for i, b in enumerate(rational_betti(complex_)))
    if by_cells != by_betti:
        raise InternalConsistencyError(f"Euler characteristic {by_cells} from cells, {by_betti} from homology")
    return by_cells, by_betti


def covering_chi_check(base: ChainComplex, cover: ChainComplex, sheets: int) -> bool:
    """chi(cover) == sheets * chi(base)."""
    if sheets < 1:
        raise ConfigurationError(f"Sheet count must be positive, got {sheets}")
    return euler_characteristic(cover)[0] == sheets * euler_characteristic(base)[0]


# =============================================================================
# Builders
# =============================================================================

def _one_cell_per_dimension(dim: int, even_entry: int) -> ChainComplex:
    boundaries = [((even_entry if i % 2 == 0 else 0,),) for i in range(1, dim + 1)]
    return ChainComplex((1,) * (dim + 1), tuple(boundaries))


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigurationError(message)


def sphere_complex(n: int) -> ChainComplex:
    """One 0-cell and one n-cell."""
    _require(n >= 1, f"Sphere dimension must be >= 1, got {n}")
    ranks = (1,) + (0,) * (n - 1) + (1,)
    return ChainComplex.from_matrices(ranks, [[[0] * ranks[i] for _ in range(ranks[i - 1])] for i in range(1, n + 1)])


def lens_complex(m: int, dim: int = 3) -> ChainComplex:
    """L_m(1, ..., 1): one cell per dimension, d = (m) in even degrees and (0) in odd ones."""
    _require(m >= 2, f"Lens order must be >= 2, got {m}")
    _require(dim >= 1 and dim % 2 == 1, f"Lens dimension must be odd, got {dim}")
    return _one_cell_per_dimension(dim, m)


def rp_complex(n: int) -> ChainComplex:
    """RP^n: one cell per dimension, d alternating (0) and (2)."""
    _require(n >= 1, f"Projective dimension must be >= 1, got {n}")
    return _one_cell_per_dimension(n, 2)


def cpn_complex(n: int) -> ChainComplex:
    """CP^n for n in {1, 2}: cells in even dimensions only."""
    _require(n in (1, 2), f"Complex projective dimension must be 1 or 2, got {n}")
    ranks = tuple(1 if i % 2 == 0 else 0 for i in range(2 * n + 1))
    return ChainComplex.from_matrices(ranks, [[[0] * ranks[i] for _ in range(ranks[i - 1])] for i in range(1, 2 * n + 1)])


def circle_complex() -> ChainComplex:
    return sphere_complex(1)


def torus2_complex() -> ChainComplex:
    """The square with opposite sides identified: ranks (1, 2, 1), zero boundaries."""
    return ChainComplex.from_matrices((1, 2, 1), [[[0, 0]], [[0], [0]]])


def product_complex(first: ChainComplex, second: ChainComplex) -> ChainComplex:
    """Cellular product with d(a x b) = da x b + (-1)^|a| a x db."""
    n = first.dimension + second.dimension
    index: list[dict[tuple[int, int, int], int]] = []
    for k in range(n + 1):
        positions: dict[tuple[int, int, int], int] = {}
        for i in range(max(0, k - second.dimension), min(k, first.dimension) + 1):
            for a in range(first.ranks[i]):
                for b in range(second.ranks[k - i]):
                    positions[(i, a, b)] = len(positions)
        index.append(positions)
    ranks = [len(positions) for positions in index]

    boundaries = []
    for k in range(1, n + 1):
        matrix = [[0] * ranks[k] for _ in range(ranks[k - 1])]
        for (i, a, b), column in index[k].items():
            j = k - i
            if i > 0:
                d_first = first.boundary(i)
                for lower in range(first.ranks[i - 1]):
                    if d_first[lower][a]:
                        matrix[index[k - 1][(i - 1, lower, b)]][column] += d_first[lower][a]
            if j > 0:
                d_second = second.boundary(j)
                sign = -1 if i % 2 else 1
                for lower in range(second.ranks[j - 1]):
                    if d_second[lower][b]:
                        matrix[index[k - 1][(i, a, lower)]][column] += sign * d_second[lower][b]
        boundaries.append(matrix)
    return ChainComplex.from_matrices(ranks, boundaries)


def torus_complex(d: int) -> ChainComplex:
    """T^d as the product of d circles."""
    _require(d >= 1, f"Torus dimension must be >= 1, got {d}")
    complex_ = circle_complex()
    for _ in range(d - 1):
        complex_ = product_complex(complex_, circle_complex())
    return complex_


# Builder name -> (function, {parameter: default or None if required})
BUILDERS: dict[str, tuple[Callable[..., ChainComplex], dict[str, int | None]]] = {
    "sphere": (sphere_complex, {"n": None}),
    "lens": (lens_complex, {"m": None, "dim": 3}),
    "rp": (rp_complex, {"n": None}),
    "cp": (cpn_complex, {"n": None}),
    "circle": (circle_complex, {}),
    "torus2": (torus2_complex, {}),
    "torus": (torus_complex, {"d": None}),
}


def build_complex(builder: str, **params: int) -> ChainComplex:
    """Build a complex from a BUILDERS name and integer parameters."""
    if builder not in BUILDERS:
        raise ConfigurationError(f"Unknown complex builder '{builder}', expected one of {sorted(BUILDERS)}")
    function, signature = BUILDERS[builder]
    unknown = set(params) - set(signature)
    if unknown:
        raise ConfigurationError(f"Builder '{builder}' has no parameters {sorted(unknown)}")
    arguments = {}
    for name, default in signature.items():
        if name in params:
            arguments[name] = int(params[name])
        elif default is None:
            raise ConfigurationError(f"Builder '{builder}' needs parameter '{name}'")
        else:
            arguments[name] = default
    return function(**arguments)


# =============================================================================
# JSON
# =============================================================================

COMPLEX_SCHEMA = vol.Schema(
    {
        vol.Required("ranks"): [vol.All(int, vol.Range(min=0))],
        vol.Required("boundaries"): [[int]],
    },
    extra=vol.ALLOW_EXTRA,
)


def complex_to_json(complex_: ChainComplex) -> dict[str, Any]:
    """{ranks, boundaries} with every boundary flattened row-major."""
    return {
        "ranks": list(complex_.ranks),
        "boundaries": [[entry for row in matrix for entry in row] for matrix in complex_.boundaries],
    }


def complex_from_json(data: dict[str, Any]) -> ChainComplex:
    """Inverse of complex_to_json.

    Raises:
        ConfigurationError: Malformed document or flat length not r_{i-1} * r_i
        ChainComplexError: d o d != 0
    """
    try:
        data = COMPLEX_SCHEMA(data)
    except vol.Invalid as err:
        raise ConfigurationError(f"Invalid chain complex document: {err}") from err
    ranks = data["ranks"]
    if len(data["boundaries"]) != len(ranks) - 1:
        raise ConfigurationError(f"Expected {len(ranks) - 1} boundary maps, got {len(data['boundaries'])}")
    matrices = []
    for i, flat in enumerate(data["boundaries"], start=1):
        height, width = ranks[i - 1], ranks[i]
        if len(flat) != height * width:
            raise ConfigurationError(f"Boundary d_{i} needs {height * width} entries, got {len(flat)}")
        matrices.append([flat[row * width:(row + 1) * width] for row in range(height)])
    return ChainComplex.from_matrices(ranks, matrices)
