"""Configuration: descriptor parsing, voluptuous schemas and ExperimentConfig.

All user input enters here. Descriptors have the form
``head:key=value,key=value``:

- Young functions: ``power:p=1.5``, ``powlog:n=2,a=1``, ``table:path=P.csv``
  or a bare exponent ``2``
- meshes: ``s2:256x512``, ``s3:64``, ``t2:192,focus=0.01``
- maps: ``bubble:k=8``, ``collapse:rho=0.25``, compositions joined by ``|``
  (``compose:power:d=2|bubble:k=4|collapse``)
- spaces: ``lens:m=5,dim=3``, ``torus:d=3``, ``file:complex.json`` or a
  catalog name
"""
from __future__ import annotations

import csv
import json
import logging
import math
import os
import re
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Mapping

import voluptuous as vol

from .catalog import Catalog
from .const import (
    COEFF_Z,
    COEFFICIENTS,
    DEFAULT_COLLAPSE_RADIUS,
    ENV_THREADS,
    FAMILIES,
    FOCUS_WIDTH_FACTOR,
    FORMAT_CSV,
    MAP_BUBBLE,
    MAP_COLLAPSE,
    MAP_COMPOSE,
    MAP_CONSTANT,
    MAP_IDENTITY,
    MAP_POWER,
    MAP_VARIANTS,
    MESH_KINDS,
    MESH_S2,
    METHOD_JACOBIAN,
    DEGREE_METHODS,
    OUTPUT_FORMATS,
    PREDICATE_DEGREE,
    PREDICATE_KEYS,
    BUBBLE_CELLS_PER_K,
    SOBOLEV_SPACES,
    SPACE_H,
    SPHERE_KINDS,
    SUBCOMMANDS,
    VERSION,
    YOUNG_FAMILIES,
    YOUNG_POWER,
    YOUNG_POWLOG,
    YOUNG_TABLE,
)
from .energy import ExperimentFamily
from .exceptions import ConfigurationError
from .homology import BUILDERS, ChainComplex, build_complex, complex_from_json
from .map_families import Bubble, Collapse, Constant, Identity, MapExpr, PowerMap, compose
from .mesh import ManifoldMesh, build_mesh
from .young_functions import Power, PowerOverLogPower, Tabulated, YoungFunction

_LOGGER = logging.getLogger(__name__)


# =============================================================================
# Descriptor splitting
# =============================================================================

def split_descriptor(text: str) -> tuple[str, list[str], dict[str, str]]:
    """Split ``head:a,b=1,c=2`` into (head, positional, keyword).

    Raises:
        ConfigurationError: Empty descriptor or repeated key
    """
    if not isinstance(text, str) or not text.strip():
        raise ConfigurationError(f"Empty descriptor {text!r}")
    head, _, rest = text.strip().partition(":")
    positional: list[str] = []
    keyword: dict[str, str] = {}
    for part in filter(None, (item.strip() for item in rest.split(","))):
        if "=" in part:
            key, _, value = part.partition("=")
            key = key.strip()
            if key in keyword:
                raise ConfigurationError(f"Key '{key}' repeated in descriptor '{text}'")
            keyword[key] = value.strip()
        else:
            positional.append(part)
    return head.strip().lower(), positional, keyword


def _validated(schema: vol.Schema, params: Mapping[str, Any], text: str) -> dict[str, Any]:
    try:
        return schema(dict(params))
    except vol.Invalid as err:
        raise ConfigurationError(f"Invalid descriptor '{text}': {err}") from err


def _point(value: str) -> tuple[float, ...]:
    return tuple(float(part) for part in value.split(";"))


def _value_point(value: str) -> tuple[float, ...]:
    """Command-line point, comma separated; ";" is accepted as in descriptors."""
    return tuple(float(part) for part in re.split(r"[,;]", value))


_PositiveInt = vol.All(vol.Coerce(int), vol.Range(min=1))


# =============================================================================
# Young functions
# =============================================================================

YOUNG_SCHEMAS = {
    YOUNG_POWER: vol.Schema({vol.Required("p"): vol.Coerce(float)}),
    YOUNG_POWLOG: vol.Schema({
        vol.Required("n"): vol.Coerce(float),
        vol.Optional("a", default=1.0): vol.Coerce(float),
    }),
    YOUNG_TABLE: vol.Schema({vol.Required("path"): vol.All(str, vol.Length(min=1))}),
}


def load_table(path: str | Path) -> Tabulated:
    """Read a Tabulated Young function from a CSV of (t, P(t)) rows.

    Lines that do not parse as two numbers (headers, comments) are skipped.

    Raises:
        ConfigurationError: Unreadable file
        YoungFunctionError: Invalid table
    """
    path = Path(path)
    t_values: list[float] = []
    p_values: list[float] = []
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            for row in csv.reader(handle):
                if len(row) < 2 or row[0].lstrip().startswith("#"):
                    continue
                try:
                    t, p = float(row[0]), float(row[1])
                except ValueError:
                    continue
                t_values.append(t)
                p_values.append(p)
    except OSError as err:
        raise ConfigurationError(f"Cannot read table '{path}': {err}") from err
    _LOGGER.debug("Read %d rows from %s", len(t_values), path)
    return Tabulated.from_arrays(t_values, p_values, source=path.name)


def parse_young(text: str) -> YoungFunction:
    """Young function from a descriptor; a bare number is a power exponent.

    Example:
        >>> parse_young("powlog:n=2,a=1").description
        't^2/log^1(e+t)'
    """
    try:
        return Power(float(text))
    except (TypeError, ValueError):
        pass
    head, positional, params = split_descriptor(text)
    if head not in YOUNG_FAMILIES:
        raise ConfigurationError(f"Unknown Young function '{head}', expected one of {sorted(YOUNG_FAMILIES)}")
    if head == YOUNG_TABLE and positional and "path" not in params:
        params["path"] = positional[0]
    elif positional:
        raise ConfigurationError(f"Unexpected values {positional} in '{text}'")
    values = _validated(YOUNG_SCHEMAS[head], params, text)
    if head == YOUNG_POWER:
        return Power(values["p"])
    if head == YOUNG_POWLOG:
        return PowerOverLogPower(values["n"], values["a"])
    return load_table(values["path"])


# =============================================================================
# Meshes
# =============================================================================

MESH_SCHEMA = vol.Schema({
    vol.Optional("focus"): vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False)),
    vol.Optional("center"): vol.All(str, _point, vol.Length(min=2, max=2)),
})


def parse_mesh(text: str) -> ManifoldMesh:
    """Mesh from ``kind[:N1xN2...][,focus=w][,center=x;y]``."""
    head, positional, params = split_descriptor(text)
    if head not in MESH_KINDS:
        raise ConfigurationError(f"Unknown mesh kind '{head}', expected one of {sorted(MESH_KINDS)}")
    if len(positional) > 1:
        raise ConfigurationError(f"Mesh descriptor '{text}' has more than one resolution")
    values = _validated(MESH_SCHEMA, params, text)
    resolution: int | tuple[int, ...] | None = None
    if positional:
        try:
            counts = tuple(int(part) for part in positional[0].lower().split("x"))
        except ValueError as err:
            raise ConfigurationError(f"Invalid resolution '{positional[0]}' in '{text}'") from err
        resolution = counts[0] if len(counts) == 1 else counts
    return build_mesh(head, resolution, focus=values.get("focus"), center=values.get("center", (0.5, 0.5)))


# =============================================================================
# Maps
# =============================================================================

_Kind = vol.In(tuple(MESH_KINDS))

MAP_SCHEMAS = {
    MAP_BUBBLE: vol.Schema({vol.Required("k"): _PositiveInt, vol.Optional("on", default=MESH_S2): vol.In(SPHERE_KINDS)}),
    MAP_POWER: vol.Schema({vol.Required("d"): vol.Coerce(int)}),
    MAP_COLLAPSE: vol.Schema({
        vol.Optional("rho", default=DEFAULT_COLLAPSE_RADIUS): vol.Coerce(float),
        vol.Optional("cx", default=0.5): vol.Coerce(float),
        vol.Optional("cy", default=0.5): vol.Coerce(float),
    }),
    MAP_IDENTITY: vol.Schema({vol.Optional("on", default=MESH_S2): _Kind}),
    MAP_CONSTANT: vol.Schema({
        vol.Optional("on", default=MESH_S2): _Kind,
        vol.Optional("to", default=MESH_S2): _Kind,
        vol.Optional("point"): vol.All(str, _point),
    }),
}


def _parse_single_map(text: str) -> MapExpr:
    head, positional, params = split_descriptor(text)
    if head not in MAP_SCHEMAS:
        raise ConfigurationError(f"Unknown map '{head}', expected one of {sorted(MAP_VARIANTS)}")
    if positional:
        raise ConfigurationError(f"Unexpected values {positional} in map '{text}'")
    values = _validated(MAP_SCHEMAS[head], params, text)
    if head == MAP_BUBBLE:
        return Bubble(values["k"], values["on"])
    if head == MAP_POWER:
        return PowerMap(values["d"])
    if head == MAP_COLLAPSE:
        return Collapse((values["cx"], values["cy"]), values["rho"])
    if head == MAP_IDENTITY:
        return Identity(values["on"])
    if "point" in values:
        return Constant(values["on"], values["to"], values["point"])
    return Constant(values["on"], values["to"])


def parse_map(text: str) -> MapExpr:
    """Map from a descriptor; ``|`` separates factors applied right-to-left."""
    if not isinstance(text, str) or not text.strip():
        raise ConfigurationError(f"Empty map descriptor {text!r}")
    body = text.strip()
    prefix = f"{MAP_COMPOSE}:"
    if body.lower().startswith(prefix):
        body = body[len(prefix):]
    parts = [part.strip() for part in body.split("|")]
    if any(not part for part in parts):
        raise ConfigurationError(f"Empty factor in map descriptor '{text}'")
    return compose([_parse_single_map(part) for part in parts])


# =============================================================================
# Spaces
# =============================================================================

def parse_space(text: str, catalog: Catalog | None = None) -> ChainComplex:
    """Chain complex from a builder descriptor, a JSON file or a catalog name.

    Raises:
        ConfigurationError: Unknown space, or a catalog entry with recorded homology only
    """
    if catalog is not None and isinstance(text, str) and text.strip() in catalog:
        entry = catalog.resolve(text)
        if entry.complex is None:
            raise ConfigurationError(f"Catalog entry '{entry.name}' records its homology without a chain complex")
        return entry.complex
    head, positional, params = split_descriptor(text)
    if head == "file":
        location = params.get("path") or (positional[0] if positional else "")
        try:
            document = json.loads(Path(location).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigurationError(f"Cannot read chain complex '{location}': {err}") from err
        return complex_from_json(document)
    if head not in BUILDERS:
        raise ConfigurationError(f"Unknown space '{head}', expected one of {sorted(BUILDERS)} or file:<path>")
    if positional:
        raise ConfigurationError(f"Unexpected values {positional} in space '{text}'")
    schema = vol.Schema({vol.Optional(key): vol.Coerce(int) for key in BUILDERS[head][1]})
    return build_complex(head, **_validated(schema, params, text))


# =============================================================================
# Experiment families
# =============================================================================

def family_instance(name: str, k: int) -> tuple[MapExpr, ManifoldMesh]:
    """Map and resolution-rule mesh of a registered family at order k."""
    if name not in FAMILIES:
        raise ConfigurationError(f"Unknown family '{name}', expected one of {sorted(FAMILIES)}")
    info = FAMILIES[name]
    map_expr = parse_map(info["map"].format(k=k))
    rho = next((f.rho for f in map_expr.factors() if isinstance(f, Collapse)), DEFAULT_COLLAPSE_RADIUS)
    focus = FOCUS_WIDTH_FACTOR * rho / (math.pi * k)
    mesh = parse_mesh(info["mesh"].format(n_theta=BUBBLE_CELLS_PER_K * k, focus=f"{focus:.10g}"))
    return map_expr, mesh


def parse_family(name: str) -> ExperimentFamily:
    if name not in FAMILIES:
        raise ConfigurationError(f"Unknown family '{name}', expected one of {sorted(FAMILIES)}")
    info = FAMILIES[name]
    kind = split_descriptor(info["mesh"])[0]
    return ExperimentFamily(
        name=name,
        dimension=info["dimension"],
        build=lambda k: family_instance(name, k),
        cap_on_sphere=kind in SPHERE_KINDS,
    )


def parse_k_list(value: Any) -> tuple[int, ...]:
    """``4,8,16`` or a sequence of integers."""
    if isinstance(value, str):
        items = [item.strip() for item in value.split(",") if item.strip()]
    else:
        items = list(value)
    try:
        ks = tuple(int(item) for item in items)
    except (TypeError, ValueError) as err:
        raise vol.Invalid(f"invalid k list {value!r}") from err
    if ks and min(ks) < 1:
        raise vol.Invalid(f"k values must be positive integers, got {value!r}")
    return ks


# =============================================================================
# Experiment configuration
# =============================================================================

CONFIG_SCHEMA = vol.Schema(
    {
        vol.Required("subcommand"): vol.In(SUBCOMMANDS),
        vol.Optional("young"): vol.Any(None, str),
        vol.Optional("n"): vol.Any(None, vol.All(vol.Coerce(int), vol.Range(min=1))),
        vol.Optional("map"): vol.Any(None, str),
        vol.Optional("mesh"): vol.Any(None, str),
        vol.Optional("method", default=METHOD_JACOBIAN): vol.In(DEGREE_METHODS),
        vol.Optional("value"): vol.Any(None, vol.All(str, _value_point)),
        vol.Optional("fd_check", default=0): vol.All(vol.Coerce(int), vol.Range(min=0)),
        vol.Optional("family"): vol.Any(None, vol.In(tuple(FAMILIES))),
        vol.Optional("gauge"): vol.Any(None, str),
        vol.Optional("k_list", default=()): parse_k_list,
        vol.Optional("space"): vol.Any(None, str),
        vol.Optional("coefficients", default=COEFF_Z): vol.In(COEFFICIENTS),
        vol.Optional("target"): vol.Any(None, str),
        vol.Optional("predicate", default=PREDICATE_DEGREE): vol.In(PREDICATE_KEYS),
        vol.Optional("p"): vol.Any(None, vol.Coerce(float)),
        vol.Optional("sobolev_space", default=SPACE_H): vol.In(SOBOLEV_SPACES),
        vol.Optional("domain"): vol.Any(None, str),
        vol.Optional("catalog"): vol.Any(None, str),
        vol.Optional("out"): vol.Any(None, str),
        vol.Optional("format", default=FORMAT_CSV): vol.In(OUTPUT_FORMATS),
        vol.Optional("seed", default=0): vol.All(vol.Coerce(int), vol.Range(min=0)),
        vol.Optional("threads", default=1): vol.All(vol.Coerce(int), vol.Range(min=1)),
    },
    extra=vol.REMOVE_EXTRA,
)

# Descriptor fields each subcommand cannot run without
REQUIRED_FIELDS = {
    "young-check": ("young",),
    "degree": ("map", "mesh"),
    "energy": ("family", "gauge", "k_list"),
    "paradox": ("family", "gauge", "k_list"),
    "homology": ("space",),
    "verdict": ("target",),
    "catalog-list": (),
    "mesh-dump": ("mesh", "out"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated configuration of one command-line run."""

    subcommand: str
    young: str | None = None
    n: int | None = None
    map: str | None = None
    mesh: str | None = None
    method: str = METHOD_JACOBIAN
    value: tuple[float, ...] | None = None
    fd_check: int = 0
    family: str | None = None
    gauge: str | None = None
    k_list: tuple[int, ...] = ()
    space: str | None = None
    coefficients: str = COEFF_Z
    target: str | None = None
    predicate: str = PREDICATE_DEGREE
    p: float | None = None
    sobolev_space: str = SPACE_H
    domain: str | None = None
    catalog: str | None = None
    out: str | None = None
    format: str = FORMAT_CSV
    seed: int = 0
    threads: int = 1

    def to_dict(self) -> dict[str, Any]:
        """Fields that are set, for the output headers and --dry-run.

        The worker cap is left out so output does not depend on the machine.
        """
        data = {key: value for key, value in asdict(self).items() if value not in (None, ())}
        data.pop("threads", None)
        for key in ("k_list", "value"):
            if key in data:
                data[key] = list(data[key])
        data["version"] = VERSION
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def threads_from_env(environ: Mapping[str, str] | None = None) -> int:
    """Worker cap from DEGREE_LAB_THREADS, defaulting to the CPU count.

    Raises:
        ConfigurationError: Value is not a positive integer
    """
    environ = os.environ if environ is None else environ
    raw = environ.get(ENV_THREADS)
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        threads = int(raw)
    except ValueError as err:
        raise ConfigurationError(f"{ENV_THREADS} must be a positive integer, got '{raw}'") from err
    if threads < 1:
        raise ConfigurationError(f"{ENV_THREADS} must be a positive integer, got '{raw}'")
    return threads


def build_config(raw: Mapping[str, Any], environ: Mapping[str, str] | None = None) -> ExperimentConfig:
    """Validate raw command-line values into an ExperimentConfig.

    Raises:
        vol.Invalid: Schema violation
        ConfigurationError: Missing descriptor for the subcommand or a bad environment
    """
    data = dict(raw)
    data["threads"] = threads_from_env(environ)
    values = CONFIG_SCHEMA({key: value for key, value in data.items() if value is not None})
    missing = [name for name in REQUIRED_FIELDS[values["subcommand"]] if not values.get(name)]
    if missing:
        raise ConfigurationError(f"Subcommand '{values['subcommand']}' needs {', '.join(missing)}")
    config = ExperimentConfig(**values)
    _LOGGER.debug("Configuration %s", config.to_json())
    return config

