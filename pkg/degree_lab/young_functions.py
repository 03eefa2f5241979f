"""Young functions, Orlicz means and the numeric growth checks.

A Young function P is convex, strictly increasing, with P(0) = 0. This module
represents the built-in families, evaluates them (also in log space, so the
asymptotic checks can reach t = 2^4096), and decides with explicit
diagnostics:

- divergence of the integral of P(t)/t^(n+1) over [1, infinity)
- P(t) = o(t^n)
- the doubling condition P(2t) <= K P(t)
- monotonicity of t^(-alpha) P(t)
- finiteness of the energy of the radial projection x/|x| on the unit ball

All functions are pure. Young function objects are immutable.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy import integrate, optimize

from .const import (
    CONVEXITY_RTOL,
    DEFAULT_SAMPLES,
    DIVERGENCE_LAST_WINDOW,
    DIVERGENCE_TAIL_START,
    DOUBLING_DEFAULT_RANGE,
    DOUBLING_K_MAX,
    GROWTH_ALPHA_OFFSETS,
    GROWTH_DEFAULT_RANGE,
    GROWTH_RTOL,
    LOG_EXPONENT_CONVERGES,
    LOG_EXPONENT_DIVERGES,
    LUXEMBURG_RTOL,
    RADIAL_FINITE,
    RADIAL_INFINITE,
    RADIAL_LAST_WINDOW,
    RATIO_CONVERGES,
    RATIO_DIVERGES,
    SMALL_O_J_MAX,
    SMALL_O_THRESHOLD,
    STANDARD_GRID_MAX,
    STANDARD_GRID_MIN,
    STANDARD_GRID_POINTS,
    STATUS_FAILS,
    STATUS_HOLDS,
    STATUS_INCONCLUSIVE,
    WINDOW_QUAD_EPSREL,
    WINDOW_QUAD_LIMIT,
)
from .exceptions import ConfigurationError, DomainError, EvaluationError, YoungFunctionError

_LOGGER = logging.getLogger(__name__)

LN2 = math.log(2.0)


# =============================================================================
# Result types
# =============================================================================

@dataclass(frozen=True)
class ConditionVerdict:
    """Outcome of one numeric condition check.

    Attributes:
        condition: Name of the checked condition
        status: Holds, Fails or Inconclusive
        witness: Numeric diagnostics (partial sums, violating point, estimates)
        parameters: Inputs the check actually used
        diagnostic: Human readable explanation, required for Inconclusive
    """

    condition: str
    status: str
    witness: dict[str, Any] = field(default_factory=dict)
    parameters: dict[str, Any] = field(default_factory=dict)
    diagnostic: str = ""

    def __post_init__(self) -> None:
        if self.status not in (STATUS_HOLDS, STATUS_FAILS, STATUS_INCONCLUSIVE):
            raise ValueError(f"Unknown verdict status '{self.status}'")
        if self.status == STATUS_INCONCLUSIVE and not self.diagnostic:
            raise ValueError("Inconclusive verdicts need a diagnostic")

    @property
    def holds(self) -> bool:
        return self.status == STATUS_HOLDS

    def to_dict(self) -> dict[str, Any]:
        return {
            "condition": self.condition,
            "status": self.status,
            "witness": self.witness,
            "parameters": self.parameters,
            "diagnostic": self.diagnostic,
        }


@dataclass(frozen=True)
class RadialEnergyResult:
    """Energy of x/|x| on the unit ball.

    Attributes:
        verdict: Finite, Infinite or Inconclusive
        value: Total energy when Finite, else None
        partials: Cumulative sums over the geometric windows toward r = 0
        witness: Classifier diagnostics on the tail windows
    """

    verdict: str
    value: float | None
    partials: list[float]
    witness: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "value": self.value,
            "partials": self.partials,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class IntegrationBudget:
    """Window counts and quadrature tolerances of the asymptotic checks."""

    last_window: int = DIVERGENCE_LAST_WINDOW
    tail_start: int = DIVERGENCE_TAIL_START
    radial_last_window: int = RADIAL_LAST_WINDOW
    j_max: int = SMALL_O_J_MAX
    epsrel: float = WINDOW_QUAD_EPSREL
    limit: int = WINDOW_QUAD_LIMIT

    def __post_init__(self) -> None:
        if not 0 < self.tail_start < self.last_window - 1:
            raise ConfigurationError(
                f"Tail start {self.tail_start} must lie inside the window range 0..{self.last_window}"
            )
        if self.radial_last_window < self.last_window:
            raise ConfigurationError("Radial windows must cover the divergence windows")
        if self.j_max < 16:
            raise ConfigurationError(f"j_max {self.j_max} too small for a tail test")


DEFAULT_BUDGET = IntegrationBudget()


# =============================================================================
# Young function families
# =============================================================================

class YoungFunction:
    """Base class of Young functions.

    Subclasses implement ``log_eval`` and may override ``_evaluate`` with a
    closed form. Invariants are validated at construction.
    """

    def log_eval(self, log_t: Any) -> np.ndarray:
        """Return log P(t) given log t."""
        raise NotImplementedError

    def _evaluate(self, t: np.ndarray) -> np.ndarray:
        """Evaluate P at strictly positive t."""
        return np.exp(self.log_eval(np.log(t)))

    @property
    def description(self) -> str:
        raise NotImplementedError

    def extrapolates(self, t_min: float, t_max: float) -> bool:
        """Whether evaluation on [t_min, t_max] leaves the defining data."""
        return False

    def __call__(self, t: Any) -> Any:
        return eval_young(self, t)

    def _validate(self) -> None:
        validate_young(self)


@dataclass(frozen=True)
class Power(YoungFunction):
    """P(t) = t^p with p >= 1."""

    p: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.p) and self.p >= 1.0):
            raise YoungFunctionError(f"Power exponent must be finite and >= 1, got {self.p}")
        self._validate()

    def log_eval(self, log_t: Any) -> np.ndarray:
        return self.p * np.asarray(log_t, dtype=float)

    def _evaluate(self, t: np.ndarray) -> np.ndarray:
        return t ** self.p

    @property
    def description(self) -> str:
        return f"t^{self.p:g}"


@dataclass(frozen=True)
class PowerOverLogPower(YoungFunction):
    """P(t) = t^n / log^a(e + t)."""

    n: float
    a: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.n) and self.n >= 1.0):
            raise YoungFunctionError(f"Power n must be finite and >= 1, got {self.n}")
        if not (math.isfinite(self.a) and self.a >= 0.0):
            raise YoungFunctionError(f"Log power a must be finite and >= 0, got {self.a}")
        self._validate()

    def log_eval(self, log_t: Any) -> np.ndarray:
        log_t = np.asarray(log_t, dtype=float)
        # log(e + t) = logaddexp(1, log t), exact for huge t
        return self.n * log_t - self.a * np.log(np.logaddexp(1.0, log_t))

    def _evaluate(self, t: np.ndarray) -> np.ndarray:
        return t ** self.n / np.log(math.e + t) ** self.a

    @property
    def description(self) -> str:
        return f"t^{self.n:g}/log^{self.a:g}(e+t)"


@dataclass(frozen=True)
class Tabulated(YoungFunction):
    """Young function given by a monotone sample table.

    Interpolates linearly in (log t, log P) and extrapolates with the end
    slopes on both sides. A leading (0, 0) row is accepted and dropped.
    """

    t_values: tuple[float, ...]
    p_values: tuple[float, ...]
    source: str = ""
    _log_t: np.ndarray = field(init=False, repr=False, compare=False)
    _log_p: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        t = np.asarray(self.t_values, dtype=float)
        p = np.asarray(self.p_values, dtype=float)
        if t.shape != p.shape or t.ndim != 1:
            raise YoungFunctionError("Table columns must be one-dimensional and of equal length")
        if t.size and t[0] == 0.0:
            if p[0] != 0.0:
                raise YoungFunctionError(f"Table requires P(0) = 0, got {p[0]}")
            t, p = t[1:], p[1:]
        if t.size < 2:
            raise YoungFunctionError("Table needs at least two rows with t > 0")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(p))):
            raise YoungFunctionError("Table contains non-finite values")
        if np.any(t <= 0) or np.any(p <= 0):
            raise YoungFunctionError("Table values must be positive for t > 0")
        if np.any(np.diff(t) <= 0) or np.any(np.diff(p) <= 0):
            raise YoungFunctionError("Table must be strictly increasing in both columns")
        object.__setattr__(self, "_log_t", np.log(t))
        object.__setattr__(self, "_log_p", np.log(p))
        self._validate()

    @classmethod
    def from_arrays(cls, t: Any, p: Any, source: str = "") -> Tabulated:
        return cls(tuple(float(x) for x in t), tuple(float(x) for x in p), source)

    def log_eval(self, log_t: Any) -> np.ndarray:
        x = np.asarray(log_t, dtype=float)
        lt, lp = self._log_t, self._log_p
        low_slope = (lp[1] - lp[0]) / (lt[1] - lt[0])
        high_slope = (lp[-1] - lp[-2]) / (lt[-1] - lt[-2])
        inside = np.interp(x, lt, lp)
        below = lp[0] + low_slope * (x - lt[0])
        above = lp[-1] + high_slope * (x - lt[-1])
        return np.where(x < lt[0], below, np.where(x > lt[-1], above, inside))

    def extrapolates(self, t_min: float, t_max: float) -> bool:
        return bool(math.log(t_min) < self._log_t[0] or math.log(t_max) > self._log_t[-1])

    @property
    def description(self) -> str:
        return f"table:{self.source}" if self.source else f"table[{len(self._log_t)} rows]"


# =============================================================================
# Evaluation and validation
# =============================================================================

def eval_young(P: YoungFunction, t: Any) -> Any:
    """Evaluate a Young function.

    Args:
        P: The Young function
        t: Nonnegative scalar or array

    Returns:
        P(t) with the shape of t (a float for scalar input)

    Raises:
        DomainError: If any t is negative or NaN
        EvaluationError: If P(t) is not finite

    Example:
        >>> eval_young(Power(3), 2.0)
        8.0
    """
    scalar = np.ndim(t) == 0
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        bad = int(np.flatnonzero(np.isnan(arr) | (arr < 0))[0])
        raise DomainError(f"Young function argument must be >= 0, got {arr.flat[bad]} at index {bad}")
    out = np.zeros_like(arr)
    positive = arr > 0
    if np.any(positive):
        out[positive] = P._evaluate(arr[positive])
    if not np.all(np.isfinite(out)):
        bad = int(np.flatnonzero(~np.isfinite(out))[0])
        raise EvaluationError(f"{P.description} is not finite at t={arr.flat[bad]}", index=bad)
    return float(out[0]) if scalar else out


def standard_grid() -> np.ndarray:
    """Return the validation grid: 0 followed by a geometric grid over [1e-6, 1e6]."""
    return np.concatenate(([0.0], np.geomspace(STANDARD_GRID_MIN, STANDARD_GRID_MAX, STANDARD_GRID_POINTS)))


def validate_young(P: YoungFunction) -> None:
    """Check P(0)=0, strict monotonicity and midpoint convexity on the standard grid.

    Raises:
        YoungFunctionError: On the first violated invariant
    """
    grid = standard_grid()
    try:
        values = eval_young(P, grid)
    except EvaluationError as err:
        raise YoungFunctionError(f"{P.description} cannot be evaluated on the standard grid: {err}") from err
    if values[0] != 0.0:
        raise YoungFunctionError(f"{P.description} has P(0) = {values[0]}")
    steps = np.diff(values)
    if np.any(steps <= 0):
        bad = int(np.flatnonzero(steps <= 0)[0])
        raise YoungFunctionError(
            f"{P.description} is not strictly increasing between t={grid[bad]:g} and t={grid[bad + 1]:g}"
        )
    i, j = np.triu_indices(grid.size, k=1)
    midpoint = eval_young(P, 0.5 * (grid[i] + grid[j]))
    chord = 0.5 * (values[i] + values[j])
    violated = midpoint > chord * (1.0 + CONVEXITY_RTOL)
    if np.any(violated):
        bad = int(np.flatnonzero(violated)[0])
        raise YoungFunctionError(
            f"{P.description} violates midpoint convexity for s={grid[i[bad]]:g}, t={grid[j[bad]]:g}"
        )


def _checked_log(P: YoungFunction, log_t: np.ndarray) -> np.ndarray:
    values = np.asarray(P.log_eval(log_t), dtype=float)
    if np.any(np.isnan(values)) or np.any(values == np.inf):
        bad = int(np.flatnonzero(np.isnan(values) | (values == np.inf))[0])
        raise EvaluationError(
            f"{P.description} has non-finite log value at log t={np.ravel(log_t)[bad]:g}", index=bad
        )
    return values


# =============================================================================
# Window integrals and the divergence classifier
# =============================================================================

def _window_integral(log_integrand: Any, start: float, budget: IntegrationBudget) -> float:
    """Integrate exp(log_integrand(start + s)) over s in [0, ln 2]."""

    def integrand(s: float) -> float:
        return math.exp(float(log_integrand(start + s)))

    value, _ = integrate.quad(integrand, 0.0, LN2, epsabs=0.0, epsrel=budget.epsrel, limit=budget.limit)
    if not math.isfinite(value):
        raise EvaluationError(f"Window integral starting at log t={start:g} is not finite")
    return value


def classify_windows(
    windows: np.ndarray, positions: np.ndarray, tail_start: int
) -> tuple[str, dict[str, Any], str]:
    """Classify a sequence of positive window integrals as divergent or convergent.

    The ratio test runs first. If it is inconclusive, the windows are compared
    with the power law I_j ~ x_j^(-beta), where x_j is the log2 position of
    window j: the series diverges for beta <= 1 and converges for beta > 1.

    Args:
        windows: Window integrals I_0..I_J
        positions: Positive log2 positions x_j of the windows
        tail_start: First window index of the tail

    Returns:
        (outcome, witness, diagnostic) with outcome "diverges", "converges"
        or "inconclusive"
    """
    tail = np.asarray(windows[tail_start:], dtype=float)
    witness: dict[str, Any] = {"tail_start": tail_start}
    if np.any(tail <= 0):
        return "inconclusive", witness, "tail window integral underflowed to zero"
    ratios = tail[1:] / tail[:-1]
    witness["ratios"] = ratios.tolist()
    if np.all(ratios >= RATIO_DIVERGES):
        witness["rule"] = "ratio"
        return "diverges", witness, ""
    if np.all(ratios <= RATIO_CONVERGES):
        witness["rule"] = "ratio"
        return "converges", witness, ""

    x = np.asarray(positions[tail_start:], dtype=float)
    exponents = np.log(tail[:-1] / tail[1:]) / np.log(x[1:] / x[:-1])
    witness["exponents"] = exponents.tolist()
    witness["rule"] = "log-exponent"
    if np.all(exponents <= LOG_EXPONENT_DIVERGES):
        return "diverges", witness, ""
    if np.all(exponents >= LOG_EXPONENT_CONVERGES):
        return "converges", witness, ""
    diagnostic = (
        f"tail ratios in [{ratios.min():.4f}, {ratios.max():.4f}] and log exponents in "
        f"[{exponents.min():.3f}, {exponents.max():.3f}] fall between the divergence bound "
        f"{LOG_EXPONENT_DIVERGES} and the convergence bound {LOG_EXPONENT_CONVERGES}"
    )
    return "inconclusive", witness, diagnostic


def divergence_windows(P: YoungFunction, n: int, budget: IntegrationBudget = DEFAULT_BUDGET) -> np.ndarray:
    """Integrals of P(t)/t^(n+1) over [2^j, 2^(j+1)], j = 0..last_window."""

    def log_integrand(log_t: float) -> float:
        # dt = t ds, so the integrand in s is P(t) t^-n
        return float(_checked_log(P, np.asarray(log_t))) - n * log_t

    return np.array([
        _window_integral(log_integrand, j * LN2, budget) for j in range(budget.last_window + 1)
    ])


def check_divergence(P: YoungFunction, n: int, budget: IntegrationBudget = DEFAULT_BUDGET) -> ConditionVerdict:
    """Decide whether the integral of P(t)/t^(n+1) over [1, infinity) diverges.

    Holds means the integral diverges.

    Args:
        P: The Young function
        n: Dimension, n >= 2
        budget: Window counts and quadrature tolerances

    Returns:
        ConditionVerdict with the partial sums as witness

    Raises:
        ConfigurationError: If n < 2
        EvaluationError: If P is not finite on a window
    """
    _require_dimension(n)
    windows = divergence_windows(P, n, budget)
    positions = np.arange(windows.size) + 0.5
    outcome, witness, diagnostic = classify_windows(windows, positions, budget.tail_start)
    witness["windows"] = windows.tolist()
    witness["partial_sums"] = np.cumsum(windows).tolist()
    status = {"diverges": STATUS_HOLDS, "converges": STATUS_FAILS}.get(outcome, STATUS_INCONCLUSIVE)
    _LOGGER.debug("Divergence check for %s, n=%s: %s (%s)", P.description, n, outcome, witness.get("rule"))
    return ConditionVerdict(
        condition="divergence",
        status=status,
        witness=witness,
        parameters={"n": n, "last_window": budget.last_window, "tail_start": budget.tail_start,
                    "extrapolated": P.extrapolates(1.0, 2.0 ** (budget.last_window + 1))},
        diagnostic=diagnostic,
    )


# =============================================================================
# Growth conditions
# =============================================================================

def check_small_o(P: YoungFunction, n: int, budget: IntegrationBudget = DEFAULT_BUDGET) -> ConditionVerdict:
    """Decide whether P(t) = o(t^n) from P(2^j)/2^(jn), j = 0..j_max.

    Holds if the ratio is strictly decreasing over the second half of the
    grid and ends below 1e-3 of its maximum. Fails if it is non-decreasing
    there.
    """
    _require_dimension(n)
    log_t = np.arange(budget.j_max + 1) * LN2
    log_ratio = _checked_log(P, log_t) - n * log_t
    tail = log_ratio[budget.j_max // 2:]
    steps = np.diff(tail)
    peak = float(np.max(log_ratio))
    drop = float(log_ratio[-1] - peak)
    witness = {
        "j_max": budget.j_max,
        "log_ratio_max": peak,
        "log_ratio_last": float(log_ratio[-1]),
        "relative_last": math.exp(drop),
    }
    parameters = {"n": n, "j_max": budget.j_max, "extrapolated": P.extrapolates(1.0, 2.0 ** budget.j_max)}
    if np.all(steps < 0) and drop < math.log(SMALL_O_THRESHOLD):
        status, diagnostic = STATUS_HOLDS, ""
    elif np.all(steps >= 0):
        status, diagnostic = STATUS_FAILS, ""
        witness["ratio_at_j_max"] = math.exp(min(float(log_ratio[-1]), 700.0))
    else:
        status = STATUS_INCONCLUSIVE
        if np.all(steps < 0):
            diagnostic = (
                f"P(t)/t^{n} decreases but only reached {math.exp(drop):.3e} of its maximum "
                f"by t = 2^{budget.j_max}, threshold {SMALL_O_THRESHOLD:g}"
            )
        else:
            diagnostic = f"P(t)/t^{n} is not monotone over j >= {budget.j_max // 2}"
    return ConditionVerdict("small_o", status, witness, parameters, diagnostic)


def check_doubling(
    P: YoungFunction,
    t_range: tuple[float, float] = DOUBLING_DEFAULT_RANGE,
    samples: int = DEFAULT_SAMPLES,
) -> ConditionVerdict:
    """Estimate K = sup P(2t)/P(t) on a geometric grid.

    Holds if the supremum is finite and at most 2^16.

    Raises:
        YoungFunctionError: If P(t) = 0 for some sampled t > 0
    """
    grid = _positive_grid(t_range, samples)
    log_t = np.log(grid)
    low = _checked_log(P, log_t)
    if np.any(np.isneginf(low)):
        bad = int(np.flatnonzero(np.isneginf(low))[0])
        raise YoungFunctionError(f"{P.description} vanishes at t={grid[bad]:g} > 0")
    high = _checked_log(P, log_t + LN2)
    with np.errstate(over="ignore"):
        ratios = np.exp(high - low)
    worst = int(np.argmax(ratios))
    estimate = float(ratios[worst])
    witness = {"K": estimate, "t_at_sup": float(grid[worst])}
    parameters = {"t_range": list(t_range), "samples": samples, "extrapolated": P.extrapolates(*t_range)}
    if math.isfinite(estimate) and estimate <= DOUBLING_K_MAX:
        return ConditionVerdict("doubling", STATUS_HOLDS, witness, parameters)
    _LOGGER.debug("Doubling fails for %s: K=%s at t=%s", P.description, estimate, grid[worst])
    return ConditionVerdict("doubling", STATUS_FAILS, witness, parameters)


def check_growth_alpha(
    P: YoungFunction,
    alpha: float,
    t_range: tuple[float, float] = GROWTH_DEFAULT_RANGE,
    samples: int = DEFAULT_SAMPLES,
) -> ConditionVerdict:
    """Decide whether t^(-alpha) P(t) is non-decreasing on a geometric grid.

    The grid range is reported in the verdict parameters.
    """
    if not alpha > 0:
        raise ConfigurationError(f"alpha must be positive, got {alpha}")
    grid = _positive_grid(t_range, samples)
    log_t = np.log(grid)
    scaled = _checked_log(P, log_t) - alpha * log_t
    steps = np.diff(scaled)
    violated = steps < math.log1p(-GROWTH_RTOL)
    parameters = {"alpha": alpha, "t_range": list(t_range), "samples": samples,
                  "extrapolated": P.extrapolates(*t_range)}
    if not np.any(violated):
        return ConditionVerdict("growth", STATUS_HOLDS, {"min_log_step": float(steps.min())}, parameters)
    bad = int(np.flatnonzero(violated)[0])
    witness = {"t": float(grid[bad]), "t_next": float(grid[bad + 1]), "log_step": float(steps[bad])}
    return ConditionVerdict("growth", STATUS_FAILS, witness, parameters)


@dataclass(frozen=True)
class AdmissibilityReport:
    """All four conditions for one Young function and dimension."""

    divergence: ConditionVerdict
    small_o: ConditionVerdict
    doubling: ConditionVerdict
    growth: ConditionVerdict

    @property
    def verdicts(self) -> tuple[ConditionVerdict, ...]:
        return (self.divergence, self.small_o, self.doubling, self.growth)

    @property
    def overall(self) -> str:
        statuses = [v.status for v in self.verdicts]
        if all(s == STATUS_HOLDS for s in statuses):
            return STATUS_HOLDS
        if STATUS_FAILS in statuses:
            return STATUS_FAILS
        return STATUS_INCONCLUSIVE


def check_admissible(P: YoungFunction, n: int, budget: IntegrationBudget = DEFAULT_BUDGET) -> AdmissibilityReport:
    """Run all four conditions; growth searches alpha = n - 1 + delta."""
    growth = None
    for offset in GROWTH_ALPHA_OFFSETS:
        growth = check_growth_alpha(P, n - 1 + offset)
        if growth.holds:
            break
    return AdmissibilityReport(
        divergence=check_divergence(P, n, budget),
        small_o=check_small_o(P, n, budget),
        doubling=check_doubling(P),
        growth=growth,
    )


# =============================================================================
# Radial projection
# =============================================================================

def radial_projection_energy(
    P: YoungFunction, n: int, budget: IntegrationBudget = DEFAULT_BUDGET
) -> RadialEnergyResult:
    """Integral of P(|Du|) over the unit ball for u(x) = x/|x|.

    |Du| = sqrt(n-1)/r, so the energy is |S^(n-1)| times the integral of
    P(sqrt(n-1)/r) r^(n-1) over r in (0, 1], split into windows
    [2^-(j+1), 2^-j]. The tail is classified with the divergence rule.

    Example:
        >>> radial_projection_energy(Power(1.5), 2).value  # 4 pi
        12.566...
    """
    _require_dimension(n)
    log_c = 0.5 * math.log(n - 1)
    sphere_area = 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)

    def log_integrand(log_inv_r: float) -> float:
        # dr = r ds, so the integrand in s is P(c/r) r^n
        return float(_checked_log(P, np.asarray(log_c + log_inv_r))) - n * log_inv_r

    windows = sphere_area * np.array([
        _window_integral(log_integrand, j * LN2, budget) for j in range(budget.radial_last_window + 1)
    ])
    positions = np.arange(windows.size) + 0.5 + log_c / LN2
    outcome, witness, diagnostic = classify_windows(
        windows[: budget.last_window + 1], positions[: budget.last_window + 1], budget.tail_start
    )
    partials = np.cumsum(windows).tolist()
    if diagnostic:
        witness["diagnostic"] = diagnostic
    if outcome == "diverges":
        return RadialEnergyResult(RADIAL_INFINITE, None, partials, witness)
    if outcome == "converges":
        value = partials[-1]
        ratio = windows[-1] / windows[-2]
        if 0.0 < ratio < 1.0:
            # geometric remainder below the last window
            value += windows[-1] * ratio / (1.0 - ratio)
        return RadialEnergyResult(RADIAL_FINITE, float(value), partials, witness)
    return RadialEnergyResult(STATUS_INCONCLUSIVE, None, partials, witness)


# =============================================================================
# Orlicz norms of sampled fields
# =============================================================================

@dataclass(frozen=True)
class WeightedField:
    """Nonnegative samples with nonnegative quadrature weights."""

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if values.shape != weights.shape:
            raise ConfigurationError(f"Field shape {values.shape} does not match weights {weights.shape}")
        if np.any(~np.isfinite(values)) or np.any(values < 0):
            raise DomainError("Field values must be finite and nonnegative")
        if np.any(weights < 0) or not np.sum(weights) > 0:
            raise ConfigurationError("Field weights must be nonnegative with positive total")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)


def orlicz_mean(sample: WeightedField, P: YoungFunction) -> float:
    """Return the sum of w_i P(v_i)."""
    return float(np.sum(sample.weights * eval_young(P, sample.values)))


def luxemburg_norm(sample: WeightedField, P: YoungFunction) -> float:
    """Return inf{k > 0 : sum w_i P(v_i / k) <= 1}.

    Brackets the root by doubling and halving from max v, then bisects to
    relative tolerance 1e-8. An all-zero field has norm 0.
    """
    top = float(np.max(sample.values)) if sample.values.size else 0.0
    if top == 0.0:
        return 0.0

    def excess(k: float) -> float:
        return float(np.sum(sample.weights * eval_young(P, sample.values / k))) - 1.0

    high = top
    while excess(high) > 0:
        high *= 2.0
    low = high
    while excess(low) <= 0:
        low *= 0.5
    return float(optimize.bisect(excess, low, high, xtol=LUXEMBURG_RTOL * low, rtol=LUXEMBURG_RTOL))


# =============================================================================
# Helpers
# =============================================================================

def _require_dimension(n: int) -> None:
    if n < 2:
        raise ConfigurationError(f"Dimension must be >= 2, got {n}")


def _positive_grid(t_range: tuple[float, float], samples: int) -> np.ndarray:
    low, high = t_range
    if not (0 < low < high and math.isfinite(high)):
        raise ConfigurationError(f"t range must satisfy 0 < low < high, got {t_range}")
    if samples < 2:
        raise ConfigurationError(f"Need at least 2 samples, got {samples}")
    return np.geomspace(low, high, samples)
