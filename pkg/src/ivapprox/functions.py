"""Continuous interval-valued functions on a compact interval [a, b].

An :class:`IntervalFunction` is given by vectorized lower/upper endpoint
callables.  Sup distances and moduli of continuity are estimated on a
:class:`Grid`; when Lipschitz constants are known a certified upper bound is
reported alongside the grid value.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from . import expr
from .errors import (
    DomainError,
    DomainMismatch,
    EndpointOrderError,
    InvalidDelta,
    InvalidFunction,
)
from .interval import Interval

VALIDATION_POINTS = 1001
CERTIFY_POINTS = 10001
CONSTANT_TOL = 1e-12


def default_grid_size() -> int:
    """Verification grid resolution, overridable through ``IVA_GRID_DEFAULT``."""
    value = os.environ.get("IVA_GRID_DEFAULT")
    if value:
        n = int(value)
        if n < 11:
            raise ValueError("IVA_GRID_DEFAULT must be at least 11")
        return n
    return VALIDATION_POINTS


@dataclass(frozen=True)
class Grid:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("a grid needs at least two points")
        if not np.all(np.diff(pts) > 0):
            raise ValueError("grid points must be strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, a: float, b: float, n: int) -> "Grid":
        return cls(np.linspace(a, b, n))

    @property
    def resolution(self) -> int:
        return self.points.size

    @property
    def spacing(self) -> float:
        return float(np.max(np.diff(self.points)))

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.points[0]), float(self.points[-1])


class Monotonicity(str, enum.Enum):
    NONINCREASING = "NonIncreasing"
    NONDECREASING = "NonDecreasing"
    CONSTANT = "Constant"
    NEITHER = "Neither"


@dataclass(frozen=True, eq=False)
class IntervalFunction:
    domain: tuple[float, float]
    lower: Callable
    upper: Callable
    analytic_modulus: Optional[Callable[[float], float]] = None
    lipschitz_bound: Optional[float] = None
    name: str = "f"
    source: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self):
        a, b = float(self.domain[0]), float(self.domain[1])
        if not a < b:
            raise DomainError(f"empty domain [{a}, {b}]")
        object.__setattr__(self, "domain", (a, b))
        xs = np.linspace(a, b, VALIDATION_POINTS)
        lo, hi = self.sample(xs, check=False)
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            bad = int(np.argmax(~(np.isfinite(lo) & np.isfinite(hi))))
            raise InvalidFunction(f"non-finite endpoint value at x={xs[bad]!r}")
        viol = np.nonzero(lo > hi)[0]
        if viol.size:
            i = int(viol[0])
            raise EndpointOrderError(float(xs[i]), float(lo[i]), float(hi[i]))

    def sample(self, xs, check: bool = True) -> tuple[np.ndarray, np.ndarray]:
        """Endpoint arrays at ``xs``."""
        xs = np.asarray(xs, dtype=float)
        lo = np.broadcast_to(np.asarray(self.lower(xs), dtype=float), xs.shape)
        hi = np.broadcast_to(np.asarray(self.upper(xs), dtype=float), xs.shape)
        if check and np.any(lo > hi):
            i = int(np.argmax(lo > hi))
            raise InvalidFunction(
                f"{self.name}: lower endpoint above upper at x={xs.flat[i]!r}"
            )
        return lo, hi

    def __call__(self, x: float) -> Interval:
        return evaluate(self, x)

    def enclose(self, t0: np.ndarray, t1: np.ndarray):
        """Bounds of each endpoint over the cells [t0, t1] from the Lipschitz constant.

        Returns ``(lo_min, lo_max, hi_min, hi_max)``; requires ``lipschitz_bound``.
        """
        if self.lipschitz_bound is None:
            raise InvalidFunction(f"{self.name} carries no Lipschitz bound")
        lo0, hi0 = self.sample(t0, check=False)
        lo1, hi1 = self.sample(t1, check=False)
        half = 0.5 * self.lipschitz_bound * (t1 - t0)
        mid_lo = 0.5 * (lo0 + lo1)
        mid_hi = 0.5 * (hi0 + hi1)
        return mid_lo - half, mid_lo + half, mid_hi - half, mid_hi + half

    def rescaled(self) -> "IntervalFunction":
        """The same function reparametrized over [0, 1]."""
        a, b = self.domain
        if (a, b) == (0.0, 1.0):
            return self
        width = b - a
        lower, upper = self.lower, self.upper
        om = self.analytic_modulus
        return IntervalFunction(
            (0.0, 1.0),
            lambda u: lower(a + width * np.asarray(u, dtype=float)),
            lambda u: upper(a + width * np.asarray(u, dtype=float)),
            analytic_modulus=None if om is None else (lambda d: om(d * width)),
            lipschitz_bound=None if self.lipschitz_bound is None else self.lipschitz_bound * width,
            name=self.name,
            source=self.source,
        )

    def reflected(self) -> "IntervalFunction":
        """``x -> f(a + b - x)``; swaps nonincreasing and nondecreasing length."""
        a, b = self.domain
        lower, upper = self.lower, self.upper
        return IntervalFunction(
            (a, b),
            lambda x: lower(a + b - np.asarray(x, dtype=float)),
            lambda x: upper(a + b - np.asarray(x, dtype=float)),
            analytic_modulus=self.analytic_modulus,
            lipschitz_bound=self.lipschitz_bound,
            name=f"{self.name}~",
        )

    def shifted(self, other: "IntervalFunction") -> "IntervalFunction":
        """Pointwise Minkowski sum ``x -> f(x) + h(x)``."""
        _same_domain(self, other)
        lipschitz = None
        if self.lipschitz_bound is not None and other.lipschitz_bound is not None:
            lipschitz = self.lipschitz_bound + other.lipschitz_bound
        return IntervalFunction(
            self.domain,
            lambda x: self.lower(x) + other.lower(x),
            lambda x: self.upper(x) + other.upper(x),
            lipschitz_bound=lipschitz,
            name=f"{self.name}+{other.name}",
        )


def constant_function(value: Interval, domain=(0.0, 1.0), name: str = "const") -> IntervalFunction:
    lo, hi = value.lo, value.hi
    return IntervalFunction(
        domain,
        lambda x: np.full(np.shape(x), lo),
        lambda x: np.full(np.shape(x), hi),
        analytic_modulus=lambda d: 0.0,
        lipschitz_bound=0.0,
        name=name,
    )


def evaluate(f: IntervalFunction, x: float) -> Interval:
    a, b = f.domain
    if not a <= x <= b:
        raise DomainError(f"x={x!r} outside the domain [{a!r}, {b!r}]")
    lo, hi = f.sample(np.array([x], dtype=float), check=False)
    lo, hi = float(lo[0]), float(hi[0])
    if lo > hi:
        raise InvalidFunction(f"{f.name}: lower endpoint {lo!r} above upper {hi!r} at x={x!r}")
    return Interval(lo, hi)


def _same_domain(f, g) -> None:
    if tuple(f.domain) != tuple(g.domain):
        raise DomainMismatch(f"domains differ: {f.domain} vs {g.domain}")


def _check_grid(f, grid: Grid) -> None:
    a, b = f.domain
    ga, gb = grid.domain
    if ga != a or gb != b:
        raise DomainMismatch(f"grid [{ga}, {gb}] does not span the domain [{a}, {b}]")


def pointwise_hausdorff(f, g, xs) -> np.ndarray:
    flo, fhi = f.sample(xs)
    glo, ghi = g.sample(xs)
    return np.maximum(np.abs(flo - glo), np.abs(fhi - ghi))


class SupDistance(NamedTuple):
    estimate: float
    upper: Optional[float]


def sup_metric(f: IntervalFunction, g: IntervalFunction, grid: Grid) -> SupDistance:
    """Grid estimate of the sup distance, plus a Lipschitz upper bound when available."""
    _same_domain(f, g)
    _check_grid(f, grid)
    est = float(np.max(pointwise_hausdorff(f, g, grid.points)))
    upper = None
    lf, lg = f.lipschitz_bound, g.lipschitz_bound
    if lf is not None and lg is not None:
        upper = est + (lf + lg) * grid.spacing / 2
    return SupDistance(est, upper)


def grid_modulus(f: IntervalFunction, delta: float, grid: Grid) -> float:
    """Max of d_H(f(x), f(y)) over grid pairs with |x - y| < delta."""
    if delta <= 0:
        raise InvalidDelta(f"delta must be positive, got {delta!r}")
    _check_grid(f, grid)
    xs = grid.points
    lo, hi = f.sample(xs)
    best = 0.0
    for k in range(1, xs.size):
        gaps = xs[k:] - xs[:-k]
        mask = gaps < delta
        if not mask.any():
            break
        d = np.maximum(np.abs(lo[k:] - lo[:-k]), np.abs(hi[k:] - hi[:-k]))
        best = max(best, float(np.max(d[mask])))
    return best


def modulus(f: IntervalFunction, delta: float, grid: Grid) -> float:
    """Modulus of continuity; the analytic value wins when the function carries one."""
    est = grid_modulus(f, delta, grid)
    if f.analytic_modulus is None:
        return est
    exact = float(f.analytic_modulus(delta))
    if est > exact + 1e-9:
        raise InvalidFunction(
            f"{f.name}: grid modulus {est!r} exceeds analytic modulus {exact!r} at delta={delta!r}"
        )
    return exact


def length_monotonicity(f: IntervalFunction, grid: Grid) -> Monotonicity:
    lo, hi = f.sample(grid.points)
    lengths = hi - lo
    if np.max(lengths) - np.min(lengths) <= CONSTANT_TOL:
        return Monotonicity.CONSTANT
    steps = np.diff(lengths)
    rises = bool(np.any(steps > CONSTANT_TOL))
    falls = bool(np.any(steps < -CONSTANT_TOL))
    if rises and falls:
        return Monotonicity.NEITHER
    if rises:
        return Monotonicity.NONDECREASING
    if falls:
        return Monotonicity.NONINCREASING
    # drift below the per-step tolerance; classify by net change
    if lengths[-1] >= lengths[0]:
        return Monotonicity.NONDECREASING
    return Monotonicity.NONINCREASING


def parse_function(
    lower_expr: str,
    upper_expr: str,
    domain: tuple[float, float],
    lipschitz_bound: Optional[float] = None,
    name: Optional[str] = None,
) -> IntervalFunction:
    lower = expr.compile_expr(lower_expr)
    upper = expr.compile_expr(upper_expr)
    return IntervalFunction(
        (float(domain[0]), float(domain[1])),
        lower,
        upper,
        lipschitz_bound=lipschitz_bound,
        name=name or f"[{lower_expr}, {upper_expr}]",
        source={"lower": lower_expr, "upper": upper_expr, "domain": [float(domain[0]), float(domain[1])]},
    )


def diameter_bound(f: IntervalFunction, grid: Grid) -> float:
    """Upper bound for sup d_H(f(x), f(y)) over the whole domain.

    Grid range of each endpoint, widened by the Lipschitz slack when known.
    """
    lo, hi = f.sample(grid.points)
    est = max(float(np.ptp(lo)), float(np.ptp(hi)))
    if f.lipschitz_bound is not None:
        est += f.lipschitz_bound * grid.spacing
    return est
