"""Interval neural networks ``H(x) = sum_i W_i * sum_j c_ij sigma(x - theta_ij)``.

Fitting follows the density argument: take a Stone-Weierstrass
decomposition ``sum_i psi_i J_i`` at half the target error, then replace
each weight psi_i by a sum of logistic terms accurate to
``epsilon / (2 m d_H(J_i, 0))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import expit

from .certify import certified_distance
from .errors import DomainError, FitBudgetExceeded
from .functions import CERTIFY_POINTS, Grid, IntervalFunction, default_grid_size
from .interval import ZERO, Interval, add, hausdorff, scalar_mul
from .stone_weierstrass import sw_approximant

SCHEMA_VERSION = 1
DEFAULT_MAX_TERMS = 1024
# sigmoid argument beyond which expit is 1.0 or below 1e-17
SATURATION = 40.0
REFINE_MAX_TERMS = 256
_CHUNK = 2048


@dataclass(frozen=True)
class Unit:
    w: Interval
    c: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        theta = np.asarray(self.theta, dtype=float).reshape(-1)
        if c.size == 0 or c.size != theta.size:
            raise ValueError("a unit needs a nonempty list of (c, theta) pairs")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "theta", theta)

    @property
    def inner(self) -> list[tuple[float, float]]:
        return [(float(c), float(t)) for c, t in zip(self.c, self.theta)]


def inner_sum(c: np.ndarray, theta: np.ndarray, s: float, xs: np.ndarray) -> np.ndarray:
    """``sum_j c_j sigma(x - theta_j)`` at every x, chunked over the points."""
    xs = np.asarray(xs, dtype=float)
    flat = xs.reshape(-1)
    out = np.empty(flat.shape)
    for k in range(0, flat.size, _CHUNK):
        block = flat[k : k + _CHUNK]
        out[k : k + _CHUNK] = expit(s * (block[:, None] - theta[None, :])) @ c
    return out.reshape(xs.shape)


def _scaled_endpoints(s0, s1, w: Interval):
    """Ranges of both endpoints of ``s * W`` for s in [s0, s1]."""

    def lo_of(s):
        return np.where(s >= 0, s * w.lo, s * w.hi)

    def hi_of(s):
        return np.where(s >= 0, s * w.hi, s * w.lo)

    crosses = (s0 < 0) & (s1 > 0)
    out = []
    for fn in (lo_of, hi_of):
        a, b = fn(s0), fn(s1)
        mn, mx = np.minimum(a, b), np.maximum(a, b)
        out.append(np.where(crosses, np.minimum(mn, 0.0), mn))
        out.append(np.where(crosses, np.maximum(mx, 0.0), mx))
    return out


@dataclass(frozen=True, eq=False)
class IntervalNetwork:
    units: tuple[Unit, ...]
    steepness: float
    domain: tuple[float, float]

    def unit_sums(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return np.stack([inner_sum(u.c, u.theta, self.steepness, xs) for u in self.units])

    def sample(self, xs):
        xs = np.asarray(xs, dtype=float)
        lo = np.zeros(xs.shape)
        hi = np.zeros(xs.shape)
        for u in self.units:
            s = inner_sum(u.c, u.theta, self.steepness, xs)
            lo = lo + np.where(s >= 0, s * u.w.lo, s * u.w.hi)
            hi = hi + np.where(s >= 0, s * u.w.hi, s * u.w.lo)
        return lo, hi

    def enclose(self, t0, t1):
        t0 = np.asarray(t0, dtype=float)
        t1 = np.asarray(t1, dtype=float)
        acc = [np.zeros(t0.shape) for _ in range(4)]
        for u in self.units:
            pos = np.maximum(u.c, 0.0)
            neg = np.minimum(u.c, 0.0)
            s0 = inner_sum(pos, u.theta, self.steepness, t0) + inner_sum(neg, u.theta, self.steepness, t1)
            s1 = inner_sum(pos, u.theta, self.steepness, t1) + inner_sum(neg, u.theta, self.steepness, t0)
            for k, part in enumerate(_scaled_endpoints(s0, s1, u.w)):
                acc[k] = acc[k] + part
        return tuple(acc)

    def __call__(self, x: float) -> Interval:
        return eval_network(self, x)

    @property
    def total_terms(self) -> int:
        return sum(u.c.size for u in self.units)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "inn",
            "domain": list(self.domain),
            "sigmoid": {"kind": "logistic", "s": self.steepness},
            "units": [
                {"w": u.w.to_json(), "inner": [{"c": c, "theta": t} for c, t in u.inner]}
                for u in self.units
            ],
        }

    @classmethod
    def from_json(cls, d: dict) -> "IntervalNetwork":
        sig = d["sigmoid"]
        if sig.get("kind") != "logistic":
            raise ValueError(f"unsupported sigmoid {sig.get('kind')!r}")
        units = tuple(
            Unit(
                Interval.from_json(u["w"]),
                np.array([float(t["c"]) for t in u["inner"]]),
                np.array([float(t["theta"]) for t in u["inner"]]),
            )
            for u in d["units"]
        )
        return cls(units, float(sig["s"]), (float(d["domain"][0]), float(d["domain"][1])))


def eval_network(net: IntervalNetwork, x: float) -> Interval:
    a, b = net.domain
    if not a <= x <= b:
        raise DomainError(f"x={x!r} outside the domain [{a!r}, {b!r}]")
    xs = np.array([x], dtype=float)
    total = ZERO
    for u in net.units:
        s = float(inner_sum(u.c, u.theta, net.steepness, xs)[0])
        total = add(total, scalar_mul(s, u.w))
    return total


@dataclass(frozen=True)
class FitConfig:
    steepness: Optional[float] = None
    max_terms: int = DEFAULT_MAX_TERMS
    grid_points: int = CERTIFY_POINTS
    refine: bool = True

    def resolved_steepness(self, domain) -> float:
        if self.steepness is not None:
            if not self.steepness > 0:
                raise ValueError(f"steepness must be positive, got {self.steepness!r}")
            return float(self.steepness)
        # one grid spacing of the certification grid per sigmoid width
        return (self.grid_points - 1) / (domain[1] - domain[0])


def staircase(xs: np.ndarray, values: np.ndarray, r: int, s: float):
    """Constant term plus r steps at uniform quantiles of the cumulative variation."""
    a = float(xs[0])
    theta0 = a - SATURATION / s
    c0 = float(values[0]) / float(expit(SATURATION))
    cum = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(values)))])
    total = float(cum[-1])
    if total == 0.0:
        return np.array([c0]), np.array([theta0])
    levels = total * np.arange(r + 1) / r
    # psi along its variation, linear between grid points, so a single grid
    # cell spanning several levels gets several steps inside it
    anchors = np.interp(levels, cum, values)
    anchors[0] = values[0]
    anchors[-1] = values[-1]
    c = np.diff(anchors)
    mids = total * (np.arange(r) + 0.5) / r
    theta = np.interp(mids, cum, xs)
    keep = c != 0.0
    return np.concatenate([[c0], c[keep]]), np.concatenate([[theta0], theta[keep]])


def _refine(xs, values, c, theta, s):
    design = expit(s * (xs[:, None] - theta[None, :]))
    sol, *_ = np.linalg.lstsq(design, values, rcond=None)
    return sol


def _fit(psi_values: np.ndarray, xs: np.ndarray, budget: float, config: FitConfig, s: float):
    best = (math.inf, None, None)
    r = 1
    while True:
        c, theta = staircase(xs, psi_values, r, s)
        candidates = [c]
        if config.refine and c.size <= REFINE_MAX_TERMS and c.size > 1:
            candidates.append(_refine(xs, psi_values, c, theta, s))
        for cc in candidates:
            err = float(np.max(np.abs(inner_sum(cc, theta, s, xs) - psi_values)))
            if err < best[0]:
                best = (err, cc, theta)
        if best[0] < budget or np.ptp(psi_values) == 0.0:
            return best
        if r >= config.max_terms:
            return best
        r = min(2 * r, config.max_terms)


def fit_unit(
    psi: Callable[[np.ndarray], np.ndarray],
    budget: float,
    config: FitConfig = FitConfig(),
    domain: tuple[float, float] = (0.0, 1.0),
) -> list[tuple[float, float]]:
    """Logistic inner list whose grid sup error against psi is below budget."""
    if not budget > 0:
        raise ValueError(f"budget must be positive, got {budget!r}")
    xs = np.linspace(domain[0], domain[1], config.grid_points)
    values = np.asarray(psi(xs), dtype=float)
    s = config.resolved_steepness(domain)
    err, c, theta = _fit(values, xs, budget, config, s)
    if not err < budget:
        raise FitBudgetExceeded(
            f"best grid error {err!r} with {c.size} terms does not meet budget {budget!r}",
            best_error=err,
        )
    return [(float(a), float(b)) for a, b in zip(c, theta)]


@dataclass
class FitReport:
    epsilon: float
    m: int
    dropped: int
    steepness: float
    unit_errors: list[float]
    budgets: list[float]
    terms: list[int]
    sw_certified_error: Optional[float]
    composed_bound: Optional[float]
    certified_error: Optional[float]
    grid_error: Optional[float] = None
    failed_unit: Optional[int] = None

    @property
    def success(self) -> bool:
        return (
            self.failed_unit is None
            and all(e < b for e, b in zip(self.unit_errors, self.budgets))
            and self.certified_error is not None
            and self.certified_error < self.epsilon
        )

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["success"] = self.success
        return d


def fit_network(
    f: IntervalFunction,
    epsilon: float,
    config: FitConfig = FitConfig(),
    grid: Optional[Grid] = None,
) -> tuple[IntervalNetwork, FitReport]:
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    a, b = f.domain
    grid = grid or Grid.uniform(a, b, default_grid_size())
    g, sw_report = sw_approximant(f, epsilon / 2, grid)
    xs = np.linspace(a, b, config.grid_points)
    psis = g.weights.values(xs)
    kept = [i for i, J in enumerate(g.values) if hausdorff(J, ZERO) > 0]
    m = len(kept)
    s = config.resolved_steepness(f.domain)
    report = FitReport(
        epsilon=epsilon,
        m=m,
        dropped=len(g.values) - m,
        steepness=s,
        unit_errors=[],
        budgets=[],
        terms=[],
        sw_certified_error=sw_report.certified_error,
        composed_bound=None,
        certified_error=None,
    )
    units = []
    for k, i in enumerate(kept):
        J = g.values[i]
        budget = epsilon / (2 * m * hausdorff(J, ZERO))
        err, c, theta = _fit(psis[i], xs, budget, config, s)
        report.unit_errors.append(err)
        report.budgets.append(budget)
        report.terms.append(int(c.size))
        if not err < budget:
            report.failed_unit = k
            raise FitBudgetExceeded(
                f"unit {k} (J={J}) reached grid error {err!r} with {c.size} terms; budget {budget!r}",
                best_error=err,
                report=report,
            )
        units.append(Unit(J, c, theta))
    if not units:
        # f vanishes identically; a zero unit keeps the network well formed
        units.append(Unit(ZERO, np.array([0.0]), np.array([a])))
    net = IntervalNetwork(tuple(units), s, f.domain)
    if sw_report.certified_error is not None:
        report.composed_bound = sw_report.certified_error + sum(
            e * hausdorff(g.values[i], ZERO) for e, i in zip(report.unit_errors, kept)
        )
    cert = certified_distance(f, net, points=config.grid_points)
    report.certified_error = None if cert is None else cert.upper
    flo, fhi = f.sample(xs)
    hlo, hhi = net.sample(xs)
    report.grid_error = float(np.max(np.maximum(np.abs(flo - hlo), np.abs(fhi - hhi))))
    return net, report
