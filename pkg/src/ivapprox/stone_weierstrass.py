"""Constructive Stone-Weierstrass approximation on a compact interval.

Pipeline: a greedy cover by sub-level neighbourhoods of the target, one
window transition per neighbourhood, telescoped products turning the
windows into a partition of unity, and the approximant
``g = sum_i psi_i * f(x_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import bump
from .bump import STEP_DOWN, STEP_UP, TransitionFn
from .certify import Certificate, certified_distance
from .errors import BudgetInfeasible, CoverTooLarge, DomainError
from .functions import CERTIFY_POINTS, Grid, IntervalFunction, default_grid_size
from .interval import ZERO, Interval, add, scalar_mul

DEFAULT_COVER_CAP = 256


@dataclass(frozen=True)
class Cover:
    """Centers x_i with neighbourhoods decided on a grid.

    ``outer[i]`` is the grid run around x_i where d_H(f(t), f(x_i)) < radii_eps[i]
    (the neighbourhood V(x_i)); ``inner[i]`` is the run at half that level
    (U(x_i)).  Runs are inclusive index pairs into ``grid.points``.
    """

    grid: Grid
    center_index: tuple[int, ...]
    radii_eps: tuple[float, ...]
    outer: tuple[tuple[int, int], ...]
    inner: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        return len(self.center_index)

    @property
    def centers(self) -> list[float]:
        return [float(self.grid.points[i]) for i in self.center_index]

    @property
    def neighborhoods(self) -> list[tuple[float, float]]:
        """Open intervals V(x_i): between the first excluded grid points on each side."""
        xs = self.grid.points
        out = []
        for lo, hi in self.outer:
            left = xs[lo - 1] if lo > 0 else xs[0]
            right = xs[hi + 1] if hi < xs.size - 1 else xs[-1]
            out.append((float(left), float(right)))
        return out

    def outer_mask(self, i: int) -> np.ndarray:
        mask = np.zeros(self.grid.resolution, dtype=bool)
        lo, hi = self.outer[i]
        mask[lo : hi + 1] = True
        return mask


def _run(mask: np.ndarray, c: int) -> tuple[int, int]:
    """Maximal run of True around index ``c`` (mask[c] must be True)."""
    left = np.nonzero(~mask[:c])[0]
    right = np.nonzero(~mask[c + 1 :])[0]
    lo = int(left[-1]) + 1 if left.size else 0
    hi = c + int(right[0]) if right.size else mask.size - 1
    return lo, hi


def build_cover(f: IntervalFunction, epsilon: float, grid: Grid, cap: int = DEFAULT_COVER_CAP) -> Cover:
    """Greedy farthest-point cover.

    x_1 is the grid point nearest the domain midpoint.  While some grid point
    outside V(x_1) lies in no U(x_j), the one farthest from f(x_1) in d_H
    becomes the next center.  Every radius is epsilon / 2.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    xs = grid.points
    lo, hi = f.sample(xs)
    radius = epsilon / 2

    def dist_from(c):
        return np.maximum(np.abs(lo - lo[c]), np.abs(hi - hi[c]))

    a, b = f.domain
    first = int(np.argmin(np.abs(xs - 0.5 * (a + b))))
    d1 = dist_from(first)
    centers = [first]
    outer = [_run(d1 < radius, first)]
    inner = [_run(d1 < radius / 2, first)]
    covered = np.zeros(xs.size, dtype=bool)
    covered[outer[0][0] : outer[0][1] + 1] = True
    while not covered.all():
        if len(centers) >= cap:
            raise CoverTooLarge(
                f"cover needs more than {cap} centers for epsilon={epsilon!r} "
                f"on a {xs.size}-point grid"
            )
        candidates = np.nonzero(~covered)[0]
        c = int(candidates[np.argmax(d1[candidates])])
        d = dist_from(c)
        centers.append(c)
        outer.append(_run(d < radius, c))
        inner.append(_run(d < radius / 2, c))
        lo_i, hi_i = inner[-1]
        covered[lo_i : hi_i + 1] = True
    return Cover(grid, tuple(centers), tuple([radius] * len(centers)), tuple(outer), tuple(inner))


@dataclass(frozen=True)
class Window:
    """Product of an optional rising edge and an optional falling edge; 1 when both are absent."""

    left: Optional[TransitionFn]
    right: Optional[TransitionFn]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        v = np.ones(t.shape)
        if self.left is not None:
            v = v * self.left(t)
        if self.right is not None:
            v = v * self.right(t)
        return v

    def enclose(self, t0, t1):
        vmin = np.ones(np.shape(t0))
        vmax = np.ones(np.shape(t0))
        for edge in (self.left, self.right):
            if edge is not None:
                e0, e1 = edge.enclose(t0, t1)
                vmin = vmin * e0
                vmax = vmax * e1
        return vmin, vmax

    def to_json(self) -> dict:
        return {
            "left": None if self.left is None else self.left.to_json(),
            "right": None if self.right is None else self.right.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Window":
        return cls(
            None if d["left"] is None else TransitionFn.from_json(d["left"]),
            None if d["right"] is None else TransitionFn.from_json(d["right"]),
        )


@dataclass(frozen=True)
class PartitionOfUnity:
    """psi_1 = prod_{j>=2} (1 - phi_j),  psi_i = phi_i * prod_{2<=j<i} (1 - phi_j)."""

    windows: tuple[Window, ...]
    delta: float

    @property
    def m(self) -> int:
        return len(self.windows) + 1

    def values(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        rest = np.ones(xs.shape)
        rows = [None]
        for w in self.windows:
            phi = w(xs)
            rows.append(rest * phi)
            rest = rest * (1.0 - phi)
        rows[0] = rest
        return np.stack(rows)

    def enclose(self, t0, t1):
        rest_min = np.ones(np.shape(t0))
        rest_max = np.ones(np.shape(t0))
        mins, maxs = [None], [None]
        for w in self.windows:
            p0, p1 = w.enclose(t0, t1)
            mins.append(rest_min * p0)
            maxs.append(rest_max * p1)
            rest_min = rest_min * (1.0 - p1)
            rest_max = rest_max * (1.0 - p0)
        mins[0], maxs[0] = rest_min, rest_max
        return np.stack(mins), np.stack(maxs)

    def psi(self, i: int) -> Callable:
        """Callable for the i-th weight (0-based; 0 is psi_1)."""
        return lambda xs: self.values(xs)[i]

    def to_json(self) -> dict:
        return {"kind": "telescoped_windows", "delta": self.delta,
                "windows": [w.to_json() for w in self.windows]}

    @classmethod
    def from_json(cls, d: dict) -> "PartitionOfUnity":
        return cls(tuple(Window.from_json(w) for w in d["windows"]), float(d["delta"]))

    def describe(self) -> list:
        """Symbolic form of every psi_i in terms of the windows phi_2..phi_m."""
        terms = []
        for i in range(self.m):
            upto = self.m if i == 0 else i + 1
            factors = [{"op": "one_minus", "arg": {"window": j}} for j in range(2, upto)]
            if i > 0:
                factors.append({"window": i + 1})
            terms.append({"op": "mul", "factors": factors} if factors else {"const": 1.0})
        return terms


class CallableWeights:
    """Weights given by plain callables; no enclosure, so no certificate."""

    def __init__(self, fns: Sequence[Callable]):
        self.fns = list(fns)

    def values(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return np.stack([np.broadcast_to(np.asarray(fn(xs), dtype=float), xs.shape) for fn in self.fns])


@dataclass(frozen=True, eq=False)
class Approximant:
    """Finite combination ``sum_i psi_i(x) A_i`` with [0, 1]-valued weights."""

    weights: object
    values: tuple[Interval, ...]
    domain: tuple[float, float]
    info: dict = field(default_factory=dict)

    @property
    def terms(self) -> list[tuple[Callable, Interval]]:
        return [(lambda xs, i=i: self.weights.values(xs)[i], A) for i, A in enumerate(self.values)]

    def sample(self, xs):
        w = self.weights.values(xs)
        lo = np.array([A.lo for A in self.values])
        hi = np.array([A.hi for A in self.values])
        return lo @ w, hi @ w

    def enclose(self, t0, t1):
        wmin, wmax = self.weights.enclose(t0, t1)
        out = []
        for ends in ([A.lo for A in self.values], [A.hi for A in self.values]):
            e = np.array(ends)[:, None]
            low = np.where(e >= 0, wmin * e, wmax * e).sum(axis=0)
            high = np.where(e >= 0, wmax * e, wmin * e).sum(axis=0)
            out.extend([low, high])
        return tuple(out)

    def __call__(self, x: float) -> Interval:
        return eval_approximant(self, x)

    def to_json(self) -> dict:
        d = {
            "kind": "sw",
            "domain": list(self.domain),
            "values": [A.to_json() for A in self.values],
            "partition": self.weights.to_json(),
            "representation": {
                "op": "sum",
                "terms": [
                    {"op": "scale", "weight": w, "value": A.to_json()}
                    for w, A in zip(self.weights.describe(), self.values)
                ],
            },
        }
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Approximant":
        return cls(
            PartitionOfUnity.from_json(d["partition"]),
            tuple(Interval.from_json(v) for v in d["values"]),
            (float(d["domain"][0]), float(d["domain"][1])),
        )


def eval_approximant(g: Approximant, x: float) -> Interval:
    a, b = g.domain
    if not a <= x <= b:
        raise DomainError(f"x={x!r} outside the domain [{a!r}, {b!r}]")
    w = g.weights.values(np.array([x], dtype=float))[:, 0]
    total = ZERO
    for psi, A in zip(w, g.values):
        total = add(total, scalar_mul(float(psi), A))
    return total


def build_partition(cover: Cover, delta: float, grid: Grid | None = None) -> PartitionOfUnity:
    """Windows phi_2..phi_m with phi_i > 1 - delta on U(x_i) and phi_i < delta off V(x_i).

    Each window is a product of at most two transitions, each switching
    with tolerance delta / 2 inside the gap between the U-run and the
    V-run on that side.
    """
    if not 0.0 < delta < 0.5:
        raise ValueError(f"need 0 < delta < 1/2, got {delta!r}")
    grid = grid or cover.grid
    xs = grid.points
    dom = grid.domain
    last = xs.size - 1
    eps = delta / 2
    windows = []
    for i in range(1, cover.m):
        (ulo, uhi), (vlo, vhi) = cover.inner[i], cover.outer[i]
        left = right = None
        if vlo > 0:
            left = bump.transition_between(float(xs[vlo - 1]), float(xs[ulo]), eps, STEP_UP, dom)
        if vhi < last:
            right = bump.transition_between(float(xs[uhi]), float(xs[vhi + 1]), eps, STEP_DOWN, dom)
        windows.append(Window(left, right))
    return PartitionOfUnity(tuple(windows), delta)


@dataclass
class SWReport:
    m: int
    delta: float
    eps_prime: float
    M: float
    certified_error: Optional[float]
    grid_error: float
    epsilon: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def sw_approximant(
    f: IntervalFunction,
    epsilon: float,
    grid: Grid | None = None,
    cap: int = DEFAULT_COVER_CAP,
    certify_points: int = CERTIFY_POINTS,
) -> tuple[Approximant, SWReport]:
    """Build g with certified sup distance to f below epsilon."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    a, b = f.domain
    grid = grid or Grid.uniform(a, b, default_grid_size())
    cover = build_cover(f, epsilon, grid, cap)
    m = cover.m
    eps_prime = max(cover.radii_eps)

    # M = max_i sup_t d_H(f(t), f(x_i)), grid value plus Lipschitz slack
    lo, hi = f.sample(grid.points)
    M = 0.0
    for c in cover.center_index:
        M = max(M, float(np.max(np.maximum(np.abs(lo - lo[c]), np.abs(hi - hi[c])))))
    if f.lipschitz_bound is not None:
        M += f.lipschitz_bound * grid.spacing / 2

    slack = epsilon - eps_prime
    if slack <= 0:
        raise BudgetInfeasible(f"eps_prime={eps_prime!r} leaves no room below epsilon={epsilon!r}")
    delta = 0.25 if M == 0 else min(0.25, slack / (2 * M * m))
    if not 0 < delta < 0.5 or delta * M * m >= slack:
        raise BudgetInfeasible(f"no delta in (0, 1/2) with delta*M*m < {slack!r}")

    partition = build_partition(cover, delta, grid)
    values = tuple(f(float(grid.points[c])) for c in cover.center_index)
    g = Approximant(partition, values, f.domain)
    cert = certified_distance(f, g, points=certify_points)
    xs = np.linspace(a, b, certify_points)
    flo, fhi = f.sample(xs)
    glo, ghi = g.sample(xs)
    grid_error = float(np.max(np.maximum(np.abs(flo - glo), np.abs(fhi - ghi))))
    report = SWReport(
        m=m,
        delta=delta,
        eps_prime=eps_prime,
        M=M,
        certified_error=None if cert is None else cert.upper,
        grid_error=grid_error,
        epsilon=epsilon,
    )
    object.__setattr__(g, "info", report.to_json())
    if cert is not None and cert.upper >= epsilon:
        raise BudgetInfeasible(
            f"certified error {cert.upper!r} is not below epsilon={epsilon!r}; refine the grid"
        )
    return g, report
