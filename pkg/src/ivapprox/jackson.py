"""Jackson-type approximants built from nodes A_j = f(j/n) and gH differences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import bump
from .bump import STEP_DOWN, STEP_UP, TransitionFn
from .certify import certified_distance
from .errors import DomainError, MonotonicityViolation, NoModulusAvailable, NotMonotone
from .functions import CERTIFY_POINTS, Grid, IntervalFunction, Monotonicity, default_grid_size
from .functions import diameter_bound, length_monotonicity
from .interval import NONDECREASING, NONINCREASING, Interval, add, check_length_monotone, gh_diff, scalar_mul

# node lengths of a Constant-class function may drift by rounding
CONSTANT_SLACK = 1e-12
EPS_PRIME_CAP = 0.25


@dataclass(frozen=True, eq=False)
class JacksonApproximant:
    """``base + sum_j psi_j(x) diff_j`` on [0, 1]."""

    n: int
    nodes: tuple[Interval, ...]
    transitions: tuple[TransitionFn, ...]
    direction: str
    base: Interval
    diffs: tuple[Interval, ...]
    delta: float
    eps_prime: float
    M: float

    domain = (0.0, 1.0)

    def weights(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if not self.transitions:
            return np.zeros((0,) + xs.shape)
        return np.stack([t(xs) for t in self.transitions])

    def sample(self, xs):
        w = self.weights(xs)
        lo = np.array([d.lo for d in self.diffs])
        hi = np.array([d.hi for d in self.diffs])
        return self.base.lo + lo @ w, self.base.hi + hi @ w

    def enclose(self, t0, t1):
        shape = np.shape(t0)
        wmin = np.empty((len(self.transitions),) + shape)
        wmax = np.empty_like(wmin)
        for j, t in enumerate(self.transitions):
            wmin[j], wmax[j] = t.enclose(t0, t1)
        out = []
        for b, ends in ((self.base.lo, [d.lo for d in self.diffs]), (self.base.hi, [d.hi for d in self.diffs])):
            e = np.array(ends, dtype=float)[:, None]
            out.append(b + np.where(e >= 0, wmin * e, wmax * e).sum(axis=0))
            out.append(b + np.where(e >= 0, wmax * e, wmin * e).sum(axis=0))
        return tuple(out)

    def __call__(self, x: float) -> Interval:
        return eval_jackson(self, x)

    def to_json(self) -> dict:
        return {
            "kind": "jackson",
            "n": self.n,
            "direction": self.direction,
            "delta": self.delta,
            "eps_prime": self.eps_prime,
            "M": self.M,
            "nodes": [A.to_json() for A in self.nodes],
            "base": self.base.to_json(),
            "diffs": [d.to_json() for d in self.diffs],
            "transitions": [t.to_json() for t in self.transitions],
        }

    @classmethod
    def from_json(cls, d: dict) -> "JacksonApproximant":
        return cls(
            n=int(d["n"]),
            nodes=tuple(Interval.from_json(v) for v in d["nodes"]),
            transitions=tuple(TransitionFn.from_json(t) for t in d["transitions"]),
            direction=d["direction"],
            base=Interval.from_json(d["base"]),
            diffs=tuple(Interval.from_json(v) for v in d["diffs"]),
            delta=float(d["delta"]),
            eps_prime=float(d["eps_prime"]),
            M=float(d["M"]),
        )


def sample_nodes(f: IntervalFunction, n: int) -> list[Interval]:
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if f.domain != (0.0, 1.0):
        raise DomainError(f"nodes are sampled on [0, 1]; rescale f first (domain {f.domain})")
    return [f(j / n) for j in range(n + 1)]


def _choose_direction(nodes, cls: Monotonicity) -> str:
    if cls is Monotonicity.NONINCREASING:
        order = [NONINCREASING]
    elif cls is Monotonicity.NONDECREASING:
        order = [NONDECREASING]
    else:
        order = [NONINCREASING, NONDECREASING]
    for direction in order:
        try:
            check_length_monotone(nodes, direction)
            return direction
        except MonotonicityViolation:
            pass
    lengths = np.array([A.length for A in nodes])
    steps = np.diff(lengths)
    direction = order[0]
    worst = float(np.max(steps)) if direction == NONINCREASING else float(np.max(-steps))
    if worst <= CONSTANT_SLACK:
        return direction
    raise MonotonicityViolation(
        f"node lengths are not {direction}: largest offending step {worst!r}"
    )


def build_jackson(
    f: IntervalFunction,
    n: int,
    epsilon: float,
    grid: Optional[Grid] = None,
) -> JacksonApproximant:
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    f = f.rescaled()
    grid = grid or Grid.uniform(0.0, 1.0, default_grid_size())
    cls = length_monotonicity(f, grid)
    if cls is Monotonicity.NEITHER:
        raise NotMonotone(f"{f.name}: interval length is neither nonincreasing nor nondecreasing")
    nodes = sample_nodes(f, n)
    direction = _choose_direction(nodes, cls)

    delta = 1.0 / (4 * n)
    M = diameter_bound(f, grid) / 2
    eps_prime = EPS_PRIME_CAP if M == 0 else min(epsilon / (2 * n * M), EPS_PRIME_CAP)
    phis = [bump.transition(j / n, delta, eps_prime, STEP_DOWN, (0.0, 1.0)) for j in range(n)]
    if direction == NONINCREASING:
        transitions = phis
        base = nodes[n]
        diffs = [gh_diff(nodes[j], nodes[j + 1]) for j in range(n)]
    else:
        transitions = [
            TransitionFn(p.base, p.center, p.halfwidth, STEP_UP, p.domain, p.eps_prime) for p in phis
        ]
        base = nodes[0]
        diffs = [gh_diff(nodes[j + 1], nodes[j]) for j in range(n)]
    return JacksonApproximant(
        n=n,
        nodes=tuple(nodes),
        transitions=tuple(transitions),
        direction=direction,
        base=base,
        diffs=tuple(diffs),
        delta=delta,
        eps_prime=eps_prime,
        M=M,
    )


def eval_jackson(g: JacksonApproximant, x: float) -> Interval:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x={x!r} outside [0, 1]")
    xs = np.array([x], dtype=float)
    total = g.base
    for t, d in zip(g.transitions, g.diffs):
        total = add(total, scalar_mul(float(t(xs)[0]), d))
    return total


def jackson_bound(f: IntervalFunction, n: int) -> float:
    """``2 * omega(f, 1/n)``, or ``2 L / n`` without an analytic modulus."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    f = f.rescaled()
    if f.analytic_modulus is not None:
        return 2.0 * float(f.analytic_modulus(1.0 / n))
    if f.lipschitz_bound is not None:
        return 2.0 * f.lipschitz_bound / n
    raise NoModulusAvailable(f"{f.name} has neither an analytic modulus nor a Lipschitz bound")


def certified_error(f: IntervalFunction, g: JacksonApproximant, points: int = CERTIFY_POINTS):
    """Certificate of D_inf(f, g), or None when f has no Lipschitz bound."""
    return certified_distance(f.rescaled(), g, points=points)


def jackson_report(f: IntervalFunction, g: JacksonApproximant, points: int = CERTIFY_POINTS) -> dict:
    cert = certified_error(f, g, points)
    try:
        bound = jackson_bound(f, g.n)
    except NoModulusAvailable:
        bound = None
    return {
        "n": g.n,
        "direction": g.direction,
        "delta": g.delta,
        "eps_prime": g.eps_prime,
        "M": g.M,
        "certified_error": None if cert is None else cert.upper,
        "bound_2omega": bound,
    }
