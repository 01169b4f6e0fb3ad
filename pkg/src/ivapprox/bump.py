"""Step polynomials ``p(x) = (1 - x^m)^n`` and the transition functions built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SearchExhausted

STEP_CAP = 2**20
# n only enters as a float multiplier of log1p(-x^m); bounded by float range
STEP_CAP_N = 1e300
MIN_POLY_CAP = 2**16
MIN_POLY_GRID = 201

STEP_DOWN = "step_down"
STEP_UP = "step_up"


@dataclass(frozen=True)
class BumpPoly:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"exponents must be positive, got m={self.m}, n={self.n}")

    def __call__(self, x):
        return bump_values(self, x)

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n}


def bump_values(p: BumpPoly, x) -> np.ndarray:
    """Vectorized ``(1 - x^m)^n`` for ``x`` already inside [0, 1].

    Computed as ``exp(n * log1p(-x^m))`` so that huge exponents keep their
    step shape instead of collapsing through ``1 - x^m == 1``.
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.exp(p.n * np.log1p(-np.power(x, p.m)))


def eval_bump(p: BumpPoly, x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"bump polynomials live on [0, 1], got x={x!r}")
    return float(bump_values(p, x))


def step_poly(a: float, b: float, delta: float) -> BumpPoly:
    """Smallest (m, n), ordered by m then n, with p(a) > 1 - delta and p(b) < delta.

    ``p`` is decreasing on [0, 1], so checking the two endpoints settles both
    conditions on the whole of [0, a] and [b, 1].
    """
    if not 0.0 <= a < b <= 1.0:
        raise ValueError(f"need 0 <= a < b <= 1, got a={a!r}, b={b!r}")
    if not 0.0 < delta < 0.5:
        raise ValueError(f"need 0 < delta < 1/2, got {delta!r}")
    log_delta = math.log(delta)
    log_keep = math.log1p(-delta)
    m0 = 1
    chunk = 256
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        while m0 <= STEP_CAP:
            ms = np.arange(m0, min(m0 + chunk, STEP_CAP + 1), dtype=float)
            lb = np.log1p(-np.power(b, ms))
            la = np.log1p(-np.power(a, ms))
            ratio = log_delta / lb
            n = np.where(np.isneginf(lb), 1.0, np.floor(ratio) + 1.0)
            n = np.where(lb == 0.0, np.inf, n)
            ok = (n <= STEP_CAP_N) & (np.maximum(n - 1.0, 1.0) * la > log_keep)
            for idx in np.nonzero(ok)[0]:
                found = _confirm(int(ms[idx]), int(n[idx]), a, b, delta)
                if found is not None:
                    return found
            m0 += chunk
            chunk = min(chunk * 2, 65536)
    raise SearchExhausted(f"no (m, n) with m <= {STEP_CAP} for a={a!r}, b={b!r}, delta={delta!r}")


def _confirm(m: int, n: int, a: float, b: float, delta: float):
    # the log-space estimate of n can be off by a unit (or, for huge n, by rounding)
    nn = max(n - 1, 1)
    for _ in range(8):
        p = BumpPoly(m, nn)
        if float(bump_values(p, b)) < delta:
            return p if float(bump_values(p, a)) > 1.0 - delta else None
        nn = nn + 1 if nn < 2**53 else int(np.nextafter(float(nn), np.inf))
    return None


def verify_step(p: BumpPoly, a: float, b: float, delta: float, points: int = 10001) -> tuple[int, float]:
    """Check the step conditions on a uniform grid of [0, 1].

    Returns the number of grid points subject to a condition and the largest
    violation (0.0 when every condition holds strictly).
    """
    xs = np.linspace(0.0, 1.0, points)
    v = bump_values(p, xs)
    left = xs <= a
    right = xs >= b
    worst = max(_violation(v[left] - (1.0 - delta)), _violation(delta - v[right]))
    return int(left.sum() + right.sum()), worst


def _violation(margin: np.ndarray) -> float:
    # margins must be strictly positive; a tie counts as the smallest violation
    bad = margin <= 0
    if not bad.any():
        return 0.0
    return max(float(np.max(-margin[bad])), float(np.nextafter(0.0, 1.0)))


@dataclass(frozen=True)
class MinApproxPoly:
    p1: BumpPoly
    p2: BumpPoly
    p3: BumpPoly
    p4: BumpPoly
    achieved_sup_error: float

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (1.0 - self.p1(x)) * self.p2(x) * (1.0 - self.p3(y)) * self.p4(y)


def min_poly_error(p1: BumpPoly, p2: BumpPoly, p3: BumpPoly, p4: BumpPoly, points: int = MIN_POLY_GRID) -> float:
    """Sup of |min(x, y) - q(x, y)| over a uniform grid of [0, 1]^2."""
    t = np.linspace(0.0, 1.0, points)
    fx = (1.0 - p1(t)) * p2(t)
    gy = (1.0 - p3(t)) * p4(t)
    q = np.outer(fx, gy)
    return float(np.max(np.abs(np.minimum.outer(t, t) - q)))


def min_poly(epsilon: float) -> MinApproxPoly:
    """Search exponents of q(x, y) = (1 - p1(x)) p2(x) (1 - p3(y)) p4(y) approximating min(x, y).

    Coordinate search: start from the best symmetric tuple (p1 = p3,
    p2 = p4) on a power-of-two lattice, then move one exponent at a time
    by doubling or halving while the grid sup error decreases.
    """
    if not 0.0 < epsilon < 1.0 / 32:
        raise ValueError(f"need 0 < epsilon < 1/32, got {epsilon!r}")
    powers = [2**k for k in range(17)]
    best = None
    for m1 in powers[::4]:
        for n1 in powers[::4]:
            for m2 in powers[::4]:
                for n2 in powers[::4]:
                    exps = (m1, n1, m2, n2, m1, n1, m2, n2)
                    err = _tuple_error(exps)
                    if best is None or err < best[0]:
                        best = (err, exps)
    err, exps = best
    improved = True
    while improved and err >= epsilon:
        improved = False
        for i in range(8):
            for factor in (2, 0.5):
                trial = list(exps)
                trial[i] = int(trial[i] * factor)
                if not 1 <= trial[i] <= MIN_POLY_CAP:
                    continue
                trial_err = _tuple_error(tuple(trial))
                if trial_err < err:
                    err, exps, improved = trial_err, tuple(trial), True
    if err >= epsilon:
        raise SearchExhausted(
            f"best grid sup error {err!r} does not reach epsilon={epsilon!r} "
            f"(exponents capped at {MIN_POLY_CAP})",
            best_error=err,
        )
    ps = [BumpPoly(exps[2 * i], exps[2 * i + 1]) for i in range(4)]
    return MinApproxPoly(*ps, achieved_sup_error=err)


def _tuple_error(exps) -> float:
    ps = [BumpPoly(exps[2 * i], exps[2 * i + 1]) for i in range(4)]
    return min_poly_error(*ps)


@dataclass(frozen=True)
class TransitionFn:
    """``p`` composed with the affine map of ``domain`` onto [0, 1].

    ``step_down`` is above ``1 - eps_prime`` left of the band
    ``[center - halfwidth, center + halfwidth]`` and below ``eps_prime``
    right of it; ``step_up`` is ``1 - step_down``.
    """

    base: BumpPoly
    center: float
    halfwidth: float
    orientation: str
    domain: tuple[float, float]
    eps_prime: float

    def __call__(self, t):
        a, b = self.domain
        u = np.clip((np.asarray(t, dtype=float) - a) / (b - a), 0.0, 1.0)
        v = bump_values(self.base, u)
        return 1.0 - v if self.orientation == STEP_UP else v

    def enclose(self, t0, t1):
        v0 = self(t0)
        v1 = self(t1)
        return np.minimum(v0, v1), np.maximum(v0, v1)

    def to_json(self) -> dict:
        return {
            "m": self.base.m,
            "n": self.base.n,
            "center": self.center,
            "halfwidth": self.halfwidth,
            "orientation": self.orientation,
            "domain": list(self.domain),
            "eps_prime": self.eps_prime,
        }

    @classmethod
    def from_json(cls, d: dict) -> "TransitionFn":
        return cls(
            BumpPoly(int(d["m"]), int(d["n"])),
            float(d["center"]),
            float(d["halfwidth"]),
            d["orientation"],
            (float(d["domain"][0]), float(d["domain"][1])),
            float(d["eps_prime"]),
        )


def transition(center: float, halfwidth: float, eps_prime: float, orientation: str, domain) -> TransitionFn:
    """Synthesize a transition whose band is ``[center - halfwidth, center + halfwidth]``."""
    return transition_between(center - halfwidth, center + halfwidth, eps_prime, orientation, domain,
                              center=center, halfwidth=halfwidth)


def transition_between(left: float, right: float, eps_prime: float, orientation: str, domain,
                       center: float | None = None, halfwidth: float | None = None) -> TransitionFn:
    """Transition switching inside ``[left, right]``.

    Band edges are mapped to [0, 1] with the same arithmetic used at
    evaluation time, so a grid point equal to an edge satisfies the
    condition exactly.  Edges beyond the domain make that side vacuous.
    """
    if orientation not in (STEP_DOWN, STEP_UP):
        raise ValueError(f"unknown orientation {orientation!r}")
    if not 0.0 < eps_prime < 0.5:
        raise ValueError(f"need 0 < eps_prime < 1/2, got {eps_prime!r}")
    if not left < right:
        raise ValueError("transition band must have positive width")
    a, b = float(domain[0]), float(domain[1])
    if right <= a or left >= b:
        raise ValueError(f"band [{left}, {right}] misses the domain [{a}, {b}]")
    ua = max(0.0, (left - a) / (b - a))
    ub = min(1.0, (right - a) / (b - a))
    base = step_poly(ua, ub, eps_prime)
    if center is None:
        center = 0.5 * (left + right)
        halfwidth = 0.5 * (right - left)
    return TransitionFn(base, float(center), float(halfwidth), orientation, (a, b), float(eps_prime))
