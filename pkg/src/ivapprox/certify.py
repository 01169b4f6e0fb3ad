"""Sup-norm certificates by cell enclosure with adaptive refinement.

The domain is cut into the cells of a uniform grid.  On every cell an
enclosure gives an upper bound of the quantity of interest; cells whose
bound exceeds the best sampled value by more than ``tol`` are split and
re-bounded.  The certificate is the largest bound over the final cells.

Enclosures come from monotonicity (bump transitions, sigmoids) or from
Lipschitz constants (the target function).  Floating-point rounding is not
controlled; bounds are exact in real arithmetic only.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

DEFAULT_POINTS = 10001
DEFAULT_TOL = 1e-4


class Certificate(NamedTuple):
    estimate: float
    upper: float
    cells: int


def certify_sup(
    point_fn: Callable[[np.ndarray], np.ndarray],
    cell_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    a: float,
    b: float,
    points: int = DEFAULT_POINTS,
    tol: float = DEFAULT_TOL,
    split: int = 8,
    rounds: int = 8,
) -> Certificate:
    xs = np.linspace(a, b, points)
    estimate = float(np.max(point_fn(xs)))
    t0, t1 = xs[:-1], xs[1:]
    bound = cell_fn(t0, t1)
    done_max = -np.inf
    total = t0.size
    for _ in range(rounds):
        hot = bound > estimate + tol
        if not hot.any():
            break
        if (~hot).any():
            done_max = max(done_max, float(np.max(bound[~hot])))
        h0, h1 = t0[hot], t1[hot]
        frac = np.linspace(0.0, 1.0, split + 1)
        grid = h0[:, None] + (h1 - h0)[:, None] * frac[None, :]
        grid[:, -1] = h1
        inner = grid[:, 1:-1].ravel()
        if inner.size:
            estimate = max(estimate, float(np.max(point_fn(inner))))
        t0 = grid[:, :-1].ravel()
        t1 = grid[:, 1:].ravel()
        bound = cell_fn(t0, t1)
        total += t0.size
    upper = max(done_max, float(np.max(bound)), estimate)
    return Certificate(estimate, upper, total)


def distance_bound(f_enc, g_enc) -> np.ndarray:
    """Per-cell bound of d_H from endpoint enclosures ``(lo_min, lo_max, hi_min, hi_max)``."""
    flo0, flo1, fhi0, fhi1 = f_enc
    glo0, glo1, ghi0, ghi1 = g_enc
    return np.maximum.reduce([flo1 - glo0, glo1 - flo0, fhi1 - ghi0, ghi1 - fhi0])


def certified_distance(f, g, points: int = DEFAULT_POINTS, tol: float = DEFAULT_TOL) -> Certificate | None:
    """Certified sup_t d_H(f(t), g(t)).

    ``f`` and ``g`` need ``sample(xs) -> (lo, hi)`` and
    ``enclose(t0, t1) -> (lo_min, lo_max, hi_min, hi_max)``.  Returns None
    when ``f`` has no Lipschitz bound to enclose it with.
    """
    if getattr(f, "lipschitz_bound", 0.0) is None:
        return None
    a, b = f.domain

    def point_fn(xs):
        flo, fhi = f.sample(xs)
        glo, ghi = g.sample(xs)
        return np.maximum(np.abs(flo - glo), np.abs(fhi - ghi))

    def cell_fn(t0, t1):
        return distance_bound(f.enclose(t0, t1), g.enclose(t0, t1))

    return certify_sup(point_fn, cell_fn, a, b, points, tol)


def scalar_gap_bound(u_enc, v_enc) -> np.ndarray:
    u0, u1 = u_enc
    v0, v1 = v_enc
    return np.maximum(u1 - v0, v1 - u0)
