"""Built-in interval-valued functions on [0, 1] with exact moduli of continuity.

=========  ===========================  ==============
name       f(x)                         len(f)
=========  ===========================  ==============
const01    [0, 1]                       constant
tent       [-(1-x), 1-x]                nonincreasing
parab      [x-x^2, x+x^2]               nondecreasing
sinshift   [sin x - 1, sin x + 1]       constant
sinbump    [-sin(pi x), sin(pi x)]      neither
ident      [x, x]                       constant
sqshift    [x^2, x^2 + 1]               constant
=========  ===========================  ==============
"""

from __future__ import annotations

import math

import numpy as np

from .functions import IntervalFunction


def _clip(d: float) -> float:
    return min(max(d, 0.0), 1.0)


def _const01() -> IntervalFunction:
    return IntervalFunction(
        (0.0, 1.0),
        lambda x: np.zeros(np.shape(x)),
        lambda x: np.ones(np.shape(x)),
        analytic_modulus=lambda d: 0.0,
        lipschitz_bound=0.0,
        name="const01",
    )


def _tent() -> IntervalFunction:
    # d_H(f(x), f(y)) = |x - y|
    return IntervalFunction(
        (0.0, 1.0),
        lambda x: -(1.0 - np.asarray(x, dtype=float)),
        lambda x: 1.0 - np.asarray(x, dtype=float),
        analytic_modulus=_clip,
        lipschitz_bound=1.0,
        name="tent",
    )


def _parab() -> IntervalFunction:
    # d_H = |x - y| (1 + x + y); the sup over |x - y| < d sits at y = 1
    def omega(d):
        d = _clip(d)
        return d * (3.0 - d)

    return IntervalFunction(
        (0.0, 1.0),
        lambda x: np.asarray(x, dtype=float) - np.asarray(x, dtype=float) ** 2,
        lambda x: np.asarray(x, dtype=float) + np.asarray(x, dtype=float) ** 2,
        analytic_modulus=omega,
        lipschitz_bound=3.0,
        name="parab",
    )


def _sinshift() -> IntervalFunction:
    # sin is concave on [0, 1], so the steepest window starts at 0
    return IntervalFunction(
        (0.0, 1.0),
        lambda x: np.sin(x) - 1.0,
        lambda x: np.sin(x) + 1.0,
        analytic_modulus=lambda d: math.sin(_clip(d)),
        lipschitz_bound=1.0,
        name="sinshift",
    )


def _sinbump() -> IntervalFunction:
    return IntervalFunction(
        (0.0, 1.0),
        lambda x: -np.sin(np.pi * np.asarray(x, dtype=float)),
        lambda x: np.sin(np.pi * np.asarray(x, dtype=float)),
        analytic_modulus=lambda d: math.sin(math.pi * min(max(d, 0.0), 0.5)),
        lipschitz_bound=math.pi,
        name="sinbump",
    )


def _ident() -> IntervalFunction:
    return IntervalFunction(
        (0.0, 1.0),
        lambda x: np.asarray(x, dtype=float).copy(),
        lambda x: np.asarray(x, dtype=float).copy(),
        analytic_modulus=_clip,
        lipschitz_bound=1.0,
        name="ident",
    )


def _sqshift() -> IntervalFunction:
    # d_H = |x^2 - y^2| = |x - y| (x + y)
    def omega(d):
        d = _clip(d)
        return d * (2.0 - d)

    return IntervalFunction(
        (0.0, 1.0),
        lambda x: np.asarray(x, dtype=float) ** 2,
        lambda x: np.asarray(x, dtype=float) ** 2 + 1.0,
        analytic_modulus=omega,
        lipschitz_bound=2.0,
        name="sqshift",
    )


_BUILDERS = {
    "const01": _const01,
    "tent": _tent,
    "parab": _parab,
    "sinshift": _sinshift,
    "sinbump": _sinbump,
    "ident": _ident,
    "sqshift": _sqshift,
}

NAMES = tuple(_BUILDERS)


def get(name: str) -> IntervalFunction:
    try:
        f = _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown catalog function {name!r}; choose from {', '.join(NAMES)}") from None
    object.__setattr__(f, "source", {"catalog": name})
    return f
