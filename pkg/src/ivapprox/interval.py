"""Closed real intervals with Minkowski arithmetic, the Hausdorff metric and
the generalized Hukuhara (gH) difference.

Endpoints are plain floats; no outward rounding is performed.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidInterval, MonotonicityViolation

NONINCREASING = "nonincreasing"
NONDECREASING = "nondecreasing"


@dataclass(frozen=True, slots=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise InvalidInterval(f"NaN endpoint in [{lo!r},{hi!r}]")
        if lo > hi:
            raise InvalidInterval(f"lower endpoint {lo!r} exceeds upper endpoint {hi!r}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, a: float) -> "Interval":
        return cls(a, a)

    def __add__(self, other: "Interval") -> "Interval":
        if not isinstance(other, Interval):
            return NotImplemented
        return add(self, other)

    def __rmul__(self, lam: float) -> "Interval":
        return scalar_mul(lam, self)

    def __str__(self) -> str:
        return f"[{self.lo!r},{self.hi!r}]"

    @property
    def length(self) -> float:
        return length(self)

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}

    @classmethod
    def from_json(cls, d: dict) -> "Interval":
        return cls(d["lo"], d["hi"])

    @classmethod
    def from_text(cls, text: str) -> "Interval":
        m = _TEXT_RE.fullmatch(text.strip())
        if m is None:
            raise InvalidInterval(f"not an interval literal: {text!r}")
        return cls(float(m.group(1)), float(m.group(2)))


_TEXT_RE = re.compile(r"\[\s*([^,\s]+)\s*,\s*([^\]\s]+)\s*\]")

ZERO = Interval(0.0, 0.0)


def add(a: Interval, b: Interval) -> Interval:
    """Minkowski sum."""
    return Interval(a.lo + b.lo, a.hi + b.hi)


def scalar_mul(lam: float, a: Interval) -> Interval:
    """Image of ``a`` under multiplication by ``lam``; negative ``lam`` swaps endpoints."""
    if lam >= 0:
        return Interval(lam * a.lo, lam * a.hi)
    return Interval(lam * a.hi, lam * a.lo)


def hausdorff(a: Interval, b: Interval) -> float:
    return max(abs(a.lo - b.lo), abs(a.hi - b.hi))


def gh_diff(a: Interval, b: Interval) -> Interval:
    """gH-difference ``a ⊖ b``; defined for every pair of intervals."""
    d_lo = a.lo - b.lo
    d_hi = a.hi - b.hi
    return Interval(min(d_lo, d_hi), max(d_lo, d_hi))


def length(a: Interval) -> float:
    return a.hi - a.lo


def minkowski_sum(items: Iterable[Interval]) -> Interval:
    total = ZERO
    for item in items:
        total = add(total, item)
    return total


def check_length_monotone(chain: Sequence[Interval], direction: str) -> None:
    """Raise MonotonicityViolation unless consecutive lengths are monotone.

    Lengths are compared as computed floats with no slack.
    """
    if direction not in (NONINCREASING, NONDECREASING):
        raise ValueError(f"unknown direction {direction!r}")
    for j in range(len(chain) - 1):
        l0, l1 = length(chain[j]), length(chain[j + 1])
        bad = l0 < l1 if direction == NONINCREASING else l0 > l1
        if bad:
            raise MonotonicityViolation(
                f"{direction} lengths violated between index {j} and {j + 1}: "
                f"L={l0!r} then L={l1!r}"
            )


def telescope_sum(chain: Sequence[Interval], k: int, direction: str) -> Interval:
    """Evaluate the telescoped gH sum that cancels back to a single chain element.

    For ``nonincreasing`` lengths this returns
    ``A_n + (A_{n-1} ⊖ A_n) + ... + (A_k ⊖ A_{k+1})`` which equals ``A_k``.
    For ``nondecreasing`` lengths it returns
    ``A_0 + (A_1 ⊖ A_0) + ... + (A_{k+1} ⊖ A_k)`` which equals ``A_{k+1}``.
    """
    n = len(chain) - 1
    if n < 1:
        raise ValueError("chain needs at least two intervals")
    if not 0 <= k <= n - 1:
        raise ValueError(f"k={k} outside 0..{n - 1}")
    check_length_monotone(chain, direction)
    if direction == NONINCREASING:
        total = chain[n]
        for j in range(n - 1, k - 1, -1):
            total = add(total, gh_diff(chain[j], chain[j + 1]))
    else:
        total = chain[0]
        for j in range(0, k + 1):
            total = add(total, gh_diff(chain[j + 1], chain[j]))
    return total
