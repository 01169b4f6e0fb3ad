"""Seeded property suites behind the ``verify`` command.

Every law is checked on ``cases`` random instances and reports its largest
violation together with the first instance that broke it.  Inequalities and
exact identities draw dyadic endpoints so that float arithmetic is exact
and a single ulp of violation is a genuine failure.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import catalog
from . import interval as iv
from .interval import NONDECREASING, NONINCREASING, ZERO, Interval

SCHEMA_VERSION = 1
DEFAULT_CASES = 10_000
EQ_TOL = 1e-12
# dyadic endpoints: multiples of 2^-10 in [-8, 8]
_DYADIC = 1024
_SPAN = 8


@dataclass
class LawResult:
    name: str
    suite: str
    cases: int
    tolerance: float
    max_violation: float
    counterexample: Optional[dict]

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "suite": self.suite,
            "cases": self.cases,
            "tolerance": self.tolerance,
            "max_violation": self.max_violation,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


class _Gen:
    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def dyadic(self) -> float:
        return int(self.rng.integers(-_SPAN * _DYADIC, _SPAN * _DYADIC + 1)) / _DYADIC

    def interval(self) -> Interval:
        a, b = self.dyadic(), self.dyadic()
        return Interval(min(a, b), max(a, b))

    def real_interval(self) -> Interval:
        a, b = self.rng.uniform(-10, 10, size=2)
        return Interval(float(min(a, b)), float(max(a, b)))

    def scale(self) -> float:
        # nonnegative dyadic scalar in [0, 4]
        return int(self.rng.integers(0, 4 * 256 + 1)) / 256

    def positive_real(self) -> float:
        return float(self.rng.uniform(1e-3, 10))


def _show(**kw) -> dict:
    out = {}
    for k, v in kw.items():
        if isinstance(v, Interval):
            out[k] = str(v)
        elif isinstance(v, (list, tuple)):
            out[k] = [str(x) if isinstance(x, Interval) else x for x in v]
        else:
            out[k] = v
    return out


def _check(name, suite, cases, tol, gen, case_fn) -> LawResult:
    """``case_fn(gen)`` returns (violation, inputs); exceptions count as infinite violation."""
    worst = 0.0
    example = None
    for _ in range(cases):
        inputs = {}
        try:
            v, inputs = case_fn(gen)
        except Exception as exc:  # a law that crashes is a failed law
            v = math.inf
            inputs = dict(inputs, error=f"{type(exc).__name__}: {exc}")
        if v > worst:
            worst = v
        if v > tol and example is None:
            example = inputs
    return LawResult(name, suite, cases, tol, worst, example)


# metric suite


def _symmetry(g):
    A, B = g.real_interval(), g.real_interval()
    return abs(iv.hausdorff(A, B) - iv.hausdorff(B, A)), _show(A=A, B=B)


def _identity(g):
    A = g.interval()
    B = A if g.rng.random() < 0.5 else g.interval()
    d = iv.hausdorff(A, B)
    bad = (d == 0.0) != (A == B)
    return (1.0 if bad else 0.0), _show(A=A, B=B)


def _triangle(g):
    A, B, C = g.interval(), g.interval(), g.interval()
    v = iv.hausdorff(A, C) - (iv.hausdorff(A, B) + iv.hausdorff(B, C))
    return max(v, 0.0), _show(A=A, B=B, C=C)


def _subadditive(g):
    k = int(g.rng.integers(1, 9))
    As = [g.interval() for _ in range(k)]
    Bs = [g.interval() for _ in range(k)]
    lhs = iv.hausdorff(iv.minkowski_sum(As), iv.minkowski_sum(Bs))
    rhs = sum(iv.hausdorff(a, b) for a, b in zip(As, Bs))
    return max(lhs - rhs, 0.0), _show(A=As, B=Bs)


def _homogeneous(g):
    A, B = g.real_interval(), g.real_interval()
    alpha = g.positive_real()
    v = abs(iv.hausdorff(iv.scalar_mul(alpha, A), iv.scalar_mul(alpha, B)) - alpha * iv.hausdorff(A, B))
    return v, _show(A=A, B=B, alpha=alpha)


def _scale_gap(g):
    A = g.interval()
    alpha, beta = g.scale(), g.scale()
    v = abs(iv.hausdorff(iv.scalar_mul(alpha, A), iv.scalar_mul(beta, A)) - abs(alpha - beta) * iv.hausdorff(A, ZERO))
    return v, _show(A=A, alpha=alpha, beta=beta)


def _mixed_scale(g):
    A, B = g.interval(), g.interval()
    alpha, beta = g.scale(), g.scale()
    lhs = iv.hausdorff(iv.scalar_mul(alpha, A), iv.scalar_mul(beta, B))
    rhs = abs(alpha - beta) * iv.hausdorff(A, ZERO) + beta * iv.hausdorff(A, B)
    return max(lhs - rhs, 0.0), _show(A=A, B=B, alpha=alpha, beta=beta)


def _translation(g):
    A, B, C = g.interval(), g.interval(), g.interval()
    v = abs(iv.hausdorff(iv.add(A, C), iv.add(B, C)) - iv.hausdorff(A, B))
    return v, _show(A=A, B=B, C=C)


# gH suite


def _gh_self(g):
    A = g.real_interval()
    D = iv.gh_diff(A, A)
    return iv.hausdorff(D, ZERO), _show(A=A, result=D)


def _gh_norm(g):
    A, B = g.real_interval(), g.real_interval()
    v = abs(iv.hausdorff(iv.gh_diff(A, B), ZERO) - iv.hausdorff(A, B))
    return v, _show(A=A, B=B)


def _gh_cancel(g):
    A, B = g.interval(), g.interval()
    if A.length > B.length:
        A, B = B, A
    S = iv.add(A, iv.gh_diff(B, A))
    return iv.hausdorff(S, B), _show(A=A, B=B, result=S)


def _gh_cases(g):
    A, B = g.interval(), g.interval()
    D = iv.gh_diff(A, B)
    first = iv.add(B, D)
    second = iv.add(A, iv.scalar_mul(-1.0, D))
    return min(iv.hausdorff(first, A), iv.hausdorff(second, B)), _show(A=A, B=B, result=D)


def _gh_singleton(g):
    a, b = g.dyadic(), g.dyadic()
    D = iv.gh_diff(Interval.point(a), Interval.point(b))
    return iv.hausdorff(D, Interval.point(a - b)), _show(a=a, b=b, result=D)


# telescoping suite


def _monotone_chain(g, direction):
    n = int(g.rng.integers(1, 16))
    lengths = sorted(int(g.rng.integers(0, 8 * _DYADIC)) for _ in range(n + 1))
    if direction == NONINCREASING:
        lengths.reverse()
    chain = []
    for L in lengths:
        lo = g.dyadic()
        chain.append(Interval(lo, lo + L / _DYADIC))
    return chain


def _telescope(direction):
    def case(g):
        chain = _monotone_chain(g, direction)
        n = len(chain) - 1
        k = int(g.rng.integers(0, n))
        got = iv.telescope_sum(chain, k, direction)
        want = chain[k] if direction == NONINCREASING else chain[k + 1]
        v = 0.0 if got == want else max(iv.hausdorff(got, want), 5e-324)
        return v, _show(chain=chain, k=k, result=got)

    return case


# partition-sum and bound-compliance suites, vectorized over fixed constructions


def _partition_law(partitions):
    def run(gen, cases):
        which = gen.rng.integers(0, len(partitions), size=cases)
        ts = gen.rng.uniform(0.0, 1.0, size=cases)
        viol = np.zeros(cases)
        for j, (_, _, part) in enumerate(partitions):
            sel = which == j
            viol[sel] = np.abs(part.values(ts[sel]).sum(axis=0) - 1.0)
        k = int(np.argmax(viol))
        name, eps, _ = partitions[int(which[k])]
        return viol, _show(function=name, epsilon=eps, t=float(ts[k]))

    return run


def _bound_law(models):
    def run(gen, cases):
        which = gen.rng.integers(0, len(models), size=cases)
        xs = gen.rng.uniform(0.0, 1.0, size=cases)
        viol = np.zeros(cases)
        dist = np.zeros(cases)
        for j, (_, f, model, bound) in enumerate(models):
            sel = which == j
            flo, fhi = f.sample(xs[sel])
            glo, ghi = model.sample(xs[sel])
            dist[sel] = np.maximum(np.abs(flo - glo), np.abs(fhi - ghi))
            viol[sel] = np.maximum(dist[sel] - bound, 0.0)
        k = int(np.argmax(viol))
        label, _, _, bound = models[int(which[k])]
        return viol, _show(model=label, x=float(xs[k]), distance=float(dist[k]), bound=bound)

    return run


class _Vectorized:
    """Marks a law that draws and checks all cases in one call."""

    def __init__(self, run):
        self.run = run


def _check_vectorized(name, suite, cases, tol, gen, law) -> LawResult:
    viol, example = law.run(gen, cases)
    worst = float(np.max(viol)) if cases else 0.0
    return LawResult(name, suite, cases, tol, worst, example if worst > tol else None)


@functools.lru_cache(maxsize=1)
def _fixed_constructions():
    from .jackson import build_jackson, jackson_bound
    from .stone_weierstrass import sw_approximant

    partitions = []
    sw_models = []
    for name in ("tent", "parab", "sinbump"):
        for eps in (0.5, 0.2):
            f = catalog.get(name)
            g, _ = sw_approximant(f, eps)
            partitions.append((name, eps, g.weights))
            sw_models.append((f"sw:{name}:{eps!r}", f, g, eps))
    jk_models = []
    for name in ("tent", "parab"):
        for n in (4, 8):
            f = catalog.get(name)
            g = build_jackson(f, n, 0.01)
            jk_models.append((f"jackson:{name}:{n}", f, g, jackson_bound(f, n) + 0.01))
    return tuple(partitions), tuple(sw_models + jk_models)


SUITES = ("metric", "gH", "telescoping", "partition-sum", "bound-compliance")


def _laws(suite: str) -> list[tuple[str, float, Callable]]:
    if suite == "metric":
        return [
            ("d_H(A,B)=d_H(B,A)", 0.0, _symmetry),
            ("d_H(A,B)=0 iff A=B", 0.0, _identity),
            ("d_H(A,C)<=d_H(A,B)+d_H(B,C)", 0.0, _triangle),
            ("d_H(sum A_i,sum B_i)<=sum d_H(A_i,B_i)", 0.0, _subadditive),
            ("d_H(aA,aB)=a d_H(A,B)", EQ_TOL, _homogeneous),
            ("d_H(aA,bA)=|a-b| d_H(A,0)", 0.0, _scale_gap),
            ("d_H(aA,bB)<=|a-b| d_H(A,0)+b d_H(A,B)", 0.0, _mixed_scale),
            ("d_H(A+C,B+C)=d_H(A,B)", 0.0, _translation),
        ]
    if suite == "gH":
        return [
            ("A⊖A=0", 0.0, _gh_self),
            ("d_H(A⊖B,0)=d_H(A,B)", EQ_TOL, _gh_norm),
            ("A+(B⊖A)=B if L(A)<=L(B)", 0.0, _gh_cancel),
            ("A=B+(A⊖B) or B=A+(-1)(A⊖B)", 0.0, _gh_cases),
            ("[a,a]⊖[b,b]=[a-b,a-b]", 0.0, _gh_singleton),
        ]
    if suite == "telescoping":
        return [
            ("telescoping nonincreasing", 0.0, _telescope(NONINCREASING)),
            ("telescoping nondecreasing", 0.0, _telescope(NONDECREASING)),
        ]
    partitions, models = _fixed_constructions()
    if suite == "partition-sum":
        return [("sum psi_i=1", 1e-9, _Vectorized(_partition_law(partitions)))]
    if suite == "bound-compliance":
        return [("d_H(f(x),g(x))<=bound", 0.0, _Vectorized(_bound_law(models)))]
    raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")


def run_suite(suite: str, seed: int, cases: int = DEFAULT_CASES) -> list[LawResult]:
    idx = SUITES.index(suite) if suite in SUITES else -1
    results = []
    for j, (name, tol, fn) in enumerate(_laws(suite)):
        rng = np.random.default_rng(np.random.SeedSequence([seed, idx, j]))
        check = _check_vectorized if isinstance(fn, _Vectorized) else _check
        results.append(check(name, suite, cases, tol, _Gen(rng), fn))
    return results


def run_verify(seed: int, cases: int = DEFAULT_CASES, suites=SUITES) -> dict:
    laws = []
    for suite in suites:
        laws.extend(run_suite(suite, seed, cases))
    failed = [r.name for r in laws if not r.passed]
    return {
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "cases_per_law": cases,
        "passed": not failed,
        "failed_laws": failed,
        "laws": [r.to_json() for r in laws],
    }
