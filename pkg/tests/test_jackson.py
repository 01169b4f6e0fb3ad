import json

import numpy as np
import pytest

from ivapprox import catalog
from ivapprox.errors import DomainError, NoModulusAvailable, NotMonotone
from ivapprox.functions import IntervalFunction, constant_function
from ivapprox.interval import NONDECREASING, NONINCREASING, Interval, hausdorff
from ivapprox.jackson import (
    JacksonApproximant,
    build_jackson,
    certified_error,
    eval_jackson,
    jackson_bound,
    jackson_report,
    sample_nodes,
)

EPS = 0.01
NS = (4, 8, 16, 32)


def test_sample_nodes_examples():
    assert sample_nodes(catalog.get("const01"), 4) == [Interval(0, 1)] * 5
    assert sample_nodes(catalog.get("tent"), 2) == [Interval(-1, 1), Interval(-0.5, 0.5), Interval(0, 0)]
    assert sample_nodes(catalog.get("parab"), 2) == [Interval(0, 0), Interval(0.25, 0.75), Interval(0, 2)]
    with pytest.raises(ValueError):
        sample_nodes(catalog.get("tent"), 0)


def test_jackson_bound_examples():
    assert jackson_bound(catalog.get("tent"), 4) == 0.5
    assert jackson_bound(catalog.get("const01"), 7) == 0.0
    f = IntervalFunction((0.0, 1.0), lambda x: 2 * x, lambda x: 2 * x + 1, lipschitz_bound=2.0)
    assert jackson_bound(f, 8) <= 0.5
    bare = IntervalFunction((0.0, 1.0), lambda x: x, lambda x: x + 1)
    with pytest.raises(NoModulusAvailable):
        jackson_bound(bare, 3)


def test_constant_is_exact():
    g = build_jackson(catalog.get("const01"), 5, EPS)
    assert all(d == Interval(0, 0) for d in g.diffs)
    for x in (0.0, 0.13, 0.5, 1.0):
        assert g(x) == Interval(0, 1)


def test_neither_class_rejected():
    with pytest.raises(NotMonotone):
        build_jackson(catalog.get("sinbump"), 8, EPS)


def test_directions():
    assert build_jackson(catalog.get("tent"), 4, EPS).direction == NONINCREASING
    assert build_jackson(catalog.get("parab"), 4, EPS).direction == NONDECREASING


def test_tent_example():
    f = catalog.get("tent")
    g = build_jackson(f, 4, EPS)
    assert g.delta == 1 / 16
    assert certified_error(f, g).upper <= 0.51


@pytest.mark.parametrize("name", ["tent", "parab"])
def test_bound_compliance_and_convergence(name):
    f = catalog.get(name)
    errs = []
    for n in NS:
        g = build_jackson(f, n, EPS)
        errs.append(certified_error(f, g).upper)
        assert errs[-1] <= jackson_bound(f, n) + EPS
    assert all(b <= a + 1e-9 for a, b in zip(errs, errs[1:]))


@pytest.mark.parametrize("name", ["tent", "parab", "sqshift"])
@pytest.mark.parametrize("n", [4, 8])
def test_nodes_and_diffs(name, n):
    f = catalog.get(name)
    g = build_jackson(f, n, EPS)
    w = f.analytic_modulus(1.0 / n)
    for k, A in enumerate(g.nodes):
        assert hausdorff(g(k / n), A) <= 2 * w + EPS
    for j, d in enumerate(g.diffs):
        norm = hausdorff(d, Interval(0, 0))
        assert norm == pytest.approx(hausdorff(g.nodes[j], g.nodes[j + 1]), abs=1e-15)
        assert norm <= w + 1e-12


def test_endpoints_near_extreme_nodes():
    f = catalog.get("tent")
    g = build_jackson(f, 8, EPS)
    slack = g.n * g.eps_prime * 2 * g.M
    assert hausdorff(g(1.0), g.nodes[-1]) <= slack
    assert hausdorff(g(0.0), g.nodes[0]) <= slack
    with pytest.raises(DomainError):
        eval_jackson(g, -0.1)


def test_single_split_is_monotone_in_dh():
    f = catalog.get("tent")
    g = build_jackson(f, 1, EPS)
    xs = np.linspace(0, 1, 2001)
    d0 = [hausdorff(g(x), g.nodes[0]) for x in xs]
    assert all(b >= a - 1e-15 for a, b in zip(d0, d0[1:]))


def test_reflection_of_symmetric_tent_matches():
    # reflection mirrors the nodes, but the step polynomial is not mirror symmetric;
    # only the tent, whose two builds coincide node by node, is equal to 1e-9
    f = catalog.get("tent")
    r = f.reflected()
    for n in (4, 8):
        a = certified_error(f, build_jackson(f, n, EPS)).upper
        gr = build_jackson(r, n, EPS)
        assert gr.direction == NONDECREASING
        b = certified_error(r, gr).upper
        assert b <= jackson_bound(r, n) + EPS
        assert abs(a - b) < 1e-9


def test_reflected_parab_stays_in_bound():
    r = catalog.get("parab").reflected()
    for n in NS:
        g = build_jackson(r, n, EPS)
        assert g.direction == NONINCREASING
        assert certified_error(r, g).upper <= jackson_bound(r, n) + EPS


def test_other_domain_is_rescaled():
    f = IntervalFunction((0.0, 2.0), lambda x: -(2 - x), lambda x: 2 - x, lipschitz_bound=1.0)
    g = build_jackson(f, 4, EPS)
    assert g.direction == NONINCREASING
    assert certified_error(f, g).upper <= jackson_bound(f, 4) + EPS


def test_report_and_json():
    f = catalog.get("parab")
    g = build_jackson(f, 8, EPS)
    rep = jackson_report(f, g)
    assert set(rep) == {"n", "direction", "delta", "eps_prime", "M", "certified_error", "bound_2omega"}
    h = JacksonApproximant.from_json(json.loads(json.dumps(g.to_json())))
    xs = np.linspace(0, 1, 5001)
    a, b = g.sample(xs), h.sample(xs)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_valid_intervals_everywhere():
    g = build_jackson(catalog.get("parab"), 16, EPS)
    lo, hi = g.sample(np.linspace(0, 1, 20001))
    assert np.all(lo <= hi)
    w = g.weights(np.linspace(0, 1, 2001))
    assert w.min() >= 0 and w.max() <= 1
