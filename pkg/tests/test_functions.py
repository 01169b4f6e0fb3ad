import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ivapprox import catalog
from ivapprox.errors import DomainError, DomainMismatch, EndpointOrderError, InvalidDelta, InvalidFunction, ParseError
from ivapprox.functions import (
    Grid,
    IntervalFunction,
    Monotonicity,
    constant_function,
    default_grid_size,
    diameter_bound,
    evaluate,
    grid_modulus,
    length_monotonicity,
    modulus,
    parse_function,
    sup_metric,
)
from ivapprox.interval import Interval

G101 = Grid.uniform(0.0, 1.0, 101)
G1001 = Grid.uniform(0.0, 1.0, 1001)


def test_grid_invariants():
    g = Grid.uniform(-1.0, 2.0, 31)
    assert g.resolution == 31
    assert g.domain == (-1.0, 2.0)
    assert g.spacing <= 3.0 / 30 + 1e-15
    with pytest.raises(ValueError):
        Grid(np.array([0.0, 0.5, 0.5, 1.0]))
    with pytest.raises(ValueError):
        g.points[0] = 5.0


def test_grid_default_env(monkeypatch):
    monkeypatch.delenv("IVA_GRID_DEFAULT", raising=False)
    assert default_grid_size() == 1001
    monkeypatch.setenv("IVA_GRID_DEFAULT", "257")
    assert default_grid_size() == 257
    monkeypatch.setenv("IVA_GRID_DEFAULT", "3")
    with pytest.raises(ValueError):
        default_grid_size()


def test_eval_examples():
    s = IntervalFunction((0.0, 1.0), np.sin, np.sin)
    assert evaluate(s, 0.0) == Interval(0.0, 0.0)
    assert catalog.get("tent")(0.0) == Interval(-1.0, 1.0)
    x = 0.5
    assert catalog.get("parab")(x) == Interval(x - x * x, x + x * x) == Interval(0.25, 0.75)


def test_eval_outside_domain():
    with pytest.raises(DomainError):
        catalog.get("tent")(1.5)


def test_lazy_endpoint_breach():
    # valid on the validation grid, crossed just off it
    f = IntervalFunction(
        (0.0, 1.0),
        lambda x: np.where(np.isclose(x, 0.1234567), 1.0, 0.0),
        lambda x: np.full(np.shape(x), 0.5),
    )
    with pytest.raises(InvalidFunction):
        f(0.1234567)


def test_construction_rejects_crossing():
    with pytest.raises(EndpointOrderError) as info:
        IntervalFunction((0.0, 1.0), lambda x: x, lambda x: x - 1)
    assert info.value.x == 0.0


def test_sup_metric_examples():
    f = catalog.get("parab")
    assert sup_metric(f, f, G101).estimate == 0.0
    c1 = constant_function(Interval(0, 1))
    c2 = constant_function(Interval(0, 2))
    assert sup_metric(c1, c2, G101).estimate == 1.0
    ident = catalog.get("ident")
    shifted = IntervalFunction((0.0, 1.0), lambda x: x + 0.1, lambda x: x + 0.1, lipschitz_bound=1.0)
    d = sup_metric(ident, shifted, G101)
    assert d.estimate == pytest.approx(0.1, abs=1e-15)
    assert d.upper == pytest.approx(0.1 + 2 * 0.01 / 2)


def test_sup_metric_needs_matching_domains():
    other = IntervalFunction((0.0, 2.0), lambda x: x, lambda x: x)
    with pytest.raises(DomainMismatch):
        sup_metric(catalog.get("ident"), other, G101)
    with pytest.raises(DomainMismatch):
        sup_metric(catalog.get("ident"), catalog.get("tent"), Grid.uniform(0.0, 0.5, 11))


def test_sup_metric_upper_bounds_dense_estimate():
    f, g = catalog.get("sinbump"), catalog.get("parab")
    coarse = sup_metric(f, g, Grid.uniform(0, 1, 11))
    dense = sup_metric(f, g, Grid.uniform(0, 1, 100001)).estimate
    assert coarse.estimate <= dense <= coarse.upper


@pytest.mark.parametrize("a,b", [(n1, n2) for n1 in catalog.NAMES for n2 in catalog.NAMES if n1 < n2])
def test_sup_metric_refinement_monotone(a, b):
    # nested grids: 11 points sit inside 101, which sit inside 1001
    f, g = catalog.get(a), catalog.get(b)
    vals = [sup_metric(f, g, Grid.uniform(0, 1, n)).estimate for n in (11, 101, 1001)]
    assert vals[0] <= vals[1] <= vals[2]


triples = st.tuples(*[st.sampled_from(catalog.NAMES)] * 3)


@given(triples)
def test_sup_metric_pseudometric(names):
    f, g, h = (catalog.get(n) for n in names)
    dfg = sup_metric(f, g, G101).estimate
    assert dfg == sup_metric(g, f, G101).estimate
    assert sup_metric(f, h, G101).estimate <= dfg + sup_metric(g, h, G101).estimate + 1e-12


@settings(max_examples=30)
@given(triples)
def test_sup_metric_translation_invariance(names):
    f, g, h = (catalog.get(n) for n in names)
    lhs = sup_metric(f.shifted(h), g.shifted(h), G101).estimate
    assert lhs == pytest.approx(sup_metric(f, g, G101).estimate, abs=1e-12)


def test_modulus_examples():
    c = catalog.get("const01")
    assert modulus(c, 0.3, G101) == 0.0
    assert modulus(catalog.get("tent"), 0.25, G1001) == 0.25
    assert modulus(catalog.get("sqshift"), 0.5, G1001) == 0.75


def test_modulus_rejects_bad_delta():
    with pytest.raises(InvalidDelta):
        modulus(catalog.get("tent"), 0.0, G101)


def test_grid_modulus_strict_gap():
    # |x - y| < delta: pairs exactly delta apart do not count
    f = catalog.get("ident")
    assert grid_modulus(f, 0.2495, G101) == pytest.approx(0.24)
    assert grid_modulus(f, 0.2505, G101) == pytest.approx(0.25)


@pytest.mark.parametrize("name", catalog.NAMES)
@pytest.mark.parametrize("delta", [0.01, 0.1, 0.25, 0.5, 1.0])
def test_analytic_modulus_agrees_with_grid(name, delta):
    f = catalog.get(name)
    est = grid_modulus(f, delta, G1001)
    exact = f.analytic_modulus(delta)
    assert est <= exact + 1e-9
    # the grid misses at most one spacing of |x - y| and L * h of value
    assert est >= exact - 2 * f.lipschitz_bound * G1001.spacing - 1e-12


@pytest.mark.parametrize("name", catalog.NAMES)
def test_modulus_monotone_in_delta(name):
    f = catalog.get(name)
    vals = [grid_modulus(f, d, G101) for d in (0.01, 0.05, 0.1, 0.3, 0.7, 1.0)]
    assert vals == sorted(vals)


@pytest.mark.parametrize(
    "name,cls",
    [
        ("tent", Monotonicity.NONINCREASING),
        ("parab", Monotonicity.NONDECREASING),
        ("sinbump", Monotonicity.NEITHER),
        ("const01", Monotonicity.CONSTANT),
        ("sinshift", Monotonicity.CONSTANT),
        ("sqshift", Monotonicity.CONSTANT),
    ],
)
def test_length_monotonicity(name, cls):
    assert length_monotonicity(catalog.get(name), G1001) is cls


def test_reflection_swaps_direction():
    assert length_monotonicity(catalog.get("tent").reflected(), G1001) is Monotonicity.NONDECREASING


def test_rescaled_domain():
    f = parse_function("-(2-x)", "2-x", (0.0, 2.0), lipschitz_bound=1.0)
    r = f.rescaled()
    assert r.domain == (0.0, 1.0)
    assert r(0.5) == f(1.0)
    assert r.lipschitz_bound == 2.0


def test_parse_function_examples():
    f = parse_function("-(1-x)", "1-x", (0, 1))
    assert length_monotonicity(f, G1001) is Monotonicity.NONINCREASING
    assert sup_metric(f, catalog.get("tent"), G1001).estimate == 0.0
    with pytest.raises(EndpointOrderError) as info:
        parse_function("x", "x-1", (0, 1))
    assert info.value.x == 0.0
    with pytest.raises(ParseError, match="unclosed parenthesis"):
        parse_function("sin(x", "1", (0, 1))


def test_diameter_bound_covers_range():
    f = catalog.get("parab")
    # lower endpoint spans [0, 0.25], upper spans [0, 2]
    assert 2.0 <= diameter_bound(f, G1001) <= 2.0 + 3.0 * G1001.spacing + 1e-12
