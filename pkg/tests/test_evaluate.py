import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from senstopo.evaluate import EvaluationError, evaluate, valid
from senstopo.model import EMPTY_MODEL, StaticModel, UnknownSensorError
from senstopo.parser import parse
from senstopo.samples import ambiguous_model, nested_model
from senstopo.syntax import (
    Bottom, Common, Const, Covered, Disjoint, Exists, Forall, Leq, Not, NRed, Overlap, Overlaps, RangeEq, Red,
    Sort, Subset, desugar,
)

from batch_eval import Universe, check_batch
from support import FormulaGen, models, oracle_max_zone, rng_of, static_formulas

S, Z = Sort.SENSOR, Sort.ZONE


@pytest.mark.parametrize(
    "text",
    [
        "forall z : z in sense(d) -> z in sense(c)",
        "exists z : z in sense(c) & ~(z in sense(d))",
        "subset(d, c)",
        "DJ(a, d)",
    ],
)
def test_judgments_about_the_nested_model(text):
    assert valid(nested_model(), parse(text))


def test_bottom_is_never_valid():
    for m in (nested_model(), ambiguous_model(), EMPTY_MODEL):
        assert not valid(m, Bottom())


def test_redundancy_in_the_ambiguous_model():
    m = ambiguous_model()
    for s in "abc":
        assert valid(m, Red(Const(s)))
    assert not valid(m, parse("forall s : ~RED(s)"))


def test_empty_model_quantifiers():
    assert valid(EMPTY_MODEL, parse("forall s : RED(s)"))
    assert not valid(EMPTY_MODEL, parse("exists z : Zone : ~bottom"))
    assert not valid(EMPTY_MODEL, Overlaps(1))


def test_unknown_constant():
    with pytest.raises(UnknownSensorError):
        evaluate(nested_model(), parse("RED(q)"))


def test_unbound_variable_needs_a_valuation():
    f = parse("leq(s, c)", free={"s": S})
    with pytest.raises(EvaluationError):
        evaluate(nested_model(), f)
    assert evaluate(nested_model(), f, {"s": "d"})
    assert not evaluate(nested_model(), f, {"s": "a"})


def test_valid_closes_free_variables():
    m = nested_model()
    f = parse("common(s, c)", free={"s": S})
    assert valid(m, f)
    g = parse("DJ(s, d)", free={"s": S})
    assert not valid(m, g)


def test_marks():
    m = ambiguous_model().with_marks({"b", "c"}, {"a"})
    assert valid(m, parse("N(b) & U(a) & ~N(a)"))
    assert valid(m, Covered())
    assert not valid(m.with_marks((), {"a", "b"}), parse("forall z : exists s : ~U(s) & z in sense(s)"))
    assert valid(m, Overlaps(2, necessary=True))
    assert not valid(m, Overlaps(3, necessary=True))
    assert valid(m, Overlaps(3))


def all_valuations(m, names_sorts):
    doms = [sorted(m.sensors) if s is S else list(m.zones) for _, s in names_sorts]
    for combo in itertools.product(*doms):
        yield {n: v for (n, _), v in zip(names_sorts, combo)}


@settings(max_examples=60, deadline=None)
@given(models(max_sensors=4, max_zones=6, marks=True), st.integers(0, 2**32))
def test_valid_matches_every_valuation(m, seed):
    rng = random.Random(seed)
    free = [("p", S), ("q", Z)] if rng.random() < 0.5 else [("p", S), ("r1", S)]
    f = FormulaGen(rng, consts=sorted(m.sensors)).static(3, dict(free))
    expected = all(evaluate(m, f, v) for v in all_valuations(m, free))
    assert valid(m, f) == expected


@settings(max_examples=100, deadline=None)
@given(models(max_sensors=4, max_zones=8, marks=True), st.integers(0, 2**32))
def test_sugar_agrees_with_its_expansion(m, seed):
    f = FormulaGen(random.Random(seed), consts=sorted(m.sensors)).static(3)
    assert evaluate(m, f) == evaluate(m, desugar(f))


@settings(max_examples=100, deadline=None)
@given(models(max_sensors=4, max_zones=8), st.integers(0, 2**32))
def test_existential_is_dual_of_universal(m, seed):
    rng = random.Random(seed)
    name, sort = rng.choice([("p", S), ("q", Z)])
    body = FormulaGen(rng, consts=sorted(m.sensors)).static(2, {name: sort})
    assert evaluate(m, Exists(name, sort, body)) == evaluate(m, Not(Forall(name, sort, Not(body))))


@given(models(max_sensors=5))
def test_relations_between_ranges(m):
    for s, t in itertools.product(sorted(m.sensors), repeat=2):
        cs, ct = Const(s), Const(t)
        a, b = rng_of(m, s), rng_of(m, t)
        assert valid(m, Disjoint(cs, ct)) == valid(m, Disjoint(ct, cs)) == (not a & b)
        assert valid(m, Disjoint(cs, ct)) == (not valid(m, Common(cs, ct)))
        assert valid(m, Leq(cs, ct)) == (a <= b)
        assert valid(m, Subset(cs, ct)) == (a < b)
        assert valid(m, RangeEq(cs, ct)) == (a == b)
        assert valid(m, Overlap(cs, ct)) == (bool(a & b) and not a <= b and not b <= a)


@given(models(max_sensors=6, marks=True))
def test_overlap_degrees(m):
    assert valid(m, Overlaps(1))
    top = oracle_max_zone(m)
    truth = [valid(m, Overlaps(k)) for k in range(1, m.size + 2)]
    assert truth == [k <= top for k in range(1, m.size + 2)]
    top_n = oracle_max_zone(m, m.necessary)
    assert [valid(m, Overlaps(k, True)) for k in range(1, 4)] == [k <= top_n for k in range(1, 4)]


@given(models(max_sensors=5, marks=True))
def test_redundancy_matches_zone_inspection(m):
    for s in m.sensors:
        assert valid(m, Red(Const(s))) == all(len(z) > 1 for z in rng_of(m, s))
        expected = all(any(y != s and y not in m.unnecessary for y in z) for z in rng_of(m, s))
        assert valid(m, NRed(Const(s))) == expected


def test_sugar_exhaustively_on_three_sensors():
    """Every sugar node, every marking, every model over a three-sensor universe."""
    u = Universe("abc")
    masks = u.all_zone_masks()
    labels = list(itertools.product((0, 1, 2), repeat=3))
    zm = np.repeat(masks, len(labels), axis=0)
    lab = np.tile(np.array(labels), (len(masks), 1))
    nec, unn = lab == 1, lab == 2
    ms = list(u.models(zm, nec, unn))
    a, b = Const("a"), Const("b")
    nodes = [Red(a), NRed(a), Leq(a, b), Leq(a, a), RangeEq(a, b), Disjoint(a, b), Disjoint(a, a), Common(a, b),
             Overlap(a, b), Subset(a, b), Subset(a, a), Covered()]
    nodes += [Overlaps(k, n) for k in range(1, 5) for n in (False, True)]
    for f in nodes:
        expected = check_batch(u, desugar(f), zm, nec, unn)
        got = np.array([evaluate(m, f) for m in ms])
        assert (got == expected).all(), f


@settings(max_examples=50, deadline=None)
@given(static_formulas(depth=3, consts=("a", "b")))
def test_batch_evaluator_agrees_on_random_formulas(f):
    u = Universe("ab")
    masks = u.all_zone_masks()
    labels = np.array(list(itertools.product((0, 1, 2), repeat=2)))
    zm = np.repeat(masks, len(labels), axis=0)
    lab = np.tile(labels, (len(masks), 1))
    expected = check_batch(u, desugar(f), zm, lab == 1, lab == 2)
    got = np.array([evaluate(m, f) for m in u.models(zm, lab == 1, lab == 2)])
    assert (got == expected).all()


def test_zone_variable_needs_a_zone():
    f = parse("z in sense(a)", free={"z": Z})
    m = StaticModel.from_zones([["a"]])
    with pytest.raises(EvaluationError):
        evaluate(m, f, {"z": "a"})
    assert evaluate(m, f, {"z": frozenset({"a"})})
