"""Generators and brute-force oracles shared by the test modules.

The oracles here work on plain Python sets and never call the package's
evaluator, so agreement with them is evidence rather than tautology.
"""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from senstopo.dynamic import DynamicModel
from senstopo.model import StaticModel
from senstopo.syntax import (
    AllPaths, And, Bottom, Common, Const, Covered, Disjoint, Eq, Exists, Finally, Forall, Globally,
    Implies, In, Leq, Necessary, Next, Not, NRed, Or, Overlap, Overlaps, RangeEq, Red, SomePaths, Sort,
    Subset, Unnecessary, Until, Var,
)

NAMES = ("a", "b", "c", "d", "e", "f", "g", "h")


# -- models -------------------------------------------------------------------------


def random_model(rng: random.Random, max_sensors: int = 8, max_zones: int = 20, marks: bool = False) -> StaticModel:
    """A well-formed model: every sensor lies in some zone, no zone is empty."""
    n = rng.randint(1, max_sensors)
    sensors = NAMES[:n]
    zones = set()
    # cover every sensor first, then add extra zones
    for s in sensors:
        if len(zones) >= max_zones:
            break
        zones.add(frozenset([s, *rng.sample(sensors, rng.randint(0, n - 1))]))
    for _ in range(rng.randint(0, max_zones - len(zones))):
        zones.add(frozenset(rng.sample(sensors, rng.randint(1, n))))
    covered = frozenset().union(*zones)
    necessary, unnecessary = set(), set()
    if marks:
        for s in covered:
            r = rng.random()
            if r < 0.3:
                necessary.add(s)
            elif r < 0.6:
                unnecessary.add(s)
    return StaticModel(covered, frozenset(zones), frozenset(necessary), frozenset(unnecessary))


@st.composite
def models(draw, max_sensors: int = 5, max_zones: int = 10, marks: bool = False):
    return random_model(random.Random(draw(st.integers(0, 2**32))), max_sensors, max_zones, marks)


def all_models(sensors, with_marks: bool = False):
    """Every well-formed unmarked (or every marked) model over exactly ``sensors``."""
    sensors = tuple(sensors)
    subsets = [frozenset(c) for k in range(1, len(sensors) + 1) for c in itertools.combinations(sensors, k)]
    everything = frozenset(sensors)
    for bits in range(1, 2 ** len(subsets)):
        zones = frozenset(z for i, z in enumerate(subsets) if bits >> i & 1)
        if frozenset().union(*zones) != everything:
            continue
        if not with_marks:
            yield StaticModel(everything, zones)
            continue
        for labels in itertools.product("-NU", repeat=len(sensors)):
            yield StaticModel(
                everything,
                zones,
                frozenset(s for s, l in zip(sensors, labels) if l == "N"),
                frozenset(s for s, l in zip(sensors, labels) if l == "U"),
            )


# -- set-level oracles ------------------------------------------------------------------


def rng_of(m: StaticModel, s: str) -> frozenset:
    return frozenset(z for z in m.zones if s in z)


def oracle_redundant(m: StaticModel, s: str) -> bool:
    return all(len(z) >= 2 for z in m.zones if s in z)


def oracle_possibly_redundant(m: StaticModel, s: str) -> bool:
    return all(any(y != s and y not in m.unnecessary for y in z) for z in m.zones if s in z)


def oracle_max_zone(m: StaticModel, pool=None) -> int:
    pool = m.sensors if pool is None else pool
    return max((len(z & pool) for z in m.zones), default=0)


def oracle_remove(m: StaticModel, removed) -> StaticModel:
    removed = frozenset(removed)
    zones = frozenset(z - removed for z in m.zones if z - removed)
    return StaticModel(m.sensors - removed, zones)


def oracle_irreducibles(m: StaticModel) -> set:
    """All end points of every removal order, by plain recursion without memoisation."""
    out = set()

    def walk(cur: StaticModel):
        cands = [s for s in cur.sensors if oracle_redundant(cur, s)]
        if not cands:
            out.add((cur.sensors, cur.zones))
            return
        for s in cands:
            walk(oracle_remove(cur, {s}))

    walk(m.unmarked())
    return out


def oracle_relation(m: StaticModel, s: str, t: str) -> str:
    a, b = rng_of(m, s), rng_of(m, t)
    if a == b:
        return "equal"
    if not a & b:
        return "disjoint"
    if a < b:
        return "inside"
    if b < a:
        return "contains"
    return "overlap"


# atoms of the four axioms, read straight off the range sets
def leq_(m, s, t):
    return rng_of(m, s) <= rng_of(m, t)


def dj_(m, s, t):
    return not rng_of(m, s) & rng_of(m, t)


def ovl_(m, s, t):
    a, b = rng_of(m, s), rng_of(m, t)
    return bool(a & b) and not a <= b and not b <= a


def sub_(m, s, t):
    return rng_of(m, s) < rng_of(m, t)


def eq_(m, s, t):
    return rng_of(m, s) == rng_of(m, t)


AXIOM_ORACLES = (
    (dj_, lambda m, s, t: not leq_(m, s, t) and not leq_(m, t, s)),
    (ovl_, lambda m, s, t: not leq_(m, s, t) or not leq_(m, t, s)),
    (sub_, lambda m, s, t: leq_(m, s, t) or ovl_(m, s, t)),
    (eq_, lambda m, s, t: leq_(m, s, t) or leq_(m, t, s)),
)


def oracle_axiom(d: DynamicModel, w, k: int, s: str, t: str) -> bool:
    """Axiom ``k`` at ``w`` by looking at every path prefix of length two."""
    before, after = AXIOM_ORACLES[k]
    if not before(d.assign[w], s, t):
        return True
    return all(after(d.assign[u], s, t) for (x, u) in d.transitions if x == w)


def random_dynamic(rng: random.Random, max_worlds: int = 5, sensors=("a", "b", "c"), max_zones: int = 6) -> DynamicModel:
    """Random worlds over a fixed sensor set with a total transition relation."""
    n = rng.randint(1, max_worlds)
    worlds = [f"w{i}" for i in range(n)]
    assign = {}
    for w in worlds:
        zones = set()
        for s in sensors:
            zones.add(frozenset([s, *rng.sample(sensors, rng.randint(0, len(sensors) - 1))]))
        for _ in range(rng.randint(0, max_zones - len(zones))):
            zones.add(frozenset(rng.sample(sensors, rng.randint(1, len(sensors)))))
        assign[w] = StaticModel(frozenset(sensors), frozenset(zones))
    edges = set()
    for w in worlds:
        edges.add((w, rng.choice(worlds)))
        for u in worlds:
            if rng.random() < 0.3:
                edges.add((w, u))
    return DynamicModel.build(assign, sorted(edges))


def paths_from(d: DynamicModel, w, length: int):
    """Every path prefix of ``length`` worlds starting at ``w``."""
    succ = {x: sorted(u for (y, u) in d.transitions if y == x) for x in d.worlds}
    frontier = [[w]]
    for _ in range(length - 1):
        frontier = [p + [u] for p in frontier for u in succ[p[-1]]]
    return frontier


# -- formulas ----------------------------------------------------------------------------

CONSTS = ("a", "b", "c", "d")
VAR_NAMES = ("x", "y", "z", "p", "q", "r1", "s1", "t1")


class FormulaGen:
    """Random well-sorted formulas; zone and sensor variables are properly scoped."""

    def __init__(self, rng: random.Random, consts=CONSTS, marks: bool = True):
        self.rng = rng
        self.consts = consts
        self.marks = marks

    def sensor_term(self, env):
        pool = [Var(n, Sort.SENSOR) for n, s in env.items() if s is Sort.SENSOR]
        if pool and self.rng.random() < 0.7:
            return self.rng.choice(pool)
        return Const(self.rng.choice(self.consts))

    def atom(self, env):
        r = self.rng
        zones = [n for n, s in env.items() if s is Sort.ZONE]
        kinds = ["bottom", "eq", "unary", "binary", "overlaps"]
        if zones:
            kinds += ["in", "in", "zeq"]
        if self.marks:
            kinds += ["covered"]
        kind = r.choice(kinds)
        if kind == "bottom":
            return Bottom()
        if kind == "eq":
            return Eq(self.sensor_term(env), self.sensor_term(env))
        if kind == "zeq":
            return Eq(Var(r.choice(zones), Sort.ZONE), Var(r.choice(zones), Sort.ZONE))
        if kind == "in":
            return In(Var(r.choice(zones), Sort.ZONE), self.sensor_term(env))
        if kind == "unary":
            ops = [Red, NRed, Necessary, Unnecessary] if self.marks else [Red]
            return r.choice(ops)(self.sensor_term(env))
        if kind == "binary":
            op = r.choice([Leq, RangeEq, Disjoint, Common, Overlap, Subset])
            return op(self.sensor_term(env), self.sensor_term(env))
        if kind == "covered":
            return Covered()
        return Overlaps(r.randint(1, 4), necessary=self.marks and r.random() < 0.3)

    def static(self, depth: int, env=None):
        env = dict(env or {})
        r = self.rng
        if depth <= 0 or r.random() < 0.25:
            return self.atom(env)
        kind = r.choice(["not", "and", "or", "imp", "forall", "exists"])
        if kind == "not":
            return Not(self.static(depth - 1, env))
        if kind in ("and", "or", "imp"):
            op = {"and": And, "or": Or, "imp": Implies}[kind]
            return op(self.static(depth - 1, env), self.static(depth - 1, env))
        name = r.choice(VAR_NAMES)
        sort = r.choice([Sort.SENSOR, Sort.ZONE])
        body = self.static(depth - 1, {**env, name: sort})
        return (Forall if kind == "forall" else Exists)(name, sort, body)

    def state(self, depth: int, env=None):
        """A dynamic state formula; zone variables never cross a path quantifier."""
        env = {k: s for k, s in (env or {}).items() if s is Sort.SENSOR}
        r = self.rng
        if depth <= 0 or r.random() < 0.3:
            return FormulaGen(r, self.consts, marks=False).static(min(depth, 2), env)
        kind = r.choice(["not", "and", "A", "E", "A", "E"])
        if kind == "not":
            return Not(self.state(depth - 1, env))
        if kind == "and":
            return And(self.state(depth - 1, env), self.state(depth - 1, env))
        return (AllPaths if kind == "A" else SomePaths)(self.path(depth - 1, env))

    def path(self, depth: int, env):
        r = self.rng
        kind = r.choice(["X", "U", "G", "F", "not", "and", "or"]) if depth > 0 else r.choice(["X", "G", "F"])
        if kind == "X":
            return Next(self.state(depth - 1, env))
        if kind == "G":
            return Globally(self.state(depth - 1, env))
        if kind == "F":
            return Finally(self.state(depth - 1, env))
        if kind == "U":
            return Until(self.state(depth - 1, env), self.state(depth - 1, env))
        if kind == "not":
            return Not(self.path(depth - 1, env))
        op = And if kind == "and" else Or
        return op(self.path(depth - 1, env), self.path(depth - 1, env))


def closed_static(rng: random.Random, depth: int = 4, consts=CONSTS, marks: bool = True):
    return FormulaGen(rng, consts, marks).static(depth)


@st.composite
def static_formulas(draw, depth: int = 4, consts=CONSTS, marks: bool = True):
    return closed_static(random.Random(draw(st.integers(0, 2**32))), depth, consts, marks)


@st.composite
def state_formulas(draw, depth: int = 3, consts=CONSTS):
    return FormulaGen(random.Random(draw(st.integers(0, 2**32))), consts, marks=False).state(depth)
