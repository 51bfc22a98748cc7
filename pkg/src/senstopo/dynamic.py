"""Dynamic topology models and their temporal logic.

A dynamic model is a finite directed graph of worlds; each world carries a
static model (marks are dropped, since only the topology matters here).
Every world must have a successor so that infinite paths start everywhere.

Pairwise range relations are coarsened to five cases, and a step between
worlds may only change a relation along an edge of the qualitative-change
graph::

    disjoint -- overlap -- inside -- equal
                       \\-- contains --/
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import temporal
from .temporal import neg
from .evaluate import EvaluationError, evaluate
from .model import ModelError, StaticModel, UnknownSensorError, validate
from .parser import parse
from .syntax import (
    AllPaths, And, Const, Disjoint, Finally, Formula, Globally, Implies, Next, Not, Or,
    Overlap, RangeEq, SomePaths, Sort, Subset, Until, free_vars, is_temporal, typecheck,
)


class SpatialRelation(enum.Enum):
    DISJOINT = "disjoint"
    OVERLAP = "overlap"
    PROPERLY_INSIDE = "inside"
    PROPERLY_CONTAINS = "contains"
    EQUAL = "equal"

    def converse(self) -> "SpatialRelation":
        if self is SpatialRelation.PROPERLY_INSIDE:
            return SpatialRelation.PROPERLY_CONTAINS
        if self is SpatialRelation.PROPERLY_CONTAINS:
            return SpatialRelation.PROPERLY_INSIDE
        return self


R = SpatialRelation
QUALITATIVE_CHANGES = frozenset(
    frozenset(e)
    for e in [
        (R.DISJOINT, R.OVERLAP),
        (R.OVERLAP, R.PROPERLY_CONTAINS),
        (R.OVERLAP, R.PROPERLY_INSIDE),
        (R.EQUAL, R.PROPERLY_CONTAINS),
        (R.EQUAL, R.PROPERLY_INSIDE),
    ]
)


def transition_allowed(before: SpatialRelation, after: SpatialRelation) -> bool:
    return before is after or frozenset((before, after)) in QUALITATIVE_CHANGES


def classify(m: StaticModel, s: str, t: str) -> SpatialRelation:
    """The relation between the ranges of two distinct sensors."""
    for x in (s, t):
        if x not in m.sensors:
            raise UnknownSensorError(x)
    if s == t:
        raise ValueError("classify needs two distinct sensors")
    a, b = Const(s), Const(t)
    holding = [
        rel
        for rel, f in (
            (R.DISJOINT, Disjoint(a, b)),
            (R.EQUAL, RangeEq(a, b)),
            (R.PROPERLY_INSIDE, Subset(a, b)),
            (R.PROPERLY_CONTAINS, Subset(b, a)),
            (R.OVERLAP, Overlap(a, b)),
        )
        if evaluate(m, f)
    ]
    if len(holding) != 1:
        raise ModelError(f"ranges of {s} and {t} fit {len(holding)} relations; is the model well-formed?")
    return holding[0]


# -- models --------------------------------------------------------------------------


@dataclass(frozen=True)
class DynamicModel:
    worlds: tuple
    transitions: frozenset
    assign: Mapping[str, StaticModel] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "worlds", tuple(self.worlds))
        object.__setattr__(self, "transitions", frozenset(tuple(e) for e in self.transitions))
        object.__setattr__(self, "assign", {w: m.unmarked() for w, m in self.assign.items()})

    @classmethod
    def build(cls, assign: Mapping[str, StaticModel], transitions: Iterable[tuple]) -> "DynamicModel":
        return cls(tuple(assign), frozenset(transitions), dict(assign))

    @property
    def graph(self) -> temporal.Graph:
        return temporal.Graph.from_edges(self.worlds, sorted(self.transitions, key=repr))

    @property
    def sensors(self) -> frozenset:
        return self.assign[self.worlds[0]].sensors if self.worlds else frozenset()

    def successors(self, w) -> list:
        return [b for a, b in sorted(self.transitions, key=repr) if a == w]

    def checked(self) -> "DynamicModel":
        problems = validate_dynamic(self)
        if problems:
            raise ModelError("; ".join(problems))
        return self


def validate_dynamic(d: DynamicModel) -> list[str]:
    problems = []
    if not d.worlds:
        return ["a dynamic model needs at least one world"]
    if len(set(d.worlds)) != len(d.worlds):
        problems.append("duplicate world ids")
    for w in d.worlds:
        if w not in d.assign:
            problems.append(f"world {w} has no topology")
            continue
        m = d.assign[w]
        problems += [f"world {w}: {p}" for p in validate(m)]
        if m.is_empty:
            problems.append(f"world {w}: empty topology")
    for a, b in sorted(d.transitions, key=repr):
        for x in (a, b):
            if x not in d.assign:
                problems.append(f"transition {a}->{b} mentions unknown world {x}")
    domains = {d.assign[w].sensors for w in d.worlds if w in d.assign}
    if len(domains) > 1:
        problems.append("worlds disagree on the set of sensors")
    sources = {a for a, _ in d.transitions}
    for w in d.worlds:
        if w not in sources:
            problems.append(f"world {w} has no successor (add a self-loop)")
    return problems


# -- axioms ----------------------------------------------------------------------------

_PAIR = {"s": Sort.SENSOR, "t": Sort.SENSOR}
AXIOM_TEXTS = (
    "DJ(s, t) -> A X (~leq(s, t) & ~leq(t, s))",
    "OVL(s, t) -> A X (~leq(s, t) | ~leq(t, s))",
    "subset(s, t) -> A X (leq(s, t) | OVL(s, t))",
    "rangeeq(s, t) -> A X (leq(s, t) | leq(t, s))",
)
AXIOMS = tuple(parse(text, free=_PAIR) for text in AXIOM_TEXTS)


@dataclass(frozen=True)
class Violation:
    world_from: str
    world_to: str
    pair: tuple[str, str]
    before: SpatialRelation
    after: SpatialRelation

    def as_dict(self) -> dict:
        return {
            "from": self.world_from,
            "to": self.world_to,
            "pair": list(self.pair),
            "before": self.before.value,
            "after": self.after.value,
        }


def validate_axioms(d: DynamicModel) -> list[Violation]:
    """Every transition step that changes some pair's relation illegally."""
    out = []
    pairs = list(itertools.combinations(sorted(d.sensors), 2))
    for a, b in sorted(d.transitions, key=repr):
        for s, t in pairs:
            before = classify(d.assign[a], s, t)
            after = classify(d.assign[b], s, t)
            if not transition_allowed(before, after):
                out.append(Violation(a, b, (s, t), before, after))
    return out


# -- evaluation -------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    holds: bool
    engines: tuple[str, ...]
    exact: bool
    truncated: bool = False

    def as_dict(self) -> dict:
        return {"holds": self.holds, "engines": list(self.engines), "exact": self.exact, "truncated": self.truncated}


ENGINES = ("auto", "ctl", "tableau", "lasso")


def _strip(path: Formula) -> tuple[Formula, bool]:
    """Peel negations off a path formula; returns (core, negated)."""
    negated = False
    while isinstance(path, Not):
        path, negated = path.arg, not negated
    return path, negated


def in_ctl_fragment(f: Formula) -> bool:
    """Every path quantifier directly governs one temporal operator."""
    for g in f.walk():
        if isinstance(g, (AllPaths, SomePaths)):
            core, _ = _strip(g.path)
            if not isinstance(core, (Next, Until, Globally, Finally)):
                return False
    return True


class _Checker:
    def __init__(self, d: DynamicModel, v, engine: str, max_stem, max_loop, budget):
        if engine not in ENGINES:
            raise ValueError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")
        self.d = d
        self.g = d.graph
        self.v = v
        self.engine = engine
        self.max_stem = max_stem
        self.max_loop = max_loop
        self.budget = budget
        self.used: set[str] = set()
        self.truncated = False
        self.cache: dict = {}

    def sat(self, f: Formula) -> frozenset:
        """Worlds where the state formula ``f`` holds."""
        key = f
        if key in self.cache:
            return self.cache[key]
        if not is_temporal(f):
            self.used.add("static")
            out = frozenset(w for w in self.d.worlds if evaluate(self.d.assign[w], f, self.v))
        elif isinstance(f, Not):
            out = self.g.all - self.sat(f.arg)
        elif isinstance(f, And):
            out = self.sat(f.left) & self.sat(f.right)
        elif isinstance(f, Or):
            out = self.sat(f.left) | self.sat(f.right)
        elif isinstance(f, Implies):
            out = (self.g.all - self.sat(f.left)) | self.sat(f.right)
        elif isinstance(f, (AllPaths, SomePaths)):
            out = self.quantified(f)
        else:
            raise EvaluationError(f"not a state formula: {f}")
        self.cache[key] = out
        return out

    def quantified(self, f: Formula) -> frozenset:
        universal = isinstance(f, AllPaths)
        core, negated = _strip(f.path)
        if negated:
            # A ~p = ~E p and E ~p = ~A p
            flipped = (SomePaths if universal else AllPaths)(core)
            return self.g.all - self.quantified(flipped)
        ctl_shape = isinstance(core, (Next, Until, Globally, Finally))
        engine = self.engine
        if engine == "auto":
            engine = "ctl" if ctl_shape else "tableau"
        if engine == "ctl":
            if not ctl_shape:
                raise EvaluationError(f"outside the CTL fragment: {f}")
            self.used.add("ctl")
            return self.ctl(core, universal)
        p = self.normalise(core)
        if universal:
            return self.g.all - self.exists(neg(p), engine)
        return self.exists(p, engine)

    def exists(self, p, engine: str) -> frozenset:
        if engine == "tableau":
            self.used.add("tableau")
            return temporal.tableau_exists(self.g, p)
        self.used.add("lasso")
        n = len(self.g.worlds)
        stem = n if self.max_stem is None else self.max_stem
        loop = n * (temporal.temporal_depth(p) + 1) if self.max_loop is None else self.max_loop
        res = temporal.lasso_exists(self.g, p, stem, loop, self.budget)
        self.truncated |= res.truncated
        return res.holds

    def ctl(self, core: Formula, universal: bool) -> frozenset:
        g, everything = self.g, self.g.all
        if isinstance(core, Next):
            a = self.sat(core.arg)
            return everything - temporal.ex(g, everything - a) if universal else temporal.ex(g, a)
        if isinstance(core, Finally):
            a = self.sat(core.arg)
            return everything - temporal.eg(g, everything - a) if universal else temporal.eu(g, everything, a)
        if isinstance(core, Globally):
            a = self.sat(core.arg)
            return everything - temporal.eu(g, everything, everything - a) if universal else temporal.eg(g, a)
        a, b = self.sat(core.left), self.sat(core.right)
        if not universal:
            return temporal.eu(g, a, b)
        not_a, not_b = everything - a, everything - b
        return everything - (temporal.eu(g, not_b, not_a & not_b) | temporal.eg(g, not_b))

    def normalise(self, p: Formula):
        if isinstance(p, Not):
            return neg(self.normalise(p.arg))
        if isinstance(p, And):
            return ("and", self.normalise(p.left), self.normalise(p.right))
        if isinstance(p, Or):
            return neg(("and", neg(self.normalise(p.left)), neg(self.normalise(p.right))))
        if isinstance(p, Implies):
            return neg(("and", self.normalise(p.left), neg(self.normalise(p.right))))
        if isinstance(p, Next):
            return ("next", temporal.prop(self.sat(p.arg)))
        if isinstance(p, Until):
            return ("until", temporal.prop(self.sat(p.left)), temporal.prop(self.sat(p.right)))
        if isinstance(p, Finally):
            return ("until", temporal.prop(self.g.all), temporal.prop(self.sat(p.arg)))
        if isinstance(p, Globally):
            return neg(("until", temporal.prop(self.g.all), temporal.prop(self.g.all - self.sat(p.arg))))
        return temporal.prop(self.sat(p))


def check_state(
    d: DynamicModel,
    w,
    f: Formula,
    v: Mapping | None = None,
    engine: str = "auto",
    max_stem: int | None = None,
    max_loop: int | None = None,
    budget: int = 1_000_000,
) -> Verdict:
    """Decide ``d, w, v |= f`` and report which procedure answered.

    ``engine="auto"`` uses fixpoint labelling for path quantifiers over a
    single temporal operator and the tableau otherwise; both are exact.
    ``engine="lasso"`` answers by bounded lasso enumeration (stem up to
    ``max_stem`` worlds, loop up to ``max_loop``; by default the number of
    worlds and that number times the temporal depth plus one).
    """
    if w not in d.assign:
        raise KeyError(f"unknown world {w!r}")
    v = dict(v or {})
    typecheck(f, d.sensors, {k: (Sort.ZONE if isinstance(x, frozenset) else Sort.SENSOR) for k, x in v.items()})
    checker = _Checker(d, v, engine, max_stem, max_loop, budget)
    holds = w in checker.sat(f)
    used = tuple(sorted(checker.used))
    return Verdict(holds, used, exact="lasso" not in checker.used, truncated=checker.truncated)


def eval_state(d: DynamicModel, w, f: Formula, v: Mapping | None = None, engine: str = "auto") -> bool:
    return check_state(d, w, f, v, engine).holds


def valid_at(d: DynamicModel, w, f: Formula, engine: str = "auto") -> bool:
    """``f`` holds at ``w`` for every assignment of its free sensor variables."""
    fv = free_vars(f)
    if any(s is not Sort.SENSOR for s in fv.values()):
        raise EvaluationError("only sensor variables may be left free in a dynamic formula")
    names = sorted(fv)
    sensors = sorted(d.sensors)
    return all(
        eval_state(d, w, f, dict(zip(names, combo)), engine)
        for combo in itertools.product(sensors, repeat=len(names))
    )


def satisfies_axioms(d: DynamicModel, w) -> bool:
    return all(valid_at(d, w, ax) for ax in AXIOMS)


def remark_worlds(d: DynamicModel, policy=None) -> dict:
    """Run the non-destructive reduction separately in every world."""
    from .scan import lexicographic_first, reduce_marking

    policy = policy or lexicographic_first
    return {w: reduce_marking(d.assign[w], policy) for w in d.worlds}
