"""Abstract syntax of static and dynamic sensor topology formulas.

The core static language has falsum, equality, zone membership in a sensor
range, implication and universal quantification, plus the two marking
predicates.  Everything else (the remaining connectives, the existential
quantifier, range comparisons, redundancy, overlap degree, ...) is kept as
a sugar node so formulas print back the way they were written; ``desugar``
rewrites any formula into the core.

Dynamic formulas add the path quantifiers ``A``/``E`` and the temporal
operators ``X``, ``U``, ``G``, ``F``.  Static formulas act as atoms of the
dynamic layer.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, fields
from typing import Iterator, Mapping


class Sort(enum.Enum):
    SENSOR = "Sensor"
    ZONE = "Zone"

    def __str__(self) -> str:
        return self.value


class SortError(TypeError):
    """A formula is ill-sorted or violates the layering of the dynamic syntax."""


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort | None

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    """A sensor constant; it always denotes the sensor of the same name."""

    name: str

    @property
    def sort(self) -> Sort:
        return Sort.SENSOR

    def __str__(self) -> str:
        return self.name


Term = Var | Const


# -- formulas ------------------------------------------------------------------


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return tuple(getattr(self, f.name) for f in fields(self) if isinstance(getattr(self, f.name), Formula))

    def terms(self) -> tuple[Term, ...]:
        return tuple(getattr(self, f.name) for f in fields(self) if isinstance(getattr(self, f.name), (Var, Const)))

    def walk(self) -> Iterator["Formula"]:
        yield self
        for c in self.children():
            yield from c.walk()

    def __str__(self) -> str:
        from .parser import to_text

        return to_text(self)


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class In(Formula):
    """``zone in sense(sensor)``."""

    zone: Term
    sensor: Term


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    sort: Sort | None
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    sort: Sort | None
    body: Formula


@dataclass(frozen=True)
class Necessary(Formula):
    term: Term


@dataclass(frozen=True)
class Unnecessary(Formula):
    term: Term


# sugar over sensor terms


@dataclass(frozen=True)
class Red(Formula):
    """Every zone in the range of ``term`` is covered by another sensor."""

    term: Term


@dataclass(frozen=True)
class NRed(Formula):
    """Possibly redundant: covered by other sensors not marked unnecessary."""

    term: Term


@dataclass(frozen=True)
class Leq(Formula):
    """``sense(left) <= sense(right)``."""

    left: Term
    right: Term


@dataclass(frozen=True)
class RangeEq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Disjoint(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Common(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Overlap(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Subset(Formula):
    """Proper range inclusion."""

    left: Term
    right: Term


@dataclass(frozen=True)
class Covered(Formula):
    pass


@dataclass(frozen=True)
class Overlaps(Formula):
    """Some zone lies in the ranges of ``degree`` distinct sensors.

    With ``necessary`` set, the sensors must also be marked necessary.
    """

    degree: int
    necessary: bool = False


# temporal layer


@dataclass(frozen=True)
class AllPaths(Formula):
    path: Formula


@dataclass(frozen=True)
class SomePaths(Formula):
    path: Formula


@dataclass(frozen=True)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Globally(Formula):
    arg: Formula


@dataclass(frozen=True)
class Finally(Formula):
    arg: Formula


TOP = Not(Bottom())

CONNECTIVES = (Not, And, Or, Implies)
QUANTIFIERS = (Forall, Exists)
SENSOR_UNARY = (Necessary, Unnecessary, Red, NRed)
SENSOR_BINARY = (Leq, RangeEq, Disjoint, Common, Overlap, Subset)
PATH_QUANTIFIERS = (AllPaths, SomePaths)
TEMPORAL = (Next, Until, Globally, Finally)
SUGAR = (And, Or, Not, Exists, Red, NRed, Leq, RangeEq, Disjoint, Common, Overlap, Subset, Covered, Overlaps)


def is_temporal(f: Formula) -> bool:
    return any(isinstance(g, PATH_QUANTIFIERS + TEMPORAL) for g in f.walk())


def conj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def exists_many(names_sorts, body: Formula) -> Formula:
    for name, sort in reversed(list(names_sorts)):
        body = Exists(name, sort, body)
    return body


# -- variables -------------------------------------------------------------------


def _term_vars(t: Term) -> dict[str, Sort | None]:
    return {t.name: t.sort} if isinstance(t, Var) else {}


def free_vars(f: Formula) -> dict[str, Sort | None]:
    """Free variables of ``f`` with the sort recorded at their occurrences."""
    out: dict[str, Sort | None] = {}
    if isinstance(f, QUANTIFIERS):
        inner = free_vars(f.body)
        inner.pop(f.var, None)
        return inner
    for t in f.terms():
        out.update(_term_vars(t))
    for c in f.children():
        for k, v in free_vars(c).items():
            out.setdefault(k, v)
    return out


def constants(f: Formula) -> set[str]:
    return {t.name for g in f.walk() for t in g.terms() if isinstance(t, Const)}


def _names(f: Formula) -> set[str]:
    names = set()
    for g in f.walk():
        names.update(t.name for t in g.terms())
        if isinstance(g, QUANTIFIERS):
            names.add(g.var)
    return names


def fresh(base: str, avoid) -> str:
    if base not in avoid:
        return base
    for i in itertools.count(1):
        name = f"{base}{i}"
        if name not in avoid:
            return name


# -- desugaring ------------------------------------------------------------------


def expand(f: Formula) -> Formula:
    """One-step expansion of a sugar node into its definition.

    Non-sugar nodes are returned unchanged.  The result may itself contain
    sugar (connectives, existentials, range inclusion).
    """
    S, Z = Sort.SENSOR, Sort.ZONE
    if isinstance(f, Not):
        return Implies(f.arg, Bottom())
    if isinstance(f, And):
        return Not(Implies(f.left, Not(f.right)))
    if isinstance(f, Or):
        return Implies(Not(f.left), f.right)
    if isinstance(f, Exists):
        return Not(Forall(f.var, f.sort, Not(f.body)))
    if isinstance(f, SomePaths):
        return Not(AllPaths(Not(f.path)))
    if isinstance(f, Globally):
        return Not(Until(TOP, Not(f.arg)))
    if isinstance(f, Finally):
        return Until(TOP, f.arg)

    avoid = {t.name for t in f.terms()}
    if isinstance(f, (Red, NRed)):
        s = f.term
        x = Var(fresh("x", avoid), Z)
        y = Var(fresh("y", avoid | {x.name}), S)
        inner = And(Not(Eq(y, s)), In(x, y))
        if isinstance(f, NRed):
            inner = And(And(Not(Eq(y, s)), Not(Unnecessary(y))), In(x, y))
        return Forall(x.name, Z, Implies(In(x, s), Exists(y.name, S, inner)))
    if isinstance(f, Leq):
        x = fresh("x", avoid)
        return Forall(x, Z, Implies(In(Var(x, Z), f.left), In(Var(x, Z), f.right)))
    if isinstance(f, RangeEq):
        z = Var(fresh("z", avoid), Z)
        a, b = In(z, f.left), In(z, f.right)
        return Forall(z.name, Z, And(Implies(a, b), Implies(b, a)))
    if isinstance(f, Disjoint):
        x = Var(fresh("x", avoid), Z)
        return Forall(x.name, Z, Implies(In(x, f.left), Not(In(x, f.right))))
    if isinstance(f, Common):
        x = Var(fresh("x", avoid), Z)
        return Exists(x.name, Z, And(In(x, f.left), In(x, f.right)))
    if isinstance(f, Overlap):
        s, t = f.left, f.right
        return And(And(Common(s, t), Not(Leq(s, t))), Not(Leq(t, s)))
    if isinstance(f, Subset):
        return And(Leq(f.left, f.right), Not(Leq(f.right, f.left)))
    if isinstance(f, Covered):
        z, s = Var("z", Z), Var("s", S)
        return Forall("z", Z, Exists("s", S, And(Not(Unnecessary(s)), In(z, s))))
    if isinstance(f, Overlaps):
        m = f.degree
        x = Var("x", Z)
        ys = [Var(f"y{i}", S) for i in range(1, m + 1)] if m > 1 else [Var("y", S)]
        parts = [In(x, y) for y in ys]
        parts += [Not(Eq(ys[i], ys[j])) for i in range(m) for j in range(m) if i != j]
        if f.necessary:
            parts += [Necessary(y) for y in ys]
        return exists_many([(x.name, Z)] + [(y.name, S) for y in ys], conj(parts))
    return f


_CORE = (Bottom, Eq, In, Implies, Forall, Necessary, Unnecessary, AllPaths, Next, Until)


def desugar(f: Formula) -> Formula:
    """Rewrite ``f`` into core syntax (falsum, =, in, ->, forall, N, U, A, X, U)."""
    while not isinstance(f, _CORE):
        f = expand(f)
    if isinstance(f, Forall):
        return Forall(f.var, f.sort, desugar(f.body))
    if isinstance(f, (Implies, Until)):
        return type(f)(desugar(f.left), desugar(f.right))
    if isinstance(f, AllPaths):
        return AllPaths(desugar(f.path))
    if isinstance(f, Next):
        return Next(desugar(f.arg))
    return f


# -- sort checking ----------------------------------------------------------------


def _check_sensor_term(t: Term, env, sensors, where: Formula):
    if isinstance(t, Const):
        if sensors is not None and t.name not in sensors:
            raise SortError(f"unknown sensor constant {t.name!r} in {where}")
        return
    _check_var(t, env, where)
    if t.sort is not Sort.SENSOR:
        raise SortError(f"{t.name} must be a sensor term in {where}")


def _check_var(t: Var, env, where: Formula):
    if t.name not in env:
        raise SortError(f"unbound variable {t.name!r} in {where}")
    if t.sort is None or env[t.name] is not t.sort:
        raise SortError(f"variable {t.name!r} used with sort {t.sort} but bound as {env[t.name]} in {where}")


def typecheck(
    f: Formula,
    sensors=None,
    free: Mapping[str, Sort] | None = None,
    dynamic: bool | None = None,
) -> None:
    """Raise :class:`SortError` unless ``f`` is well-sorted.

    ``sensors`` restricts the admissible sensor constants, ``free`` declares
    the sorts of free variables.  A formula is treated as dynamic when it
    contains any temporal operator (or when ``dynamic`` is forced); dynamic
    formulas must respect the state/path layering and may not mention the
    marking predicates.
    """
    env = dict(free or {})
    if dynamic is None:
        dynamic = is_temporal(f)
    _check(f, "state" if dynamic else "static", env, None if sensors is None else frozenset(sensors))


def _check(f: Formula, ctx: str, env: dict, sensors) -> None:
    if isinstance(f, Bottom) or isinstance(f, Covered):
        if isinstance(f, Covered) and ctx != "static":
            raise SortError("marking predicates are not allowed in dynamic formulas: COVERED")
        return
    if isinstance(f, Eq):
        for t in (f.left, f.right):
            if isinstance(t, Var):
                _check_var(t, env, f)
            elif sensors is not None and t.name not in sensors:
                raise SortError(f"unknown sensor constant {t.name!r} in {f}")
        if f.left.sort is not f.right.sort:
            raise SortError(f"equality between terms of different sorts: {f}")
        return
    if isinstance(f, In):
        if not isinstance(f.zone, Var):
            raise SortError(f"left of 'in' must be a zone variable: {f}")
        _check_var(f.zone, env, f)
        if f.zone.sort is not Sort.ZONE:
            raise SortError(f"left of 'in' must be a zone variable: {f}")
        _check_sensor_term(f.sensor, env, sensors, f)
        return
    if isinstance(f, SENSOR_UNARY + SENSOR_BINARY):
        if ctx != "static" and isinstance(f, (Necessary, Unnecessary, NRed)):
            raise SortError(f"marking predicates are not allowed in dynamic formulas: {f}")
        for t in f.terms():
            _check_sensor_term(t, env, sensors, f)
        return
    if isinstance(f, Overlaps):
        if f.degree < 1:
            raise SortError(f"overlap degree must be positive: {f}")
        if f.necessary and ctx != "static":
            raise SortError(f"marking predicates are not allowed in dynamic formulas: {f}")
        return
    if isinstance(f, CONNECTIVES):
        for c in f.children():
            _check(c, ctx, env, sensors)
        return
    if isinstance(f, QUANTIFIERS):
        if f.sort is None:
            raise SortError(f"quantified variable {f.var!r} has no sort")
        _check(f.body, "static", {**env, f.var: f.sort}, sensors)
        return
    if isinstance(f, PATH_QUANTIFIERS):
        if ctx == "static":
            raise SortError(f"path quantifier inside a static formula: {f}")
        if any(s is Sort.ZONE for s in env.values()):
            zones = sorted(k for k, s in env.items() if s is Sort.ZONE)
            raise SortError(f"zone variable(s) {', '.join(zones)} free across a temporal operator in {f}")
        _check(f.path, "path", env, sensors)
        return
    if isinstance(f, TEMPORAL):
        if ctx != "path":
            raise SortError(f"temporal operator outside the scope of a path quantifier: {f}")
        for c in f.children():
            _check(c, "state", env, sensors)
        return
    raise SortError(f"unknown formula node {type(f).__name__}")


def is_well_sorted(f: Formula, sensors=None, free=None) -> bool:
    try:
        typecheck(f, sensors, free)
    except SortError:
        return False
    return True
