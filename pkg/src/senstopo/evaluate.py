"""Model checking of static formulas over a :class:`StaticModel`."""

from __future__ import annotations

import itertools
from typing import Mapping

from .model import StaticModel, UnknownSensorError, sense
from .syntax import (
    And, Bottom, Common, Const, Covered, Disjoint, Eq, Exists, Forall, Formula, Implies,
    In, Leq, Necessary, Not, NRed, Or, Overlap, Overlaps, RangeEq, Red, Sort, Subset, Term,
    Unnecessary, free_vars, is_temporal,
)

Valuation = Mapping[str, object]


class EvaluationError(ValueError):
    pass


def domain(m: StaticModel, sort: Sort) -> list:
    """Correctly sorted elements of ``m`` in a fixed order."""
    if sort is Sort.SENSOR:
        return m.sorted_sensors()
    return m.sorted_zones()


def value(m: StaticModel, t: Term, v: Valuation):
    if isinstance(t, Const):
        if t.name not in m.sensors:
            raise UnknownSensorError(t.name)
        return t.name
    try:
        val = v[t.name]
    except KeyError:
        raise EvaluationError(f"unbound variable {t.name!r}") from None
    if t.sort is Sort.ZONE and not isinstance(val, frozenset):
        raise EvaluationError(f"variable {t.name!r} must denote a zone, got {val!r}")
    if t.sort is Sort.SENSOR and not isinstance(val, str):
        raise EvaluationError(f"variable {t.name!r} must denote a sensor, got {val!r}")
    return val


def _sensor(m: StaticModel, t: Term, v: Valuation) -> str:
    s = value(m, t, v)
    if s not in m.sensors:
        raise UnknownSensorError(s)
    return s


def evaluate(m: StaticModel, f: Formula, v: Valuation | None = None) -> bool:
    """Satisfaction of ``f`` in ``m`` under the valuation ``v``.

    Sugar nodes are evaluated through their set-theoretic meaning rather
    than through their expansion; :func:`~senstopo.syntax.desugar` gives the
    expansion when the two need to be compared.
    """
    v = {} if v is None else v
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Eq):
        return value(m, f.left, v) == value(m, f.right, v)
    if isinstance(f, In):
        return value(m, f.zone, v) in sense(m, _sensor(m, f.sensor, v))
    if isinstance(f, Implies):
        return (not evaluate(m, f.left, v)) or evaluate(m, f.right, v)
    if isinstance(f, Not):
        return not evaluate(m, f.arg, v)
    if isinstance(f, And):
        return evaluate(m, f.left, v) and evaluate(m, f.right, v)
    if isinstance(f, Or):
        return evaluate(m, f.left, v) or evaluate(m, f.right, v)
    if isinstance(f, Forall):
        return all(evaluate(m, f.body, {**v, f.var: a}) for a in domain(m, f.sort))
    if isinstance(f, Exists):
        return any(evaluate(m, f.body, {**v, f.var: a}) for a in domain(m, f.sort))
    if isinstance(f, Necessary):
        return _sensor(m, f.term, v) in m.necessary
    if isinstance(f, Unnecessary):
        return _sensor(m, f.term, v) in m.unnecessary
    if isinstance(f, Red):
        s = _sensor(m, f.term, v)
        return all(any(y != s for y in x) for x in sense(m, s))
    if isinstance(f, NRed):
        s = _sensor(m, f.term, v)
        return all(any(y != s and y not in m.unnecessary for y in x) for x in sense(m, s))
    if isinstance(f, (Leq, RangeEq, Disjoint, Common, Overlap, Subset)):
        a = sense(m, _sensor(m, f.left, v))
        b = sense(m, _sensor(m, f.right, v))
        if isinstance(f, Leq):
            return a <= b
        if isinstance(f, RangeEq):
            return a == b
        if isinstance(f, Disjoint):
            return a.isdisjoint(b)
        if isinstance(f, Common):
            return not a.isdisjoint(b)
        if isinstance(f, Overlap):
            return not a.isdisjoint(b) and not a <= b and not b <= a
        return a < b
    if isinstance(f, Covered):
        return all(any(s not in m.unnecessary for s in z) for z in m.zones)
    if isinstance(f, Overlaps):
        pool = m.necessary if f.necessary else m.sensors
        return any(len(z & pool) >= f.degree for z in m.zones)
    if is_temporal(f):
        raise EvaluationError(f"temporal formula needs a dynamic model: {f}")
    raise EvaluationError(f"cannot evaluate {type(f).__name__}")


def valuations(m: StaticModel, variables: Mapping[str, Sort]):
    """Every sort-respecting assignment of ``variables`` over ``m``."""
    names = sorted(variables)
    for combo in itertools.product(*(domain(m, variables[n]) for n in names)):
        yield dict(zip(names, combo))


def valid(m: StaticModel, f: Formula) -> bool:
    """``m |= f``: ``f`` holds under every valuation of its free variables."""
    fv = free_vars(f)
    missing = [k for k, s in fv.items() if s is None]
    if missing:
        raise EvaluationError(f"free variable(s) without sort: {', '.join(sorted(missing))}")
    return all(evaluate(m, f, v) for v in valuations(m, fv))
