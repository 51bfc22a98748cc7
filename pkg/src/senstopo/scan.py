"""SCAN's topological steps and its estimate.

Step 1 reduces the topology to an irreducible one, either destructively
(removing redundant sensors) or by marking sensors necessary/unnecessary.
Step 2 finds the maximum overlap degree ``m`` of the retained sensors.
Step 3 turns the summed counts ``s`` into ``t_hat = s / sqrt(m)`` with
bounds ``[s / m, s]``.

The removal and marking choices are non-deterministic in general; both
reductions take a selection policy, and :func:`enumerate_irreducibles`
explores every choice.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

from .evaluate import evaluate, valid
from .model import StaticModel, UnknownSensorError, reduce_by, sense
from .syntax import And, Const, Exists, Not, NRed, Overlaps, Red, Sort, Unnecessary, Var

Policy = Callable[[StaticModel, Sequence[str]], str]
Readings = Mapping[str, int]

SOME_REDUNDANT = Exists("t", Sort.SENSOR, Red(Var("t", Sort.SENSOR)))
SOME_UNMARKED_POSSIBLY_REDUNDANT = Exists(
    "s", Sort.SENSOR, And(Not(Unnecessary(Var("s", Sort.SENSOR))), NRed(Var("s", Sort.SENSOR)))
)


class ScanError(ValueError):
    pass


# -- selection policies ----------------------------------------------------------


def lexicographic_first(m: StaticModel, candidates: Sequence[str]) -> str:
    return min(candidates)


def largest_range_first(m: StaticModel, candidates: Sequence[str]) -> str:
    return min(candidates, key=lambda s: (-len(sense(m, s)), s))


def smallest_range_first(m: StaticModel, candidates: Sequence[str]) -> str:
    return min(candidates, key=lambda s: (len(sense(m, s)), s))


def seeded_random(seed: int) -> Policy:
    rng = random.Random(seed)

    def choose(m: StaticModel, candidates: Sequence[str]) -> str:
        return rng.choice(sorted(candidates))

    return choose


def preferring(order: Sequence[str]) -> Policy:
    """Pick the first candidate in ``order``; unlisted sensors come last, alphabetically."""
    rank = {s: i for i, s in enumerate(order)}

    def choose(m: StaticModel, candidates: Sequence[str]) -> str:
        return min(candidates, key=lambda s: (rank.get(s, len(rank)), s))

    return choose


POLICIES = ("lexicographic-first", "largest-range-first", "smallest-range-first", "seeded-random")


def make_policy(name: str, seed: int = 0) -> Policy:
    if name == "lexicographic-first":
        return lexicographic_first
    if name == "largest-range-first":
        return largest_range_first
    if name == "smallest-range-first":
        return smallest_range_first
    if name == "seeded-random":
        return seeded_random(seed)
    raise ValueError(f"unknown selection policy {name!r}; choose from {', '.join(POLICIES)}")


# -- redundancy -------------------------------------------------------------------


def _known(m: StaticModel, s: str) -> None:
    if s not in m.sensors:
        raise UnknownSensorError(s)


def is_redundant(m: StaticModel, s: str) -> bool:
    _known(m, s)
    return evaluate(m, Red(Const(s)))


def is_possibly_redundant(m: StaticModel, s: str) -> bool:
    _known(m, s)
    return evaluate(m, NRed(Const(s)))


def redundant_sensors(m: StaticModel) -> list[str]:
    return [s for s in m.sorted_sensors() if is_redundant(m, s)]


def is_irreducible(m: StaticModel) -> bool:
    return not m.is_empty and not valid(m, SOME_REDUNDANT)


def reduction_steps(m: StaticModel, policy: Policy = lexicographic_first) -> Iterator[tuple[str, StaticModel]]:
    """Remove one chosen redundant sensor at a time, yielding ``(sensor, model_after)``."""
    if m.is_empty:
        raise ScanError("cannot reduce the empty model")
    while valid(m, SOME_REDUNDANT):
        s = policy(m, redundant_sensors(m))
        m = reduce_by(m, {s})
        yield s, m


def reduce_destructive(m: StaticModel, policy: Policy = lexicographic_first) -> StaticModel:
    """Reduce ``m`` to an irreducible model by deleting redundant sensors."""
    if m.is_empty:
        raise ScanError("cannot reduce the empty model")
    for _, m in reduction_steps(m, policy):
        pass
    return m


@dataclass
class Irreducibles:
    models: tuple[StaticModel, ...]
    truncated: bool = False
    nodes: int = 0


def explore_irreducibles(m: StaticModel, budget: int | None = None) -> Irreducibles:
    """Every irreducible model reachable by some sequence of redundant removals.

    The search memoises on the set of removed sensors (reduction by a set
    does not depend on the removal order).  With a ``budget`` the search
    stops after that many visited nodes and reports ``truncated``.
    """
    if m.is_empty:
        raise ScanError("cannot reduce the empty model")
    seen: set[frozenset] = set()
    found: dict[tuple, StaticModel] = {}
    truncated = False
    stack = [frozenset()]
    while stack:
        removed = stack.pop()
        if removed in seen:
            continue
        if budget is not None and len(seen) >= budget:
            truncated = True
            break
        seen.add(removed)
        current = reduce_by(m, removed)
        candidates = redundant_sensors(current)
        if not candidates:
            found[(current.sensors, current.zones)] = current
            continue
        for s in reversed(candidates):
            stack.append(removed | {s})
    models = sorted(found.values(), key=lambda r: (r.size, r.sorted_sensors()))
    return Irreducibles(tuple(models), truncated, len(seen))


def enumerate_irreducibles(m: StaticModel) -> tuple[StaticModel, ...]:
    return explore_irreducibles(m).models


# -- non-destructive reduction -------------------------------------------------------


def marking_steps(m: StaticModel, policy: Policy = lexicographic_first) -> Iterator[tuple[str, StaticModel]]:
    """Mark one possibly-redundant sensor unnecessary at a time.

    Yields ``(sensor, model_after)``; the final necessary marks are not
    assigned here (see :func:`reduce_marking`).
    """
    if m.is_empty:
        raise ScanError("cannot reduce the empty model")
    if m.is_marked:
        raise ScanError("non-destructive reduction expects a model without marks")
    while valid(m, SOME_UNMARKED_POSSIBLY_REDUNDANT):
        candidates = [s for s in m.sorted_sensors() if s not in m.unnecessary and is_possibly_redundant(m, s)]
        s = policy(m, candidates)
        m = m.with_marks(m.necessary, m.unnecessary | {s})
        yield s, m


def reduce_marking(m: StaticModel, policy: Policy = lexicographic_first) -> StaticModel:
    """Mark sensors instead of removing them; every unmarked survivor becomes necessary."""
    final = m
    for _, final in marking_steps(m, policy):
        pass
    return final.with_marks(final.sensors - final.unnecessary, final.unnecessary)


# -- overlap degree and estimate -------------------------------------------------------


def max_overlap(m: StaticModel) -> int:
    """Largest ``k`` with ``m |= O[k]``, counting down from the model size.

    On a marked model only sensors marked necessary are counted.
    """
    if m.is_empty:
        raise ScanError("overlap degree of the empty model is undefined")
    k = m.size
    while k > 1:
        if valid(m, Overlaps(k, necessary=m.is_marked)):
            return k
        k -= 1
    return k


def retained_sensors(m: StaticModel) -> frozenset:
    """Sensors whose readings enter the estimate."""
    return m.necessary if m.is_marked else m.sensors


@dataclass(frozen=True)
class Estimate:
    t_hat: float
    lower: float
    upper: float
    m: int
    sum: int

    def as_dict(self) -> dict:
        return {"t_hat": self.t_hat, "lower": self.lower, "upper": self.upper, "m": self.m, "sum": self.sum}


def estimate(readings: Readings, model: StaticModel) -> Estimate:
    """SCAN's estimate over the retained sensors of ``model``.

    Readings for sensors that were removed or marked unnecessary are
    accepted and ignored.
    """
    if model.is_empty:
        raise ScanError("cannot estimate over the empty model")
    retained = sorted(retained_sensors(model))
    missing = [s for s in retained if s not in readings]
    if missing:
        raise ScanError(f"missing reading for sensor(s) {', '.join(missing)}")
    counts = [readings[s] for s in retained]
    if any(int(c) != c or c < 0 for c in counts):
        raise ScanError("readings must be non-negative integers")
    total = int(sum(counts))
    m = max_overlap(model)
    return Estimate(t_hat=total / math.sqrt(m), lower=total / m, upper=float(total), m=m, sum=total)


def scan(
    readings: Readings,
    model: StaticModel,
    mode: str = "destructive",
    policy: Policy = lexicographic_first,
) -> tuple[StaticModel, Estimate]:
    """Run all three steps; returns the retained model and its estimate."""
    if mode == "destructive":
        reduced = reduce_destructive(model.unmarked(), policy)
    elif mode == "marking":
        reduced = reduce_marking(model.unmarked(), policy)
    else:
        raise ValueError(f"unknown reduction mode {mode!r}")
    return reduced, estimate(readings, reduced)
