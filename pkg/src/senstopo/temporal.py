"""Branching-time model checking over a finite, total transition graph.

Path formulas reach this module already normalised: their maximal state
subformulas have been replaced by the set of worlds where they hold.  The
normal form is a nested tuple::

    ("prop", frozenset_of_worlds) | ("not", p) | ("and", p, q)
    | ("next", p) | ("until", p, q)

Three procedures decide ``E p`` (the worlds having some path satisfying p):

* fixpoint labelling for the single-operator shapes ``EX``, ``EU``, ``EG``;
* a tableau product with fairness (exact for any path formula);
* enumeration of lasso-shaped paths up to a length bound (bounded; used
  as an independent cross-check).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

import networkx as nx

PathForm = tuple


def prop(worlds: Iterable[Hashable]) -> PathForm:
    return ("prop", frozenset(worlds))


def neg(p: PathForm) -> PathForm:
    return p[1] if p[0] == "not" else ("not", p)


@dataclass(frozen=True)
class Graph:
    worlds: tuple
    succ: Mapping[Hashable, tuple]

    @classmethod
    def from_edges(cls, worlds: Iterable[Hashable], edges: Iterable[tuple]) -> "Graph":
        worlds = tuple(worlds)
        succ = {w: [] for w in worlds}
        for a, b in edges:
            succ[a].append(b)
        return cls(worlds, {w: tuple(sorted(set(s), key=worlds.index)) for w, s in succ.items()})

    @property
    def all(self) -> frozenset:
        return frozenset(self.worlds)


# -- fixpoint labelling -------------------------------------------------------------


def ex(g: Graph, target: frozenset) -> frozenset:
    return frozenset(w for w in g.worlds if any(u in target for u in g.succ[w]))


def eu(g: Graph, hold: frozenset, goal: frozenset) -> frozenset:
    result = set(goal)
    changed = True
    while changed:
        changed = False
        for w in g.worlds:
            if w not in result and w in hold and any(u in result for u in g.succ[w]):
                result.add(w)
                changed = True
    return frozenset(result)


def eg(g: Graph, hold: frozenset) -> frozenset:
    result = set(hold)
    changed = True
    while changed:
        changed = False
        for w in list(result):
            if not any(u in result for u in g.succ[w]):
                result.discard(w)
                changed = True
    return frozenset(result)


# -- tableau ---------------------------------------------------------------------------


def _elementary(p: PathForm, out: list) -> None:
    kind = p[0]
    if kind == "prop":
        key = p
    elif kind == "not":
        _elementary(p[1], out)
        return
    elif kind == "and":
        _elementary(p[1], out)
        _elementary(p[2], out)
        return
    elif kind == "next":
        key = p
        _elementary(p[1], out)
    elif kind == "until":
        key = ("next", p)
        _elementary(p[1], out)
        _elementary(p[2], out)
    else:
        raise ValueError(f"not a normalised path formula: {p!r}")
    if key not in out:
        out.append(key)


def _holds(state: frozenset, p: PathForm) -> bool:
    kind = p[0]
    if kind == "prop":
        return p in state
    if kind == "not":
        return not _holds(state, p[1])
    if kind == "and":
        return _holds(state, p[1]) and _holds(state, p[2])
    if kind == "next":
        return p in state
    return _holds(state, p[2]) or (_holds(state, p[1]) and ("next", p) in state)


def tableau_exists(g: Graph, p: PathForm, max_states: int = 2_000_000) -> frozenset:
    """Worlds from which some path satisfies ``p`` (exact)."""
    el: list = []
    _elementary(p, el)
    props = [e for e in el if e[0] == "prop"]
    nexts = [e for e in el if e[0] == "next"]
    untils = [e[1] for e in nexts if e[1][0] == "until"]
    if len(g.worlds) * 2 ** len(nexts) > max_states:
        raise OverflowError(f"tableau would need {len(g.worlds) * 2 ** len(nexts)} states")

    def states_of(w):
        base = frozenset(q for q in props if w in q[1])
        for bits in itertools.product((False, True), repeat=len(nexts)):
            yield base | frozenset(n for n, b in zip(nexts, bits) if b)

    product = nx.DiGraph()
    by_world = {w: list(states_of(w)) for w in g.worlds}
    for w, states in by_world.items():
        for k in states:
            product.add_node((w, k))
            for u in g.succ[w]:
                for k2 in by_world[u]:
                    if all((n in k) == _holds(k2, n[1]) for n in nexts):
                        product.add_edge((w, k), (u, k2))

    fair: set = set()
    for comp in nx.strongly_connected_components(product):
        if len(comp) == 1:
            (node,) = comp
            if not product.has_edge(node, node):
                continue
        if all(any(not _holds(k, u) or _holds(k, u[2]) for _, k in comp) for u in untils):
            fair |= comp
    good = set(fair)
    for node in fair:
        good |= nx.ancestors(product, node)
    return frozenset(w for w in g.worlds if any((w, k) in good and _holds(k, p) for k in by_world[w]))


# -- lasso enumeration -------------------------------------------------------------------


@dataclass
class LassoSearch:
    holds: frozenset
    truncated: bool
    nodes: int


def _lasso_sat(path: list, loop_start: int, p: PathForm) -> bool:
    n = len(path)

    def nxt(i):
        return i + 1 if i + 1 < n else loop_start

    memo: dict = {}

    def at(i: int, q: PathForm) -> bool:
        key = (i, id(q))
        if key in memo:
            return memo[key]
        kind = q[0]
        if kind == "prop":
            r = path[i] in q[1]
        elif kind == "not":
            r = not at(i, q[1])
        elif kind == "and":
            r = at(i, q[1]) and at(i, q[2])
        elif kind == "next":
            r = at(nxt(i), q[1])
        else:
            r = False
            j, seen = i, set()
            while j not in seen:
                seen.add(j)
                if at(j, q[2]):
                    r = True
                    break
                if not at(j, q[1]):
                    break
                j = nxt(j)
        memo[key] = r
        return r

    return at(0, p)


def _props(p: PathForm, out: list) -> list:
    if p[0] == "prop":
        out.append(p[1])
    else:
        for q in p[1:]:
            _props(q, out)
    return out


def lasso_exists(g: Graph, p: PathForm, max_stem: int, max_loop: int, budget: int = 1_000_000) -> LassoSearch:
    """Worlds with a lasso path (stem <= max_stem, loop <= max_loop) satisfying ``p``.

    Walks are grown one world at a time, so short witnesses are found first.
    A loop can only start within the first ``max_stem + 1`` positions; past
    those, a world matters only through the propositions it satisfies (and
    as the current end of the walk).  Walks that agree on that much are
    interchangeable and only one of them is kept.
    """
    props = _props(p, [])
    canon = {}
    by_label: dict = {}
    for w in g.worlds:
        label = tuple(w in s for s in props)
        canon[w] = by_label.setdefault(label, w)
    found = set()
    nodes = 0
    truncated = False
    longest = max_stem + max_loop
    for w in g.worlds:
        level = {((w,), w)}
        hit = False
        for n in range(1, longest + 1):
            if n > 1:
                keep = n - 1 <= max_stem
                level = {
                    (walk + ((u if keep else canon[u]),), u)
                    for walk, last in level
                    for u in g.succ[last]
                }
            for walk, last in level:
                nodes += 1
                if nodes > budget:
                    truncated = True
                    break
                for j in range(max(0, n - max_loop), min(max_stem, n - 1) + 1):
                    if walk[j] in g.succ[last] and _lasso_sat(walk, j, p):
                        hit = True
                        break
                if hit:
                    break
            if hit or truncated:
                break
        if hit:
            found.add(w)
        if truncated:
            break
    return LassoSearch(frozenset(found), truncated, nodes)


def temporal_depth(p: PathForm) -> int:
    """Number of temporal operators in ``p``."""
    if p[0] == "prop":
        return 0
    own = 1 if p[0] in ("next", "until") else 0
    return own + sum(temporal_depth(q) for q in p[1:])
