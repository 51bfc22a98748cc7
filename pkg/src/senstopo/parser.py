"""Concrete syntax: a recursive-descent parser and a matching printer.

Grammar, loosest to tightest binding::

    formula := "forall" var [":" sort] ":" formula      (scope extends right)
             | "exists" var [":" sort] ":" formula
             | ("A" | "E") formula
             | disj ["->" formula]
    disj    := conj {"|" conj}
    conj    := until {"&" until}
    until   := unary ["U" unary]
    unary   := ("~" | "X" | "G" | "F") unary | quantified | atom
    atom    := "bottom" | "(" formula ")" | term "=" term
             | term "in" "sense" "(" term ")"
             | ("RED" | "NRED" | "N" | "U") "(" term ")"
             | ("DJ" | "OVL" | "common" | "subset" | "leq" | "rangeeq") "(" term "," term ")"
             | "COVERED" | ("O" | "ON") "[" nat "]"
    sort    := "Sensor" | "Zone"
    term    := identifier | "'" any text "'"

Unannotated quantified variables get their sort from their uses: a
variable left of ``in`` is a zone, one inside ``sense(...)`` or any sensor
predicate is a sensor.  Identifiers that are not bound by a quantifier are
sensor constants unless declared as free variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .syntax import (
    And, AllPaths, Bottom, Common, Const, Covered, Disjoint, Eq, Exists, Finally, Forall, Formula,
    Globally, Implies, In, Leq, Necessary, Next, Not, NRed, Or, Overlap, Overlaps, RangeEq, Red,
    SomePaths, Sort, Subset, Term, Unnecessary, Until, Var,
)

KEYWORDS = {
    "forall", "exists", "in", "sense", "bottom", "RED", "NRED", "N", "U", "DJ", "OVL", "common",
    "subset", "leq", "rangeeq", "COVERED", "O", "ON", "A", "E", "X", "G", "F", "Sensor", "Zone",
}

_UNARY_SUGAR = {"RED": Red, "NRED": NRed, "N": Necessary, "U": Unnecessary}
_BINARY_SUGAR = {
    "DJ": Disjoint, "OVL": Overlap, "common": Common, "subset": Subset, "leq": Leq, "rangeeq": RangeEq,
}
_TEMPORAL_PREFIX = {"X": Next, "G": Globally, "F": Finally}

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<sym>[()\[\],:=~&|])|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|'(?P<quoted>[^']*)')"
)
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.pos = pos
        self.line = line
        self.column = col


@dataclass(frozen=True)
class Token:
    kind: str  # "sym", "num", "ident", "kw", "quoted", "eof"
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "arrow":
            kind = "sym"
        elif kind == "ident" and value in KEYWORDS:
            kind = "kw"
        elif kind == "quoted":
            start -= 1
            if not value:
                raise ParseError("empty quoted name", text, start)
        tokens.append(Token(kind, value, start))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, free: Mapping[str, Sort]):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.free = dict(free)
        self.bound: list[str] = []

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, value: str, kind: str | None = None) -> bool:
        t = self.tok
        return t.value == value and t.kind in ((kind,) if kind else ("sym", "kw"))

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, value: str) -> Token:
        if not self.at(value):
            self.fail(f"expected {value!r}")
        return self.advance()

    def fail(self, message: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.value)
        raise ParseError(f"{message}, found {found}", self.text, t.pos)

    # grammar

    def formula(self) -> Formula:
        if self.at("forall") or self.at("exists"):
            return self.quantified()
        if self.at("A") or self.at("E"):
            node = AllPaths if self.advance().value == "A" else SomePaths
            return node(self.formula())
        left = self.disj()
        if self.at("->"):
            self.advance()
            return Implies(left, self.formula())
        return left

    def quantified(self) -> Formula:
        node = Forall if self.advance().value == "forall" else Exists
        t = self.tok
        if t.kind != "ident":
            self.fail("expected a variable name")
        self.advance()
        self.expect(":")
        sort = None
        if self.at("Sensor") or self.at("Zone"):
            sort = Sort(self.advance().value)
            self.expect(":")
        self.bound.append(t.value)
        try:
            body = self.formula()
        finally:
            self.bound.pop()
        return node(t.value, sort, body)

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("|"):
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.until()
        while self.at("&"):
            self.advance()
            f = And(f, self.until())
        return f

    def until(self) -> Formula:
        f = self.unary()
        if self.at("U"):
            self.advance()
            return Until(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.at("~"):
            self.advance()
            return Not(self.unary())
        for kw, node in _TEMPORAL_PREFIX.items():
            if self.at(kw):
                self.advance()
                return node(self.unary())
        if self.at("forall") or self.at("exists"):
            return self.quantified()
        if self.at("A") or self.at("E"):
            return self.formula()
        return self.atom()

    def atom(self) -> Formula:
        t = self.tok
        if self.at("bottom"):
            self.advance()
            return Bottom()
        if self.at("("):
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if self.at("COVERED"):
            self.advance()
            return Covered()
        if self.at("O") or self.at("ON"):
            necessary = self.advance().value == "ON"
            self.expect("[")
            if self.tok.kind != "num":
                self.fail("expected an overlap degree")
            degree = int(self.advance().value)
            self.expect("]")
            return Overlaps(degree, necessary)
        if t.kind == "kw" and t.value in _UNARY_SUGAR:
            self.advance()
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return _UNARY_SUGAR[t.value](arg)
        if t.kind == "kw" and t.value in _BINARY_SUGAR:
            self.advance()
            self.expect("(")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(")")
            return _BINARY_SUGAR[t.value](a, b)
        if t.kind in ("ident", "quoted"):
            left = self.term()
            if self.at("="):
                self.advance()
                return Eq(left, self.term())
            if self.at("in"):
                self.advance()
                self.expect("sense")
                self.expect("(")
                s = self.term()
                self.expect(")")
                return In(left, s)
            self.fail("expected '=' or 'in'")
        self.fail("expected a formula")

    def term(self) -> Term:
        t = self.tok
        if t.kind == "quoted":
            self.advance()
            return Const(t.value)
        if t.kind != "ident":
            self.fail("expected a sensor or variable name")
        self.advance()
        if t.value in self.bound:
            return Var(t.value, None)
        if t.value in self.free:
            return Var(t.value, self.free[t.value])
        return Const(t.value)


# -- sort inference ----------------------------------------------------------------


def _uses(f: Formula, name: str, env: dict) -> list[Sort]:
    """Sorts demanded of the free occurrences of ``name`` in ``f``."""
    out: list[Sort] = []

    def visit(g: Formula, env: dict):
        if isinstance(g, (Forall, Exists)):
            if g.var == name:
                return
            visit(g.body, {**env, g.var: g.sort})
            return
        if isinstance(g, In):
            if isinstance(g.zone, Var) and g.zone.name == name:
                out.append(Sort.ZONE)
            if isinstance(g.sensor, Var) and g.sensor.name == name:
                out.append(Sort.SENSOR)
        elif isinstance(g, Eq):
            for a, b in ((g.left, g.right), (g.right, g.left)):
                if isinstance(a, Var) and a.name == name:
                    if isinstance(b, Const):
                        out.append(Sort.SENSOR)
                    elif isinstance(b, Var) and b.name != name and env.get(b.name) is not None:
                        out.append(env[b.name])
        else:
            for t in g.terms():
                if isinstance(t, Var) and t.name == name:
                    out.append(Sort.SENSOR)
        for c in g.children():
            visit(c, env)

    visit(f, env)
    return out


def _resolve(f: Formula, env: dict, text: str) -> Formula:
    if isinstance(f, (Forall, Exists)):
        sort = f.sort
        if sort is None:
            uses = _uses(f.body, f.var, env)
            if not uses:
                raise ParseError(f"cannot infer the sort of {f.var!r}; annotate it", text, 0)
            sort = Sort.ZONE if Sort.ZONE in uses else Sort.SENSOR
        return type(f)(f.var, sort, _resolve(f.body, {**env, f.var: sort}, text))
    if isinstance(f, Eq):
        return Eq(_resolve_term(f.left, env), _resolve_term(f.right, env))
    if isinstance(f, In):
        return In(_resolve_term(f.zone, env), _resolve_term(f.sensor, env))
    kwargs = {}
    changed = False
    for key, value in vars(f).items():
        if isinstance(value, Formula):
            kwargs[key] = _resolve(value, env, text)
            changed = True
        elif isinstance(value, Var):
            kwargs[key] = _resolve_term(value, env)
            changed = True
        else:
            kwargs[key] = value
    return type(f)(**kwargs) if changed else f


def _resolve_term(t: Term, env: dict) -> Term:
    if isinstance(t, Var) and t.sort is None:
        return Var(t.name, env.get(t.name))
    return t


def parse(text: str, free: Mapping[str, Sort] | None = None) -> Formula:
    """Parse a static or dynamic formula.

    ``free`` declares free variables and their sorts; any other unbound
    identifier is read as a sensor constant.
    """
    p = _Parser(text, free or {})
    f = p.formula()
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    return _resolve(f, dict(free or {}), text)


# -- printing ---------------------------------------------------------------------

# binding strength of the printed form; quantifiers and path quantifiers
# extend as far right as possible so they get the loosest level
_LOOSE, _IMP, _OR, _AND, _UNTIL, _UNARY, _ATOM = range(7)

_NAMES_UNARY = {Red: "RED", NRed: "NRED", Necessary: "N", Unnecessary: "U"}
_NAMES_BINARY = {v: k for k, v in _BINARY_SUGAR.items()}


def term_text(t: Term) -> str:
    if isinstance(t, Const) and (not _IDENT.match(t.name) or t.name in KEYWORDS):
        if "'" in t.name:
            raise ValueError(f"sensor name {t.name!r} cannot be written in formula syntax")
        return f"'{t.name}'"
    return t.name


def _level(f: Formula) -> int:
    if isinstance(f, (Forall, Exists, AllPaths, SomePaths)):
        return _LOOSE
    if isinstance(f, Implies):
        return _IMP
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    if isinstance(f, Until):
        return _UNTIL
    if isinstance(f, (Not, Next, Globally, Finally)):
        return _UNARY
    return _ATOM


def _wrap(f: Formula, need: int) -> str:
    text = to_text(f)
    return f"({text})" if _level(f) < need else text


def to_text(f: Formula) -> str:
    """Render ``f`` so that ``parse(to_text(f)) == f``."""
    if isinstance(f, Bottom):
        return "bottom"
    if isinstance(f, Eq):
        return f"{term_text(f.left)} = {term_text(f.right)}"
    if isinstance(f, In):
        return f"{term_text(f.zone)} in sense({term_text(f.sensor)})"
    if isinstance(f, Not):
        return "~" + _wrap(f.arg, _UNARY)
    if isinstance(f, (Next, Globally, Finally)):
        op = {Next: "X", Globally: "G", Finally: "F"}[type(f)]
        return f"{op} " + _wrap(f.arg, _UNARY)
    if isinstance(f, And):
        return f"{_wrap(f.left, _AND)} & {_wrap(f.right, _AND + 1)}"
    if isinstance(f, Or):
        return f"{_wrap(f.left, _OR)} | {_wrap(f.right, _OR + 1)}"
    if isinstance(f, Implies):
        return f"{_wrap(f.left, _IMP + 1)} -> {_wrap(f.right, _LOOSE)}"
    if isinstance(f, Until):
        return f"{_wrap(f.left, _UNARY)} U {_wrap(f.right, _UNARY)}"
    if isinstance(f, (Forall, Exists)):
        kw = "forall" if isinstance(f, Forall) else "exists"
        sort = f" : {f.sort}" if f.sort is not None else ""
        return f"{kw} {f.var}{sort} : {to_text(f.body)}"
    if isinstance(f, (AllPaths, SomePaths)):
        return ("A " if isinstance(f, AllPaths) else "E ") + to_text(f.path)
    if type(f) in _NAMES_UNARY:
        return f"{_NAMES_UNARY[type(f)]}({term_text(f.term)})"
    if type(f) in _NAMES_BINARY:
        return f"{_NAMES_BINARY[type(f)]}({term_text(f.left)}, {term_text(f.right)})"
    if isinstance(f, Covered):
        return "COVERED"
    if isinstance(f, Overlaps):
        return f"{'ON' if f.necessary else 'O'}[{f.degree}]"
    raise TypeError(f"cannot print {f!r}")
