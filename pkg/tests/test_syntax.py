import pytest
from hypothesis import given, settings

from senstopo.parser import ParseError, parse, to_text, tokenize
from senstopo.syntax import (
    AllPaths, And, Bottom, Const, Covered, Disjoint, Eq, Exists, Finally, Forall, Globally, Implies, In, Necessary,
    Next, Not, Or, Overlaps, Red, SomePaths, Sort, SortError, Subset, Until, Var, constants, desugar,
    free_vars, is_temporal, is_well_sorted, typecheck,
)

from support import state_formulas, static_formulas

S, Z = Sort.SENSOR, Sort.ZONE


def sv(n):
    return Var(n, S)


def zv(n):
    return Var(n, Z)


# -- parsing ---------------------------------------------------------------------------


def test_irreducibility_formula():
    assert parse("forall s : ~RED(s)") == Forall("s", S, Not(Red(sv("s"))))


def test_bottom():
    assert parse("bottom") == Bottom()
    assert to_text(Bottom()) == "bottom"


def test_sorts_are_inferred_from_use():
    f = parse("exists z : z in sense(d) & ~(z in sense(c))")
    assert f == Exists("z", Z, And(In(zv("z"), Const("d")), Not(In(zv("z"), Const("c")))))
    g = parse("forall x : forall y : x = y -> RED(x)")
    assert g == Forall("x", S, Forall("y", S, Implies(Eq(sv("x"), sv("y")), Red(sv("x")))))


def test_annotation_wins():
    f = parse("forall z : Zone : forall w : Zone : z = w")
    assert f == Forall("z", Z, Forall("w", Z, Eq(zv("z"), zv("w"))))


def test_precedence():
    a, b, c = (In(zv("z"), Const(n)) for n in "abc")
    f = parse("forall z : z in sense(a) & z in sense(b) | z in sense(c) -> bottom")
    assert f == Forall("z", Z, Implies(Or(And(a, b), c), Bottom()))
    # implication is right associative
    g = parse("bottom -> bottom -> bottom")
    assert g == Implies(Bottom(), Implies(Bottom(), Bottom()))


def test_quantifier_scope_extends_right():
    f = parse("exists s : RED(s) & N(s)")
    assert f == Exists("s", S, And(Red(sv("s")), Necessary(sv("s"))))


def test_sugar_atoms():
    assert parse("subset(d, c)") == Subset(Const("d"), Const("c"))
    assert parse("DJ(a,d)") == Disjoint(Const("a"), Const("d"))
    assert parse("COVERED") == Covered()
    assert parse("O[3]") == Overlaps(3)
    assert parse("ON[2]") == Overlaps(2, necessary=True)
    assert to_text(Red(sv("s"))) == "RED(s)"


def test_temporal_syntax():
    f = parse("A X (~subset(a,b) & ~subset(b,a))")
    assert f == AllPaths(Next(And(Not(Subset(Const("a"), Const("b"))), Not(Subset(Const("b"), Const("a"))))))
    g = parse("E (DJ(a,b) U OVL(a,b))")
    assert isinstance(g, SomePaths) and isinstance(g.path, Until)
    h = parse("A G E F DJ(a, b)")
    assert h == AllPaths(Globally(SomePaths(Finally(Disjoint(Const("a"), Const("b"))))))
    assert is_temporal(h) and not is_temporal(parse("DJ(a,b)"))


def test_unnecessary_versus_until():
    f = parse("U(a) U N(b)")
    assert f == Until(parse("U(a)"), Necessary(Const("b")))


def test_quoted_constants():
    f = parse("RED('sensor 1')")
    assert f == Red(Const("sensor 1"))
    assert parse(to_text(Red(Const("forall")))) == Red(Const("forall"))


def test_free_variables_declared():
    f = parse("leq(s, t)", free={"s": S, "t": S})
    assert free_vars(f) == {"s": S, "t": S}
    assert constants(parse("leq(s, t)")) == {"s", "t"}


@pytest.mark.parametrize(
    "text, where",
    [
        ("forall (", 8),
        ("RED(a", 6),
        ("a = ", 5),
        ("O[0x]", 4),
        ("bottom bottom", 8),
    ],
)
def test_parse_errors_carry_position(text, where):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.column == where
    assert info.value.line == 1


def test_parse_error_message_mentions_location():
    with pytest.raises(ParseError, match="line 2, column 3"):
        parse("forall z :\n  ) ")


def test_unused_variable_needs_a_sort():
    with pytest.raises(ParseError, match="cannot infer"):
        parse("forall q : bottom")
    assert parse("forall q : Sensor : bottom") == Forall("q", S, Bottom())


def test_tokenizer_rejects_junk():
    with pytest.raises(ParseError):
        tokenize("a $ b")


# -- sort checking ---------------------------------------------------------------------


def test_typecheck_examples():
    typecheck(parse("exists z : z in sense(d) & ~(z in sense(c))"), {"a", "b", "c", "d"})
    with pytest.raises(SortError):
        typecheck(Forall("z", Z, Forall("s", S, Eq(zv("z"), sv("s")))))
    with pytest.raises(SortError, match="marking"):
        typecheck(parse("A X N(a)"))
    with pytest.raises(SortError, match="unknown sensor"):
        typecheck(parse("RED(q)"), {"a"})


def test_layering_of_dynamic_formulas():
    with pytest.raises(SortError, match="outside the scope"):
        typecheck(parse("X DJ(a,b)"))
    with pytest.raises(SortError, match="outside the scope"):
        typecheck(parse("A F G DJ(a,b)"))
    with pytest.raises(SortError, match="zone variable"):
        typecheck(parse("A X z in sense(a)", free={"z": Z}), free={"z": Z})
    with pytest.raises(SortError, match="path quantifier inside a static"):
        typecheck(parse("forall s : A X RED(s)"))
    assert is_well_sorted(parse("A (F DJ(a,b) | G OVL(a,b))"))


def test_bad_overlap_degree():
    assert not is_well_sorted(Overlaps(0))


# -- desugaring ------------------------------------------------------------------------


def test_overlap_degree_one_expansion():
    x, y = zv("x"), sv("y")
    expected = desugar(Exists("x", Z, Exists("y", S, In(x, y))))
    assert desugar(Overlaps(1)) == expected


def test_overlap_degree_three_shape():
    f = desugar(Overlaps(3))
    names = []
    g = f
    while True:
        # an existential in core form is ~forall ~
        if isinstance(g, Implies) and isinstance(g.left, Forall):
            names.append((g.left.var, g.left.sort))
            g = g.left.body.left if isinstance(g.left.body, Implies) else g.left.body
            continue
        break
    assert names == [("x", Z), ("y1", S), ("y2", S), ("y3", S)]
    ins = {n for n in desugar(Overlaps(3)).walk() if isinstance(n, In)}
    assert ins == {In(zv("x"), sv(f"y{i}")) for i in (1, 2, 3)}
    eqs = {n for n in f.walk() if isinstance(n, Eq)}
    assert len(eqs) == 6


def test_desugar_output_is_core():
    core = (Bottom, Eq, In, Implies, Forall, Necessary)
    for text in ["forall s : ~RED(s)", "OVL(a,b) | DJ(a,b)", "exists s : NRED(s) & ~U(s)", "COVERED", "ON[2]"]:
        for node in desugar(parse(text)).walk():
            assert isinstance(node, core) or type(node).__name__ == "Unnecessary"


def test_fresh_names_avoid_capture():
    f = parse("forall x : forall y : leq(x, y)")
    body = desugar(f).body.body
    assert isinstance(body, Forall) and body.var not in ("x", "y")


# -- round trips ---------------------------------------------------------------------


@settings(max_examples=300)
@given(static_formulas())
def test_static_round_trip(f):
    assert is_well_sorted(f)
    assert parse(to_text(f)) == f


@settings(max_examples=200)
@given(state_formulas())
def test_dynamic_round_trip(f):
    assert is_well_sorted(f)
    assert parse(to_text(f)) == f


@settings(max_examples=100)
@given(static_formulas())
def test_printing_is_idempotent(f):
    text = to_text(f)
    assert to_text(parse(text)) == text
