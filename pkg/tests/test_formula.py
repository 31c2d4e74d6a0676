import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpbt import formula as fm
from lpbt.formula import (
    AllFuture,
    And,
    Atom,
    AxiomSchema,
    Counterfactual,
    Implies,
    MissingSubstitution,
    Not,
    Or,
    instantiate,
    subformulas,
)
from lpbt.generators import random_formula
from lpbt.parser import ParseError, parse, render

p, q, r = Atom("p"), Atom("q"), Atom("r")
A, B, C = Atom("A"), Atom("B"), Atom("C")


def test_parse_ci_shape():
    assert parse("p => p") == Counterfactual(p, p)


def test_parse_cc_schema():
    cc = Implies(
        And(Counterfactual(A, B), Counterfactual(A, C)),
        Counterfactual(A, And(B, C)),
    )
    assert parse("(A => B) & (A => C) -> (A => (B & C))") == cc
    assert render(cc) == "(A => B) & (A => C) -> A => B & C"
    assert parse(render(cc)) == cc


def test_g_and_dual_are_distinct_trees():
    assert parse("G p") != parse("~F~p")
    assert parse("~F~p") == Not(fm.SomeFuture(Not(p)))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("a & b | c", Or(And(Atom("a"), Atom("b")), Atom("c"))),
        ("a => b => c", Counterfactual(Atom("a"), Counterfactual(Atom("b"), Atom("c")))),
        ("a -> b -> c", Implies(Atom("a"), Implies(Atom("b"), Atom("c")))),
        ("a | b | c", Or(Or(Atom("a"), Atom("b")), Atom("c"))),
        ("a | b => c", Counterfactual(Or(Atom("a"), Atom("b")), Atom("c"))),
        ("a => b -> c", Implies(Counterfactual(Atom("a"), Atom("b")), Atom("c"))),
        ("a -> b <-> c", fm.Iff(Implies(Atom("a"), Atom("b")), Atom("c"))),
        ("~G p & q", And(Not(AllFuture(p)), q)),
        ("[] <> p", fm.HistNec(fm.HistPoss(p))),
        ("true | false", Or(fm.Top(), fm.Bot())),
    ],
)
def test_precedence(text, expected):
    assert parse(text) == expected


def test_render_examples():
    assert render(Counterfactual(p, p)) == "p => p"
    assert render(Not(AllFuture(Not(p)))) == "~G~p"


@pytest.mark.parametrize(
    "text, offset",
    [("p &", 3), ("(p | q", 6), ("p q", 2), ("G", 1), ("p $ q", 2), ("", 0), ("p => )", 5)],
)
def test_parse_errors_carry_offset(text, offset):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.offset == offset
    assert err.value.expected


@pytest.mark.parametrize("word", ["G", "H", "F", "P"])
def test_operator_letters_are_not_atoms(word):
    with pytest.raises(ParseError):
        parse(f"q | {word}")
    with pytest.raises(ParseError):
        parse(f"{word} & q")


@pytest.mark.parametrize("word, node", [("true", fm.Top()), ("false", fm.Bot())])
def test_constants_are_not_atoms(word, node):
    assert parse(word) == node
    with pytest.raises(ValueError):
        Atom(word)


@pytest.mark.parametrize("bad", ["Foo", "Gp", "D", "_x"])
def test_bad_atom_names(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_offset_is_in_bytes():
    with pytest.raises(ParseError) as err:
        parse("é & $")
    # é occupies two bytes, the tokenizer stops on it
    assert err.value.offset == 0
    with pytest.raises(ParseError) as err:
        parse("p & é")
    assert err.value.offset == 4


def test_instantiate_examples():
    ci = AxiomSchema("CI", parse("A => A"))
    assert render(instantiate(ci, {"A": q})) == "q => q"
    l1 = AxiomSchema("L1", parse("A -> G P A"))
    got = instantiate(l1, {"A": parse("p | r")})
    assert got == parse("(p | r) -> G P (p | r)")
    irr = AxiomSchema("IRR", parse("(p & H~p) -> A"))
    assert instantiate(irr, {"A": parse("q => q")}) == parse("(p & H~p) -> (q => q)")


def test_instantiate_is_simultaneous():
    s = AxiomSchema("swap", parse("A & B"))
    assert instantiate(s, {"A": B, "B": A}) == parse("B & A")


def test_missing_substitution():
    s = AxiomSchema("CC", parse("(A => B) & (A => C) -> (A => B & C)"))
    assert s.arity == 3
    with pytest.raises(MissingSubstitution):
        instantiate(s, {"A": p, "B": q})


def test_instantiation_leaves_no_metavariables():
    s = AxiomSchema("AD", parse("(A => C) & (B => C) -> (A | B => C)"))
    got = instantiate(s, {"A": p, "B": parse("G q"), "C": parse("r => p")})
    assert not fm.atoms(got) & {"A", "B", "C"}


def test_subformulas():
    assert subformulas(p) == [p]
    assert subformulas(parse("p | ~p")) == [p, Not(p), Or(p, Not(p))]
    got = subformulas(parse("p => G q"))
    assert got == [p, q, AllFuture(q), parse("p => G q")]
    assert len(got) == 4


def test_expand_only_primitives():
    f = parse("(p <-> F q) & <> P r -> true")
    prim = fm.expand(f)
    assert all(isinstance(g, fm.PRIMITIVE_TYPES + (fm.Top,)) for g in fm.walk(prim))


def test_depth_and_size():
    f = parse("p => G q")
    assert fm.depth(f) == 2
    assert fm.size(f) == 4


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=0, max_value=5))
def test_round_trip(seed, depth):
    f = random_formula(seed, depth)
    assert parse(render(f)) == f


def test_formulas_hash_by_structure():
    assert hash(parse("G (p | q)")) == hash(parse("G(p|q)"))
    assert len({parse("G p"), parse("G  p"), parse("H p")}) == 2
