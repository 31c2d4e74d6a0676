import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpbt import axioms as ax
from lpbt.formula import Atom, Counterfactual, Iff
from lpbt.generators import ModelParams, fixture, mutate, random_formula, random_model
from lpbt.model import BtModel, Point, Policy, SimilarityOrder
from lpbt.parser import parse
from lpbt.semantics import valid_in_model

from oracles import truth_table_tautology

FIXTURE_NAMES = ["tournament", "wine", "simple_fork"]


def test_registry_shape():
    assert len(ax.REGISTRY) == 20
    assert set(ax.COUNTERFACTUAL_SCHEMAS) == {"CI", "CC", "CW", "SA", "AD"}
    assert len(ax.TEMPORAL_SCHEMAS) == 15
    for name, sch in ax.REGISTRY.items():
        assert sch.name == name
        assert 0 <= sch.arity <= 3
    assert ax.REGISTRY["L6"].arity == 0
    assert ax.schema("K_□") is ax.REGISTRY["K_box"]
    assert ax.schema("L1′") is ax.REGISTRY["L1'"]


def test_unknown_schema():
    with pytest.raises(KeyError):
        ax.schema("K_X")


def test_ci_on_random_models():
    rng = random.Random(1)
    for seed in range(20):
        model = random_model(seed, ModelParams(with_instants=True))
        for policy in ax.applicable_policies(model):
            res = ax.check_schema(model, ax.REGISTRY["CI"], ax.random_substitutions(rng, 10), policy)
            assert res.tried == 10 and res.ok


def test_l6_on_tournament():
    t = fixture("tournament")
    substs = ax.random_substitutions(random.Random(0), 20, atom_names=t.atoms()[:3])
    for policy in Policy:
        assert ax.check_schema(t, ax.REGISTRY["L6"], substs, policy).ok


def test_sa_counterexample_is_reported():
    # u closer than v: A at v only, B at u and v, C at u only
    m = BtModel.build(["r", "a", "b"], [("r", "a"), ("r", "b")])
    base, u, v = Point("r", 0), Point("a", 0), Point("b", 1)
    m = m.replace(
        valuation={"p": frozenset({v}), "q": frozenset({u, v}), "r": frozenset({u})},
        similarity={**m.similarity, base: SimilarityOrder(base, frozenset({(u, v)}))},
    )
    res = ax.check_schema(m, ax.REGISTRY["SA"], [{"A": Atom("p"), "B": Atom("q"), "C": Atom("r")}])
    assert not res.ok
    assert res.failures[0].point == base
    assert res.failures[0].substitution == {"A": "p", "B": "q", "C": "r"}


@pytest.mark.parametrize(
    "text, expected",
    [
        ("p | ~p", True),
        ("(G p) | ~(G p)", True),
        ("(p => q) -> p", False),
        ("F p <-> ~G~p", True),
        ("G p -> F p", False),
        ("true", True),
    ],
)
def test_tautology_examples(text, expected):
    assert ax.check_tautology(parse(text)) is expected


def test_too_many_atoms():
    f = parse(" & ".join(f"a{k}" for k in range(6)))
    with pytest.raises(ax.TooManyAtoms):
        ax.check_tautology(f, max_atoms=5)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 4))
def test_tautology_matches_truth_table_oracle(seed, depth):
    rng = random.Random(seed)
    f = random_formula(rng, depth, ("p", "q"))
    if rng.random() < 0.5:
        f = f | ~f if rng.random() < 0.5 else f >> f
    assert ax.check_tautology(f) == truth_table_tautology(f)


def test_rn_example():
    for name in FIXTURE_NAMES:
        res = ax.check_rules(fixture(name), [parse("p | ~p")], rules=("RN_box", "RN_G", "RN_H"))
        for r in res.values():
            assert r.tried == 1 and r.ok


def test_rea_commutativity_on_fixtures():
    lhs, rhs, chi = parse("a & b"), parse("b & a"), parse("c")
    for name in FIXTURE_NAMES:
        model = fixture(name)
        for policy in ax.applicable_policies(model):
            assert valid_in_model(model, Iff(Counterfactual(lhs, chi), Counterfactual(rhs, chi)), policy)
            assert valid_in_model(model, Iff(Counterfactual(chi, lhs), Counterfactual(chi, rhs)), policy)


def test_rea_rec_rules_pass_on_fixtures():
    corpus = [parse("a & b"), parse("G c | d"), parse("c => a")]
    for name in FIXTURE_NAMES:
        res = ax.check_rules(fixture(name), corpus, rules=("REA", "REC"))
        assert res["REA"].tried and res["REA"].ok
        assert res["REC"].tried and res["REC"].ok


def test_irr_on_three_point_chain():
    chain = BtModel.build(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert len(chain.points()) == 3
    assert ax.check_irr(chain, parse("q | ~q"))
    assert ax.irr_premise("p", parse("q | ~q")) == parse("(p & H~p) -> (q | ~q)")
    res = ax.check_rules(chain, [parse("q | ~q"), parse("q")], rules=("IRR",))
    assert res["IRR"].tried == 2 and res["IRR"].ok


def test_irr_cap():
    kids = [f"k{i}" for i in range(7)]
    big = BtModel.build(["root", *kids], [("root", k) for k in kids])
    assert len(big.points()) > ax.IRR_POINT_CAP
    with pytest.raises(ax.CapExceeded):
        ax.check_irr(big, parse("q"))
    res = ax.check_rules(big, [parse("q")], rules=("IRR",))
    assert res["IRR"].skipped == 1 and res["IRR"].tried == 0


def test_broken_transitivity_falsifies_4g():
    # a > b > c without a > c: from a, c is not a future, so G p can hold at a while G G p fails
    model = BtModel.build(["a", "b", "c"], [("a", "b"), ("b", "c")], close=False)
    m = model.replace(valuation={"p": frozenset(p for p in model.points() if p.moment == "b")})
    res = ax.check_schema(m, ax.REGISTRY["4_G"], [{"A": Atom("p")}])
    assert not res.ok
    assert res.failures[0].point.moment == "a"


def test_mutants_are_caught():
    rng = random.Random(4)
    for seed in range(30):
        model = random_model(seed, ModelParams(max_moments=6))
        for kind in ("broken-transitivity",):
            mutant = mutate(model, kind, rng)
            if mutant is None:
                continue
            report = ax.check_model(mutant, schemas=["4_G", "4_H"], substitutions=20, rules=())
            assert not report.ok


def test_report_text_and_json():
    report = ax.fuzz(1, 3, schemas=["CI", "T_box"], rules=("MP",))
    text = report.to_text()
    assert text.splitlines()[0].startswith("CI")
    doc = report.to_dict()
    assert doc["models"] == 3
    assert doc["schemas"]["CI"]["failed"] == 0
    assert '"T_box"' in report.to_json()


def test_fuzz_is_deterministic():
    a = ax.fuzz(5, 4, schemas=["SA", "L3"], rules=())
    b = ax.fuzz(5, 4, schemas=["SA", "L3"], rules=())
    assert a.to_dict() == b.to_dict()
