"""Seeded random models and formulas, the named fixtures, and invalid mutants."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .formula import (
    AllFuture,
    AllPast,
    And,
    Atom,
    Bot,
    Counterfactual,
    Formula,
    HistNec,
    HistPoss,
    Iff,
    Implies,
    Not,
    Or,
    SomeFuture,
    SomePast,
    Top,
)
from .model import BtModel, Point, SimilarityOrder, transitive_closure

ATOM_NAMES = ("p", "q", "r", "s")


@dataclass(frozen=True)
class ModelParams:
    max_moments: int = 6
    branching: int = 2
    atoms: int = 3
    similarity_kind: str = "ranks"  # or "pairs"
    with_instants: bool = False

    def __post_init__(self):
        if not 1 <= self.max_moments <= 12:
            raise ValueError("max_moments must be in 1..12")
        if not 1 <= self.branching <= 3:
            raise ValueError("branching must be in 1..3")
        if not 0 <= self.atoms <= 4:
            raise ValueError("atoms must be in 0..4")
        if self.similarity_kind not in ("ranks", "pairs"):
            raise ValueError("similarity_kind must be 'ranks' or 'pairs'")


def random_tree(rng: random.Random, max_moments: int, branching: int) -> tuple[list[str], list[tuple[str, str]], dict[str, int]]:
    """Moments, parent->child edges and depths of a random rooted tree."""
    n = rng.randint(1, max_moments)
    moments = [f"m{k}" for k in range(n)]
    children = {m: 0 for m in moments}
    depth = {moments[0]: 0}
    edges = []
    for k in range(1, n):
        open_nodes = [m for m in moments[:k] if children[m] < branching]
        parent = rng.choice(open_nodes)
        children[parent] += 1
        edges.append((parent, moments[k]))
        depth[moments[k]] = depth[parent] + 1
    return moments, edges, depth


def _random_order(rng: random.Random, base: Point, pts: list[Point], kind: str) -> SimilarityOrder:
    if kind == "ranks":
        ranks = {p: rng.randint(0, 3) for p in pts}
        return SimilarityOrder.from_ranks(base, ranks)
    perm = pts[:]
    rng.shuffle(perm)
    pairs = [
        (perm[i], perm[j]) for i in range(len(perm)) for j in range(i + 1, len(perm)) if rng.random() < 0.3
    ]
    closed = transitive_closure(pairs)
    return SimilarityOrder(base, frozenset(closed))


def random_model(seed: int, params: ModelParams = ModelParams()) -> BtModel:
    """A valid model determined entirely by ``seed`` and ``params``."""
    rng = random.Random(seed)
    moments, edges, depth = random_tree(rng, params.max_moments, params.branching)
    skeleton = BtModel.build(moments, edges, fill_similarity=False)
    pts = skeleton.points()
    valuation = {
        a: [p for p in pts if rng.random() < 0.5] for a in ATOM_NAMES[: params.atoms]
    }
    similarity = {p: _random_order(rng, p, pts, params.similarity_kind) for p in pts}
    instants = None
    if params.with_instants:
        levels: dict[int, list[str]] = {}
        for m in moments:
            levels.setdefault(depth[m], []).append(m)
        instants = [levels[d] for d in sorted(levels)]
    return BtModel.build(
        moments, edges, valuation=valuation, similarity=similarity, instants=instants, histories=skeleton.histories
    )


_UNARY = (Not, AllFuture, AllPast, SomeFuture, SomePast, HistNec, HistPoss)
_BINARY = (Or, And, Implies, Iff, Counterfactual)
_KINDS = ("atom", "top", "bot") + _UNARY + _BINARY


def random_formula(seed: int | random.Random, depth: int = 3, atoms=ATOM_NAMES[:3]) -> Formula:
    """Uniform choice among node kinds at every level; depth 0 yields an atom."""
    if not 0 <= depth <= 5:
        raise ValueError("depth must be in 0..5")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    atoms = tuple(atoms)

    def go(d: int) -> Formula:
        if d == 0:
            return Atom(rng.choice(atoms))
        kind = rng.choice(_KINDS)
        if kind == "atom":
            return Atom(rng.choice(atoms))
        if kind == "top":
            return Top()
        if kind == "bot":
            return Bot()
        if kind in _UNARY:
            return kind(go(d - 1))
        return kind(go(d - 1), go(d - 1))

    return go(depth)


class UnknownFixture(KeyError):
    pass


def _tournament(preset: str = "stoic") -> BtModel:
    # declaration order fixes history order: h0 = b beats c, h1 = c beats b,
    # h2 = a beats c, h3 = c beats a
    moments = ["a_vs_b", "b_vs_c", "a_vs_c", "b_beats_c", "c_beats_b", "a_beats_c", "c_beats_a"]
    edges = [
        ("a_vs_b", "b_vs_c"),
        ("a_vs_b", "a_vs_c"),
        ("b_vs_c", "b_beats_c"),
        ("b_vs_c", "c_beats_b"),
        ("a_vs_c", "a_beats_c"),
        ("a_vs_c", "c_beats_a"),
    ]
    P = Point
    valuation = {
        "chrysippus_vs_berkeley": [P("b_vs_c", 0), P("b_vs_c", 1)],
        "chrysippus_vs_aristotle": [P("a_vs_c", 2), P("a_vs_c", 3)],
        "berkeley_wins": [P("a_vs_b", 0), P("a_vs_b", 1), P("b_vs_c", 0), P("b_beats_c", 0)],
        "aristotle_wins": [P("a_vs_b", 2), P("a_vs_b", 3), P("a_vs_c", 2), P("a_beats_c", 2)],
        "chrysippus_wins": [P("b_vs_c", 1), P("c_beats_b", 1), P("a_vs_c", 3), P("c_beats_a", 3)],
    }
    instants = [["a_vs_b"], ["b_vs_c", "a_vs_c"], ["b_beats_c", "c_beats_b", "a_beats_c", "c_beats_a"]]
    skeleton = BtModel.build(moments, edges, instants=instants)
    pts = skeleton.points()
    level = {m: k for k, block in enumerate(instants) for m in block}

    def default_ranks(base: Point) -> dict[Point, int]:
        # base, then same moment, then same instant, then the rest
        def rank(p: Point) -> int:
            if p == base:
                return 0
            if p.moment == base.moment:
                return 1
            if level[p.moment] == level[base.moment]:
                return 2
            return 3

        return {p: rank(p) for p in pts}

    if preset not in ("stoic", "anti-stoic"):
        raise UnknownFixture(f"unknown tournament preset {preset!r}")
    near, far = (P("b_vs_c", 1), P("b_vs_c", 0))
    if preset == "anti-stoic":
        near, far = far, near
    similarity = {}
    for base in pts:
        ranks = default_ranks(base)
        if base == P("a_vs_c", 2):
            ranks[near], ranks[far] = 2, 3
            for p in pts:
                if p not in (base, P("a_vs_c", 3), near, far):
                    ranks[p] = 4
        similarity[base] = SimilarityOrder.from_ranks(base, ranks)
    return BtModel.build(moments, edges, valuation=valuation, similarity=similarity, instants=instants)


def _wine() -> BtModel:
    # h0 = m1, m2 (actual); h1 = m1, m3, m4 where m4 is co-present with m2
    moments = ["m1", "m2", "m3", "m4"]
    edges = [("m1", "m2"), ("m1", "m3"), ("m3", "m4")]
    valuation = {
        "seventeen": [Point("m1", 0), Point("m4", 1)],
        "can_buy_wine": [Point("m2", 0)],
    }
    instants = [["m1"], ["m2", "m4"], ["m3"]]
    skeleton = BtModel.build(moments, edges)
    pts = skeleton.points()
    similarity = {
        base: SimilarityOrder.from_ranks(base, {p: (0 if p == base else 1) for p in pts}) for base in pts
    }
    return BtModel.build(moments, edges, valuation=valuation, similarity=similarity, instants=instants)


def _simple_fork() -> BtModel:
    moments = ["root", "left", "right"]
    edges = [("root", "left"), ("root", "right")]
    valuation = {"p": [Point("left", 0)], "q": [Point("root", 0), Point("right", 1)]}
    return BtModel.build(moments, edges, valuation=valuation, instants=[["root"], ["left", "right"]])


FIXTURES = {
    "tournament": _tournament,
    "tournament-anti-stoic": lambda: _tournament("anti-stoic"),
    "wine": _wine,
    "simple_fork": _simple_fork,
}


def fixture(name: str, preset: str | None = None) -> BtModel:
    """Named example models. ``tournament`` takes a ``stoic``/``anti-stoic`` preset."""
    if name == "tournament":
        return _tournament(preset or "stoic")
    if name not in FIXTURES:
        raise UnknownFixture(f"unknown fixture {name!r}")
    return FIXTURES[name]()


# --- deliberately invalid models ---------------------------------------------

MUTANT_KINDS = ("reflexive-edge", "broken-transitivity", "non-maximal-history", "reflexive-similarity")


def mutate(model: BtModel, kind: str, rng: random.Random | int = 0) -> BtModel | None:
    """An invalid variant of ``model``, or ``None`` when the model is too small for ``kind``."""
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    if kind == "reflexive-edge":
        m = rng.choice(model.moments)
        return model.replace(precedence=model.precedence | {(m, m)})
    if kind == "broken-transitivity":
        # drop a pair that is implied by two others
        implied = sorted(
            (a, c)
            for (a, b) in model.precedence
            for (b2, c) in model.precedence
            if b == b2 and (a, c) in model.precedence
        )
        if not implied:
            return None
        drop = rng.choice(implied)
        prec = model.precedence - {drop}
        return BtModel.build(
            model.moments,
            prec,
            valuation=model.valuation,
            similarity=model.similarity,
            instants=model.instants,
            close=False,
        )
    if kind == "non-maximal-history":
        long = [i for i, h in enumerate(model.histories) if len(h) > 1]
        if not long:
            return None
        i = rng.choice(long)
        hs = list(model.histories)
        hs[i] = hs[i][:-1]
        return model.replace(histories=tuple(hs))
    if kind == "reflexive-similarity":
        base = rng.choice(model.points())
        order = model.similarity_of(base)
        x = rng.choice(model.points())
        sim = dict(model.similarity)
        sim[base] = SimilarityOrder(base, order.closer | {(x, x)}, order.scope)
        return model.replace(similarity=sim)
    raise ValueError(f"unknown mutant kind {kind!r}")
