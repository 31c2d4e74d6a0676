"""Finite Ockhamist branching-time models with per-point similarity orders.

Precedence is stored as a set of ``(earlier, later)`` pairs. Histories are the
maximal chains of that order; a point is a ``(moment, history index)`` pair
with the moment lying on the history.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

Moment = str
History = tuple[Moment, ...]


class Point(NamedTuple):
    moment: Moment
    history: int

    def ref(self) -> str:
        return f"{self.moment}@{self.history}"


class Policy(enum.Enum):
    """Which points a base point may be compared with."""

    UNRESTRICTED = "unrestricted"
    COPRESENT = "copresent"
    HIST_ACCESSIBLE = "hist"

    @classmethod
    def parse(cls, text: str) -> Policy:
        aliases = {"hist-accessible": "hist", "histaccessible": "hist", "co-present": "copresent"}
        return cls(aliases.get(text.lower(), text.lower()))


class PolicyUnsupported(ValueError):
    pass


class ModelError(ValueError):
    """Raised for structurally malformed model input (not for frame violations)."""


@dataclass(frozen=True)
class SimilarityOrder:
    """Strict partial order of points by closeness to ``base``.

    ``(x, y) in closer`` reads "x is more similar to base than y". A ``scope``
    of ``None`` means every point of the model is comparable.
    """

    base: Point
    closer: frozenset[tuple[Point, Point]] = frozenset()
    scope: frozenset[Point] | None = None

    @classmethod
    def from_ranks(cls, base: Point, ranks: Mapping[Point, int], scope: Iterable[Point] | None = None):
        """Lower rank is closer; unranked points are incomparable to everything."""
        pairs = frozenset(
            (x, y) for x, rx in ranks.items() for y, ry in ranks.items() if rx < ry
        )
        return cls(base, pairs, None if scope is None else frozenset(scope))

    def is_closer(self, x: Point, y: Point) -> bool:
        return (x, y) in self.closer


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple
    message: str

    def __str__(self):
        return f"{self.kind}: {self.message}"


def transitive_closure(pairs: Iterable[tuple[Moment, Moment]]) -> frozenset[tuple[Moment, Moment]]:
    succ: dict[Moment, set[Moment]] = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    closed = set()
    for start in list(succ):
        stack, seen = list(succ[start]), set()
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            stack.extend(succ.get(n, ()))
        closed.update((start, n) for n in seen)
    return frozenset(closed)


def covering_pairs(moments: Iterable[Moment], precedence: frozenset) -> list[tuple[Moment, Moment]]:
    """Pairs ``a > b`` with no moment strictly between them."""
    ms = list(moments)
    return [
        (a, b)
        for a in ms
        for b in ms
        if (a, b) in precedence
        and a != b
        and not any((a, c) in precedence and (c, b) in precedence for c in ms if c not in (a, b))
    ]


def compute_histories(moments: Iterable[Moment], precedence: frozenset) -> list[History]:
    """All maximal chains, earliest moment first, sorted by declaration order of members.

    Walks the covering graph from the earliest moments to the latest ones;
    for a strict partial order every maximal chain is such a path.
    """
    ms = list(moments)
    order = {m: i for i, m in enumerate(ms)}
    covers: dict[Moment, list[Moment]] = {m: [] for m in ms}
    has_pred = set()
    for a, b in covering_pairs(ms, precedence):
        covers[a].append(b)
        has_pred.add(b)
    result = set()

    def extend(path):
        nxt = covers[path[-1]]
        if not nxt:
            result.add(tuple(path))
            return
        for b in nxt:
            if b not in path:
                extend(path + [b])

    for root in ms:
        if root not in has_pred:
            extend([root])
    return sorted(result, key=lambda h: [order[m] for m in h])


@dataclass(frozen=True, eq=False)
class BtModel:
    moments: tuple[Moment, ...]
    precedence: frozenset[tuple[Moment, Moment]]
    histories: tuple[History, ...]
    valuation: Mapping[str, frozenset[Point]] = field(default_factory=dict)
    similarity: Mapping[Point, SimilarityOrder] = field(default_factory=dict)
    instants: tuple[frozenset[Moment], ...] | None = None

    @classmethod
    def build(
        cls,
        moments: Iterable[Moment],
        precedence: Iterable[tuple[Moment, Moment]],
        *,
        valuation: Mapping[str, Iterable[Point]] | None = None,
        similarity: Mapping[Point, SimilarityOrder] | None = None,
        instants: Iterable[Iterable[Moment]] | None = None,
        histories: Iterable[Iterable[Moment]] | None = None,
        close: bool = True,
        fill_similarity: bool = True,
    ) -> BtModel:
        """Assemble a model, computing histories unless they are given.

        Points without a similarity entry get the empty order when
        ``fill_similarity`` is set.
        """
        ms = tuple(moments)
        prec = transitive_closure(precedence) if close else frozenset(precedence)
        hs = (
            tuple(compute_histories(ms, prec))
            if histories is None
            else tuple(tuple(h) for h in histories)
        )
        model = cls(
            ms,
            prec,
            hs,
            {a: frozenset(v) for a, v in (valuation or {}).items()},
            dict(similarity or {}),
            None if instants is None else tuple(frozenset(b) for b in instants),
        )
        if fill_similarity:
            missing = {p: SimilarityOrder(p) for p in model.points() if p not in model.similarity}
            if missing:
                object.__setattr__(model, "similarity", {**model.similarity, **missing})
        return model

    def replace(self, **changes) -> BtModel:
        data = {
            "moments": self.moments,
            "precedence": self.precedence,
            "histories": self.histories,
            "valuation": self.valuation,
            "similarity": self.similarity,
            "instants": self.instants,
        }
        data.update(changes)
        return BtModel(**data)

    def precedes(self, earlier: Moment, later: Moment) -> bool:
        return (earlier, later) in self.precedence

    def points(self) -> list[Point]:
        """Every well-formed point, ordered by moment declaration then history."""
        return [
            Point(m, i)
            for m in self.moments
            for i, h in enumerate(self.histories)
            if m in h
        ]

    def histories_through(self, m: Moment) -> list[int]:
        return [i for i, h in enumerate(self.histories) if m in h]

    def is_point(self, p: Point) -> bool:
        return 0 <= p.history < len(self.histories) and p.moment in self.histories[p.history]

    def atoms(self) -> list[str]:
        return sorted(self.valuation)

    def instant_of(self, m: Moment) -> frozenset[Moment] | None:
        for block in self.instants or ():
            if m in block:
                return block
        return None

    def similarity_of(self, base: Point) -> SimilarityOrder:
        return self.similarity.get(base) or SimilarityOrder(base)


def points(model: BtModel) -> list[Point]:
    return model.points()


def r_box_class(model: BtModel, i: Point) -> set[Point]:
    """Points sharing ``i``'s moment: the historical-necessity equivalence class."""
    return {Point(i.moment, h) for h in model.histories_through(i.moment)}


def candidates(model: BtModel, base: Point, policy: Policy) -> set[Point]:
    order = model.similarity_of(base)
    pool = set(model.points()) if order.scope is None else set(order.scope)
    if policy is Policy.COPRESENT:
        if model.instants is None:
            raise PolicyUnsupported("co-presence needs an instant partition")
        block = model.instant_of(base.moment) or frozenset({base.moment})
        pool = {p for p in pool if p.moment in block}
    elif policy is Policy.HIST_ACCESSIBLE:
        pool &= r_box_class(model, base)
    pool.add(base)
    return pool


def closest(model: BtModel, base: Point, candidate_set: Iterable[Point]) -> set[Point]:
    """Members of ``candidate_set`` with no strictly closer competitor inside it."""
    cs = set(candidate_set)
    order = model.similarity_of(base)
    return {v for v in cs if not any(order.is_closer(w, v) for w in cs if w != v)}


def validate(model: BtModel) -> list[Violation]:
    """Every frame, history, valuation, similarity and instant violation found."""
    out: list[Violation] = []
    ms = model.moments
    mset = set(ms)
    prec = model.precedence

    if not ms:
        out.append(Violation("empty", (), "model has no moments"))
    if len(mset) != len(ms):
        dup = sorted({m for m in ms if ms.count(m) > 1})
        out.append(Violation("duplicate-moment", tuple(dup), f"duplicate moment ids {dup}"))
    for a, b in sorted(prec):
        if a not in mset or b not in mset:
            out.append(Violation("unknown-moment", (a, b), f"precedence pair ({a}, {b}) names an unknown moment"))
    for m in ms:
        if (m, m) in prec:
            out.append(Violation("irreflexivity", (m,), f"{m} precedes itself"))
    for a, b, c in itertools.product(ms, repeat=3):
        if (a, b) in prec and (b, c) in prec and (a, c) not in prec:
            out.append(Violation("transitivity", (a, b, c), f"{a} > {b} > {c} but not {a} > {c}"))
    for a, b, c in itertools.product(ms, repeat=3):
        if a < b and (a, c) in prec and (b, c) in prec and (a, b) not in prec and (b, a) not in prec:
            out.append(
                Violation("backward-linearity", (a, b, c), f"{a} and {b} both precede {c} but are incomparable")
            )

    def comparable(x, y):
        return x == y or (x, y) in prec or (y, x) in prec

    for i, h in enumerate(model.histories):
        members = set(h)
        if len(members) != len(h) or any(
            (h[k], h[k + 1]) not in prec for k in range(len(h) - 1)
        ) or not all(comparable(x, y) for x in h for y in h):
            out.append(Violation("non-chain-history", (i,), f"history {i} {list(h)} is not a precedence chain"))
        elif any(m not in members and all(comparable(m, x) for x in h) for m in ms):
            extra = next(m for m in ms if m not in members and all(comparable(m, x) for x in h))
            out.append(
                Violation("non-maximal-history", (i, extra), f"history {i} {list(h)} can be extended by {extra}")
            )
    computed = [tuple(h) for h in compute_histories(ms, prec)]
    expected, declared = set(computed), {tuple(h) for h in model.histories}
    if expected != declared or len(model.histories) != len(declared):
        out.append(
            Violation(
                "history-mismatch",
                (tuple(sorted(expected - declared)), tuple(sorted(declared - expected))),
                f"histories differ from the maximal chains: missing {sorted(expected - declared)}, "
                f"unexpected {sorted(declared - expected)}",
            )
        )
    elif list(model.histories) != computed:
        out.append(
            Violation("history-order", tuple(computed), "histories are not listed in canonical order")
        )

    for atom, pts in sorted(model.valuation.items()):
        for p in sorted(pts):
            if not model.is_point(p):
                out.append(Violation("bad-valuation-point", (atom, p), f"{atom} holds at ill-formed point {p.ref()}"))

    all_points = model.points()
    for base in all_points:
        if base not in model.similarity:
            out.append(Violation("missing-similarity", (base,), f"no similarity order for {base.ref()}"))
    for base, order in model.similarity.items():
        if not model.is_point(base):
            out.append(Violation("bad-similarity-point", (base,), f"similarity base {base.ref()} is not a point"))
            continue
        mentioned = {x for pair in order.closer for x in pair} | set(order.scope or ())
        for x in sorted(mentioned):
            if not model.is_point(x):
                out.append(
                    Violation("bad-similarity-point", (base, x), f"order at {base.ref()} mentions ill-formed {x.ref()}")
                )
        for x, y in sorted(order.closer):
            if x == y:
                out.append(
                    Violation("similarity-irreflexivity", (base, x), f"order at {base.ref()}: {x.ref()} closer than itself")
                )
        succ: dict[Point, set[Point]] = {}
        for x, y in order.closer:
            succ.setdefault(x, set()).add(y)
        for x, ys in sorted(succ.items()):
            for y in sorted(ys):
                for z in sorted(succ.get(y, ())):
                    if z not in ys:
                        out.append(
                            Violation(
                                "similarity-transitivity",
                                (base, x, y, z),
                                f"order at {base.ref()}: {x.ref()} < {y.ref()} < {z.ref()} but not {x.ref()} < {z.ref()}",
                            )
                        )

    if model.instants is not None:
        seen: dict[Moment, int] = {}
        for k, block in enumerate(model.instants):
            if not block:
                out.append(Violation("empty-instant", (k,), f"instant {k} is empty"))
            for m in sorted(block):
                if m not in mset:
                    out.append(Violation("unknown-moment", (m,), f"instant {k} names unknown moment {m}"))
                elif m in seen:
                    out.append(Violation("overlapping-instants", (m,), f"{m} lies in instants {seen[m]} and {k}"))
                else:
                    seen[m] = k
            for i, h in enumerate(model.histories):
                shared = sorted(block & set(h))
                if len(shared) > 1:
                    out.append(
                        Violation("instant-meets-history-twice", (k, i, tuple(shared)), f"instant {k} meets history {i} at {shared}")
                    )
        uncovered = [m for m in ms if m not in seen]
        if uncovered:
            out.append(Violation("uncovered-moment", tuple(uncovered), f"moments {uncovered} lie in no instant"))
    return out
