"""Satisfaction at a point, model validity and the strengthening counterexample search."""

from __future__ import annotations

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
    Not,
    Or,
    SomeFuture,
    SomePast,
    Top,
    expand,
)
from .model import BtModel, Point, Policy, candidates, closest


class Evaluator:
    """Bottom-up evaluator over one model and policy.

    Truth sets are bitmasks over ``model.points()``. Results are memoized per
    primitive subformula, so one evaluator can serve many formulas.
    """

    def __init__(self, model: BtModel, policy: Policy = Policy.UNRESTRICTED):
        self.model = model
        self.policy = policy
        self.points = model.points()
        self.index = {p: k for k, p in enumerate(self.points)}
        n = len(self.points)
        self.full = (1 << n) - 1
        idx = self.index
        self._future = [0] * n
        self._past = [0] * n
        self._box = [0] * n
        for k, p in enumerate(self.points):
            h = model.histories[p.history]
            for m in h:
                if model.precedes(p.moment, m):
                    self._future[k] |= 1 << idx[Point(m, p.history)]
                if model.precedes(m, p.moment):
                    self._past[k] |= 1 << idx[Point(m, p.history)]
            for j in model.histories_through(p.moment):
                self._box[k] |= 1 << idx[Point(p.moment, j)]
        self._cands: list[int] | None = None
        self._better: list[dict[int, int]] | None = None
        self._cache: dict[Formula, int] = {}

    def _prepare_similarity(self):
        idx = self.index
        self._cands = []
        self._better = []
        for p in self.points:
            mask = 0
            for c in candidates(self.model, p, self.policy):
                if c in idx:
                    mask |= 1 << idx[c]
            better: dict[int, int] = {}
            for x, y in self.model.similarity_of(p).closer:
                if x in idx and y in idx:
                    better[idx[y]] = better.get(idx[y], 0) | (1 << idx[x])
            self._cands.append(mask)
            self._better.append(better)

    def rebind(self, atom: str, true_at: int, carry: tuple[Formula, ...] = ()) -> Evaluator:
        """A copy whose valuation of ``atom`` is the bitmask ``true_at``.

        Frame tables are shared. Cached truth sets of ``carry`` formulas (which
        must not mention ``atom``) are kept.
        """
        clone = object.__new__(Evaluator)
        clone.__dict__.update(self.__dict__)
        clone._cache = {}
        for f in carry:
            g = expand(f)
            clone._cache[g] = self._mask(g)
        clone._cache[Atom(atom)] = true_at
        return clone

    def _mask(self, f: Formula) -> int:
        cached = self._cache.get(f)
        if cached is not None:
            return cached
        if isinstance(f, Atom):
            r = 0
            for p in self.model.valuation.get(f.name, ()):
                k = self.index.get(p)
                if k is not None:
                    r |= 1 << k
        elif isinstance(f, Top):
            r = self.full
        elif isinstance(f, Bot):
            r = 0
        elif isinstance(f, Not):
            r = self.full & ~self._mask(f.body)
        elif isinstance(f, Or):
            r = self._mask(f.left) | self._mask(f.right)
        elif isinstance(f, AllFuture):
            t = self._mask(f.body)
            r = sum(1 << k for k, fut in enumerate(self._future) if fut & ~t == 0)
        elif isinstance(f, AllPast):
            t = self._mask(f.body)
            r = sum(1 << k for k, past in enumerate(self._past) if past & ~t == 0)
        elif isinstance(f, HistNec):
            t = self._mask(f.body)
            r = sum(1 << k for k, cls in enumerate(self._box) if cls & ~t == 0)
        elif isinstance(f, Counterfactual):
            r = self._counterfactual(self._mask(f.left), self._mask(f.right))
        else:
            raise TypeError(f"not a primitive formula: {f!r}")
        self._cache[f] = r
        return r

    def _counterfactual(self, ante: int, cons: int) -> int:
        if self._cands is None:
            self._prepare_similarity()
        r = 0
        for k in range(len(self.points)):
            pool = self._cands[k] & ante
            better = self._better[k]
            ok = True
            rest = pool
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                if better.get(v, 0) & pool == 0 and not (cons >> v) & 1:
                    ok = False
                    break
            if ok:
                r |= 1 << k
        return r

    def mask(self, f: Formula) -> int:
        return self._mask(expand(f))

    def truth_set(self, f: Formula) -> set[Point]:
        m = self.mask(f)
        return {p for k, p in enumerate(self.points) if (m >> k) & 1}

    def holds(self, point: Point, f: Formula) -> bool:
        return bool((self.mask(f) >> self.index[point]) & 1)

    def verdict(self, f: Formula) -> Verdict:
        m = self.mask(f)
        if m == self.full:
            return Verdict(None)
        miss = self.full & ~m
        return Verdict(self.points[(miss & -miss).bit_length() - 1])


@dataclass(frozen=True)
class Verdict:
    """``witness`` is ``None`` when every point satisfies the formula."""

    witness: Point | None

    @property
    def all_points_true(self) -> bool:
        return self.witness is None

    def __bool__(self):
        return self.witness is None

    def __str__(self):
        return "AllPointsTrue" if self.witness is None else f"Falsified({self.witness.ref()})"


def evaluate(model: BtModel, i: Point, f: Formula, policy: Policy = Policy.UNRESTRICTED) -> bool:
    """Whether ``f`` holds at point ``i``."""
    return Evaluator(model, policy).holds(i, f)


def valid_in_model(model: BtModel, f: Formula, policy: Policy = Policy.UNRESTRICTED) -> Verdict:
    return Evaluator(model, policy).verdict(f)


def explain(model: BtModel, i: Point, f: Formula, policy: Policy = Policy.UNRESTRICTED) -> list[str]:
    """Indented recursion trace; every counterfactual node lists its candidate and closest sets."""
    ev = Evaluator(model, policy)
    lines: list[str] = []

    def refs(ps):
        return "{" + ", ".join(p.ref() for p in sorted(ps)) + "}"

    def go(point: Point, g: Formula, indent: int):
        pad = "  " * indent
        value = ev.holds(point, g)
        lines.append(f"{pad}{point.ref()} |= {g}: {str(value).lower()}")
        if isinstance(g, Counterfactual):
            cands = candidates(model, point, policy)
            ante = {c for c in cands if ev.holds(c, g.antecedent)}
            best = closest(model, point, ante)
            lines.append(f"{pad}  candidates: {refs(cands)}")
            lines.append(f"{pad}  antecedent holds at: {refs(ante)}")
            lines.append(f"{pad}  closest: {refs(best)}")
            for v in sorted(best):
                go(v, g.consequent, indent + 2)
        else:
            scope = _scope_of(ev, point, g)
            for c in g.children():
                for q in scope:
                    go(q, c, indent + 1)

    go(i, f, 0)
    return lines


def _scope_of(ev: Evaluator, point: Point, g: Formula) -> list[Point]:
    k = ev.index[point]
    if isinstance(g, (AllFuture, SomeFuture)):
        mask = ev._future[k]
    elif isinstance(g, (AllPast, SomePast)):
        mask = ev._past[k]
    elif isinstance(g, (HistNec, HistPoss)):
        mask = ev._box[k]
    else:
        return [point]
    return [p for j, p in enumerate(ev.points) if (mask >> j) & 1]


class SearchExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class StrengtheningWitness:
    model: BtModel
    formulas: tuple[Formula, Formula]
    point: Point
    policy: Policy
    seed: int
    tries: int


def find_strengthening_counterexample(
    seed: int = 0,
    *,
    max_tries: int = 500,
    policy: Policy = Policy.UNRESTRICTED,
) -> StrengtheningWitness:
    """Search seeded random models for a point where ``p => r`` holds but ``p & q => r`` fails."""
    import random

    from .generators import ModelParams, random_model

    p, q, r = Atom("p"), Atom("q"), Atom("r")
    weak = Counterfactual(p, r)
    strong = Counterfactual(And(p, q), r)
    rng = random.Random(seed)
    params = ModelParams(max_moments=4, branching=2, atoms=3, with_instants=policy is Policy.COPRESENT)
    for attempt in range(1, max_tries + 1):
        model = random_model(rng.getrandbits(32), params)
        if len(model.points()) < 2:
            continue
        ev = Evaluator(model, policy)
        hits = ev.mask(weak) & ~ev.mask(strong)
        if hits:
            point = ev.points[(hits & -hits).bit_length() - 1]
            return StrengtheningWitness(model, (weak, strong), point, policy, seed, attempt)
    raise SearchExhausted(f"no counterexample in {max_tries} models for seed {seed}")
