"""Abstract syntax for the counterfactual branching-time language.

Seven node types are primitive: atoms, negation, disjunction, the
counterfactual conditional, ``G`` (always in the future), ``H`` (always in
the past) and historical necessity. The remaining connectives are kept as
their own node types so that formulas print the way they were written;
:func:`expand` rewrites them into primitives before evaluation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping

ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")
METAVARIABLES = ("A", "B", "C")


class Formula:
    """Base class of every formula node. Nodes are immutable and hashable."""

    __slots__ = ()

    def _key(self) -> tuple:
        return ()

    def __eq__(self, other):
        if self is other:
            return True
        if other.__class__ is not self.__class__:
            return NotImplemented if not isinstance(other, Formula) else False
        return self._hash == other._hash and self._key() == other._key()

    def __hash__(self):
        return self._hash

    def _seal(self) -> None:
        object.__setattr__(self, "_hash", hash((self.__class__.__name__, self._key())))

    def children(self) -> tuple[Formula, ...]:
        return ()

    def rebuild(self, children: tuple[Formula, ...]) -> Formula:
        return self

    # operator sugar for building formulas in Python code
    def __invert__(self) -> Formula:
        return Not(self)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def __str__(self) -> str:
        from .parser import render

        return render(self)


@dataclass(frozen=True, slots=True, repr=False, eq=False)
class Atom(Formula):
    name: str
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.name in ("true", "false") or not (ATOM_RE.match(self.name) or self.name in METAVARIABLES):
            raise ValueError(f"invalid atom name {self.name!r}")
        self._seal()

    def _key(self):
        return (self.name,)

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, slots=True, repr=False, eq=False)
class Top(Formula):
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self._seal()

    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, slots=True, repr=False, eq=False)
class Bot(Formula):
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self._seal()

    def __repr__(self):
        return "Bot()"


@dataclass(frozen=True, slots=True, eq=False)
class _Unary(Formula):
    body: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self._seal()

    def _key(self):
        return (self.body,)

    def children(self):
        return (self.body,)

    def rebuild(self, children):
        return type(self)(*children)


@dataclass(frozen=True, slots=True, eq=False)
class _Binary(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self._seal()

    def _key(self):
        return (self.left, self.right)

    def children(self):
        return (self.left, self.right)

    def rebuild(self, children):
        return type(self)(*children)


class Not(_Unary):
    __slots__ = ()


class AllFuture(_Unary):
    """``G``: at every later moment of the current history."""

    __slots__ = ()


class AllPast(_Unary):
    """``H``: at every earlier moment of the current history."""

    __slots__ = ()


class HistNec(_Unary):
    """Historical necessity: at the current moment on every history through it."""

    __slots__ = ()


class SomeFuture(_Unary):
    __slots__ = ()


class SomePast(_Unary):
    __slots__ = ()


class HistPoss(_Unary):
    __slots__ = ()


class Or(_Binary):
    __slots__ = ()


class And(_Binary):
    __slots__ = ()


class Implies(_Binary):
    __slots__ = ()


class Iff(_Binary):
    __slots__ = ()


class Counterfactual(_Binary):
    """``left => right``: the closest ``left``-points all satisfy ``right``."""

    __slots__ = ()

    @property
    def antecedent(self) -> Formula:
        return self.left

    @property
    def consequent(self) -> Formula:
        return self.right


PRIMITIVE_TYPES = (Atom, Not, Or, Counterfactual, AllFuture, AllPast, HistNec)


def expand(f: Formula) -> Formula:
    """Rewrite derived connectives into the seven primitives.

    ``Top`` and ``Bot`` have no atom-free primitive spelling and are left in
    place as constants.
    """
    if isinstance(f, (Atom, Top, Bot)):
        return f
    kids = tuple(expand(c) for c in f.children())
    if isinstance(f, And):
        return Not(Or(Not(kids[0]), Not(kids[1])))
    if isinstance(f, Implies):
        return Or(Not(kids[0]), kids[1])
    if isinstance(f, Iff):
        a, b = kids
        return Not(Or(Not(Or(Not(a), b)), Not(Or(Not(b), a))))
    if isinstance(f, SomeFuture):
        return Not(AllFuture(Not(kids[0])))
    if isinstance(f, SomePast):
        return Not(AllPast(Not(kids[0])))
    if isinstance(f, HistPoss):
        return Not(HistNec(Not(kids[0])))
    return f.rebuild(kids)


def walk(f: Formula) -> Iterator[Formula]:
    """Post-order traversal, duplicates included."""
    for c in f.children():
        yield from walk(c)
    yield f


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subtrees of ``f`` in post-order; ``f`` itself comes last."""
    return list(dict.fromkeys(walk(f)))


def atoms(f: Formula) -> set[str]:
    return {g.name for g in walk(f) if isinstance(g, Atom)}


def depth(f: Formula) -> int:
    kids = f.children()
    return 0 if not kids else 1 + max(depth(c) for c in kids)


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


def substitute(f: Formula, subst: Mapping[str, Formula]) -> Formula:
    """Simultaneously replace atoms by formulas."""
    if isinstance(f, Atom):
        return subst.get(f.name, f)
    kids = f.children()
    if not kids:
        return f
    return f.rebuild(tuple(substitute(c, subst) for c in kids))


class MissingSubstitution(KeyError):
    pass


@dataclass(frozen=True)
class AxiomSchema:
    """A named formula template whose atoms ``A``, ``B``, ``C`` are metavariables."""

    name: str
    template: Formula

    @property
    def metavariables(self) -> tuple[str, ...]:
        present = atoms(self.template)
        return tuple(v for v in METAVARIABLES if v in present)

    @property
    def arity(self) -> int:
        return len(self.metavariables)

    def instantiate(self, subst: Mapping[str, Formula]) -> Formula:
        return instantiate(self, subst)


def instantiate(schema: AxiomSchema, subst: Mapping[str, Formula]) -> Formula:
    missing = [v for v in schema.metavariables if v not in subst]
    if missing:
        raise MissingSubstitution(f"{schema.name}: no image for {', '.join(missing)}")
    return substitute(schema.template, {v: subst[v] for v in schema.metavariables})
