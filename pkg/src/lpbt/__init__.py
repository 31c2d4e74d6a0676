"""Counterfactual conditionals over finite Ockhamist branching-time models."""

from .formula import (
    AllFuture,
    AllPast,
    And,
    Atom,
    AxiomSchema,
    Bot,
    Counterfactual,
    Formula,
    HistNec,
    HistPoss,
    Iff,
    Implies,
    MissingSubstitution,
    Not,
    Or,
    SomeFuture,
    SomePast,
    Top,
    expand,
    instantiate,
    subformulas,
)
from .model import (
    BtModel,
    Point,
    Policy,
    PolicyUnsupported,
    SimilarityOrder,
    Violation,
    candidates,
    closest,
    compute_histories,
    points,
    r_box_class,
    validate,
)
from .parser import ParseError, parse, render
from .semantics import (
    Evaluator,
    SearchExhausted,
    Verdict,
    evaluate,
    explain,
    find_strengthening_counterexample,
    valid_in_model,
)

__version__ = "0.1.0"
