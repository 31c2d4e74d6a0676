"""Axiom schemas of the fused system and empirical soundness checks over finite models."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .formula import (
    AllFuture,
    AllPast,
    And,
    Atom,
    AxiomSchema,
    Bot,
    Counterfactual as Cf,
    Formula,
    HistNec,
    Iff,
    Implies,
    Not,
    Or,
    Top,
    atoms,
    expand,
)
from .generators import ModelParams, random_formula, random_model
from .model import BtModel, Point, Policy
from .parser import parse, render
from .semantics import Evaluator

COUNTERFACTUAL_SCHEMAS = {
    "CI": "A => A",
    "CC": "(A => B) & (A => C) -> (A => B & C)",
    "CW": "(A => B) -> (A => B | C)",
    "SA": "(A => B) & (B => C) -> (A & B => C)",
    "AD": "(A => C) & (B => C) -> (A | B => C)",
}
TEMPORAL_SCHEMAS = {
    "K_G": "G (A -> B) -> (G A -> G B)",
    "4_G": "G A -> G G A",
    "K_H": "H (A -> B) -> (H A -> H B)",
    "4_H": "H A -> H H A",
    "K_box": "[] (A -> B) -> ([] A -> [] B)",
    "T_box": "[] A -> A",
    "5_box": "<> A -> [] <> A",
    "L1": "A -> G P A",
    "L1'": "A -> H F A",
    "L2": "F A -> G (F A | A | P A)",
    "L2'": "P A -> H (P A | A | F A)",
    "L3": "[] H A <-> H [] A",
    "L4": "P [] A -> [] P A",
    "L5": "[] G A -> G [] A",
    "L6": "G false -> [] G false",
}
REGISTRY: dict[str, AxiomSchema] = {
    name: AxiomSchema(name, parse(text)) for name, text in {**COUNTERFACTUAL_SCHEMAS, **TEMPORAL_SCHEMAS}.items()
}
ALIASES = {"K_□": "K_box", "T_□": "T_box", "5_□": "5_box", "L1′": "L1'", "L2′": "L2'"}
RULES = ("MP", "RN_box", "RN_G", "RN_H", "REA", "REC", "IRR")
IRR_POINT_CAP = 12


def schema(name: str) -> AxiomSchema:
    return REGISTRY[ALIASES.get(name, name)]


class TooManyAtoms(ValueError):
    pass


class CapExceeded(ValueError):
    pass


# --- propositional tautologies ---------------------------------------------------


def _opaque_parts(f: Formula, out: dict[Formula, int]) -> None:
    if isinstance(f, (Not, Or)):
        for c in f.children():
            _opaque_parts(c, out)
    elif not isinstance(f, (Top, Bot)):
        out.setdefault(f, len(out))


def _truth(f: Formula, values: Mapping[Formula, bool]) -> bool:
    if isinstance(f, Not):
        return not _truth(f.body, values)
    if isinstance(f, Or):
        return _truth(f.left, values) or _truth(f.right, values)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    return values[f]


def check_tautology(f: Formula, max_atoms: int = 20) -> bool:
    """Truth-table check treating atoms and modal/counterfactual subformulas as opaque."""
    g = expand(f)
    parts: dict[Formula, int] = {}
    _opaque_parts(g, parts)
    if len(parts) > max_atoms:
        raise TooManyAtoms(f"{len(parts)} opaque subformulas exceed the cap of {max_atoms}")
    keys = list(parts)
    for row in itertools.product((False, True), repeat=len(keys)):
        if not _truth(g, dict(zip(keys, row))):
            return False
    return True


# --- reports ----------------------------------------------------------------------


@dataclass
class Failure:
    model_id: str
    policy: str
    point: Point
    substitution: dict[str, str]

    def to_dict(self):
        return {
            "model": self.model_id,
            "policy": self.policy,
            "point": self.point.ref(),
            "substitution": self.substitution,
        }


@dataclass
class SchemaResult:
    name: str
    tried: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class RuleResult:
    name: str
    tried: int = 0
    failures: list[dict] = field(default_factory=list)
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class SoundnessReport:
    schemas: dict[str, SchemaResult] = field(default_factory=dict)
    rules: dict[str, RuleResult] = field(default_factory=dict)
    models: int = 0

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.schemas.values()) and all(r.ok for r in self.rules.values())

    def merge_schema(self, result: SchemaResult) -> None:
        into = self.schemas.setdefault(result.name, SchemaResult(result.name))
        into.tried += result.tried
        into.failures.extend(result.failures)

    def merge_rules(self, results: Mapping[str, RuleResult]) -> None:
        for name, r in results.items():
            into = self.rules.setdefault(name, RuleResult(name))
            into.tried += r.tried
            into.skipped += r.skipped
            into.failures.extend(r.failures)

    def to_text(self) -> str:
        lines = []
        for r in self.schemas.values():
            lines.append(f"{r.name:8} tried={r.tried:<6} failed={len(r.failures)}")
        for r in self.rules.values():
            extra = f" skipped={r.skipped}" if r.skipped else ""
            lines.append(f"{r.name:8} tried={r.tried:<6} failed={len(r.failures)}{extra}")
        lines.append(f"models={self.models} verdict={'sound' if self.ok else 'FAILURES'}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "models": self.models,
            "irr_point_cap": IRR_POINT_CAP,
            "schemas": {
                n: {"tried": r.tried, "failed": len(r.failures), "failures": [f.to_dict() for f in r.failures]}
                for n, r in self.schemas.items()
            },
            "rules": {
                n: {"tried": r.tried, "failed": len(r.failures), "skipped": r.skipped, "failures": r.failures}
                for n, r in self.rules.items()
            },
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# --- schema checks ---------------------------------------------------------------


def check_schema(
    model: BtModel,
    sch: AxiomSchema,
    substitutions: Iterable[Mapping[str, Formula]],
    policy: Policy = Policy.UNRESTRICTED,
    *,
    model_id: str = "model",
    evaluator: Evaluator | None = None,
) -> SchemaResult:
    """Instantiate ``sch`` with each substitution and check it at every point."""
    ev = evaluator or Evaluator(model, policy)
    result = SchemaResult(sch.name)
    for subst in substitutions:
        f = sch.instantiate(subst)
        result.tried += 1
        verdict = ev.verdict(f)
        if not verdict:
            result.failures.append(
                Failure(
                    model_id,
                    policy.value,
                    verdict.witness,
                    {v: render(subst[v]) for v in sch.metavariables},
                )
            )
    return result


def random_substitutions(
    rng: random.Random, count: int, atom_names: Sequence[str] = ("p", "q", "r"), max_depth: int = 4
) -> list[dict[str, Formula]]:
    return [
        {v: random_formula(rng, rng.randint(0, max_depth), atom_names) for v in ("A", "B", "C")}
        for _ in range(count)
    ]


def applicable_policies(model: BtModel) -> list[Policy]:
    return [p for p in Policy if p is not Policy.COPRESENT or model.instants is not None]


# --- rule checks -----------------------------------------------------------------


def _equivalent_pairs(corpus: Sequence[Formula]) -> list[tuple[Formula, Formula]]:
    pairs = []
    for k, f in enumerate(corpus):
        g = corpus[(k + 1) % len(corpus)]
        pairs.append((f, Not(Not(f))))
        pairs.append((Or(f, g), Or(g, f)))
        pairs.append((And(f, g), And(g, f)))
        pairs.append((Not(And(f, g)), Or(Not(f), Not(g))))
    for f, g in itertools.combinations(corpus, 2):
        try:
            if f != g and check_tautology(Iff(f, g), max_atoms=8):
                pairs.append((f, g))
        except TooManyAtoms:
            pass
    return pairs


def _fresh_atom(f: Formula) -> str:
    used = atoms(f)
    k = 0
    while f"fresh{k}" in used:
        k += 1
    return f"fresh{k}"


def check_rules(
    model: BtModel,
    corpus: Sequence[Formula],
    policy: Policy = Policy.UNRESTRICTED,
    *,
    model_id: str = "model",
    rules: Iterable[str] = RULES,
    irr_cap: int = IRR_POINT_CAP,
    evaluator: Evaluator | None = None,
) -> dict[str, RuleResult]:
    """Validity preservation of each inference rule on this one model."""
    ev = evaluator or Evaluator(model, policy)
    rules = tuple(rules)
    out = {r: RuleResult(r) for r in rules}
    valid = {f: ev.verdict(f).all_points_true for f in corpus}

    def fail(rule: str, **info):
        out[rule].failures.append({"model": model_id, "policy": policy.value, **info})

    if "MP" in rules:
        for f, g in itertools.product(corpus, repeat=2):
            if valid[f] and ev.verdict(Implies(f, g)).all_points_true:
                out["MP"].tried += 1
                if not valid[g]:
                    fail("MP", premise=render(f), conclusion=render(g))
    for rule, op in (("RN_box", HistNec), ("RN_G", AllFuture), ("RN_H", AllPast)):
        if rule in rules:
            for f in corpus:
                if valid[f]:
                    out[rule].tried += 1
                    if not ev.verdict(op(f)).all_points_true:
                        fail(rule, premise=render(f))
    if "REA" in rules or "REC" in rules:
        chis = list(corpus[:2]) or [Atom("p")]
        for f, g in _equivalent_pairs(corpus):
            for chi in chis:
                if "REA" in rules:
                    out["REA"].tried += 1
                    v = ev.verdict(Iff(Cf(f, chi), Cf(g, chi)))
                    if not v:
                        fail("REA", left=render(f), right=render(g), chi=render(chi), point=v.witness.ref())
                if "REC" in rules:
                    out["REC"].tried += 1
                    v = ev.verdict(Iff(Cf(chi, f), Cf(chi, g)))
                    if not v:
                        fail("REC", left=render(f), right=render(g), chi=render(chi), point=v.witness.ref())
    if "IRR" in rules:
        n = len(ev.points)
        if n > irr_cap:
            out["IRR"].skipped += len(corpus)
        else:
            for f in corpus:
                out["IRR"].tried += 1
                if not _irr_premise_valid(ev, f):
                    continue
                if not valid[f]:
                    fail("IRR", conclusion=render(f))
    return out


def irr_premise(p: str, f: Formula) -> Formula:
    q = Atom(p)
    return Implies(And(q, AllPast(Not(q))), f)


def _irr_premise_valid(ev: Evaluator, f: Formula) -> bool:
    """Whether ``(p & H~p) -> f`` holds everywhere under every valuation of a fresh ``p``."""
    p = _fresh_atom(f)
    premise = irr_premise(p, f)
    for mask in range(1 << len(ev.points)):
        if not ev.rebind(p, mask, carry=(f,)).verdict(premise).all_points_true:
            return False
    return True


def check_irr(model: BtModel, f: Formula, policy: Policy = Policy.UNRESTRICTED, cap: int = IRR_POINT_CAP) -> bool:
    """IRR on one formula: exhaustive premise check, then the conclusion. Raises CapExceeded."""
    ev = Evaluator(model, policy)
    if len(ev.points) > cap:
        raise CapExceeded(f"{len(ev.points)} points exceed the IRR cap of {cap}")
    return not _irr_premise_valid(ev, f) or ev.verdict(f).all_points_true


# --- fuzzing ---------------------------------------------------------------------


def fuzz_params(rng: random.Random) -> ModelParams:
    return ModelParams(
        max_moments=rng.randint(1, 8),
        branching=rng.randint(1, 3),
        atoms=3,
        similarity_kind=rng.choice(("ranks", "pairs")),
        with_instants=rng.random() < 0.7,
    )


def rule_corpus(rng: random.Random, size: int = 8, atom_names=("p", "q", "r")) -> list[Formula]:
    """Random formulas plus a few schema instances, so that rule premises are sometimes valid."""
    corpus = [random_formula(rng, rng.randint(0, 3), atom_names) for _ in range(size)]
    a = Atom(atom_names[0])
    corpus += [Or(a, Not(a)), REGISTRY["CI"].instantiate({"A": a}), REGISTRY["T_box"].instantiate({"A": a})]
    return corpus


def fuzz(
    seed: int = 0,
    count: int = 100,
    *,
    schemas: Iterable[str] | None = None,
    policies: Iterable[Policy] | None = None,
    substitutions: int = 20,
    max_depth: int = 4,
    rules: Iterable[str] | None = RULES,
) -> SoundnessReport:
    """Check schemas (and rules) on ``count`` seeded random models under each applicable policy."""
    names = [ALIASES.get(s, s) for s in (schemas or REGISTRY)]
    rng = random.Random(seed)
    report = SoundnessReport()
    for k in range(count):
        model_seed = rng.getrandbits(32)
        model = random_model(model_seed, fuzz_params(rng))
        model_id = f"seed{seed}:model{k}:{model_seed}"
        substs = random_substitutions(rng, substitutions, max_depth=max_depth)
        # drawn even when rules are off so a seed names the same models either way
        corpus = rule_corpus(rng)
        report.models += 1
        pols = [p for p in applicable_policies(model) if policies is None or p in set(policies)]
        for policy in pols:
            ev = Evaluator(model, policy)
            for name in names:
                report.merge_schema(check_schema(model, REGISTRY[name], substs, policy, model_id=model_id, evaluator=ev))
            if rules:
                report.merge_rules(check_rules(model, corpus, policy, model_id=model_id, rules=rules, evaluator=ev))
    return report


def check_model(
    model: BtModel,
    *,
    seed: int = 0,
    schemas: Iterable[str] | None = None,
    policies: Iterable[Policy] | None = None,
    substitutions: int = 20,
    rules: Iterable[str] | None = RULES,
    model_id: str = "model",
) -> SoundnessReport:
    """Schema and rule checks on a single given model."""
    names = [ALIASES.get(s, s) for s in (schemas or REGISTRY)]
    rng = random.Random(seed)
    atom_names = tuple(model.atoms()[:3]) or ("p", "q", "r")
    substs = random_substitutions(rng, substitutions, atom_names)
    corpus = rule_corpus(rng, atom_names=atom_names) if rules else []
    report = SoundnessReport(models=1)
    pols = [p for p in applicable_policies(model) if policies is None or p in set(policies)]
    for policy in pols:
        ev = Evaluator(model, policy)
        for name in names:
            report.merge_schema(check_schema(model, REGISTRY[name], substs, policy, model_id=model_id, evaluator=ev))
        if rules:
            report.merge_rules(check_rules(model, corpus, policy, model_id=model_id, rules=rules, evaluator=ev))
    return report
