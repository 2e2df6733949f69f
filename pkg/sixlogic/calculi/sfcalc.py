import itertools
from collections.abc import Hashable, Sequence
from dataclasses import dataclass, field
from logging import getLogger
from typing import Any

import numpy as np

from sixlogic.core.algebra import FiniteMatrix, evaluate_indices, m6
from sixlogic.core.config import METAVARIABLES, RuleApplicationError
from sixlogic.core.report import CheckFailure
from sixlogic.core.syntax import ARITY, CONNECTIVES, Formula, Meta, NSequent, build, parse_formula

log = getLogger(__name__)

AXIOM = "axiom"
WEAKENING = "weakening"


@dataclass(frozen=True)
class SignedRule:
    """
    The rule  Ω, a₁:α₁ … Ω, a_k:α_k / Ω, f̂(a₁,…,a_k) : f(α₁,…,α_k)  of the n-sequent calculus of a matrix.

    Principal formulas are bound when the rule is applied, so one rule serves every instance.
    """

    connective: str
    inputs: tuple[Hashable, ...]
    output: Hashable

    @property
    def arity(self) -> int:
        return len(self.inputs)

    @property
    def name(self) -> str:
        symbol = CONNECTIVES[self.connective].unicode_symbol
        return f"({symbol}_{','.join(map(str, self.inputs))})"

    def __str__(self) -> str:
        return f"{self.name} -> {self.output}"


def generate_sf(m: FiniteMatrix) -> list[SignedRule]:
    """One rule per connective of `m` and per tuple of input values."""
    rules = []
    for symbol, table in m.tables.items():
        for idx in itertools.product(range(m.size), repeat=ARITY[symbol]):
            rules.append(SignedRule(symbol, tuple(m.values[i] for i in idx), m.values[int(table[idx])]))
    return rules


def apply_sf(rule: SignedRule, premises: Sequence[NSequent], principal: Sequence[Formula]) -> NSequent:
    """
    Applies a signed rule to premises Ω ∪ {aᵢ:αᵢ}.

    Raises:
        RuleApplicationError: If the arity is wrong, a premise lacks its signed formula, or the contexts differ.
    """
    if len(premises) != rule.arity or len(principal) != rule.arity:
        raise RuleApplicationError(
            "arity", f"{rule.name} takes {rule.arity} premises, received {len(premises)} and {len(principal)} formulas"
        )
    values = premises[0].values
    context = NSequent.empty(values)
    for premise, value, f in zip(premises, rule.inputs, principal, strict=True):
        if premise.values != values:
            raise RuleApplicationError("context-mismatch", "premises are indexed by different values")
        if not premise.contains(value, f):
            raise RuleApplicationError("signed-formula-missing", f"premise {premise} lacks {value}:{f}")
        context = context.union(premise.remove(value, f))
    for premise, value, f in zip(premises, rule.inputs, principal, strict=True):
        if premise != context.add((value, f)):
            raise RuleApplicationError("context-mismatch", f"premise {premise} does not share the context {context}")
    return context.add((rule.output, build(rule.connective, principal)))


def signed_rule_locally_sound(rule: SignedRule, m: FiniteMatrix) -> bool:
    """
    True iff every assignment of values to the principal formulas that gives each αᵢ the value aᵢ gives the
    conclusion formula the output value.
    """
    names = METAVARIABLES[: rule.arity]
    grid = np.indices((m.size,) * rule.arity, dtype=np.int8).reshape(rule.arity, -1)
    columns = dict(zip(names, grid, strict=True))
    premises_hold = np.ones(grid.shape[1], dtype=bool)
    for name, value in zip(names, rule.inputs, strict=True):
        premises_hold &= columns[name] == m.index(value)
    conclusion = evaluate_indices(build(rule.connective, [Meta(name) for name in names]), columns, m)
    return bool((~premises_hold | (conclusion == m.index(rule.output))).all())


# Derivations


@dataclass(frozen=True)
class SFDerivation:
    nsequent: NSequent
    rule: SignedRule | str
    principal: tuple[Formula, ...] = ()
    children: tuple["SFDerivation", ...] = field(default_factory=tuple)


def axiom_derivation(f: Formula, m: FiniteMatrix | None = None) -> SFDerivation:
    m = m6() if m is None else m
    return SFDerivation(NSequent.axiom(f, m.values), AXIOM)


def weaken_derivation(d: SFDerivation, *signed: tuple[Hashable, Formula]) -> SFDerivation:
    return SFDerivation(d.nsequent.add(*signed), WEAKENING, (), (d,))


def rule_derivation(rule: SignedRule, children: Sequence[SFDerivation], principal: Sequence[Formula]) -> SFDerivation:
    conclusion = apply_sf(rule, [child.nsequent for child in children], principal)
    return SFDerivation(conclusion, rule, tuple(principal), tuple(children))


def _is_axiom(ns: NSequent) -> bool:
    first = ns.cells[0]
    return len(first) == 1 and all(cell == first for cell in ns.cells)


def find_sf_failure(d: SFDerivation, m: FiniteMatrix | None = None) -> CheckFailure | None:
    """Returns the first node (depth first) that does not follow from its children, or None."""
    m = m6() if m is None else m
    rules = set(generate_sf(m))
    stack: list[tuple[SFDerivation, tuple[int, ...]]] = [(d, ())]
    while stack:
        node, path = stack.pop()
        ns = node.nsequent
        if tuple(ns.values) != tuple(m.values):
            return CheckFailure(path, "n-sequent is not indexed by the values of the matrix")
        if node.rule == AXIOM:
            if node.children or not _is_axiom(ns):
                return CheckFailure(path, "axiom node is not 𝒯:α", "no children and one formula in every cell")
        elif node.rule == WEAKENING:
            if len(node.children) != 1:
                return CheckFailure(path, f"weakening has {len(node.children)} children", "1")
            if not ns.is_weakening_of(node.children[0].nsequent):
                return CheckFailure(path, "weakening removes formulas from a cell", "cells may only grow")
        elif isinstance(node.rule, SignedRule):
            if node.rule not in rules:
                return CheckFailure(path, f"{node.rule} is not a rule of matrix {m.name or '?'}")
            try:
                conclusion = apply_sf(node.rule, [c.nsequent for c in node.children], node.principal)
            except RuleApplicationError as e:
                return CheckFailure(path, str(e))
            if conclusion != ns:
                return CheckFailure(path, f"{node.rule.name} yields {conclusion}, node has {ns}")
        else:
            return CheckFailure(path, f"unknown rule label {node.rule!r}")
        stack.extend((child, path + (i,)) for i, child in reversed(list(enumerate(node.children))))
    return None


def check_sf(d: SFDerivation, m: FiniteMatrix | None = None) -> bool:
    failure = find_sf_failure(d, m)
    if failure is not None:
        log.info(f"SF derivation rejected at {failure}")
    return failure is None


# JSON export


def rule_to_json(rule: SignedRule) -> dict[str, Any]:
    return {"connective": rule.connective, "inputs": [str(v) for v in rule.inputs], "output": str(rule.output)}


def rule_from_json(data: dict[str, Any], m: FiniteMatrix) -> SignedRule:
    symbols = {str(value): value for value in m.values}
    return SignedRule(data["connective"], tuple(symbols[v] for v in data["inputs"]), symbols[data["output"]])


def rules_to_json(rules: Sequence[SignedRule]) -> list[dict[str, Any]]:
    return [rule_to_json(rule) for rule in rules]


def rules_from_json(data: list[dict[str, Any]], m: FiniteMatrix) -> list[SignedRule]:
    return [rule_from_json(item, m) for item in data]


def derivation_to_json(d: SFDerivation) -> dict[str, Any]:
    return {
        "nsequent": [[str(value), str(f)] for value, f in d.nsequent.signed()],
        "rule": d.rule if isinstance(d.rule, str) else rule_to_json(d.rule),
        "principal": [str(f) for f in d.principal],
        "children": [derivation_to_json(child) for child in d.children],
    }


def derivation_from_json(data: dict[str, Any], m: FiniteMatrix | None = None) -> SFDerivation:
    m = m6() if m is None else m
    symbols = {str(value): value for value in m.values}
    ns = NSequent.from_signed(((symbols[v], parse_formula(f)) for v, f in data["nsequent"]), m.values)
    rule = data["rule"] if isinstance(data["rule"], str) else rule_from_json(data["rule"], m)
    return SFDerivation(
        ns,
        rule,
        tuple(parse_formula(f) for f in data.get("principal", [])),
        tuple(derivation_from_json(child, m) for child in data.get("children", [])),
    )
