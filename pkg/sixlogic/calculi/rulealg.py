from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from logging import getLogger
from typing import Any

import numpy as np

from sixlogic.core.algebra import FiniteMatrix, assignment_grid, evaluate_indices, m6
from sixlogic.core.config import DEFAULT_MAX_METAVARIABLES, RuleApplicationError
from sixlogic.core.syntax import Sequent, parse_sequent, sort_sequents

log = getLogger(__name__)


@dataclass(frozen=True)
class SchematicRule:
    """
    A context-free rule over schema variables: premises / conclusion, each a local sequent.

    Contexts are implicit: an application adds the same Γ ⇒ Δ to every premise and to the conclusion.
    Rules compare equal when their premise sets and conclusions do; names are labels only.
    """

    premises: frozenset[Sequent]
    conclusion: Sequent
    name: str = field(default="", compare=False)
    source: str = field(default="", compare=False)

    @classmethod
    def of(cls, premises: Iterable[Sequent], conclusion: Sequent, name: str = "", source: str = "") -> "SchematicRule":
        return cls(frozenset(premises), conclusion, name, source)

    def sorted_premises(self) -> list[Sequent]:
        return sort_sequents(self.premises)

    def metavariables(self) -> list[str]:
        names = self.conclusion.metavariables().union(*(p.metavariables() for p in self.premises))
        return sorted(names)

    def renamed(self, name: str) -> "SchematicRule":
        return SchematicRule(self.premises, self.conclusion, name, self.source)

    def __str__(self) -> str:
        return format_rule(self)


def format_rule(r: SchematicRule, unicode: bool = True) -> str:
    premises = " ; ".join(p.to_text(unicode) for p in r.sorted_premises())
    label = f"{r.name}: " if r.name else ""
    return f"{label}{{{premises}}} / {r.conclusion.to_text(unicode)}"


# Semantic oracles


def _satisfaction(s: Sequent, columns: dict[str, np.ndarray], m: FiniteMatrix, rows: int) -> np.ndarray:
    designated = m.designated_mask
    satisfied = np.zeros(rows, dtype=bool)
    for f in s.left:
        satisfied |= ~designated[evaluate_indices(f, columns, m)]
    for f in s.right:
        satisfied |= designated[evaluate_indices(f, columns, m)]
    return satisfied


def _premise_and_conclusion_tables(
    r: SchematicRule, m: FiniteMatrix, max_metavariables: int
) -> tuple[list[np.ndarray], np.ndarray]:
    names = r.metavariables()
    if len(names) > max_metavariables:
        raise ValueError(f"{r.name or 'rule'} uses {len(names)} schema variables, the limit is {max_metavariables}.")
    columns = assignment_grid(names, m, max_metavariables)
    rows = m.size ** len(names)
    premises = [_satisfaction(p, columns, m, rows) for p in r.sorted_premises()]
    return premises, _satisfaction(r.conclusion, columns, m, rows)


def rule_locally_sound(
    r: SchematicRule, m: FiniteMatrix | None = None, max_metavariables: int = DEFAULT_MAX_METAVARIABLES
) -> bool:
    """
    True iff every assignment of values to the schema variables that satisfies all premises satisfies the conclusion.

    This per-assignment condition makes the rule sound under any context.
    """
    m = m6() if m is None else m
    premises, conclusion = _premise_and_conclusion_tables(r, m, max_metavariables)
    all_premises = np.logical_and.reduce(premises) if premises else np.ones_like(conclusion)
    return bool((~all_premises | conclusion).all())


def rule_admissible_schematic(
    r: SchematicRule, m: FiniteMatrix | None = None, max_metavariables: int = DEFAULT_MAX_METAVARIABLES
) -> bool:
    """
    True iff validity of every premise at value level implies validity of the conclusion at value level.

    A premise is valid at value level when every assignment of values to the schema variables satisfies it.
    Premises that are never all valid make the rule vacuously admissible.
    """
    m = m6() if m is None else m
    premises, conclusion = _premise_and_conclusion_tables(r, m, max_metavariables)
    if not all(p.all() for p in premises):
        log.debug(f"{r.name or 'rule'} admissible vacuously: some premise is not valid at value level")
        return True
    accepted = bool(conclusion.all())
    if accepted:
        log.info(f"{r.name or 'rule'} accepted at value level; exact only when instances realize every value")
    return accepted


def reverse_rule(r: SchematicRule, premise: int | Sequent) -> SchematicRule:
    """The one-premise rule conclusion / premise; it is locally sound iff that premise is invertible."""
    chosen = _select_premise(r, premise)
    return SchematicRule.of([r.conclusion], chosen, f"{r.name}^-1")


# Streamlining transformations


def is_superfluous(r: SchematicRule) -> bool:
    """True iff the conclusion is also a premise."""
    return r.conclusion in r.premises


def superfluous_rules(rules: Sequence[SchematicRule]) -> list[SchematicRule]:
    return [r for r in rules if is_superfluous(r)]


def drop_superfluous(rules: Sequence[SchematicRule]) -> list[SchematicRule]:
    return [r for r in rules if not is_superfluous(r)]


def combine_principle3(r1: SchematicRule, r2: SchematicRule, name: str = "") -> SchematicRule:
    """
    Replaces two rules with the same conclusion by the rule whose premises are all pairwise unions.

    Raises:
        RuleApplicationError: If the conclusions differ.
    """
    if r1.conclusion != r2.conclusion:
        raise RuleApplicationError("conclusion-mismatch", f"{r1.conclusion} differs from {r2.conclusion}")
    premises = {p.union(q) for p in r1.premises for q in r2.premises}
    return SchematicRule.of(premises, r1.conclusion, name or f"P3({r1.name},{r2.name})")


def simplify_principle2(r: SchematicRule, name: str = "") -> SchematicRule:
    """
    Drops premises subsumed by an axiom (a formula on both sides) and premises that weaken another premise.
    """
    kept = [p for p in r.premises if not p.is_axiomatic()]
    minimal = [p for p in kept if not any(q != p and p.is_weakening_of(q) for q in kept)]
    return SchematicRule.of(minimal, r.conclusion, name or r.name, r.source)


def reduce_propred(r1: SchematicRule, r2: SchematicRule, name: str = "") -> SchematicRule | None:
    """
    From premises S ∪ {⇒ φ} and S ∪ {φ ⇒} with the same conclusion, derives the rule S / conclusion.

    Both orientations of the pair are tried; the first φ in canonical order wins.
    """
    if r1.conclusion != r2.conclusion:
        return None
    for first, second in ((r1, r2), (r2, r1)):
        for q in first.sorted_premises():
            if q.left or len(q.right) != 1:
                continue
            (phi,) = q.right
            mirror = Sequent.of([phi], [])
            rest = first.premises - {q}
            if mirror in second.premises and second.premises - {mirror} == rest:
                log.debug(f"propred on {phi} merges {first.name} and {second.name}")
                return SchematicRule(rest, r1.conclusion, name or f"propred({r1.name},{r2.name})")
    return None


def _select_premise(r: SchematicRule, premise: int | Sequent) -> Sequent:
    if isinstance(premise, Sequent):
        if premise not in r.premises:
            raise ValueError(f"{premise} is not a premise of {r.name or 'the rule'}.")
        return premise
    premises = r.sorted_premises()
    if not 0 <= premise < len(premises):
        raise ValueError(f"Premise index {premise} out of range for {len(premises)} premises.")
    return premises[premise]


def shrink_principle4(
    r: SchematicRule,
    premise: int | Sequent,
    replacement: Sequent,
    m: FiniteMatrix | None = None,
    strict: bool = False,
) -> SchematicRule | None:
    """
    Replaces one premise by a sub-sequent of it when the sub-sequent follows from the original premise.

    Args:
        r: The rule to shrink.
        premise: The premise, either itself or by index in canonical order.
        replacement: The smaller premise; both sides must be subsets of the original premise's sides.
        m: The matrix the semantic check runs against.
        strict: Check "premise / replacement" with rule_locally_sound instead of rule_admissible_schematic.

    Returns:
        The shrunken rule, or None when the check rejects the replacement.
    """
    original = _select_premise(r, premise)
    if not original.is_weakening_of(replacement):
        raise ValueError(f"{replacement} is not contained in the premise {original}.")
    step = SchematicRule.of([original], replacement, f"{r.name}[{original} -> {replacement}]")
    accepted = rule_locally_sound(step, m) if strict else rule_admissible_schematic(step, m)
    if not accepted:
        log.debug(f"shrinking {original} to {replacement} rejected")
        return None
    return SchematicRule((r.premises - {original}) | {replacement}, r.conclusion, r.name, r.source)


# Structured import/export


def rule_to_json(r: SchematicRule) -> dict[str, Any]:
    return {
        "name": r.name,
        "source": r.source,
        "premises": [str(p) for p in r.sorted_premises()],
        "conclusion": str(r.conclusion),
    }


def rule_from_json(data: dict[str, Any]) -> SchematicRule:
    return SchematicRule.of(
        (parse_sequent(p, schematic=True) for p in data["premises"]),
        parse_sequent(data["conclusion"], schematic=True),
        data.get("name", ""),
        data.get("source", ""),
    )
