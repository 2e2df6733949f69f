"""
Recorded streamlining scripts over the translated six-valued calculus.

Each script starts from rules of TWO(SF) and applies the rule transformations of `rulealg` step by step, checking
every intermediate rule against the premises it is expected to have.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from logging import getLogger
from typing import Any

from sixlogic.core.config import RuleApplicationError, StreamliningError
from sixlogic.core.syntax import Sequent, parse_sequent

from .rulealg import (
    SchematicRule,
    combine_principle3,
    format_rule,
    reduce_propred,
    rule_to_json,
    shrink_principle4,
    simplify_principle2,
)
from .twocalc import default_translation, lookup_translated

log = getLogger(__name__)

PROPRED = "propred"
PRINCIPLE3 = "principle3"
PRINCIPLE4 = "principle4"


@dataclass(frozen=True)
class ReplayStep:
    step: str
    inputs: tuple[str, ...]
    principle: str
    output: SchematicRule

    def to_json(self) -> dict[str, Any]:
        return {
            "step": self.step,
            "inputs": list(self.inputs),
            "principle": self.principle,
            "output": rule_to_json(self.output),
        }

    def to_text(self) -> str:
        return f"({self.step}) {self.principle}[{', '.join(self.inputs)}] = {format_rule(self.output)}"


@dataclass
class ReplayResult:
    name: str
    results: tuple[SchematicRule, ...]
    trace: list[ReplayStep] = field(default_factory=list)

    @property
    def final(self) -> SchematicRule:
        return self.results[-1]

    def step(self, step: str) -> SchematicRule:
        for entry in self.trace:
            if entry.step == step:
                return entry.output
        raise KeyError(f"Replay {self.name} has no step {step}.")

    def to_json(self) -> dict[str, Any]:
        return {
            "replay": self.name,
            "results": [rule_to_json(r) for r in self.results],
            "trace": [entry.to_json() for entry in self.trace],
        }

    def to_text(self) -> str:
        lines = [entry.to_text() for entry in self.trace]
        lines += [f"result: {format_rule(r)}" for r in self.results]
        return "\n".join(lines)


def _premises(text: str) -> frozenset[Sequent]:
    return frozenset(parse_sequent(s, schematic=True) for s in text.split(";") if s.strip())


class ReplayScript:
    """
    Runs the steps of one recorded derivation, naming each intermediate rule after its step.

    Every step takes the expected premises as "S1; S2; ..." and fails with StreamliningError on a mismatch.
    """

    def __init__(self, name: str, rules: Sequence[SchematicRule] | None = None):
        self.name = name
        self.rules = default_translation() if rules is None else list(rules)
        self.trace: list[ReplayStep] = []

    def rule(self, symbol: str, inputs: Sequence[str], conclusion: str) -> SchematicRule:
        try:
            return lookup_translated(self.rules, symbol, inputs, conclusion)
        except KeyError as e:
            raise StreamliningError(f"{self.name}: {e.args[0]}") from None

    def _record(self, step: str, inputs: Sequence[SchematicRule], principle: str, output: SchematicRule, expected: str):
        output = output.renamed(f"({step})")
        if expected and output.premises != _premises(expected):
            raise StreamliningError(
                f"{self.name} step ({step}) produced {format_rule(output)}, expected premises {expected}"
            )
        entry = ReplayStep(step, tuple(r.name for r in inputs), principle, output)
        log.debug(f"{self.name}: {entry.to_text()}")
        self.trace.append(entry)
        return output

    def propred(self, step: str, r1: SchematicRule, r2: SchematicRule, expected: str = "") -> SchematicRule:
        reduced = reduce_propred(r1, r2)
        if reduced is None:
            raise StreamliningError(f"{self.name} step ({step}): {r1.name} and {r2.name} do not reduce")
        return self._record(step, (r1, r2), PROPRED, reduced, expected)

    def combine(self, step: str, r1: SchematicRule, r2: SchematicRule, expected: str = "") -> SchematicRule:
        try:
            combined = simplify_principle2(combine_principle3(r1, r2))
        except RuleApplicationError as e:
            raise StreamliningError(f"{self.name} step ({step}): {e}") from e
        return self._record(step, (r1, r2), PRINCIPLE3, combined, expected)

    def shrink(
        self, step: str, r: SchematicRule, premise: str, replacement: str, expected: str = "", strict: bool = False
    ) -> SchematicRule:
        shrunk = shrink_principle4(
            r, parse_sequent(premise, schematic=True), parse_sequent(replacement, schematic=True), strict=strict
        )
        if shrunk is None:
            raise StreamliningError(f"{self.name} step ({step}): {premise} cannot be shrunk to {replacement}")
        return self._record(step, (r,), PRINCIPLE4, shrunk, expected)

    def result(self, *rules: SchematicRule) -> ReplayResult:
        outcome = ReplayResult(self.name, tuple(rules), self.trace)
        log.info(f"{self.name}: " + "; ".join(format_rule(r) for r in rules))
        return outcome


def replay_table1(rules: Sequence[SchematicRule] | None = None) -> ReplayResult:
    """Derives {⇒B} / ⇒A∨B from the (∨_i,j) rules with designated output."""
    s = ReplayScript("table1", rules)
    goal = "=> A | B"

    def v(a: str, b: str) -> SchematicRule:
        return s.rule("|", (a, b), goal)

    r1 = s.propred("1", v("1", "2/3"), v("1", "1"), "~A =>; #~A =>; => A; => B; ~B =>")
    r2 = s.propred("2", v("2/3", "2/3"), v("2/3", "1"), "=> A; ~A =>; => #~A; => B; ~B =>")
    r3 = s.propred("3", r1, r2, "=> A; ~A =>; => B; ~B =>")
    s.propred("4", v("1", "n"), v("2/3", "n"), "=> A; ~A =>; B =>; ~B =>")
    r5 = s.propred("5", v("1", "b"), v("2/3", "b"), "=> A; ~A =>; => B; => ~B")
    r6 = s.propred("6", r3, r5, "=> A; ~A =>; => B")
    r7 = s.propred("7", v("n", "1"), v("n", "2/3"), "A =>; ~A =>; => B; ~B =>")
    r8 = s.propred("8", r7, v("n", "b"), "A =>; ~A =>; => B")
    r9 = s.propred("9", r6, r8, "~A =>; => B")
    r10 = s.propred("10", v("b", "1"), v("b", "2/3"), "=> A; => ~A; => B; ~B =>")
    r11 = s.propred("11", r10, v("b", "b"), "=> A; => ~A; => B")
    r12 = s.propred("12", v("0", "1"), v("0", "2/3"), "A =>; #A =>; => ~A; ~B =>; => B")
    r13 = s.propred("13", v("1/3", "1"), v("1/3", "2/3"), "A =>; => ~A; => #A; ~B =>; => B")
    r14 = s.propred("14", r12, r13, "A =>; => ~A; => B; ~B =>")
    r15 = s.propred("15", v("0", "b"), v("1/3", "b"), "A =>; => ~A; => B; => ~B")
    r16 = s.propred("16", r14, r15, "A =>; => ~A; => B")
    r17 = s.propred("17", r11, r16, "=> ~A; => B")
    r18 = s.propred("18", r9, r17, "=> B")
    return s.result(r18)


def replay_double_negation(rules: Sequence[SchematicRule] | None = None) -> ReplayResult:
    """Derives {A⇒} / ¬¬A⇒ and {⇒A} / ⇒¬¬A."""
    s = ReplayScript("double-negation", rules)
    left = s.propred("L1", s.rule("~", ("0",), "~~A =>"), s.rule("~", ("1/3",), "~~A =>"), "A =>; => ~A")
    left = s.propred("L2", left, s.rule("~", ("n",), "~~A =>"), "A =>")
    right = s.propred("R1", s.rule("~", ("2/3",), "=> ~~A"), s.rule("~", ("1",), "=> ~~A"), "~A =>; => A")
    right = s.propred("R2", right, s.rule("~", ("b",), "=> ~~A"), "=> A")
    return s.result(left, right)


def replay_nabla_right(rules: Sequence[SchematicRule] | None = None) -> ReplayResult:
    """Derives the (⇒∇) rule {¬A⇒A} / ⇒∇A."""
    s = ReplayScript("nabla-right", rules)
    goal = "=> #A"
    r1 = s.propred("1", s.rule("#", ("2/3",), goal), s.rule("#", ("1",), goal), "~A =>; => A")
    r2 = s.propred("2", r1, s.rule("#", ("b",), goal), "=> A")
    r3 = s.propred("3", r1, s.rule("#", ("n",), goal), "~A =>")
    r4 = s.combine("4", r2, r3, "~A => A")
    return s.result(r4)


def replay_nabla_neg_nabla(rules: Sequence[SchematicRule] | None = None) -> ReplayResult:
    """Derives the (∇¬∇⇒) rule {¬A⇒A,∇A} / ∇¬∇A⇒ and shrinks its premise to ⇒∇A."""
    s = ReplayScript("nabla-neg-nabla", rules)
    goal = "#~#A =>"
    r1 = s.propred("1", s.rule("#", ("1",), goal), s.rule("#", ("2/3",), goal), "~A =>; => A")
    r2 = s.propred("2", r1, s.rule("#", ("n",), goal), "~A =>")
    r3 = s.propred("3", r1, s.rule("#", ("b",), goal), "=> A")
    r4 = s.combine("4", r2, r3, "~A => A")
    r5 = s.combine("5", r4, s.rule("#", ("1/3",), goal), "~A => A, #A")
    r6 = s.shrink("6", r5, "~A => A, #A", "=> #A", "=> #A")
    return s.result(r5, r6)


def replay_or_left(rules: Sequence[SchematicRule] | None = None) -> ReplayResult:
    """Derives the (∨⇒) rule {A⇒, B⇒} / A∨B⇒ from the (∨_i,j) rules with undesignated output."""
    s = ReplayScript("or-left", rules)
    goal = "A | B =>"

    def v(a: str, b: str) -> SchematicRule:
        return s.rule("|", (a, b), goal)

    r1 = s.propred("1", v("0", "0"), v("0", "1/3"), "A =>; #A =>; => ~A; B =>; => ~B")
    first = s.propred("I", r1, v("0", "n"), "A =>; #A =>; => ~A; B =>")
    r2 = s.propred("2", v("1/3", "0"), v("1/3", "1/3"), "A =>; => ~A; => #A; B =>; => ~B")
    r3 = s.propred("3", r2, v("1/3", "n"), "A =>; => ~A; => #A; B =>")
    second = s.propred("II", first, r3, "A =>; => ~A; B =>")
    r4 = s.propred("4", v("n", "0"), v("n", "1/3"), "A =>; ~A =>; B =>; => ~B")
    r5 = s.propred("5", r4, v("n", "n"), "A =>; ~A =>; B =>")
    r6 = s.propred("6", second, r5, "A =>; B =>")
    return s.result(r6)


REPLAYS: dict[str, Callable[..., ReplayResult]] = {
    "table1": replay_table1,
    "double-negation": replay_double_negation,
    "nabla-right": replay_nabla_right,
    "nabla-neg-nabla": replay_nabla_neg_nabla,
    "or-left": replay_or_left,
}
