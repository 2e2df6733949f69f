from collections import Counter
from dataclasses import dataclass
from enum import StrEnum
from functools import cache
from logging import getLogger

from sixlogic.calculi.rulealg import SchematicRule, reverse_rule, rule_locally_sound
from sixlogic.core.syntax import Binding, Formula, Meta, Nabla, Neg, Sequent, Var, instantiate, match, parse_formula

log = getLogger(__name__)


class RuleTag(StrEnum):
    AXIOM = "axiom"
    WEAKEN_LEFT = "(w⇒)"
    WEAKEN_RIGHT = "(⇒w)"
    CUT = "cut"

    OR_LEFT = "(∨⇒)"
    OR_RIGHT = "(⇒∨)"
    NEG_OR_LEFT = "(¬∨⇒)"
    NEG_OR_RIGHT = "(⇒¬∨)"
    NABLA_OR_LEFT = "(∇∨⇒)"
    NABLA_OR_RIGHT = "(⇒∇∨)"
    NABLA_NEG_OR_LEFT = "(∇¬∨⇒)"
    NABLA_NEG_OR_RIGHT = "(⇒∇¬∨)"

    AND_LEFT = "(∧⇒)"
    AND_RIGHT = "(⇒∧)"
    NEG_AND_LEFT = "(¬∧⇒)"
    NEG_AND_RIGHT = "(⇒¬∧)"
    NABLA_AND_LEFT = "(∇∧⇒)"
    NABLA_AND_RIGHT = "(⇒∇∧)"
    NABLA_NEG_AND_LEFT = "(∇¬∧⇒)"
    NABLA_NEG_AND_RIGHT = "(⇒∇¬∧)"

    NEG_NEG_LEFT = "(¬¬⇒)"
    NEG_NEG_RIGHT = "(⇒¬¬)"
    NABLA_NEG_NEG_LEFT = "(∇¬¬⇒)"
    NABLA_NEG_NEG_RIGHT = "(⇒∇¬¬)"

    NABLA_RIGHT = "(⇒∇)"
    NABLA_NABLA_LEFT = "(∇∇⇒)"
    NEG_NABLA_LEFT = "(¬∇⇒)"
    NEG_NABLA_RIGHT = "(⇒¬∇)"
    NABLA_NEG_NABLA_LEFT = "(∇¬∇⇒)"


STRUCTURAL_TAGS = frozenset({RuleTag.AXIOM, RuleTag.WEAKEN_LEFT, RuleTag.WEAKEN_RIGHT, RuleTag.CUT})

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class GSixRule:
    """
    A logic rule of GSix: the principal formula on one side is replaced, in each premise, by the active formulas.

    Attributes:
        tag: The rule's label.
        side: The side of the conclusion the principal formula sits on.
        pattern: The principal formula as a schema over A, B.
        premises: Per premise, the active formulas added to the left and to the right.
    """

    tag: RuleTag
    side: str
    pattern: Formula
    premises: tuple[tuple[tuple[Formula, ...], tuple[Formula, ...]], ...]

    @property
    def arity(self) -> int:
        return len(self.premises)

    def match(self, f: Formula) -> Binding | None:
        return match(self.pattern, f)

    def active(self, binding: Binding) -> list[tuple[frozenset[Formula], frozenset[Formula]]]:
        """The instantiated active formulas of every premise."""
        return [
            (frozenset(instantiate(g, binding) for g in left), frozenset(instantiate(g, binding) for g in right))
            for left, right in self.premises
        ]

    def as_schematic(self) -> SchematicRule:
        """The context-free reading premises / conclusion, for the rule-algebra oracles."""
        conclusion = Sequent.of([self.pattern]) if self.side == LEFT else Sequent.of((), [self.pattern])
        return SchematicRule.of((Sequent.of(left, right) for left, right in self.premises), conclusion, str(self.tag))


def _rule(tag: RuleTag, side: str, pattern: str, *premises: tuple[list[str], list[str]]) -> GSixRule:
    def parse(texts: list[str]) -> tuple[Formula, ...]:
        return tuple(parse_formula(text, schematic=True) for text in texts)

    parsed = tuple((parse(left), parse(right)) for left, right in premises)
    return GSixRule(tag, side, parse_formula(pattern, schematic=True), parsed)


GSIX_RULES: tuple[GSixRule, ...] = (
    _rule(RuleTag.OR_LEFT, LEFT, "A | B", (["A"], []), (["B"], [])),
    _rule(RuleTag.OR_RIGHT, RIGHT, "A | B", ([], ["A", "B"])),
    _rule(RuleTag.NEG_OR_LEFT, LEFT, "~(A | B)", (["~A", "~B"], [])),
    _rule(RuleTag.NEG_OR_RIGHT, RIGHT, "~(A | B)", ([], ["~A"]), ([], ["~B"])),
    _rule(RuleTag.NABLA_OR_LEFT, LEFT, "#(A | B)", (["#A"], []), (["#B"], [])),
    _rule(RuleTag.NABLA_OR_RIGHT, RIGHT, "#(A | B)", ([], ["#A", "#B"])),
    _rule(RuleTag.NABLA_NEG_OR_LEFT, LEFT, "#~(A | B)", (["#~A", "#~B"], [])),
    _rule(RuleTag.NABLA_NEG_OR_RIGHT, RIGHT, "#~(A | B)", ([], ["#~A"]), ([], ["#~B"])),
    _rule(RuleTag.AND_LEFT, LEFT, "A & B", (["A", "B"], [])),
    _rule(RuleTag.AND_RIGHT, RIGHT, "A & B", ([], ["A"]), ([], ["B"])),
    _rule(RuleTag.NEG_AND_LEFT, LEFT, "~(A & B)", (["~A"], []), (["~B"], [])),
    _rule(RuleTag.NEG_AND_RIGHT, RIGHT, "~(A & B)", ([], ["~A", "~B"])),
    _rule(RuleTag.NABLA_AND_LEFT, LEFT, "#(A & B)", (["#A", "#B"], [])),
    _rule(RuleTag.NABLA_AND_RIGHT, RIGHT, "#(A & B)", ([], ["#A"]), ([], ["#B"])),
    _rule(RuleTag.NABLA_NEG_AND_LEFT, LEFT, "#~(A & B)", (["#~A"], []), (["#~B"], [])),
    _rule(RuleTag.NABLA_NEG_AND_RIGHT, RIGHT, "#~(A & B)", ([], ["#~A", "#~B"])),
    _rule(RuleTag.NEG_NEG_LEFT, LEFT, "~~A", (["A"], [])),
    _rule(RuleTag.NEG_NEG_RIGHT, RIGHT, "~~A", ([], ["A"])),
    _rule(RuleTag.NABLA_NEG_NEG_LEFT, LEFT, "#~~A", (["#A"], [])),
    _rule(RuleTag.NABLA_NEG_NEG_RIGHT, RIGHT, "#~~A", ([], ["#A"])),
    _rule(RuleTag.NABLA_RIGHT, RIGHT, "#A", (["~A"], ["A"])),
    _rule(RuleTag.NABLA_NABLA_LEFT, LEFT, "##A", (["#A"], [])),
    _rule(RuleTag.NEG_NABLA_LEFT, LEFT, "~#A", ([], ["#A"])),
    _rule(RuleTag.NEG_NABLA_RIGHT, RIGHT, "~#A", (["#A"], [])),
    _rule(RuleTag.NABLA_NEG_NABLA_LEFT, LEFT, "#~#A", ([], ["#A"])),
)

RULES_BY_TAG: dict[RuleTag, GSixRule] = {rule.tag: rule for rule in GSIX_RULES}

# Rules whose premise can be invalid under a valid conclusion; backward search branches over these only.
NON_INVERTIBLE = frozenset({RuleTag.NABLA_RIGHT})


def is_invertible(rule: GSixRule) -> bool:
    return rule.tag not in NON_INVERTIBLE


def rules_for(f: Formula, side: str) -> list[tuple[GSixRule, Binding]]:
    """Every rule with `f` as principal formula on `side`, with the binding of its schema variables."""
    matches = []
    for rule in GSIX_RULES:
        if rule.side != side:
            continue
        binding = rule.match(f)
        if binding is not None:
            matches.append((rule, binding))
    return matches


def invertible_rules(rules: tuple[GSixRule, ...] = GSIX_RULES) -> dict[RuleTag, bool]:
    """
    Semantic invertibility of each rule: every reversed rule conclusion / premise is locally sound.
    """
    result = {}
    for rule in rules:
        schematic = rule.as_schematic()
        result[rule.tag] = all(rule_locally_sound(reverse_rule(schematic, p)) for p in schematic.premises)
    return result


# Termination measure of backward search


def rule_weight(f: Formula) -> int:
    """Variables weigh 1; ¬ adds 1, ∇ adds 3, a binary connective adds 1 to the weights of both sides."""
    match f:
        case Var() | Meta():
            return 1
        case Neg(sub=sub):
            return rule_weight(sub) + 1
        case Nabla(sub=sub):
            return rule_weight(sub) + 3
        case _:
            return sum(rule_weight(child) for child in f.children) + 1


def _linear_weight(f: Formula) -> tuple[int, Counter[str]]:
    # The weight of a schema is a constant plus one unit per occurrence of each schema variable's weight.
    if isinstance(f, Meta):
        return 0, Counter({f.name: 1})
    if isinstance(f, Var):
        return 1, Counter()
    constant = {Neg: 1, Nabla: 3}.get(type(f), 1)
    metas: Counter[str] = Counter()
    for child in f.children:
        c, m = _linear_weight(child)
        constant += c
        metas += m
    return constant, metas


def weight_decrease_failures(rules: tuple[GSixRule, ...] = GSIX_RULES) -> list[str]:
    """
    Names the (rule, active formula) pairs whose active formula is not strictly lighter than the principal formula
    for every instantiation of the schema variables.
    """
    failures = []
    for rule in rules:
        p_const, p_metas = _linear_weight(rule.pattern)
        for left, right in rule.premises:
            for g in left + right:
                g_const, g_metas = _linear_weight(g)
                dominated = all(g_metas[name] <= p_metas[name] for name in g_metas)
                lighter = p_const + p_metas.total() > g_const + g_metas.total()
                if not (dominated and lighter):
                    failures.append(f"{rule.tag}: {g}")
    return failures


@cache
def verify_weight_decrease() -> bool:
    """
    Checks the termination measure of backward search against every rule; runs once per process.

    Raises:
        AssertionError: If some rule does not decrease the weight of its principal formula.
    """
    failures = weight_decrease_failures()
    assert not failures, f"Rules that do not decrease the weight: {failures}"
    log.debug(f"weight decrease verified for {len(GSIX_RULES)} rules")
    return True
