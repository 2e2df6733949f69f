from sixlogic.calculi.rulealg import rule_locally_sound
from sixlogic.core.syntax import Meta, Var, parse_formula
from sixlogic.gsixproof.rules import (
    GSIX_RULES,
    LEFT,
    RIGHT,
    RULES_BY_TAG,
    STRUCTURAL_TAGS,
    RuleTag,
    invertible_rules,
    is_invertible,
    rule_weight,
    rules_for,
    verify_weight_decrease,
    weight_decrease_failures,
)


def test_rule_set():
    """
    Twenty-five logic rules, one per tag outside the structural ones.
    """
    assert len(GSIX_RULES) == 25
    assert set(RULES_BY_TAG) == set(RuleTag) - STRUCTURAL_TAGS
    assert RULES_BY_TAG[RuleTag.OR_LEFT].arity == 2
    assert RULES_BY_TAG[RuleTag.NABLA_RIGHT].arity == 1


def test_rules_are_sound():
    assert all(rule_locally_sound(rule.as_schematic()) for rule in GSIX_RULES)


def test_only_nabla_right_is_not_invertible():
    """
    From ⇒ ∇A one cannot go back to ¬A ⇒ A: A = 1/3 satisfies the first and falsifies the second.
    """
    invertible = invertible_rules()
    assert [tag for tag, ok in invertible.items() if not ok] == [RuleTag.NABLA_RIGHT]
    assert all(is_invertible(rule) == invertible[rule.tag] for rule in GSIX_RULES)


def test_rules_for():
    matches = rules_for(parse_formula("#(p & q)"), RIGHT)
    assert {rule.tag for rule, _ in matches} == {RuleTag.NABLA_AND_RIGHT, RuleTag.NABLA_RIGHT}
    assert [rule.tag for rule, _ in rules_for(parse_formula("#(p & q)"), LEFT)] == [RuleTag.NABLA_AND_LEFT]
    assert rules_for(Var("p"), LEFT) == []
    assert [rule.tag for rule, _ in rules_for(parse_formula("~#p"), LEFT)] == [RuleTag.NEG_NABLA_LEFT]


def test_active_formulas():
    rule = RULES_BY_TAG[RuleTag.NEG_OR_RIGHT]
    binding = rule.match(parse_formula("~(p | #q)"))
    assert binding == {"A": Var("p"), "B": parse_formula("#q")}
    assert rule.active(binding) == [
        (frozenset(), frozenset({parse_formula("~p")})),
        (frozenset(), frozenset({parse_formula("~#q")})),
    ]


def test_weights():
    assert rule_weight(Var("p")) == 1
    assert rule_weight(parse_formula("#~p")) == 5
    assert rule_weight(parse_formula("p & q")) == 3
    assert rule_weight(Meta("A")) == 1


def test_premises_are_lighter():
    """
    Every active formula weighs less than the principal formula, so backward search terminates.
    """
    assert weight_decrease_failures() == []
    assert verify_weight_decrease()
