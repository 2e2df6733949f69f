import itertools
from collections import defaultdict

import pytest

from sixlogic.calculi.rulealg import (
    SchematicRule,
    combine_principle3,
    drop_superfluous,
    format_rule,
    is_superfluous,
    reduce_propred,
    reverse_rule,
    rule_admissible_schematic,
    rule_from_json,
    rule_locally_sound,
    rule_to_json,
    shrink_principle4,
    simplify_principle2,
    superfluous_rules,
)
from sixlogic.calculi.twocalc import default_translation
from sixlogic.core.config import RuleApplicationError
from sixlogic.core.syntax import parse_sequent


def seq(text: str):
    return parse_sequent(text, schematic=True)


def rule(premises: str, conclusion: str, name: str = "") -> SchematicRule:
    """Builds a rule from premises written as "S1; S2" and a conclusion."""
    return SchematicRule.of((seq(s) for s in premises.split(";") if s.strip()), seq(conclusion), name)


def test_rules_compare_by_shape():
    assert rule("A =>; B =>", "A | B =>", "x") == rule("B =>; A =>", "A | B =>", "y")
    assert rule("A =>", "A | B =>").metavariables() == ["A", "B"]
    assert format_rule(rule("B =>; A =>", "A | B =>", "r")) == "r: {A ⇒ ; B ⇒} / A ∨ B ⇒"


def test_local_soundness():
    assert rule_locally_sound(rule("A =>; B =>", "A | B =>"))
    assert rule_locally_sound(rule("~A => A", "=> #A"))
    assert not rule_locally_sound(rule("A =>", "=> A"))
    assert not rule_locally_sound(rule("", "=> A | ~A"))


def test_schematic_admissibility():
    """
    A rule whose premises are never all valid at value level is accepted vacuously.
    """
    assert rule_admissible_schematic(rule("=> A", "=> ~A"))
    assert rule_admissible_schematic(rule("~A => A, #A", "=> #A"))
    assert not rule_admissible_schematic(rule("", "=> A | ~A"))


def test_too_many_schema_variables():
    with pytest.raises(ValueError):
        rule_locally_sound(rule("A, B, C, D =>", "E =>"), max_metavariables=4)


def test_reverse_rule():
    r = rule("~A => A", "=> #A", "nabla")
    reversed_rule = reverse_rule(r, 0)
    assert reversed_rule == rule("=> #A", "~A => A")
    assert not rule_locally_sound(reversed_rule)
    with pytest.raises(ValueError):
        reverse_rule(r, 1)
    with pytest.raises(ValueError):
        reverse_rule(r, seq("A =>"))


def test_superfluous_rules():
    trivial = rule("A =>; B =>", "A =>")
    useful = rule("A =>; B =>", "A | B =>")
    assert is_superfluous(trivial)
    assert superfluous_rules([trivial, useful]) == [trivial]
    assert drop_superfluous([trivial, useful]) == [useful]


def test_combine():
    """
    Two rules with a common conclusion combine into one whose premises are the pairwise unions.
    """
    combined = combine_principle3(rule("=> A", "=> #A"), rule("~A =>", "=> #A"))
    assert combined == rule("~A => A", "=> #A")
    many = combine_principle3(rule("=> A; B =>", "C =>"), rule("=> B", "C =>"))
    assert many.premises == frozenset({seq("=> A, B"), seq("B => B")})
    with pytest.raises(RuleApplicationError) as e:
        combine_principle3(rule("=> A", "=> #A"), rule("=> A", "#A =>"))
    assert e.value.reason == "conclusion-mismatch"


def test_simplify():
    r = simplify_principle2(rule("A => A, B; A =>; A, B =>; C =>", "=> D"))
    assert r.premises == frozenset({seq("A =>"), seq("C =>")})


def test_propred():
    """
    Premises ⇒φ and φ⇒ that differ only in φ cancel, in either order of the two rules.
    """
    r1 = rule("=> A; B =>", "=> C", "r1")
    r2 = rule("A =>; B =>", "=> C", "r2")
    assert reduce_propred(r1, r2) == rule("B =>", "=> C")
    assert reduce_propred(r2, r1) == rule("B =>", "=> C")
    assert reduce_propred(r1, rule("A =>; B =>", "C =>")) is None
    assert reduce_propred(r1, rule("A =>", "=> C")) is None


def test_shrink():
    r = rule("~A => A, #A", "#~#A =>")
    shrunk = shrink_principle4(r, 0, seq("=> #A"))
    assert shrunk == rule("=> #A", "#~#A =>")
    assert shrink_principle4(r, 0, seq("=> #A"), strict=True) == shrunk
    assert shrink_principle4(rule("A => A, B", "=> C"), 0, seq("=> B")) is None
    with pytest.raises(ValueError):
        shrink_principle4(r, 0, seq("=> B"))


def test_shrink_strict():
    """
    The value-level check accepts a shrink that the per-assignment check refuses.
    """
    r = rule("~A => A, #A", "#~#A =>")
    assert shrink_principle4(r, 0, seq("=> A")) is not None
    assert shrink_principle4(r, 0, seq("=> A"), strict=True) is None


def test_rule_json():
    r = rule("~A => A", "=> #A", "(⇒∇)")
    data = rule_to_json(r)
    assert data["premises"] == ["~A => A"]
    restored = rule_from_json(data)
    assert restored == r and restored.name == "(⇒∇)"


def test_combining_sound_rules_stays_sound():
    """
    Combining or reducing two sound translated rules with a common conclusion gives a sound rule.
    """
    by_conclusion = defaultdict(list)
    for r in default_translation():
        by_conclusion[r.conclusion].append(r)
    combined = 0
    for group in by_conclusion.values():
        for r1, r2 in itertools.islice(itertools.combinations(group, 2), 8):
            assert rule_locally_sound(combine_principle3(r1, r2)), (r1, r2)
            combined += 1
        for r1, r2 in itertools.combinations(group, 2):
            reduced = reduce_propred(r1, r2)
            if reduced is not None:
                assert rule_locally_sound(reduced), (r1, r2)
    assert combined >= 20
