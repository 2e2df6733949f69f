from dataclasses import replace

import pytest

from sixlogic.core.syntax import Formula, Sequent, parse_formula, parse_sequent
from sixlogic.gsixproof.proof import (
    ProofTree,
    axiom,
    axiom_for,
    check_proof,
    cut,
    find_failure,
    format_proof,
    infer,
    proof_from_json,
    proof_to_json,
    weaken_left,
    weaken_right,
    weaken_to,
    within_gsub,
)
from sixlogic.gsixproof.rules import RuleTag


def f(text: str) -> Formula:
    return parse_formula(text)


def or_to_negated_and() -> ProofTree:
    """
    p ∨ q ⇒ ¬(¬p ∧ ¬q): split the disjunction, then unfold the negated conjunction and the double negations.
    """

    def branch(x: str, other: str) -> ProofTree:
        closed = weaken_right(axiom(f(x)), f(f"~~{other}"))
        unfolded = infer(RuleTag.NEG_NEG_RIGHT, f(f"~~{x}"), Sequent.of([f(x)], [f(f"~~{other}")]), (closed,))
        return infer(RuleTag.NEG_AND_RIGHT, f("~(~p & ~q)"), Sequent.of([f(x)]), (unfolded,))

    return infer(RuleTag.OR_LEFT, f("p | q"), Sequent.of((), [f("~(~p & ~q)")]), (branch("p", "q"), branch("q", "p")))


def nabla_de_morgan() -> ProofTree:
    """∇¬∇(p ∧ q) ⇒ ¬∇p ∨ ¬∇q."""
    premise = f("#~#(p & q)")
    both = infer(
        RuleTag.NABLA_AND_RIGHT,
        f("#(p & q)"),
        Sequent.of([f("#p"), f("#q")]),
        (weaken_left(axiom(f("#p")), f("#q")), weaken_left(axiom(f("#q")), f("#p"))),
    )
    t = infer(RuleTag.NABLA_NEG_NABLA_LEFT, premise, Sequent.of([f("#p"), f("#q")]), (both,))
    t = infer(RuleTag.NEG_NABLA_RIGHT, f("~#q"), Sequent.of([premise, f("#p")]), (t,))
    t = infer(RuleTag.NEG_NABLA_RIGHT, f("~#p"), Sequent.of([premise], [f("~#q")]), (t,))
    return infer(RuleTag.OR_RIGHT, f("~#p | ~#q"), Sequent.of([premise]), (t,))


def test_proofs_check():
    t = or_to_negated_and()
    assert t.sequent == parse_sequent("p | q => ~(~p & ~q)")
    assert check_proof(t)
    assert within_gsub(t)

    t = nabla_de_morgan()
    assert t.sequent == parse_sequent("#~#(p & q) => ~#p | ~#q")
    assert check_proof(t)
    assert within_gsub(t)
    assert not t.uses_cut()


def test_proof_measures():
    t = or_to_negated_and()
    assert t.height == 5
    assert t.size == 9
    assert len(list(t.sequents())) == t.size


def test_tampered_premise():
    """
    Replacing the premise of the last inference is reported at the root.
    """
    t = nabla_de_morgan()
    tampered = replace(t, children=(axiom(f("p")),))
    failure = find_failure(tampered)
    assert failure is not None
    assert failure.path == ()
    assert failure.reason.startswith("premise")
    assert not check_proof(tampered)


def test_wrong_premise_count():
    t = or_to_negated_and()
    failure = find_failure(replace(t, children=t.children[:1]))
    assert failure is not None and failure.path == ()
    assert "needs 2 premises" in failure.reason


def test_bad_axiom_deep_in_the_tree():
    t = or_to_negated_and()
    branch = t.children[1]
    unfolded = branch.children[0]
    bad_leaf = ProofTree(parse_sequent("q => p"), RuleTag.AXIOM)
    broken = replace(t, children=(t.children[0], replace(branch, children=(replace(unfolded, children=(bad_leaf,)),))))
    failure = find_failure(broken)
    assert failure is not None
    assert failure.path[0] == 1


def test_principal_formula_must_match():
    t = ProofTree(parse_sequent("p => q | r"), RuleTag.OR_RIGHT, f("p"), (axiom(f("p")),))
    failure = find_failure(t)
    assert failure is not None and "not on the right" in failure.reason


def test_cut_needs_permission():
    """
    A cut on p between two weakened axioms q ⇒ q is only accepted when cuts are allowed.
    """
    p, q = f("p"), f("q")
    t = cut(p, weaken_right(axiom(q), p), weaken_left(axiom(q), p))
    assert t.sequent == parse_sequent("q => q")
    assert t.uses_cut()
    assert not check_proof(t)
    assert find_failure(t).reason == "cut is disabled"
    assert check_proof(t, allow_cut=True)


def test_weakenings():
    t = weaken_to(axiom(f("p")), parse_sequent("p, q => p, r"))
    assert t.sequent == parse_sequent("p, q => p, r")
    assert [node.rule for node in t.nodes()] == [RuleTag.WEAKEN_RIGHT, RuleTag.WEAKEN_LEFT, RuleTag.AXIOM]
    assert check_proof(t)
    with pytest.raises(ValueError):
        weaken_to(axiom(f("p")), parse_sequent("q => q"))
    with pytest.raises(ValueError):
        axiom_for(parse_sequent("p => q"))
    assert check_proof(axiom_for(parse_sequent("q, p => p, #p")))


def test_bad_weakening():
    t = ProofTree(parse_sequent("p, q => p"), RuleTag.WEAKEN_LEFT, f("r"), (axiom(f("p")),))
    assert find_failure(t) is not None


def test_json():
    t = nabla_de_morgan()
    data = proof_to_json(t)
    assert data["rule"] == "(⇒∨)"
    assert data["principal"] == "~#p | ~#q"
    assert proof_from_json(data) == t
    with pytest.raises(ValueError):
        proof_from_json({**data, "rule": "(⇒?)"})


def test_format_proof():
    lines = format_proof(or_to_negated_and()).splitlines()
    assert lines[0] == "p ∨ q ⇒ ¬(¬p ∧ ¬q)    (∨⇒) on p ∨ q"
    assert lines[1].startswith("  p ⇒ ¬(¬p ∧ ¬q)")
    assert len(lines) == 9
