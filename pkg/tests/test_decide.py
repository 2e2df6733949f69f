import pytest

import sixlogic.gsixproof.decide as decide_module
from sixlogic.core.algebra import evaluate, m6, sequent_valid
from sixlogic.core.config import T6, Caps, Engine, EngineDisagreement, ResourceExceeded
from sixlogic.core.factory import FormulaFactory
from sixlogic.core.syntax import And, Neg, Sequent, parse_sequent
from sixlogic.gsixproof.backward import prove_backward
from sixlogic.gsixproof.decide import DecisionOutcome, Verdict, decide
from sixlogic.gsixproof.proof import ProofTree, check_proof, within_gsub
from sixlogic.gsixproof.rules import RuleTag

ZERO, THIRD, N, B, TWO_THIRDS, ONE = T6

OR_TO_NEGATED_AND = "p | q => ~(~p & ~q)"
NABLA_DE_MORGAN = "#~#(p & q) => ~#p | ~#q"
ROOMY = Caps(gsub_cap=16)
SATURATION_BUDGET = Caps(gsub_cap=16, max_states=1_500)


def falsifies(s: Sequent, assignment) -> bool:
    """True iff the assignment designates every left formula and no right formula."""
    m = m6()
    full = {name: assignment.get(name, ZERO) for name in s.variables()}
    return all(m.is_designated(evaluate(f, full, m)) for f in s.left) and not any(
        m.is_designated(evaluate(f, full, m)) for f in s.right
    )


@pytest.mark.parametrize("engine", [Engine.SEMANTIC, Engine.BACKWARD, Engine.SATURATION, Engine.CROSS])
@pytest.mark.parametrize(
    "text", [OR_TO_NEGATED_AND, NABLA_DE_MORGAN, "##p => #p", "p, ~p => #p", "=> #p, #~p", "p => #p"]
)
def test_provable(engine, text):
    s = parse_sequent(text)
    outcome = decide(s, engine, ROOMY)
    assert outcome.provable
    if engine != Engine.SEMANTIC:
        assert outcome.proof is not None
        assert outcome.proof.sequent == s
        assert check_proof(outcome.proof, allow_cut=False)
        assert within_gsub(outcome.proof)


@pytest.mark.parametrize("engine", [Engine.SEMANTIC, Engine.BACKWARD, Engine.SATURATION, Engine.CROSS])
@pytest.mark.parametrize("text", ["p, ~p => q", "=> p | ~p", "=>", "=> p & ~p", "#p => p"])
def test_not_provable(engine, text):
    s = parse_sequent(text)
    outcome = decide(s, engine)
    assert outcome.verdict == Verdict.NOT_PROVABLE
    assert outcome.proof is None
    assert outcome.counterassignment is not None
    assert falsifies(s, outcome.counterassignment)


def test_engines_agree_with_the_matrix():
    """
    Backward search proves exactly the valid sequents; saturation agrees on every sequent that fits in its caps.
    """
    factory = FormulaFactory(max_depth=3, seed=11)
    saturated = 0
    for _ in range(500):
        s = factory.sequent(max_per_side=3)
        valid = sequent_valid(s)
        proof, _ = prove_backward(s)
        assert (proof is not None) == valid, s
        if proof is not None:
            assert check_proof(proof, allow_cut=False)
        try:
            outcome = decide(s, Engine.SATURATION, SATURATION_BUDGET)
        except ResourceExceeded:
            continue
        saturated += 1
        assert outcome.provable == valid, s
    assert saturated >= 100


def test_contradictions_are_not_provable():
    factory = FormulaFactory(max_depth=2, seed=23)
    for _ in range(100):
        gamma = factory.formula()
        s = Sequent.of([], [And(gamma, Neg(gamma))])
        assert prove_backward(s)[0] is None, s
        assert not decide(s, Engine.SEMANTIC).provable, s
        outcome = decide(s, Engine.CROSS, SATURATION_BUDGET)
        assert outcome.verdict == Verdict.NOT_PROVABLE, s
        assert falsifies(s, outcome.counterassignment)


def test_cut_is_admissible():
    """
    Whenever Γ ⇒ Δ, φ and φ, Γ ⇒ Δ are provable without cut, so is Γ ⇒ Δ.
    """
    factory = FormulaFactory(max_depth=2, seed=3)
    for _ in range(150):
        s = factory.sequent(max_per_side=2)
        phi = factory.formula()
        with_right, _ = prove_backward(s.add_right(phi))
        with_left, _ = prove_backward(s.add_left(phi))
        if with_right is not None and with_left is not None:
            assert prove_backward(s)[0] is not None, (s, phi)


def test_saturation_gsub_cap():
    s = parse_sequent(OR_TO_NEGATED_AND)
    with pytest.raises(ResourceExceeded) as e:
        decide(s, Engine.SATURATION, Caps(gsub_cap=3))
    assert e.value.cap == "gsub_cap"


def test_cross_skips_engines_over_their_caps():
    """
    The fifteen generalized subformulas of the ∇ De Morgan sequent exceed the default saturation cap.
    """
    outcome = decide(parse_sequent(NABLA_DE_MORGAN))
    assert outcome.provable
    assert outcome.engine == Engine.CROSS
    assert "skipped: saturation" in outcome.details
    assert outcome.stats == {}


def test_cross_details():
    outcome = decide(parse_sequent(OR_TO_NEGATED_AND))
    assert outcome.details == "engines: semantic, backward, saturation"
    assert set(outcome.stats) == {"iterations", "states"}
    data = outcome.to_json()
    assert data["verdict"] == "provable"
    assert data["witness"]["rule"] == str(outcome.proof.rule)


def test_semantic_var_cap():
    with pytest.raises(ResourceExceeded) as e:
        decide(parse_sequent("p => q"), Engine.SEMANTIC, Caps(var_cap=1))
    assert e.value.cap == "var_cap"


def test_cross_without_counterassignment():
    """
    Backward search has no cap; without the semantic engine no falsifying assignment is reported.
    """
    outcome = decide(parse_sequent("p => q"), Engine.CROSS, Caps(var_cap=1, gsub_cap=1))
    assert outcome.verdict == Verdict.NOT_PROVABLE
    assert outcome.counterassignment is None
    assert outcome.details == "engines: backward; skipped: semantic, saturation"


def test_every_engine_over_its_caps(monkeypatch):
    def capped(s, caps=None):
        raise ResourceExceeded("capped", "max_states", 1)

    monkeypatch.setitem(decide_module.ENGINES, Engine.BACKWARD, capped)
    with pytest.raises(ResourceExceeded) as e:
        decide(parse_sequent("p => q"), Engine.CROSS, Caps(var_cap=1, gsub_cap=1))
    assert e.value.cap == "cross"


def test_backward_only_branches_on_nabla_right():
    _, stats = prove_backward(parse_sequent("=> #p, #~p"))
    assert stats.branches >= 1
    _, stats = prove_backward(parse_sequent(OR_TO_NEGATED_AND))
    assert stats.branches == 0


def test_disagreement(monkeypatch):
    def wrong(s, caps=None):
        return DecisionOutcome(s, Engine.SEMANTIC, Verdict.NOT_PROVABLE)

    monkeypatch.setitem(decide_module.ENGINES, Engine.SEMANTIC, wrong)
    with pytest.raises(EngineDisagreement) as e:
        decide(parse_sequent(OR_TO_NEGATED_AND))
    assert e.value.verdicts["semantic"] == "not-provable"
    assert e.value.verdicts["backward"] == "provable"


def test_invalid_proof_counts_as_disagreement(monkeypatch):
    """
    A proof that does not check is treated as a disagreeing verdict.
    """

    def bogus(s, caps=None):
        return DecisionOutcome(s, Engine.BACKWARD, Verdict.PROVABLE, ProofTree(s, RuleTag.AXIOM))

    monkeypatch.setitem(decide_module.ENGINES, Engine.BACKWARD, bogus)
    with pytest.raises(EngineDisagreement) as e:
        decide(parse_sequent(OR_TO_NEGATED_AND))
    assert e.value.verdicts["backward"].startswith("invalid proof")
