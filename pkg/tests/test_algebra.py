import numpy as np
import pytest

from sixlogic.core.algebra import (
    FiniteMatrix,
    assignment_grid,
    boolean_matrix,
    check_de_morgan,
    check_lattice_laws,
    check_nabla_equations,
    counterexample,
    degree_entails,
    evaluate,
    is_theorem,
    lukasiewicz_matrix,
    m6,
    matrix_entails,
    nsequent_counterexample,
    nsequent_valid,
    sequent_valid,
    truth_table,
)
from sixlogic.core.config import T6, EvaluationError, IndexMismatchError, ResourceExceeded, TruthValue
from sixlogic.core.factory import FormulaFactory
from sixlogic.core.syntax import NSequent, Var, bullet, circ, parse_formula, parse_sequent

ZERO, THIRD, N, B, TWO_THIRDS, ONE = T6


def column(f):
    return [value for _, value in truth_table(f, m6())]


def test_negation_and_nabla_tables():
    """
    ¬ reverses the order and fixes n and b; ∇ sends every value but 0 to 1.
    """
    m = m6()
    assert [m.apply("~", x) for x in T6] == [ONE, TWO_THIRDS, N, B, THIRD, ZERO]
    assert [m.apply("#", x) for x in T6] == [ZERO, ONE, ONE, ONE, ONE, ONE]


def test_consistency_columns():
    """
    ∘ is true exactly at the classical values, • is its complement.
    """
    p = Var("p")
    assert column(circ(p)) == ["1", "0", "0", "0", "0", "1"]
    assert column(bullet(p)) == ["0", "1", "1", "1", "1", "0"]


def test_lattice_structure():
    m = m6()
    assert m.designated == {TruthValue.B, TruthValue.TWO_THIRDS, TruthValue.ONE}
    assert m.top == ONE and m.bottom == ZERO
    assert not m.leq(N, B) and not m.leq(B, N)
    assert m.inf(N, B) == THIRD
    assert m.sup(N, B) == TWO_THIRDS


def test_algebraic_laws():
    """
    The six-element algebra is a distributive De Morgan lattice and ∇ satisfies the Stone equations.
    """
    m = m6()
    assert check_lattice_laws(m) == []
    assert check_de_morgan(m) == []
    assert check_nabla_equations(m) == []


def test_broken_table_is_reported():
    """
    An identity negation is involutive but breaks both De Morgan laws.
    """
    m = m6()
    tables = {**m.tables, "~": np.arange(6, dtype=np.int8)}
    broken = FiniteMatrix(m.values, m.designated, tables, m.order, "broken")
    assert check_de_morgan(broken) == ["de-morgan-meet", "de-morgan-join"]


def test_paraconsistent_and_paracomplete():
    """
    Explosion and excluded middle both fail, with the first falsifying assignment reported.
    """
    assert not sequent_valid(parse_sequent("p, ~p => q"))
    assert counterexample(parse_sequent("p, ~p => q")) == {"p": B, "q": ZERO}
    assert counterexample(parse_sequent("=> p | ~p")) == {"p": N}


def test_valid_sequents():
    for text in ("p => p", "p & q => p", "p | q => ~(~p & ~q)", "~(~p & ~q) => p | q", "=> #p | ~#p"):
        assert sequent_valid(parse_sequent(text)), text


def test_empty_sequent_is_invalid():
    assert not sequent_valid(parse_sequent("=>"))
    assert counterexample(parse_sequent("=>")) == {}


def test_counterexample_falsifies():
    """
    Every reported counterexample designates the left side and no formula of the right side.
    """
    m = m6()
    factory = FormulaFactory(max_depth=2, seed=7)
    for _ in range(100):
        s = factory.sequent(max_per_side=2)
        falsifier = counterexample(s)
        assert (falsifier is None) == sequent_valid(s)
        if falsifier is not None:
            assignment = {name: falsifier.get(name, ZERO) for name in s.variables()}
            assert all(m.is_designated(evaluate(f, assignment)) for f in s.left)
            assert not any(m.is_designated(evaluate(f, assignment)) for f in s.right)


def test_evaluate_agrees_with_truth_table():
    factory = FormulaFactory(seed=3)
    for f in factory.formulas(30):
        for assignment, value in truth_table(f):
            assert evaluate(f, assignment) == value


def test_evaluate_needs_every_variable():
    with pytest.raises(EvaluationError):
        evaluate(parse_formula("p & q"), {"p": B})


def test_assignment_grid():
    m = m6()
    grid = assignment_grid(["p", "q"], m)
    assert len(grid["p"]) == 36
    assert grid["p"][0] == 0 and grid["q"][1] == 1
    assert np.all(grid["p"][:6] == 0)
    with pytest.raises(ResourceExceeded) as e:
        assignment_grid(["p", "q", "r"], m, var_cap=2)
    assert e.value.cap == "var_cap"


def test_consequence_relations():
    p, q = Var("p"), Var("q")
    assert degree_entails([parse_formula("p & q")], p)
    assert not degree_entails([p], q)
    assert not matrix_entails([p, parse_formula("~p")], q)
    assert matrix_entails([parse_formula("~~p")], p)
    with pytest.raises(ValueError):
        degree_entails([], p)


def test_single_premise_consequences_coincide():
    factory = FormulaFactory(max_depth=3, seed=29)
    for _ in range(500):
        a, b = factory.formula(), factory.formula()
        assert degree_entails([a], b) == matrix_entails([a], b), (a, b)


def test_theorems():
    assert is_theorem(parse_formula("#p | ~#p"))
    assert is_theorem(parse_formula("~#(p & ~p) | #(p & ~p)"))
    assert not is_theorem(parse_formula("p | ~p"))


def test_other_matrices():
    """
    The Boolean matrix is explosive; the three-valued chain is paracomplete.
    """
    assert sequent_valid(parse_sequent("p, ~p => q"), boolean_matrix())
    assert sequent_valid(parse_sequent("=> p | ~p"), boolean_matrix())
    l3 = lukasiewicz_matrix(3)
    assert l3.values == ("0", "1/2", "1")
    assert counterexample(parse_sequent("=> p | ~p"), l3) == {"p": "1/2"}
    with pytest.raises(ValueError):
        lukasiewicz_matrix(1)


def test_nsequent_validity():
    p = Var("p")
    assert nsequent_valid(NSequent.axiom(p))
    assert not nsequent_valid(NSequent.empty().add((ZERO, p), (ONE, p)))
    with pytest.raises(IndexMismatchError):
        nsequent_valid(NSequent.axiom(p, ("0", "1")))


def test_nsequent_counterexample():
    p = Var("p")
    assert nsequent_counterexample(NSequent.axiom(p)) is None
    falsifier = nsequent_counterexample(NSequent.empty().add((ZERO, p), (ONE, p)))
    assert falsifier is not None
    assert falsifier["p"] not in (ZERO, ONE)
