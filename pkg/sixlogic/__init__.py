from sixlogic.calculi.rulealg import SchematicRule
from sixlogic.calculi.sfcalc import SignedRule, generate_sf
from sixlogic.calculi.twocalc import WitnessTable, six_witnesses, translate_calculus
from sixlogic.core.algebra import FiniteMatrix, evaluate, m6, sequent_valid
from sixlogic.core.config import Caps, Engine, TruthValue
from sixlogic.core.factory import FormulaFactory
from sixlogic.core.syntax import Formula, NSequent, Sequent, parse_formula, parse_sequent
from sixlogic.gsixproof.decide import DecisionOutcome, decide
from sixlogic.gsixproof.proof import ProofTree, check_proof

__all__ = [
    "Caps",
    "DecisionOutcome",
    "Engine",
    "FiniteMatrix",
    "Formula",
    "FormulaFactory",
    "NSequent",
    "ProofTree",
    "SchematicRule",
    "Sequent",
    "SignedRule",
    "TruthValue",
    "WitnessTable",
    "check_proof",
    "decide",
    "evaluate",
    "generate_sf",
    "m6",
    "parse_formula",
    "parse_sequent",
    "sequent_valid",
    "six_witnesses",
    "translate_calculus",
]
