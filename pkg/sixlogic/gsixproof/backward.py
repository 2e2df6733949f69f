"""
Goal-directed proof search in GSix.

Rules are read bottom-up with the principal formula removed from the premises. Every rule except (⇒∇) is
invertible, so the search commits to the first invertible rule it finds and only branches over the (⇒∇)
inferences of a sequent with nothing else left to decompose. Sequents stuck without such a choice are invalid:
their left side holds only p, ¬p, ∇p, ∇¬p and their right side only p, ¬p.
"""

from dataclasses import dataclass, field
from logging import getLogger

from sixlogic.core.syntax import Binding, Formula, Sequent, sort_formulas

from .proof import ProofTree, axiom_for, infer
from .rules import LEFT, RIGHT, GSixRule, is_invertible, rules_for, verify_weight_decrease

log = getLogger(__name__)


@dataclass
class SearchStats:
    visited: int = 0
    branches: int = 0


@dataclass
class BackwardSearch:
    """
    One search session; proofs of sub-sequents are memoised across the calls of a session.
    """

    stats: SearchStats = field(default_factory=SearchStats)
    _memo: dict[Sequent, ProofTree | None] = field(default_factory=dict)

    def __post_init__(self):
        verify_weight_decrease()

    def prove(self, s: Sequent) -> ProofTree | None:
        if s in self._memo:
            return self._memo[s]
        self.stats.visited += 1
        proof = self._prove(s)
        self._memo[s] = proof
        return proof

    def _premises(self, s: Sequent, rule: GSixRule, principal: Formula, binding: Binding) -> tuple[Sequent, list]:
        if rule.side == LEFT:
            context = Sequent(s.left - {principal}, s.right)
        else:
            context = Sequent(s.left, s.right - {principal})
        return context, [Sequent(context.left | left, context.right | right) for left, right in rule.active(binding)]

    def _apply(self, s: Sequent, rule: GSixRule, principal: Formula, binding: Binding) -> ProofTree | None:
        context, premises = self._premises(s, rule, principal, binding)
        children = []
        for premise in premises:
            child = self.prove(premise)
            if child is None:
                return None
            children.append(child)
        return infer(rule.tag, principal, context, tuple(children))

    def _prove(self, s: Sequent) -> ProofTree | None:
        if s.is_axiomatic():
            return axiom_for(s)
        candidates: list[tuple[GSixRule, Formula, Binding]] = []
        for side, formulas in ((LEFT, s.left), (RIGHT, s.right)):
            for f in sort_formulas(formulas):
                for rule, binding in rules_for(f, side):
                    if is_invertible(rule):
                        return self._apply(s, rule, f, binding)
                    candidates.append((rule, f, binding))
        for rule, f, binding in candidates:
            self.stats.branches += 1
            proof = self._apply(s, rule, f, binding)
            if proof is not None:
                return proof
        return None


def prove_backward(s: Sequent) -> tuple[ProofTree | None, SearchStats]:
    search = BackwardSearch()
    proof = search.prove(s)
    log.debug(f"backward search on {s}: {search.stats.visited} sequents, {search.stats.branches} (⇒∇) branches")
    return proof, search.stats
