from dataclasses import dataclass, field
from enum import StrEnum
from logging import getLogger
from typing import Any

from sixlogic.core.algebra import Assignment, counterexample, m6
from sixlogic.core.config import Caps, Engine, EngineDisagreement, ResourceExceeded
from sixlogic.core.syntax import Sequent

from .backward import prove_backward
from .proof import ProofTree, find_failure, proof_to_json, within_gsub
from .saturation import saturate

log = getLogger(__name__)


class Verdict(StrEnum):
    PROVABLE = "provable"
    NOT_PROVABLE = "not-provable"
    RESOURCE_EXCEEDED = "resource-exceeded"


@dataclass
class DecisionOutcome:
    """
    The answer of one engine: a verdict, a proof when provable, a falsifying assignment when not, and statistics.
    """

    sequent: Sequent
    engine: Engine
    verdict: Verdict
    proof: ProofTree | None = None
    counterassignment: Assignment | None = None
    details: str = ""
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def provable(self) -> bool:
        return self.verdict == Verdict.PROVABLE

    def to_json(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "sequent": str(self.sequent),
            "engine": str(self.engine),
            "verdict": str(self.verdict),
            "stats": dict(self.stats),
        }
        if self.proof is not None:
            data["witness"] = proof_to_json(self.proof)
        if self.counterassignment is not None:
            data["counterassignment"] = {name: str(value) for name, value in self.counterassignment.items()}
        if self.details:
            data["details"] = self.details
        return data


def _counterassignment(s: Sequent, caps: Caps) -> Assignment | None:
    # Not every unprovable sequent is small enough to enumerate.
    try:
        return counterexample(s, m6(), caps.var_cap)
    except ResourceExceeded:
        return None


def decide_semantic(s: Sequent, caps: Caps | None = None) -> DecisionOutcome:
    caps = Caps.default() if caps is None else caps
    falsifier = counterexample(s, m6(), caps.var_cap)
    verdict = Verdict.PROVABLE if falsifier is None else Verdict.NOT_PROVABLE
    stats = {"assignments": len(m6().values) ** len(s.variables())}
    return DecisionOutcome(s, Engine.SEMANTIC, verdict, counterassignment=falsifier, stats=stats)


def decide_backward(s: Sequent, caps: Caps | None = None) -> DecisionOutcome:
    caps = Caps.default() if caps is None else caps
    proof, search = prove_backward(s)
    stats = {"states": search.visited, "branches": search.branches}
    if proof is None:
        return DecisionOutcome(s, Engine.BACKWARD, Verdict.NOT_PROVABLE, None, _counterassignment(s, caps), stats=stats)
    assert within_gsub(proof), f"Backward proof of {s} leaves its generalized subformulas."
    return DecisionOutcome(s, Engine.BACKWARD, Verdict.PROVABLE, proof, stats=stats)


def decide_saturation(s: Sequent, caps: Caps | None = None) -> DecisionOutcome:
    """
    Raises:
        ResourceExceeded: If the goal has too many generalized subformulas or a saturation budget runs out.
    """
    caps = Caps.default() if caps is None else caps
    result = saturate(s, caps)
    stats = {"iterations": result.iterations, "states": result.states}
    log.info(f"saturation: {s} is {'provable' if result.provable else 'not provable'} ({stats})")
    if result.provable:
        return DecisionOutcome(s, Engine.SATURATION, Verdict.PROVABLE, result.proof(), stats=stats)
    return DecisionOutcome(s, Engine.SATURATION, Verdict.NOT_PROVABLE, None, _counterassignment(s, caps), stats=stats)


ENGINES = {
    Engine.SEMANTIC: decide_semantic,
    Engine.BACKWARD: decide_backward,
    Engine.SATURATION: decide_saturation,
}


def decide_cross(s: Sequent, caps: Caps | None = None) -> DecisionOutcome:
    """
    Runs every engine within the caps and compares their verdicts.

    Engines that exceed their caps are skipped. Every proof returned is checked with cut disabled.

    Raises:
        EngineDisagreement: If two engines disagree, or an engine returns a proof that does not check.
        ResourceExceeded: If every engine exceeded its caps.
    """
    caps = Caps.default() if caps is None else caps
    outcomes: dict[Engine, DecisionOutcome] = {}
    skipped = []
    for engine, run in ENGINES.items():
        try:
            outcomes[engine] = run(s, caps)
        except ResourceExceeded as e:
            log.warning(f"{engine} engine skipped on {s}: {e.details}")
            skipped.append(str(engine))
    if not outcomes:
        raise ResourceExceeded(f"every engine exceeded its caps on {s}", "cross")
    verdicts = {str(engine): str(outcome.verdict) for engine, outcome in outcomes.items()}
    for engine, outcome in outcomes.items():
        if outcome.proof is not None:
            failure = find_failure(outcome.proof, allow_cut=False)
            if failure is not None:
                verdicts[str(engine)] = f"invalid proof ({failure})"
    if len(set(verdicts.values())) > 1:
        raise EngineDisagreement(s, verdicts)

    verdict = next(iter(outcomes.values())).verdict
    proof = next((o.proof for o in outcomes.values() if o.proof is not None), None)
    falsifier = next((o.counterassignment for o in outcomes.values() if o.counterassignment is not None), None)
    stats = dict(outcomes[Engine.SATURATION].stats) if Engine.SATURATION in outcomes else {}
    details = f"engines: {', '.join(verdicts)}" + (f"; skipped: {', '.join(skipped)}" if skipped else "")
    return DecisionOutcome(s, Engine.CROSS, verdict, proof, falsifier, details, stats)


def decide(s: Sequent, engine: Engine | str = Engine.CROSS, caps: Caps | None = None) -> DecisionOutcome:
    """
    Decides a sequent of GSix with the given engine.

    Raises:
        ResourceExceeded: If the engine exceeds its caps.
        EngineDisagreement: In cross mode, if the engines disagree.
    """
    engine = Engine(engine)
    if engine == Engine.CROSS:
        return decide_cross(s, caps)
    return ENGINES[engine](s, caps)
