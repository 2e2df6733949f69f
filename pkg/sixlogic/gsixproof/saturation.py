"""
Forward saturation over the generalized subformulas of a goal sequent.

Sequents over the indexed set G are pairs of uint64 bitmasks. Starting from the axioms φ ⇒ φ, every round adds the
lower sequents of the GSix inferences whose upper sequents are already derived, until the goal is derived or a round
adds nothing. Derived sets are closed under weakening, so each stage is kept as the antichain of its minimal
sequents: a sequent belongs to the stage iff it weakens a stored one.
"""

from dataclasses import dataclass, field
from logging import getLogger

import numba as nb
import numpy as np

from sixlogic.core.config import Caps, ResourceExceeded
from sixlogic.core.syntax import Formula, Sequent

from .gsub import indexed_gsub
from .proof import ProofTree, axiom, infer, weaken_to
from .rules import GSIX_RULES, LEFT, RuleTag

log = getLogger(__name__)

NO_PREMISE = -1


@nb.njit(cache=True)
def is_subsumed(left, right, lefts, rights, alive, count):
    for i in range(count):
        if alive[i] and (lefts[i] & ~left) == 0 and (rights[i] & ~right) == 0:
            return True
    return False


@nb.njit(cache=True)
def retire_supersets(left, right, lefts, rights, alive, count):
    retired = 0
    for i in range(count):
        if alive[i] and (left & ~lefts[i]) == 0 and (right & ~rights[i]) == 0:
            alive[i] = False
            retired += 1
    return retired


@dataclass(frozen=True)
class Inference:
    """A GSix inference over G: its rule, principal formula, and the active formulas of each premise as masks."""

    tag: RuleTag
    principal: int
    side: str
    active: tuple[tuple[np.uint64, np.uint64], ...]

    def conclusion_masks(self, left: np.ndarray, right: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        bit = np.uint64(1) << np.uint64(self.principal)
        return (left | bit, right) if self.side == LEFT else (left, right | bit)


class SequentStore:
    """Append-only arrays of derived sequents, with the provenance of each and an alive flag for the antichain."""

    def __init__(self, capacity: int = 1024):
        self.lefts = np.zeros(capacity, dtype=np.uint64)
        self.rights = np.zeros(capacity, dtype=np.uint64)
        self.alive = np.zeros(capacity, dtype=np.bool_)
        self.origins: list[tuple[int, int, int]] = []
        self.count = 0

    def _grow(self):
        capacity = 2 * len(self.lefts)
        for name in ("lefts", "rights", "alive"):
            old = getattr(self, name)
            new = np.zeros(capacity, dtype=old.dtype)
            new[: self.count] = old[: self.count]
            setattr(self, name, new)

    def subsumes(self, left: np.uint64, right: np.uint64) -> bool:
        return bool(is_subsumed(left, right, self.lefts, self.rights, self.alive, self.count))

    def add(self, left: np.uint64, right: np.uint64, origin: tuple[int, int, int]) -> int:
        retire_supersets(left, right, self.lefts, self.rights, self.alive, self.count)
        if self.count == len(self.lefts):
            self._grow()
        i = self.count
        self.lefts[i] = left
        self.rights[i] = right
        self.alive[i] = True
        self.origins.append(origin)
        self.count += 1
        return i

    def alive_ids(self) -> np.ndarray:
        return np.flatnonzero(self.alive[: self.count])


@dataclass
class SaturationResult:
    provable: bool
    iterations: int
    states: int
    formulas: list[Formula]
    goal: Sequent
    _store: SequentStore | None = field(default=None, repr=False)
    _inferences: list[Inference] = field(default_factory=list, repr=False)
    _goal_id: int = NO_PREMISE

    def proof(self) -> ProofTree | None:
        """Rebuilds a proof of the goal from the recorded inferences, or None when the goal is not provable."""
        if not self.provable or self._store is None:
            return None
        proofs: dict[int, ProofTree] = {}
        return weaken_to(self._proof_of(self._goal_id, proofs), self.goal)

    def _sequent(self, i: int) -> Sequent:
        return _decode(self._store.lefts[i], self._store.rights[i], self.formulas)

    def _proof_of(self, i: int, proofs: dict[int, ProofTree]) -> ProofTree:
        if i in proofs:
            return proofs[i]
        store = self._store
        kind, first, second = store.origins[i]
        if kind == NO_PREMISE:
            (f,) = self._sequent(i).left
            proofs[i] = axiom(f)
            return proofs[i]
        inference = self._inferences[kind]
        premise_ids = [first] if second == NO_PREMISE else [first, second]
        context_left = np.uint64(0)
        context_right = np.uint64(0)
        for p, (active_left, active_right) in zip(premise_ids, inference.active, strict=True):
            context_left |= store.lefts[p] & ~active_left
            context_right |= store.rights[p] & ~active_right
        context = _decode(context_left, context_right, self.formulas)
        children = []
        for p, (active_left, active_right) in zip(premise_ids, inference.active, strict=True):
            premise = _decode(context_left | active_left, context_right | active_right, self.formulas)
            children.append(weaken_to(self._proof_of(p, proofs), premise))
        proofs[i] = infer(inference.tag, self.formulas[inference.principal], context, tuple(children))
        return proofs[i]


def _mask(formulas, index: dict[Formula, int]) -> np.uint64:
    mask = np.uint64(0)
    for f in formulas:
        mask |= np.uint64(1) << np.uint64(index[f])
    return mask


def _decode(left: np.uint64, right: np.uint64, formulas: list[Formula]) -> Sequent:
    def members(mask: np.uint64) -> list[Formula]:
        return [f for i, f in enumerate(formulas) if (int(mask) >> i) & 1]

    return Sequent.of(members(left), members(right))


def inferences_within(formulas: list[Formula]) -> list[Inference]:
    """Every GSix inference whose principal and active formulas all lie in `formulas`."""
    index = {f: i for i, f in enumerate(formulas)}
    inferences = []
    for i, f in enumerate(formulas):
        for rule in GSIX_RULES:
            binding = rule.match(f)
            if binding is None:
                continue
            active = rule.active(binding)
            if all(g in index for left, right in active for g in left | right):
                masks = tuple((_mask(left, index), _mask(right, index)) for left, right in active)
                inferences.append(Inference(rule.tag, i, rule.side, masks))
    return inferences


def _touching(ids: np.ndarray, store: SequentStore, active: tuple[np.uint64, np.uint64]) -> np.ndarray:
    # A premise that shares no formula with the active formulas already weakens to the conclusion.
    touches = ((store.lefts[ids] & active[0]) | (store.rights[ids] & active[1])) != 0
    return ids[touches]


def _candidates(
    inference: Inference, k: int, delta: np.ndarray, everything: np.ndarray, store: SequentStore
) -> list[tuple[np.ndarray, ...]]:
    batches = []
    if len(inference.active) == 1:
        (active,) = inference.active
        ids = _touching(delta, store, active)
        left, right = inference.conclusion_masks(store.lefts[ids] & ~active[0], store.rights[ids] & ~active[1])
        batches.append((left, right, np.full(len(ids), k), ids, np.full(len(ids), NO_PREMISE)))
        return batches
    a1, a2 = inference.active
    for firsts, seconds in ((delta, everything), (everything, delta)):
        f = _touching(firsts, store, a1)
        s = _touching(seconds, store, a2)
        if not len(f) or not len(s):
            continue
        left = ((store.lefts[f] & ~a1[0])[:, None] | (store.lefts[s] & ~a2[0])[None, :]).ravel()
        right = ((store.rights[f] & ~a1[1])[:, None] | (store.rights[s] & ~a2[1])[None, :]).ravel()
        left, right = inference.conclusion_masks(left, right)
        first_ids = np.repeat(f, len(s))
        second_ids = np.tile(s, len(f))
        batches.append((left, right, np.full(len(left), k), first_ids, second_ids))
    return batches


def saturate(goal: Sequent, caps: Caps | None = None) -> SaturationResult:
    """
    Decides a sequent by saturation.

    Raises:
        ResourceExceeded: If G is larger than the gsub cap, or the round or state budget runs out.
    """
    caps = Caps.default() if caps is None else caps
    formulas = indexed_gsub(goal, caps.literal_gsub)
    if len(formulas) > caps.gsub_cap:
        raise ResourceExceeded(
            f"{len(formulas)} generalized subformulas in {goal}, the cap is {caps.gsub_cap}", "gsub_cap", caps.gsub_cap
        )
    index = {f: i for i, f in enumerate(formulas)}
    goal_left, goal_right = _mask(goal.left, index), _mask(goal.right, index)
    inferences = inferences_within(formulas)
    store = SequentStore()
    for i in range(len(formulas)):
        bit = np.uint64(1) << np.uint64(i)
        store.add(bit, bit, (NO_PREMISE, NO_PREMISE, NO_PREMISE))
    delta = store.alive_ids()
    iterations = 0

    def result(provable: bool, goal_id: int = NO_PREMISE) -> SaturationResult:
        log.debug(f"saturation on {goal}: provable={provable} after {iterations} rounds, {store.count} states")
        return SaturationResult(provable, iterations, store.count, formulas, goal, store, inferences, goal_id)

    while True:
        goal_id = _find_subsuming(goal_left, goal_right, store)
        if goal_id != NO_PREMISE:
            return result(True, goal_id)
        if not len(delta):
            return result(False)
        iterations += 1
        if iterations > caps.max_iterations:
            raise ResourceExceeded(
                f"saturation of {goal} ran {caps.max_iterations} rounds", "max_iterations", caps.max_iterations
            )

        everything = store.alive_ids()
        batches = [b for k, inf in enumerate(inferences) for b in _candidates(inf, k, delta, everything, store)]
        added = []
        if batches:
            left, right, kinds, firsts, seconds = (np.concatenate(column) for column in zip(*batches, strict=True))
            # Small sequents first, so fewer stored sequents are retired later in the round.
            order = np.argsort(np.bitwise_count(left) + np.bitwise_count(right), kind="stable")
            for j in order:
                lo, hi = left[j], right[j]
                if store.subsumes(lo, hi):
                    continue
                added.append(store.add(lo, hi, (int(kinds[j]), int(firsts[j]), int(seconds[j]))))
                if store.count > caps.max_states:
                    raise ResourceExceeded(
                        f"saturation of {goal} stored {store.count} sequents", "max_states", caps.max_states
                    )
        delta = np.array([i for i in added if store.alive[i]], dtype=np.int64)


def _find_subsuming(left: np.uint64, right: np.uint64, store: SequentStore) -> int:
    ids = store.alive_ids()
    hits = ids[((store.lefts[ids] & ~left) == 0) & ((store.rights[ids] & ~right) == 0)]
    return int(hits[0]) if len(hits) else NO_PREMISE
