from collections.abc import Iterator
from dataclasses import dataclass, field
from logging import getLogger
from typing import Any

from sixlogic.core.report import CheckFailure
from sixlogic.core.syntax import Formula, Sequent, parse_formula, parse_sequent, sort_formulas, to_text

from .gsub import gsub_sequent
from .rules import LEFT, RULES_BY_TAG, RuleTag

log = getLogger(__name__)


@dataclass(frozen=True)
class ProofTree:
    """
    A GSix derivation: the node's sequent, the rule concluding it, the principal formula and the upper derivations.

    For weakenings the principal formula is the added formula, for cuts it is the cut formula.
    """

    sequent: Sequent
    rule: RuleTag
    principal: Formula | None = None
    children: tuple["ProofTree", ...] = field(default_factory=tuple)

    @property
    def size(self) -> int:
        return 1 + sum(child.size for child in self.children)

    @property
    def height(self) -> int:
        return 1 + max((child.height for child in self.children), default=0)

    def sequents(self) -> Iterator[Sequent]:
        yield self.sequent
        for child in self.children:
            yield from child.sequents()

    def nodes(self) -> Iterator["ProofTree"]:
        yield self
        for child in self.children:
            yield from child.nodes()

    def uses_cut(self) -> bool:
        return any(node.rule == RuleTag.CUT for node in self.nodes())


# Builders


def axiom(f: Formula) -> ProofTree:
    return ProofTree(Sequent.of([f], [f]), RuleTag.AXIOM)


def weaken_left(t: ProofTree, f: Formula) -> ProofTree:
    return ProofTree(t.sequent.add_left(f), RuleTag.WEAKEN_LEFT, f, (t,))


def weaken_right(t: ProofTree, f: Formula) -> ProofTree:
    return ProofTree(t.sequent.add_right(f), RuleTag.WEAKEN_RIGHT, f, (t,))


def weaken_to(t: ProofTree, target: Sequent) -> ProofTree:
    """Extends `t` by one weakening per formula of `target` missing from its end sequent, left side first."""
    if not target.is_weakening_of(t.sequent):
        raise ValueError(f"{target} is not a weakening of {t.sequent}.")
    for f in sort_formulas(target.left - t.sequent.left):
        t = weaken_left(t, f)
    for f in sort_formulas(target.right - t.sequent.right):
        t = weaken_right(t, f)
    return t


def axiom_for(s: Sequent) -> ProofTree:
    """The proof of an axiomatic sequent: the axiom on its first common formula, then weakenings."""
    common = sort_formulas(s.left & s.right)
    if not common:
        raise ValueError(f"{s} has no formula on both sides.")
    return weaken_to(axiom(common[0]), s)


def cut(f: Formula, left: ProofTree, right: ProofTree) -> ProofTree:
    """Cut on `f`: from Γ ⇒ Δ, f and f, Γ ⇒ Δ conclude Γ ⇒ Δ."""
    conclusion = Sequent(left.sequent.left, left.sequent.right - {f})
    return ProofTree(conclusion, RuleTag.CUT, f, (left, right))


def infer(tag: RuleTag, principal: Formula, context: Sequent, children: tuple[ProofTree, ...]) -> ProofTree:
    """The node concluding context plus `principal` on its rule's side."""
    rule = RULES_BY_TAG[tag]
    conclusion = context.add_left(principal) if rule.side == LEFT else context.add_right(principal)
    return ProofTree(conclusion, tag, principal, children)


# Checking


def _premise_shapes(context: Sequent, active: list[tuple[frozenset[Formula], frozenset[Formula]]]) -> str:
    return " | ".join(str(Sequent(context.left | left, context.right | right)) for left, right in active)


def _check_node(node: ProofTree, allow_cut: bool) -> tuple[str, str] | None:
    s = node.sequent
    children = node.children
    match node.rule:
        case RuleTag.AXIOM:
            if children:
                return "axiom has children", "no children"
            if len(s.left) != 1 or s.left != s.right:
                return f"{s} is not an axiom", "α ⇒ α"
            return None
        case RuleTag.WEAKEN_LEFT | RuleTag.WEAKEN_RIGHT:
            if len(children) != 1 or node.principal is None:
                return "weakening needs one child and the added formula", "1 child"
            f = node.principal
            side, other = (s.left, s.right) if node.rule == RuleTag.WEAKEN_LEFT else (s.right, s.left)
            child = children[0].sequent
            child_side, child_other = (
                (child.left, child.right) if node.rule == RuleTag.WEAKEN_LEFT else (child.right, child.left)
            )
            if f not in side or f in child_side or child_side != side - {f} or child_other != other:
                return f"{s} does not add {f} to {child}", f"{child} plus {f}"
            return None
        case RuleTag.CUT:
            if not allow_cut:
                return "cut is disabled", "a cut-free proof"
            if len(children) != 2 or node.principal is None:
                return "cut needs two children and a cut formula", "2 children"
            f = node.principal
            expected = (s.add_right(f), s.add_left(f))
            if (children[0].sequent, children[1].sequent) != expected:
                return "cut premises do not match", f"{expected[0]} | {expected[1]}"
            return None
    rule = RULES_BY_TAG.get(node.rule)
    if rule is None:
        return f"unknown rule {node.rule!r}", ""
    f = node.principal
    if f is None:
        return f"{rule.tag} has no principal formula", ""
    if f not in (s.left if rule.side == LEFT else s.right):
        return f"principal formula {f} is not on the {rule.side} of {s}", ""
    binding = rule.match(f)
    if binding is None:
        return f"{f} is not an instance of {to_text(rule.pattern)}", to_text(rule.pattern)
    context = Sequent(s.left - {f}, s.right) if rule.side == LEFT else Sequent(s.left, s.right - {f})
    active = rule.active(binding)
    if len(children) != len(active):
        return f"{rule.tag} needs {len(active)} premises, has {len(children)}", _premise_shapes(context, active)
    for child, (left, right) in zip(children, active, strict=True):
        # The principal formula may stay in the premise context.
        allowed = (Sequent(context.left | left, context.right | right), Sequent(s.left | left, s.right | right))
        if child.sequent not in allowed:
            return f"premise {child.sequent} does not match {rule.tag}", _premise_shapes(context, active)
    return None


def find_failure(t: ProofTree, allow_cut: bool = False) -> CheckFailure | None:
    """Returns the first node (depth first, parent before children) that is not a correct inference, or None."""
    stack: list[tuple[ProofTree, tuple[int, ...]]] = [(t, ())]
    while stack:
        node, path = stack.pop()
        problem = _check_node(node, allow_cut)
        if problem is not None:
            return CheckFailure(path, *problem)
        stack.extend((child, path + (i,)) for i, child in reversed(list(enumerate(node.children))))
    return None


def check_proof(t: ProofTree, allow_cut: bool = False) -> bool:
    failure = find_failure(t, allow_cut)
    if failure is not None:
        log.info(f"proof rejected at {failure}")
    return failure is None


def within_gsub(t: ProofTree, literal: bool = False) -> bool:
    """True iff every sequent of the proof lies within the generalized subformulas of the end sequent."""
    closure = gsub_sequent(t.sequent, literal)
    return all(s.formulas() <= closure for s in t.sequents())


# Formats


def format_proof(t: ProofTree, unicode: bool = True) -> str:
    lines = []
    stack = [(t, 0)]
    while stack:
        node, indent = stack.pop()
        principal = f" on {to_text(node.principal, unicode)}" if node.principal is not None else ""
        lines.append(f"{'  ' * indent}{node.sequent.to_text(unicode)}    {node.rule}{principal}")
        stack.extend((child, indent + 1) for child in reversed(node.children))
    return "\n".join(lines)


def proof_to_json(t: ProofTree) -> dict[str, Any]:
    return {
        "sequent": str(t.sequent),
        "rule": str(t.rule),
        "principal": None if t.principal is None else str(t.principal),
        "children": [proof_to_json(child) for child in t.children],
    }


def proof_from_json(data: dict[str, Any]) -> ProofTree:
    """
    Raises:
        ValueError: If a rule label is unknown.
        FormulaSyntaxError: If a sequent or formula does not parse.
    """
    principal = data.get("principal")
    return ProofTree(
        parse_sequent(data["sequent"]),
        RuleTag(data["rule"]),
        None if principal is None else parse_formula(principal),
        tuple(proof_from_json(child) for child in data.get("children", [])),
    )
