from collections.abc import Iterable

from sixlogic.core.syntax import And, Formula, Nabla, Neg, Or, Sequent, sort_formulas


def _generated(f: Formula, literal: bool) -> list[Formula]:
    """The formulas whose generalized subformulas are included in those of `f` by one clause."""
    match f:
        case And(left=a, right=b) | Or(left=a, right=b):
            return [a, b]
        case Neg(sub=And(left=a, right=b) | Or(left=a, right=b)):
            return [Neg(a), Neg(b)]
        case Neg(sub=Neg(sub=a)):
            return [a]
        case Neg(sub=Nabla(sub=a)):
            return [Nabla(a)]
        case Nabla(sub=a):
            generated = [a, Neg(a)]
            match a:
                case And(left=b, right=c):
                    generated += [Nabla(b), Nabla(c)]
                case Or(left=b, right=c) if not literal:
                    generated += [Nabla(b), Nabla(c)]
                case Neg(sub=And(left=b, right=c)):
                    generated += [Nabla(Neg(b)), Nabla(Neg(c))]
                case Neg(sub=Or(left=b, right=c)) if not literal:
                    generated += [Nabla(Neg(b)), Nabla(Neg(c))]
                case Neg(sub=Neg(sub=b)):
                    generated.append(Nabla(b))
            return generated
    return []


def gsub(f: Formula, literal: bool = False) -> frozenset[Formula]:
    """
    The generalized subformulas of `f`: the least set containing `f` and closed under the generating clauses.

    Args:
        f: The formula.
        literal: Leave out the clauses for ∇(α∨β) and ∇¬(α∨β), which the ∇∨ rules of GSix need.
    """
    closure: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in closure:
            continue
        closure.add(g)
        stack.extend(_generated(g, literal))
    return frozenset(closure)


def gsub_formulas(formulas: Iterable[Formula], literal: bool = False) -> frozenset[Formula]:
    return frozenset().union(*(gsub(f, literal) for f in formulas))


def gsub_sequent(s: Sequent, literal: bool = False) -> frozenset[Formula]:
    return gsub_formulas(s.formulas(), literal)


def indexed_gsub(s: Sequent, literal: bool = False) -> list[Formula]:
    """gsub of a sequent in canonical order; saturation indexes its bitmasks by this list."""
    return sort_formulas(gsub_sequent(s, literal))
