import itertools
import math
from collections import Counter
from collections.abc import Hashable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from logging import getLogger
from typing import Any

import numpy as np

from sixlogic.core.algebra import FiniteMatrix, evaluate_indices, m6
from sixlogic.core.config import (
    DEFAULT_PARTITION_CAP,
    METAVARIABLES,
    IndexMismatchError,
    ResourceExceeded,
    TruthValue,
    WitnessError,
)
from sixlogic.core.syntax import (
    CONNECTIVES,
    Formula,
    Meta,
    NSequent,
    Sequent,
    Var,
    build,
    parse_formula,
    parse_sequent,
    sort_formulas,
    substitute,
    to_text,
    variables,
)

from .rulealg import SchematicRule
from .sfcalc import SignedRule, generate_sf

log = getLogger(__name__)

WITNESS_VARIABLE = "p"


@dataclass(frozen=True)
class WitnessTable:
    """
    One-variable formulas characterising each truth value of a matrix.

    x is the value tᵢ exactly when every alphas[i] formula is undesignated at x and every betas[i] formula is
    designated at x.

    Attributes:
        values: The truth values, in matrix order.
        alphas: Per value, the formulas that must be undesignated.
        betas: Per value, the formulas that must be designated.
        variable: The single variable the witness formulas are written in.
    """

    values: tuple[Hashable, ...]
    alphas: tuple[tuple[Formula, ...], ...]
    betas: tuple[tuple[Formula, ...], ...]
    variable: str = WITNESS_VARIABLE

    @classmethod
    def from_rows(
        cls, rows: Mapping[Hashable, tuple[Sequence[str], Sequence[str]]], variable: str = WITNESS_VARIABLE
    ) -> "WitnessTable":
        values = tuple(rows)
        alphas = tuple(tuple(parse_formula(f) for f in rows[v][0]) for v in values)
        betas = tuple(tuple(parse_formula(f) for f in rows[v][1]) for v in values)
        return cls(values, alphas, betas, variable)

    def row(self, value: Hashable) -> tuple[tuple[Formula, ...], tuple[Formula, ...]]:
        i = self.values.index(value)
        return self.alphas[i], self.betas[i]

    def slot_count(self, value: Hashable) -> int:
        alphas, betas = self.row(value)
        return len(alphas) + len(betas)

    def to_json(self) -> dict[str, Any]:
        return {
            "variable": self.variable,
            "rows": [
                {"value": str(v), "alphas": [str(f) for f in a], "betas": [str(f) for f in b]}
                for v, a, b in zip(self.values, self.alphas, self.betas, strict=True)
            ],
        }

    def to_text(self) -> str:
        lines = []
        for v, a, b in zip(self.values, self.alphas, self.betas, strict=True):
            alphas = ", ".join(to_text(f, unicode=True) for f in a)
            betas = ", ".join(to_text(f, unicode=True) for f in b)
            lines.append(f"{str(v):>4}  alpha: [{alphas}]  beta: [{betas}]")
        return "\n".join(lines)


def six_witnesses() -> WitnessTable:
    return WitnessTable.from_rows(
        {
            TruthValue.ZERO: (["p", "#p"], ["~p"]),
            TruthValue.ONE_THIRD: (["p"], ["~p", "#p"]),
            TruthValue.N: (["p", "~p"], []),
            TruthValue.B: ([], ["p", "~p"]),
            TruthValue.TWO_THIRDS: (["~p"], ["p", "#~p"]),
            TruthValue.ONE: (["~p", "#~p"], ["p"]),
        }
    )


def boolean_witnesses() -> WitnessTable:
    return WitnessTable.from_rows({"0": (["p"], []), "1": ([], ["p"])})


def find_witness_failure(m: FiniteMatrix, w: WitnessTable) -> tuple[Hashable, str] | None:
    """
    Checks a witness table against a matrix value by value.

    Witnesses are one-variable formulas, so checking every value of that variable is exhaustive.

    Returns:
        The first violated (value, condition) pair, or None when the table is valid.
    """
    if tuple(w.values) != tuple(m.values):
        return (w.values[0] if w.values else "", "values")
    var = Var(w.variable)
    for value, alphas, betas in zip(w.values, w.alphas, w.betas, strict=True):
        if any(not variables(f) <= {w.variable} for f in alphas + betas):
            return value, "one-variable"
        if m.is_designated(value):
            if not betas or betas[0] != var:
                return value, "(i)"
        elif not alphas or alphas[0] != var:
            return value, "(i)"
    columns = {w.variable: np.arange(m.size, dtype=np.int8)}
    designated = m.designated_mask
    for i, (value, alphas, betas) in enumerate(zip(w.values, w.alphas, w.betas, strict=True)):
        characterised = np.ones(m.size, dtype=bool)
        for f in alphas:
            characterised &= ~designated[evaluate_indices(f, columns, m)]
        for f in betas:
            characterised &= designated[evaluate_indices(f, columns, m)]
        if not np.array_equal(characterised, np.arange(m.size) == i):
            return value, "(ii)"
    return None


def validate_witnesses(m: FiniteMatrix, w: WitnessTable) -> bool:
    failure = find_witness_failure(m, w)
    if failure is not None:
        log.info(f"witness table rejected: condition {failure[1]} fails at {failure[0]}")
    return failure is None


def require_witnesses(m: FiniteMatrix, w: WitnessTable):
    failure = find_witness_failure(m, w)
    if failure is not None:
        raise WitnessError(f"Witness table is invalid for {m.name or 'the matrix'}: {failure[1]} fails at {failure[0]}")


# Partitions


@dataclass(frozen=True)
class Partition:
    """
    Per value, the split of that value's cell into witness slots: the alpha slots first, then the beta slots.
    """

    slots: tuple[tuple[frozenset[Formula], ...], ...]


def _check_values(ns: NSequent, w: WitnessTable):
    if tuple(ns.values) != tuple(w.values):
        raise IndexMismatchError(f"n-sequent values {ns.values} differ from witness values {w.values}")


def partition_count(ns: NSequent, w: WitnessTable) -> int:
    _check_values(ns, w)
    return math.prod(w.slot_count(v) ** len(cell) for v, cell in zip(ns.values, ns.cells, strict=True))


def _cell_splits(cell: frozenset[Formula], slots: int) -> list[tuple[frozenset[Formula], ...]]:
    formulas = sort_formulas(cell)
    splits = []
    for choice in itertools.product(range(slots), repeat=len(formulas)):
        buckets: list[set[Formula]] = [set() for _ in range(slots)]
        for f, slot in zip(formulas, choice, strict=True):
            buckets[slot].add(f)
        splits.append(tuple(frozenset(bucket) for bucket in buckets))
    return splits


def iter_partitions(ns: NSequent, w: WitnessTable) -> Iterator[Partition]:
    per_value = [_cell_splits(cell, w.slot_count(v)) for v, cell in zip(ns.values, ns.cells, strict=True)]
    for slots in itertools.product(*per_value):
        yield Partition(tuple(slots))


def partitions(ns: NSequent, w: WitnessTable, cap: int = DEFAULT_PARTITION_CAP) -> list[Partition]:
    """
    Every assignment of each formula of each cell to one of that value's witness slots.

    Raises:
        ResourceExceeded: If there are more than `cap` partitions.
    """
    count = partition_count(ns, w)
    if count > cap:
        raise ResourceExceeded(f"{count} partitions of {ns}", "partition_cap", cap)
    return list(iter_partitions(ns, w))


def sequent_of_partition(ns: NSequent, pi: Partition, w: WitnessTable) -> Sequent:
    left: set[Formula] = set()
    right: set[Formula] = set()
    for value, slots in zip(ns.values, pi.slots, strict=True):
        alphas, betas = w.row(value)
        for slot, (witness, bucket) in enumerate(zip(alphas + betas, slots, strict=True)):
            side = left if slot < len(alphas) else right
            side.update(substitute(witness, w.variable, f) for f in bucket)
    return Sequent.of(left, right)


def two_of_list(ns: NSequent, w: WitnessTable, cap: int = DEFAULT_PARTITION_CAP) -> list[Sequent]:
    """Σ_π for every partition π, in partition order and with repetitions."""
    return [sequent_of_partition(ns, pi, w) for pi in partitions(ns, w, cap)]


def two_of(ns: NSequent, w: WitnessTable, cap: int = DEFAULT_PARTITION_CAP) -> set[Sequent]:
    return set(two_of_list(ns, w, cap))


def _unique(sequents: Sequence[Sequent]) -> list[Sequent]:
    return list(dict.fromkeys(sequents))


def translate_axiom(w: WitnessTable, cap: int = DEFAULT_PARTITION_CAP) -> list[Sequent]:
    """TWO of the axiom 𝒯 : A, one schema per partition."""
    return two_of_list(NSequent.axiom(Meta(METAVARIABLES[0]), w.values), w, cap)


# Calculus translation


def translate_rule(rule: SignedRule, w: WitnessTable) -> list[SchematicRule]:
    """
    TWO(S) / Σ′ for the context-free skeleton S / R of a signed rule, one rule per Σ′ ∈ TWO(R).

    Rules are numbered from 1 in partition order of the conclusion.
    """
    metas = [Meta(name) for name in METAVARIABLES[: rule.arity]]
    premises: set[Sequent] = set()
    for value, meta in zip(rule.inputs, metas, strict=True):
        premises |= two_of(NSequent.from_signed([(value, meta)], w.values), w)
    principal = build(rule.connective, metas)
    conclusions = _unique(two_of_list(NSequent.from_signed([(rule.output, principal)], w.values), w))
    return [
        SchematicRule(frozenset(premises), conclusion, f"{rule.name}_{k}", rule.name)
        for k, conclusion in enumerate(conclusions, start=1)
    ]


def translate_calculus(
    rules: Sequence[SignedRule], w: WitnessTable, m: FiniteMatrix | None = None
) -> list[SchematicRule]:
    """
    The two-sided calculus TWO(𝒞) of an n-sequent calculus.

    Raises:
        WitnessError: If `m` is given and `w` is not a valid witness table for it.
    """
    if m is not None:
        require_witnesses(m, w)
    translated = [r for rule in rules for r in translate_rule(rule, w)]
    log.debug(f"translated {len(rules)} signed rules into {len(translated)} two-sided rules")
    return translated


def default_translation() -> list[SchematicRule]:
    """The 230 rules of TWO(SF) for the six-valued matrix."""
    m = m6()
    return translate_calculus(generate_sf(m), six_witnesses(), m)


_ASCII_SYMBOLS = {cls.unicode_symbol: symbol for symbol, cls in CONNECTIVES.items()}


def _source_connective(r: SchematicRule) -> str:
    # Source names look like "(∨_n,b)".
    return _ASCII_SYMBOLS[r.source[1 : r.source.index("_")]]


def translated_rule_counts(rules: Sequence[SchematicRule]) -> dict[str, int]:
    """Number of translated rules per connective, keyed by its ASCII symbol."""
    return dict(Counter(_source_connective(r) for r in rules))


def lookup_translated(
    rules: Sequence[SchematicRule], symbol: str, inputs: Sequence[Hashable], conclusion: Sequent | str
) -> SchematicRule:
    """
    Finds the translation of the signed rule for `symbol` at `inputs` whose conclusion is `conclusion`.

    Raises:
        KeyError: If there is no such rule.
    """
    if isinstance(conclusion, str):
        conclusion = parse_sequent(conclusion, schematic=True)
    source = SignedRule(symbol, tuple(inputs), None).name
    for r in rules:
        if r.source == source and r.conclusion == conclusion:
            return r
    raise KeyError(f"No translated rule {source} with conclusion {conclusion}.")
