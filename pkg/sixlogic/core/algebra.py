from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import TypeAlias

import numpy as np

from .config import DEFAULT_VAR_CAP, T6, EvaluationError, IndexMismatchError, ResourceExceeded, TruthValue
from .syntax import ARITY, Formula, Meta, NSequent, Sequent, Var, variables

# Type aliases

Assignment: TypeAlias = dict[str, Hashable]


@dataclass(frozen=True, eq=False)
class FiniteMatrix:
    """
    A logical matrix ⟨values, designated, tables⟩.

    Tables are stored over value indices: the table of a k-ary connective is an integer array of shape (n,)*k
    whose entries index into `values`.

    Attributes:
        values: The truth values, in a fixed order.
        designated: The designated values.
        tables: Connective symbol -> operation table over value indices.
        order: Optional partial order as a boolean matrix, order[i, j] iff values[i] ≤ values[j].
        name: Label used in reports.
    """

    values: tuple[Hashable, ...]
    designated: frozenset[Hashable]
    tables: Mapping[str, np.ndarray]
    order: np.ndarray | None = None
    name: str = ""

    @cached_property
    def _index(self) -> dict[Hashable, int]:
        return {value: i for i, value in enumerate(self.values)}

    @cached_property
    def designated_mask(self) -> np.ndarray:
        return np.array([value in self.designated for value in self.values], dtype=bool)

    @property
    def size(self) -> int:
        return len(self.values)

    def index(self, value: Hashable) -> int:
        try:
            return self._index[value]
        except KeyError:
            raise ValueError(f"{value!r} is not a value of matrix {self.name or '?'}.") from None

    def is_designated(self, value: Hashable) -> bool:
        return value in self.designated

    def apply(self, symbol: str, *args: Hashable) -> Hashable:
        table = self.table(symbol)
        return self.values[int(table[tuple(self.index(a) for a in args)])]

    def table(self, symbol: str) -> np.ndarray:
        try:
            return self.tables[symbol]
        except KeyError:
            raise EvaluationError(f"connective {symbol!r} has no table in matrix {self.name or '?'}") from None

    def leq(self, x: Hashable, y: Hashable) -> bool:
        if self.order is None:
            raise ValueError(f"Matrix {self.name or '?'} has no order attached.")
        return bool(self.order[self.index(x), self.index(y)])

    def inf(self, x: Hashable, y: Hashable) -> Hashable:
        return self.apply("&", x, y)

    def sup(self, x: Hashable, y: Hashable) -> Hashable:
        return self.apply("|", x, y)

    @cached_property
    def top(self) -> Hashable:
        return self.values[self._extreme(axis=0)]

    @cached_property
    def bottom(self) -> Hashable:
        return self.values[self._extreme(axis=1)]

    def _extreme(self, axis: int) -> int:
        if self.order is None:
            raise ValueError(f"Matrix {self.name or '?'} has no order attached.")
        candidates = np.flatnonzero(self.order.all(axis=axis))
        if len(candidates) != 1:
            raise ValueError(f"Matrix {self.name or '?'} has no unique extreme element.")
        return int(candidates[0])

    def check(self):
        """
        Raises:
            ValueError: If the designated set is not a nonempty proper subset or a table is malformed.
        """
        n = self.size
        if len(set(self.values)) != n:
            raise ValueError("Matrix values must be distinct.")
        if not self.designated or not self.designated < set(self.values):
            raise ValueError("Designated values must form a nonempty proper subset of the values.")
        for symbol, table in self.tables.items():
            arity = ARITY.get(symbol)
            if arity is None:
                raise ValueError(f"Unknown connective {symbol!r}.")
            if table.shape != (n,) * arity:
                raise ValueError(f"Table of {symbol!r} has shape {table.shape}, expected {(n,) * arity}.")
            if table.min() < 0 or table.max() >= n:
                raise ValueError(f"Table of {symbol!r} has entries outside the values.")
        if self.order is not None and self.order.shape != (n, n):
            raise ValueError(f"Order has shape {self.order.shape}, expected {(n, n)}.")


# Matrix builders


def lattice_tables(leq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Computes the meet and join tables of a finite lattice given as a ≤ matrix.
    """
    n = leq.shape[0]
    meet = np.zeros((n, n), dtype=np.int8)
    join = np.zeros((n, n), dtype=np.int8)
    for x in range(n):
        for y in range(n):
            lower = np.flatnonzero(leq[:, x] & leq[:, y])
            upper = np.flatnonzero(leq[x, :] & leq[y, :])
            glb = [z for z in lower if leq[lower, z].all()]
            lub = [z for z in upper if leq[z, upper].all()]
            if len(glb) != 1 or len(lub) != 1:
                raise ValueError("The order is not a lattice.")
            meet[x, y], join[x, y] = glb[0], lub[0]
    return meet, join


def order_from_covers(n: int, covers: Iterable[tuple[int, int]]) -> np.ndarray:
    """Reflexive-transitive closure of a covering relation over range(n)."""
    leq = np.eye(n, dtype=bool)
    for lower, upper in covers:
        leq[lower, upper] = True
    for k in range(n):
        leq |= leq[:, [k]] & leq[[k], :]
    return leq


def unary_table(values: Sequence[Hashable], mapping: Mapping[Hashable, Hashable]) -> np.ndarray:
    return np.array([values.index(mapping[value]) for value in values], dtype=np.int8)


@lru_cache(maxsize=1)
def m6() -> FiniteMatrix:
    """
    The six-element matrix of Six: the involutive Stone algebra 𝕊₆ with designated filter [b).
    """
    v = T6
    zero, third, n, b, two_thirds, one = range(6)
    covers = [(zero, third), (third, n), (third, b), (n, two_thirds), (b, two_thirds), (two_thirds, one)]
    leq = order_from_covers(6, covers)
    meet, join = lattice_tables(leq)
    neg = unary_table(
        v,
        {
            TruthValue.ZERO: TruthValue.ONE,
            TruthValue.ONE_THIRD: TruthValue.TWO_THIRDS,
            TruthValue.N: TruthValue.N,
            TruthValue.B: TruthValue.B,
            TruthValue.TWO_THIRDS: TruthValue.ONE_THIRD,
            TruthValue.ONE: TruthValue.ZERO,
        },
    )
    nabla = unary_table(v, {value: TruthValue.ZERO if value == TruthValue.ZERO else TruthValue.ONE for value in v})
    matrix = FiniteMatrix(
        values=v,
        designated=frozenset({TruthValue.B, TruthValue.TWO_THIRDS, TruthValue.ONE}),
        tables={"|": join, "&": meet, "~": neg, "#": nabla},
        order=leq,
        name="m6",
    )
    matrix.check()
    return matrix


def boolean_matrix(connectives: Sequence[str] = ("|", "&", "~")) -> FiniteMatrix:
    """Two-valued Boolean matrix over values '0' < '1' with '1' designated."""
    v = ("0", "1")
    leq = order_from_covers(2, [(0, 1)])
    meet, join = lattice_tables(leq)
    available = {"|": join, "&": meet, "~": np.array([1, 0], dtype=np.int8)}
    matrix = FiniteMatrix(v, frozenset({"1"}), {c: available[c] for c in connectives}, leq, name="boolean")
    matrix.check()
    return matrix


def lukasiewicz_matrix(n: int) -> FiniteMatrix:
    """
    The n-valued chain 0 < 1/(n−1) < … < 1 with ¬x = 1−x, min and max, and only 1 designated.
    """
    if n < 2:
        raise ValueError(f"A Łukasiewicz chain needs at least two values. Received n={n}.")
    v = tuple("0" if i == 0 else "1" if i == n - 1 else f"{i}/{n - 1}" for i in range(n))
    leq = np.triu(np.ones((n, n), dtype=bool))
    meet, join = lattice_tables(leq)
    neg = np.arange(n - 1, -1, -1, dtype=np.int8)
    matrix = FiniteMatrix(v, frozenset({"1"}), {"|": join, "&": meet, "~": neg}, leq, name=f"L{n}")
    matrix.check()
    return matrix


# Evaluation


def assignment_grid(names: Sequence[str], m: FiniteMatrix, var_cap: int = DEFAULT_VAR_CAP) -> dict[str, np.ndarray]:
    """
    Enumerates every assignment of the variables `names` as one index column per variable.

    Rows are in lexicographic order with the first name varying slowest.

    Raises:
        ResourceExceeded: If there are more than `var_cap` variables.
    """
    if len(names) > var_cap:
        raise ResourceExceeded(
            f"{len(names)} variables exceed the exhaustive-enumeration cap of {var_cap}", "var_cap", var_cap
        )
    if not names:
        return {}
    grid = np.indices((m.size,) * len(names), dtype=np.int8).reshape(len(names), -1)
    return dict(zip(names, grid, strict=True))


def evaluate_indices(f: Formula, columns: Mapping[str, np.ndarray], m: FiniteMatrix) -> np.ndarray:
    """
    Evaluates a formula over many assignments at once.

    Args:
        f: The formula.
        columns: Variable (or schema variable) name -> array of value indices, one entry per assignment.
        m: The matrix.

    Returns:
        Array of value indices, one per assignment.

    Raises:
        EvaluationError: If a variable is missing or a connective has no table.
    """
    cache: dict[Formula, np.ndarray] = {}

    def go(g: Formula) -> np.ndarray:
        if g in cache:
            return cache[g]
        if isinstance(g, Var | Meta):
            if g.name not in columns:
                raise EvaluationError(f"variable {g.name!r} is not assigned")
            result = np.asarray(columns[g.name])
        else:
            table = m.table(g.symbol)
            args = [go(child) for child in g.children]
            result = table[tuple(np.broadcast_arrays(*args))]
        cache[g] = result
        return result

    return go(f)


def evaluate(f: Formula, a: Mapping[str, Hashable], m: FiniteMatrix | None = None) -> Hashable:
    """Homomorphic extension of the assignment `a` to the formula `f`."""
    m = m6() if m is None else m
    missing = variables(f) - set(a)
    if missing:
        raise EvaluationError(f"variables {sorted(missing)} are not assigned")
    columns = {name: np.array([m.index(a[name])], dtype=np.int8) for name in variables(f)}
    return m.values[int(evaluate_indices(f, columns, m)[0])]


def truth_table(
    f: Formula, m: FiniteMatrix | None = None, var_cap: int = DEFAULT_VAR_CAP
) -> list[tuple[Assignment, Hashable]]:
    m = m6() if m is None else m
    names = sorted(variables(f))
    columns = assignment_grid(names, m, var_cap)
    rows = _row_count(columns)
    result = evaluate_indices(f, columns, m)
    return [(_assignment_at(columns, m, r), m.values[int(result[r])]) for r in range(rows)]


def _row_count(columns: Mapping[str, np.ndarray]) -> int:
    return len(next(iter(columns.values()))) if columns else 1


def _assignment_at(columns: Mapping[str, np.ndarray], m: FiniteMatrix, row: int) -> Assignment:
    return {name: m.values[int(column[row])] for name, column in columns.items()}


# Oracles


def _sequent_satisfied(s: Sequent, m: FiniteMatrix, var_cap: int) -> tuple[dict[str, np.ndarray], np.ndarray]:
    columns = assignment_grid(sorted(s.variables()), m, var_cap)
    rows = _row_count(columns)
    designated = m.designated_mask
    satisfied = np.zeros(rows, dtype=bool)
    for f in s.left:
        satisfied |= ~designated[evaluate_indices(f, columns, m)]
    for f in s.right:
        satisfied |= designated[evaluate_indices(f, columns, m)]
    return columns, satisfied


def sequent_valid(s: Sequent, m: FiniteMatrix | None = None, var_cap: int = DEFAULT_VAR_CAP) -> bool:
    """
    True iff every assignment makes some antecedent formula undesignated or some succedent formula designated.
    """
    m = m6() if m is None else m
    _, satisfied = _sequent_satisfied(s, m, var_cap)
    return bool(satisfied.all())


def counterexample(s: Sequent, m: FiniteMatrix | None = None, var_cap: int = DEFAULT_VAR_CAP) -> Assignment | None:
    """The first falsifying assignment in lexicographic order, or None if the sequent is valid."""
    m = m6() if m is None else m
    columns, satisfied = _sequent_satisfied(s, m, var_cap)
    failing = np.flatnonzero(~satisfied)
    return _assignment_at(columns, m, int(failing[0])) if len(failing) else None


def _nsequent_satisfied(ns: NSequent, m: FiniteMatrix, var_cap: int) -> tuple[dict[str, np.ndarray], np.ndarray]:
    if tuple(ns.values) != tuple(m.values):
        raise IndexMismatchError(f"n-sequent indexed by {list(ns.values)} but matrix has values {list(m.values)}")
    columns = assignment_grid(sorted(ns.variables()), m, var_cap)
    rows = _row_count(columns)
    satisfied = np.zeros(rows, dtype=bool)
    for i, cell in enumerate(ns.cells):
        for f in cell:
            satisfied |= evaluate_indices(f, columns, m) == i
    return columns, satisfied


def nsequent_valid(ns: NSequent, m: FiniteMatrix | None = None, var_cap: int = DEFAULT_VAR_CAP) -> bool:
    """True iff every assignment gives some formula of some cell exactly the value of that cell."""
    m = m6() if m is None else m
    _, satisfied = _nsequent_satisfied(ns, m, var_cap)
    return bool(satisfied.all())


def nsequent_counterexample(
    ns: NSequent, m: FiniteMatrix | None = None, var_cap: int = DEFAULT_VAR_CAP
) -> Assignment | None:
    m = m6() if m is None else m
    columns, satisfied = _nsequent_satisfied(ns, m, var_cap)
    failing = np.flatnonzero(~satisfied)
    return _assignment_at(columns, m, int(failing[0])) if len(failing) else None


def degree_entails(
    premises: Sequence[Formula], conclusion: Formula, m: FiniteMatrix | None = None, var_cap: int = DEFAULT_VAR_CAP
) -> bool:
    """
    Degree-preserving consequence: the meet of the premises lies below the conclusion under every assignment.

    Raises:
        ValueError: If `premises` is empty; theoremhood is decided by `is_theorem`.
    """
    if not premises:
        raise ValueError("degree_entails needs at least one premise; use is_theorem for theoremhood.")
    m = m6() if m is None else m
    if m.order is None:
        raise ValueError(f"Matrix {m.name or '?'} has no order attached.")
    names = sorted(set().union(*(variables(f) for f in premises), variables(conclusion)))
    columns = assignment_grid(names, m, var_cap)
    meet = m.table("&")
    lower = evaluate_indices(premises[0], columns, m)
    for f in premises[1:]:
        lower = meet[lower, evaluate_indices(f, columns, m)]
    return bool(m.order[lower, evaluate_indices(conclusion, columns, m)].all())


def matrix_entails(
    premises: Sequence[Formula], conclusion: Formula, m: FiniteMatrix | None = None, var_cap: int = DEFAULT_VAR_CAP
) -> bool:
    """Matrix consequence: every assignment designating all premises designates the conclusion."""
    return sequent_valid(Sequent.of(premises, [conclusion]), m, var_cap)


def is_theorem(f: Formula, m: FiniteMatrix | None = None, var_cap: int = DEFAULT_VAR_CAP) -> bool:
    """True iff `f` takes the top value under every assignment."""
    m = m6() if m is None else m
    columns = assignment_grid(sorted(variables(f)), m, var_cap)
    values = evaluate_indices(f, columns, m)
    return bool((values == m.index(m.top)).all())


# Algebraic laws, checked exhaustively over value indices


def check_lattice_laws(m: FiniteMatrix) -> list[str]:
    meet, join = m.table("&"), m.table("|")
    x, y, z = np.indices((m.size,) * 3)
    laws = {
        "meet-commutative": meet[x, y] == meet[y, x],
        "join-commutative": join[x, y] == join[y, x],
        "meet-associative": meet[meet[x, y], z] == meet[x, meet[y, z]],
        "join-associative": join[join[x, y], z] == join[x, join[y, z]],
        "absorption-meet": meet[x, join[x, y]] == x,
        "absorption-join": join[x, meet[x, y]] == x,
        "distributive": meet[x, join[y, z]] == join[meet[x, y], meet[x, z]],
    }
    return [name for name, holds in laws.items() if not holds.all()]


def check_de_morgan(m: FiniteMatrix) -> list[str]:
    meet, join, neg = m.table("&"), m.table("|"), m.table("~")
    x, y = np.indices((m.size,) * 2)
    laws = {
        "involution": neg[neg[x]] == x,
        "de-morgan-meet": neg[meet[x, y]] == join[neg[x], neg[y]],
        "de-morgan-join": neg[join[x, y]] == meet[neg[x], neg[y]],
    }
    return [name for name, holds in laws.items() if not holds.all()]


def check_nabla_equations(m: FiniteMatrix) -> list[str]:
    meet, neg, nabla = m.table("&"), m.table("~"), m.table("#")
    bottom = m.index(m.bottom)
    x, y = np.indices((m.size,) * 2)
    laws = {
        "nabla-bottom": np.array(nabla[bottom] == bottom),
        "nabla-inflationary": meet[x, nabla[x]] == x,
        "nabla-meet": nabla[meet[x, y]] == meet[nabla[x], nabla[y]],
        "nabla-complement": meet[neg[nabla[x]], nabla[x]] == bottom,
    }
    return [name for name, holds in laws.items() if not holds.all()]
