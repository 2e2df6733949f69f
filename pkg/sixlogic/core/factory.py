from collections.abc import Hashable, Sequence

import numpy as np

from .config import T6
from .syntax import And, Formula, Nabla, Neg, NSequent, Or, Sequent, Var

DEFAULT_VARIABLES = ("p", "q", "r")
DEFAULT_MAX_DEPTH = 3
DEFAULT_LEAF_PROBABILITY = 0.3


class FormulaFactory:
    def __init__(
        self,
        variables: Sequence[str] = DEFAULT_VARIABLES,
        max_depth: int = DEFAULT_MAX_DEPTH,
        leaf_probability: float = DEFAULT_LEAF_PROBABILITY,
        seed: int | None = None,
    ):
        """
        Args:
            variables: The variable names formulas are built from.
            max_depth: Maximum nesting depth; a variable has depth 0.
            leaf_probability: Probability of stopping early at a variable below the maximum depth.
            seed: A random seed i.e. a way to make the randomness repeatable.
        """
        assert variables, "At least one variable is needed."
        assert 0 <= leaf_probability <= 1, f"Invalid leaf probability: {leaf_probability}"
        self.variables = tuple(variables)
        self.max_depth = max_depth
        self.leaf_probability = leaf_probability
        self.rng = np.random.default_rng(seed)

    def formula(self, max_depth: int | None = None) -> Formula:
        max_depth = self.max_depth if max_depth is None else max_depth
        if max_depth <= 0 or self.rng.random() < self.leaf_probability:
            return Var(self.variables[self.rng.integers(len(self.variables))])
        match int(self.rng.integers(4)):
            case 0:
                return Neg(self.formula(max_depth - 1))
            case 1:
                return Nabla(self.formula(max_depth - 1))
            case 2:
                return And(self.formula(max_depth - 1), self.formula(max_depth - 1))
            case _:
                return Or(self.formula(max_depth - 1), self.formula(max_depth - 1))

    def formulas(self, count: int, max_depth: int | None = None) -> list[Formula]:
        return [self.formula(max_depth) for _ in range(count)]

    def sequent(self, max_per_side: int = 3, max_depth: int | None = None) -> Sequent:
        left = self.formulas(int(self.rng.integers(max_per_side + 1)), max_depth)
        right = self.formulas(int(self.rng.integers(max_per_side + 1)), max_depth)
        return Sequent.of(left, right)

    def nsequent(
        self, max_per_cell: int = 2, max_depth: int | None = None, values: Sequence[Hashable] = T6
    ) -> NSequent:
        cells = tuple(
            frozenset(self.formulas(int(self.rng.integers(max_per_cell + 1)), max_depth)) for _ in values
        )
        return NSequent(tuple(values), cells)
