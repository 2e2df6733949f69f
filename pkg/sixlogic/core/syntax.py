from collections.abc import Hashable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import ClassVar, TypeAlias

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from .config import T6, FormulaSyntaxError

# Binding power used by the printer; higher binds tighter.
PREC_OR = 1
PREC_AND = 2
PREC_UNARY = 3
PREC_ATOM = 4

GRAMMAR = r"""
    formula: disj
    sequent: [formula_list] _ARROW [formula_list]
    formula_list: disj ("," disj)*

    ?disj: conj
         | disj _OR conj              -> or_
    ?conj: unary
         | conj _AND unary            -> and_
    ?unary: _NEG unary                -> neg
          | _NABLA unary              -> nabla
          | atom
    ?atom: VAR                        -> var
         | META                       -> meta
         | "(" disj ")"

    _ARROW: "=>" | "⇒"
    _OR: "|" | "∨"
    _AND: "&" | "∧"
    _NEG: "~" | "¬"
    _NABLA: "#" | "∇"
    VAR: /[a-z][a-z0-9_]*/
    META: /[A-Z]/

    %import common.WS
    %ignore WS
"""


class Formula:
    """
    Base class of the formula tree over {∧, ∨, ¬, ∇}.

    Formulas are immutable and compared structurally; no normalization is ever applied.
    """

    symbol: ClassVar[str] = ""
    unicode_symbol: ClassVar[str] = ""
    precedence: ClassVar[int] = PREC_ATOM

    @property
    def children(self) -> tuple["Formula", ...]:
        return ()

    @cached_property
    def key(self) -> tuple:
        """Structural sort key; sets of formulas are always iterated in this order."""
        return (_TAGS[type(self)],) + tuple(child.key for child in self.children)

    def __str__(self) -> str:
        return to_text(self)

    def __lt__(self, other: "Formula") -> bool:
        return self.key < other.key


@dataclass(frozen=True, eq=True)
class Var(Formula):
    name: str

    @cached_property
    def key(self) -> tuple:
        return (0, self.name)


@dataclass(frozen=True, eq=True)
class Meta(Formula):
    """Schema variable of a context-free rule (A, B, ...)."""

    name: str

    @cached_property
    def key(self) -> tuple:
        return (1, self.name)


@dataclass(frozen=True, eq=True)
class Neg(Formula):
    sub: Formula
    symbol: ClassVar[str] = "~"
    unicode_symbol: ClassVar[str] = "¬"
    precedence: ClassVar[int] = PREC_UNARY

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.sub,)


@dataclass(frozen=True, eq=True)
class Nabla(Formula):
    sub: Formula
    symbol: ClassVar[str] = "#"
    unicode_symbol: ClassVar[str] = "∇"
    precedence: ClassVar[int] = PREC_UNARY

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.sub,)


@dataclass(frozen=True, eq=True)
class And(Formula):
    left: Formula
    right: Formula
    symbol: ClassVar[str] = "&"
    unicode_symbol: ClassVar[str] = "∧"
    precedence: ClassVar[int] = PREC_AND

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Or(Formula):
    left: Formula
    right: Formula
    symbol: ClassVar[str] = "|"
    unicode_symbol: ClassVar[str] = "∨"
    precedence: ClassVar[int] = PREC_OR

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


_TAGS: dict[type, int] = {Var: 0, Meta: 1, Neg: 2, Nabla: 3, And: 4, Or: 5}

# Connective symbol -> constructor, in the order tables are generated.
CONNECTIVES: dict[str, type[Formula]] = {"|": Or, "&": And, "~": Neg, "#": Nabla}
ARITY: dict[str, int] = {"|": 2, "&": 2, "~": 1, "#": 1}

Binding: TypeAlias = dict[str, Formula]


def build(symbol: str, children: Sequence[Formula]) -> Formula:
    """Rebuilds a compound formula from its connective symbol and children."""
    if symbol not in CONNECTIVES:
        raise ValueError(f"Unknown connective: {symbol!r}.")
    if len(children) != ARITY[symbol]:
        raise ValueError(f"Connective {symbol!r} takes {ARITY[symbol]} arguments, received {len(children)}.")
    return CONNECTIVES[symbol](*children)


# Printing


def to_text(f: Formula, unicode: bool = False) -> str:
    """
    Prints a formula with the minimal parentheses the precedence table requires.

    Binary connectives associate to the left, so only a right operand of equal precedence is parenthesized.
    """
    if isinstance(f, Var | Meta):
        return f.name
    symbol = f.unicode_symbol if unicode else f.symbol
    if isinstance(f, Neg | Nabla):
        inner = to_text(f.sub, unicode)
        if f.sub.precedence < PREC_UNARY:
            inner = f"({inner})"
        return f"{symbol}{inner}"
    assert isinstance(f, And | Or)
    left = to_text(f.left, unicode)
    right = to_text(f.right, unicode)
    if f.left.precedence < f.precedence:
        left = f"({left})"
    if f.right.precedence <= f.precedence:
        right = f"({right})"
    return f"{left} {symbol} {right}"


def pretty(f: Formula) -> str:
    return to_text(f, unicode=True)


# Structural helpers


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    for child in f.children:
        yield from subformulas(child)


def variables(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Var))


def metavariables(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Meta))


def size(f: Formula) -> int:
    return 1 + sum(size(child) for child in f.children)


def depth(f: Formula) -> int:
    return 1 + max((depth(child) for child in f.children), default=-1)


def substitute(f: Formula, var: str, g: Formula) -> Formula:
    """Replaces every occurrence of the variable `var` in `f` by `g`."""
    if isinstance(f, Var):
        return g if f.name == var else f
    if isinstance(f, Meta):
        return f
    return build(f.symbol, [substitute(child, var, g) for child in f.children])


def instantiate(f: Formula, binding: Mapping[str, Formula]) -> Formula:
    """Replaces schema variables by the formulas bound to them."""
    if isinstance(f, Meta):
        if f.name not in binding:
            raise KeyError(f"Schema variable {f.name} is unbound.")
        return binding[f.name]
    if isinstance(f, Var):
        return f
    return build(f.symbol, [instantiate(child, binding) for child in f.children])


def match(pattern: Formula, f: Formula, binding: Binding | None = None) -> Binding | None:
    """
    Matches a schema against a formula.

    Returns:
        The extended binding of schema variables, or None when `f` is not an instance of `pattern`.
    """
    binding = {} if binding is None else dict(binding)
    stack = [(pattern, f)]
    while stack:
        p, g = stack.pop()
        if isinstance(p, Meta):
            bound = binding.get(p.name)
            if bound is None:
                binding[p.name] = g
            elif bound != g:
                return None
        elif type(p) is not type(g):
            return None
        elif isinstance(p, Var):
            if p != g:
                return None
        else:
            stack.extend(zip(p.children, g.children, strict=True))
    return binding


def circ(f: Formula) -> Formula:
    """Consistency operator ∘f = ¬∇(f ∧ ¬f)."""
    return Neg(Nabla(And(f, Neg(f))))


def bullet(f: Formula) -> Formula:
    """Inconsistency operator •f = ∇(f ∧ ¬f)."""
    return Nabla(And(f, Neg(f)))


def sort_formulas(formulas: Iterable[Formula]) -> list[Formula]:
    return sorted(formulas, key=lambda g: g.key)


# Sequents


@dataclass(frozen=True)
class Sequent:
    """Two-sided sequent Γ ⇒ Δ over finite sets of formulas."""

    left: frozenset[Formula] = field(default_factory=frozenset)
    right: frozenset[Formula] = field(default_factory=frozenset)

    @classmethod
    def of(cls, left: Iterable[Formula] = (), right: Iterable[Formula] = ()) -> "Sequent":
        return cls(frozenset(left), frozenset(right))

    def formulas(self) -> frozenset[Formula]:
        return self.left | self.right

    def variables(self) -> frozenset[str]:
        return frozenset().union(*(variables(f) for f in self.formulas()))

    def metavariables(self) -> frozenset[str]:
        return frozenset().union(*(metavariables(f) for f in self.formulas()))

    def is_axiomatic(self) -> bool:
        """True iff some formula occurs on both sides, i.e. the sequent weakens an axiom."""
        return not self.left.isdisjoint(self.right)

    def is_weakening_of(self, other: "Sequent") -> bool:
        return other.left <= self.left and other.right <= self.right

    def union(self, other: "Sequent") -> "Sequent":
        return Sequent(self.left | other.left, self.right | other.right)

    def add_left(self, *formulas: Formula) -> "Sequent":
        return Sequent(self.left | frozenset(formulas), self.right)

    def add_right(self, *formulas: Formula) -> "Sequent":
        return Sequent(self.left, self.right | frozenset(formulas))

    def instantiate(self, binding: Mapping[str, Formula]) -> "Sequent":
        return Sequent.of((instantiate(f, binding) for f in self.left), (instantiate(f, binding) for f in self.right))

    @property
    def key(self) -> tuple:
        return (
            tuple(f.key for f in sort_formulas(self.left)),
            tuple(f.key for f in sort_formulas(self.right)),
        )

    def to_text(self, unicode: bool = False) -> str:
        arrow = "⇒" if unicode else "=>"
        left = ", ".join(to_text(f, unicode) for f in sort_formulas(self.left))
        right = ", ".join(to_text(f, unicode) for f in sort_formulas(self.right))
        return " ".join(part for part in (left, arrow, right) if part)

    def __str__(self) -> str:
        return self.to_text()


def sort_sequents(sequents: Iterable[Sequent]) -> list[Sequent]:
    return sorted(sequents, key=lambda s: s.key)


@dataclass(frozen=True)
class NSequent:
    """
    n-sequent Γ₀ | … | Γ_{n−1}: one formula set per truth value of a matrix.

    Attributes:
        values: The truth values indexing the cells, in matrix order.
        cells: One formula set per value.
    """

    values: tuple[Hashable, ...]
    cells: tuple[frozenset[Formula], ...]

    def __post_init__(self):
        if len(self.values) != len(self.cells):
            raise ValueError(f"{len(self.values)} values but {len(self.cells)} cells.")

    @classmethod
    def empty(cls, values: Sequence[Hashable] = T6) -> "NSequent":
        return cls(tuple(values), tuple(frozenset() for _ in values))

    @classmethod
    def axiom(cls, f: Formula, values: Sequence[Hashable] = T6) -> "NSequent":
        """The axiom 𝒯 : f, with f in every cell."""
        return cls(tuple(values), tuple(frozenset([f]) for _ in values))

    @classmethod
    def from_signed(cls, signed: Iterable[tuple[Hashable, Formula]], values: Sequence[Hashable] = T6) -> "NSequent":
        return cls.empty(values).add(*signed)

    def index(self, value: Hashable) -> int:
        try:
            return self.values.index(value)
        except ValueError:
            raise ValueError(f"{value!r} is not a value of this n-sequent.") from None

    def cell(self, value: Hashable) -> frozenset[Formula]:
        return self.cells[self.index(value)]

    def add(self, *signed: tuple[Hashable, Formula]) -> "NSequent":
        cells = list(self.cells)
        for value, f in signed:
            i = self.index(value)
            cells[i] = cells[i] | {f}
        return NSequent(self.values, tuple(cells))

    def remove(self, value: Hashable, f: Formula) -> "NSequent":
        cells = list(self.cells)
        i = self.index(value)
        cells[i] = cells[i] - {f}
        return NSequent(self.values, tuple(cells))

    def union(self, other: "NSequent") -> "NSequent":
        if self.values != other.values:
            raise ValueError("Cannot join n-sequents over different values.")
        return NSequent(self.values, tuple(a | b for a, b in zip(self.cells, other.cells, strict=True)))

    def contains(self, value: Hashable, f: Formula) -> bool:
        return f in self.cell(value)

    def is_weakening_of(self, other: "NSequent") -> bool:
        return self.values == other.values and all(b <= a for a, b in zip(self.cells, other.cells, strict=True))

    def signed(self) -> list[tuple[Hashable, Formula]]:
        return [(value, f) for value, cell in zip(self.values, self.cells, strict=True) for f in sort_formulas(cell)]

    def formulas(self) -> frozenset[Formula]:
        return frozenset().union(*self.cells)

    def variables(self) -> frozenset[str]:
        return frozenset().union(*(variables(f) for f in self.formulas()))

    def to_text(self, unicode: bool = False) -> str:
        return " || ".join(", ".join(to_text(f, unicode) for f in sort_formulas(cell)) for cell in self.cells)

    def __str__(self) -> str:
        return self.to_text()


# Parsing


class _Builder(Transformer):
    def __init__(self, schematic: bool):
        super().__init__()
        self.schematic = schematic

    def var(self, children):
        return Var(str(children[0]))

    def meta(self, children):
        token: Token = children[0]
        if not self.schematic:
            raise FormulaSyntaxError(
                f"schema variable {token!s} is only allowed in rule schemas", str(token), token.line, token.column
            )
        return Meta(str(token))

    @v_args(inline=True)
    def neg(self, sub):
        return Neg(sub)

    @v_args(inline=True)
    def nabla(self, sub):
        return Nabla(sub)

    @v_args(inline=True)
    def and_(self, left, right):
        return And(left, right)

    @v_args(inline=True)
    def or_(self, left, right):
        return Or(left, right)

    @v_args(inline=True)
    def formula(self, f):
        return f

    def formula_list(self, children):
        return list(children)

    def sequent(self, children):
        left, right = children
        return Sequent.of(left or (), right or ())


class FormulaParser:
    """
    LALR parser for formulas and sequents.

    Precedence: ¬/∇ (prefix, tightest) > ∧ > ∨; binary connectives associate to the left.
    """

    def __init__(self):
        self.parser = Lark(GRAMMAR, parser="lalr", start=["formula", "sequent", "formula_list"])

    def parse(self, text: str, start: str = "formula", schematic: bool = False):
        try:
            tree = self.parser.parse(text, start=start)
            return _Builder(schematic).transform(tree)
        except VisitError as e:
            if isinstance(e.orig_exc, FormulaSyntaxError):
                raise e.orig_exc from None
            raise
        except UnexpectedInput as e:
            line, column = e.line, e.column
            if line is None or line < 0:
                line, column = text.count("\n") + 1, len(text.rsplit("\n", 1)[-1]) + 1
            raise FormulaSyntaxError(f"cannot parse {text!r}", text, line, column) from None


_parser: FormulaParser | None = None


def _get_parser() -> FormulaParser:
    global _parser
    if _parser is None:
        _parser = FormulaParser()
    return _parser


def parse_formula(text: str, schematic: bool = False) -> Formula:
    return _get_parser().parse(text, "formula", schematic)


def parse_formulas(text: str, schematic: bool = False) -> list[Formula]:
    """Parses a comma-separated, possibly empty, list of formulas."""
    if not text.strip():
        return []
    return _get_parser().parse(text, "formula_list", schematic)


def parse_sequent(text: str, schematic: bool = False) -> Sequent:
    return _get_parser().parse(text, "sequent", schematic)


def parse_nsequent(text: str, values: Sequence[Hashable] = T6) -> NSequent:
    """
    Parses an n-sequent either in cell form `Γ₀ || … || Γ_{n−1}` or in signed form `0:φ; 1/3:ψ`.
    """
    symbols = {str(value): value for value in values}
    if "||" in text:
        cells = text.split("||")
        if len(cells) != len(values):
            raise FormulaSyntaxError(f"expected {len(values)} cells separated by '||', found {len(cells)}", text)
        return NSequent(tuple(values), tuple(frozenset(parse_formulas(cell)) for cell in cells))
    ns = NSequent.empty(values)
    for item in filter(str.strip, text.split(";")):
        label, sep, body = item.partition(":")
        if not sep or label.strip() not in symbols:
            raise FormulaSyntaxError(f"expected 'value:formula', found {item.strip()!r}", text)
        ns = ns.add((symbols[label.strip()], parse_formula(body)))
    return ns


def parse_assignment(text: str, values: Sequence[Hashable] = T6) -> dict[str, Hashable]:
    """Parses `p=b,q=n` into a map from variable names to truth values."""
    symbols = {str(value): value for value in values}
    assignment: dict[str, Hashable] = {}
    for item in filter(str.strip, text.split(",")):
        name, sep, value = (part.strip() for part in item.partition("="))
        if not sep or value not in symbols:
            raise FormulaSyntaxError(f"expected 'variable=value' with value in {sorted(symbols)}, found {item!r}", text)
        assignment[name] = symbols[value]
    return assignment


def is_comment(line: str) -> bool:
    """
    A comment line is '#' on its own or '#' followed by whitespace.

    '#' also spells ∇, so '#p => p' and '#note' are parsed as sequents, not skipped.
    """
    return line == "#" or (line.startswith("#") and line[1:2].isspace())


def parse_sequent_lines(lines: Iterable[str], source: str = "<input>") -> list[Sequent]:
    """Parses one sequent per line, skipping blank lines and comment lines."""
    sequents = []
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or is_comment(line):
            continue
        try:
            sequents.append(parse_sequent(line))
        except FormulaSyntaxError as e:
            raise FormulaSyntaxError(f"{source}: cannot parse {line!r}", line, number, e.column) from None
    return sequents


def read_sequent_file(path: str | Path) -> list[Sequent]:
    return parse_sequent_lines(Path(path).read_text(encoding="utf-8").splitlines(), str(path))
