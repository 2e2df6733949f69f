"""
Command-line interface of sixlogic.

Every subcommand prints its result in text or JSON form and exits with an ExitCode: 0 for provable, valid or true,
1 for the negative answer, 2 for usage and parse errors, 3 when a resource cap is exceeded and 4 when decision
engines disagree.
"""

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from logging import getLogger
from pathlib import Path
from typing import Any

from sixlogic.calculi import rulealg, sfcalc
from sixlogic.calculi.replay import REPLAYS
from sixlogic.calculi.twocalc import (
    WitnessTable,
    boolean_witnesses,
    find_witness_failure,
    six_witnesses,
    translate_axiom,
    translate_calculus,
    translated_rule_counts,
)
from sixlogic.core.algebra import (
    FiniteMatrix,
    boolean_matrix,
    counterexample,
    degree_entails,
    evaluate,
    is_theorem,
    lukasiewicz_matrix,
    m6,
    matrix_entails,
    nsequent_counterexample,
    truth_table,
)
from sixlogic.core.config import (
    DEFAULT_GSUB_CAP,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_MAX_STATES,
    DEFAULT_PARTITION_CAP,
    DEFAULT_VAR_CAP,
    Caps,
    Engine,
    EngineDisagreement,
    EvaluationError,
    ExitCode,
    FormulaSyntaxError,
    IndexMismatchError,
    ResourceExceeded,
    RuleApplicationError,
    StreamliningError,
    UsageError,
    WitnessError,
)
from sixlogic.core.syntax import (
    Nabla,
    Neg,
    Sequent,
    Var,
    bullet,
    circ,
    parse_assignment,
    parse_formula,
    parse_formulas,
    parse_sequent,
    parse_sequent_lines,
    pretty,
    read_sequent_file,
)
from sixlogic.gsixproof.decide import decide
from sixlogic.gsixproof.gsub import indexed_gsub
from sixlogic.gsixproof.proof import find_failure, format_proof, proof_from_json, proof_to_json

log = getLogger(__name__)

MATRICES: dict[str, Callable[[], FiniteMatrix]] = {
    "m6": m6,
    "boolean": boolean_matrix,
    "L3": lambda: lukasiewicz_matrix(3),
}

WITNESSES: dict[str, Callable[[], WitnessTable]] = {
    "m6": six_witnesses,
    "boolean": boolean_witnesses,
}

TABLES = ("neg", "nabla", "circ", "bullet", "and", "or")

ENTAILMENT_SIGNS = ("|-", "⊢")

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


@dataclass
class Result:
    """What a subcommand reports: its exit code, the JSON payload and the same information as text."""

    code: ExitCode
    data: dict[str, Any] = field(default_factory=dict)
    text: str = ""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _caps(args: argparse.Namespace) -> Caps:
    return Caps(
        var_cap=args.var_cap,
        gsub_cap=args.gsub_cap,
        partition_cap=args.partition_cap,
        max_iterations=args.max_iterations,
        max_states=args.max_states,
        literal_gsub=args.literal_gsub,
    )


def _matrix(args: argparse.Namespace) -> FiniteMatrix:
    return MATRICES[args.matrix]()


def _verdict(holds: bool) -> ExitCode:
    return ExitCode.OK if holds else ExitCode.NO


def _write_json(path: str, data: Any):
    Path(path).write_text(json.dumps(data, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    log.info(f"wrote {path}")


def _assignment_text(assignment: dict[str, Any]) -> str:
    return ", ".join(f"{name}={value}" for name, value in sorted(assignment.items()))


def _sequents(args: argparse.Namespace) -> list[Sequent]:
    """The sequent argument, or every sequent of the --file given ("-" reads standard input)."""
    if (args.sequent is None) == (args.file is None):
        raise UsageError("give either a sequent or --file")
    if args.file is None:
        return [parse_sequent(args.sequent)]
    if args.file == "-":
        sequents = parse_sequent_lines(sys.stdin.read().splitlines(), "<stdin>")
    else:
        sequents = read_sequent_file(args.file)
    if not sequents:
        raise UsageError(f"no sequents in {args.file}")
    return sequents


def _each(sequents: list[Sequent], handle: Callable[[Sequent], Result]) -> Result:
    results = [handle(s) for s in sequents]
    if len(results) == 1:
        return results[0]
    code = ExitCode.OK if all(r.code == ExitCode.OK for r in results) else ExitCode.NO
    data = {"results": [{"exit": int(r.code), **r.data} for r in results]}
    return Result(code, data, "\n\n".join(f"{s}\n{r.text}" for s, r in zip(sequents, results, strict=True)))


# Subcommands


def cmd_eval(args: argparse.Namespace) -> Result:
    m = _matrix(args)
    f = parse_formula(args.formula)
    assignment = parse_assignment(args.assign, m.values)
    value = evaluate(f, assignment, m)
    data = {
        "formula": str(f),
        "assignment": {name: str(v) for name, v in assignment.items()},
        "value": str(value),
        "designated": m.is_designated(value),
    }
    return Result(ExitCode.OK, data, str(value))


def cmd_valid(args: argparse.Namespace) -> Result:
    m = _matrix(args)

    def valid(s: Sequent) -> Result:
        falsifier = counterexample(s, m, args.var_cap)
        data: dict[str, Any] = {"sequent": str(s), "valid": falsifier is None}
        if falsifier is None:
            return Result(ExitCode.OK, data, "valid")
        data["counterassignment"] = {name: str(v) for name, v in falsifier.items()}
        return Result(ExitCode.NO, data, f"not valid\ncounterassignment: {_assignment_text(falsifier)}")

    return _each(_sequents(args), valid)


def cmd_entails(args: argparse.Namespace) -> Result:
    text = " ".join(args.entailment)
    for sign in ENTAILMENT_SIGNS:
        if sign in text:
            left, _, right = text.partition(sign)
            break
    else:
        raise UsageError(f"expected 'premises |- conclusion', found {text!r}")
    premises = parse_formulas(left)
    conclusion = parse_formula(right)
    m = _matrix(args)
    if not premises:
        holds = is_theorem(conclusion, m, args.var_cap)
    elif args.consequence == "matrix":
        holds = matrix_entails(premises, conclusion, m, args.var_cap)
    else:
        holds = degree_entails(premises, conclusion, m, args.var_cap)
    data = {
        "premises": [str(f) for f in premises],
        "conclusion": str(conclusion),
        "consequence": args.consequence,
        "entails": holds,
    }
    return Result(_verdict(holds), data, "true" if holds else "false")


def cmd_theorem(args: argparse.Namespace) -> Result:
    f = parse_formula(args.formula)
    holds = is_theorem(f, _matrix(args), args.var_cap)
    return Result(_verdict(holds), {"formula": str(f), "theorem": holds}, "true" if holds else "false")


def cmd_decide(args: argparse.Namespace) -> Result:
    return _each(_sequents(args), lambda s: _decide_one(s, args))


def _decide_one(s: Sequent, args: argparse.Namespace) -> Result:
    outcome = decide(s, args.engine, _caps(args))
    lines = [f"{outcome.verdict} ({outcome.engine})"]
    if outcome.proof is not None and args.show_proof:
        lines.append(format_proof(outcome.proof))
    if outcome.counterassignment is not None:
        lines.append(f"counterassignment: {_assignment_text(outcome.counterassignment)}")
    if outcome.details:
        lines.append(outcome.details)
    if outcome.stats:
        lines.append("stats: " + ", ".join(f"{k}={v}" for k, v in outcome.stats.items()))
    data = outcome.to_json()
    if not args.show_proof:
        data.pop("witness", None)
    return Result(_verdict(outcome.provable), data, "\n".join(lines))


def cmd_prove(args: argparse.Namespace) -> Result:
    sequents = _sequents(args)
    if args.out and len(sequents) > 1:
        raise UsageError(f"--out writes one proof, {args.file} holds {len(sequents)} sequents")
    return _each(sequents, lambda s: _prove_one(s, args))


def _prove_one(s: Sequent, args: argparse.Namespace) -> Result:
    outcome = decide(s, args.engine, _caps(args))
    if outcome.proof is None:
        data = outcome.to_json()
        text = f"{outcome.verdict} ({outcome.engine})"
        if outcome.counterassignment is not None:
            text += f"\ncounterassignment: {_assignment_text(outcome.counterassignment)}"
        return Result(ExitCode.NO, data, text)
    proof = proof_to_json(outcome.proof)
    if args.out:
        _write_json(args.out, proof)
    data = {"sequent": str(s), "engine": str(outcome.engine), "proof": proof, "out": args.out}
    text = format_proof(outcome.proof) + (f"\nwritten to {args.out}" if args.out else "")
    return Result(ExitCode.OK, data, text)


def cmd_check_proof(args: argparse.Namespace) -> Result:
    proof = proof_from_json(json.loads(Path(args.path).read_text(encoding="utf-8")))
    failure = find_failure(proof, args.allow_cut)
    data: dict[str, Any] = {"sequent": str(proof.sequent), "valid": failure is None, "size": proof.size}
    if failure is None:
        return Result(ExitCode.OK, data, f"proof of {proof.sequent} checks ({proof.size} nodes)")
    data["failure"] = str(failure)
    return Result(ExitCode.NO, data, f"proof rejected: {failure}")


def cmd_check_sf(args: argparse.Namespace) -> Result:
    m = _matrix(args)
    derivation = sfcalc.derivation_from_json(json.loads(Path(args.path).read_text(encoding="utf-8")), m)
    failure = sfcalc.find_sf_failure(derivation, m)
    data: dict[str, Any] = {"nsequent": str(derivation.nsequent), "valid": failure is None}
    if failure is None:
        return Result(ExitCode.OK, data, f"SF derivation of {derivation.nsequent} checks")
    data["failure"] = str(failure)
    text = f"SF derivation rejected: {failure}"
    falsifier = nsequent_counterexample(derivation.nsequent, m)
    if falsifier is not None:
        data["counterassignment"] = {name: str(v) for name, v in falsifier.items()}
        text += f"\nthe n-sequent is not valid, counterassignment: {_assignment_text(falsifier)}"
    return Result(ExitCode.NO, data, text)


def _witnesses(args: argparse.Namespace) -> WitnessTable:
    if args.matrix not in WITNESSES:
        raise UsageError(f"no witness table for matrix {args.matrix}; choose one of {sorted(WITNESSES)}")
    return WITNESSES[args.matrix]()


def cmd_gen(args: argparse.Namespace) -> Result:
    m = _matrix(args)
    data: dict[str, Any] = {"kind": args.kind, "matrix": args.matrix}
    match args.kind:
        case "sf":
            rules = sfcalc.generate_sf(m)
            items = sfcalc.rules_to_json(rules)
            lines = [str(rule) for rule in rules]
            summary = f"{len(rules)} SF rules"
        case "two":
            translated = translate_calculus(sfcalc.generate_sf(m), _witnesses(args), m)
            counts = translated_rule_counts(translated)
            data["per_connective"] = counts
            items = [rulealg.rule_to_json(r) for r in translated]
            lines = [rulealg.format_rule(r) for r in translated]
            breakdown = ", ".join(f"{symbol}: {count}" for symbol, count in counts.items())
            summary = f"{len(translated)} logic rules ({breakdown})"
        case _:
            sequents = translate_axiom(_witnesses(args), args.partition_cap)
            items = [str(s) for s in sequents]
            lines = [s.to_text() for s in sequents]
            summary = f"{len(sequents)} axiom partitions"
    data["count"] = len(items)
    if args.out:
        _write_json(args.out, items)
        data["out"] = args.out
        return Result(ExitCode.OK, data, f"{summary}, written to {args.out}")
    data["items"] = items
    return Result(ExitCode.OK, data, "\n".join([*lines, summary]))


def cmd_gsub(args: argparse.Namespace) -> Result:
    s = parse_sequent(args.sequent)
    formulas = indexed_gsub(s, args.literal)
    data = {"sequent": str(s), "count": len(formulas), "formulas": [str(f) for f in formulas]}
    lines = [pretty(f) for f in formulas]
    return Result(ExitCode.OK, data, "\n".join([*lines, f"{len(formulas)} generalized subformulas"]))


def cmd_streamline(args: argparse.Namespace) -> Result:
    result = REPLAYS[args.replay]()
    return Result(ExitCode.OK, result.to_json(), result.to_text())


def cmd_table(args: argparse.Namespace) -> Result:
    m = m6()
    p = Var("p")
    if args.connective in ("and", "or"):
        symbol = "&" if args.connective == "and" else "|"
        grid = [[str(m.apply(symbol, x, y)) for y in m.values] for x in m.values]
        width = max(len(str(v)) for v in m.values) + 1
        header = " " * width + "".join(f"{str(v):>{width}}" for v in m.values)
        rows = [
            f"{str(x):>{width}}" + "".join(f"{v:>{width}}" for v in row) for x, row in zip(m.values, grid, strict=True)
        ]
        data = {"connective": args.connective, "values": [str(v) for v in m.values], "table": grid}
        return Result(ExitCode.OK, data, "\n".join([header, *rows]))
    f = {"neg": Neg(p), "nabla": Nabla(p), "circ": circ(p), "bullet": bullet(p)}[args.connective]
    column = [(assignment["p"], value) for assignment, value in truth_table(f, m)]
    data = {"connective": args.connective, "formula": str(f), "rows": [[str(x), str(v)] for x, v in column]}
    lines = [f"p     {pretty(f)}"] + [f"{str(x):<6}{v}" for x, v in column]
    return Result(ExitCode.OK, data, "\n".join(lines))


def cmd_witnesses(args: argparse.Namespace) -> Result:
    m = _matrix(args)
    w = _witnesses(args)
    failure = find_witness_failure(m, w)
    data: dict[str, Any] = {"matrix": args.matrix, "table": w.to_json(), "valid": failure is None}
    if failure is None:
        return Result(ExitCode.OK, data, f"{w.to_text()}\nvalid for {args.matrix}")
    value, condition = failure
    data["failure"] = {"value": str(value), "condition": condition}
    return Result(ExitCode.NO, data, f"{w.to_text()}\ninvalid for {args.matrix}: condition {condition} at {value}")


# Parser


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text", help="Output format.")
    common.add_argument("-v", "--verbose", action="count", default=0, help="Log info (-v) or debug (-vv) messages.")

    caps = _ArgumentParser(add_help=False)
    caps.add_argument("--var-cap", type=int, default=DEFAULT_VAR_CAP, help="Maximum variables to enumerate.")
    caps.add_argument("--gsub-cap", type=int, default=DEFAULT_GSUB_CAP, help="Maximum gsub size for saturation.")
    caps.add_argument("--max-iterations", type=int, default=DEFAULT_MAX_ITERATIONS, help="Saturation rounds.")
    caps.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES, help="Stored saturation sequents.")
    caps.add_argument("--partition-cap", type=int, default=DEFAULT_PARTITION_CAP, help="Maximum partitions.")
    caps.add_argument("--literal-gsub", action="store_true", help="Leave out the gsub clauses for ∇ over ∨.")

    matrix = _ArgumentParser(add_help=False)
    matrix.add_argument("--matrix", choices=sorted(MATRICES), default="m6", help="Logical matrix.")

    ap = _ArgumentParser(prog="sixlogic", description="Decision procedures and calculi for the six-valued logic Six.")
    sub = ap.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Callable[[argparse.Namespace], Result], summary: str, *parents):
        p = sub.add_parser(name, parents=[common, *parents], help=summary, description=summary)
        p.set_defaults(handler=handler)
        return p

    p = command("eval", cmd_eval, "Evaluate a formula under an assignment.", matrix)
    p.add_argument("formula")
    p.add_argument("--assign", default="", help="Assignment such as p=b,q=n.")

    p = command("valid", cmd_valid, "Check a sequent against the matrix.", caps, matrix)
    p.add_argument("sequent", nargs="?")
    p.add_argument("--file", help="Read one sequent per line from this file, or '-' for standard input.")

    p = command("entails", cmd_entails, "Check consequence: premises |- conclusion.", caps, matrix)
    p.add_argument("entailment", nargs="+", help="Premises, the sign |- and the conclusion.")
    p.add_argument("--consequence", choices=["degree", "matrix"], default="degree")

    p = command("theorem", cmd_theorem, "Check that a formula always takes the top value.", caps, matrix)
    p.add_argument("formula")

    p = command("decide", cmd_decide, "Decide a sequent in GSix.", caps)
    p.add_argument("sequent", nargs="?")
    p.add_argument("--file", help="Read one sequent per line from this file, or '-' for standard input.")
    p.add_argument("--engine", choices=[str(e) for e in Engine], default=str(Engine.CROSS))
    p.add_argument("--show-proof", action="store_true", help="Include the proof when provable.")

    p = command("prove", cmd_prove, "Build a cut-free GSix proof of a sequent.", caps)
    p.add_argument("sequent", nargs="?")
    p.add_argument("--file", help="Read one sequent per line from this file, or '-' for standard input.")
    p.add_argument("--engine", choices=[str(Engine.BACKWARD), str(Engine.SATURATION)], default=str(Engine.BACKWARD))
    p.add_argument("--out", help="Write the proof as JSON to this path.")

    p = command("check-proof", cmd_check_proof, "Check a GSix proof certificate.")
    p.add_argument("path")
    p.add_argument("--allow-cut", action="store_true")

    p = command("check-sf", cmd_check_sf, "Check an SF derivation.", matrix)
    p.add_argument("path")

    p = command("gen", cmd_gen, "Generate the SF calculus, its two-sided translation or the axiom partitions.", matrix)
    p.add_argument("kind", choices=["sf", "two", "axiom"])
    p.add_argument("--out", help="Write the generated items as JSON to this path.")
    p.add_argument("--partition-cap", type=int, default=DEFAULT_PARTITION_CAP)

    p = command("gsub", cmd_gsub, "List the generalized subformulas of a sequent.")
    p.add_argument("sequent")
    p.add_argument("--literal", action="store_true", help="Leave out the clauses for ∇ over ∨.")

    p = command("streamline", cmd_streamline, "Replay a recorded streamlining derivation.")
    p.add_argument("--replay", choices=sorted(REPLAYS), default="table1")

    p = command("table", cmd_table, "Print a truth table of the six-valued matrix.")
    p.add_argument("connective", choices=TABLES)

    command("witnesses", cmd_witnesses, "Print and validate a witness table.", matrix)
    return ap


def _render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"exit": int(result.code), **result.data}, ensure_ascii=False, indent=2)
    return result.text


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Runs one invocation and returns its exit code and output instead of printing."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        return ExitCode.USAGE, str(e)
    except SystemExit as e:
        # --help
        return int(e.code or 0), ""

    logging.basicConfig(
        level=LOG_LEVELS[min(args.verbose, len(LOG_LEVELS) - 1)],
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    try:
        result = args.handler(args)
    except ResourceExceeded as e:
        result = Result(ExitCode.RESOURCE, {"error": str(e), "cap": e.cap, "limit": e.limit}, f"resource exceeded: {e}")
    except EngineDisagreement as e:
        result = Result(ExitCode.DISAGREEMENT, {"error": str(e), "verdicts": e.verdicts}, str(e))
    except (StreamliningError, RuleApplicationError) as e:
        result = Result(ExitCode.NO, {"error": str(e)}, f"streamlining failed: {e}")
    except FormulaSyntaxError as e:
        data = {"error": str(e), "text": e.text, "line": e.line, "column": e.column}
        result = Result(ExitCode.USAGE, data, f"parse error: {e}")
    except (UsageError, EvaluationError, IndexMismatchError, WitnessError, ValueError, KeyError, OSError) as e:
        result = Result(ExitCode.USAGE, {"error": str(e)}, f"error: {e}")
    log.debug(f"{args.command} exited with {result.code!r}")
    return int(result.code), _render(result, args.format)


def main(argv: Sequence[str] | None = None) -> int:
    code, output = run(argv)
    if output:
        print(output, file=sys.stdout if code in (ExitCode.OK, ExitCode.NO) else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
