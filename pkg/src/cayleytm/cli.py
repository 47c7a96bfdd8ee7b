"""Command-line entry point: ``cayleytm <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage
or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import algebra, escape, treeorder, words
from .compiler import bisimulate, compile_machine, transcribe_input
from .errors import CayleyTMError, FiniteGroupError, InvalidAlphabet, MachineError
from .groups import TapeGraph, WordVerdict
from .machine import initial_configuration, run, word_problem_walk
from .serialize import (FormatError, basis_from_dict, compiled_to_dict, counts_from_dict,
                        load_group, machine_from_dict, machine_is_standard, poly_from_dict,
                        read_json, standard_from_dict, trace_tsv, write_json)

OK, FAILED, USAGE = 0, 1, 2


class _Output:
    def __init__(self, args: argparse.Namespace):
        self.format = args.format
        self.quiet = args.quiet
        self.payload: dict[str, Any] = {}
        self.lines: list[str] = []

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def flush(self) -> None:
        if self.format == "json":
            print(json.dumps(self.payload, indent=2, ensure_ascii=False, default=str))
        elif not self.quiet:
            for text in self.lines:
                print(text)


def _word(graph: TapeGraph, text: str):
    return graph.parse_word(text)


# -- group and machine commands ---------------------------------------------------------

def cmd_validate(args, out: _Output) -> int:
    try:
        graph = load_group(args.group)
    except (InvalidAlphabet, FiniteGroupError) as exc:
        out.payload = {"valid": False, "error": str(exc)}
        out.line(f"invalid: {exc}")
        return FAILED
    report = graph.report
    out.payload = {"valid": True, "kind": report.kind, "generators": list(graph.alphabet.symbols),
                   "decidable": report.decidable,
                   "restrictions": {str(k): v for k, v in report.restrictions.items()}}
    out.lines += report.lines()
    return OK


def _parse_cells(graph: TapeGraph, items: Sequence[str]):
    cells = []
    for item in items or ():
        if "=" not in item:
            raise FormatError(f"--cell expects WORD=SYMBOL, got {item!r}")
        word, symbol = item.rsplit("=", 1)
        cells.append((_word(graph, word), symbol))
    return cells


def cmd_run(args, out: _Output) -> int:
    graph = load_group(args.group)
    data = read_json(args.machine)
    if machine_is_standard(data):
        spec = compile_machine(standard_from_dict(data), graph)
        cfg = transcribe_input(spec, graph, list(args.input or ""))
    else:
        spec = machine_from_dict(data, graph)
        cfg = initial_configuration(spec, graph, _parse_cells(graph, args.cell),
                                    _word(graph, args.head or ""))
    result = run(spec, graph, cfg, args.fuel)
    final = result.config
    state_name = getattr(spec, "state_name", str)
    symbol_name = getattr(spec, "symbol_name", str)
    tape = {graph.format_element(k): symbol_name(v) for k, v in final.tape.items()}
    halt = "terminal" if result.halt.terminal else "out_of_fuel"
    out.payload = {"halt": halt, "steps": final.steps, "state": state_name(final.state),
                   "head": graph.format_element(final.head), "tape": tape}
    out.line(trace_tsv(result.trace, graph, state_name, symbol_name).rstrip("\n"))
    out.line(f"# halt: {halt} in state {state_name(final.state)} after {final.steps} steps; "
             f"head at {graph.format_element(final.head)}")
    out.line("# tape: " + " ".join(f"{k}:{v}" for k, v in tape.items()))
    return OK


def cmd_compile(args, out: _Output) -> int:
    graph = load_group(args.group)
    tm = standard_from_dict(read_json(args.machine))
    compiled = compile_machine(tm, graph)
    data = compiled_to_dict(compiled, graph)
    summary = (f"compiled {len(tm.states)} states into {len(data['states'])} states, "
               f"{len(data['alphabet'])} tape symbols, {len(data['transitions'])} transitions")
    if args.out:
        write_json(data, args.out)
        out.payload = {"out": args.out, "states": len(data["states"]),
                       "symbols": len(data["alphabet"]), "transitions": len(data["transitions"])}
        out.line(summary)
    else:
        out.payload = data
        out.line(write_json(data).rstrip("\n"))
    return OK


def cmd_bisim(args, out: _Output) -> int:
    graph = load_group(args.group)
    tm = standard_from_dict(read_json(args.machine))
    report = bisimulate(tm, graph, list(args.input), args.fuel)
    out.payload = {"equivalent": report.equivalent, "compared": report.compared,
                   "compiled_steps": report.compiled_steps, "compiled_halted": report.compiled_halted,
                   "direct_halted": report.direct_halted, "mismatch": report.mismatch}
    out.line(report.summary())
    return OK if report.equivalent else FAILED


def cmd_wordproblem(args, out: _Output) -> int:
    graph = load_group(args.group)
    u, v = _word(graph, args.u), _word(graph, args.v)
    walk = word_problem_walk(graph, u, v, strict=args.strict)
    oracle = graph.words_equal(u, v)
    agree = oracle is WordVerdict.UNKNOWN or (oracle is WordVerdict.EQUAL) == walk
    out.payload = {"u": graph.format_word(u), "v": graph.format_word(v), "walk": walk,
                   "oracle": oracle.value, "agree": agree}
    out.line(f"walk: {'equal' if walk else 'not-equal'}")
    out.line(f"oracle: {oracle.value}")
    return OK if agree else FAILED


def cmd_treeorder(args, out: _Output) -> int:
    graph = load_group(args.group)
    if args.minimal_path:
        result = [treeorder.minimal_path_prefix(graph, args.depth)]
    elif args.tprime is not None:
        result = treeorder.tprime_prefix(graph, args.depth, args.tprime)
    elif args.r is not None:
        result = treeorder.r_prefix(graph, args.depth, args.r)
    else:
        result = treeorder.super_reduced_words(graph, args.depth)
    formatted = [graph.format_word(w) for w in result]
    out.payload = {"words": formatted}
    out.lines += formatted
    return OK


# -- combinatorics and algebra -----------------------------------------------------------

def _verify_even(word: str, depth: int, alphabet) -> bool:
    return all(words.subsequence_count(word, p) % 2 == 0 for p in words.patterns(alphabet, depth))


def cmd_evensubword(args, out: _Output) -> int:
    word = args.word
    alphabet = tuple(args.alphabet) if args.alphabet else None
    alphabet = words._alphabet_of(word, alphabet)
    if args.pirillo:
        pair = words.pirillo_pair_search(word, args.depth, alphabet)
        if pair is None:
            out.payload = {"found": False}
            out.line("none")
            return FAILED
        first, second = pair.halves(word)
        checks = {name: _verify_even(w, args.depth, alphabet)
                  for name, w in (("first", first), ("second", second), ("whole", first + second))}
        out.payload = {"found": True, "start": pair.start, "split": pair.split, "end": pair.end - 1,
                       "first": first, "second": second, "verified": checks}
        out.line(f"w1={first} w2={second} (positions {pair.start}..{pair.end - 1}, split at {pair.split})")
        for name, ok in checks.items():
            out.line(f"  {name}: {'all counts even' if ok else 'ODD COUNT'} to depth {args.depth}")
        return OK if all(checks.values()) else FAILED
    interval = words.even_subword_search(word, args.depth, alphabet)
    if interval is None:
        out.payload = {"found": False}
        out.line("none")
        return FAILED
    i, j = interval
    ok = _verify_even(word[i:j + 1], args.depth, alphabet)
    out.payload = {"found": True, "start": i, "end": j, "subword": word[i:j + 1], "verified": ok}
    out.line(f"({i}, {j}) {word[i:j + 1]}")
    out.line(f"verification: {'all counts even' if ok else 'ODD COUNT'} for "
             f"{words.profile_size(len(alphabet), args.depth)} patterns up to length {args.depth}")
    return OK if ok else FAILED


def cmd_algebra_binomial(args, out: _Output) -> int:
    results = {}
    for i in range(1, args.d + 1):
        raw = algebra.binomial_product(i, args.degree, args.d)
        ok = algebra.binomial_inverse_check(i, args.degree, args.d)
        results[i] = ok
        out.line(f"(1+x{i})(1+x{i})^15 = {raw}  ->  {'1 mod x' + str(i) + '^16' if ok else 'NOT 1'}")
    out.payload = {"d": args.d, "degree": args.degree, "inverse": {str(k): v for k, v in results.items()}}
    return OK if all(results.values()) else FAILED


def cmd_algebra_gs(args, out: _Output) -> int:
    r = counts_from_dict(read_json(args.r))
    coeffs = algebra.gs_series_coefficients(args.d, r, args.terms)
    nonneg = all(c >= 0 for c in coeffs)
    out.payload = {"coefficients": coeffs, "nonnegative": nonneg}
    out.lines += [f"{k}\t{c}" for k, c in enumerate(coeffs)]
    if args.eps:
        bound_ok = algebra.corollary_bound_check(args.d, Fraction(args.eps), r)
        out.payload["bound_check"] = bound_ok
        out.line(f"# r_i <= eps^2 (d - 2 eps)^(i-2) with eps={args.eps}: {bound_ok}")
    out.line(f"# all coefficients non-negative: {nonneg}")
    return OK


def cmd_algebra_relator(args, out: _Output) -> int:
    gens = algebra.ConstructionGenerators(args.d)
    word = gens.parse(args.word)
    try:
        parts = algebra.relator_from_even_subword(word, gens, args.rlo, args.degree)
    except algebra.LowDegreeResidue as exc:
        out.payload = {"residue": str(exc)}
        out.line(f"residue: {exc}")
        return FAILED
    out.payload = {"components": [{"degree": f.degree(), "monomials": f.monomials()} for f in parts]}
    for f in parts:
        out.line(f"degree {f.degree()}: {f}")
    if not parts:
        out.line(f"p - 1 vanishes through degree {args.degree}")
    return OK


def cmd_algebra_member(args, out: _Output) -> int:
    basis = basis_from_dict(read_json(args.basis))
    poly = poly_from_dict(read_json(args.poly), cap=args.degree)
    member = algebra.ideal_membership(poly, basis, args.degree)
    out.payload = {"member": member}
    out.line("member" if member else "not a member")
    return OK


# -- escape --------------------------------------------------------------------------

def cmd_escape(args, out: _Output) -> int:
    graph = load_group(args.group)
    witness = escape.make_witness(graph, _word(graph, args.element), probe_bound=args.probe)
    schedule = escape.compute_schedule(graph, witness, args.mmax)
    fmt = graph.format_word
    verified = escape.verify_escape(graph, schedule.sequence, args.verify)
    lemma = escape.verify_prefix_lemma(graph, schedule, witness, args.lemma)
    period = fmt(schedule.escape_word)
    prefix = fmt(schedule.sequence.prefix) if schedule.sequence.prefix else ""
    out.payload = {
        "escape": period, "prefix": prefix, "period": list(schedule.period),
        "alpha": {str(r): sorted(map(list, v)) for r, v in schedule.alpha.items()},
        "beta": {str(r): v for r, v in schedule.beta.items()},
        "gamma": {str(r): v for r, v in schedule.gamma.items()},
        "m_max": schedule.m_max, "verified": verified, "prefix_lemma": lemma,
    }
    out.line(f"escape: {prefix}({period})^ω")
    out.line("r\talpha\tbeta\tgamma")
    for r in range(schedule.m):
        pairs = ",".join(f"({bm},{s})" for bm, s in sorted(schedule.alpha[r])) or "∅"
        out.line(f"{r}\t{pairs}\t{schedule.beta[r]}\t{schedule.gamma[r]}")
    out.line(f"verify {args.verify} steps: {'pass' if verified else 'FAIL (try a larger --mmax)'}")
    out.line(f"prefix identity to n={args.lemma}: {'pass' if lemma else 'FAIL'}")
    return OK if verified and lemma else FAILED


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized checks (accepted everywhere for reproducibility)")
    common.add_argument("--format", choices=("tsv", "json"), default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="cayleytm", parents=[common],
                                     description="Turing machines over Cayley-graph tapes.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "check a group description is a valid tape graph")
    p.add_argument("--group", required=True)

    p = add("run", cmd_run, "run a machine on a tape graph and print its trace")
    p.add_argument("--machine", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--fuel", type=_nonneg, default=1000)
    p.add_argument("--cell", action="append", metavar="WORD=SYMBOL",
                   help="initial tape contents (graph machines)")
    p.add_argument("--head", default="", help="initial head position as a word")
    p.add_argument("--input", default="", help="input string (standard machines are compiled first)")

    p = add("compile", cmd_compile, "compile a standard machine for a tape graph")
    p.add_argument("--machine", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--out")

    p = add("bisim", cmd_bisim, "compare a standard machine with its compiled version")
    p.add_argument("--machine", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--input", default="")
    p.add_argument("--fuel", type=_nonneg, default=10_000)

    p = add("wordproblem", cmd_wordproblem, "decide u = v with the pointer-trail walk")
    p.add_argument("--group", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--strict", action="store_true", help="one pointer per cell; fail on revisits")

    p = add("treeorder", cmd_treeorder, "list super-reduced words in tree order")
    p.add_argument("--group", required=True)
    p.add_argument("--depth", type=_nonneg, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--minimal-path", action="store_true")
    mode.add_argument("--tprime", type=_nonneg, metavar="K")
    mode.add_argument("--r", type=_nonneg, metavar="K")

    p = add("evensubword", cmd_evensubword, "find a factor with all subsequence counts even")
    p.add_argument("--word", required=True)
    p.add_argument("--depth", type=_positive, required=True)
    p.add_argument("--alphabet", help="letters of the alphabet (default: letters of the word)")
    p.add_argument("--pirillo", action="store_true", help="search for a pair w1 w2 instead")

    p = add("algebra", None, "truncated F2 free-algebra operations")
    alg = p.add_subparsers(dest="algebra_command", required=True, metavar="OPERATION")

    def add_alg(name, func, help_text):
        q = alg.add_parser(name, parents=[common], help=help_text, description=help_text)
        q.set_defaults(func=func)
        return q

    q = add_alg("binomial", cmd_algebra_binomial, "check (1+x_i)(1+x_i)^15 = 1 mod x_i^16")
    q.add_argument("--d", type=_positive, required=True)
    q.add_argument("--degree", type=_nonneg, default=16)
    q = add_alg("gs-series", cmd_algebra_gs, "coefficients of 1/(1 - d t + sum r_i t^i)")
    q.add_argument("--d", type=_nonneg, required=True)
    q.add_argument("--r", required=True, help="JSON file mapping degree to count")
    q.add_argument("--terms", type=_nonneg, required=True)
    q.add_argument("--eps", help="also check r_i against eps^2 (d - 2 eps)^(i-2)")
    q = add_alg("relator", cmd_algebra_relator, "homogeneous components of p - 1 for a group word")
    q.add_argument("--word", required=True)
    q.add_argument("--rlo", type=_nonneg, required=True)
    q.add_argument("--degree", type=_nonneg, required=True)
    q.add_argument("--d", type=_positive, default=None)
    q = add_alg("member", cmd_algebra_member, "two-sided ideal membership, degree by degree")
    q.add_argument("--poly", required=True)
    q.add_argument("--basis", required=True)
    q.add_argument("--degree", type=_nonneg, required=True)

    p = add("escape", cmd_escape, "build and verify an escape from an infinite-order element")
    p.add_argument("--group", required=True)
    p.add_argument("--element", required=True)
    p.add_argument("--mmax", type=_nonneg, default=escape.DEFAULT_M_MAX)
    p.add_argument("--verify", type=_nonneg, default=2000)
    p.add_argument("--lemma", type=_nonneg, default=200)
    p.add_argument("--probe", type=_positive, default=100)
    return parser


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def main(argv: "Sequence[str] | None" = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    for name, default in (("seed", 0), ("format", "tsv"), ("quiet", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if getattr(args, "command", None) == "algebra" and getattr(args, "d", None) is None \
            and getattr(args, "algebra_command", None) == "relator":
        args.d = _relator_dimension(args.word)
    out = _Output(args)
    try:
        code = args.func(args, out)
    except (OSError, json.JSONDecodeError, FormatError, MachineError, InvalidAlphabet,
            FiniteGroupError, ValueError, KeyError) as exc:
        print(f"cayleytm {args.command}: {exc}", file=sys.stderr)
        return USAGE
    except CayleyTMError as exc:
        print(f"cayleytm {args.command}: {exc}", file=sys.stderr)
        return FAILED
    out.flush()
    return code


def _relator_dimension(word: str) -> int:
    letters = [c.lower() for c in word if c.isalpha()]
    return max((ord(c) - ord("a") + 1 for c in letters), default=1)


if __name__ == "__main__":
    sys.exit(main())
