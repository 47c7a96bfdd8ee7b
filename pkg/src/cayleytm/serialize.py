"""JSON loaders and dumpers for groups, machines and polynomials; TSV traces."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Mapping

from .algebra import HomogeneousBasis, TruncatedPoly, parse_monomial
from .compiler import LEFT, RIGHT, CompiledMachine, StandardTM
from .groups import (FiniteTable, FinitelyPresented, FreeAbelian, FreeGroup, GeneratorAlphabet,
                     InfiniteDihedral, TapeGraph)
from .machine import STAY, MachineSpec, TraceRow

STAY_NAMES = (None, "stay", "S", "")


class FormatError(ValueError):
    """A description file is missing fields or has the wrong shape."""


def read_json(path: "str | Path") -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(data: Any, path: "str | Path | None" = None) -> str:
    text = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _require(data: Mapping, key: str, what: str):
    if key not in data:
        raise FormatError(f"{what} description has no {key!r} field")
    return data[key]


def _alphabet(data: Mapping, default_names=None, self_inverse=False) -> GeneratorAlphabet:
    names = data.get("generators", default_names)
    if names is None:
        raise FormatError("group description has no 'generators' field")
    names = [str(s) for s in names]
    inverses = data.get("inverses")
    if inverses is None:
        if not self_inverse:
            raise FormatError("group description has no 'inverses' field")
        inverses = {s: s for s in names}
    return GeneratorAlphabet.from_names(names, {str(k): str(v) for k, v in inverses.items()})


def _word(alphabet: GeneratorAlphabet, item) -> tuple[int, ...]:
    if isinstance(item, str):
        return alphabet.parse_word(item)
    return tuple(alphabet.index(str(s)) for s in item)


def group_from_dict(data: Mapping) -> TapeGraph:
    """Build and validate a tape graph from a group description."""
    kind = _require(data, "kind", "group")
    name = str(data.get("name", ""))
    if kind == "free_abelian":
        if "vectors" in data:
            backend = FreeAbelian(data["vectors"])
        else:
            backend = FreeAbelian.standard(int(_require(data, "dimension", "free_abelian group")))
        alphabet = _alphabet(data)
    elif kind == "free_group":
        alphabet = _alphabet(data)
        backend = FreeGroup(alphabet.inverse)
    elif kind == "infinite_dihedral":
        alphabet = _alphabet(data, default_names=["a", "b"], self_inverse=True)
        backend = InfiniteDihedral()
    elif kind == "finitely_presented":
        alphabet = _alphabet(data)
        relators = [_word(alphabet, r) for r in data.get("relators", [])]
        backend = FinitelyPresented(alphabet.inverse, relators, budget=int(data.get("budget", 10_000)),
                                    infinite=bool(data.get("infinite", True)))
    elif kind == "finite_table":
        alphabet = _alphabet(data)
        backend = FiniteTable(_require(data, "table", "finite_table group"), int(data.get("identity", 0)))
    else:
        raise FormatError(f"unknown group kind {kind!r}")
    return TapeGraph(backend, alphabet, name=name)


def load_group(path: "str | Path") -> TapeGraph:
    return group_from_dict(read_json(path))


def _move_from_name(graph: TapeGraph, name):
    if name in STAY_NAMES:
        return STAY
    return graph.alphabet.index(str(name))


def _transition_rows(data: Mapping) -> list:
    rows = _require(data, "transitions", "machine")
    for row in rows:
        if not isinstance(row, (list, tuple)) or len(row) != 5:
            raise FormatError(f"transition row {row!r} is not [state, read, state', write, move]")
    return rows


def machine_is_standard(data: Mapping) -> bool:
    return data.get("type") == "standard"


def standard_from_dict(data: Mapping) -> StandardTM:
    rows = _transition_rows(data)
    transitions = {}
    for q, s, q2, s2, d in rows:
        if d not in (LEFT, RIGHT):
            raise FormatError(f"standard machine move {d!r} is not L or R")
        transitions[(q, s)] = (q2, s2, d)
    tm = StandardTM(
        states=frozenset(_require(data, "states", "machine")),
        alphabet=frozenset(_require(data, "alphabet", "machine")),
        blank=_require(data, "blank", "machine"),
        input_alphabet=frozenset(_require(data, "input_alphabet", "machine")),
        transitions=transitions,
        start=_require(data, "start", "machine"),
        terminals=frozenset(data.get("terminals", [])),
    )
    tm.check()
    return tm


def machine_from_dict(data: Mapping, graph: TapeGraph) -> MachineSpec:
    """A machine over ``graph``; moves name generators or ``stay``."""
    if machine_is_standard(data):
        raise FormatError("this is a standard machine; compile it for a tape graph first")
    transitions = {}
    for q, s, q2, s2, move in _transition_rows(data):
        try:
            transitions[(q, s)] = (q2, s2, _move_from_name(graph, move))
        except KeyError as exc:
            raise FormatError(str(exc)) from None
    spec = MachineSpec(
        states=frozenset(_require(data, "states", "machine")),
        tape_alphabet=frozenset(_require(data, "alphabet", "machine")),
        blank=_require(data, "blank", "machine"),
        input_alphabet=frozenset(data.get("input_alphabet", [])),
        transitions=transitions,
        start=_require(data, "start", "machine"),
        terminals=frozenset(data.get("terminals", [])),
    )
    spec.check(graph.n_generators)
    return spec


def standard_to_dict(tm: StandardTM) -> dict:
    return {
        "type": "standard",
        "states": sorted(tm.states, key=str),
        "alphabet": sorted(tm.alphabet, key=str),
        "blank": tm.blank,
        "input_alphabet": sorted(tm.input_alphabet, key=str),
        "transitions": [[q, s, *tm.transitions[(q, s)]]
                        for q, s in sorted(tm.transitions, key=lambda k: (str(k[0]), str(k[1])))],
        "start": tm.start,
        "terminals": sorted(tm.terminals, key=str),
    }


def compiled_to_dict(compiled: CompiledMachine, graph: TapeGraph) -> dict:
    """Flatten a compiled machine into the graph-machine JSON with readable names."""
    names = graph.alphabet.symbols
    state_name = compiled.state_name
    symbol_name = compiled.symbol_name
    rows = []
    for state, sym in compiled.transitions:
        state2, sym2, move = compiled.transitions[(state, sym)]
        rows.append([state_name(state), symbol_name(sym), state_name(state2), symbol_name(sym2),
                     "stay" if move is STAY else names[move]])
    return {
        "type": "graph",
        "generators": list(names),
        "states": [state_name(q) for q in compiled.states],
        "alphabet": [symbol_name(s) for s in compiled.tape_alphabet],
        "blank": symbol_name(compiled.blank),
        "input_alphabet": [symbol_name(s) for s in compiled.input_alphabet],
        "transitions": rows,
        "start": state_name(compiled.start),
        "terminals": sorted(state_name(q) for q in compiled.terminals),
    }


def trace_tsv(trace: Iterable[TraceRow], graph: TapeGraph, state_name=str, symbol_name=str) -> str:
    out = io.StringIO()
    writer = csv.writer(out, delimiter="\t", lineterminator="\n")
    writer.writerow(["step", "state", "head", "read", "write", "move"])
    for row in trace:
        move = "stay" if row.move is STAY else graph.alphabet.symbols[row.move]
        writer.writerow([row.step, state_name(row.state), graph.format_element(row.head),
                         symbol_name(row.read), symbol_name(row.write), move])
    return out.getvalue()


def poly_from_dict(data: Mapping, cap: "int | None" = None) -> TruncatedPoly:
    d = int(_require(data, "d", "polynomial"))
    monomials = [parse_monomial(s) for s in _require(data, "monomials", "polynomial")]
    if cap is None:
        cap = max((len(m) for m in monomials), default=0)
    return TruncatedPoly.from_terms(monomials, d, cap)


def poly_to_dict(poly: TruncatedPoly) -> dict:
    return {"d": poly.d, "monomials": poly.monomials()}


def basis_from_dict(data: Mapping) -> HomogeneousBasis:
    d = int(_require(data, "d", "basis"))
    return HomogeneousBasis.parse(_require(data, "polynomials", "basis"), d)


def basis_to_dict(basis: HomogeneousBasis) -> dict:
    return {"d": basis.d, "polynomials": [f.monomials() for f in basis]}


def counts_from_dict(data: Mapping) -> dict[int, int]:
    """Degree counts ``{"11": 2, ...}``, optionally wrapped as ``{"r": {...}}``."""
    if "r" in data and isinstance(data["r"], Mapping):
        data = data["r"]
    try:
        return {int(k): int(v) for k, v in data.items()}
    except (TypeError, ValueError):
        raise FormatError("degree counts must map integer degrees to integer counts") from None
