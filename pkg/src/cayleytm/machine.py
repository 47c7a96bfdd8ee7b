"""Deterministic Turing machines whose tape is a Cayley graph.

The tape is a sparse dict keyed by canonical forms, so every head move asks
the word-problem oracle which cell the head landed on.  Cells missing from
the dict hold the blank; writing the blank deletes the entry.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Collection, Hashable, Iterable, Mapping, NamedTuple, Sequence

from .errors import MachineError, PointerClobber
from .groups import Element, TapeGraph, Word

STAY = None  # move that leaves the head where it is


@dataclass(frozen=True)
class MachineSpec:
    """The 7-tuple ``(Q, Gamma, b, Sigma, delta, q0, F)`` over a tape graph.

    ``transitions`` maps ``(state, symbol)`` to ``(state', symbol', move)``
    where ``move`` is a generator index or :data:`STAY`.
    """

    states: Collection[Hashable]
    tape_alphabet: Collection[Hashable]
    blank: Hashable
    input_alphabet: Collection[Hashable]
    transitions: Mapping[tuple[Hashable, Hashable], tuple[Hashable, Hashable, "int | None"]]
    start: Hashable
    terminals: frozenset

    def is_terminal(self, state: Hashable) -> bool:
        return state in self.terminals

    def check(self, n_generators: int) -> None:
        """Enforce the load-time invariants; raises :class:`MachineError`."""
        if self.blank not in self.tape_alphabet:
            raise MachineError("blank symbol is not in the tape alphabet")
        if self.blank in self.input_alphabet:
            raise MachineError("blank symbol may not be an input symbol")
        if not set(self.input_alphabet) <= set(self.tape_alphabet):
            raise MachineError("input alphabet must be a subset of the tape alphabet")
        if self.start not in self.states:
            raise MachineError(f"start state {self.start!r} is not a state")
        if not set(self.terminals) <= set(self.states):
            raise MachineError("terminal states must be states")
        for (q, s), (q2, s2, move) in self.transitions.items():
            if q not in self.states or q2 not in self.states:
                raise MachineError(f"transition {q!r},{s!r} mentions an unknown state")
            if s not in self.tape_alphabet or s2 not in self.tape_alphabet:
                raise MachineError(f"transition {q!r},{s!r} mentions an unknown symbol")
            if move is not STAY and not (isinstance(move, int) and 0 <= move < n_generators):
                raise MachineError(f"transition {q!r},{s!r} moves along unknown generator {move!r}")
        for q in self.states:
            if q in self.terminals:
                continue
            for s in self.tape_alphabet:
                if (q, s) not in self.transitions:
                    raise MachineError(f"transition function is not total: missing ({q!r}, {s!r})")


@dataclass
class Configuration:
    state: Hashable
    head: Element
    tape: dict = field(default_factory=dict)
    steps: int = 0

    def read(self, blank: Hashable) -> Hashable:
        return self.tape.get(self.head, blank)

    def copy(self) -> "Configuration":
        return Configuration(self.state, self.head, dict(self.tape), self.steps)


class TraceRow(NamedTuple):
    step: int
    state: Hashable
    head: Element
    read: Hashable
    write: Hashable
    move: "int | None"


@dataclass(frozen=True)
class HaltReason:
    terminal: bool
    state: Hashable = None

    def __str__(self) -> str:
        return f"Terminal({self.state})" if self.terminal else "OutOfFuel"


OUT_OF_FUEL = HaltReason(False)


class RunResult(NamedTuple):
    config: Configuration
    trace: list[TraceRow]
    halt: HaltReason


def initial_configuration(spec: MachineSpec, graph: TapeGraph,
                          cells: Iterable[tuple[Sequence[int], Hashable]] = (),
                          head: Sequence[int] = ()) -> Configuration:
    """Start configuration with explicit ``(word, symbol)`` tape contents."""
    tape = {}
    for word, symbol in cells:
        if symbol not in spec.tape_alphabet:
            raise MachineError(f"initial symbol {symbol!r} is not in the tape alphabet")
        cell = graph.canonicalize(word)
        if symbol == spec.blank:
            tape.pop(cell, None)
        else:
            tape[cell] = symbol
    return Configuration(spec.start, graph.canonicalize(head), tape, 0)


def advance(spec: MachineSpec, graph: TapeGraph, cfg: Configuration) -> TraceRow:
    """Apply the transition function once, mutating ``cfg``."""
    if spec.is_terminal(cfg.state):
        raise MachineError(f"state {cfg.state!r} is terminal")
    read = cfg.tape.get(cfg.head, spec.blank)
    try:
        new_state, write, move = spec.transitions[(cfg.state, read)]
    except KeyError:
        raise MachineError(f"no transition for ({cfg.state!r}, {read!r})") from None
    row = TraceRow(cfg.steps, cfg.state, cfg.head, read, write, move)
    if write == spec.blank:
        cfg.tape.pop(cfg.head, None)
    else:
        cfg.tape[cfg.head] = write
    if move is not STAY:
        cfg.head = graph.move(cfg.head, move)
    cfg.state = new_state
    cfg.steps += 1
    return row


def step(spec: MachineSpec, graph: TapeGraph, cfg: Configuration) -> Configuration:
    """One transition; returns a new configuration and leaves ``cfg`` untouched."""
    nxt = cfg.copy()
    advance(spec, graph, nxt)
    return nxt


def run(spec: MachineSpec, graph: TapeGraph, cfg: Configuration, fuel: int,
        record: bool = True) -> RunResult:
    """Step until a terminal state or until ``fuel`` transitions have been taken."""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    cfg = cfg.copy()
    trace: list[TraceRow] = []
    for _ in range(fuel):
        if spec.is_terminal(cfg.state):
            break
        row = advance(spec, graph, cfg)
        if record:
            trace.append(row)
    if spec.is_terminal(cfg.state):
        return RunResult(cfg, trace, HaltReason(True, cfg.state))
    return RunResult(cfg, trace, OUT_OF_FUEL)


class PointerTrail:
    """First phase of the pointer-trail word-problem procedure for a fixed word ``u``.

    The head follows ``u`` from the origin and, at each cell it enters, pushes
    the inverse of the generator it just crossed.  It marks the final cell and
    walks back by popping pointers, so a self-intersecting ``u`` is unwound in
    reverse visit order.  With ``strict=True`` each cell holds one pointer
    and a revisit raises :class:`PointerClobber`.
    """

    def __init__(self, graph: TapeGraph, u: Sequence[int], strict: bool = False):
        self.graph = graph
        self.u = graph.alphabet.check_word(u)
        origin = graph.identity
        pointers: dict[Element, list[tuple[int, int]]] = {}
        occupied = {origin}
        head = origin
        writes = 0
        for visit, g in enumerate(self.u, start=1):
            head = graph.move(head, g)
            if strict and head in occupied:
                raise PointerClobber(
                    f"step {visit} re-enters a cell that already carries a pointer")
            occupied.add(head)
            pointers.setdefault(head, []).append((visit, graph.inverse(g)))
            writes += 1
        self.marks = {head}
        self.pointer_writes = writes
        # follow pointers home; an empty stack can only happen at the origin at visit 0
        returned = 0
        while pointers.get(head):
            _, back = pointers[head].pop()
            head = graph.move(head, back)
            returned += 1
        if head != origin or returned != len(self.u):
            raise AssertionError("pointer trail did not lead back to the origin")
        self.origin = head

    def arrival(self, v: Sequence[int]) -> Element:
        """Cell reached by walking ``v`` from the origin."""
        head = self.origin
        for g in self.graph.alphabet.check_word(v):
            head = self.graph.move(head, g)
        return head

    def arrives_marked(self, v: Sequence[int]) -> bool:
        return self.arrival(v) in self.marks


def word_problem_walk(graph: TapeGraph, u: Sequence[int], v: Sequence[int],
                      strict: bool = False) -> bool:
    """Decide ``u == v`` in the group with head moves and tape marks alone."""
    return PointerTrail(graph, u, strict=strict).arrives_marked(v)
