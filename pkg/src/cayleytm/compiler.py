"""Compile a standard one-tape machine into a machine over any tape graph.

The compiled machine keeps the simulated tape on a spanning tree that it
grows on-line in lexicographic (pre-)order.  Each cell stores

* ``symbol`` -- the simulated tape symbol,
* ``parent`` -- the extended generator leading one step toward the root
  (``LOW`` at the root),
* ``children`` -- generators of tree edges pointing away from the root,
* ``blocked`` -- generators already ruled out as tree edges.

Extended generators number the alphabet ``1..n`` and add two sentinels
``LOW = 0`` and ``HIGH = n + 1`` that act as the identity when used as
moves and as -inf/+inf in the ordering comparisons.

Simulated tape convention: one-way infinite, a left move at cell 0 stays,
the head starts on cell 0 (the tree root) which is blank, and the input
occupies cells ``1..k``.
"""
from __future__ import annotations

import enum
import itertools
from collections.abc import Collection, Mapping
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, NamedTuple, Sequence

from .errors import MachineError
from .groups import Element, TapeGraph, Word
from .machine import STAY, Configuration, MachineSpec, advance

LEFT, RIGHT = "L", "R"


@dataclass(frozen=True)
class StandardTM:
    """A classical machine on a one-way infinite tape; moves are ``"L"``/``"R"``."""

    states: frozenset
    alphabet: frozenset
    blank: Hashable
    input_alphabet: frozenset
    transitions: Mapping[tuple[Hashable, Hashable], tuple[Hashable, Hashable, str]]
    start: Hashable
    terminals: frozenset

    def check(self) -> None:
        if self.blank not in self.alphabet or self.blank in self.input_alphabet:
            raise MachineError("blank must be a tape symbol and not an input symbol")
        if not self.input_alphabet <= self.alphabet:
            raise MachineError("input alphabet must be a subset of the tape alphabet")
        if self.start not in self.states or not self.terminals <= self.states:
            raise MachineError("start and terminal states must be states")
        for (q, s), (q2, s2, d) in self.transitions.items():
            if q not in self.states or q2 not in self.states:
                raise MachineError(f"transition {q!r},{s!r} mentions an unknown state")
            if s not in self.alphabet or s2 not in self.alphabet:
                raise MachineError(f"transition {q!r},{s!r} mentions an unknown symbol")
            if d not in (LEFT, RIGHT):
                raise MachineError(f"transition {q!r},{s!r} has move {d!r}; expected L or R")
        for q in self.states - self.terminals:
            for s in self.alphabet:
                if (q, s) not in self.transitions:
                    raise MachineError(f"transition function is not total: missing ({q!r}, {s!r})")


class StandardRun(NamedTuple):
    visits: list[tuple[Hashable, Hashable]]  # (state, symbol read) at steps 0..T
    halted: bool
    tape: dict[int, Hashable]
    head: int


def run_standard(tm: StandardTM, word: Sequence[Hashable], fuel: int) -> StandardRun:
    """Run ``tm`` directly: blank cell 0 under the head, input on cells 1..k."""
    for s in word:
        if s not in tm.input_alphabet:
            raise MachineError(f"{s!r} is not an input symbol")
    tape = {i + 1: s for i, s in enumerate(word)}
    head, state = 0, tm.start
    visits = []
    for _ in range(fuel):
        read = tape.get(head, tm.blank)
        visits.append((state, read))
        if state in tm.terminals:
            return StandardRun(visits, True, tape, head)
        state, write, d = tm.transitions[(state, read)]
        if write == tm.blank:
            tape.pop(head, None)
        else:
            tape[head] = write
        head = head + 1 if d == RIGHT else max(head - 1, 0)
    visits.append((state, tape.get(head, tm.blank)))
    return StandardRun(visits, state in tm.terminals, tape, head)


@dataclass(frozen=True)
class ExtendedGenerators:
    """``S' = S + {LOW, HIGH}`` with ``LOW < g_1 < ... < g_n < HIGH``."""

    inverse: tuple[int, ...]  # inverse map of the underlying alphabet (0-based)

    LOW = 0

    @property
    def n(self) -> int:
        return len(self.inverse)

    @property
    def HIGH(self) -> int:
        return self.n + 1

    @property
    def generators(self) -> range:
        return range(1, self.n + 1)

    @property
    def all(self) -> range:
        return range(0, self.n + 2)

    def move(self, x: int) -> "int | None":
        """Head move for an extended generator; sentinels do not move."""
        return STAY if x in (self.LOW, self.HIGH) else x - 1

    def inv(self, x: int) -> int:
        if x in (self.LOW, self.HIGH):
            return x
        return self.inverse[x - 1] + 1

    def name(self, x: int, symbols: Sequence[str]) -> str:
        if x == self.LOW:
            return "<g0>"
        if x == self.HIGH:
            return f"<g{self.n + 1}>"
        return symbols[x - 1]


class Kind(str, enum.Enum):
    COMPUTE = "C"
    RIGHT = "R"
    LEFT = "L"
    EXTEND = "E"
    BACKTRACK = "B"


class CompiledState(NamedTuple):
    kind: Kind
    state: Hashable           # the simulated machine's state
    edge: "int | None" = None  # extended generator argument (None for COMPUTE)


class CompiledSymbol(NamedTuple):
    symbol: Hashable
    parent: int
    children: frozenset
    blocked: frozenset


_EMPTY: frozenset = frozenset()


class _LazySet(Collection):
    """A finite set described by a membership test and an enumerator."""

    def __init__(self, contains: Callable[[object], bool], iterate: Callable[[], Iterator],
                 size: int):
        self._contains, self._iterate, self._size = contains, iterate, size

    def __contains__(self, item) -> bool:
        try:
            return self._contains(item)
        except (TypeError, ValueError, AttributeError):
            return False

    def __iter__(self):
        return self._iterate()

    def __len__(self) -> int:
        return self._size


def _subsets(items: Sequence[int]) -> Iterator[frozenset]:
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield frozenset(combo)


def _disjoint_pairs(items: Sequence[int]) -> Iterator[tuple[frozenset, frozenset]]:
    # each generator is a child, blocked, or undecided
    for labels in itertools.product((0, 1, 2), repeat=len(items)):
        yield (frozenset(g for g, t in zip(items, labels) if t == 1),
               frozenset(g for g, t in zip(items, labels) if t == 2))


class TableOneTransitions(Mapping):
    """The compiled transition function, evaluated row by row on demand.

    Iteration enumerates every ``(state, symbol)`` pair with a non-terminal
    state over the symbols with disjoint ``children``/``blocked`` sets.
    """

    def __init__(self, tm: StandardTM, ext: ExtendedGenerators):
        self.tm = tm
        self.ext = ext
        self.states = _compiled_states(tm, ext)
        self.symbols = _compiled_symbols(tm.alphabet, ext)

    def __getitem__(self, key):
        state, sym = key
        if state not in self.states or sym not in self.symbols:
            raise KeyError(key)
        if state.kind is Kind.COMPUTE and state.state in self.tm.terminals:
            raise KeyError(key)
        return table_one_row(self.tm, self.ext, state, sym)

    def __iter__(self):
        for state in self.states:
            if state.kind is Kind.COMPUTE and state.state in self.tm.terminals:
                continue
            for sym in self.symbols:
                yield (state, sym)

    def __len__(self) -> int:
        live = len(self.states) - len(self.tm.terminals)
        return live * len(self.symbols)


def table_one_row(tm: StandardTM, ext: ExtendedGenerators, state: CompiledState,
                  sym: CompiledSymbol) -> tuple[CompiledState, CompiledSymbol, "int | None"]:
    """Evaluate one row of the compiled transition table.

    Rows that move the head to the parent pass ``inv(parent)`` as the new
    edge argument, so at the parent the argument names the child edge that
    was just climbed, in the parent's own labels.
    """
    q = state.state
    kind = state.kind
    if kind is Kind.COMPUTE:
        q2, written, d = tm.transitions[(q, sym.symbol)]
        out = sym._replace(symbol=written)
        if d == RIGHT:
            return CompiledState(Kind.RIGHT, q2, ext.LOW), out, STAY
        return CompiledState(Kind.LEFT, q2, ext.inv(sym.parent)), out, ext.move(sym.parent)

    x = state.edge
    if kind is Kind.LEFT:
        smaller = [y for y in sym.children if y < x]
        if not smaller:
            return CompiledState(Kind.COMPUTE, q), sym, STAY
        return CompiledState(Kind.LEFT, q, ext.HIGH), sym, ext.move(max(smaller))

    if kind is Kind.RIGHT:
        larger = [y for y in sym.children if y > x]
        if larger:
            return CompiledState(Kind.COMPUTE, q), sym, ext.move(min(larger))
        free = [z for z in ext.generators if z not in sym.blocked and z > x]
        if free:
            y = min(free)
            return (CompiledState(Kind.EXTEND, q, y),
                    sym._replace(children=sym.children | {y}), ext.move(y))
        return CompiledState(Kind.RIGHT, q, ext.inv(sym.parent)), sym, ext.move(sym.parent)

    if kind is Kind.EXTEND:
        if not sym.children and not sym.blocked:
            back = ext.inv(x)
            return CompiledState(Kind.COMPUTE, q), CompiledSymbol(sym.symbol, back, _EMPTY,
                                                                   frozenset({back})), STAY
        return CompiledState(Kind.BACKTRACK, q, x), sym, ext.move(ext.inv(x))

    if kind is Kind.BACKTRACK:
        return (CompiledState(Kind.RIGHT, q, x),
                sym._replace(children=sym.children - {x}, blocked=sym.blocked | {x}), STAY)
    raise KeyError(state)


def _compiled_states(tm: StandardTM, ext: ExtendedGenerators) -> _LazySet:
    order = sorted(tm.states, key=repr)

    def iterate():
        for q in order:
            yield CompiledState(Kind.COMPUTE, q)
        for kind, edges in ((Kind.RIGHT, ext.all), (Kind.LEFT, ext.all),
                            (Kind.EXTEND, ext.generators), (Kind.BACKTRACK, ext.generators)):
            for q in order:
                for x in edges:
                    yield CompiledState(kind, q, x)

    def contains(s):
        if not isinstance(s, CompiledState) or s.state not in tm.states:
            return False
        if s.kind is Kind.COMPUTE:
            return s.edge is None
        if s.kind in (Kind.RIGHT, Kind.LEFT):
            return s.edge in ext.all
        return s.edge in ext.generators

    size = len(tm.states) * (1 + 2 * (ext.n + 2) + 2 * ext.n)
    return _LazySet(contains, iterate, size)


def _compiled_symbols(alphabet: Iterable[Hashable], ext: ExtendedGenerators,
                      subset: "Iterable[Hashable] | None" = None) -> _LazySet:
    base = frozenset(alphabet if subset is None else subset)
    order = sorted(base, key=repr)
    gens = list(ext.generators)

    def iterate():
        for s in order:
            for p in ext.all:
                for children, blocked in _disjoint_pairs(gens):
                    yield CompiledSymbol(s, p, children, blocked)

    def contains(c):
        return (isinstance(c, CompiledSymbol) and c.symbol in base and c.parent in ext.all
                and c.children <= set(gens) and c.blocked <= set(gens)
                and not (c.children & c.blocked))

    return _LazySet(contains, iterate, len(base) * (ext.n + 2) * 3 ** ext.n)


@dataclass(frozen=True)
class CompiledMachine(MachineSpec):
    """A :class:`MachineSpec` produced by :func:`compile_machine`."""

    source: StandardTM = None
    extended: ExtendedGenerators = None
    generator_names: tuple[str, ...] = ()

    def state_name(self, state: CompiledState) -> str:
        if state.kind is Kind.COMPUTE:
            return f"C({state.state})"
        return f"{state.kind.value}({state.state},{self.extended.name(state.edge, self.generator_names)})"

    def symbol_name(self, sym: CompiledSymbol) -> str:
        def names(xs):
            return "{" + ",".join(self.extended.name(x, self.generator_names) for x in sorted(xs)) + "}"
        return (f"[{sym.symbol}|{self.extended.name(sym.parent, self.generator_names)}|"
                f"{names(sym.children)}|{names(sym.blocked)}]")


def compile_machine(tm: StandardTM, graph: TapeGraph) -> CompiledMachine:
    """Build the machine over ``graph`` that simulates ``tm``."""
    tm.check()
    ext = ExtendedGenerators(graph.alphabet.inverse)
    transitions = TableOneTransitions(tm, ext)
    return CompiledMachine(
        states=transitions.states,
        tape_alphabet=transitions.symbols,
        blank=CompiledSymbol(tm.blank, ext.LOW, _EMPTY, _EMPTY),
        input_alphabet=_compiled_symbols(tm.alphabet, ext, subset=tm.input_alphabet),
        transitions=transitions,
        start=CompiledState(Kind.COMPUTE, tm.start),
        terminals=frozenset(CompiledState(Kind.COMPUTE, q) for q in tm.terminals),
        source=tm,
        extended=ext,
        generator_names=graph.alphabet.symbols,
    )


def _move_right(compiled: CompiledMachine, graph: TapeGraph, cfg: Configuration) -> None:
    # reuse the compiled rightward rows, then hand control back to the caller
    cfg.state = CompiledState(Kind.RIGHT, compiled.source.start, compiled.extended.LOW)
    while cfg.state.kind is not Kind.COMPUTE:
        advance(compiled, graph, cfg)


def return_to_root(compiled: CompiledMachine, graph: TapeGraph, cfg: Configuration) -> int:
    """Follow parent pointers to the root; returns the number of moves."""
    moves = 0
    while True:
        cell = cfg.tape.get(cfg.head, compiled.blank)
        if cell.parent == compiled.extended.LOW:
            return moves
        cfg.head = graph.move(cfg.head, compiled.extended.move(cell.parent))
        moves += 1


def transcribe_input(compiled: CompiledMachine, graph: TapeGraph,
                     word: Sequence[Hashable]) -> Configuration:
    """Lay ``word`` on tree cells 1..k and park the head on the root in ``C q0``."""
    cfg = Configuration(compiled.start, graph.identity, {}, 0)
    for s in word:
        if s not in compiled.source.input_alphabet:
            raise MachineError(f"{s!r} is not an input symbol")
        _move_right(compiled, graph, cfg)
        cell = cfg.tape.get(cfg.head, compiled.blank)
        cfg.tape[cfg.head] = cell._replace(symbol=s)
    return_to_root(compiled, graph, cfg)
    cfg.state = compiled.start
    cfg.steps = 0
    return cfg


def visitation_order(compiled: CompiledMachine, graph: TapeGraph, fuel: int,
                     word: Sequence[Hashable] = ()) -> list[Word]:
    """Tree paths of the cells created while running ``fuel`` compiled steps.

    Creation happens in an EXTEND state that reads a cell with no children
    and nothing blocked; the new path is the parent's path plus the edge.
    """
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    ext = compiled.extended
    cfg = transcribe_input(compiled, graph, word)
    paths: dict[Element, Word] = {}
    # paths of cells created during transcription: walk tree edges from the root
    stack = [(graph.identity, ())]
    while stack:
        cell, path = stack.pop()
        paths[cell] = path
        sym = cfg.tape.get(cell, compiled.blank)
        for y in sym.children:
            stack.append((graph.move(cell, ext.move(y)), path + (ext.move(y),)))
    created: list[Word] = []
    for _ in range(fuel):
        if compiled.is_terminal(cfg.state):
            break
        state = cfg.state
        read = cfg.tape.get(cfg.head, compiled.blank)
        if state.kind is Kind.EXTEND and not read.children and not read.blocked:
            parent = graph.move(cfg.head, ext.move(ext.inv(state.edge)))
            path = paths[parent] + (ext.move(state.edge),)
            paths[cfg.head] = path
            created.append(path)
        advance(compiled, graph, cfg)
    return created


@dataclass
class BisimReport:
    equivalent: bool
    compared: int
    compiled_steps: int
    compiled_halted: bool
    direct_halted: bool
    mismatch: "str | None" = None

    def summary(self) -> str:
        verdict = "equivalent" if self.equivalent else "MISMATCH"
        status = "terminated" if self.compiled_halted else "out of fuel"
        line = (f"{verdict}: {self.compared} simulated steps compared, "
                f"{self.compiled_steps} compiled steps ({status})")
        return line if self.mismatch is None else f"{line}; {self.mismatch}"


def compute_projection(compiled: CompiledMachine, graph: TapeGraph, cfg: Configuration,
                       fuel: int) -> tuple[list[tuple[Hashable, Hashable]], int, bool]:
    """Run ``fuel`` compiled steps, returning the (state, symbol) pairs seen in COMPUTE states."""
    cfg = cfg.copy()
    visits = []
    for _ in range(fuel):
        if cfg.state.kind is Kind.COMPUTE:
            visits.append((cfg.state.state, cfg.tape.get(cfg.head, compiled.blank).symbol))
        if compiled.is_terminal(cfg.state):
            return visits, cfg.steps, True
        advance(compiled, graph, cfg)
    if cfg.state.kind is Kind.COMPUTE:
        visits.append((cfg.state.state, cfg.tape.get(cfg.head, compiled.blank).symbol))
    return visits, cfg.steps, compiled.is_terminal(cfg.state)


def bisimulate(tm: StandardTM, graph: TapeGraph, word: Sequence[Hashable],
               fuel: int) -> BisimReport:
    """Compare the direct run of ``tm`` with its compiled run, step for step."""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    if fuel == 0:
        return BisimReport(True, 0, 0, False, False)
    compiled = compile_machine(tm, graph)
    start = transcribe_input(compiled, graph, word)
    projected, steps, halted = compute_projection(compiled, graph, start, fuel)
    direct = run_standard(tm, word, fuel)
    for i, (got, want) in enumerate(zip(projected, direct.visits)):
        if got != want:
            return BisimReport(False, i, steps, halted, direct.halted,
                               f"step {i}: compiled {got!r} vs direct {want!r}")
    if len(projected) > len(direct.visits):
        return BisimReport(False, len(direct.visits), steps, halted, direct.halted,
                           "compiled machine kept computing after the direct run stopped")
    if halted and not (direct.halted and len(direct.visits) == len(projected)):
        return BisimReport(False, len(projected), steps, halted, direct.halted,
                           "compiled machine halted but the direct run did not")
    return BisimReport(True, len(projected), steps, halted, direct.halted)
