"""Finitely generated groups with ordered, inverse-closed generating sets.

A :class:`TapeGraph` pairs a :class:`GroupBackend`, which puts words into a
canonical form, with a :class:`GeneratorAlphabet`, which names the generators
in a fixed order and records their inverses.  Every other module treats that
pair as the Cayley graph a machine head walks on: cells are canonical forms
and an edge of colour ``g`` leads from ``x`` to ``x * g``.

Words are tuples of generator indices into the alphabet.
"""
from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import BudgetExhausted, FiniteGroupError, InvalidAlphabet, NotDecidable

Word = tuple[int, ...]
Element = Hashable

EMPTY_WORD_MARKERS = ("", "ε", "()")


class WordVerdict(enum.Enum):
    EQUAL = "equal"
    NOT_EQUAL = "not-equal"
    UNKNOWN = "unknown"

    def __bool__(self) -> bool:
        return self is WordVerdict.EQUAL


@dataclass(frozen=True)
class GeneratorAlphabet:
    """Ordered generator names ``g_1 < ... < g_n`` with an inverse involution."""

    symbols: tuple[str, ...]
    inverse: tuple[int, ...]

    def __post_init__(self):
        n = len(self.symbols)
        if n == 0:
            raise InvalidAlphabet("a generating set needs at least one generator")
        if len(set(self.symbols)) != n:
            raise InvalidAlphabet(f"generator names are not distinct: {self.symbols}")
        if any(not s or s.isspace() or "," in s for s in self.symbols):
            raise InvalidAlphabet(f"unusable generator name in {self.symbols}")
        if len(self.inverse) != n or any(not 0 <= j < n for j in self.inverse):
            raise InvalidAlphabet("inverse map must send every generator to a generator")
        for i, j in enumerate(self.inverse):
            if self.inverse[j] != i:
                raise InvalidAlphabet(
                    f"inverse map is not an involution at {self.symbols[i]!r}")

    @classmethod
    def from_names(cls, symbols: Sequence[str], inverses: Mapping[str, str]) -> "GeneratorAlphabet":
        symbols = tuple(symbols)
        index = {s: i for i, s in enumerate(symbols)}
        inverse = []
        for s in symbols:
            t = inverses.get(s)
            if t is None:
                # the map may be given one way only
                t = next((k for k, v in inverses.items() if v == s), None)
            if t not in index:
                raise InvalidAlphabet(f"generator {s!r} has no inverse in the alphabet")
            inverse.append(index[t])
        return cls(symbols, tuple(inverse))

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, name: str) -> int:
        try:
            return self.symbols.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def invert(self, word: Sequence[int]) -> Word:
        return tuple(self.inverse[g] for g in reversed(word))

    def check_word(self, word: Sequence[int]) -> Word:
        word = tuple(word)
        n = len(self.symbols)
        for g in word:
            if not (isinstance(g, int) and 0 <= g < n):
                raise ValueError(f"{g!r} is not a generator index below {n}")
        return word

    def parse_word(self, text: str) -> Word:
        """Parse ``"a b a"``, ``"a,b,a"`` or ``"aba"`` (longest-match) into a word."""
        text = text.strip()
        if text in EMPTY_WORD_MARKERS:
            return ()
        names = sorted(self.symbols, key=len, reverse=True)
        word = []
        for token in re.split(r"[\s,]+", text):
            if not token:
                continue
            pos = 0
            while pos < len(token):
                for name in names:
                    if token.startswith(name, pos):
                        word.append(self.symbols.index(name))
                        pos += len(name)
                        break
                else:
                    raise ValueError(f"cannot parse {token[pos:]!r} as generators {self.symbols}")
        return tuple(word)

    def format_word(self, word: Sequence[int]) -> str:
        if not word:
            return "ε"
        sep = "" if all(len(s) == 1 for s in self.symbols) else " "
        return sep.join(self.symbols[g] for g in word)


class GroupBackend:
    """Word-problem oracle for one group kind.

    Subclasses provide :meth:`identity` and :meth:`multiply` (right
    multiplication of a canonical form by a generator).  ``decidable``
    backends return canonical forms with ``canonicalize(u) == canonicalize(v)``
    exactly when ``u`` and ``v`` name the same element.
    """

    kind = "abstract"
    decidable = True
    infinite = True
    n_generators: int

    def identity(self) -> Element:
        raise NotImplementedError

    def multiply(self, element: Element, generator: int) -> Element:
        raise NotImplementedError

    def canonicalize(self, word: Sequence[int]) -> Element:
        element = self.identity()
        for g in word:
            element = self.multiply(element, g)
        return element

    def equal(self, u: Sequence[int], v: Sequence[int]) -> WordVerdict:
        try:
            same = self.canonicalize(u) == self.canonicalize(v)
        except BudgetExhausted:
            return WordVerdict.UNKNOWN
        if same:
            return WordVerdict.EQUAL
        return WordVerdict.NOT_EQUAL if self.decidable else WordVerdict.UNKNOWN

    def format_element(self, element: Element, alphabet: GeneratorAlphabet) -> str:
        return alphabet.format_word(element)

    def describe(self) -> str:
        return self.kind


class FreeAbelian(GroupBackend):
    """``Z^d``; generator ``i`` adds ``vectors[i]``.  Canonical form: the integer vector."""

    kind = "free_abelian"

    def __init__(self, vectors: Sequence[Sequence[int]]):
        vectors = [tuple(int(c) for c in v) for v in vectors]
        if not vectors or len({len(v) for v in vectors}) != 1 or not vectors[0]:
            raise ValueError("free abelian generators need equal, positive dimension")
        self.vectors = tuple(vectors)
        self.dimension = len(vectors[0])
        self.n_generators = len(vectors)

    @classmethod
    def standard(cls, d: int) -> "FreeAbelian":
        """Generators ``-e_1, +e_1, -e_2, +e_2, ...``."""
        vecs = []
        for k in range(d):
            for sign in (-1, 1):
                vecs.append(tuple(sign if j == k else 0 for j in range(d)))
        return cls(vecs)

    def identity(self):
        return (0,) * self.dimension

    def multiply(self, element, generator):
        v = self.vectors[generator]
        return tuple(a + b for a, b in zip(element, v))

    def canonicalize(self, word):
        acc = [0] * self.dimension
        for g in word:
            for k, c in enumerate(self.vectors[g]):
                acc[k] += c
        return tuple(acc)

    def format_element(self, element, alphabet):
        return "(" + ",".join(str(c) for c in element) + ")"

    def describe(self):
        return f"free_abelian({self.dimension})"


class FreeGroup(GroupBackend):
    """Free group on the alphabet; canonical form is the freely reduced word."""

    kind = "free_group"

    def __init__(self, inverse: Sequence[int]):
        self.inverse = tuple(inverse)
        self.n_generators = len(self.inverse)
        if any(self.inverse[i] == i for i in range(self.n_generators)):
            raise InvalidAlphabet("a free group has no involutions among its generators")

    @property
    def rank(self) -> int:
        return self.n_generators // 2

    def identity(self):
        return ()

    def multiply(self, element, generator):
        if element and element[-1] == self.inverse[generator]:
            return element[:-1]
        return element + (generator,)

    def canonicalize(self, word):
        out: list[int] = []
        for g in word:
            if out and out[-1] == self.inverse[g]:
                out.pop()
            else:
                out.append(g)
        return tuple(out)

    def describe(self):
        return f"free_group({self.rank})"


class InfiniteDihedral(GroupBackend):
    """``<a, b | a^2, b^2>``; canonical form is the alternating reduced word."""

    kind = "infinite_dihedral"
    n_generators = 2

    def identity(self):
        return ()

    def multiply(self, element, generator):
        if element and element[-1] == generator:
            return element[:-1]
        return element + (generator,)

    def canonicalize(self, word):
        out: list[int] = []
        for g in word:
            if out and out[-1] == g:
                out.pop()
            else:
                out.append(g)
        return tuple(out)


def _shortlex(word: Sequence[int]) -> tuple[int, Word]:
    return len(word), tuple(word)


class FinitelyPresented(GroupBackend):
    """Budgeted shortlex rewriting for an arbitrary finite presentation.

    Every relator yields rules ``u -> v^-1`` (for each cyclic split ``uv`` of
    the relator or its inverse) that strictly decrease shortlex.  Rewriting
    always terminates, but the system need not be confluent, so distinct
    reduced forms prove nothing: :meth:`equal` answers ``EQUAL`` or
    ``UNKNOWN``, never ``NOT_EQUAL``.
    """

    kind = "finitely_presented"
    decidable = False

    def __init__(self, inverse: Sequence[int], relators: Iterable[Sequence[int]],
                 budget: int = 10_000, infinite: bool = True):
        self.inverse = tuple(inverse)
        self.n_generators = len(self.inverse)
        self.budget = int(budget)
        self.infinite = bool(infinite)
        self.relators = tuple(tuple(r) for r in relators)
        self.rules = self._build_rules()
        self._longest_relator = max((len(r) for r in self.relators), default=0)

    def _invert(self, word):
        return tuple(self.inverse[g] for g in reversed(word))

    def _free_reduce(self, word) -> list[int]:
        out: list[int] = []
        for g in word:
            if out and out[-1] == self.inverse[g]:
                out.pop()
            else:
                out.append(g)
        return out

    def _build_rules(self) -> tuple[tuple[Word, Word], ...]:
        best: dict[Word, Word] = {}
        for rel in self.relators:
            rel = tuple(self._free_reduce(rel))
            for r in (rel, self._invert(rel)):
                for k in range(len(r)):
                    rot = r[k:] + r[:k]
                    for cut in range(1, len(rot) + 1):
                        lhs, rest = rot[:cut], rot[cut:]
                        rhs = self._invert(rest)
                        if _shortlex(rhs) < _shortlex(lhs):
                            if lhs not in best or _shortlex(rhs) < _shortlex(best[lhs]):
                                best[lhs] = rhs
        return tuple(sorted(best.items(), key=lambda kv: _shortlex(kv[0])))

    def identity(self):
        return ()

    def _reduce(self, word, budget: int) -> tuple[Word, int]:
        w = self._free_reduce(word)
        steps = 0
        while True:
            hit = None
            for pos in range(len(w)):
                for lhs, rhs in self.rules:
                    if tuple(w[pos:pos + len(lhs)]) == lhs:
                        hit = pos, lhs, rhs
                        break
                if hit:
                    break
            if hit is None:
                return tuple(w), steps
            steps += 1
            if steps > budget:
                raise BudgetExhausted(f"rewriting exceeded {budget} steps")
            pos, lhs, rhs = hit
            w = self._free_reduce(w[:pos] + list(rhs) + w[pos + len(lhs):])

    def canonicalize(self, word):
        return self._reduce(word, self.budget)[0]

    def multiply(self, element, generator):
        return self.canonicalize(tuple(element) + (generator,))

    def _neighbours(self, word: Word, cap: int):
        for lhs, rhs in self.rules:
            for a, b in ((lhs, rhs), (rhs, lhs)):
                if not a:
                    positions = range(len(word) + 1)
                else:
                    positions = [p for p in range(len(word) - len(a) + 1)
                                 if word[p:p + len(a)] == a]
                for p in positions:
                    nxt = tuple(self._free_reduce(word[:p] + b + word[p + len(a):]))
                    if len(nxt) <= cap:
                        yield nxt

    def equal(self, u, v):
        try:
            cu, cv = self.canonicalize(u), self.canonicalize(v)
        except BudgetExhausted:
            return WordVerdict.UNKNOWN
        if cu == cv:
            return WordVerdict.EQUAL
        cap = max(len(cu), len(cv)) + self._longest_relator
        seen = {cu}
        queue = deque([cu])
        expanded = 0
        while queue and expanded < self.budget:
            w = queue.popleft()
            expanded += 1
            for nxt in self._neighbours(w, cap):
                if nxt in seen:
                    continue
                if nxt == cv:
                    return WordVerdict.EQUAL
                seen.add(nxt)
                queue.append(nxt)
        return WordVerdict.UNKNOWN

    def describe(self):
        return f"finitely_presented({len(self.relators)} relators, budget {self.budget})"


class FiniteTable(GroupBackend):
    """A finite group given by its right-multiplication table (negative tests only)."""

    kind = "finite_table"
    infinite = False

    def __init__(self, table: Sequence[Sequence[int]], identity: int = 0):
        self.table = tuple(tuple(row) for row in table)
        self._identity = identity
        self.n_generators = len(self.table[0]) if self.table else 0

    @classmethod
    def cyclic(cls, order: int) -> "FiniteTable":
        """``Z/order`` with generators ``-1, +1``."""
        return cls([[(x - 1) % order, (x + 1) % order] for x in range(order)])

    def identity(self):
        return self._identity

    def multiply(self, element, generator):
        return self.table[element][generator]

    def format_element(self, element, alphabet):
        return str(element)


@dataclass(frozen=True)
class ValidationReport:
    kind: str
    n_generators: int
    decidable: bool
    restrictions: dict[int, str]

    def lines(self) -> list[str]:
        head = f"tape graph: {self.kind}, {self.n_generators} generators, " \
               f"word problem {'decidable' if self.decidable else 'semi-decidable'}"
        return [head] + [f"  restriction {k}: {v}" for k, v in sorted(self.restrictions.items())]


def validate_tape_graph(graph: "TapeGraph") -> ValidationReport:
    """Check the six tape restrictions for the pair (backend, alphabet).

    Restrictions 1, 2 and 5 hold for any Cayley graph on a finite generating
    set; 4 holds because the alphabet generates the group by definition.
    Inverse closure (6) is checked against the oracle and infinity (3) is the
    backend kind's declaration.
    """
    backend, alphabet = graph.backend, graph.alphabet
    n = len(alphabet)
    if backend.n_generators != n:
        raise InvalidAlphabet(
            f"alphabet has {n} generators but the {backend.kind} backend expects {backend.n_generators}")
    for i, j in enumerate(alphabet.inverse):
        if alphabet.inverse[j] != i:
            raise InvalidAlphabet(f"inverse map is not an involution at {alphabet.symbols[i]!r}")
    if not backend.infinite:
        raise FiniteGroupError(f"{backend.describe()} is finite; a tape needs infinitely many cells")
    for i, j in enumerate(alphabet.inverse):
        verdict = backend.equal((i, j), ())
        if verdict is WordVerdict.NOT_EQUAL:
            raise InvalidAlphabet(
                f"{alphabet.symbols[j]!r} is not the inverse of {alphabet.symbols[i]!r}")
        if verdict is WordVerdict.UNKNOWN:
            raise InvalidAlphabet(
                f"could not confirm {alphabet.symbols[j]!r} inverts {alphabet.symbols[i]!r}")
    restrictions = {
        1: "holds: one outgoing edge per generator colour (Cayley graph)",
        2: "holds: left multiplication is a colour-preserving transitive action",
        3: f"declared infinite by backend kind {backend.kind}",
        4: "holds: the generators generate the group",
        5: f"holds: {n} colours",
        6: "checked: g * inverse(g) = e for every generator",
    }
    return ValidationReport(backend.describe(), n, backend.decidable, restrictions)


@dataclass(frozen=True, eq=False)
class TapeGraph:
    """The pair (G, S): a backend plus the ordered generator alphabet.

    Construction validates the pair; finite backends and alphabets that are
    not closed under inverses are rejected here.
    """

    backend: GroupBackend
    alphabet: GeneratorAlphabet
    name: str = ""
    report: ValidationReport = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "report", validate_tape_graph(self))

    @property
    def n_generators(self) -> int:
        return len(self.alphabet)

    @property
    def decidable(self) -> bool:
        return self.backend.decidable

    @property
    def identity(self) -> Element:
        return self.backend.identity()

    def inverse(self, generator: int) -> int:
        return self.alphabet.inverse[generator]

    def move(self, element: Element, generator: int) -> Element:
        return self.backend.multiply(element, generator)

    def canonicalize(self, word: Sequence[int]) -> Element:
        return self.backend.canonicalize(self.alphabet.check_word(word))

    def words_equal(self, u: Sequence[int], v: Sequence[int]) -> WordVerdict:
        return self.backend.equal(self.alphabet.check_word(u), self.alphabet.check_word(v))

    def require_decidable(self, what: str = "this operation") -> None:
        if not self.backend.decidable:
            raise NotDecidable(f"{what} needs a decidable word problem; {self.backend.kind} is not")

    def ball(self, radius: int) -> set:
        """All elements reachable by words of length at most ``radius``."""
        if radius < 0:
            raise ValueError("radius must be non-negative")
        self.require_decidable("ball")
        frontier = [self.identity]
        seen = {self.identity}
        for _ in range(radius):
            nxt = []
            for x in frontier:
                for g in range(self.n_generators):
                    y = self.move(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def format_element(self, element: Element) -> str:
        return self.backend.format_element(element, self.alphabet)

    def parse_word(self, text: str) -> Word:
        return self.alphabet.parse_word(text)

    def format_word(self, word: Sequence[int]) -> str:
        return self.alphabet.format_word(word)


def integers(step_names: tuple[str, str] = ("-1", "+1")) -> TapeGraph:
    """``Z`` with ``S = {-1, +1}`` in that order."""
    alphabet = GeneratorAlphabet(step_names, (1, 0))
    return TapeGraph(FreeAbelian([(-1,), (1,)]), alphabet, name="Z")


def grid() -> TapeGraph:
    """``Z^2`` with ``(0,-1) < (-1,0) < (0,1) < (1,0)``."""
    vecs = [(0, -1), (-1, 0), (0, 1), (1, 0)]
    alphabet = GeneratorAlphabet(("d", "l", "u", "r"), (2, 3, 0, 1))
    return TapeGraph(FreeAbelian(vecs), alphabet, name="Z2")


def free_group(rank: int = 2) -> TapeGraph:
    """Free group with generators ``x < X < y < Y < ...`` (capital = inverse)."""
    letters = "xyzwvutsrq"
    if not 1 <= rank <= len(letters):
        raise ValueError("rank out of range")
    symbols, inverse = [], []
    for k in range(rank):
        symbols += [letters[k], letters[k].upper()]
        inverse += [2 * k + 1, 2 * k]
    return TapeGraph(FreeGroup(inverse), GeneratorAlphabet(tuple(symbols), tuple(inverse)),
                     name=f"F{rank}")


def infinite_dihedral() -> TapeGraph:
    """``<a, b | a^2, b^2>`` with ``a < b``."""
    return TapeGraph(InfiniteDihedral(), GeneratorAlphabet(("a", "b"), (0, 1)), name="Dinf")
