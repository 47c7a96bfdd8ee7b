"""Computable escapes from an element of infinite order.

Repeating a word ``a = h_0 ... h_{m-1}`` for an infinite-order element
visits infinitely many cells but may cross itself.  The schedule built
here finds the relations

    delta(r, s, M) = h_{r+1} ... h_{m-1} . a^M . h_0 ... h_{s-1} = e

and uses them to jump past each loop, giving an eventually periodic index
sequence ``x_n`` over ``[0, m-1]`` whose letters ``h_{x_1}, h_{x_2}, ...``
never revisit a cell.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import EscapeError
from .groups import Element, TapeGraph, Word

DEFAULT_M_MAX = 64


@dataclass(frozen=True)
class EventuallyPeriodic:
    """The infinite word ``prefix . period . period . ...``."""

    prefix: Word
    period: Word

    def __post_init__(self):
        if not self.period:
            raise ValueError("the periodic part must be non-empty")

    def __getitem__(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def take(self, n: int) -> Iterator[int]:
        for i in range(n):
            yield self[i]


def as_sequence(seq: "EventuallyPeriodic | Sequence[int]") -> EventuallyPeriodic:
    if isinstance(seq, EventuallyPeriodic):
        return seq
    return EventuallyPeriodic((), tuple(seq))


def _power_element(graph: TapeGraph, word: Sequence[int], k: int, start: Element = None) -> Element:
    element = graph.identity if start is None else start
    for _ in range(k):
        for g in word:
            element = graph.move(element, g)
    return element


def order_probe(graph: TapeGraph, word: Sequence[int], bound: int) -> bool:
    """True iff ``word^k`` is not the identity for every ``1 <= k <= bound``."""
    graph.require_decidable("order_probe")
    word = graph.alphabet.check_word(word)
    element = graph.identity
    for _ in range(bound):
        element = _power_element(graph, word, 1, element)
        if element == graph.identity:
            return False
    return True


@dataclass(frozen=True)
class InfiniteOrderWitness:
    word: Word
    minimality_checked: bool
    order_probe_bound: int

    @property
    def length(self) -> int:
        return len(self.word)


def make_witness(graph: TapeGraph, word: Sequence[int], probe_bound: int = 100,
                 check_minimality: bool = True) -> InfiniteOrderWitness:
    """Probe the order of ``word`` and check no shorter word names the same element."""
    word = graph.alphabet.check_word(word)
    if not word:
        raise EscapeError("the identity has finite order")
    if not order_probe(graph, word, probe_bound):
        raise EscapeError(f"{graph.format_word(word)} has order at most {probe_bound}")
    checked = False
    if check_minimality:
        if graph.canonicalize(word) in graph.ball(len(word) - 1):
            raise EscapeError(f"{graph.format_word(word)} is not an expression of minimal length")
        checked = True
    return InfiniteOrderWitness(word, checked, probe_bound)


@dataclass(frozen=True)
class EscapeSchedule:
    """The relation tables and the escape they produce.

    ``alpha[r]`` is the set of ``(M, s)`` with ``delta(r, s, M) = e`` and
    ``M <= m_max``; ``orbit[n]`` is the ``n``-th iterate of ``gamma`` on
    ``m - 1``; ``period = (j1, j2)`` bounds one cycle of the orbit (inclusive,
    ``j1 >= 1``).
    """

    word: Word
    m_max: int
    alpha: dict[int, frozenset]
    beta: dict[int, int]
    gamma: dict[int, int]
    orbit: tuple[int, ...]
    period: tuple[int, int]
    k_seq: tuple[int, ...] = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.word)

    def letters(self, start: int, stop: int) -> Word:
        """``h_{orbit[start]} ... h_{orbit[stop]}`` (inclusive)."""
        return tuple(self.word[self.index(n)] for n in range(start, stop + 1))

    def index(self, n: int) -> int:
        """``gamma^(n)(m-1)`` for any ``n >= 0``."""
        j1, j2 = self.period
        if n < len(self.orbit):
            return self.orbit[n]
        return self.orbit[j1 + (n - j1) % (j2 - j1 + 1)]

    @property
    def escape_word(self) -> Word:
        return self.letters(*self.period)

    @property
    def sequence(self) -> EventuallyPeriodic:
        """The full escape ``h_{x_1}, h_{x_2}, ...`` including any pre-period."""
        j1, _ = self.period
        return EventuallyPeriodic(self.letters(1, j1 - 1), self.escape_word)

    def step(self, n: int) -> int:
        """``k_{n+1} - k_n`` by the three-case recurrence."""
        x = self.index(n)
        if not self.alpha[x]:
            return 1 if x == self.m - 1 else 0
        return self.beta[x] + 1

    def k_values(self, n_max: int) -> list[int]:
        ks = [-1]
        for n in range(n_max):
            ks.append(ks[-1] + self.step(n))
        return ks


def _floyd(f, x0: int) -> tuple[int, int]:
    """Start ``mu`` and length ``lam`` of the cycle reached from ``x0``."""
    tortoise, hare = f(x0), f(f(x0))
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(f(hare))
    mu, tortoise = 0, x0
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(hare)
        mu += 1
    lam, hare = 1, f(tortoise)
    while tortoise != hare:
        hare = f(hare)
        lam += 1
    return mu, lam


def compute_schedule(graph: TapeGraph, witness: InfiniteOrderWitness,
                     m_max: int = DEFAULT_M_MAX) -> EscapeSchedule:
    graph.require_decidable("compute_schedule")
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    h = witness.word
    m = len(h)
    identity = graph.identity
    alpha: dict[int, frozenset] = {}
    for r in range(m):
        found = set()
        element = _power_element(graph, h[r + 1:], 1)
        for big_m in range(m_max + 1):
            if big_m:
                element = _power_element(graph, h, 1, element)
            tail = element
            for s in range(m):
                if s:
                    tail = graph.move(tail, h[s - 1])
                if tail == identity:
                    found.add((big_m, s))
        alpha[r] = frozenset(found)
        seen_s: dict[int, int] = {}
        seen_m: dict[int, int] = {}
        for big_m, s in sorted(found):
            if s in seen_s:
                raise EscapeError(f"r={r}, s={s}: two exponents {seen_s[s]} and {big_m}; "
                                  "the element does not have infinite order")
            if big_m in seen_m:
                raise EscapeError(f"r={r}, M={big_m}: two values of s; "
                                  "the expression is not of minimal length")
            seen_s[s] = big_m
            seen_m[big_m] = s
    beta = {r: max((bm for bm, _ in alpha[r]), default=0) for r in range(m)}
    gamma = {}
    for r in range(m):
        if alpha[r]:
            gamma[r] = next(s for bm, s in alpha[r] if bm == beta[r])
        else:
            gamma[r] = (r + 1) % m
    mu, lam = _floyd(gamma.__getitem__, m - 1)
    j1 = max(mu, 1)
    j2 = j1 + lam - 1
    orbit = [m - 1]
    while len(orbit) <= j2:
        orbit.append(gamma[orbit[-1]])
    schedule = EscapeSchedule(h, m_max, alpha, beta, gamma, tuple(orbit), (j1, j2), ())
    object.__setattr__(schedule, "k_seq", tuple(schedule.k_values(j2)))
    return schedule


def verify_prefix_lemma(graph: TapeGraph, schedule: EscapeSchedule,
                        witness: InfiniteOrderWitness, n_max: int) -> bool:
    """Check ``h_{x_1} ... h_{x_n} = a^{k_n} h_0 ... h_{x_n}`` for ``1 <= n <= n_max``."""
    graph.require_decidable("verify_prefix_lemma")
    h = witness.word
    inverse_a = graph.alphabet.invert(h)
    powers: dict[int, Element] = {0: graph.identity,
                                  -1: graph.canonicalize(inverse_a)}
    top = 0

    def power(k: int) -> Element:
        nonlocal top
        while top < k:
            powers[top + 1] = _power_element(graph, h, 1, powers[top])
            top += 1
        if k < -1:
            return _power_element(graph, inverse_a, -k)
        return powers[k]

    left = graph.identity
    k = -1
    for n in range(1, n_max + 1):
        k += schedule.step(n - 1)
        x = schedule.index(n)
        left = graph.move(left, h[x])
        right = power(k)
        for g in h[:x + 1]:
            right = graph.move(right, g)
        if left != right:
            return False
    return True


def _points(graph: TapeGraph, seq: EventuallyPeriodic, n: int) -> Iterator[Element]:
    element = graph.identity
    yield element
    for g in seq.take(n):
        element = graph.move(element, g)
        yield element


def self_intersection_scan(graph: TapeGraph, seq: "EventuallyPeriodic | Sequence[int]",
                           n: int) -> "int | None":
    """Least ``j <= n`` whose prefix product repeats an earlier one, else ``None``."""
    graph.require_decidable("self_intersection_scan")
    seen = set()
    for j, element in enumerate(_points(graph, as_sequence(seq), n)):
        if element in seen:
            return j
        seen.add(element)
    return None


def verify_escape(graph: TapeGraph, seq: "EventuallyPeriodic | Sequence[int]", n: int) -> bool:
    """True iff the first ``n`` steps of ``seq`` visit ``n + 1`` distinct cells."""
    return self_intersection_scan(graph, seq, n) is None
