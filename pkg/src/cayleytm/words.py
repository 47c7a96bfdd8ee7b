"""Subsequence counts and their parities.

``#(w, p)`` counts the strictly increasing index tuples at which ``p``
embeds in ``w`` as a (scattered) subsequence.  The parity profile of ``w``
to depth ``n`` records ``#(w, p) mod 2`` for every non-empty ``p`` with
``|p| <= n``.  Words are any sequences of hashable letters; strings work.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, NamedTuple, Sequence


def subsequence_count(word: Sequence[Hashable], pattern: Sequence[Hashable]) -> int:
    """Exact number of embeddings of ``pattern`` into ``word``."""
    # counts[k] = embeddings of pattern[:k] into the part of word read so far
    counts = [1] + [0] * len(pattern)
    for letter in word:
        for k in range(len(pattern), 0, -1):
            if pattern[k - 1] == letter:
                counts[k] += counts[k - 1]
    return counts[-1]


def patterns(alphabet: Sequence[Hashable], depth: int) -> list[tuple]:
    """All non-empty words of length at most ``depth``, shortest first."""
    out = []
    for length in range(1, depth + 1):
        out.extend(itertools.product(alphabet, repeat=length))
    return out


def _alphabet_of(word: Sequence[Hashable], alphabet: "Iterable[Hashable] | None") -> tuple:
    letters = set(word)
    if alphabet is None:
        return tuple(sorted(letters, key=repr))
    alphabet = tuple(alphabet)
    if not letters <= set(alphabet):
        raise ValueError(f"word uses letters outside the alphabet {alphabet}")
    return alphabet


class _ParityState:
    """Incremental parity table: append letters and read off ``#(w, p) mod 2``."""

    def __init__(self, alphabet: Sequence[Hashable], depth: int):
        self.depth = depth
        self.bits: dict[tuple, int] = {p: 0 for p in patterns(alphabet, depth)}
        # patterns grouped by last letter, longest first so updates read old values
        self.by_last: dict[Hashable, list[tuple]] = {}
        for p in sorted(self.bits, key=len, reverse=True):
            self.by_last.setdefault(p[-1], []).append(p)
        self.odd = 0  # number of patterns with an odd count

    def push(self, letter: Hashable) -> None:
        bits = self.bits
        for p in self.by_last.get(letter, ()):
            carry = 1 if len(p) == 1 else bits[p[:-1]]
            if carry:
                bits[p] ^= 1
                self.odd += 1 if bits[p] else -1

    def all_even(self) -> bool:
        return self.odd == 0


@dataclass(frozen=True)
class ParityProfile:
    """``#(w, p) mod 2`` for each non-empty ``p`` over ``alphabet`` with ``|p| <= depth``."""

    alphabet: tuple
    depth: int
    bits: dict

    def __getitem__(self, pattern: Sequence[Hashable]) -> int:
        return self.bits[tuple(pattern)]

    @property
    def size(self) -> int:
        return len(self.bits)

    def is_zero(self) -> bool:
        return not any(self.bits.values())


def profile_size(m: int, n: int) -> int:
    """Number of non-empty words of length at most ``n`` over ``m`` letters."""
    return n if m == 1 else (m ** (n + 1) - m) // (m - 1)


def parity_profile(word: Sequence[Hashable], depth: int,
                   alphabet: "Iterable[Hashable] | None" = None) -> ParityProfile:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    alphabet = _alphabet_of(word, alphabet)
    state = _ParityState(alphabet, depth)
    for letter in word:
        state.push(letter)
    return ParityProfile(alphabet, depth, dict(state.bits))


def even_subword_search(word: Sequence[Hashable], depth: int,
                        alphabet: "Iterable[Hashable] | None" = None) -> "tuple[int, int] | None":
    """Shortest, then leftmost, interval ``[i, j]`` (inclusive) with an all-even profile."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    alphabet = _alphabet_of(word, alphabet)
    best = None
    for i in range(len(word)):
        state = _ParityState(alphabet, depth)
        for j in range(i, len(word)):
            if best is not None and j - i + 1 >= best[0]:
                break
            state.push(word[j])
            if state.all_even():
                best = (j - i + 1, i)
                break
    if best is None:
        return None
    length, i = best
    return i, i + length - 1


class PirilloPair(NamedTuple):
    start: int
    split: int
    end: int  # exclusive

    def halves(self, word: Sequence[Hashable]) -> tuple[Sequence[Hashable], Sequence[Hashable]]:
        return word[self.start:self.split], word[self.split:self.end]


def pirillo_pair_search(word: Sequence[Hashable], depth: int,
                        alphabet: "Iterable[Hashable] | None" = None) -> "PirilloPair | None":
    """Least factor ``w1 w2`` of ``word`` with equal parity profiles for ``w1``, ``w2``, ``w1 w2``.

    Candidates are scanned by total length, then start, then split point.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    alphabet = _alphabet_of(word, alphabet)
    order = patterns(alphabet, depth)
    length = len(word)
    # profile[i][j]: parity vector of word[i:j] as a tuple of bits
    profile: list[dict[int, tuple]] = []
    for i in range(length):
        state = _ParityState(alphabet, depth)
        row = {}
        for j in range(i, length):
            state.push(word[j])
            row[j + 1] = tuple(state.bits[p] for p in order)
        profile.append(row)
    for total in range(2, length + 1):
        for start in range(length - total + 1):
            end = start + total
            whole = profile[start][end]
            for split in range(start + 1, end):
                if profile[start][split] == whole and profile[split][end] == whole:
                    return PirilloPair(start, split, end)
    return None


def concat_count_identity_check(first: Sequence[Hashable], second: Sequence[Hashable],
                                pattern: Sequence[Hashable]) -> bool:
    """Check ``#(uv, p) = sum_i #(u, p[:i]) * #(v, p[i:])``."""
    whole = list(first) + list(second)
    direct = subsequence_count(whole, pattern)
    split_sum = sum(subsequence_count(first, pattern[:i]) * subsequence_count(second, pattern[i:])
                    for i in range(len(pattern) + 1))
    return direct == split_sum


@dataclass(frozen=True)
class RamseyBoundSpec:
    """Symbolic length bound guaranteeing an all-even factor; never evaluated.

    ``expression`` gives the bound for ``m`` letters and depth ``n``;
    ``recursion`` the degree sequence built from it for ``s`` construction symbols.
    """

    letters: int
    depth: int

    def colours_exponent(self) -> str:
        m, n = self.letters, self.depth
        if m == 1:
            return str(n + 1)
        return f"({m}^{n + 1}-1)/({m}-1)"

    def expression(self) -> str:
        return f"R(2,3,2^{self.colours_exponent()})"

    @staticmethod
    def recursion(symbols: int) -> str:
        return (f"r_0 = 16; r_(k+1) = 15 * R(2,3,2^(({symbols}^(r_k+1)-1)/({symbols}-1)))")
