"""Super-reduced words, their lexicographic tree order and its finite approximations.

A word is super-reduced when no contiguous subword multiplies to the
identity, i.e. its path in the Cayley graph never revisits a vertex.  The
tree of such words is ordered lexicographically with a prefix below every
extension; the minimal infinite path and the nodes lying below it form a
well-ordered subtree, approximated here by cutting the tree at a depth.
"""
from __future__ import annotations

from typing import Iterator, Sequence

from .errors import NoPath
from .groups import TapeGraph, Word

LESS, EQUAL, GREATER = -1, 0, 1


def is_super_reduced(graph: TapeGraph, word: Sequence[int]) -> bool:
    """True iff all prefix products of ``word`` are distinct (including the empty prefix)."""
    graph.require_decidable("is_super_reduced")
    word = graph.alphabet.check_word(word)
    element = graph.identity
    seen = {element}
    for g in word:
        element = graph.move(element, g)
        if element in seen:
            return False
        seen.add(element)
    return True


def lex_compare(u: Sequence[int], v: Sequence[int]) -> int:
    """Tree order on words: first divergence decides, a proper prefix is smaller."""
    u, v = tuple(u), tuple(v)
    if u == v:
        return EQUAL
    return LESS if u < v else GREATER


def _preorder(graph: TapeGraph, depth: int) -> Iterator[Word]:
    """Lazy pre-order walk of the super-reduced tree down to ``depth``."""
    stack = [((), graph.identity, frozenset({graph.identity}))]
    while stack:
        word, here, visited = stack.pop()
        yield word
        if len(word) == depth:
            continue
        children = []
        for g in range(graph.n_generators):
            nxt = graph.move(here, g)
            if nxt not in visited:
                children.append((word + (g,), nxt, visited | {nxt}))
        stack.extend(reversed(children))


def super_reduced_words(graph: TapeGraph, depth: int) -> list[Word]:
    """Every super-reduced word of length at most ``depth``, in tree order."""
    graph.require_decidable("super_reduced_words")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    return list(_preorder(graph, depth))


def minimal_path_prefix(graph: TapeGraph, depth: int) -> Word:
    """Greedy least path: each step takes the least child that still reaches ``depth``."""
    graph.require_decidable("minimal_path_prefix")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    for word in _preorder(graph, depth):
        # the first full-length word in pre-order is the greedy choice at every level
        if len(word) == depth:
            return word
    raise NoPath(f"no super-reduced word of length {depth}")


def tprime_prefix(graph: TapeGraph, depth: int, k: int) -> list[Word]:
    """First ``k`` nodes of the depth-``depth`` approximation of the well-ordered subtree.

    A node qualifies when it is below every super-reduced word of length
    ``depth``, which for words in the tree order means: it lies on or before
    the least such word, i.e. ``node <= minimal path`` with prefixes included.
    """
    graph.require_decidable("tprime_prefix")
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return []
    bound = minimal_path_prefix(graph, depth)
    nodes = []
    for word in _preorder(graph, depth):
        if lex_compare(word, bound) > 0:
            break
        nodes.append(word)
        if len(nodes) == k:
            break
    return nodes


def r_prefix(graph: TapeGraph, depth: int, k: int) -> list[Word]:
    """Like :func:`tprime_prefix` but keeping only the first word for each group element."""
    if k <= 0:
        return []
    seen = set()
    out = []
    for word in tprime_prefix(graph, depth, 1 << 30):
        element = graph.canonicalize(word)
        if element in seen:
            continue
        seen.add(element)
        out.append(word)
        if len(out) == k:
            break
    return out
