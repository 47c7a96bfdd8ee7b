"""Independent reference implementations used to cross-check the package.

Nothing here imports the code under test except for plain data types.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

# -- group elements by a different representation ---------------------------------------

def dihedral_affine(word, names=("a", "b")):
    """Infinite dihedral group as affine maps of Z: a = x -> -x, b = x -> 1 - x.

    A map x -> s*x + t is stored as (s, t); the word acts left to right.
    """
    s, t = 1, 0
    for g in word:
        # compose with the generator applied after the current map
        if g == 0:
            s, t = -s, -t
        else:
            s, t = -s, 1 - t
    return s, t


def free_group_matrix(word):
    """F2 as the Sanov subgroup of SL(2, Z): x, y are [[1,2],[0,1]], [[1,0],[2,1]]."""
    mats = [np.array([[1, 2], [0, 1]], dtype=object), np.array([[1, -2], [0, 1]], dtype=object),
            np.array([[1, 0], [2, 1]], dtype=object), np.array([[1, 0], [-2, 1]], dtype=object)]
    acc = np.array([[1, 0], [0, 1]], dtype=object)
    for g in word:
        acc = acc.dot(mats[g])
    return tuple(int(v) for v in acc.flatten())


def integer_sum(word, steps):
    total = [0] * len(steps[0])
    for g in word:
        for k, c in enumerate(steps[g]):
            total[k] += c
    return tuple(total)


def all_words(n_gens, max_len):
    for length in range(max_len + 1):
        yield from itertools.product(range(n_gens), repeat=length)


def super_reduced_brute(word, element_of):
    """No contiguous non-empty subword evaluates to the identity."""
    identity = element_of(())
    for i in range(len(word)):
        for j in range(i + 1, len(word) + 1):
            if element_of(word[i:j]) == identity:
                return False
    return True


# -- words ---------------------------------------------------------------------------

def count_embeddings(word, pattern):
    return sum(1 for idx in itertools.combinations(range(len(word)), len(pattern))
               if all(word[i] == p for i, p in zip(idx, pattern)))


# -- F2 linear algebra ------------------------------------------------------------------

def gf2_rank(rows):
    """Rank over GF(2) of a 0/1 matrix by dense elimination."""
    m = np.array(rows, dtype=np.uint8) % 2
    if m.size == 0:
        return 0
    rank = 0
    n_rows, n_cols = m.shape
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(n_rows):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
        if rank == n_rows:
            break
    return rank


def _vector(monomials, d, degree):
    index = {w: k for k, w in enumerate(itertools.product(range(1, d + 1), repeat=degree))}
    v = [0] * len(index)
    for m in monomials:
        v[index[m]] ^= 1
    return v


def ideal_products(basis_terms, d, degree):
    """All m1 * f * m2 of total degree ``degree`` as sets of monomials (tuples)."""
    out = []
    for terms in basis_terms:
        e = len(next(iter(terms)))
        room = degree - e
        if room < 0:
            continue
        for left_len in range(room + 1):
            for left in itertools.product(range(1, d + 1), repeat=left_len):
                for right in itertools.product(range(1, d + 1), repeat=room - left_len):
                    acc = set()
                    for m in terms:
                        acc ^= {left + tuple(m) + right}
                    out.append(frozenset(acc))
    return out


ENUMERATION_LIMIT = 16


def ideal_member_oracle(poly_terms, basis_terms, d):
    """Membership in the two-sided ideal degree by degree.

    When a degree has at most ``ENUMERATION_LIMIT`` spanning products every
    ideal element of that degree is enumerated explicitly; otherwise the
    answer comes from a dense GF(2) rank comparison.
    """
    by_degree = {}
    for m in poly_terms:
        by_degree.setdefault(len(m), set()).symmetric_difference_update({m})
    for degree, part in by_degree.items():
        if not part:
            continue
        products = ideal_products(basis_terms, d, degree)
        if len(products) <= ENUMERATION_LIMIT:
            members = set()
            for mask in range(1 << len(products)):
                acc = set()
                for k, prod in enumerate(products):
                    if mask >> k & 1:
                        acc ^= prod
                members.add(frozenset(acc))
            if frozenset(part) not in members:
                return False
        else:
            rows = [_vector(p, d, degree) for p in products]
            target = _vector(part, d, degree)
            if gf2_rank(rows) != gf2_rank(rows + [target]):
                return False
    return True


# -- series ---------------------------------------------------------------------------

def series_inverse(poly_coeffs, terms):
    """Power-series inverse of a polynomial with constant term 1, by long division."""
    inv = [Fraction(0)] * (terms + 1)
    inv[0] = Fraction(1, poly_coeffs[0])
    for k in range(1, terms + 1):
        acc = sum(Fraction(poly_coeffs[i]) * inv[k - i]
                  for i in range(1, min(k, len(poly_coeffs) - 1) + 1))
        inv[k] = -acc / poly_coeffs[0]
    return inv
