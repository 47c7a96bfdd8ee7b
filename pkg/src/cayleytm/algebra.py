"""Truncated non-commutative polynomials over F2 and homogeneous ideals.

A monomial is a tuple of indeterminate indices ``1..d`` (``()`` is the
constant 1); a polynomial is the set of monomials with coefficient 1.
Everything above the truncation degree is discarded, so all questions
asked here are finite-dimensional linear algebra over GF(2).

The group side uses ``2d`` formal symbols: ``1 + x_i`` and its inverse
``(1 + x_i)^15`` (inverse because ``(1 + x_i)^16 = 1 + x_i^16`` and
``x_i^16`` is a relator).
"""
from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DimensionOverflow, LowDegreeResidue

Monomial = tuple[int, ...]

ORDER = 16
INVERSE_EXPONENT = ORDER - 1
DEFAULT_DIMENSION_CAP = 1 << 20


def format_monomial(m: Monomial) -> str:
    """``(1, 1, 2)`` -> ``"x1^2*x2"``; the empty monomial is ``"1"``."""
    if not m:
        return "1"
    parts = []
    for i, run in itertools.groupby(m):
        k = len(list(run))
        parts.append(f"x{i}" if k == 1 else f"x{i}^{k}")
    return "*".join(parts)


def parse_monomial(text: str) -> Monomial:
    text = text.strip()
    if text == "1":
        return ()
    out = []
    for factor in text.split("*"):
        match = re.fullmatch(r"x(\d+)(?:\^(\d+))?", factor.strip())
        if not match:
            raise ValueError(f"cannot parse monomial factor {factor!r}")
        out += [int(match.group(1))] * int(match.group(2) or 1)
    return tuple(out)


def _monomial_key(m: Monomial) -> tuple[int, Monomial]:
    return len(m), m


@dataclass(frozen=True)
class TruncatedPoly:
    """An element of ``F2<x_1..x_d>`` modulo monomials of degree above ``cap``."""

    terms: frozenset
    d: int
    cap: int

    def __post_init__(self):
        for m in self.terms:
            if len(m) > self.cap:
                raise ValueError(f"monomial {format_monomial(m)} exceeds degree {self.cap}")
            if any(not 1 <= i <= self.d for i in m):
                raise ValueError(f"monomial {format_monomial(m)} uses an indeterminate beyond x{self.d}")

    @classmethod
    def from_terms(cls, terms: Iterable[Monomial], d: int, cap: int) -> "TruncatedPoly":
        """Collect terms mod 2, dropping any above the cap."""
        counts = Counter(tuple(m) for m in terms)
        return cls(frozenset(m for m, c in counts.items() if c % 2 and len(m) <= cap), d, cap)

    @classmethod
    def zero(cls, d: int, cap: int) -> "TruncatedPoly":
        return cls(frozenset(), d, cap)

    @classmethod
    def one(cls, d: int, cap: int) -> "TruncatedPoly":
        return cls(frozenset({()}), d, cap)

    @classmethod
    def var(cls, i: int, d: int, cap: int) -> "TruncatedPoly":
        return cls.from_terms([(i,)], d, cap)

    @classmethod
    def parse(cls, monomials: Iterable[str], d: int, cap: int) -> "TruncatedPoly":
        return cls.from_terms((parse_monomial(s) for s in monomials), d, cap)

    def _check_compatible(self, other: "TruncatedPoly") -> None:
        if (self.d, self.cap) != (other.d, other.cap):
            raise ValueError("polynomials live in different truncated algebras")

    def __add__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        self._check_compatible(other)
        return TruncatedPoly(self.terms ^ other.terms, self.d, self.cap)

    __sub__ = __add__

    def __mul__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        self._check_compatible(other)
        acc: set[Monomial] = set()
        room = self.cap
        for a in self.terms:
            for b in other.terms:
                if len(a) + len(b) <= room:
                    m = a + b
                    if m in acc:
                        acc.remove(m)
                    else:
                        acc.add(m)
        return TruncatedPoly(frozenset(acc), self.d, self.cap)

    def __pow__(self, k: int) -> "TruncatedPoly":
        result = TruncatedPoly.one(self.d, self.cap)
        for _ in range(k):
            result = result * self
        return result

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Highest degree present; -1 for the zero polynomial."""
        return max((len(m) for m in self.terms), default=-1)

    def component(self, degree: int) -> "TruncatedPoly":
        return TruncatedPoly(frozenset(m for m in self.terms if len(m) == degree), self.d, self.cap)

    def components(self) -> dict[int, "TruncatedPoly"]:
        """Non-zero homogeneous components keyed by degree."""
        return {e: self.component(e) for e in sorted({len(m) for m in self.terms})}

    def is_homogeneous(self) -> bool:
        return len({len(m) for m in self.terms}) == 1

    def constant_term(self) -> int:
        return int(() in self.terms)

    def with_cap(self, cap: int) -> "TruncatedPoly":
        return TruncatedPoly.from_terms(self.terms, self.d, cap)

    def monomials(self) -> list[str]:
        return [format_monomial(m) for m in sorted(self.terms, key=_monomial_key)]

    def __str__(self) -> str:
        return " + ".join(self.monomials()) or "0"


def poly_add(f: TruncatedPoly, g: TruncatedPoly) -> TruncatedPoly:
    return f + g


def poly_mul(f: TruncatedPoly, g: TruncatedPoly) -> TruncatedPoly:
    return f * g


@dataclass(frozen=True)
class ConstructionGenerators:
    """The ``2d`` formal symbols; symbol ``2(i-1)`` is ``1+x_i`` and ``2(i-1)+1`` its inverse.

    Names are ``a, A, b, B, ...``: lowercase for ``1+x_i``, uppercase for
    ``(1+x_i)^15``.
    """

    d: int

    def __post_init__(self):
        if not 1 <= self.d <= 26:
            raise ValueError("d must be between 1 and 26")

    @property
    def names(self) -> tuple[str, ...]:
        out = []
        for i in range(self.d):
            letter = chr(ord("a") + i)
            out += [letter, letter.upper()]
        return tuple(out)

    def inverse(self, symbol: int) -> int:
        return symbol ^ 1

    def indeterminate(self, symbol: int) -> int:
        return symbol // 2 + 1

    def exponent(self, symbol: int) -> int:
        return 1 if symbol % 2 == 0 else INVERSE_EXPONENT

    def parse(self, text: str) -> tuple[int, ...]:
        names = self.names
        out = []
        for ch in re.sub(r"[\s,]+", "", text):
            if ch not in names:
                raise ValueError(f"{ch!r} is not one of the symbols {''.join(names)}")
            out.append(names.index(ch))
        return tuple(out)

    def format(self, word: Sequence[int]) -> str:
        return "".join(self.names[s] for s in word)

    def expansion(self, symbol: int, cap: int) -> TruncatedPoly:
        if not 0 <= symbol < 2 * self.d:
            raise ValueError(f"symbol {symbol} out of range")
        base = TruncatedPoly.one(self.d, cap) + TruncatedPoly.var(self.indeterminate(symbol), self.d, cap)
        return base ** self.exponent(symbol)


def _power_relator_free(poly: TruncatedPoly, indeterminate: int) -> TruncatedPoly:
    """Drop monomials divisible by ``x_i^16`` (the two-sided ideal it generates)."""
    run = (indeterminate,) * ORDER
    kept = []
    for m in poly.terms:
        if not any(m[k:k + ORDER] == run for k in range(len(m) - ORDER + 1)):
            kept.append(m)
    return TruncatedPoly(frozenset(kept), poly.d, poly.cap)


def binomial_product(i: int, cap: int, d: "int | None" = None) -> TruncatedPoly:
    """The raw product ``(1+x_i) * (1+x_i)^15`` truncated at ``cap``."""
    gens = ConstructionGenerators(d if d is not None else i)
    return gens.expansion(2 * (i - 1), cap) * gens.expansion(2 * (i - 1) + 1, cap)


def binomial_inverse_check(i: int, cap: int, d: "int | None" = None) -> bool:
    """True iff ``(1+x_i)(1+x_i)^15`` is 1 modulo ``x_i^16``."""
    product = binomial_product(i, cap, d)
    return _power_relator_free(product, i) == TruncatedPoly.one(product.d, cap)


def expand_group_word(word: Sequence[int], gens: ConstructionGenerators, cap: int) -> TruncatedPoly:
    """Product of the symbol expansions, truncated at ``cap``."""
    result = TruncatedPoly.one(gens.d, cap)
    cache: dict[int, TruncatedPoly] = {}
    for s in word:
        if s not in cache:
            cache[s] = gens.expansion(s, cap)
        result = result * cache[s]
    return result


def relator_from_even_subword(word: Sequence[int], gens: ConstructionGenerators, floor: int,
                              cap: int) -> list[TruncatedPoly]:
    """Homogeneous components of ``p - 1`` in degrees ``(floor, cap]``.

    Raises :class:`LowDegreeResidue` when a component of degree at most
    ``floor`` is non-zero, which means ``word`` was not even to that depth.
    """
    if floor < 0 or cap < floor:
        raise ValueError("need 0 <= floor <= cap")
    p = expand_group_word(word, gens, cap)
    residue = p + TruncatedPoly.one(gens.d, cap)
    parts = residue.components()
    low = [e for e in parts if e <= floor]
    if low:
        raise LowDegreeResidue(
            f"p - 1 has a non-zero component in degree {low[0]}: {parts[low[0]]}")
    return [parts[e] for e in sorted(parts)]


class HomogeneousBasis:
    """Homogeneous generators of a two-sided ideal, kept sorted by degree."""

    def __init__(self, polys: Iterable[TruncatedPoly]):
        polys = list(polys)
        if not polys:
            raise ValueError("a basis needs at least one polynomial")
        d = polys[0].d
        for f in polys:
            if f.d != d:
                raise ValueError("basis polynomials must share the same indeterminates")
            if f.is_zero() or not f.is_homogeneous():
                raise ValueError(f"basis polynomial {f} is not non-zero homogeneous")
            if f.degree() < 2:
                raise ValueError(f"basis polynomial {f} has degree below 2")
        self.d = d
        self.polys: tuple[TruncatedPoly, ...] = tuple(sorted(polys, key=lambda f: f.degree()))

    @classmethod
    def parse(cls, rows: Iterable[Iterable[str]], d: int) -> "HomogeneousBasis":
        polys = []
        for row in rows:
            terms = [parse_monomial(s) for s in row]
            cap = max((len(m) for m in terms), default=0)
            polys.append(TruncatedPoly.from_terms(terms, d, cap))
        return cls(polys)

    def __iter__(self) -> Iterator[TruncatedPoly]:
        return iter(self.polys)

    def __len__(self) -> int:
        return len(self.polys)

    def counts(self) -> dict[int, int]:
        """``r_i``: number of generators in each degree."""
        return dict(Counter(f.degree() for f in self.polys))

    def check_construction_windows(self) -> None:
        """Degree discipline of the construction: nothing below 16; at 16 only the
        ``x_i^16`` plus at most one more; at most one generator in every higher degree."""
        powers = {(i,) * ORDER for i in range(1, self.d + 1)}
        extra_at: Counter = Counter()
        for f in self.polys:
            e = f.degree()
            if e < ORDER:
                raise ValueError(f"generator of degree {e} lies below {ORDER}")
            if e == ORDER and len(f.terms) == 1 and next(iter(f.terms)) in powers:
                continue
            extra_at[e] += 1
            if extra_at[e] > 1:
                raise ValueError(f"more than one relator in degree {e}")


def _monomial_index(m: Monomial, d: int) -> int:
    index = 0
    for i in m:
        index = index * d + (i - 1)
    return index


def _all_monomials(d: int, length: int) -> Iterator[Monomial]:
    if length == 0:
        yield ()
        return
    for head in range(1, d + 1):
        for tail in _all_monomials(d, length - 1):
            yield (head,) + tail


def _as_bits(terms: Iterable[Monomial], d: int) -> int:
    bits = 0
    for m in terms:
        bits ^= 1 << _monomial_index(m, d)
    return bits


class _XorBasis:
    """Row-echelon basis of GF(2) vectors stored as ints, keyed by leading bit."""

    def __init__(self):
        self.rows: dict[int, int] = {}

    def reduce(self, v: int) -> int:
        while v:
            lead = v.bit_length() - 1
            row = self.rows.get(lead)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v:
            self.rows[v.bit_length() - 1] = v
            return True
        return False


def ideal_span(basis: HomogeneousBasis, degree: int,
               cap: int = DEFAULT_DIMENSION_CAP) -> _XorBasis:
    """Echelon basis of the degree-``degree`` part of the ideal generated by ``basis``."""
    d = basis.d
    if d ** degree > cap:
        raise DimensionOverflow(f"{d}^{degree} monomials in degree {degree} exceed the cap {cap}")
    span = _XorBasis()
    for f in basis:
        room = degree - f.degree()
        if room < 0:
            continue
        for left_len in range(room + 1):
            for left in _all_monomials(d, left_len):
                for right in _all_monomials(d, room - left_len):
                    span.add(_as_bits((left + m + right for m in f.terms), d))
    return span


def ideal_membership(f: TruncatedPoly, basis: HomogeneousBasis, degree_cap: int,
                     cap: int = DEFAULT_DIMENSION_CAP) -> bool:
    """Whether ``f`` lies in the two-sided ideal, decided one degree at a time."""
    if f.d != basis.d:
        raise ValueError("polynomial and basis use different indeterminates")
    if f.degree() > degree_cap:
        raise ValueError(f"polynomial has degree {f.degree()} above {degree_cap}")
    for e, part in f.components().items():
        span = ideal_span(basis, e, cap)
        if span.reduce(_as_bits(part.terms, f.d)):
            return False
    return True


def distinctness_witness(u: Sequence[int], v: Sequence[int], basis: HomogeneousBasis,
                         gens: ConstructionGenerators, degree_cap: int,
                         cap: int = DEFAULT_DIMENSION_CAP) -> bool:
    """True iff the expansions of ``u`` and ``v`` differ modulo the ideal."""
    diff = expand_group_word(u, gens, degree_cap) + expand_group_word(v, gens, degree_cap)
    return not ideal_membership(diff, basis, degree_cap, cap)


def gs_series_coefficients(d: int, r: Mapping[int, int], terms: int) -> list[int]:
    """Coefficients ``c_0..c_terms`` of ``1 / (1 - d t + sum r_i t^i)``."""
    if terms < 0:
        raise ValueError("terms must be non-negative")
    for i, count in r.items():
        if i < 2 and count:
            raise ValueError("r_i must vanish below degree 2")
    coeffs = [1]
    for k in range(1, terms + 1):
        c = d * coeffs[k - 1]
        for i, count in r.items():
            if 2 <= i <= k and count:
                c -= count * coeffs[k - i]
        coeffs.append(c)
    return coeffs


def corollary_bound(d: int, eps: Fraction, i: int) -> Fraction:
    """``eps^2 (d - 2 eps)^(i-2)``."""
    return eps ** 2 * (d - 2 * eps) ** (i - 2)


def corollary_bound_check(d: int, eps: "Fraction | int | str", r: Mapping[int, int]) -> bool:
    """True iff every ``r_i`` is at most ``eps^2 (d - 2 eps)^(i-2)``, in exact arithmetic."""
    eps = Fraction(eps)
    if not 0 < eps < Fraction(d, 2):
        raise ValueError("eps must satisfy 0 < eps < d/2")
    return all(count <= corollary_bound(d, eps, i) for i, count in r.items() if count)


def bound_shaped_counts(d: int, eps: "Fraction | int | str", start: int, stop: int) -> dict[int, int]:
    """``r_i = floor(eps^2 (d - 2 eps)^(i-2))`` for ``start <= i <= stop``, else 0."""
    eps = Fraction(eps)
    return {i: int(corollary_bound(d, eps, i)) for i in range(start, stop + 1)}
