"""Pairing enumeration and expectation values of plain and Wick words.

Expectations are Gaussian: a word's expectation is the sum over perfect
matchings of its insertions of the product of pair kernels

    C(m1, z1, m2, z2) = (1/2) (m1+m2-1)! (-1)^{m1} / (z1 - z2)^{m1+m2},

with matchings restricted to cross-group pairs for Wick words (pairings
inside a normal-ordered group are suppressed).
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Optional

from . import scalars
from .algebra import Insertion, LinearCombination, PlainWord, WickWord
from .errors import DomainError, PoleError
from .scalars import Scalar, is_zero

_MODULE = "correlator"

# A matching is a tuple of index pairs covering 0..n-1 once each; a cross
# matching uses (group, position) labels and never pairs inside one group.
Matching = tuple[tuple[int, int], ...]


def kernel(m1: int, z1, m2: int, z2) -> Scalar:
    """The two-point pair kernel C(m1, z1, m2, z2); exact on exact points."""
    if not (isinstance(m1, int) and isinstance(m2, int)) or m1 < 1 or m2 < 1:
        raise DomainError(_MODULE, f"kernel orders must be integers >= 1, got {m1!r}, {m2!r}")
    z1 = scalars.as_scalar(z1)
    z2 = scalars.as_scalar(z2)
    if scalars.sort_key(z1) == scalars.sort_key(z2):
        raise PoleError(_MODULE, ((m1, z1), (m2, z2)))
    c = Fraction(math.factorial(m1 + m2 - 1) * (-1 if m1 % 2 else 1), 2)
    diff = z1 - z2
    if isinstance(diff, scalars.Exact):
        return scalars.rational(c) * diff ** (-(m1 + m2))
    return complex(c) / diff ** (m1 + m2)


def matchings(n: int) -> Iterator[Matching]:
    """All perfect matchings of {0..n-1}: (n-1)!! of them for even n, none odd.

    Deterministic order: the first unmatched index pairs with each later
    index in turn, recursively.
    """
    if not isinstance(n, int) or n < 0:
        raise DomainError(_MODULE, f"matchings needs an integer n >= 0, got {n!r}")
    yield from _perfect(tuple(range(n)))


def _perfect(seq: tuple[int, ...]) -> Iterator[Matching]:
    if not seq:
        yield ()
        return
    if len(seq) % 2:
        return
    head, rest = seq[0], seq[1:]
    for i in range(len(rest)):
        partner = rest[i]
        remaining = rest[:i] + rest[i + 1 :]
        for sub in _perfect(remaining):
            yield ((head, partner),) + sub


def _check_distinct(pairs_of_insertions) -> None:
    """Raise PoleError if any two listed insertions share a point."""
    seen: dict = {}
    for ins in pairs_of_insertions:
        key = scalars.sort_key(ins.point)
        if key in seen:
            other = seen[key]
            raise PoleError(
                _MODULE, ((other.order, other.point), (ins.order, ins.point))
            )
        seen[key] = ins


def expect_plain(W: PlainWord, stats: Optional[dict] = None) -> Scalar:
    """Expectation of a plain word: pairing sum; 1 for empty, 0 for odd."""
    if not isinstance(W, PlainWord):
        raise DomainError(_MODULE, f"expect_plain expects a PlainWord, got {type(W).__name__}")
    ins = W.insertions
    exact = W.is_exact()
    _check_distinct(ins)
    if len(ins) % 2:
        return scalars.zero_scalar(exact)
    total = scalars.zero_scalar(exact)
    count = 0
    for matching in _perfect(tuple(range(len(ins)))):
        term = scalars.one_scalar(exact)
        for i, j in matching:
            term = term * kernel(ins[i].order, ins[i].point, ins[j].order, ins[j].point)
        total = total + term
        count += 1
    if stats is not None:
        stats["pairings"] = stats.get("pairings", 0) + count
    return total


def _cross_matchings(labels: tuple[int, ...]) -> Iterator[Matching]:
    """Perfect matchings of positions whose group labels differ in each pair."""
    idx = tuple(range(len(labels)))

    def rec(seq: tuple[int, ...]) -> Iterator[Matching]:
        if not seq:
            yield ()
            return
        head, rest = seq[0], seq[1:]
        for i in range(len(rest)):
            partner = rest[i]
            if labels[partner] == labels[head]:
                continue
            remaining = rest[:i] + rest[i + 1 :]
            for sub in rec(remaining):
                yield ((head, partner),) + sub

    yield from rec(idx)


def expect_wick(W: WickWord, stats: Optional[dict] = None) -> Scalar:
    """Expectation of a product of Wick groups: cross-group pairing sum.

    Points may coincide inside one group (those pairings are suppressed) but
    must be distinct across groups.  A lone non-empty group has expectation
    zero; the empty word has expectation one.
    """
    if not isinstance(W, WickWord):
        raise DomainError(_MODULE, f"expect_wick expects a WickWord, got {type(W).__name__}")
    flat: list[tuple[int, Insertion]] = []
    for gid, group in enumerate(W.groups):
        for ins in group.insertions:
            flat.append((gid, ins))
    # cross-group coincidences are poles; intra-group ones are fine
    for i in range(len(flat)):
        for j in range(i + 1, len(flat)):
            gi, a = flat[i]
            gj, b = flat[j]
            if gi != gj and scalars.sort_key(a.point) == scalars.sort_key(b.point):
                raise PoleError(_MODULE, ((a.order, a.point), (b.order, b.point)))
    exact = W.is_exact()
    if len(flat) % 2:
        return scalars.zero_scalar(exact)
    labels = tuple(gid for gid, _ in flat)
    total = scalars.zero_scalar(exact)
    count = 0
    for matching in _cross_matchings(labels):
        term = scalars.one_scalar(exact)
        for i, j in matching:
            a = flat[i][1]
            b = flat[j][1]
            term = term * kernel(a.order, a.point, b.order, b.point)
        total = total + term
        count += 1
    if stats is not None:
        stats["pairings"] = stats.get("pairings", 0) + count
    return total


def expect_combo(F, stats: Optional[dict] = None) -> Scalar:
    """Linear extension of expect_plain / expect_wick to combinations."""
    if isinstance(F, (PlainWord, WickWord)):
        F = LinearCombination.of(F)
    if not isinstance(F, LinearCombination):
        raise DomainError(_MODULE, f"expect_combo expects a combination, got {type(F).__name__}")
    total: Scalar = scalars.ZERO
    started = False
    for word, coeff in F.items():
        if isinstance(word, PlainWord):
            value = expect_plain(word, stats)
        elif isinstance(word, WickWord):
            value = expect_wick(word, stats)
        else:
            raise DomainError(_MODULE, f"cannot take the expectation of {type(word).__name__}")
        term = coeff * value
        total = term if not started else total + term
        started = True
    return total if started else scalars.ZERO


def mobius_check(W: PlainWord, coeffs) -> tuple[Scalar, Scalar]:
    """Covariance data for a fractional-linear map w = (a z + b)/(c z + d).

    For a word with all orders equal to 1, returns the pair

        (expect(W),  expect(W after z -> w) * prod_i dw/dz(z_i))

    whose equality expresses that the two-point structure transforms as a
    one-form in each insertion.
    """
    if not isinstance(W, PlainWord):
        raise DomainError(_MODULE, f"mobius_check expects a PlainWord, got {type(W).__name__}")
    if any(ins.order != 1 for ins in W.insertions):
        raise DomainError(_MODULE, "mobius_check is defined for words with all orders equal to 1")
    a, b, c, d = (scalars.as_scalar(x) for x in coeffs)
    det = a * d - b * c
    if is_zero(det):
        raise DomainError(_MODULE, "degenerate map: a d - b c = 0")
    new_insertions = []
    jacobian: Scalar = scalars.one_scalar(W.is_exact())
    for ins in W.insertions:
        denom = c * ins.point + d
        if is_zero(denom):
            raise DomainError(_MODULE, f"map pole: c z + d = 0 at z = {ins.point!r}")
        w = (a * ins.point + b) / denom
        new_insertions.append(Insertion(1, w))
        jacobian = jacobian * det / denom ** 2
    lhs = expect_plain(W)
    rhs = expect_plain(PlainWord(tuple(new_insertions))) * jacobian
    return lhs, rhs
