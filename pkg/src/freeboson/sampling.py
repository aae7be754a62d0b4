"""Deterministic sample generators for identity suites and tests.

Everything draws from a caller-supplied random.Random so suites are
reproducible; points are exact Gaussian rationals in the open unit disc.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from . import scalars
from .algebra import Insertion, PlainWord, WickGroup, WickWord
from .fock import FockIndex, FockVector
from .scalars import Exact


def rational_point(
    rng: random.Random,
    max_den: int = 8,
    nonzero: bool = True,
    avoid: Optional[set] = None,
) -> Exact:
    """A random exact Gaussian rational in the open unit disc."""
    while True:
        den = rng.randint(3, max_den)
        re = Fraction(rng.randint(-den + 1, den - 1), den)
        im = Fraction(rng.randint(-den + 1, den - 1), den)
        if re * re + im * im >= 1:
            continue
        if nonzero and re == 0 and im == 0:
            continue
        z = scalars.rational(re, im)
        key = scalars.sort_key(z)
        if avoid is not None:
            if key in avoid:
                continue
            avoid.add(key)
        return z


def random_orders(rng: random.Random, n: int, max_order: int = 3, max_product: int = 64) -> list[int]:
    """n insertion orders, biased small, with bounded product (keeps the
    reflection expansion of a word from blowing up)."""
    population = tuple(m for m in (1, 1, 1, 2, 2, 3) if m <= max_order) or (1,)
    while True:
        orders = [rng.choice(population) for _ in range(n)]
        prod = 1
        for m in orders:
            prod *= m
        if prod <= max_product:
            return orders


def random_plain_word(
    rng: random.Random,
    n: int,
    max_order: int = 3,
    nonzero: bool = True,
) -> PlainWord:
    avoid: set = set()
    orders = random_orders(rng, n, max_order)
    return PlainWord(
        tuple(Insertion(m, rational_point(rng, nonzero=nonzero, avoid=avoid)) for m in orders)
    )


def random_wick_word(
    rng: random.Random,
    n: int,
    max_order: int = 3,
    max_group: int = 3,
    nonzero: bool = True,
) -> WickWord:
    """A Wick word with n insertions split into random groups, all points
    distinct (so both the plain and the Wick expectations are defined)."""
    avoid: set = set()
    orders = random_orders(rng, n, max_order)
    groups = []
    i = 0
    while i < len(orders):
        size = rng.randint(1, min(max_group, len(orders) - i))
        groups.append(
            WickGroup(
                tuple(
                    Insertion(m, rational_point(rng, nonzero=nonzero, avoid=avoid))
                    for m in orders[i : i + size]
                )
            )
        )
        i += size
    return WickWord(tuple(groups))


def random_state_group(rng: random.Random, arity: int, max_order: int = 3) -> WickGroup:
    """A single Wick group with distinct nonzero points in the disc."""
    avoid: set = set()
    return WickGroup(
        tuple(
            Insertion(rng.randint(1, max_order), rational_point(rng, avoid=avoid))
            for _ in range(arity)
        )
    )


def random_fock_vector(
    rng: random.Random,
    max_level: int = 10,
    n_terms: int = 3,
    max_mode: int = 6,
) -> FockVector:
    """A random exact-coefficient vector with basis levels <= max_level."""
    terms = {}
    for _ in range(n_terms):
        occ: dict[int, int] = {}
        level = 0
        while True:
            m = rng.randint(1, max_mode)
            if level + m > max_level or rng.random() < 0.35:
                break
            occ[m] = occ.get(m, 0) + 1
            level += m
        coeff = scalars.rational(
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
        )
        if not coeff.is_zero():
            idx = FockIndex.of(occ)
            terms[idx] = terms.get(idx, scalars.ZERO) + coeff
    v = FockVector(terms)
    return v if not v.is_zero() else FockVector.vacuum()


def partition_multisets(total: int) -> list[tuple[int, ...]]:
    """All order multisets with sum <= total, the empty one included."""
    out: list[tuple[int, ...]] = []

    def rec(smallest: int, left: int, acc: tuple[int, ...]):
        out.append(acc)
        for m in range(smallest, left + 1):
            rec(m, left - m, acc + (m,))

    rec(1, total, ())
    return out
