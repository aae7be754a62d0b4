"""Cross-module identity suites.

Each suite exercises one of the exact identities the engine is built on,
on deterministic pseudo-random data, and reports pass/fail with a short
detail string.  All checks are exact (no tolerances) except where a suite
explicitly says otherwise.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import scalars
from .algebra import (
    LinearCombination,
    WickGroup,
    WickWord,
    d_coeff,
    d_table,
    rescale,
    theta,
    wick_expand,
)
from .correlator import expect_combo, expect_plain, expect_wick, mobius_check
from .errors import DomainError
from .fock import FockVector, fock_inner, ladder, wick_origin_to_fock
from .hilbert import disc_series_inner, inner
from .sampling import (
    partition_multisets,
    random_fock_vector,
    random_plain_word,
    random_state_group,
    random_wick_word,
    rational_point,
)

_MODULE = "verify"


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _suite_d_identity(rng: random.Random) -> SuiteResult:
    max_m = 20
    for m in range(1, max_m + 1):
        for b in range(1, m + 1):
            total = sum(d_coeff(m, a) * d_coeff(a, b) for a in range(b, m + 1))
            if total != (1 if m == b else 0):
                return SuiteResult("d-identity", False, f"failed at (m,b)=({m},{b})")
    table = d_table(12)
    for (m, a), value in table.items():
        if d_coeff(m, a) != value:
            return SuiteResult("d-identity", False, f"recursion mismatch at ({m},{a})")
    return SuiteResult("d-identity", True, f"involution identity to m={max_m}, recursion to m=12")


def _random_word(rng: random.Random, n: int):
    if rng.random() < 0.5:
        return LinearCombination.of(random_plain_word(rng, n))
    return LinearCombination.of(random_wick_word(rng, n))


def _suite_theta_involution(rng: random.Random) -> SuiteResult:
    cases = 30
    for _ in range(cases):
        F = _random_word(rng, rng.randint(1, 6))
        if theta(theta(F)) != F:
            return SuiteResult("theta-involution", False, "theta(theta(F)) != F")
    return SuiteResult("theta-involution", True, f"{cases} random words, exact")


def _suite_conjugation(rng: random.Random) -> SuiteResult:
    cases = 30
    for _ in range(cases):
        F = _random_word(rng, rng.randint(2, 6))
        lhs = expect_combo(theta(F))
        rhs = scalars.conjugate(expect_combo(F))
        if lhs != rhs:
            return SuiteResult("conjugation", False, "expect(theta F) != conj(expect F)")
    return SuiteResult("conjugation", True, f"{cases} random words, exact")


def _suite_scaling(rng: random.Random) -> SuiteResult:
    cases = 30
    for _ in range(cases):
        W = random_plain_word(rng, rng.randint(2, 6))
        a = rational_point(rng, nonzero=False)
        q = rational_point(rng)
        lhs = expect_plain(W)
        rhs = expect_combo(rescale(LinearCombination.of(W), a, q))
        if lhs != rhs:
            return SuiteResult("scaling", False, "expect(rescale(W)) != expect(W)")
    for _ in range(8):
        n = rng.choice((2, 4))
        W = random_plain_word(rng, n, max_order=1)
        lhs, rhs = mobius_check(W, (0, 1, 1, 0))
        if lhs != rhs:
            return SuiteResult("scaling", False, "inversion map covariance failed")
        coeffs = (rational_point(rng), rational_point(rng, nonzero=False), scalars.ZERO, scalars.ONE)
        lhs, rhs = mobius_check(W, coeffs)
        if lhs != rhs:
            return SuiteResult("scaling", False, "affine map covariance failed")
    return SuiteResult("scaling", True, f"{cases} rescalings and 16 fractional-linear maps, exact")


def _suite_wick_plain(rng: random.Random) -> SuiteResult:
    cases = 12
    for _ in range(cases):
        W = random_wick_word(rng, rng.randint(2, 6))
        direct = expect_wick(W)
        expanded: LinearCombination | None = None
        for group in W.groups:
            term = wick_expand(group)
            expanded = term if expanded is None else expanded * term
        via_plain = expect_combo(expanded) if expanded is not None else scalars.ONE
        if direct != via_plain:
            return SuiteResult("wick-plain", False, "expect_wick != expect_plain after expansion")
    return SuiteResult("wick-plain", True, f"{cases} random words with <= 6 insertions, exact")


def _suite_commutators(rng: random.Random) -> SuiteResult:
    vectors = [random_fock_vector(rng, max_level=8) for _ in range(3)]
    for v in vectors:
        for m in range(-4, 5):
            for n in range(-4, 5):
                lhs = ladder(ladder(v, n), m) - ladder(ladder(v, m), n)
                rhs = v.scaled(m) if m + n == 0 else FockVector.zero()
                if lhs != rhs:
                    return SuiteResult("commutators", False, f"[alpha_{m}, alpha_{n}] failed")
    v, w = vectors[0], vectors[1]
    for m in range(-4, 5):
        if fock_inner(ladder(v, -m), w) != fock_inner(v, ladder(w, m)):
            return SuiteResult("commutators", False, f"adjointness failed at m={m}")
    return SuiteResult("commutators", True, "modes |m|,|n| <= 4 on 3 random vectors, exact")


def _suite_dictionary(rng: random.Random) -> SuiteResult:
    multisets = partition_multisets(6)
    checked = 0
    for A in multisets:
        for B in multisets:
            lhs = fock_inner(wick_origin_to_fock(A), wick_origin_to_fock(B))
            wA = WickWord.unit() if not A else WickWord.single_group(
                WickGroup.of(*((m, 0) for m in A))
            )
            wB = WickWord.unit() if not B else WickWord.single_group(
                WickGroup.of(*((m, 0) for m in B))
            )
            rhs = inner(wA, wB)
            if lhs != rhs:
                return SuiteResult("dictionary", False, f"mismatch at {A} vs {B}")
            checked += 1
    return SuiteResult("dictionary", True, f"{checked} origin-state pairs with sum <= 6, exact")


def _suite_oracle_agreement(rng: random.Random) -> SuiteResult:
    cases = 0
    for arity_left in (1, 2, 3):
        for arity_right in (1, 2, 3):
            for _ in range(3):
                L = random_state_group(rng, arity_left)
                R = random_state_group(rng, arity_right)
                via_theta = inner(L, R)
                via_series = disc_series_inner(L, R)
                if via_theta != via_series:
                    return SuiteResult(
                        "oracle-agreement", False, f"arities ({arity_left},{arity_right})"
                    )
                cases += 1
    origin = WickGroup.of((1, 0))
    if inner(origin, origin) != scalars.rational(Fraction(1, 2)):
        return SuiteResult("oracle-agreement", False, "norm of :[1,0]: is not 1/2")
    return SuiteResult("oracle-agreement", True, f"{cases} random group pairs plus origin value, exact")


SUITES = {
    "d-identity": _suite_d_identity,
    "theta-involution": _suite_theta_involution,
    "conjugation": _suite_conjugation,
    "scaling": _suite_scaling,
    "wick-plain": _suite_wick_plain,
    "commutators": _suite_commutators,
    "dictionary": _suite_dictionary,
    "oracle-agreement": _suite_oracle_agreement,
}


def run_suites(names=None, seed: int = 2026) -> list[SuiteResult]:
    """Run the named identity suites (all by default) with a fixed seed."""
    if names is None:
        names = list(SUITES)
    results = []
    for name in names:
        fn = SUITES.get(name)
        if fn is None:
            raise DomainError(_MODULE, f"unknown suite {name!r}; available: {', '.join(SUITES)}")
        results.append(fn(random.Random(seed)))
    return results
