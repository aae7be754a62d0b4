"""Multi-disc transition amplitudes and truncated Hilbert-Schmidt sums.

A configuration is r >= 2 pairwise disjoint discs, each given by an affine
parametrization z -> a_j + q_j z of the unit disc (radius |q_j|).  The
amplitude entry on occupation indices places, for each disc j, n^j_m
insertions of order m at the center a_j, weighted by the orthonormal-basis
prefactor prod_m (n^j_m!)^{-1/2} (i sqrt(2m)/m!)^{n^j_m} and the
parametrization power prod_m q_j^{m n^j_m}, and evaluates the cross-disc
pairing sum.  Because insertions at one disc are heavily degenerate, the
pairing sum is computed by a dynamic program over remaining-count states
rather than by enumerating all (n-1)!! matchings.

When the separation satisfies d/R > 4 sqrt(r), the squared entries are
summable and bounded by the closed form 1/(1 - x) with
x = (r/4) * (8R^2/d^2)/(1 - 8R^2/d^2).
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import scalars
from .correlator import kernel
from .errors import ConfigurationError, RegimeError, RegimeWarning, ResourceError
from .fock import FockIndex, FockVector
from .scalars import I, Scalar, as_scalar, conjugate, is_zero, root

_MODULE = "amplitude"


def _real(x) -> Fraction | float:
    return scalars.real_value(x)


@dataclass(frozen=True)
class Disc:
    """A parametrized disc: center a, scale q != 0, radius |q|."""

    center: Scalar
    q: Scalar

    def __post_init__(self):
        object.__setattr__(self, "center", as_scalar(self.center))
        object.__setattr__(self, "q", as_scalar(self.q))
        if is_zero(self.q):
            raise ConfigurationError(_MODULE, "disc scale q must be nonzero")

    def radius_sq(self) -> Scalar:
        return scalars.abs_sq(self.q)

    def radius(self) -> float:
        return math.sqrt(float(_real(self.radius_sq())))


@dataclass(frozen=True)
class DiscConfiguration:
    """r >= 2 pairwise disjoint discs with derived separation statistics.

    d^2 = min over pairs of |a_i - a_j|^2 (center separation) and
    R^2 = max radius squared are kept in squared form so the disjointness
    and regime tests are exact on rational data:

        disjoint:   t = |a_i-a_j|^2 - R_i^2 - R_j^2 > 0  and  t^2 > 4 R_i^2 R_j^2
        HS regime:  d^2 > 16 r R^2   (equivalent to d/R > 4 sqrt(r))
    """

    discs: tuple[Disc, ...]

    def __post_init__(self):
        if len(self.discs) < 2:
            raise ConfigurationError(_MODULE, "a configuration needs at least two discs")
        for i in range(len(self.discs)):
            for j in range(i + 1, len(self.discs)):
                a = self.discs[i]
                b = self.discs[j]
                gap = _real(scalars.abs_sq(a.center - b.center))
                ra = _real(a.radius_sq())
                rb = _real(b.radius_sq())
                t = gap - ra - rb
                if not (t > 0 and t * t > 4 * ra * rb):
                    raise ConfigurationError(
                        _MODULE, f"discs {i} and {j} are not disjoint"
                    )

    @property
    def r(self) -> int:
        return len(self.discs)

    def is_exact(self) -> bool:
        return all(
            scalars.is_exact(d.center) and scalars.is_exact(d.q) for d in self.discs
        )

    def center_gap_sq(self) -> Fraction | float:
        return min(
            _real(scalars.abs_sq(self.discs[i].center - self.discs[j].center))
            for i in range(self.r)
            for j in range(i + 1, self.r)
        )

    def max_radius_sq(self) -> Fraction | float:
        return max(_real(d.radius_sq()) for d in self.discs)

    def hs_regime(self) -> bool:
        return self.center_gap_sq() > 16 * self.r * self.max_radius_sq()


def _as_index(x) -> FockIndex:
    if isinstance(x, FockIndex):
        return x
    return FockIndex.of(x)


class _EntryEvaluator:
    """Shared kernel cache plus the per-entry pairing dynamic program."""

    def __init__(self, config: DiscConfiguration):
        self.config = config
        self.exact = config.is_exact()
        self._kernels: dict[tuple[int, int, int, int], Scalar] = {}

    def _kernel(self, i: int, mi: int, j: int, mj: int) -> Scalar:
        key = (i, mi, j, mj)
        val = self._kernels.get(key)
        if val is None:
            val = kernel(mi, self.config.discs[i].center, mj, self.config.discs[j].center)
            self._kernels[key] = val
            self._kernels[(j, mj, i, mi)] = val
        return val

    def entry(self, indices: Sequence[FockIndex]) -> Scalar:
        config = self.config
        if len(indices) != config.r:
            raise ConfigurationError(
                _MODULE,
                f"expected {config.r} occupation indices, got {len(indices)}",
            )
        total = sum(idx.particles() for idx in indices)
        if total % 2:
            return scalars.zero_scalar(self.exact)

        prefactor: Scalar = scalars.ONE
        qpow: Scalar = scalars.one_scalar(self.exact)
        slots: list[tuple[int, int]] = []
        counts: list[int] = []
        for j, idx in enumerate(indices):
            q = config.discs[j].q
            for m, n in idx.occupations:
                base = I * root(2 * m) * Fraction(1, math.factorial(m))
                prefactor = prefactor * root(Fraction(1, math.factorial(n))) * base ** n
                qpow = qpow * q ** (m * n)
                slots.append((j, m))
                counts.append(n)

        pairing = self._pairing_sum(tuple(slots), tuple(counts))
        return prefactor * qpow * pairing

    def _pairing_sum(self, slots: tuple[tuple[int, int], ...], counts: tuple[int, ...]) -> Scalar:
        one = scalars.one_scalar(self.exact)
        zero = scalars.zero_scalar(self.exact)
        memo: dict[tuple[int, ...], Scalar] = {}

        def rec(state: tuple[int, ...]) -> Scalar:
            cached = memo.get(state)
            if cached is not None:
                return cached
            first = -1
            for i, n in enumerate(state):
                if n:
                    first = i
                    break
            if first < 0:
                return one
            disc_i, m_i = slots[first]
            reduced = list(state)
            reduced[first] -= 1
            total = zero
            for k, n in enumerate(reduced):
                if not n:
                    continue
                disc_k, m_k = slots[k]
                if disc_k == disc_i:
                    continue
                sub = list(reduced)
                sub[k] -= 1
                total = total + n * self._kernel(disc_i, m_i, disc_k, m_k) * rec(tuple(sub))
            memo[state] = total
            return total

        return rec(counts)


def amplitude_entry(config: DiscConfiguration, indices: Sequence) -> Scalar:
    """One amplitude tensor entry on a tuple of occupation indices.

    Zero whenever the total insertion count is odd (no cross-disc perfect
    matching exists); exact on rational disc data, with values in the
    radical-extended exact ring.
    """
    return _EntryEvaluator(config).entry([_as_index(x) for x in indices])


def amplitude_apply(config: DiscConfiguration, vectors: Sequence[FockVector]) -> Scalar:
    """Multilinear extension of the entry tensor to finite vectors."""
    if len(vectors) != config.r:
        raise ConfigurationError(
            _MODULE, f"expected {config.r} vectors, got {len(vectors)}"
        )
    evaluator = _EntryEvaluator(config)
    total: Scalar = scalars.zero_scalar(evaluator.exact)

    def rec(slot: int, indices: list[FockIndex], coeff: Scalar):
        nonlocal total
        if slot == len(vectors):
            total = total + coeff * evaluator.entry(indices)
            return
        for idx, c in sorted(vectors[slot].items(), key=lambda t: t[0].occupations):
            rec(slot + 1, indices + [idx], coeff * c)

    rec(0, [], scalars.one_scalar(evaluator.exact))
    return total


@dataclass(frozen=True)
class HSPartial:
    """Cumulative squared-entry sum through one total-insertion level."""

    total_insertions: int
    tuple_count: int
    partial_sum: Scalar


def _indices_up_to(max_mode: int, max_particles: int) -> list[FockIndex]:
    """All occupation indices with modes <= max_mode, particles <= max_particles."""
    out: list[FockIndex] = []

    def rec(mode: int, left: int, acc: list[tuple[int, int]]):
        if mode > max_mode:
            out.append(FockIndex(tuple(acc)))
            return
        for n in range(left + 1):
            rec(mode + 1, left - n, acc + ([(mode, n)] if n else []))

    rec(1, max_particles, [])
    return out


def hs_truncated(
    config: DiscConfiguration,
    M: int,
    N: int,
    max_tuples: int = 100_000,
    threads: int = 1,
) -> list[HSPartial]:
    """Cumulative sums of |entry|^2 over all index tuples with modes <= M
    and total particle count <= N, grouped by total insertion count.

    Rows are ordered by total insertion count with tuples enumerated
    lexicographically inside each level, so the sequence is reproducible
    bit for bit.  Outside the summability regime a RegimeWarning is issued
    (the amplitude is still defined; only the bound is unavailable).
    """
    if not isinstance(M, int) or M < 1:
        raise ConfigurationError(_MODULE, f"max mode M must be an integer >= 1, got {M!r}")
    if not isinstance(N, int) or N < 0:
        raise ConfigurationError(_MODULE, f"particle cap N must be an integer >= 0, got {N!r}")
    if not config.hs_regime():
        warnings.warn(
            "disc separation is outside the summability regime d/R > 4*sqrt(r); "
            "partial sums are computed but unbounded in principle",
            RegimeWarning,
            stacklevel=2,
        )
    indices = _indices_up_to(M, N)
    by_particles: dict[int, list[FockIndex]] = {}
    for idx in indices:
        by_particles.setdefault(idx.particles(), []).append(idx)
    for bucket in by_particles.values():
        bucket.sort(key=lambda idx: idx.occupations)

    r = config.r

    def tuples_of_total(t: int) -> Iterable[tuple[FockIndex, ...]]:
        def rec(slot: int, left: int, acc: tuple[FockIndex, ...]):
            if slot == r - 1:
                for idx in by_particles.get(left, ()):
                    yield acc + (idx,)
                return
            for p in range(left + 1):
                for idx in by_particles.get(p, ()):
                    yield from rec(slot + 1, left - p, acc + (idx,))

        yield from rec(0, t, ())

    # count before evaluating anything
    counts_per_p = {p: len(b) for p, b in by_particles.items()}
    level_counts: dict[int, int] = {}
    for t in range(N + 1):
        def count_rec(slot: int, left: int) -> int:
            if slot == r - 1:
                return counts_per_p.get(left, 0)
            return sum(
                counts_per_p.get(p, 0) * count_rec(slot + 1, left - p)
                for p in range(left + 1)
            )

        level_counts[t] = count_rec(0, t)
    total_tuples = sum(level_counts.values())
    if total_tuples > max_tuples:
        raise ResourceError(
            _MODULE,
            f"enumeration would visit {total_tuples} tuples, above the guard {max_tuples}",
        )

    evaluator = _EntryEvaluator(config)
    exact = evaluator.exact

    def squared(tup: tuple[FockIndex, ...]) -> Scalar:
        value = evaluator.entry(list(tup))
        return value * conjugate(value)

    rows: list[HSPartial] = []
    running: Scalar = scalars.zero_scalar(exact)
    seen = 0
    for t in range(N + 1):
        level = list(tuples_of_total(t))
        level.sort(key=lambda tup: tuple(idx.occupations for idx in tup))
        if threads > 1 and len(level) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                values = list(pool.map(squared, level))
        else:
            values = [squared(tup) for tup in level]
        for v in values:
            running = running + v
        seen += len(level)
        rows.append(HSPartial(total_insertions=t, tuple_count=seen, partial_sum=running))
    return rows


def hs_bound(config: DiscConfiguration) -> Scalar:
    """The closed-form bound 1/(1-x), x = (r/4) * (8R^2/d^2)/(1 - 8R^2/d^2).

    Requires the strict regime d/R > 4 sqrt(r); otherwise raises RegimeError
    carrying the offending ratio.
    """
    d_sq = config.center_gap_sq()
    r_sq = config.max_radius_sq()
    r = config.r
    if not d_sq > 16 * r * r_sq:
        ratio = math.sqrt(float(d_sq) / float(r_sq))
        raise RegimeError(_MODULE, ratio, 4.0 * math.sqrt(r))
    y = 8 * r_sq / d_sq
    s = y / (1 - y)
    x = Fraction(r, 4) * s if isinstance(s, Fraction) else r * s / 4
    bound = 1 / (1 - x)
    if isinstance(bound, Fraction):
        return scalars.rational(bound)
    return complex(bound, 0.0)
