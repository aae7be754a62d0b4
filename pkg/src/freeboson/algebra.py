"""Symbol algebras for derivative-field monomials and Wick groups.

Words are formal products of insertions [m, z] (m-th holomorphic derivative
at the point z).  Three layers appear:

- PlainWord: ordinary products [m1, z1]...[mn, zn];
- WickGroup: a normal-ordered group :[m1, z1]...[mn, zn]:;
- WickWord: a product of Wick groups.

On top of the words sit the reflection automorphism theta (anti-linear,
implementing z -> 1/conj(z) with one-form weights), the affine
reparametrization rescale (z -> a + q z with weight q^m per insertion), the
integer coefficients d_{m,a}, and the expansion of a Wick group into plain
words over partial pairings.

Words are canonicalized (insertions and groups sorted) so that merging
linear combinations is deterministic; this is legal because every
expectation in the engine is permutation symmetric.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from . import scalars
from .errors import DomainError
from .scalars import Scalar, as_scalar, conjugate, is_zero

_MODULE = "algebra"


# ---------------------------------------------------------------------------
# d_{m,a} coefficients: the m-th derivative of f(1/z) expands as
#   d^m/dz^m f(1/z) = sum_a d_{m,a} z^{-(m+a)} f^{(a)}(1/z),  1 <= a <= m.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def d_coeff(m: int, a: int) -> int:
    """The integer d_{m,a}; zero outside 1 <= a <= m."""
    if not isinstance(m, int) or m < 1:
        raise DomainError(_MODULE, f"d_coeff needs integer m >= 1, got {m!r}")
    if not isinstance(a, int) or a < 1 or a > m:
        return 0
    sign = -1 if m % 2 else 1
    return sign * (math.factorial(m) // math.factorial(a)) * math.comb(m - 1, a - 1)


def d_table(max_m: int) -> dict[tuple[int, int], int]:
    """The d_{m,a} table built by the differentiation recursion.

    One more derivative of d_{m,a} z^{-(m+a)} f^{(a)}(1/z) gives
    d_{m+1,a} = -(m+a) d_{m,a} - d_{m,a-1}.  Kept as an independent
    cross-check of the closed form in d_coeff.
    """
    if max_m < 1:
        raise DomainError(_MODULE, f"d_table needs max_m >= 1, got {max_m!r}")
    table: dict[tuple[int, int], int] = {(1, 1): -1}
    for m in range(1, max_m):
        for a in range(1, m + 2):
            table[(m + 1, a)] = -(m + a) * table.get((m, a), 0) - table.get((m, a - 1), 0)
    return {k: v for k, v in table.items() if v}


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Insertion:
    """The symbol [m, z]: order-m derivative inserted at the point z."""

    order: int
    point: Scalar

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise DomainError(_MODULE, f"insertion order must be an integer >= 1, got {self.order!r}")
        object.__setattr__(self, "point", as_scalar(self.point))

    def key(self):
        return (self.order, scalars.sort_key(self.point))


def _sorted_insertions(items: Iterable[Insertion]) -> tuple[Insertion, ...]:
    return tuple(sorted(items, key=Insertion.key))


@dataclass(frozen=True)
class PlainWord:
    """Product of insertions; the empty word is the algebra unit."""

    insertions: tuple[Insertion, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "insertions", _sorted_insertions(self.insertions))

    @classmethod
    def unit(cls) -> "PlainWord":
        return cls(())

    @classmethod
    def single(cls, m: int, z) -> "PlainWord":
        return cls((Insertion(m, z),))

    def __mul__(self, other):
        if isinstance(other, PlainWord):
            return PlainWord(self.insertions + other.insertions)
        return NotImplemented

    def __len__(self):
        return len(self.insertions)

    def total_order(self) -> int:
        return sum(ins.order for ins in self.insertions)

    def is_exact(self) -> bool:
        return all(scalars.is_exact(ins.point) for ins in self.insertions)


@dataclass(frozen=True)
class WickGroup:
    """A single normal-ordered group :[m1, z1]...[mn, zn]: (non-empty multiset)."""

    insertions: tuple[Insertion, ...]

    def __post_init__(self):
        if not self.insertions:
            raise DomainError(_MODULE, "a Wick group must contain at least one insertion")
        object.__setattr__(self, "insertions", _sorted_insertions(self.insertions))

    @classmethod
    def of(cls, *pairs) -> "WickGroup":
        """Build from (m, z) pairs: WickGroup.of((1, 0), (2, z))."""
        return cls(tuple(Insertion(m, z) for m, z in pairs))

    def key(self):
        return tuple(ins.key() for ins in self.insertions)

    def __len__(self):
        return len(self.insertions)

    def total_order(self) -> int:
        return sum(ins.order for ins in self.insertions)


@dataclass(frozen=True)
class WickWord:
    """Product of Wick groups; the empty product is the unit."""

    groups: tuple[WickGroup, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(sorted(self.groups, key=WickGroup.key)))

    @classmethod
    def unit(cls) -> "WickWord":
        return cls(())

    @classmethod
    def single_group(cls, group: WickGroup) -> "WickWord":
        return cls((group,))

    def __mul__(self, other):
        if isinstance(other, WickWord):
            return WickWord(self.groups + other.groups)
        return NotImplemented

    def __len__(self):
        return sum(len(g) for g in self.groups)

    def total_order(self) -> int:
        return sum(g.total_order() for g in self.groups)

    def is_exact(self) -> bool:
        return all(
            scalars.is_exact(ins.point) for g in self.groups for ins in g.insertions
        )


Word = Union[PlainWord, WickWord]


# ---------------------------------------------------------------------------
# Linear combinations
# ---------------------------------------------------------------------------

class LinearCombination:
    """Finitely supported map word -> scalar coefficient.

    Zero coefficients are never stored.  Addition, scalar multiplication and
    the algebra product (distributing word concatenation) are supported for
    combinations over a single word kind.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, Scalar] | None = None):
        acc: dict[Word, Scalar] = {}
        if terms:
            for word, coeff in terms.items():
                coeff = as_scalar(coeff)
                if word in acc:
                    coeff = acc[word] + coeff
                if is_zero(coeff):
                    acc.pop(word, None)
                else:
                    acc[word] = coeff
        self._terms = acc

    @classmethod
    def zero(cls) -> "LinearCombination":
        return cls()

    @classmethod
    def of(cls, word: Word, coeff=1) -> "LinearCombination":
        return cls({word: as_scalar(coeff)})

    def items(self):
        return self._terms.items()

    def words(self):
        return self._terms.keys()

    def coeff(self, word: Word) -> Scalar:
        return self._terms.get(word, scalars.ZERO)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other):
        if not isinstance(other, LinearCombination):
            return NotImplemented
        acc = dict(self._terms)
        for word, coeff in other._terms.items():
            new = acc.get(word, scalars.ZERO) + coeff if word in acc else coeff
            if is_zero(new):
                acc.pop(word, None)
            else:
                acc[word] = new
        out = LinearCombination.__new__(LinearCombination)
        out._terms = acc
        return out

    def __sub__(self, other):
        if not isinstance(other, LinearCombination):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        out = LinearCombination.__new__(LinearCombination)
        out._terms = {w: -c for w, c in self._terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, LinearCombination):
            acc: dict[Word, Scalar] = {}
            for w1, c1 in self._terms.items():
                for w2, c2 in other._terms.items():
                    word = w1 * w2
                    coeff = c1 * c2
                    if word in acc:
                        coeff = acc[word] + coeff
                    if is_zero(coeff):
                        acc.pop(word, None)
                    else:
                        acc[word] = coeff
            out = LinearCombination.__new__(LinearCombination)
            out._terms = acc
            return out
        if isinstance(other, (PlainWord, WickWord)):
            return self * LinearCombination.of(other)
        try:
            coeff = as_scalar(other)
        except TypeError:
            return NotImplemented
        return self.scaled(coeff)

    def __rmul__(self, other):
        # Scalars commute with everything; word-by-combination products are
        # symmetric too since words are canonically sorted.
        return self.__mul__(other)

    def scaled(self, coeff) -> "LinearCombination":
        coeff = as_scalar(coeff)
        if is_zero(coeff):
            return LinearCombination.zero()
        return LinearCombination({w: c * coeff for w, c in self._terms.items()})

    def map_coefficients(self, fn) -> "LinearCombination":
        return LinearCombination({w: fn(c) for w, c in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, LinearCombination):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self):
        if not self._terms:
            return "LinearCombination(0)"
        parts = [f"{c!r} * {w!r}" for w, c in sorted(self._terms.items(), key=lambda t: repr(t[0]))]
        return "LinearCombination(" + " + ".join(parts) + ")"


# ---------------------------------------------------------------------------
# theta, rescale, wick expansion
# ---------------------------------------------------------------------------

def _as_combination(F) -> LinearCombination:
    if isinstance(F, LinearCombination):
        return F
    if isinstance(F, (PlainWord, WickWord)):
        return LinearCombination.of(F)
    if isinstance(F, WickGroup):
        return LinearCombination.of(WickWord.single_group(F))
    raise DomainError(_MODULE, f"expected a word or linear combination, got {type(F).__name__}")


def _theta_insertion(ins: Insertion) -> list[tuple[Scalar, Insertion]]:
    """Expansion of theta on one insertion: sum_a d_{m,a} zbar^{-(m+a)} [a, 1/zbar]."""
    if is_zero(ins.point):
        raise DomainError(_MODULE, "reflection has a pole at the origin: point z = 0")
    m = ins.order
    zbar = conjugate(ins.point)
    w = 1 / zbar if isinstance(zbar, complex) else zbar.inverse()
    out = []
    for a in range(1, m + 1):
        coeff = as_scalar(d_coeff(m, a)) * zbar ** (-(m + a))
        out.append((coeff, Insertion(a, w)))
    return out


def _product_expansion(factors: list[list[tuple[Scalar, Insertion]]]):
    """Yield (coefficient, insertion tuple) over the product of the factors."""
    if not factors:
        yield scalars.ONE, ()
        return
    head, tail = factors[0], factors[1:]
    for coeff_rest, ins_rest in _product_expansion(tail):
        for coeff, ins in head:
            yield coeff * coeff_rest, (ins,) + ins_rest


def theta(F) -> LinearCombination:
    """The reflection automorphism: anti-linear, z -> 1/conj(z).

    Acts on each insertion as [m, z] -> sum_a d_{m,a} conj(z)^{-(m+a)} [a, 1/conj(z)],
    multiplicatively over insertions and groups, conjugating coefficients.
    Wick groups map to Wick groups of the same arity.
    """
    F = _as_combination(F)
    result = LinearCombination.zero()
    for word, coeff in F.items():
        base = LinearCombination.of(type(word).unit(), conjugate(coeff))
        if isinstance(word, PlainWord):
            factors = [_theta_insertion(ins) for ins in word.insertions]
            expansion = LinearCombination(
                {PlainWord(inss): c for c, inss in _product_expansion(factors)}
            )
            result = result + base * expansion
        elif isinstance(word, WickWord):
            acc = base
            for group in word.groups:
                factors = [_theta_insertion(ins) for ins in group.insertions]
                expansion = LinearCombination(
                    {
                        WickWord.single_group(WickGroup(inss)): c
                        for c, inss in _product_expansion(factors)
                    }
                )
                acc = acc * expansion
            result = result + acc
        else:
            raise DomainError(_MODULE, f"theta does not act on {type(word).__name__}")
    return result


def rescale(F, a, q) -> LinearCombination:
    """The affine reparametrization z -> a + q z with weight q^m per insertion."""
    a = as_scalar(a)
    q = as_scalar(q)
    if is_zero(q):
        raise DomainError(_MODULE, "rescale needs q != 0")
    F = _as_combination(F)
    acc: dict[Word, Scalar] = {}
    for word, coeff in F.items():
        weight = coeff * q ** word.total_order()
        if isinstance(word, PlainWord):
            new_word: Word = PlainWord(
                tuple(Insertion(i.order, a + q * i.point) for i in word.insertions)
            )
        elif isinstance(word, WickWord):
            new_word = WickWord(
                tuple(
                    WickGroup(tuple(Insertion(i.order, a + q * i.point) for i in g.insertions))
                    for g in word.groups
                )
            )
        else:
            raise DomainError(_MODULE, f"rescale does not act on {type(word).__name__}")
        if new_word in acc:
            weight = acc[new_word] + weight
        if is_zero(weight):
            acc.pop(new_word, None)
        else:
            acc[new_word] = weight
    return LinearCombination(acc)


def _partial_pairings(seq: tuple[int, ...]):
    """Yield (pairs, singles) over all partial pairings of the index tuple."""
    if not seq:
        yield (), ()
        return
    head, rest = seq[0], seq[1:]
    for pairs, singles in _partial_pairings(rest):
        yield pairs, (head,) + singles
    for i in range(len(rest)):
        partner = rest[i]
        remaining = rest[:i] + rest[i + 1 :]
        for pairs, singles in _partial_pairings(remaining):
            yield ((head, partner),) + pairs, singles


def wick_expand(G: WickGroup) -> LinearCombination:
    """Expand a Wick group into plain words over partial pairings.

    :Z:_0 = sum_Q prod_{pairs} (-C(m_a, z_a, m_b, z_b)) * prod_{unpaired} [m, z].
    Requires pairwise distinct points inside the group (the expansion has
    poles at coincidences).
    """
    from .correlator import kernel  # deferred: correlator imports this module

    if not isinstance(G, WickGroup):
        raise DomainError(_MODULE, f"wick_expand expects a WickGroup, got {type(G).__name__}")
    ins = G.insertions
    for i in range(len(ins)):
        for j in range(i + 1, len(ins)):
            if scalars.sort_key(ins[i].point) == scalars.sort_key(ins[j].point):
                raise DomainError(
                    _MODULE,
                    f"wick_expand needs distinct points inside the group; "
                    f"{ins[i].point!r} occurs twice",
                )
    acc: dict[Word, Scalar] = {}
    exact = all(scalars.is_exact(i.point) for i in ins)
    for pairs, singles in _partial_pairings(tuple(range(len(ins)))):
        coeff: Scalar = scalars.one_scalar(exact)
        for i, j in pairs:
            coeff = coeff * (-kernel(ins[i].order, ins[i].point, ins[j].order, ins[j].point))
        word = PlainWord(tuple(ins[k] for k in singles))
        if word in acc:
            coeff = acc[word] + coeff
        if is_zero(coeff):
            acc.pop(word, None)
        else:
            acc[word] = coeff
    return LinearCombination(acc)
