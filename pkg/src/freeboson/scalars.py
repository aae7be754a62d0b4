"""Dual-backend complex scalars.

The exact backend is the ring Q(i)[sqrt(s) : s squarefree positive integer]:
finite sums sum_s (a_s + i b_s) sqrt(s) with rational a_s, b_s.  Gaussian
rationals are the s = 1 slice; square roots enter only through normalization
prefactors like 1/sqrt(n!) and i*sqrt(2m)/m!, and the ring is closed under
division, so every identity in the engine can be tested with zero rounding.

The float backend is the builtin ``complex``.  Mixed-backend arithmetic
promotes to float; exact-with-exact stays exact.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, sqrt as _fsqrt
from typing import Union

from .errors import DomainError

RationalLike = Union[int, Fraction]


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (k, s) with n = k*k*s and s squarefree, for n >= 1."""
    k, s = 1, 1
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            k *= d ** (e // 2)
            if e % 2:
                s *= d
        d += 1 if d == 2 else 2
    return k, s * m


def _smallest_prime_factor(n: int) -> int:
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1 if d == 2 else 2
    return n


class Exact:
    """An element of Q(i) adjoined square roots of squarefree integers.

    Stored as a sorted tuple of (s, re, im) triples meaning
    sum (re + i*im) * sqrt(s); s = 1 carries the Gaussian-rational part.
    Instances are immutable and hashable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        norm = []
        if terms:
            for s, (re, im) in terms.items():
                re = Fraction(re)
                im = Fraction(im)
                if re or im:
                    norm.append((int(s), re, im))
        norm.sort()
        self._terms = tuple(norm)

    @classmethod
    def _raw(cls, terms: tuple) -> "Exact":
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    # -- structure queries ------------------------------------------------

    @property
    def terms(self) -> tuple:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_gaussian(self) -> bool:
        """True when the value lies in Q(i) (no radical part)."""
        return all(s == 1 for s, _, _ in self._terms)

    def is_rational(self) -> bool:
        return self.is_gaussian() and all(im == 0 for _, _, im in self._terms)

    def gaussian(self) -> tuple[Fraction, Fraction]:
        if not self.is_gaussian():
            raise ValueError(f"not a Gaussian rational: {self!r}")
        if not self._terms:
            return Fraction(0), Fraction(0)
        _, re, im = self._terms[0]
        return re, im

    def rational(self) -> Fraction:
        re, im = self.gaussian()
        if im:
            raise ValueError(f"not rational: {self!r}")
        return re

    def conjugate(self) -> "Exact":
        return Exact._raw(tuple((s, re, -im) for s, re, im in self._terms))

    def real_part(self) -> "Exact":
        return Exact._raw(tuple((s, re, Fraction(0)) for s, re, im in self._terms if re))

    def imag_part(self) -> "Exact":
        """The imaginary part, as a real element (the b in a + ib)."""
        return Exact._raw(tuple((s, im, Fraction(0)) for s, re, im in self._terms if im))

    def abs_sq(self) -> "Exact":
        return self * self.conjugate()

    # -- arithmetic -------------------------------------------------------

    def _add_exact(self, other: "Exact", sign: int) -> "Exact":
        acc = {s: (re, im) for s, re, im in self._terms}
        for s, re, im in other._terms:
            a, b = acc.get(s, (Fraction(0), Fraction(0)))
            acc[s] = (a + sign * re, b + sign * im)
        return Exact({s: v for s, v in acc.items()})

    def __add__(self, other):
        if isinstance(other, Exact):
            return self._add_exact(other, 1)
        if isinstance(other, (int, Fraction)):
            return self._add_exact(rational(other), 1)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Exact):
            return self._add_exact(other, -1)
        if isinstance(other, (int, Fraction)):
            return self._add_exact(rational(other), -1)
        if isinstance(other, (float, complex)):
            return complex(self) - other
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return Exact._raw(tuple((s, -re, -im) for s, re, im in self._terms))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            f = Fraction(other)
            return Exact._raw(tuple((s, re * f, im * f) for s, re, im in self._terms))
        if isinstance(other, Exact):
            acc: dict[int, tuple[Fraction, Fraction]] = {}
            for s, a, b in self._terms:
                for t, c, d in other._terms:
                    g = gcd(s, t)
                    u = (s // g) * (t // g)
                    re = (a * c - b * d) * g
                    im = (a * d + b * c) * g
                    pa, pb = acc.get(u, (Fraction(0), Fraction(0)))
                    acc[u] = (pa + re, pb + im)
            return Exact(acc)
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "Exact":
        if not self._terms:
            raise ZeroDivisionError("division by exact zero")
        num = ONE
        den = self
        # Strip radicals one prime at a time: multiplying by the conjugate
        # that flips every term containing p removes p from the support.
        while True:
            p = None
            for s, _, _ in den._terms:
                if s > 1:
                    p = _smallest_prime_factor(s)
                    break
            if p is None:
                break
            keep = {}
            flip = {}
            for s, re, im in den._terms:
                (flip if s % p == 0 else keep)[s] = (re, im)
            conj = Exact(keep) - Exact(flip)
            num = num * conj
            den = den * conj
        a, b = den.gaussian()
        r = a * a + b * b
        return num * Exact({1: (a / r, -b / r)})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * rational(other).inverse()
        if isinstance(other, Exact):
            return self * other.inverse()
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        inv = self.inverse()
        if isinstance(other, (int, Fraction, Exact)):
            return inv * other
        if isinstance(other, (float, complex)):
            return other * complex(inv)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparisons / conversions ---------------------------------------

    def __eq__(self, other):
        if isinstance(other, Exact):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == rational(other)._terms
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational())
        return hash(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __complex__(self):
        re = 0.0
        im = 0.0
        for s, a, b in self._terms:
            w = _fsqrt(s)
            re += float(a) * w
            im += float(b) * w
        return complex(re, im)

    def __repr__(self):
        if not self._terms:
            return "Exact(0)"
        parts = []
        for s, re, im in self._terms:
            root_txt = "" if s == 1 else f"*sqrt({s})"
            if im == 0:
                parts.append(f"({re}){root_txt}")
            elif re == 0:
                parts.append(f"({im}j){root_txt}")
            else:
                parts.append(f"({re}+{im}j){root_txt}")
        return "Exact(" + " + ".join(parts) + ")"


ZERO = Exact()
ONE = Exact({1: (1, 0)})
I = Exact({1: (0, 1)})

Scalar = Union[Exact, complex]


def rational(re: RationalLike, im: RationalLike = 0) -> Exact:
    """Exact Gaussian rational re + i*im."""
    return Exact({1: (Fraction(re), Fraction(im))})


def root(x: RationalLike) -> Exact:
    """Exact square root of a nonnegative rational."""
    f = Fraction(x)
    if f < 0:
        raise DomainError("scalars", f"square root of negative rational {f}")
    if f == 0:
        return ZERO
    n = f.numerator * f.denominator
    k, s = _squarefree_split(n)
    return Exact({s: (Fraction(k, f.denominator), 0)})


def as_scalar(x) -> Scalar:
    """Coerce to a backend value: exact for int/Fraction/Exact, complex else."""
    if isinstance(x, Exact):
        return x
    if isinstance(x, (int, Fraction)):
        return rational(x)
    if isinstance(x, (float, complex)):
        return complex(x)
    raise TypeError(f"cannot interpret {x!r} as a scalar")


def is_exact(x) -> bool:
    return isinstance(x, Exact)


def is_zero(x) -> bool:
    if isinstance(x, Exact):
        return x.is_zero()
    return x == 0


def conjugate(x: Scalar) -> Scalar:
    if isinstance(x, Exact):
        return x.conjugate()
    return complex(x).conjugate()


def to_complex(x) -> complex:
    if isinstance(x, Exact):
        return complex(x)
    return complex(x)


def abs_sq(x: Scalar) -> Scalar:
    """x * conj(x); real, exact on the exact backend."""
    if isinstance(x, Exact):
        return x.abs_sq()
    x = complex(x)
    return complex(x.real * x.real + x.imag * x.imag, 0.0)


def real_value(x) -> Union[Fraction, float]:
    """The real number a scalar represents; exact Fraction when rational.

    Raises ValueError for values with a nonzero imaginary part.  Exact values
    with radical parts come back as floats (only comparisons need them).
    """
    if isinstance(x, Exact):
        if x.is_rational():
            return x.rational()
        if x.imag_part().is_zero():
            return complex(x).real
        raise ValueError(f"not a real value: {x!r}")
    x = complex(x)
    if x.imag != 0:
        raise ValueError(f"not a real value: {x!r}")
    return x.real


def sort_key(x: Scalar):
    """Deterministic ordering key; exact values sort before float values."""
    if isinstance(x, Exact):
        return (0, x.terms)
    x = complex(x)
    return (1, x.real, x.imag)


def zero_scalar(exact: bool) -> Scalar:
    return ZERO if exact else 0j


def one_scalar(exact: bool) -> Scalar:
    return ONE if exact else complex(1, 0)
