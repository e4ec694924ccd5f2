"""Exact sums of square roots with certified interval enclosures.

A value a + sum q_i sqrt(d_i) is kept in a normal form in which the radicands
are products of distinct members of a pairwise-coprime, square-free-looking
base. Distinct radicands are then linearly independent over Q, so a value is
zero exactly when all of its coefficients are.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

Number = Union[int, Fraction]

DEFAULT_BITS = 128
MAX_BITS = 1024

_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % q for q in range(2, isqrt(p) + 1))]


class UndecidedComparison(ArithmeticError):
    pass


def _strip_small_squares(n: int) -> Tuple[int, int]:
    """n = k^2 * m with small prime squares moved into k."""
    k = 1
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > n:
            break
        while n % pp == 0:
            n //= pp
            k *= p
    r = isqrt(n)
    if r * r == n:
        return k * r, 1
    return k, n


def _coprime_base(nums: Iterable[int]) -> List[int]:
    base: List[int] = []
    todo = [n for n in nums if n > 1]
    while todo:
        x = todo.pop()
        if x == 1:
            continue
        for i, b in enumerate(base):
            g = gcd(x, b)
            if g > 1:
                base.pop(i)
                todo.extend([g, b // g, x // g])
                break
        else:
            base.append(x)
    return sorted(base)


def _normalize(rational: Fraction, terms: Dict[int, Fraction]) -> Tuple[Fraction, Tuple[Tuple[int, Fraction], ...]]:
    pending: List[Tuple[int, Fraction]] = []
    for d, q in terms.items():
        if q == 0:
            continue
        k, m = _strip_small_squares(d)
        if m == 1:
            rational += q * k
        else:
            pending.append((m, q * k))
    while True:
        base = _coprime_base(m for m, _ in pending)
        # a base element that is a perfect square pulls out rationally
        squares = [b for b in base if isqrt(b) ** 2 == b]
        if not squares:
            break
        updated = []
        for m, q in pending:
            for b in squares:
                root = isqrt(b)
                while m % b == 0:
                    m //= b
                    q *= root
            k, m = _strip_small_squares(m)
            q *= k
            if m == 1:
                rational += q
            else:
                updated.append((m, q))
        pending = updated
    merged: Dict[int, Fraction] = {}
    for m, q in pending:
        # factor over the base and pull out even powers
        key, outside = 1, 1
        for b in base:
            e = 0
            while m % b == 0:
                m //= b
                e += 1
            outside *= b ** (e // 2)
            if e % 2:
                key *= b
        coef = q * outside
        if key == 1:
            rational += coef
        else:
            merged[key] = merged.get(key, Fraction(0)) + coef
    return rational, tuple(sorted((d, q) for d, q in merged.items() if q != 0))


def _floor_sqrt_scaled(n: int, bits: int) -> int:
    return isqrt(n << (2 * bits))


def _dyadic_down(x: Fraction, bits: int) -> Fraction:
    return Fraction((x.numerator << bits) // x.denominator, 1 << bits)


def _dyadic_up(x: Fraction, bits: int) -> Fraction:
    return Fraction(-((-x.numerator << bits) // x.denominator), 1 << bits)


def _sqrt_interval(lo: Fraction, hi: Fraction, bits: int) -> Tuple[Fraction, Fraction]:
    scale = 1 << bits
    lo = max(lo, Fraction(0))
    a = isqrt((lo.numerator << (2 * bits)) // lo.denominator)
    hnum = -((-hi.numerator << (2 * bits)) // hi.denominator)
    b = isqrt(hnum)
    if b * b < hnum:
        b += 1
    return Fraction(a, scale), Fraction(b, scale)


@dataclass(frozen=True)
class RadicalValue:
    """a + sum q_i sqrt(d_i) with rational a, q_i and integer d_i > 1."""

    rational: Fraction
    terms: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        a, terms = _normalize(Fraction(self.rational), {d: Fraction(q) for d, q in self._collect(self.terms)})
        object.__setattr__(self, "rational", a)
        object.__setattr__(self, "terms", terms)

    @staticmethod
    def _collect(terms: Iterable[Tuple[int, Number]]) -> List[Tuple[int, Fraction]]:
        acc: Dict[int, Fraction] = {}
        for d, q in terms:
            d = int(d)
            if d < 0:
                raise ValueError("negative radicand")
            acc[d] = acc.get(d, Fraction(0)) + Fraction(q)
        return list(acc.items())

    # constructors
    @classmethod
    def of(cls, value: Union[Number, "RadicalValue"]) -> "RadicalValue":
        if isinstance(value, RadicalValue):
            return value
        return cls(Fraction(value))

    @classmethod
    def sqrt(cls, value: Number) -> "RadicalValue":
        """sqrt of a non-negative rational."""
        v = Fraction(value)
        if v < 0:
            raise ValueError(f"sqrt of negative number {v}")
        # sqrt(p/q) = sqrt(p q) / q
        return cls(Fraction(0), ((v.numerator * v.denominator, Fraction(1, v.denominator)),))

    # arithmetic
    def __add__(self, other: Union[Number, "RadicalValue"]) -> "RadicalValue":
        o = RadicalValue.of(other)
        return RadicalValue(self.rational + o.rational, self.terms + o.terms)

    __radd__ = __add__

    def __neg__(self) -> "RadicalValue":
        return RadicalValue(-self.rational, tuple((d, -q) for d, q in self.terms))

    def __sub__(self, other: Union[Number, "RadicalValue"]) -> "RadicalValue":
        return self + (-RadicalValue.of(other))

    def __rsub__(self, other: Number) -> "RadicalValue":
        return RadicalValue.of(other) - self

    def __mul__(self, other: Union[Number, "RadicalValue"]) -> "RadicalValue":
        o = RadicalValue.of(other)
        left = [(1, self.rational)] + list(self.terms)
        right = [(1, o.rational)] + list(o.terms)
        return RadicalValue(Fraction(0), tuple((d1 * d2, q1 * q2) for d1, q1 in left for d2, q2 in right))

    __rmul__ = __mul__

    def __truediv__(self, other: Union[Number, "RadicalValue"]) -> "RadicalValue":
        return self * RadicalValue.of(other).reciprocal()

    def __rtruediv__(self, other: Number) -> "RadicalValue":
        return RadicalValue.of(other) * self.reciprocal()

    def reciprocal(self) -> "RadicalValue":
        if self.is_zero():
            raise ZeroDivisionError("reciprocal of zero")
        num = RadicalValue(Fraction(1))
        den = self
        # eliminate one base generator at a time: (A + B sqrt g)(A - B sqrt g) = A^2 - g B^2
        while den.terms:
            g = _coprime_base(d for d, _ in den.terms)[-1]
            conj_terms = tuple((d, -q if d % g == 0 else q) for d, q in den.terms)
            conj = RadicalValue(den.rational, conj_terms)
            num = num * conj
            den = den * conj
        q = den.rational
        return RadicalValue(num.rational / q, tuple((d, c / q) for d, c in num.terms))

    # predicates
    def is_zero(self) -> bool:
        return self.rational == 0 and not self.terms

    def is_rational(self) -> bool:
        return not self.terms

    @property
    def radical_count(self) -> int:
        return len(self.terms)

    # numerics
    def interval(self, bits: int = DEFAULT_BITS) -> Tuple[Fraction, Fraction]:
        """Closed dyadic interval guaranteed to contain the value."""
        lo = hi = self.rational
        scale = 1 << bits
        for d, q in self.terms:
            f = _floor_sqrt_scaled(d, bits)
            s_lo = Fraction(f, scale)
            s_hi = s_lo if f * f == d << (2 * bits) else Fraction(f + 1, scale)
            if q > 0:
                lo += q * s_lo
                hi += q * s_hi
            else:
                lo += q * s_hi
                hi += q * s_lo
        if self.terms:
            lo, hi = _dyadic_down(lo, bits), _dyadic_up(hi, bits)
        return lo, hi

    def __float__(self) -> float:
        lo, hi = self.interval(64)
        return float((lo + hi) / 2)

    def sign(self, max_bits: int = MAX_BITS, start_bits: int = DEFAULT_BITS) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.rational > 0 else -1
        bits = start_bits
        while bits <= max_bits:
            lo, hi = self.interval(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise UndecidedComparison(f"sign undecided at {max_bits} bits")

    def floor(self, max_bits: int = MAX_BITS, start_bits: int = DEFAULT_BITS) -> Tuple[int, Tuple[Fraction, Fraction], int]:
        """Integer floor with the certifying interval and its precision."""
        if self.is_rational():
            f = self.rational.numerator // self.rational.denominator
            return f, (self.rational, self.rational), 0
        # an irrational value is never an integer, so refinement terminates
        bits = start_bits
        while bits <= max_bits:
            lo, hi = self.interval(bits)
            f = lo.numerator // lo.denominator
            if hi < f + 1:
                return f, (lo, hi), bits
            bits *= 2
        raise UndecidedComparison(f"floor undecided at {max_bits} bits")

    def squared(self) -> "RadicalValue":
        return self * self

    # serialization
    def to_json(self) -> Dict[str, Any]:
        return {
            "rational": _frac_json(self.rational),
            "terms": [[str(d), _frac_json(q)] for d, q in self.terms],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "RadicalValue":
        return cls(_frac_from(data["rational"]), tuple((int(d), _frac_from(q)) for d, q in data["terms"]))

    def __str__(self) -> str:
        parts = [str(self.rational)] if self.rational or not self.terms else []
        for d, q in self.terms:
            parts.append(f"{q}*sqrt({d})")
        return " + ".join(parts)


def _frac_json(q: Fraction) -> Dict[str, str]:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def _frac_from(data: Dict[str, str]) -> Fraction:
    return Fraction(int(data["num"]), int(data["den"]))


@dataclass(frozen=True)
class NestedRadical:
    """sqrt(inner) for a non-negative RadicalValue inner."""

    inner: RadicalValue

    def interval(self, bits: int = DEFAULT_BITS) -> Tuple[Fraction, Fraction]:
        lo, hi = self.inner.interval(bits + 2)
        if hi < 0:
            raise ValueError("sqrt of a negative value")
        return _sqrt_interval(lo, hi, bits)

    def squared(self) -> RadicalValue:
        return self.inner

    def to_json(self) -> Dict[str, Any]:
        return {"sqrt_of": self.inner.to_json()}

    def __float__(self) -> float:
        return float(self.inner) ** 0.5


Comparable = Union[RadicalValue, NestedRadical]


@dataclass(frozen=True)
class ComparisonCertificate:
    ordering: int
    method: str
    bits: int
    left_interval: Optional[Tuple[Fraction, Fraction]] = None
    right_interval: Optional[Tuple[Fraction, Fraction]] = None

    def gap(self) -> Optional[Fraction]:
        if self.left_interval is None or self.right_interval is None or self.ordering == 0:
            return None
        if self.ordering > 0:
            return self.left_interval[0] - self.right_interval[1]
        return self.right_interval[0] - self.left_interval[1]

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"ordering": self.ordering, "method": self.method, "bits": self.bits}
        if self.left_interval is not None:
            out["left_interval"] = [_frac_json(x) for x in self.left_interval]
            out["right_interval"] = [_frac_json(x) for x in self.right_interval]
        return out


def _as_comparable(x: Union[Number, Comparable]) -> Comparable:
    if isinstance(x, (RadicalValue, NestedRadical)):
        return x
    return RadicalValue.of(x)


def _known_nonnegative(x: Comparable) -> bool:
    if isinstance(x, NestedRadical):
        return True
    return x.sign() >= 0


def compare_radicals(a: Union[Number, Comparable], b: Union[Number, Comparable],
                     max_bits: int = MAX_BITS, start_bits: int = DEFAULT_BITS) -> ComparisonCertificate:
    """Certified sign of a - b.

    Equality is decided algebraically: through the normal form for flat sums and
    by squaring both (non-negative) sides when a nested radical is involved.
    Strict order is decided by disjoint intervals, doubling the precision up to
    `max_bits`; past that an UndecidedComparison is raised.
    """
    a, b = _as_comparable(a), _as_comparable(b)
    if isinstance(a, RadicalValue) and isinstance(b, RadicalValue):
        if (a - b).is_zero():
            return ComparisonCertificate(0, "normal-form identity", 0)
    elif _known_nonnegative(a) and _known_nonnegative(b):
        if (a.squared() - b.squared()).is_zero():
            return ComparisonCertificate(0, "identity after squaring", 0)
    bits = start_bits
    while bits <= max_bits:
        la, ha = a.interval(bits)
        lb, hb = b.interval(bits)
        if la > hb:
            return ComparisonCertificate(1, "interval separation", bits, (la, ha), (lb, hb))
        if ha < lb:
            return ComparisonCertificate(-1, "interval separation", bits, (la, ha), (lb, hb))
        bits *= 2
    raise UndecidedComparison(f"comparison undecided at {max_bits} bits")
