"""
Arithmetic in Z[ζ] and Q(ζ), ζ a primitive cube root of unity.

Elements are kept in the basis {1, ζ} with ζ² = -1 - ζ. The module also
describes how rational primes decompose in K = Q(ζ), decides local
squareness in K_q and evaluates the cubic residue symbol at split primes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from sympy import isprime, legendre_symbol, multiplicity, integer_nthroot

from constants import PrimeKind

Rational = Union[int, Fraction]


class NotPrimeError(ValueError):
    pass


@dataclass(frozen=True)
class EisensteinInt:
    """c0 + c1·ζ with integer coefficients."""
    c0: int
    c1: int = 0

    def __add__(self, other: EisensteinInt | int) -> EisensteinInt:
        other = _as_eisenstein(other)
        if other is None:
            return NotImplemented
        return EisensteinInt(self.c0 + other.c0, self.c1 + other.c1)

    __radd__ = __add__

    def __neg__(self) -> EisensteinInt:
        return EisensteinInt(-self.c0, -self.c1)

    def __sub__(self, other: EisensteinInt | int) -> EisensteinInt:
        other = _as_eisenstein(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: int) -> EisensteinInt:
        return (-self) + other

    def __mul__(self, other: EisensteinInt | int) -> EisensteinInt:
        other = _as_eisenstein(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.c0, self.c1, other.c0, other.c1
        bd = b * d
        return EisensteinInt(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> EisensteinInt:
        if exponent < 0:
            raise ValueError("negative powers live in KRational")
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self) -> bool:
        return self.c0 != 0 or self.c1 != 0

    def norm(self) -> int:
        return norm(self)

    def conjugate(self) -> EisensteinInt:
        return conjugate(self)

    def is_rational(self) -> bool:
        return self.c1 == 0

    def __str__(self) -> str:
        if self.c1 == 0:
            return str(self.c0)
        zeta = "ζ" if self.c1 == 1 else "-ζ" if self.c1 == -1 else f"{self.c1}ζ"
        if self.c0 == 0:
            return zeta
        sign = "" if zeta.startswith("-") else "+"
        return f"{self.c0}{sign}{zeta}"


def _as_eisenstein(x) -> EisensteinInt | None:
    if isinstance(x, EisensteinInt):
        return x
    if isinstance(x, int):
        return EisensteinInt(x, 0)
    return None


ONE = EisensteinInt(1, 0)
ZETA = EisensteinInt(0, 1)
ZETA2 = EisensteinInt(-1, -1)
UNITS = [ONE, -ONE, ZETA, -ZETA, ZETA2, -ZETA2]
# The prime above 3 and its powers; P**6 == -27.
P = EisensteinInt(1, -1)
P2 = P * P
P3 = P2 * P
P6 = P3 * P3


def norm(z: EisensteinInt) -> int:
    """
    N(c0 + c1ζ) = c0² - c0·c1 + c1².
    """
    return z.c0 * z.c0 - z.c0 * z.c1 + z.c1 * z.c1


def conjugate(z: EisensteinInt) -> EisensteinInt:
    # ζ̄ = ζ² = -1 - ζ
    return EisensteinInt(z.c0 - z.c1, -z.c1)


def divides(z: EisensteinInt, w: EisensteinInt) -> bool:
    """
    True when w = z·u for some u in Z[ζ].

    :raises ZeroDivisionError: when z is zero.
    """
    n = norm(z)
    if n == 0:
        raise ZeroDivisionError("division by zero in Z[ζ]")
    t = w * conjugate(z)
    return t.c0 % n == 0 and t.c1 % n == 0


@dataclass(frozen=True, eq=False)
class KRational:
    """
    numerator / denominator with numerator in Z[ζ].

    Canonical form: denominator > 0 and gcd(c0, c1, denominator) = 1.
    """
    numerator: EisensteinInt
    denominator: int = 1

    def __post_init__(self) -> None:
        if self.denominator == 0:
            raise ZeroDivisionError("KRational with zero denominator")
        num, den = self.numerator, self.denominator
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num.c0, num.c1, den)
        if g > 1:
            num, den = EisensteinInt(num.c0 // g, num.c1 // g), den // g
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def of(cls, x) -> KRational:
        if isinstance(x, KRational):
            return x
        if isinstance(x, EisensteinInt):
            return cls(x, 1)
        if isinstance(x, int):
            return cls(EisensteinInt(x, 0), 1)
        if isinstance(x, Fraction):
            return cls(EisensteinInt(x.numerator, 0), x.denominator)
        raise TypeError(f"cannot view {x!r} as an element of Q(ζ)")

    def _coerce(self, other) -> KRational | None:
        try:
            return KRational.of(other)
        except TypeError:
            return None

    def __add__(self, other) -> KRational:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return KRational(self.numerator * other.denominator + other.numerator * self.denominator,
                         self.denominator * other.denominator)

    __radd__ = __add__

    def __neg__(self) -> KRational:
        return KRational(-self.numerator, self.denominator)

    def __sub__(self, other) -> KRational:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> KRational:
        return (-self) + other

    def __mul__(self, other) -> KRational:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return KRational(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def inverse(self) -> KRational:
        """
        :raises ZeroDivisionError: for zero.
        """
        n = norm(self.numerator)
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(ζ)")
        return KRational(conjugate(self.numerator) * self.denominator, n)

    def __truediv__(self, other) -> KRational:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> KRational:
        return KRational.of(other) * self.inverse()

    def __pow__(self, exponent: int) -> KRational:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return KRational(self.numerator ** exponent, self.denominator ** exponent)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self) -> int:
        if self.numerator.c1 == 0:
            return hash(Fraction(self.numerator.c0, self.denominator))
        return hash((self.numerator.c0, self.numerator.c1, self.denominator))

    def __bool__(self) -> bool:
        return bool(self.numerator)

    def is_rational(self) -> bool:
        return self.numerator.c1 == 0

    def to_fraction(self) -> Fraction:
        """
        :raises ValueError: when the element has a ζ component.
        """
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.numerator.c0, self.denominator)

    def conjugate(self) -> KRational:
        return KRational(conjugate(self.numerator), self.denominator)

    def __str__(self) -> str:
        if self.denominator == 1:
            return str(self.numerator)
        return f"({self.numerator})/{self.denominator}"

    __repr__ = __str__


@dataclass(frozen=True, order=True)
class KPrime:
    """A prime of O_K, described by the rational prime under it."""
    residue_char: int
    kind: PrimeKind = field(compare=False)
    generator: EisensteinInt = field(compare=False)
    residue_field_size: int = field(compare=False)
    # Orders the two conjugate primes above a split ℓ.
    conjugate_index: int = 0

    def __str__(self) -> str:
        if self.kind is PrimeKind.RAMIFIED:
            return "𝔭"
        if self.kind is PrimeKind.INERT:
            return f"{self.residue_char}O_K"
        return f"({self.generator})"


def classify_prime(ell: int) -> KPrime:
    """
    Decomposition type of ℓ in K.

    :raises NotPrimeError: when ℓ is not a rational prime.
    """
    if not isprime(ell):
        raise NotPrimeError(f"{ell} is not prime")
    if ell == 3:
        return KPrime(3, PrimeKind.RAMIFIED, P, 3)
    if ell % 3 == 2:
        return KPrime(ell, PrimeKind.INERT, EisensteinInt(ell, 0), ell * ell)
    return KPrime(ell, PrimeKind.SPLIT, split_prime(ell), ell)


def primes_above(ell: int) -> list[KPrime]:
    """Every prime of O_K over ℓ; a split ℓ gives π and its conjugate."""
    q = classify_prime(ell)
    if q.kind is not PrimeKind.SPLIT:
        return [q]
    return [q, KPrime(ell, PrimeKind.SPLIT, conjugate(q.generator), ell, 1)]


def split_prime(ell: int) -> EisensteinInt:
    """
    The primary prime π = m + nζ over ℓ with m ≡ 1, n ≡ 0 (mod 3) and n > 0.

    Only π and its conjugate are primary with these congruences, and their
    n have opposite signs, so the choice is unique.

    :raises ValueError: when ℓ is not 1 mod 3.
    :raises RuntimeError: when no representation exists.
    """
    if ell % 3 != 1:
        raise ValueError(f"{ell} does not split in Q(ζ)")
    n = 3
    while 3 * n * n <= 4 * ell:
        r, exact = integer_nthroot(4 * ell - 3 * n * n, 2)
        if exact:
            for twice_m in (n + r, n - r):
                m = twice_m // 2
                if twice_m % 2 == 0 and m % 3 == 1:
                    return EisensteinInt(m, n)
        n += 3
    raise RuntimeError(f"no primary prime found above {ell}")


def cubic_residue_symbol(x: int, pi: EisensteinInt, ell: int) -> EisensteinInt:
    """
    (x/π)₃ by Euler's criterion in Z[ζ]/π ≅ F_ℓ.

    ζ reduces to -m/n mod ℓ for π = m + nζ.

    :raises ValueError: when ℓ divides x.
    :raises NotPrimeError: when π is not a prime of norm ℓ.
    """
    if not isprime(ell) or ell % 3 != 1 or norm(pi) != ell:
        raise NotPrimeError(f"{pi} is not a split prime over {ell}")
    if x % ell == 0:
        raise ValueError(f"{ell} divides {x}")
    c = pow(x, (ell - 1) // 3, ell)
    zeta_bar = (-pi.c0 * pow(pi.c1, -1, ell)) % ell
    if c == 1:
        return ONE
    if c == zeta_bar:
        return ZETA
    if c == zeta_bar * zeta_bar % ell:
        return ZETA2
    raise RuntimeError(f"{x}^((ℓ-1)/3) = {c} is not a cube root of unity mod {ell}")


def _square_class(x: Rational) -> int:
    # num/den and num·den differ by the square den².
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no square class")
    return x.numerator * x.denominator


def _is_rational_square(n: int) -> bool:
    return n > 0 and integer_nthroot(n, 2)[1]


def is_square_in_Qp(x: Rational, ell: int) -> bool:
    """
    Whether x is a nonzero square in Q_ℓ.

    :raises ValueError: for x = 0.
    """
    y = _square_class(x)
    v = multiplicity(ell, abs(y))
    if v % 2:
        return False
    u = y // ell ** v
    if ell == 2:
        return u % 8 == 1
    if ell == 3:
        return u % 3 == 1
    return legendre_symbol(u % ell, ell) == 1


def is_square_in_K(a: Rational) -> bool:
    """a ∈ K^{*2} iff a or -3a is a rational square."""
    y = _square_class(a)
    return _is_rational_square(y) or _is_rational_square(-3 * y)


def is_square_in_Kq(a: Rational, q: KPrime) -> bool:
    """
    Whether a ∈ K_q^{*2}.

    :raises ValueError: for a = 0.
    """
    ell = q.residue_char
    if q.kind is PrimeKind.SPLIT:
        return is_square_in_Qp(a, ell)
    if q.kind is PrimeKind.INERT and ell != 2:
        # Every unit of Z_ℓ is a square in the quadratic unramified extension.
        return multiplicity(ell, abs(_square_class(a))) % 2 == 0
    return is_square_in_Qp(a, ell) or is_square_in_Qp(-3 * Fraction(a), ell)


def k_valuation(a: Rational, q: KPrime) -> int:
    """
    v_q(a) normalised by v_q(generator) = 1, so v_𝔭(3) = 2.

    :raises ValueError: for a = 0.
    """
    a = Fraction(a)
    if a == 0:
        raise ValueError("valuation of zero")
    ell = q.residue_char
    v = multiplicity(ell, abs(a.numerator)) - multiplicity(ell, a.denominator)
    return 2 * v if q.kind is PrimeKind.RAMIFIED else v
