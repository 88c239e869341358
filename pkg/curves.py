"""
Curves with a rational 3-isogeny and the isogenies between them.

Type I:  E_a:     y² = x³ + a
Type II: E_{a,b}: y² = x³ + a(x - b)²

Points carry exact coordinates, Fraction over Q or KRational over K = Q(ζ).
Isogenies send kernel points to the point at infinity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from sympy import factorint, integer_nthroot

from eisenstein import ZETA, P as P_K, P2, P3, P6, EisensteinInt, KRational

Field = Union[Fraction, KRational]


class OffCurveError(ValueError):
    pass


class InvalidCurveError(ValueError):
    pass


def _field(x) -> Field:
    if isinstance(x, (Fraction, KRational)):
        return x
    if isinstance(x, EisensteinInt):
        return KRational.of(x)
    return Fraction(x)


@dataclass(frozen=True)
class Point:
    """An affine point, or the point at infinity when x is None."""
    x: Field | None = None
    y: Field | None = None

    def __post_init__(self) -> None:
        if (self.x is None) != (self.y is None):
            raise ValueError("a point needs both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, "x", _field(self.x))
            object.__setattr__(self, "y", _field(self.y))

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self) -> str:
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = Point()


@dataclass(frozen=True)
class WeierstrassCurve:
    """y² = x³ + A x² + B x + C over Q or Q(ζ)."""
    A: Field
    B: Field
    C: Field
    label: str = ""

    def contains(self, P: Point) -> bool:
        if P.is_infinity:
            return True
        x, y = P.x, P.y
        return y * y == x * x * x + self.A * x * x + self.B * x + self.C

    def require(self, P: Point) -> None:
        """
        :raises OffCurveError: when P does not satisfy the equation.
        """
        if not self.contains(P):
            raise OffCurveError(f"{P} is not on {self}")

    def negate(self, P: Point) -> Point:
        return P if P.is_infinity else Point(P.x, -P.y)

    def add(self, P: Point, Q: Point) -> Point:
        """
        Chord and tangent addition.

        :raises OffCurveError: for an input off the curve.
        """
        self.require(P)
        self.require(Q)
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        if P.x == Q.x:
            if P.y == -Q.y:
                return INFINITY
            slope = (3 * P.x * P.x + 2 * self.A * P.x + self.B) / (2 * P.y)
        else:
            slope = (Q.y - P.y) / (Q.x - P.x)
        x3 = slope * slope - self.A - P.x - Q.x
        return Point(x3, slope * (P.x - x3) - P.y)

    def scalar_mul(self, n: int, P: Point) -> Point:
        if n < 0:
            return self.scalar_mul(-n, self.negate(P))
        result, addend = INFINITY, P
        while n:
            if n & 1:
                result = self.add(result, addend)
            addend = self.add(addend, addend)
            n >>= 1
        return result

    def is_torsion(self, P: Point, bound: int = 12) -> bool:
        Q = P
        for _ in range(bound):
            if Q.is_infinity:
                return True
            Q = self.add(Q, P)
        return False

    def __str__(self) -> str:
        if self.label:
            return self.label
        return f"y² = x³ + ({self.A})x² + ({self.B})x + ({self.C})"


@dataclass(frozen=True)
class Curve1:
    a: int
    sixth_power_free: bool = False

    def __post_init__(self) -> None:
        if self.a == 0:
            raise InvalidCurveError("E_0 is singular")

    @property
    def weierstrass(self) -> WeierstrassCurve:
        return WeierstrassCurve(Fraction(0), Fraction(0), Fraction(self.a), f"E_{self.a}")


@dataclass(frozen=True)
class Curve2:
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a * self.b * self.d == 0:
            raise InvalidCurveError(f"E_{{{self.a},{self.b}}} is singular: ab(4a+27b) = 0")

    @property
    def d(self) -> int:
        return 4 * self.a + 27 * self.b

    @property
    def weierstrass(self) -> WeierstrassCurve:
        a, b = self.a, self.b
        return WeierstrassCurve(Fraction(a), Fraction(-2 * a * b), Fraction(a * b * b), f"E_{{{a},{b}}}")

    def isogenous(self) -> Curve2:
        """Codomain E_{-27a, 4a+27b} of ψ."""
        return Curve2(-27 * self.a, self.d)


Curve = Union[Curve1, Curve2, WeierstrassCurve]


def _model(curve: Curve) -> WeierstrassCurve:
    return curve if isinstance(curve, WeierstrassCurve) else curve.weierstrass


def validate_type2(a: int, b: int) -> Curve2:
    """
    :raises InvalidCurveError: when ab(4a+27b) = 0 or a prime square divides gcd(a, b).
    """
    curve = Curve2(a, b)
    g = math.gcd(a, b)
    if any(e > 1 for e in factorint(g).values()):
        raise InvalidCurveError(f"gcd({a}, {b}) = {g} is not squarefree")
    return curve


def sixth_power_free_part(a: int) -> int:
    """a with every rational sixth power removed; E_{c⁶a} ≅ E_a over Q."""
    if a == 0:
        raise InvalidCurveError("E_0 is singular")
    for p, e in factorint(abs(a)).items():
        a //= p ** (6 * (e // 6))
    return a


def normalize_type1(a: int) -> Curve1:
    """
    Sixth-power-free representative over K, with v₃(a) ≤ 2 via a ~ -27a.

    :raises InvalidCurveError: for a = 0.
    """
    a = sixth_power_free_part(a)
    while a % 27 == 0:
        a //= -27
    return Curve1(a, sixth_power_free=True)


def add_points(P: Point, Q: Point, curve: Curve) -> Point:
    return _model(curve).add(P, Q)


def scalar_mul(n: int, P: Point, curve: Curve) -> Point:
    return _model(curve).scalar_mul(n, P)


def negate_point(P: Point, curve: Curve) -> Point:
    return _model(curve).negate(P)


def is_torsion(P: Point, curve: Curve, bound: int = 12) -> bool:
    return _model(curve).is_torsion(P, bound)


def _type1(a: int) -> WeierstrassCurve:
    return Curve1(a).weierstrass


def _type1_over_K(a: int) -> WeierstrassCurve:
    return WeierstrassCurve(KRational.of(0), KRational.of(0), KRational.of(a), f"E_{a}/K")


def phi_rational(a: int, P: Point) -> Point:
    """
    φ_a: E_a → E_{-27a}, ((x³+4a)/x², y(x³-8a)/x³).

    :raises OffCurveError: when P is not on E_a.
    """
    _type1(a).require(P)
    if P.is_infinity or P.x == 0:
        return INFINITY
    x, y = P.x, P.y
    return Point((x ** 3 + 4 * a) / (x * x), y * (x ** 3 - 8 * a) / x ** 3)


def phi_hat_rational(a: int, P: Point) -> Point:
    """
    φ̂_a: E_{-27a} → E_a, ((x³-108a)/(9x²), y(x³+216a)/(27x³)).
    """
    _type1(-27 * a).require(P)
    if P.is_infinity or P.x == 0:
        return INFINITY
    x, y = P.x, P.y
    return Point((x ** 3 - 108 * a) / (9 * x * x), y * (x ** 3 + 216 * a) / (27 * x ** 3))


def phi_K(a: int, P: Point) -> Point:
    """
    φ: E_a → E_a over K, φ_a followed by E_{-27a} ≅ E_a,
    ((x³+4a)/(𝔭²x²), y(x³-8a)/(𝔭³x³)).
    """
    P = Point(KRational.of(P.x), KRational.of(P.y)) if not P.is_infinity else P
    _type1_over_K(a).require(P)
    if P.is_infinity or P.x == 0:
        return INFINITY
    x, y = P.x, P.y
    return Point((x ** 3 + 4 * a) / (x * x * P2), y * (x ** 3 - 8 * a) / (x ** 3 * P3))


def psi(a: int, b: int, P: Point) -> Point:
    """
    ψ_{a,b}: E_{a,b} → E_{-27a,d},
    (9(x³ + (4/3)ax² - 4abx + 4ab²)/x², 27y(x³ + 4abx - 8ab²)/x³).
    """
    Curve2(a, b).weierstrass.require(P)
    if P.is_infinity or P.x == 0:
        return INFINITY
    x, y = P.x, P.y
    X = (9 * x ** 3 + 12 * a * x * x - 36 * a * b * x + 36 * a * b * b) / (x * x)
    Y = 27 * y * (x ** 3 + 4 * a * b * x - 8 * a * b * b) / x ** 3
    return Point(X, Y)


def psi_hat(a: int, b: int, P: Point) -> Point:
    """
    ψ̂_{a,b}: E_{-27a,d} → E_{a,b},
    ((x³ - 36ax² + 108adx - 108ad²)/(81x²), y(x³ - 108adx + 216ad²)/(729x³)).
    """
    d = 4 * a + 27 * b
    Curve2(a, b).isogenous().weierstrass.require(P)
    if P.is_infinity or P.x == 0:
        return INFINITY
    x, y = P.x, P.y
    X = (x ** 3 - 36 * a * x * x + 108 * a * d * x - 108 * a * d * d) / (81 * x * x)
    Y = y * (x ** 3 - 108 * a * d * x + 216 * a * d * d) / (729 * x ** 3)
    return Point(X, Y)


def type2_k_model(a: int, b: int) -> WeierstrassCurve:
    """
    The K-model E₂ of E_{-27a,d} that ψ lands on after theta⁻¹.
    """
    z, z2 = ZETA, ZETA * ZETA
    a2 = -a * (3 + 5 * z)
    b2 = a * (a * (-5 + 2 * z) + 18 * b * z2)
    c2 = a * (a * a * (3 + 3 * z) - 2 * a * b * (1 - 9 * z) - 27 * b * b)
    return WeierstrassCurve(KRational.of(a2), KRational.of(b2), KRational.of(c2), f"E2({a},{b})")


def theta(a: int, b: int, P: Point) -> Point:
    """
    E₂ → E_{-27a,d}: (𝔭²(𝔭²x - a - a𝔭), 𝔭⁶y).
    """
    if P.is_infinity:
        return INFINITY
    x, y = KRational.of(P.x), KRational.of(P.y)
    return Point(P2 * (P2 * x - a - a * P_K), P6 * y)


def theta_inverse(a: int, b: int, P: Point) -> Point:
    if P.is_infinity:
        return INFINITY
    x, y = KRational.of(P.x), KRational.of(P.y)
    return Point((x / P2 + a + a * P_K) / P2, y / P6)


def psi_normalized(a: int, b: int, P: Point) -> Point:
    """
    theta⁻¹∘ψ: E_{a,b} → E₂ over K,
    (ζ(x³ + a𝔭x² - 4abx + 4ab²)/x², -y(x³ + 4abx - 8ab²)/x³).
    """
    Curve2(a, b).weierstrass.require(P)
    if P.is_infinity or P.x == 0:
        return INFINITY
    x, y = KRational.of(P.x), KRational.of(P.y)
    X = ZETA * (x ** 3 + a * P_K * x * x - 4 * a * b * x + 4 * a * b * b) / (x * x)
    Y = -y * (x ** 3 + 4 * a * b * x - 8 * a * b * b) / x ** 3
    return Point(X, Y)


@dataclass(frozen=True)
class KummerImage:
    t1: KRational
    t2: KRational

    def __str__(self) -> str:
        return f"({self.t1}, {self.t2})"


def kummer_image_type1(a: int, P: Point) -> KummerImage:
    """
    Image of P ∈ E_a(K) under the Kummer map of φ_a when √a = s is rational:
    (1/(2s), 2s) at (0, s), (-2s, -1/(2s)) at (0, -s), else (y - s, y + s),
    as elements of K^*/K^{*3}.

    :raises ValueError: when a is not a rational square.
    :raises OffCurveError: when P is not on E_a over K.
    """
    s, exact = integer_nthroot(a, 2) if a > 0 else (0, False)
    if not exact:
        raise ValueError(f"√{a} is not rational; only the split case is supported")
    if P.is_infinity:
        return KummerImage(KRational.of(1), KRational.of(1))
    P = Point(KRational.of(P.x), KRational.of(P.y))
    _type1_over_K(a).require(P)
    s = int(s)
    if P.x == 0:
        if P.y == s:
            return KummerImage(KRational.of(Fraction(1, 2 * s)), KRational.of(2 * s))
        return KummerImage(KRational.of(-2 * s), KRational.of(Fraction(-1, 2 * s)))
    return KummerImage(P.y - s, P.y + s)
