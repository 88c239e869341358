"""
Rational cube sums D = x³ + y³ for D = ℓ, 2ℓ and ℓ², and families of curves
built to have empty or large Selmer sets.

D > 2 is a cube sum exactly when E_{16D²} has positive rank over Q. For
D = 2ℓ that curve is E_{64ℓ²} ≅ E_{ℓ²}, which is 3-isogenous to E_{-27ℓ²}.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import integer_nthroot, isprime, legendre_symbol, primerange

from classgroup import squarefree_core
from constants import DEFAULT_SEARCH_HEIGHT, TORSION_BOUND, Assumption, VerdictStatus
from curves import Curve1, Curve2, Point, WeierstrassCurve, normalize_type1
from eisenstein import ONE, cubic_residue_symbol, split_prime
from localdata import compute_S123, type1_sets
from selmer import ConsistencyError, SelmerBounds, Type2ClassRanks, type1_bounds_K, type2_bounds


class UnsupportedShapeError(ValueError):
    pass


@dataclass
class CubeSumVerdict:
    D: int
    status: VerdictStatus
    selmer_dim: int
    source: str
    rank: int | None = None
    hypotheses: list[Assumption] = field(default_factory=list)
    certificate: Point | None = None
    certificate_curve: str | None = None


@dataclass
class FamilyWitness:
    n: int
    primes: list[int]
    a: int
    b: int
    s3_size: int
    lower_bound: int


def _check_prime(ell: int) -> None:
    if ell < 5 or not isprime(ell):
        raise ValueError(f"{ell} is not a prime ≥ 5")


def selmer_dim_16l2(ell: int) -> int:
    """
    dim Sel^φ(E_{16ℓ²}/K): 1, 2 or 3 as ℓ is 2 or 5, 4, 7 or 8, or 1 mod 9.

    :raises ValueError: unless ℓ is a prime ≥ 5.
    """
    _check_prime(ell)
    r = ell % 9
    if r in (2, 5):
        return 1
    if r in (4, 7, 8):
        return 2
    return 3


def selmer_dim_16l4(ell: int) -> int:
    """
    dim Sel^φ(E_{16ℓ⁴}/K), the same residue table as for 16ℓ².

    :raises ValueError: unless ℓ is a prime ≥ 5.
    """
    return selmer_dim_16l2(ell)


def selmer_dim_l2(ell: int) -> int:
    """
    dim Sel^φ(E_{ℓ²}/K). For ℓ ≡ 1, 7 (mod 9) the answer turns on whether 2
    is a cube modulo the primary prime above ℓ.

    :raises ValueError: unless ℓ is a prime ≥ 5.
    """
    _check_prime(ell)
    r = ell % 9
    if ell % 3 == 2:
        return 1 if r == 5 else 2
    if r == 4:
        return 2
    return 3 if cubic_residue_symbol(2, split_prime(ell), ell) == ONE else 1


def cube_sum_shape(D: int) -> tuple[str, int]:
    """
    ("l", ℓ), ("2l", ℓ) or ("l2", ℓ) for D = ℓ, 2ℓ or ℓ² with ℓ a prime ≥ 5.

    :raises UnsupportedShapeError: for any other D.
    """
    if D >= 5 and isprime(D):
        return "l", D
    if D % 2 == 0 and D // 2 >= 5 and isprime(D // 2):
        return "2l", D // 2
    root, exact = integer_nthroot(D, 2) if D > 0 else (0, False)
    if exact and root >= 5 and isprime(root):
        return "l2", int(root)
    raise UnsupportedShapeError(f"{D} is not ℓ, 2ℓ or ℓ² for a prime ℓ ≥ 5")


def cube_sum_point(D: int, x: Fraction | int, y: Fraction | int) -> Point:
    """
    The point (12D/(x+y), 36D(x-y)/(x+y)) of y² = x³ - 432D² for x³ + y³ = D.

    :raises ValueError: when x³ + y³ ≠ D or x + y = 0.
    """
    x, y = Fraction(x), Fraction(y)
    if x ** 3 + y ** 3 != D or x + y == 0:
        raise ValueError(f"({x}, {y}) is not a cube-sum representation of {D}")
    return Point(12 * D / (x + y), 36 * D * (x - y) / (x + y))


def special_family_point(ell: int) -> tuple[str, Point] | None:
    """
    A point of infinite order on E_{-27ℓ²} for ℓ = t² + 27, s⁶ + 3t² (3 ∤ t)
    or s⁶ + 27t², or None when ℓ has none of these shapes.
    """
    if ell % 3 != 1:
        return None
    found = None
    if ell > 27:
        t, exact = integer_nthroot(ell - 27, 2)
        if exact and t > 0:
            found = ("t^2+27", Point(ell, int(t) * ell))
    s = 1
    while found is None and s ** 6 < ell:
        rest = ell - s ** 6
        if rest % 3 == 0:
            t, exact = integer_nthroot(rest // 3, 2)
            if exact and t % 3:
                found = ("s^6+3t^2", Point(Fraction(3 * ell, s * s), Fraction(9 * int(t) * ell, s ** 3)))
        if found is None and rest % 27 == 0:
            t, exact = integer_nthroot(rest // 27, 2)
            if exact and t > 0:
                found = ("s^6+27t^2", Point(Fraction(3 * ell, s * s), Fraction(27 * int(t) * ell, s ** 3)))
        s += 1
    if found is None:
        return None
    curve = Curve1(-27 * ell * ell).weierstrass
    curve.require(found[1])
    if curve.is_torsion(found[1], TORSION_BOUND):
        raise ConsistencyError(f"{found[1]} on {curve} should have infinite order")
    logging.debug(f"ℓ = {ell} has the shape {found[0]}, point {found[1]}")
    return found


def _integral_model(curve) -> WeierstrassCurve:
    model = curve if isinstance(curve, WeierstrassCurve) else curve.weierstrass
    if any(c.denominator != 1 for c in (model.A, model.B, model.C)):
        raise ValueError(f"{model} does not have integral coefficients")
    return model


def _dependent(model: WeierstrassCurve, P: Point, Q: Point) -> bool:
    multiples_P = [model.scalar_mul(m, P) for m in (1, 2, 3)]
    multiples_Q = [model.scalar_mul(n, Q) for n in (1, 2, 3)]
    return any(mP == nQ or mP == model.negate(nQ) for mP in multiples_P for nQ in multiples_Q)


def naive_rank_floor(curve, height: int = DEFAULT_SEARCH_HEIGHT) -> tuple[int, list[Point]]:
    """
    Points of infinite order with x = p/q², max(|p|, q²) ≤ height, kept when
    no small multiples of two of them agree.

    The count is a floor for the rank only in the sense that one witness
    proves rank ≥ 1; further witnesses are pairwise independent at best.

    :complexity: O(height^1.5) square tests plus a few scalar multiples per hit.
    """
    model = _integral_model(curve)
    A, B, C = int(model.A), int(model.B), int(model.C)
    witnesses: list[Point] = []
    for q in range(1, math.isqrt(height) + 1):
        q2 = q * q
        for p in range(-height, height + 1):
            if math.gcd(p, q) != 1:
                continue
            N = p ** 3 + A * p * p * q2 + B * p * q2 * q2 + C * q2 ** 3
            if N < 0:
                continue
            root, exact = integer_nthroot(N, 2)
            if not exact or root == 0:
                continue
            P = Point(Fraction(p, q2), Fraction(int(root), q2 * q))
            if model.is_torsion(P, TORSION_BOUND):
                continue
            if any(_dependent(model, P, Q) for Q in witnesses):
                continue
            logging.debug(f"Point of infinite order {P} on {model}")
            witnesses.append(P)
    return len(witnesses), witnesses


_SHAPES = {
    "l": (selmer_dim_16l2, lambda ell: 16 * ell ** 2, "selmer-dim-16l2"),
    "l2": (selmer_dim_16l4, lambda ell: 16 * ell ** 4, "selmer-dim-16l4"),
    "2l": (selmer_dim_l2, lambda ell: ell ** 2, "selmer-dim-l2"),
}


def cube_sum_verdict(D: int, sha_even: bool = False, rank_positive: bool = False,
                     height: int = DEFAULT_SEARCH_HEIGHT) -> CubeSumVerdict:
    """
    Whether D is a sum of two rational cubes.

    A one-dimensional Selmer group forces rank 0 and the answer is no
    unconditionally. Dimension d > 1 gives rank d - 1 when dim Ш(E/Q)[3]
    is even, and for d = 3 only once the rank is known to be positive.
    A point of infinite order settles the question outright; the rank
    value is reported only when sha_even is asserted.

    :raises UnsupportedShapeError: for D not of the form ℓ, 2ℓ, ℓ².
    :raises ConsistencyError: when a point turns up on a curve of rank 0.
    """
    shape, ell = cube_sum_shape(D)
    dim_of, a_of, source = _SHAPES[shape]
    dim = dim_of(ell)
    curve = Curve1(a_of(ell)).weierstrass

    certificate, certificate_curve = None, None
    if shape == "2l" and (special := special_family_point(ell)) is not None:
        certificate, certificate_curve = special[1], f"E_{-27 * ell * ell}"
    else:
        found, points = naive_rank_floor(curve, height)
        if found:
            certificate, certificate_curve = points[0], str(curve)

    if dim == 1:
        if certificate is not None:
            raise ConsistencyError(f"{certificate} on {certificate_curve} contradicts rank 0 for D = {D}")
        return CubeSumVerdict(D, VerdictStatus.NOT_CUBE_SUM, dim, source, rank=0)

    needed = [Assumption.SHA_EVEN] if dim == 2 else [Assumption.RANK_POSITIVE, Assumption.SHA_EVEN]
    rank = dim - 1 if sha_even else None
    if certificate is not None:
        return CubeSumVerdict(D, VerdictStatus.CUBE_SUM, dim, source, rank=rank,
                              hypotheses=[Assumption.SHA_EVEN] if sha_even else [],
                              certificate=certificate, certificate_curve=certificate_curve)
    if dim == 3 and not rank_positive:
        return CubeSumVerdict(D, VerdictStatus.UNDETERMINED, dim, source, hypotheses=needed)
    return CubeSumVerdict(D, VerdictStatus.CONDITIONAL_CUBE_SUM, dim, source, rank=rank, hypotheses=needed)


def large_selmer_family(n: int) -> FamilyWitness:
    """
    E_{a,1} with a = (p₁⋯p_{2n+1} - 27)/4 for the smallest primes pᵢ ≡ -1
    (mod 12). All of them land in S₃, and the refined Ψ interval then
    starts at 2n whatever the class groups are.

    :raises ValueError: for n < 0.
    :raises ConsistencyError: when the recomputed sets disagree with the construction.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    primes = []
    for p in primerange(5, 10 ** 7):
        if p % 12 == 11:
            primes.append(p)
            if len(primes) == 2 * n + 1:
                break
    a, b = (math.prod(primes) - 27) // 4, 1
    sets = compute_S123(a, b)
    s3 = sets.residue_chars("S3")
    if s3 != primes or len(sets.S3) != 2 * n + 1 or sets.S2:
        raise ConsistencyError(f"S₃ for ({a}, {b}) is {s3}, expected {primes}")
    bounds = type2_bounds(a, b, sets, Type2ClassRanks(None, None, floored=True))
    if bounds.lower != 2 * n:
        raise ConsistencyError(f"lower bound {bounds.lower} for ({a}, {b}), expected {2 * n}")
    logging.info(f"n = {n}: a = {a}, |S₃| = {len(sets.S3)}, dim Sel^Ψ ≥ {bounds.lower}")
    return FamilyWitness(n, primes, a, b, len(sets.S3), bounds.lower)


def biquad_empty_S12_b(a_prime: int, count: int) -> list[int]:
    """
    The first `count` primes ℓ ≡ 1 (mod 3), ℓ ∤ 3a', with (a'/ℓ) = -1. Each
    makes S₁ and S₂ empty for E_{a,ℓ}, a = 16a' if a' ≡ 1 (mod 4) and a'
    otherwise.

    :raises ValueError: when a' is not squarefree or 3 | a'.
    :raises ConsistencyError: when some b leaves S₁ or S₂ nonempty.
    """
    if a_prime in (0, 1) or a_prime % 3 == 0 or squarefree_core(a_prime) != a_prime:
        raise ValueError(f"{a_prime} must be squarefree, not 1, and prime to 3")
    a = 16 * a_prime if a_prime % 4 == 1 else a_prime
    found = []
    ell = 7
    while len(found) < count:
        if isprime(ell) and a_prime % ell and legendre_symbol(a_prime % ell, ell) == -1:
            sets = compute_S123(a, ell)
            if sets.S1 or sets.S2:
                raise ConsistencyError(f"({a}, {ell}) has S₁ = {sets.S1}, S₂ = {sets.S2}")
            found.append(ell)
        ell += 6
    return found


def twist_selmer_interval(p: int, ell: int) -> SelmerBounds:
    """
    The Type I interval for the cubic twist E_{16pℓ²} of E_{16p}, which is
    {h³_L, h³_L + 1} for ℓ in the density family.

    :raises ConsistencyError: when S_{16pℓ²} turns out nonempty.
    """
    a = normalize_type1(16 * p * ell * ell).a
    sets = type1_sets(a)
    if sets.S_a:
        raise ConsistencyError(f"S_a for a = {a} should be empty, got {[str(q) for q in sets.S_a]}")
    return type1_bounds_K(a, sets)


def twist_density_experiment(p: int, N: int, verify: int = 0) -> dict[str, float | int]:
    """
    Share of primes ℓ ≤ N, ℓ ∤ 6p, with ℓ ≡ 1 (mod 3) and (p/ℓ) = -1; the
    first `verify` of them are checked through twist_selmer_interval.

    :raises ValueError: unless p is a prime ≥ 5.
    """
    _check_prime(p)
    total = count = 0
    for ell in primerange(5, N + 1):
        if ell == p:
            continue
        total += 1
        if ell % 3 == 1 and legendre_symbol(p % ell, ell) == -1:
            if count < verify:
                bounds = twist_selmer_interval(p, ell)
                logging.debug(f"ℓ = {ell}: Sel^φ(E_{{16·{p}·{ell}²}}/K) ∈ {bounds}")
            count += 1
    ratio = count / total if total else 0.0
    logging.info(f"p = {p}, N = {N}: {count} of {total} primes, ratio {ratio:.4f}")
    return {"count": count, "total": total, "ratio": ratio}
