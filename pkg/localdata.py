"""
Finite sets of primes of K feeding the Selmer bounds, and local sizes.

Every set is finite because its defining condition forces the prime to
divide 6a (Type I) or 6abd with d = 4a + 27b (Type II), so only those
primes are scanned.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from sympy import primefactors

from constants import PrimeKind, Relation
from curves import validate_type2
from eisenstein import KPrime, classify_prime, is_square_in_K, is_square_in_Kq, is_square_in_Qp, k_valuation, primes_above

RAMIFIED = classify_prime(3)
TWO = classify_prime(2)


class NoTableRowError(Exception):
    pass


@dataclass
class LocalPrimeSets1:
    S_a: list[KPrime]
    S_a_Q: list[int]
    S_aalpha2_Q: list[int]

    @property
    def size_SaL(self) -> int:
        # a is a local square at every member, so each splits in L.
        return 2 * len(self.S_a)


@dataclass
class LocalPrimeSets2:
    S1: list[KPrime]
    S2: list[KPrime]
    S3: list[KPrime]

    @property
    def size_S12L(self) -> int:
        return 2 * len(set(self.S1) | set(self.S2))

    @property
    def size_S13L(self) -> int:
        return 2 * len(set(self.S1) | set(self.S3))

    def residue_chars(self, *names: str) -> list[int]:
        return sorted({q.residue_char for name in names for q in getattr(self, name)})


@dataclass(frozen=True)
class LocalRow:
    c_E: int
    c_E_hat: int
    relation: Relation


def _candidates(*values: int) -> list[KPrime]:
    rational = set()
    for v in values:
        rational.update(primefactors(abs(v)))
    return [q for ell in sorted(rational) for q in primes_above(ell)]


def alpha_squared(a: int) -> Fraction:
    """α² = -27 unless 27 | a, then -1/27. For sixth-power-free a, aα² stays integral with v₃(aα²) ≤ 5."""
    return Fraction(-27) if a % 27 else Fraction(-1, 27)


def twist_by_alpha(a: int) -> int:
    return int(a * alpha_squared(a))


def compute_Sa(a: int) -> list[KPrime]:
    """
    S_a = {q : a ∈ K_q^{*2} and v_q(4a) ≢ 0 (mod 6)}; without the square
    condition when a ∈ K^{*2}.
    """
    global_square = is_square_in_K(a)
    S = [q for q in _candidates(6, a)
         if k_valuation(4 * a, q) % 6 and (global_square or is_square_in_Kq(a, q))]
    logging.debug(f"S_a for a = {a}: {[str(q) for q in S]}")
    return S


def _rational_S(a: int) -> list[int]:
    S = [ell for ell in primefactors(2 * abs(a))
         if ell != 3 and is_square_in_Qp(-3 * a, ell) and k_valuation(4 * a, classify_prime(ell)) % 6]
    v3 = k_valuation(a, RAMIFIED) // 2
    if v3 in (1, 5) and is_square_in_Qp(-3 * a, 3):
        S.append(3)
    return sorted(S)


def compute_SaQ(a: int) -> tuple[list[int], list[int]]:
    """(S_a(Q), S_{aα²}(Q))"""
    return _rational_S(a), _rational_S(twist_by_alpha(a))


def type1_sets(a: int) -> LocalPrimeSets1:
    S_a_Q, S_aalpha2_Q = compute_SaQ(a)
    return LocalPrimeSets1(compute_Sa(a), S_a_Q, S_aalpha2_Q)


def _vp(x: int) -> int:
    return k_valuation(x, RAMIFIED)


def compute_S123(a: int, b: int) -> LocalPrimeSets2:
    """
    S₁, S₂, S₃ for E_{a,b}, the 2O_K and 𝔭 exceptions included; valuations
    at 𝔭 of rational numbers are twice the 3-adic ones.

    :raises InvalidCurveError: when (a, b) is not a valid Type II pair.
    """
    d = validate_type2(a, b).d
    S1, S2, S3 = [], [], []
    for q in _candidates(2, a, b, d):
        if q.kind is PrimeKind.RAMIFIED or not is_square_in_Kq(a, q):
            continue
        if a % q.residue_char == 0:
            if k_valuation(4 * a * b * b, q) % 6:
                S1.append(q)
        elif q.residue_char != 2 and b % q.residue_char == 0:
            S2.append(q)
        elif q.residue_char != 2 and d % q.residue_char == 0:
            S3.append(q)

    if a % 2 and is_square_in_Kq(a, TWO):
        if b % 4:
            S1.append(TWO)
        elif b % 8 == 0:
            S2.append(TWO)
        else:
            S3.append(TWO)

    if is_square_in_Kq(a, RAMIFIED):
        if a % 3 == 0 and (_vp(a) != 6 or _vp(d) < 12):
            S1.append(RAMIFIED)
        elif a % 3 and b % 3 == 0:
            S2.append(RAMIFIED)
        elif _vp(d) > 12:
            S3.append(RAMIFIED)

    sets = LocalPrimeSets2(sorted(S1), sorted(S2), sorted(S3))
    logging.debug(f"S1, S2, S3 for ({a}, {b}): {[str(q) for q in sets.S1]}, "
                  f"{[str(q) for q in sets.S2]}, {[str(q) for q in sets.S3]}")
    return sets


def n1_size(a: int, q: KPrime) -> int:
    """Order of the norm-one part of A_q^*/A_q^{*3}."""
    square = is_square_in_Kq(a, q)
    if q.kind is PrimeKind.RAMIFIED:
        return 27 if square else 9
    return 3 if square else 1


def v3_size(a: int) -> int:
    return 3 if is_square_in_Kq(a, RAMIFIED) else 1


def local_quotient_size_type1(a: int, q: KPrime) -> int:
    """
    Size of E_{-27a}(K_q)/φ(E_a(K_q)) for the Type I isogeny over K.
    """
    size = 3 if is_square_in_Kq(a, q) else 1
    return 3 * size if q.kind is PrimeKind.RAMIFIED else size


def type2_local_row(a: int, b: int, q: KPrime) -> LocalRow:
    """
    Tamagawa numbers of E_{a,b} and its 3-isogenous curve at q ∤ 3, with the
    containment of the local images, for a a square in K_q.

    :raises NoTableRowError: when no row of the table describes q.
    """
    if q.kind is PrimeKind.RAMIFIED or not is_square_in_Kq(a, q):
        raise NoTableRowError(f"no local row for {q} and ({a}, {b})")
    ell, d = q.residue_char, 4 * a + 27 * b
    if a % ell == 0:
        v = k_valuation(4 * a * b * b, q) % 6
        if v == 0:
            return LocalRow(1, 1, Relation.EQUAL)
        if v in (2, 4):
            return LocalRow(3, 3, Relation.MEETS_TRIVIALLY)
    elif ell == 2:
        vb = k_valuation(b, q)
        if vb <= 1:
            return LocalRow(3, 3, Relation.MEETS_TRIVIALLY)
        if vb == 2:
            vd = k_valuation(d, q) - 2
            return LocalRow(vd, 3 * vd, Relation.STRICTLY_LARGER)
        return LocalRow(3 * (vb - 2), vb - 2, Relation.STRICTLY_INSIDE)
    elif b % ell == 0:
        vb = k_valuation(b, q)
        return LocalRow(3 * vb, vb, Relation.STRICTLY_INSIDE)
    elif d % ell == 0:
        vd = k_valuation(d, q)
        return LocalRow(vd, 3 * vd, Relation.STRICTLY_LARGER)
    raise NoTableRowError(f"no local row for {q} and ({a}, {b})")


def type2_local_row_at_p(a: int, b: int) -> LocalRow:
    """
    The row at 𝔭 when 3 | b, 3 ∤ a and a ∈ K_𝔭^{*2}.

    :raises NoTableRowError: outside that case.
    """
    if a % 3 == 0 or b % 3 or not is_square_in_Kq(a, RAMIFIED):
        raise NoTableRowError(f"no local row for 𝔭 and ({a}, {b})")
    vb = _vp(b)
    return LocalRow(3 * vb, vb, Relation.STRICTLY_INSIDE)


def tamagawa_ratio_sets(a: int, b: int) -> tuple[list[KPrime], list[KPrime]]:
    """
    Primes where c(E) = 3c(Ê), and where c(Ê) = 3c(E).
    """
    d = validate_type2(a, b).d
    larger, smaller = [], []
    rows = []
    for q in _candidates(2, a, b, d):
        if q.kind is PrimeKind.RAMIFIED:
            try:
                rows.append((q, type2_local_row_at_p(a, b)))
            except NoTableRowError:
                pass
        elif is_square_in_Kq(a, q):
            rows.append((q, type2_local_row(a, b, q)))
    for q, row in rows:
        if row.c_E == 3 * row.c_E_hat:
            larger.append(q)
        elif row.c_E_hat == 3 * row.c_E:
            smaller.append(q)
    return sorted(larger), sorted(smaller)
