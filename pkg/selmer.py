"""
Bounds on the dimensions of φ-, Ψ- and 3-Selmer groups over K = Q(ζ).

Every interval carries the tags of the formulas that produced it and the
hypotheses it rests on. Rank, root number and Ш data are never computed
here; they arrive through a RankCertificate.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from classgroup import (EnumerationLimitError, count_primes_above, fundamental_discriminant,
                        quadratic_s_class_three_rank, s_class_three_rank, squarefree_core)
from constants import Assumption, BoundSource
from eisenstein import is_square_in_K
from localdata import LocalPrimeSets1, LocalPrimeSets2, twist_by_alpha


class ConsistencyError(Exception):
    """Raised when a bound computation contradicts itself or its inputs."""
    pass


class ParityInsufficientError(ValueError):
    pass


@dataclass
class SelmerBounds:
    """
    lower ≤ dim ≤ upper. An upper of None means no upper bound could be
    certified, which only happens when a class rank was floored.
    """
    lower: int
    upper: int | None
    lower_source: list[BoundSource] = field(default_factory=list)
    upper_source: list[BoundSource] = field(default_factory=list)
    assumptions: list[Assumption] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.lower < 0:
            raise ConsistencyError(f"negative lower bound {self.lower}")
        if self.upper is not None and self.lower > self.upper:
            raise ConsistencyError(f"empty interval [{self.lower}, {self.upper}] "
                                   f"from {[s.value for s in self.lower_source + self.upper_source]}")

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    def contains(self, n: int) -> bool:
        return self.lower <= n and (self.upper is None or n <= self.upper)

    def intersect(self, other: SelmerBounds) -> SelmerBounds:
        """
        Tightest interval implied by both.

        :raises ConsistencyError: when the two are disjoint.
        """
        lower = max(self.lower, other.lower)
        uppers = [u for u in (self.upper, other.upper) if u is not None]
        upper = min(uppers) if uppers else None
        return SelmerBounds(
            lower, upper,
            _merge(self.lower_source, other.lower_source),
            _merge(self.upper_source, other.upper_source),
            _merge(self.assumptions, other.assumptions),
        )

    def shifted(self, k: int, source: BoundSource) -> SelmerBounds:
        upper = None if self.upper is None else self.upper + k
        return SelmerBounds(max(0, self.lower + k), upper, self.lower_source + [source],
                            self.upper_source + [source], list(self.assumptions))

    def __str__(self) -> str:
        return f"[{self.lower}, {'?' if self.upper is None else self.upper}]"


def _merge(first: list, second: list) -> list:
    return first + [x for x in second if x not in first]


def _add(x: int | None, *rest: int | None) -> int | None:
    if x is None or any(r is None for r in rest):
        return None
    return x + sum(rest)


def _min(*values: int | None) -> int | None:
    known = [v for v in values if v is not None]
    return min(known) if known else None


@dataclass
class RankCertificate:
    """
    Externally supplied arithmetic of E over K: rk E(K), dim Ш(E/K)[φ] and
    the root number of E/Q.

    :raises ValueError: on a negative rank or a root number other than ±1.
    """
    rank: int
    sha_phi_dim: int | None = None
    root_number: int | None = None

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError(f"rank must be non-negative, got {self.rank}")
        if self.sha_phi_dim is not None and self.sha_phi_dim < 0:
            raise ValueError(f"dim Ш[φ] must be non-negative, got {self.sha_phi_dim}")
        if self.root_number not in (None, -1, 1):
            raise ValueError(f"root number must be ±1, got {self.root_number}")


@dataclass
class Type1ClassRanks:
    """
    h³_{S_a(L)} and the S-class 3-ranks of the two quadratic fields
    Q(√-3a) and Q(√a) over Q. A None rank was floored to 0 for lower bounds.
    """
    h_SL: int | None
    h_hat: int | None
    h_tilde: int | None
    floored: bool = False


@dataclass
class Type2ClassRanks:
    h12: int | None
    h13: int | None
    floored: bool = False


def _rank_or_floor(compute, floor: bool, what: str) -> int | None:
    try:
        return compute()
    except EnumerationLimitError:
        if not floor:
            raise
        logging.warning(f"Class group for {what} is over the enumeration limit, flooring its 3-rank")
        return None


def _floor(h: int | None) -> int:
    return 0 if h is None else h


def type1_class_ranks(a: int, sets: LocalPrimeSets1, limit: int | None = None,
                      floor: bool = False) -> Type1ClassRanks:
    """
    Every 3-rank the Type I theorems consume, for a ∉ K^{*2}.

    :raises NotAFieldError: when a ∈ K^{*2}.
    :raises EnumerationLimitError: when a class group is too large and floor is False.
    """
    h_SL = _rank_or_floor(lambda: s_class_three_rank(a, sets.S_a, limit).rank, floor, f"L = K(√{a})")
    h_hat = _rank_or_floor(lambda: quadratic_s_class_three_rank(-3 * a, sets.S_a_Q, limit),
                           floor, f"Q(√{-3 * a})")
    h_tilde = _rank_or_floor(lambda: quadratic_s_class_three_rank(a, sets.S_aalpha2_Q, limit),
                             floor, f"Q(√{a})")
    return Type1ClassRanks(h_SL, h_hat, h_tilde, None in (h_SL, h_hat, h_tilde))


def type2_class_ranks(a: int, sets: LocalPrimeSets2, limit: int | None = None,
                      floor: bool = False) -> Type2ClassRanks:
    """
    :raises NotAFieldError: when a ∈ K^{*2}.
    :raises EnumerationLimitError: when a class group is too large and floor is False.
    """
    h12 = _rank_or_floor(lambda: s_class_three_rank(a, sets.S1 + sets.S2, limit).rank, floor, f"L = K(√{a})")
    h13 = _rank_or_floor(lambda: s_class_three_rank(a, sets.S1 + sets.S3, limit).rank, floor, f"L = K(√{a})")
    return Type2ClassRanks(h12, h13, None in (h12, h13))


def _floored_tag(floored: bool) -> list[Assumption]:
    return [Assumption.CLASS_RANK_FLOORED] if floored else []


def type1_bounds_K(a: int, sets: LocalPrimeSets1, ranks: Type1ClassRanks | None = None) -> SelmerBounds:
    """
    Interval for dim Sel^φ(E_a/K).

    For a ∉ K^{*2} the lower end is h³_{S_a(L)} and the upper the smaller
    of the containment bound and the bound through the two quadratic
    fields over Q. For a ∈ K^{*2} only the upper end |S_a| + 1 is known.

    :raises NotAFieldError: if ranks are requested for a ∈ K^{*2}.
    """
    if is_square_in_K(a):
        return SelmerBounds(0, len(sets.S_a) + 1, [BoundSource.NONE], [BoundSource.TYPE1_SQUARE],
                            [Assumption.SQUARE, Assumption.NO_LOWER_BOUND])
    if ranks is None:
        ranks = type1_class_ranks(a, sets)
    n = sets.size_SaL
    bounds = SelmerBounds(
        _floor(ranks.h_SL),
        _min(_add(ranks.h_SL, n + 2), _add(ranks.h_hat, ranks.h_tilde, n + 1)),
        [BoundSource.TYPE1_CONTAINMENT],
        [BoundSource.TYPE1_CONTAINMENT, BoundSource.TYPE1_MIN_UPPER],
        [Assumption.NOT_SQUARE] + _floored_tag(ranks.floored),
    )
    logging.debug(f"Sel^φ(E_{a}/K) ∈ {bounds}")
    return bounds


def type1_exact_with_root_number(a: int, sets: LocalPrimeSets1, bounds: SelmerBounds, root_number: int) -> int:
    """
    dim Sel^φ(E_a/K) from the root number when S_a is empty, using
    ω(E_a/Q) = (-1)^dim.

    :raises ParityInsufficientError: when S_a ≠ ∅ or a ∈ K^{*2}, as the
        interval then holds more than two values.
    :raises ValueError: for a root number other than ±1.
    """
    if root_number not in (-1, 1):
        raise ValueError(f"root number must be ±1, got {root_number}")
    if sets.S_a or is_square_in_K(a):
        raise ParityInsufficientError(f"parity alone cannot fix dim Sel^φ(E_{a}/K) in {bounds}")
    if bounds.upper is None or bounds.upper - bounds.lower > 1:
        raise ParityInsufficientError(f"interval {bounds} is wider than a parity pair")
    parity = 0 if root_number == 1 else 1
    dim = next(d for d in range(bounds.lower, bounds.upper + 1) if d % 2 == parity)
    logging.info(f"Root number {root_number:+d} fixes dim Sel^φ(E_{a}/K) = {dim}")
    return dim


def _quadratic_upper(r: int, S: list[int], limit: int | None) -> int:
    """
    Upper bound for the isogeny Selmer group over Q whose étale algebra is
    Q[x]/(x² - r).
    """
    if squarefree_core(r) == 1:
        return len(S)
    D = fundamental_discriminant(r)
    h = quadratic_s_class_three_rank(r, S, limit)
    n = count_primes_above(D, S)
    if D == -3 or D > 0:
        return h + n + 1
    return h + n


def type1_bounds_Q(a: int, sets: LocalPrimeSets1, limit: int | None = None) -> SelmerBounds:
    """
    Interval for dim Sel^{φ_a}(E_a/Q), through Q(√-3a) and S_a(Q).

    :raises EnumerationLimitError: see FormClassGroup.
    """
    return SelmerBounds(0, _quadratic_upper(-3 * a, sets.S_a_Q, limit), [BoundSource.NONE],
                        [BoundSource.TYPE1_OVER_Q], [Assumption.NO_LOWER_BOUND])


def type1_dual_bounds_Q(a: int, sets: LocalPrimeSets1, limit: int | None = None) -> SelmerBounds:
    """
    Interval for dim Sel^{φ̂_a}(Ê_a/Q), the same bound applied to aα²:
    the field is Q(√a) and the set S_{aα²}(Q).
    """
    return SelmerBounds(0, _quadratic_upper(-3 * twist_by_alpha(a), sets.S_aalpha2_Q, limit),
                        [BoundSource.NONE], [BoundSource.TYPE1_OVER_Q], [Assumption.NO_LOWER_BOUND])


def check_over_Q(a: int, over_K: SelmerBounds, over_Q: SelmerBounds, dual_Q: SelmerBounds) -> None:
    """
    Sel^φ(E_a/K) splits as Sel^{φ_a}(E_a/Q) ⊕ Sel^{φ̂_a}(Ê_a/Q), so the
    K-interval has to meet the sum of the two Q-intervals.

    :raises ConsistencyError: when it does not.
    """
    total = _add(over_Q.upper, dual_Q.upper)
    if total is not None and over_K.lower > total:
        raise ConsistencyError(f"E_{a}: Sel^φ over K is at least {over_K.lower} "
                               f"but the Q-components allow at most {total}")


def type1_sel3_bounds(a: int, sets: LocalPrimeSets1, bounds: SelmerBounds,
                      cert: RankCertificate | None = None, exact_phi: int | None = None) -> SelmerBounds:
    """
    Interval for dim Sel³(E_a/K) from the φ-interval, which Sel³ contains
    once and surjects onto once.

    :param exact_phi: dim Sel^φ(E_a/K) when already known, e.g. from the root number.
    """
    rank = cert.rank if cert else 0
    assumptions = list(bounds.assumptions) + ([Assumption.RANK_GIVEN] if cert else [])
    if is_square_in_K(a):
        return SelmerBounds(rank, 2 * len(sets.S_a) + 2, [BoundSource.RANK],
                            [BoundSource.SEL3_TYPE1], assumptions)
    lower_source = [BoundSource.SEL3_TYPE1] + ([BoundSource.RANK] if cert else [])
    if exact_phi is not None:
        return SelmerBounds(max(exact_phi, rank), 2 * exact_phi, lower_source,
                            [BoundSource.SEL3_TYPE1, BoundSource.TYPE1_ROOT_NUMBER],
                            assumptions + [Assumption.ROOT_NUMBER])
    upper = None if bounds.upper is None else 2 * bounds.upper
    return SelmerBounds(max(bounds.lower, rank), upper, lower_source, [BoundSource.SEL3_TYPE1], assumptions)


def duality_shift(S2_size: int, S3_size: int) -> int:
    """
    dim Sel^{Ψ̂}(Ê/K) - dim Sel^{Ψ}(E/K) when 3 ∤ a.
    """
    return S2_size - S3_size + 1


def _type2_basic(lower: int | None, upper_rank: int | None, size: int, floored: bool,
                 source: BoundSource) -> SelmerBounds:
    return SelmerBounds(_floor(lower), _add(upper_rank, size + 2), [source], [source],
                        [Assumption.NOT_SQUARE] + _floored_tag(floored))


def type2_bounds(a: int, b: int, sets: LocalPrimeSets2, ranks: Type2ClassRanks | None = None) -> SelmerBounds:
    """
    Interval for dim Sel^Ψ(E_{a,b}/K).

    The containment interval [h³_{S_{1,2}(L)}, h³_{S_{1,3}(L)} + |S_{1,3}(L)| + 2]
    always applies for a ∉ K^{*2}. When 3 ∤ a, Cassels' formula relates the
    Ψ- and Ψ̂-Selmer groups and the refined interval is intersected in.
    """
    if is_square_in_K(a):
        return SelmerBounds(0, len(set(sets.S1) | set(sets.S3)) + 1, [BoundSource.NONE],
                            [BoundSource.TYPE2_SQUARE], [Assumption.SQUARE, Assumption.NO_LOWER_BOUND])
    if ranks is None:
        ranks = type2_class_ranks(a, sets)
    bounds = _type2_basic(ranks.h12, ranks.h13, sets.size_S13L, ranks.floored, BoundSource.TYPE2_CONTAINMENT)
    if a % 3 == 0:
        return bounds
    s2, s3 = len(sets.S2), len(sets.S3)
    refined = SelmerBounds(
        max(_floor(ranks.h12), _floor(ranks.h13) + s3 - s2 - 1, 0),
        _add(ranks.h12, sets.size_S12L + s3 - s2 + 1),
        [BoundSource.TYPE2_REFINED], [BoundSource.TYPE2_REFINED],
        [Assumption.NOT_SQUARE, Assumption.COPRIME_TO_3] + _floored_tag(ranks.floored),
    )
    return bounds.intersect(refined)


def type2_dual_bounds(a: int, b: int, sets: LocalPrimeSets2, ranks: Type2ClassRanks | None = None,
                      refined: bool = True) -> SelmerBounds:
    """
    Interval for dim Sel^{Ψ̂}(Ê_{a,b}/K), the mirror of type2_bounds with
    the roles of S₂ and S₃ exchanged.
    """
    if is_square_in_K(a):
        return SelmerBounds(0, len(set(sets.S1) | set(sets.S2)) + 1, [BoundSource.NONE],
                            [BoundSource.TYPE2_SQUARE], [Assumption.SQUARE, Assumption.NO_LOWER_BOUND])
    if ranks is None:
        ranks = type2_class_ranks(a, sets)
    bounds = _type2_basic(ranks.h13, ranks.h12, sets.size_S12L, ranks.floored, BoundSource.TYPE2_DUAL)
    if not refined or a % 3 == 0:
        return bounds
    shift = duality_shift(len(sets.S2), len(sets.S3))
    through_psi = type2_bounds(a, b, sets, ranks).shifted(shift, BoundSource.TYPE2_DUAL_SHIFT)
    through_psi.assumptions = _merge(through_psi.assumptions, [Assumption.COPRIME_TO_3])
    return bounds.intersect(through_psi)


def type2_sel3_bounds(a: int, b: int, sets: LocalPrimeSets2, ranks: Type2ClassRanks | None = None,
                      cert: RankCertificate | None = None) -> SelmerBounds:
    """
    Interval for dim Sel³(E_{a,b}/K): at least max{h³_{S_{1,2}(L)}, rk}, and at
    most the sum of the Ψ and Ψ̂ upper bounds.
    """
    rank = cert.rank if cert else 0
    rank_tag = [Assumption.RANK_GIVEN] if cert else []
    if is_square_in_K(a):
        upper = len(set(sets.S1) | set(sets.S2)) + len(set(sets.S1) | set(sets.S3)) + 2
        return SelmerBounds(rank, upper, [BoundSource.RANK], [BoundSource.SEL3_TYPE2],
                            [Assumption.SQUARE] + rank_tag)
    if ranks is None:
        ranks = type2_class_ranks(a, sets)
    basic = _add(ranks.h12, ranks.h13, sets.size_S12L + sets.size_S13L + 4)
    upper_source = [BoundSource.SEL3_TYPE2]
    assumptions = [Assumption.NOT_SQUARE] + _floored_tag(ranks.floored) + rank_tag
    if a % 3:
        psi = type2_bounds(a, b, sets, ranks)
        psi_hat = type2_dual_bounds(a, b, sets, ranks)
        basic = _min(basic, _add(psi.upper, psi_hat.upper))
        upper_source.append(BoundSource.TYPE2_REFINED)
    return SelmerBounds(max(_floor(ranks.h12), rank), basic,
                        [BoundSource.SEL3_TYPE2] + ([BoundSource.RANK] if cert else []),
                        upper_source, assumptions)


def sha_floor(a: int, sets: LocalPrimeSets1, ranks: Type1ClassRanks | None, cert: RankCertificate | None,
              limit: int | None = None) -> int:
    """
    Lower bound max(0, h³_{S_a(L)} - rk E_a(K)) for dim Ш(E_a/K)[φ]. Without
    `ranks` the class rank is computed from `sets`.

    :raises ValueError: without a rank, or for a ∈ K^{*2}.
    :raises EnumerationLimitError: when ranks must be computed and the class group is too large.
    """
    if cert is None:
        raise ValueError("the Ш floor needs rk E_a(K)")
    if is_square_in_K(a):
        raise ValueError(f"{a} is a square in K, the Ш floor does not apply")
    if ranks is None:
        ranks = type1_class_ranks(a, sets, limit)
    return max(0, _floor(ranks.h_SL) - cert.rank)


def rank_identity(selphi_dim: int, torsion_phi_dim: int, sha_phi_dim: int) -> int:
    """
    rk E_a(Q) = dim Sel^φ(E_a/K) - dim E_a(K)[φ] - dim Ш(E_a/K)[φ].

    :raises ConsistencyError: when the inputs give a negative rank.
    """
    rank = selphi_dim - torsion_phi_dim - sha_phi_dim
    if rank < 0:
        raise ConsistencyError(f"dim Sel^φ = {selphi_dim}, dim E[φ] = {torsion_phi_dim} and "
                               f"dim Ш[φ] = {sha_phi_dim} give rank {rank}")
    return rank


def torsion_phi_dim(a: int) -> int:
    """dim E_a(K)[φ]: the kernel points (0, ±√a) are K-rational iff a ∈ K^{*2}."""
    return 1 if is_square_in_K(a) else 0
