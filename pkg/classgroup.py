"""
Class groups of quadratic fields through binary quadratic forms.

Imaginary discriminants use the classical reduced forms. Real discriminants
use cycle-reduced forms: every narrow class is one cycle under the rho
operator, and a cycle is represented by its smallest form. Only 3-ranks
leave this module in the bound formulas, and on odd parts the narrow and
wide class groups agree.
"""
from __future__ import annotations

import logging
import math
import os
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from sympy import ZZ, Matrix, factorint, kronecker_symbol, sqrt_mod
from sympy.core.intfunc import igcdex
from sympy.matrices.normalforms import smith_normal_form

from classgroup_cache import active_cache
from constants import ENUMERATION_LIMIT, LIMIT_ENV_VAR
from data_structures.hash_table import LinearProbeTable
from eisenstein import is_square_in_K


class EnumerationLimitError(Exception):
    pass


class NotAFieldError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class QuadraticForm:
    """a x² + b xy + c y²"""
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __mul__(self, other: QuadraticForm) -> QuadraticForm:
        return compose(self, other)

    def inverse(self) -> QuadraticForm:
        return QuadraticForm(self.a, -self.b, self.c)

    def is_reduced(self) -> bool:
        D = self.discriminant
        if D < 0:
            a, b, c = self.a, self.b, self.c
            return abs(b) <= a <= c and not (b < 0 and (abs(b) == a or a == c))
        s = math.isqrt(D)
        return 0 < self.b <= s and 2 * abs(self.a) - self.b <= s < 2 * abs(self.a) + self.b

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


@dataclass
class AbelianGroupStructure:
    invariant_factors: list[int]
    generators: list[QuadraticForm] = field(default_factory=list)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    def p_rank(self, p: int) -> int:
        return sum(1 for d in self.invariant_factors if d % p == 0)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "trivial"
        return "×".join(f"Z/{d}" for d in self.invariant_factors)


@dataclass
class SylowBasis:
    """
    Basis of the p-Sylow subgroup with a coordinate for every element.
    """
    p: int
    orders: list[int]
    generators: list[QuadraticForm]
    coordinates: LinearProbeTable[QuadraticForm, tuple[int, ...]]
    # Exponent mapping a class onto its p-part.
    cofactor: int


@dataclass
class SClassData:
    d1: int
    d2: int
    rank1: int
    rank2: int
    s_primes: list[int]

    @property
    def rank(self) -> int:
        return self.rank1 + self.rank2


def resolve_limit(limit: int | None = None) -> int:
    """A command-line value wins over the environment, which wins over the default."""
    if limit is not None:
        return limit
    env = os.environ.get(LIMIT_ENV_VAR)
    if env:
        return int(env)
    return ENUMERATION_LIMIT


def squarefree_core(d: int) -> int:
    """
    Signed squarefree part of d.

    :raises ValueError: for d = 0.
    """
    if d == 0:
        raise ValueError("zero has no squarefree part")
    core = math.prod(p for p, e in factorint(abs(d)).items() if e % 2)
    return core if d > 0 else -core


def fundamental_discriminant(d: int) -> int:
    """
    Discriminant of Q(√d).

    :raises NotAFieldError: when d is a perfect square.
    """
    m = squarefree_core(d)
    if m == 1:
        raise NotAFieldError(f"{d} is a square, Q(√{d}) is not a field")
    return m if m % 4 == 1 else 4 * m


def _solve_linmod(a: int, b: int, m: int) -> tuple[int, int]:
    # ax = b (mod m) has the solutions u + v·n
    x, _, g = igcdex(a, m)
    if b % g:
        raise ValueError("no solution")
    u = (b // g) * x % m
    return u, m // g


def compose(f: QuadraticForm, g: QuadraticForm) -> QuadraticForm:
    """
    Gauss composition of two primitive forms of equal discriminant with
    positive leading coefficients. The result is not reduced.
    """
    a, b, c = f.a, f.b, f.c
    alpha, beta, _ = g.a, g.b, g.c
    gg = (b + beta) // 2
    h = -(b - beta) // 2
    w = math.gcd(a, alpha, gg)
    s, t, u = a // w, alpha // w, gg // w
    mu, nu = _solve_linmod(t * u, h * u + s * c, s * t)
    lam = _solve_linmod(t * nu, h - t * mu, s)[0]
    k = mu + nu * lam
    ell = (k * t - h) // s
    m = (t * u * k - h * u - c * s) // (s * t)
    return QuadraticForm(s * t, w * u - (k * t + ell * s), k * ell - w * m)


def _reduce_definite(f: QuadraticForm) -> QuadraticForm:
    a, b, c = f.a, f.b, f.c
    r = (a - b) // (2 * a)
    b, c = b + 2 * r * a, a * r * r + b * r + c
    while not (a < c or (a == c and b >= 0)):
        s = (c + b) // (2 * c)
        a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
    return QuadraticForm(a, b, c)


def _rho(f: QuadraticForm, s: int) -> QuadraticForm:
    """One step of the rho operator for a real discriminant with s = ⌊√D⌋."""
    c, m = f.c, 2 * abs(f.c)
    b = -f.b
    if abs(c) > s:
        b = b % m
        if b > abs(c):
            b -= m
    else:
        b = s - (s - b) % m
    return QuadraticForm(c, b, (b * b - f.discriminant) // (4 * c))


def reduce_form(f: QuadraticForm) -> QuadraticForm:
    D = f.discriminant
    if D < 0:
        return _reduce_definite(f)
    s = math.isqrt(D)
    while not f.is_reduced():
        f = _rho(f, s)
    return f


class FormClassGroup:
    """
    The (narrow) form class group of a fundamental discriminant.

    Elements are canonical reduced forms, so equality of classes is equality
    of the representing forms.
    """

    def __init__(self, D: int, limit: int | None = None) -> None:
        """
        :complexity: O(|D|) form enumeration.
        :raises EnumerationLimitError: when |D| exceeds the enumeration limit.
        """
        limit = resolve_limit(limit)
        if abs(D) > limit:
            raise EnumerationLimitError(f"|D| = {abs(D)} exceeds the enumeration limit {limit}")
        self.D = D
        self._sqrt = math.isqrt(D) if D > 0 else 0
        self._canonical: LinearProbeTable[QuadraticForm, QuadraticForm] = LinearProbeTable()
        self._sylows: dict[int, SylowBasis] = {}
        t0 = time.monotonic()
        if D < 0:
            for form in self._definite_reduced_forms():
                self._canonical[form] = form
        else:
            self._collect_cycles()
        self.classes = sorted(set(self._canonical.values()))
        k = D % 2
        self.identity = self.canonical(QuadraticForm(1, k, (k * k - D) // 4))
        logging.info(f"Class group of D = {D}: h = {self.order} in {time.monotonic() - t0:.3f}s")

    @property
    def order(self) -> int:
        return len(self.classes)

    def _definite_reduced_forms(self) -> Iterable[QuadraticForm]:
        D = self.D
        for a in range(1, math.isqrt(-D // 3) + 1):
            for b in range(-a + 1, a + 1):
                if (b - D) % 2:
                    continue
                numerator = b * b - D
                if numerator % (4 * a):
                    continue
                c = numerator // (4 * a)
                if c < a or (c == a and b < 0):
                    continue
                yield QuadraticForm(a, b, c)

    def _cycle_reduced_forms(self) -> Iterable[QuadraticForm]:
        D, s = self.D, self._sqrt
        for b in range(1, s + 1):
            if (b - D) % 2:
                continue
            n = (D - b * b) // 4
            # s - b < 2|a| and 2|a| - b <= s
            for a in range((s - b) // 2 + 1, (s + b) // 2 + 1):
                if n % a == 0:
                    yield QuadraticForm(a, b, -n // a)
                    yield QuadraticForm(-a, b, n // a)

    def _collect_cycles(self) -> None:
        for form in self._cycle_reduced_forms():
            if form in self._canonical:
                continue
            cycle = [form]
            nxt = _rho(form, self._sqrt)
            while nxt != form:
                cycle.append(nxt)
                nxt = _rho(nxt, self._sqrt)
            representative = min(cycle)
            for member in cycle:
                self._canonical[member] = representative

    def canonical(self, f: QuadraticForm) -> QuadraticForm:
        return self._canonical[reduce_form(f)]

    def _positive(self, f: QuadraticForm) -> QuadraticForm:
        # Reduced indefinite forms alternate in sign along the cycle.
        return _rho(f, self._sqrt) if f.a < 0 else f

    def compose(self, f: QuadraticForm, g: QuadraticForm) -> QuadraticForm:
        return self.canonical(compose(self._positive(f), self._positive(g)))

    def inverse(self, f: QuadraticForm) -> QuadraticForm:
        return self.canonical(f.inverse())

    def power(self, f: QuadraticForm, n: int) -> QuadraticForm:
        if n < 0:
            f, n = self.inverse(f), -n
        result = self.identity
        while n:
            if n & 1:
                result = self.compose(result, f)
            f = self.compose(f, f)
            n >>= 1
        return result

    def order_of(self, f: QuadraticForm) -> int:
        n, g = 1, f
        while g != self.identity:
            g = self.compose(g, f)
            n += 1
        return n

    def _order_modulo(self, x: QuadraticForm, subgroup: LinearProbeTable, p: int) -> int:
        order = 1
        while x not in subgroup:
            x = self.power(x, p)
            order *= p
        return order

    def sylow(self, p: int) -> SylowBasis:
        """
        Greedy basis of the p-Sylow subgroup: repeatedly take an element of
        largest order modulo the span so far, then a lift of the same order.
        """
        if p in self._sylows:
            return self._sylows[p]
        pk = p ** factorint(self.order).get(p, 0)
        cofactor = self.order // pk
        elements = sorted({self.power(x, cofactor) for x in self.classes})
        span: LinearProbeTable[QuadraticForm, tuple[int, ...]] = LinearProbeTable()
        span[self.identity] = ()
        orders: list[int] = []
        generators: list[QuadraticForm] = []
        while len(span) < len(elements):
            best, best_order = self.identity, 1
            for x in elements:
                order = self._order_modulo(x, span, p)
                if order > best_order:
                    best, best_order = x, order
            lift = next(y for y in (self.compose(best, h) for h in span.keys())
                        if self.power(y, best_order) == self.identity)
            extended: LinearProbeTable[QuadraticForm, tuple[int, ...]] = LinearProbeTable()
            for h, coordinate in span.items():
                z = h
                for i in range(best_order):
                    extended[z] = coordinate + (i,)
                    z = self.compose(z, lift)
            span = extended
            orders.append(best_order)
            generators.append(lift)
            logging.debug(f"D = {self.D}: {p}-Sylow generator {lift} of order {best_order}")
        self._sylows[p] = SylowBasis(p, orders, generators, span, cofactor)
        return self._sylows[p]

    def coordinates(self, basis: SylowBasis, f: QuadraticForm) -> tuple[int, ...]:
        """Coordinates of the p-part of a class in the given Sylow basis."""
        return basis.coordinates[self.power(self.canonical(f), basis.cofactor)]

    def structure(self) -> AbelianGroupStructure:
        sylows = [self.sylow(p) for p in sorted(factorint(self.order))]
        length = max((len(b.orders) for b in sylows), default=0)
        factors = [1] * length
        generators = [self.identity] * length
        for basis in sylows:
            ranked = sorted(zip(basis.orders, basis.generators), key=lambda t: -t[0])
            for i, (order, gen) in enumerate(ranked):
                factors[i] *= order
                generators[i] = self.compose(generators[i], gen)
        return AbelianGroupStructure(factors[::-1], generators[::-1])


@lru_cache(maxsize=128)
def class_group_of(D: int, limit: int | None = None) -> FormClassGroup:
    return FormClassGroup(D, limit)


def form_class_group(D: int, limit: int | None = None) -> AbelianGroupStructure:
    """
    Invariant factors d₁ | d₂ | ... of the form class group.

    A configured disk cache answers without generators when it holds D.

    :raises EnumerationLimitError: when |D| is over the limit and uncached.
    """
    cache = active_cache()
    if cache is not None:
        factors = cache.get(D)
        if factors is not None:
            return AbelianGroupStructure(list(factors))
    structure = class_group_of(D, limit).structure()
    if cache is not None:
        cache.put(D, structure.invariant_factors)
    return structure


def three_rank(D: int, limit: int | None = None) -> int:
    return form_class_group(D, limit).p_rank(3)


def class_number(D: int, limit: int | None = None) -> int:
    return form_class_group(D, limit).order


def prime_classes_above(D: int, ell: int, limit: int | None = None) -> list[QuadraticForm]:
    """
    Classes of the primes of Q(√D) above ℓ: a form (ℓ, b, c) and its inverse,
    or the identity when ℓ is inert.
    """
    group = class_group_of(D, limit)
    if kronecker_symbol(D, ell) == -1:
        return [group.identity]
    if ell == 2:
        b = next(b for b in range(4) if (b * b - D) % 8 == 0)
    else:
        b = sqrt_mod(D % ell, ell)
        if (b - D) % 2:
            b += ell
    form = group.canonical(QuadraticForm(ell, b, (b * b - D) // (4 * ell)))
    return [form, group.inverse(form)]


def count_primes_above(D: int, primes: Iterable[int]) -> int:
    """Number of primes of Q(√D) above the given rational primes."""
    return sum(2 if kronecker_symbol(D, ell) == 1 else 1 for ell in primes)


def quadratic_s_class_three_rank(r: int, primes: Iterable[int], limit: int | None = None) -> int:
    """
    3-rank of Cl(Q(√r)) modulo the classes of the primes above `primes`.

    :raises NotAFieldError: when r is a square.
    :raises EnumerationLimitError: see FormClassGroup.
    """
    D = fundamental_discriminant(r)
    primes = sorted(set(primes))
    if three_rank(D, limit) == 0:
        return 0
    group = class_group_of(D, limit)
    basis = group.sylow(3)
    if not primes:
        return len(basis.orders)
    n = len(basis.orders)
    columns = [[order if i == j else 0 for i in range(n)] for j, order in enumerate(basis.orders)]
    for ell in primes:
        columns.append(list(group.coordinates(basis, prime_classes_above(D, ell, limit)[0])))
    relations = Matrix(n, len(columns), lambda i, j: columns[j][i])
    snf = smith_normal_form(relations, domain=ZZ)
    return sum(1 for i in range(n) if snf[i, i] % 3 == 0)


def _component_radicands(a: int) -> tuple[int, int]:
    if is_square_in_K(a):
        raise NotAFieldError(f"{a} is a square in Q(ζ), L is not a field")
    core = squarefree_core(a)
    return core, squarefree_core(-3 * core)


def biquadratic_three_rank(a: int, limit: int | None = None) -> int:
    """
    h³ of L = Q(ζ, √a) as the sum over Q(√a) and Q(√-3a).

    :raises NotAFieldError: when a ∈ K^{*2}.
    """
    d1, d2 = _component_radicands(a)
    return three_rank(fundamental_discriminant(d1), limit) + three_rank(fundamental_discriminant(d2), limit)


def s_class_three_rank(a: int, S: Iterable, limit: int | None = None) -> SClassData:
    """
    h³ of the S(L)-class group of L, one quadratic component at a time.

    S may hold KPrimes or rational primes; only residue characteristics matter.

    :raises NotAFieldError: when a ∈ K^{*2}.
    """
    d1, d2 = _component_radicands(a)
    s_primes = sorted({getattr(q, "residue_char", q) for q in S})
    rank1 = quadratic_s_class_three_rank(d1, s_primes, limit)
    rank2 = quadratic_s_class_three_rank(d2, s_primes, limit)
    logging.debug(f"a = {a}: S-class 3-ranks {rank1} + {rank2} for S over {s_primes}")
    return SClassData(d1, d2, rank1, rank2, s_primes)
