"""The prime set S = {q : Frob_q lands in A} for the cyclotomic Z_p'-tower over Q.

Gal(Q_inf/Q) is identified with Z_p' through the logarithm to base 1+p' of
q^(p'-1), so Frobenius at q has coordinate log_(1+p')(q^(p'-1)) mod p'^N.
"""

from __future__ import annotations

import functools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .core_arith import DomainError, UnitLogContext, is_prime, iter_prime_segments
from .padic_sets import (
    ConstantDigit,
    DigitRule,
    Membership,
    PadicOpenSet,
    SetRecord,
    contains,
    haar_measure,
    proposition_set,
)


@dataclass(frozen=True)
class PersistentSetSpec:
    p: int
    rule: DigitRule = ConstantDigit(1)
    depth: int = 8
    epsilon: Fraction | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.p == 2 or not is_prime(self.p):
            raise DomainError(f"auxiliary prime must be an odd prime, got {self.p}")
        if self.depth < 1:
            raise DomainError("depth must be >= 1")
        if self.epsilon is not None and not Fraction(1, self.p - 1) < self.epsilon:
            raise DomainError(f"1/(p-1) = 1/{self.p - 1} is not below epsilon = {self.epsilon}")

    @classmethod
    def for_epsilon(cls, epsilon, rule: DigitRule = ConstantDigit(1), depth: int = 8) -> "PersistentSetSpec":
        """Smallest odd prime p with 1/(p-1) < epsilon."""
        epsilon = Fraction(epsilon)
        if epsilon <= 0:
            raise DomainError("epsilon must be positive")
        p = 3
        while not (Fraction(1, p - 1) < epsilon and is_prime(p)):
            p += 2
        return cls(p, rule, depth, epsilon)

    @property
    def record(self) -> SetRecord:
        return SetRecord(self.p, self.rule, self.depth)

    @property
    def open_set(self) -> PadicOpenSet:
        return _open_set(self.p, self.rule, self.depth)

    @property
    def measure(self) -> Fraction:
        return haar_measure(self.open_set)


@functools.lru_cache(maxsize=32)
def _open_set(p, rule, depth) -> PadicOpenSet:
    return proposition_set(p, rule, depth)


@functools.lru_cache(maxsize=32)
def _log_context(p: int, depth: int) -> UnitLogContext:
    return UnitLogContext(p, depth)


def frobenius_coordinate(q: int, spec: PersistentSetSpec) -> int:
    """Image of Frob_q in Z_p' / p'^N."""
    p = spec.p
    if q % p == 0:
        raise DomainError(f"q = {q} is ramified in the {p}-cyclotomic tower")
    ctx = _log_context(p, spec.depth)
    return ctx.log(pow(q, p - 1, ctx.modulus))


def in_persistent_set(q: int, spec: PersistentSetSpec) -> Membership:
    if q == spec.p:
        return Membership.OUT
    return contains(spec.open_set, frobenius_coordinate(q, spec))


@dataclass(frozen=True)
class ChebotarevPredicate:
    """Primes q not dividing m with q mod m in the allowed residues."""

    modulus: int
    residues: frozenset[int]

    def __call__(self, q: int) -> bool:
        # residues are units, so this also excludes the ramified q | m
        return self.modulus == 1 or q % self.modulus in self.residues

    def __str__(self) -> str:
        return ",".join(str(r) for r in sorted(self.residues)) + f"mod{self.modulus}"


def chebotarev_filter(m: int, residues) -> ChebotarevPredicate:
    if m < 1:
        raise DomainError("modulus must be positive")
    rs = frozenset(int(r) % m for r in residues)
    for r in rs:
        if math.gcd(r, m) != 1:
            raise DomainError(f"residue {r} is not coprime to {m}")
    if m == 1:
        rs = frozenset({0})
    return ChebotarevPredicate(m, rs)


def parse_filter(text: str) -> ChebotarevPredicate:
    """``1mod7`` or ``1,2,4mod7``."""
    head, sep, mod = text.partition("mod")
    if not sep:
        raise DomainError(f"filter {text!r} should look like 1mod7")
    try:
        return chebotarev_filter(int(mod), [int(r) for r in head.split(",")])
    except ValueError:
        raise DomainError(f"filter {text!r} should look like 1mod7") from None


def _classify(chunk: list[int], spec: PersistentSetSpec) -> list[tuple[int, Membership, int | None]]:
    out = []
    for q in chunk:
        if q == spec.p:
            out.append((q, Membership.OUT, None))
        else:
            x = frobenius_coordinate(q, spec)
            out.append((q, contains(spec.open_set, x), x))
    return out


def enumerate_with_coordinates(spec: PersistentSetSpec, limit: int, workers: int = 1):
    """(q, verdict, coordinate) for each prime q <= limit, ascending."""
    chunks = [[int(q) for q in seg] for seg in iter_prime_segments(limit)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_classify, chunks, [spec] * len(chunks)))
    else:
        parts = [_classify(c, spec) for c in chunks]
    return [row for part in parts for row in part]


def enumerate_set(spec: PersistentSetSpec, limit: int, workers: int = 1) -> list[tuple[int, Membership]]:
    return [(q, v) for q, v, _ in _cached_enumeration(spec, limit, workers)]


@functools.lru_cache(maxsize=4)
def _cached_enumeration(spec, limit, workers):
    return tuple(enumerate_with_coordinates(spec, limit, workers))


@dataclass(frozen=True)
class DensityEstimate:
    numerator: int
    denominator: int
    unknown: int
    limit: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.numerator, self.denominator) if self.denominator else Fraction(0)

    def as_dict(self) -> dict:
        r = self.ratio
        return {
            "numerator": self.numerator,
            "denominator": self.denominator,
            "ratio_num": r.numerator,
            "ratio_den": r.denominator,
            "unknown": self.unknown,
            "limit": self.limit,
        }


def estimate_density(
    spec: PersistentSetSpec,
    limit: int,
    filter: ChebotarevPredicate | None = None,
    workers: int = 1,
) -> DensityEstimate:
    """Natural density of S among the primes <= limit passing ``filter``.

    With the filter q = 1 mod m this counts S_l on the degree-one primes of
    Q(zeta_m), which carry all the density of S_l.
    """
    num = den = unknown = 0
    for q, verdict, _ in _cached_enumeration(spec, limit, workers):
        if filter is not None and not filter(q):
            continue
        den += 1
        if verdict is Membership.IN:
            num += 1
        elif verdict is Membership.UNKNOWN:
            unknown += 1
    return DensityEstimate(num, den, unknown, limit)
