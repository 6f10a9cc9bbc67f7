"""Open subsets of Z_p given as finite unions of residue classes."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .core_arith import DomainError, is_prime


class Membership(str, enum.Enum):
    IN = "In"
    OUT = "Out"
    UNKNOWN = "Unknown"


class DepthExceeded(ValueError):
    pass


@dataclass(frozen=True)
class ResidueClass:
    """The ball center + p^level Z_p."""

    p: int
    level: int
    center: int

    def __post_init__(self):
        if self.level < 0:
            raise DomainError("level must be non-negative")
        if not 0 <= self.center < self.p**self.level:
            raise DomainError(f"center {self.center} not reduced mod {self.p}^{self.level}")

    @property
    def measure(self) -> Fraction:
        return Fraction(1, self.p**self.level)

    def contains(self, x: int) -> bool:
        return (x - self.center) % self.p**self.level == 0

    def is_inside(self, other: "ResidueClass") -> bool:
        return self.level >= other.level and other.contains(self.center)


@dataclass(frozen=True)
class ConstantDigit:
    digit: int = 1

    def digits(self, p: int, count: int) -> list[int]:
        return [self.digit] * count

    def __str__(self) -> str:
        return f"const:{self.digit}"


# glibc-style LCG; the recurrence is part of the reproducibility contract
_LCG_A, _LCG_C, _LCG_M = 1103515245, 12345, 2**31


@dataclass(frozen=True)
class SeededSequence:
    """Digits a_n = 1 + (s_n mod (p-1)), s_1 = seed, s_(k+1) = (A s_k + C) mod 2^31."""

    seed: int

    def digits(self, p: int, count: int) -> list[int]:
        out, s = [], self.seed % _LCG_M
        for _ in range(count):
            out.append(1 + s % (p - 1))
            s = (_LCG_A * s + _LCG_C) % _LCG_M
        return out

    def __str__(self) -> str:
        return f"seed:{self.seed}"


DigitRule = Union[ConstantDigit, SeededSequence]


def parse_rule(text: str) -> DigitRule:
    kind, _, arg = text.strip().partition(":")
    try:
        value = int(arg)
    except ValueError:
        raise DomainError(f"bad digit rule {text!r}") from None
    if kind == "const":
        return ConstantDigit(value)
    if kind == "seed":
        return SeededSequence(value)
    raise DomainError(f"unknown digit rule kind {kind!r}; expected const or seed")


@dataclass(frozen=True)
class PadicOpenSet:
    p: int
    classes: tuple[ResidueClass, ...]
    depth: int

    def __post_init__(self):
        for c in self.classes:
            if c.p != self.p:
                raise DomainError("all classes must share the same prime")
            if c.level > self.depth:
                raise DomainError(f"class level {c.level} exceeds depth {self.depth}")
        cs = self.classes
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                if cs[i].is_inside(cs[j]) or cs[j].is_inside(cs[i]):
                    raise DomainError(f"classes {cs[i]} and {cs[j]} overlap")

    def __iter__(self) -> Iterator[ResidueClass]:
        return iter(self.classes)


def whole_ring(p: int) -> PadicOpenSet:
    return PadicOpenSet(p, (ResidueClass(p, 0, 0),), 0)


def proposition_set(p: int, rule: DigitRule, depth: int) -> PadicOpenSet:
    """Union over 1 <= n <= depth of the balls a_n p^(n-1) + p^n Z_p.

    Points of the n-th ball have valuation exactly n-1, so the balls are disjoint.
    """
    if p == 2 or not is_prime(p):
        raise DomainError(f"p must be an odd prime, got {p}")
    if depth < 1:
        raise DomainError("depth must be >= 1")
    digits = rule.digits(p, depth)
    classes = []
    for n, a in enumerate(digits, start=1):
        if a % p == 0:
            raise DomainError(f"digit a_{n} = {a} vanishes mod {p}")
        classes.append(ResidueClass(p, n, (a % p) * p ** (n - 1)))
    return PadicOpenSet(p, tuple(classes), depth)


def haar_measure(A: PadicOpenSet) -> Fraction:
    return sum((c.measure for c in A.classes), Fraction(0))


def contains(A: PadicOpenSet, x: int) -> Membership:
    """Membership of x (known modulo p^depth) in A.

    Unknown is reserved for x = 0 mod p^depth: such x may still sit in a ball
    deeper than the truncation.
    """
    for c in A.classes:
        if c.contains(x):
            return Membership.IN
    if A.depth and x % A.p**A.depth == 0:
        return Membership.UNKNOWN
    return Membership.OUT


def intersect_subgroup(A: PadicOpenSet, m: int) -> PadicOpenSet:
    """The balls of A lying inside p^m Z_p."""
    if m < 0:
        raise DomainError("m must be non-negative")
    if m >= A.depth:
        raise DepthExceeded(f"m = {m} must be below the depth {A.depth}")
    sub = ResidueClass(A.p, m, 0)
    return PadicOpenSet(A.p, tuple(c for c in A.classes if c.is_inside(sub)), A.depth)


def relative_measure(A: PadicOpenSet, m: int) -> Fraction:
    """Measure of A inside p^m Z_p, normalised so that p^m Z_p has mass 1."""
    return haar_measure(intersect_subgroup(A, m)) * A.p**m


_RECORD = re.compile(r"^p=(\d+) rule=(\S+) depth=(\d+)$")


@dataclass(frozen=True)
class SetRecord:
    """Text form ``p=<prime> rule=const:<digit>|seed:<int> depth=<N>``."""

    p: int
    rule: DigitRule
    depth: int

    def build(self) -> PadicOpenSet:
        return proposition_set(self.p, self.rule, self.depth)

    def __str__(self) -> str:
        return f"p={self.p} rule={self.rule} depth={self.depth}"

    @classmethod
    def parse(cls, text: str) -> "SetRecord":
        m = _RECORD.match(text.strip())
        if not m:
            raise DomainError(f"malformed set record {text!r}")
        return cls(int(m.group(1)), parse_rule(m.group(2)), int(m.group(3)))
