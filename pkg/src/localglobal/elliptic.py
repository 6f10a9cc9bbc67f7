"""Short Weierstrass curves y^2 = x^3 + ax + b over Q and over F_ell.

Points are ``None`` for the point at infinity and ``(x, y)`` tuples
otherwise: Fractions over Q, ints in [0, ell) over F_ell.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Optional, Tuple

import numpy as np

from .core_arith import DomainError, factorint, legendre_symbol, sqrt_mod, ResidueInt
from . import poly

RationalPoint = Optional[Tuple[Fraction, Fraction]]
ReducedPoint = Optional[Tuple[int, int]]

INFINITY = None
MAX_COUNT_PRIME = 10**6
MAZUR_BOUND = 12


class BadReduction(DomainError):
    pass


@dataclass(frozen=True)
class RationalCurve:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if 4 * self.a**3 + 27 * self.b**2 == 0:
            raise DomainError(f"{self} is singular")

    def __str__(self) -> str:
        return f"y^2 = x^3 + ({self.a})x + ({self.b})"

    @property
    def discriminant(self) -> Fraction:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    @cached_property
    def scaling(self) -> int:
        """Smallest u > 0 with a*u^4 and b*u^6 integral."""
        need: dict[int, int] = {}
        for den, w in ((self.a.denominator, 4), (self.b.denominator, 6)):
            if den > 1:
                for q, e in factorint(den).items():
                    need[q] = max(need.get(q, 0), -(-e // w))
        return math.prod(q**k for q, k in need.items())

    @cached_property
    def integral_model(self) -> "RationalCurve":
        u = self.scaling
        return RationalCurve(self.a * u**4, self.b * u**6)

    @property
    def integral_discriminant(self) -> int:
        return int(self.integral_model.discriminant)

    def to_integral(self, P: RationalPoint) -> RationalPoint:
        if P is None:
            return None
        u = self.scaling
        return (P[0] * u**2, P[1] * u**3)

    def from_integral(self, P: RationalPoint) -> RationalPoint:
        if P is None:
            return None
        u = self.scaling
        return (P[0] / u**2, P[1] / u**3)

    def rhs(self, x):
        return x**3 + self.a * x + self.b

    def is_on(self, P: RationalPoint) -> bool:
        return P is None or P[1] ** 2 == self.rhs(P[0])

    def point(self, x, y) -> RationalPoint:
        P = (Fraction(x), Fraction(y))
        if not self.is_on(P):
            raise DomainError(f"({x}, {y}) is not on {self}")
        return P

    def neg(self, P: RationalPoint) -> RationalPoint:
        return None if P is None else (P[0], -P[1])

    def add(self, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if y1 != y2 or y1 == 0:
                return None
            lam = (3 * x1 * x1 + self.a) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - x1 - x2
        return (x3, lam * (x1 - x3) - y1)

    def mul(self, n: int, P: RationalPoint) -> RationalPoint:
        if n < 0:
            n, P = -n, self.neg(P)
        acc = None
        while n:
            if n & 1:
                acc = self.add(acc, P)
            P = self.add(P, P)
            n >>= 1
        return acc

    def reduce(self, ell: int) -> "ReducedCurve":
        if ell == 2:
            raise BadReduction("ell = 2 is excluded")
        E = self.integral_model
        if self.integral_discriminant % ell == 0:
            raise BadReduction(f"{ell} divides the discriminant {self.integral_discriminant}")
        return ReducedCurve(int(E.a) % ell, int(E.b) % ell, ell)

    def reduce_point(self, P: RationalPoint, ell: int) -> ReducedPoint:
        P = self.to_integral(P)
        if P is None or P[0].denominator % ell == 0:
            return None
        x, y = P
        return (
            x.numerator * pow(x.denominator, -1, ell) % ell,
            y.numerator * pow(y.denominator, -1, ell) % ell,
        )

    def torsion_subgroup(self) -> list[RationalPoint]:
        """All rational torsion points, by the Lutz-Nagell candidate sweep.

        Candidates on the integral model have integer coordinates with y = 0
        or y^2 | 4a^3 + 27b^2; a candidate is kept when some multiple up to
        Mazur's bound 12 vanishes.
        """
        E = self.integral_model
        A, B = int(E.a), int(E.b)
        disc = 4 * A**3 + 27 * B**2
        square_roots = [1]
        for q, e in factorint(disc).items():
            square_roots = [y * q**k for y in square_roots for k in range(e // 2 + 1)]
        out: list[RationalPoint] = [None]
        for y in [0] + square_roots:
            roots, _ = poly.rational_roots([B - y * y, A, 0, 1])
            for x in roots:
                if x.denominator != 1:
                    continue
                for cand in {(x, Fraction(y)), (x, Fraction(-y))}:
                    if cand in out:
                        continue
                    Q = cand
                    for _ in range(MAZUR_BOUND):
                        if Q is None:
                            out.append(cand)
                            break
                        if Q[0].denominator != 1:
                            break
                        Q = E.add(Q, cand)
        return sorted((self.from_integral(P) for P in out), key=_point_key)

    def parse_point(self, text: str) -> RationalPoint:
        P = parse_point(text)
        return None if P is None else self.point(*P)


def _point_key(P):
    return (0, 0, 0) if P is None else (1, P[0], P[1])


@dataclass(frozen=True)
class ReducedCurve:
    a: int
    b: int
    ell: int

    def rhs(self, x: int) -> int:
        return (x * x * x + self.a * x + self.b) % self.ell

    def is_on(self, P: ReducedPoint) -> bool:
        return P is None or P[1] * P[1] % self.ell == self.rhs(P[0])

    def neg(self, P: ReducedPoint) -> ReducedPoint:
        return None if P is None else (P[0], -P[1] % self.ell)

    def add(self, P: ReducedPoint, Q: ReducedPoint) -> ReducedPoint:
        if P is None:
            return Q
        if Q is None:
            return P
        ell = self.ell
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2) % ell == 0:
                return None
            lam = (3 * x1 * x1 + self.a) * pow(2 * y1, -1, ell) % ell
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, ell) % ell
        x3 = (lam * lam - x1 - x2) % ell
        return (x3, (lam * (x1 - x3) - y1) % ell)

    def mul(self, n: int, P: ReducedPoint) -> ReducedPoint:
        if n < 0:
            n, P = -n, self.neg(P)
        acc = None
        while n:
            if n & 1:
                acc = self.add(acc, P)
            P = self.add(P, P)
            n >>= 1
        return acc

    def points(self) -> Iterator[ReducedPoint]:
        yield None
        for x in range(self.ell):
            r = sqrt_mod(ResidueInt(self.rhs(x), self.ell))
            if r is None:
                continue
            y = r.value
            yield (x, y)
            if y:
                yield (x, self.ell - y)

    def random_point(self, rng: random.Random) -> ReducedPoint:
        while True:
            x = rng.randrange(self.ell)
            r = sqrt_mod(ResidueInt(self.rhs(x), self.ell))
            if r is not None:
                y = r.value
                return (x, y if rng.random() < 0.5 else -y % self.ell)

    def count_points(self) -> int:
        """#E(F_ell) = ell + 1 + sum_x legendre(x^3 + ax + b)."""
        ell = self.ell
        if ell > MAX_COUNT_PRIME:
            raise DomainError(f"naive point counting is capped at ell <= {MAX_COUNT_PRIME}")
        xs = np.arange(ell, dtype=np.int64)
        vals = (xs * xs % ell * xs + self.a * xs + self.b) % ell
        is_square = np.zeros(ell, dtype=bool)
        is_square[xs * xs % ell] = True
        zeros = int(np.count_nonzero(vals == 0))
        residues = int(np.count_nonzero(is_square[vals])) - zeros
        n = 1 + zeros + 2 * residues
        if (n - ell - 1) ** 2 > 4 * ell:
            raise AssertionError(f"Hasse bound violated: N = {n}, ell = {ell}")
        return n


def legendre_count(a: int, b: int, ell: int) -> int:
    """Point count straight from the Legendre-symbol sum (slow reference)."""
    return ell + 1 + sum(legendre_symbol(x**3 + a * x + b, ell) for x in range(ell))


_RAT = r"[-+]?\d+(?:/\d+)?"


def parse_curve(text: str) -> RationalCurve:
    """``a=<num>/<den> b=<num>/<den>`` (denominators optional)."""
    m = re.fullmatch(rf"\s*a=({_RAT})\s+b=({_RAT})\s*", text)
    if not m:
        raise DomainError(f"malformed curve {text!r}; expected 'a=<rat> b=<rat>'")
    return RationalCurve(Fraction(m.group(1)), Fraction(m.group(2)))


def parse_point(text: str):
    """``inf`` or ``x=<rat> y=<rat>``; returns None or an (x, y) Fraction pair."""
    if text.strip() == "inf":
        return None
    m = re.fullmatch(rf"\s*x=({_RAT})\s+y=({_RAT})\s*", text)
    if not m:
        raise DomainError(f"malformed point {text!r}; expected 'inf' or 'x=<rat> y=<rat>'")
    return (Fraction(m.group(1)), Fraction(m.group(2)))


def format_point(P) -> str:
    return "inf" if P is None else f"x={P[0]} y={P[1]}"


def format_curve(E: RationalCurve) -> str:
    return f"a={E.a} b={E.b}"
