"""Global and local p^n-divisibility of rational points on elliptic curves."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from . import poly
from .core_arith import DomainError, valuation
from .elliptic import RationalCurve, RationalPoint, ReducedPoint, BadReduction

BRUTE_FORCE_LIMIT = 1000


class Inconclusive(RuntimeError):
    """The exact global search ran out of budget; distinct from 'not divisible'."""


class BadPrime(DomainError):
    pass


# ---------------------------------------------------------------------------
# division polynomials

@dataclass(frozen=True)
class DivisionPolynomial:
    """psi_m in y-free form: ``poly`` is psi_m for odd m and psi_m / y for even m."""

    index: int
    poly: tuple
    curve: RationalCurve

    @property
    def has_y(self) -> bool:
        return self.index % 2 == 0

    @property
    def squared(self) -> list:
        """psi_m^2 as a polynomial in x."""
        sq = poly.mul(list(self.poly), list(self.poly))
        return poly.mul(sq, _rhs(self.curve)) if self.has_y else sq

    @property
    def degree(self) -> int:
        return poly.degree(list(self.poly))


def _rhs(E: RationalCurve) -> list:
    return poly.trim([E.b, E.a, 0, 1])


class _PsiTable:
    def __init__(self, E: RationalCurve):
        a, b = E.a, E.b
        self.f = _rhs(E)
        self.memo = {
            0: [],
            1: [1],
            2: [2],
            3: poly.trim([-a * a, 12 * b, 6 * a, 0, 3]),
            4: poly.scale(poly.trim([-8 * b * b - a**3, -4 * a * b, -5 * a * a, 20 * b, 5 * a, 0, 1]), 4),
        }

    def __call__(self, m: int) -> list:
        if m in self.memo:
            return self.memo[m]
        k, odd = divmod(m, 2)
        P, F = self, self.f
        if odd:
            # psi_(2k+1) = psi_(k+2) psi_k^3 - psi_(k-1) psi_(k+1)^3, with y^2 -> f
            t1 = poly.mul(P(k + 2), poly.mul(P(k), poly.mul(P(k), P(k))))
            t2 = poly.mul(P(k - 1), poly.mul(P(k + 1), poly.mul(P(k + 1), P(k + 1))))
            if k % 2 == 0:
                t1 = poly.mul(t1, poly.mul(F, F))
            else:
                t2 = poly.mul(t2, poly.mul(F, F))
            out = poly.sub(t1, t2)
        else:
            # psi_(2k) = psi_k (psi_(k+2) psi_(k-1)^2 - psi_(k-2) psi_(k+1)^2) / (2y)
            t1 = poly.mul(P(k + 2), poly.mul(P(k - 1), P(k - 1)))
            t2 = poly.mul(P(k - 2), poly.mul(P(k + 1), P(k + 1)))
            out = poly.mul(P(k), poly.sub(t1, t2))
            out = [c / 2 if isinstance(c, Fraction) else Fraction(c, 2) for c in out]
            out = [int(c) if c.denominator == 1 else c for c in out]
        self.memo[m] = poly.trim(out)
        return self.memo[m]


def division_polynomial(E: RationalCurve, m: int) -> DivisionPolynomial:
    if m < 1:
        raise DomainError("index must be >= 1")
    return DivisionPolynomial(m, tuple(_PsiTable(E)(m)), E)


def multiplication_by(E: RationalCurve, m: int) -> tuple[list, list]:
    """(phi_m, psi_m^2) with x(mP) = phi_m(x) / psi_m^2(x)."""
    psi = _PsiTable(E)
    f = psi.f
    if m % 2:
        sq = poly.mul(psi(m), psi(m))
        cross = poly.mul(f, poly.mul(psi(m + 1), psi(m - 1)))
    else:
        sq = poly.mul(f, poly.mul(psi(m), psi(m)))
        cross = poly.mul(psi(m + 1), psi(m - 1))
    return poly.sub(poly.mul([0, 1], sq), cross), sq


# ---------------------------------------------------------------------------
# global divisibility over Q

def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


@dataclass
class GlobalVerdict:
    divisible: bool
    preimage: RationalPoint = None
    preimages: list = field(default_factory=list)
    method: str = ""


def divide_by_prime(E: RationalCurve, T: RationalPoint, p: int) -> tuple[list, str]:
    """Every rational Q with p*Q = T, on any model.  Complete when it returns."""
    if T is None:
        return [Q for Q in E.torsion_subgroup() if E.mul(p, Q) is None], "torsion"
    phi, sq = multiplication_by(E, p)
    xt = T[0]
    F = poly.sub(poly.scale(phi, xt.denominator), poly.scale(sq, xt.numerator))
    try:
        roots, method = poly.rational_roots(F)
    except poly.RootSearchInconclusive as exc:
        raise Inconclusive(str(exc)) from exc
    out = []
    for x in roots:
        if poly.evaluate(sq, x) == 0:
            continue
        y = _rational_sqrt(E.rhs(x))
        if y is None:
            continue
        for Q in {(x, y), (x, -y)}:
            if E.mul(p, Q) == T:
                out.append(Q)
    return sorted(out), method


def global_divide(E: RationalCurve, P: RationalPoint, p: int, n: int) -> GlobalVerdict:
    """Decide whether P = p^n Q for some rational Q.

    Searches all rational preimages stage by stage, so a negative answer is a
    proof.  Raises Inconclusive if a root search exhausts its budget.
    """
    if n < 1 or p < 2:
        raise DomainError("need a prime p and n >= 1")
    if not E.is_on(P):
        raise DomainError("point is not on the curve")
    if P is None:
        return GlobalVerdict(True, None, [None], "trivial")
    torsion = E.torsion_subgroup()
    if P in torsion:
        q = p**n
        pre = [Q for Q in torsion if E.mul(q, Q) == P]
        return GlobalVerdict(bool(pre), pre[0] if pre else None, pre, "torsion")
    frontier = [P]
    methods = set()
    for _ in range(n):
        nxt = []
        for T in frontier:
            found, method = divide_by_prime(E, T, p)
            methods.add(method)
            nxt.extend(found)
        frontier = sorted(set(nxt))
        if not frontier:
            return GlobalVerdict(False, None, [], "+".join(sorted(methods)))
    q = p**n
    for Q in frontier:
        if E.mul(q, Q) != P:
            raise AssertionError(f"preimage {Q} fails p^n Q = P")
    return GlobalVerdict(True, frontier[0], frontier, "+".join(sorted(methods)))


# ---------------------------------------------------------------------------
# local divisibility at a good prime

@dataclass(frozen=True)
class LocalVerdict:
    ell: int
    divisible: bool
    method: Literal["structural", "brute_force"]
    witness: ReducedPoint = None


def _admissible(E: RationalCurve, p: int, ell: int):
    if ell == 2 or ell == p or (p * E.integral_discriminant) % ell == 0:
        raise BadPrime(f"ell = {ell} is excluded for p = {p} on {E}")
    try:
        return E.reduce(ell)
    except BadReduction as exc:
        raise BadPrime(str(exc)) from exc


def _brute_force(Ered, R, q: int) -> ReducedPoint | bool:
    for X in Ered.points():
        if Ered.mul(q, X) == R:
            return X
    return False


def _sylow_subgroup(Ered, cofactor: int, order: int, rng: random.Random) -> set:
    group = {None}
    for _ in range(64):
        if len(group) == order:
            return group
        X = Ered.mul(cofactor, Ered.random_point(rng))
        if X in group:
            continue
        # abelian closure of group + <X>
        new, Y = set(group), X
        while Y not in group:
            new |= {Ered.add(g, Y) for g in group}
            Y = Ered.add(Y, X)
        group = new
    if len(group) != order:
        group = {Ered.mul(cofactor, X) for X in Ered.points()}
    return group


def local_divide_test(
    E: RationalCurve,
    P: RationalPoint,
    p: int,
    n: int,
    ell: int,
    method: Literal["structural", "brute_force"] = "structural",
    cross_check: bool = True,
) -> LocalVerdict:
    """Is the reduction of P divisible by p^n in E(F_ell)?

    For good ell != p the formal group is uniquely p-divisible, so this
    decides divisibility in E(Q_ell) as well.
    """
    Ered = _admissible(E, p, ell)
    R = E.reduce_point(P, ell)
    q = p**n
    if method == "brute_force":
        w = _brute_force(Ered, R, q)
        return LocalVerdict(ell, w is not False, "brute_force", w if w is not False else None)

    N = Ered.count_points()
    a = valuation(N, p)
    cofactor = N // p**a
    T = Ered.mul(cofactor, R)
    Gp = _sylow_subgroup(Ered, cofactor, p**a, random.Random(ell * 1_000_003 + p))
    image = {}
    for g in Gp:
        image.setdefault(Ered.mul(q, g), g)
    witness = None
    if T in image:
        # cofactor*u + q*v = 1, so R = q*(u*g + v*R) when q*g = cofactor*R
        u = pow(cofactor, -1, q)
        v = (1 - cofactor * u) // q
        witness = Ered.add(Ered.mul(u, image[T]), Ered.mul(v, R))
        assert Ered.mul(q, witness) == R
    verdict = LocalVerdict(ell, T in image, "structural", witness)
    if cross_check and ell <= BRUTE_FORCE_LIMIT:
        brute = _brute_force(Ered, R, q)
        if (brute is not False) != verdict.divisible:
            raise AssertionError(f"structural and brute-force local tests disagree at ell = {ell}")
    return verdict
