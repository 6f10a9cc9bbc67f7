"""Exact integer arithmetic shared by every other module.

Rationals are ``fractions.Fraction`` throughout (always reduced, positive
denominator).  Nothing in this package touches floating point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NotInvertible(ArithmeticError):
    pass


@dataclass(frozen=True)
class ResidueInt:
    """An element of Z/m, stored as its least non-negative representative."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _check(self, other: "ResidueInt") -> None:
        if other.modulus != self.modulus:
            raise DomainError(f"moduli differ: {self.modulus} vs {other.modulus}")

    def __add__(self, other: "ResidueInt") -> "ResidueInt":
        self._check(other)
        return ResidueInt(self.value + other.value, self.modulus)

    def __sub__(self, other: "ResidueInt") -> "ResidueInt":
        self._check(other)
        return ResidueInt(self.value - other.value, self.modulus)

    def __mul__(self, other: "ResidueInt") -> "ResidueInt":
        self._check(other)
        return ResidueInt(self.value * other.value, self.modulus)

    def __neg__(self) -> "ResidueInt":
        return ResidueInt(-self.value, self.modulus)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return f"{self.value} mod {self.modulus}"


def mod_pow(base: ResidueInt, exp: int) -> ResidueInt:
    """Square-and-multiply exponentiation in Z/m."""
    if exp < 0:
        raise DomainError("negative exponent; invert first")
    m = base.modulus
    result, b = 1 % m, base.value
    while exp:
        if exp & 1:
            result = result * b % m
        b = b * b % m
        exp >>= 1
    return ResidueInt(result, m)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def mod_inverse(x: ResidueInt) -> ResidueInt:
    g, s, _ = xgcd(x.value, x.modulus)
    if g != 1:
        raise NotInvertible(f"{x.value} is not invertible mod {x.modulus} (gcd {g})")
    return ResidueInt(s, x.modulus)


def legendre_symbol(a: int, ell: int) -> int:
    """Euler's criterion, returning -1, 0 or +1."""
    r = pow(a % ell, (ell - 1) // 2, ell)
    return -1 if r == ell - 1 else r


def sqrt_mod(a: ResidueInt) -> ResidueInt | None:
    """Square root modulo an odd prime via Tonelli-Shanks.

    Returns the smaller of the two roots, or None for a non-residue.
    """
    ell = a.modulus
    n = a.value
    if n == 0:
        return ResidueInt(0, ell)
    if legendre_symbol(n, ell) != 1:
        return None
    if ell % 4 == 3:
        r = pow(n, (ell + 1) // 4, ell)
    else:
        q, s = ell - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while legendre_symbol(z, ell) != -1:
            z += 1
        m, c, t, r = s, pow(z, q, ell), pow(n, q, ell), pow(n, (q + 1) // 2, ell)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % ell
                i += 1
            b = pow(c, 1 << (m - i - 1), ell)
            m, c = i, b * b % ell
            t, r = t * c % ell, r * b % ell
    return ResidueInt(min(r, ell - r), ell)


# ---------------------------------------------------------------------------
# primes

def _small_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags)


def iter_prime_segments(limit: int, segment_size: int = 1 << 20):
    """Yield numpy arrays of the primes <= limit, one segment at a time."""
    if limit < 2:
        return
    base = _small_sieve(math.isqrt(limit))
    low = 0
    while low <= limit:
        high = min(low + segment_size, limit + 1)
        flags = np.ones(high - low, dtype=bool)
        if low == 0:
            flags[: min(2, high)] = False
        for p in base:
            p = int(p)
            if p * p >= high:
                break
            start = max(p * p, -(-low // p) * p)
            flags[start - low :: p] = False
        yield np.flatnonzero(flags) + low
        low = high


def prime_sieve(limit: int, segment_size: int = 1 << 20) -> list[int]:
    """All primes <= limit in ascending order (segmented sieve)."""
    return [int(q) for seg in iter_prime_segments(limit, segment_size) for q in seg]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24, probabilistic beyond."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FactoringBudgetExceeded(RuntimeError):
    pass


def _pollard_rho(n: int, max_iter: int, rng: random.Random) -> int | None:
    for _ in range(8):
        c = rng.randrange(1, n)
        x = y = rng.randrange(2, n)
        d = 1
        it = 0
        while d == 1 and it < max_iter:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
            it += 1
        if 1 < d < n:
            return d
    return None


def factorint(n: int, trial_bound: int = 10**6, rho_iterations: int = 200_000) -> dict[int, int]:
    """Factor |n| by trial division up to ``trial_bound`` then capped Pollard rho.

    Raises FactoringBudgetExceeded when a composite cofactor survives the budget.
    """
    n = abs(n)
    if n == 0:
        raise DomainError("cannot factor 0")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    step = 2
    while p <= trial_bound and p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n == 1:
        return out
    rng = random.Random(n)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_rho(m, rho_iterations, rng)
        if d is None:
            raise FactoringBudgetExceeded(f"could not split {m}")
        stack += [d, m // d]
    return out


def divisors(n: int, **budget) -> list[int]:
    """Positive divisors of |n|, ascending."""
    divs = [1]
    for p, e in factorint(n, **budget).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def valuation(x: int, p: int) -> int:
    if x == 0:
        raise DomainError("valuation of 0 is infinite")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# discrete logarithm in the principal units 1 + pZ/p^(N+1)

class UnitLogContext:
    """Digit-by-digit logarithm to base 1+p modulo p^(N+1), for odd p.

    Precomputes the powers (1+p)^(-d p^k) so repeated calls cost N modular
    multiplications each.
    """

    def __init__(self, p: int, depth: int):
        if p % 2 == 0 or p < 3:
            raise DomainError("the unit logarithm needs an odd prime")
        if depth < 1:
            raise DomainError("depth must be >= 1")
        self.p = p
        self.depth = depth
        self.modulus = p ** (depth + 1)
        g = 1 + p
        ginv = pow(g, -1, self.modulus)
        self._steps = []
        for k in range(depth):
            gk = pow(g, p**k, self.modulus)
            # g^(p^k) = 1 + p^(k+1) * unit
            unit = ((gk - 1) // p ** (k + 1)) % p
            base_inv = pow(ginv, p**k, self.modulus)
            powers = [1]
            for _ in range(p - 1):
                powers.append(powers[-1] * base_inv % self.modulus)
            self._steps.append((p ** (k + 1), pow(unit, -1, p), powers))

    def log(self, u: int) -> int:
        p, mod = self.p, self.modulus
        w = u % mod
        if w % p != 1 % p:
            raise DomainError(f"{u} is not congruent to 1 mod {p}")
        x = 0
        for k, (pk1, unit_inv, powers) in enumerate(self._steps):
            d = ((w - 1) // pk1) * unit_inv % p
            if d:
                w = w * powers[d] % mod
                x += d * p**k
        return x


def discrete_log_1p(u: ResidueInt, p: int) -> ResidueInt:
    """The x mod p^N with (1+p)^x = u mod p^(N+1), where u.modulus = p^(N+1)."""
    m, depth = u.modulus, -1
    while m % p == 0:
        m //= p
        depth += 1
    if m != 1 or depth < 1:
        raise DomainError(f"modulus {u.modulus} is not p^(N+1) with N >= 1 for p={p}")
    return ResidueInt(UnitLogContext(p, depth).log(u.value), p**depth)


# ---------------------------------------------------------------------------
# integer linear algebra

@dataclass(frozen=True)
class SmithForm:
    """U @ M @ V == diag(divisors + zeros), U and V unimodular."""

    divisors: list[int]
    U: list[list[int]]
    V: list[list[int]]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: list[list[int]]) -> SmithForm:
    """Smith normal form over Z with both transforms.

    Only the nonzero invariant factors are returned; they satisfy d_i | d_(i+1).
    """
    A = [list(map(int, row)) for row in matrix]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U, V = _identity(rows), _identity(cols)

    def row_combine(i, j, a, b, c, d):
        # rows (i, j) <- (a*ri + b*rj, c*ri + d*rj), determinant +-1
        for M in (A, U):
            ri, rj = M[i], M[j]
            M[i] = [a * x + b * y for x, y in zip(ri, rj)]
            M[j] = [c * x + d * y for x, y in zip(ri, rj)]

    def col_combine(i, j, a, b, c, d):
        for M in (A, V):
            for row in M:
                x, y = row[i], row[j]
                row[i], row[j] = a * x + b * y, c * x + d * y

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            A[t], A[i] = A[i], A[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            col_combine(t, j, 0, 1, 1, 0)
        done = False
        while not done:
            done = True
            for i in range(t + 1, rows):
                if A[i][t] % A[t][t] == 0:
                    if A[i][t]:
                        row_combine(t, i, 1, 0, -(A[i][t] // A[t][t]), 1)
                elif A[i][t]:
                    # strictly shrinks |pivot|, so this cannot cycle
                    g, s, u = xgcd(A[t][t], A[i][t])
                    a, b = A[t][t] // g, A[i][t] // g
                    row_combine(t, i, s, u, -b, a)
            for j in range(t + 1, cols):
                if A[t][j] % A[t][t] == 0:
                    if A[t][j]:
                        col_combine(t, j, 1, 0, -(A[t][j] // A[t][t]), 1)
                else:
                    g, s, u = xgcd(A[t][t], A[t][j])
                    a, b = A[t][t] // g, A[t][j] // g
                    col_combine(t, j, s, u, -b, a)
                    done = False
            if not done:
                continue
            # divisibility: fold any entry not divisible by the pivot into row t
            piv = A[t][t]
            for i in range(t + 1, rows):
                if any(A[i][j] % piv for j in range(t + 1, cols)):
                    row_combine(t, i, 1, 1, 0, 1)
                    done = False
                    break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    divs = [A[k][k] for k in range(min(rows, cols)) if A[k][k]]
    return SmithForm(divs, U, V)


def matmul(A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def unimodular_inverse(M: list[list[int]]) -> list[list[int]]:
    """Exact inverse of an integer matrix with determinant +-1."""
    from fractions import Fraction

    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    out = [[x for x in row[n:]] for row in aug]
    if any(x.denominator != 1 for row in out for x in row):
        raise DomainError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def echelon_mod(rows, ncols: int, modulus: int) -> list[list[int]]:
    """Row-reduce a (possibly very tall) system over Z/modulus.

    Uses unimodular 2x2 row operations only, so the returned (at most ncols)
    rows have exactly the same solution set mod ``modulus`` as the input.
    """
    slots: list[list[int] | None] = [None] * ncols
    for row in rows:
        a = [int(x) % modulus for x in row]
        for j in range(ncols):
            if a[j] == 0:
                continue
            h = slots[j]
            if h is None:
                slots[j] = a
                break
            g, s, t = xgcd(h[j], a[j])
            x, y = h[j] // g, a[j] // g
            slots[j] = [(s * u + t * v) % modulus for u, v in zip(h, a)]
            a = [(x * v - y * u) % modulus for u, v in zip(h, a)]
    return [h for h in slots if h is not None]


def solve_homogeneous_mod(rows, ncols: int, modulus: int) -> tuple[list[list[int]], list[int]]:
    """Generators of {v in (Z/modulus)^ncols : rows @ v = 0}.

    Returns (generators, orders) with the solution module equal to the
    direct sum of the cyclic groups <generators[i]> of order orders[i].
    Generators of order 1 are dropped.
    """
    H = echelon_mod(rows, ncols, modulus)
    if not H:
        gens = _identity(ncols)
        return gens, [modulus] * ncols
    snf = smith_normal_form(H)
    gens, orders = [], []
    for i in range(ncols):
        d = snf.divisors[i] if i < len(snf.divisors) else 0
        order = math.gcd(d, modulus) if d else modulus
        if order == 1:
            continue
        scale = modulus // order
        gens.append([scale * snf.V[r][i] % modulus for r in range(ncols)])
        orders.append(order)
    return gens, orders
