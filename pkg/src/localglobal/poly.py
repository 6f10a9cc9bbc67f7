"""Dense univariate polynomials over Z and Q, lowest degree first.

Only what the division-polynomial and torsion code needs, plus an exact
rational-root finder.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

from .core_arith import FactoringBudgetExceeded, divisors, is_prime


class RootSearchInconclusive(RuntimeError):
    pass


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f) -> int:
    return len(trim(f)) - 1


def add(f, g):
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def sub(f, g):
    return add(f, [-c for c in g])


def mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out)


def scale(f, c):
    return trim([c * a for a in f])


def evaluate(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def evaluate_mod(f, x: int, m: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % m
    return acc


def derivative(f):
    return trim([i * c for i, c in enumerate(f)][1:])


def primitive(f) -> list[int]:
    """Integer primitive part with positive leading coefficient."""
    f = trim(f)
    if not f:
        return []
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (Fraction(c).denominator for c in f), 1)
    ints = [int(Fraction(c) * den) for c in f]
    g = reduce(math.gcd, ints)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def divmod_poly(f, g):
    f = [Fraction(c) for c in trim(f)]
    g = [Fraction(c) for c in trim(g)]
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        c = f[-1] / g[-1]
        k = len(f) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            f[i + k] -= c * b
        f = trim(f)
    return trim(q), f


def gcd_poly(f, g):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, divmod_poly(f, g)[1]
    return primitive(f) if f else []


def squarefree_part(f) -> list[int]:
    g = gcd_poly(f, derivative(f))
    if degree(g) <= 0:
        return primitive(f)
    return primitive(divmod_poly(f, g)[0])


def _mod_poly(f, m):
    return trim([c % m for c in f])


def _gcd_mod_prime(f, g, ell):
    f, g = _mod_poly(f, ell), _mod_poly(g, ell)
    while g:
        inv = pow(g[-1], -1, ell)
        while len(f) >= len(g) and f:
            c = f[-1] * inv % ell
            k = len(f) - len(g)
            for i, b in enumerate(g):
                f[i + k] = (f[i + k] - c * b) % ell
            f = trim(f)
        f, g = g, f
    return f


def _rational_reconstruct(r: int, m: int, num_bound: int, den_bound: int) -> Fraction | None:
    r0, r1, t0, t1 = m, r % m, 0, 1
    while r1 > num_bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > den_bound:
        return None
    return Fraction(r1, t1)


def _is_root(f, x: Fraction) -> bool:
    d, e = x.numerator, x.denominator
    n = len(f) - 1
    return sum(c * d**i * e ** (n - i) for i, c in enumerate(f)) == 0


def _roots_by_divisors(f, max_candidates: int, size_limit: int) -> list[Fraction]:
    c0, lead = f[0], f[-1]
    if max(abs(c0), abs(lead)) > size_limit:
        raise FactoringBudgetExceeded("coefficients too large to factor")
    nums = divisors(c0, rho_iterations=20_000)
    dens = divisors(lead, rho_iterations=20_000)
    if len(nums) * len(dens) > max_candidates:
        raise FactoringBudgetExceeded("too many divisor pairs")
    aux = []
    q = 101
    while len(aux) < 3:
        if is_prime(q) and lead % q:
            aux.append(q)
        q += 2
    found = []
    for e in dens:
        for d in nums:
            if math.gcd(d, e) != 1:
                continue
            for s in (d, -d):
                if all(evaluate_mod(f, s * pow(e, -1, q), q) == 0 for q in aux if e % q):
                    x = Fraction(s, e)
                    if _is_root(f, x):
                        found.append(x)
    return found


def _roots_by_hensel(f, max_primes: int) -> list[Fraction]:
    g = primitive(f)
    c0, lead = abs(g[0]), abs(g[-1])
    ell = 3
    tried = 0
    squarefree_checked = False
    while True:
        if is_prime(ell) and lead % ell:
            tried += 1
            if degree(_gcd_mod_prime(g, derivative(g), ell)) == 0:
                break
            if tried >= 20 and not squarefree_checked:
                g = squarefree_part(g)
                c0, lead = abs(g[0]), abs(g[-1])
                squarefree_checked = True
            if tried > max_primes:
                raise RootSearchInconclusive("no auxiliary prime with squarefree reduction")
        ell += 2
    bound = 2 * c0 * lead + 1
    roots = []
    dg = derivative(g)
    for r in range(ell):
        if evaluate_mod(g, r, ell):
            continue
        mod = ell
        while mod < bound:
            mod = mod * mod
            r = (r - evaluate_mod(g, r, mod) * pow(evaluate_mod(dg, r, mod), -1, mod)) % mod
        x = _rational_reconstruct(r, mod, c0, lead)
        if x is not None and _is_root(g, x):
            roots.append(x)
    return roots


def rational_roots(
    f, max_candidates: int = 200_000, max_primes: int = 500, size_limit: int = 10**24
) -> tuple[list[Fraction], str]:
    """All distinct rational roots of f, with the method used.

    Divisor enumeration is tried first; when the coefficients cannot be
    factored within budget, roots are found mod a small prime, Hensel-lifted
    and rationally reconstructed.  Both routes are complete.
    """
    f = primitive(f)
    roots: list[Fraction] = []
    if not f:
        raise ValueError("the zero polynomial has every number as a root")
    k = 0
    while f[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
        f = f[k:]
    if len(f) == 1:
        return roots, "trivial"
    try:
        found, method = _roots_by_divisors(f, max_candidates, size_limit), "divisors"
    except FactoringBudgetExceeded:
        found, method = _roots_by_hensel(f, max_primes), "hensel"
    return sorted(set(roots + found)), method
