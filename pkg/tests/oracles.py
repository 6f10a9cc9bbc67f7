"""Brute-force reference computations shared by the unit and acceptance tests."""

from __future__ import annotations

import itertools
import random

import numpy as np

from localglobal.core_arith import legendre_symbol, prime_sieve
from localglobal.elliptic import RationalCurve, ReducedCurve
from localglobal.pipeline import random_instance


def torsion_abscissae(Er: ReducedCurve, m: int) -> set[int]:
    """x in F_ell of nonzero m-torsion points of E or of its quadratic twist.

    A root x of psi_m (odd m) has its y either in F_ell or in the quadratic
    extension; the second case is a point of the twist y^2 = x^3 + a d^2 x + b d^3
    at abscissa d*x, for a non-residue d.
    """
    ell = Er.ell
    d = next(t for t in range(2, ell) if legendre_symbol(t, ell) == -1)
    twist = ReducedCurve(Er.a * d * d % ell, Er.b * d**3 % ell, ell)
    xs = set()
    for P in Er.points():
        if P is not None and Er.mul(m, P) is None:
            xs.add(P[0])
    dinv = pow(d, -1, ell)
    for P in twist.points():
        if P is not None and twist.mul(m, P) is None:
            xs.add(P[0] * dinv % ell)
    return xs


def curve_torsion_abscissae(Er: ReducedCurve, m: int) -> set[int]:
    return {P[0] for P in Er.points() if P is not None and Er.mul(m, P) is None}


def random_curves_mod(rng: random.Random, count: int, ell_max: int = 50):
    """Random (E over Q, good prime 3 <= ell <= ell_max)."""
    out = []
    while len(out) < count:
        a, b = rng.randint(-20, 20), rng.randint(-20, 20)
        disc = 4 * a**3 + 27 * b * b
        if disc == 0:
            continue
        ells = [q for q in prime_sieve(ell_max)[1:] if disc % q]
        out.append((RationalCurve(a, b), rng.choice(ells)))
    return out


def random_local_instances(rng: random.Random, count: int, ell_max: int = 1000):
    """(E, P, p, n, ell) with P = k*Q for a small integral Q and random k."""
    primes = prime_sieve(ell_max)[1:]
    out = []
    while len(out) < count:
        E, Q = random_instance(rng)
        P = E.mul(rng.randint(1, 12), Q)
        p, n = rng.choice([2, 3, 5]), rng.choice([1, 2])
        disc = E.integral_discriminant
        ells = [q for q in primes if q != p and disc % q]
        out.append((E, P, p, n, rng.choice(ells)))
    return out


# ---------------------------------------------------------------------------
# cohomology by exhaustive search

def _module_elements(q: int, rank: int):
    return [np.array(v, dtype=np.int64) for v in itertools.product(range(q), repeat=rank)]


def brute_cocycles(M):
    """Every 1-cocycle G -> M, each as a (g, r) array, by extending generator values."""
    G, q, A = M.group, M.modulus, M.action
    gens = G.generating_set()
    elements = _module_elements(q, M.rank)
    out = []
    for values in itertools.product(elements, repeat=len(gens)):
        c = {G.identity: np.zeros(M.rank, dtype=np.int64)}
        frontier = [G.identity]
        ok = True
        while frontier and ok:
            h = frontier.pop()
            for s, cs in zip(gens, values):
                # c(s h) = c(s) + s.c(h)
                sh = G.mul(s, h)
                val = (cs + A[s] @ c[h]) % q
                if sh in c:
                    if not np.array_equal(c[sh], val):
                        ok = False
                        break
                else:
                    c[sh] = val
                    frontier.append(sh)
        if not ok:
            continue
        table = np.array([c[x] for x in range(G.order)])
        # full cocycle identity as a final check
        good = all(
            np.array_equal(table[G.mul(x, y)], (table[x] + A[x] @ table[y]) % q)
            for x in range(G.order)
            for y in range(G.order)
        )
        if good:
            out.append(table)
    return out


def brute_coboundaries(M):
    q, A = M.modulus, M.action
    seen = set()
    for m in _module_elements(q, M.rank):
        table = (np.einsum("gij,j->gi", A, m) - m) % q
        seen.add(table.tobytes())
    return seen


def brute_h1_orders(M, p_only: bool = False):
    """(|Z^1|, |B^1|, |H^1|, |H^1_loc|) by enumeration."""
    from localglobal.cohomology import cyclic_subgroups

    G, q, A = M.group, M.modulus, M.action
    Z = brute_cocycles(M)
    B = brute_coboundaries(M)
    images = {}
    for m in _module_elements(q, M.rank):
        for x in range(G.order):
            images.setdefault(x, set()).add(tuple((A[x] @ m - m) % q))
    gens = []
    for C in cyclic_subgroups(G, M.p, p_only):
        gens.append(next(x for x in sorted(C) if G.element_order(x) == len(C)))
    local = [c for c in Z if all(tuple(c[x]) in images[x] for x in gens)]
    return len(Z), len(B), len(Z) // len(B), len(local) // len(B)
