"""H^1 and the locally trivial part H^1_loc for finite groups acting on (Z/p^n)^r.

A 1-cocycle is stored by its values on a generating set S of G.  Walking the
Cayley graph expresses every c(g) as a linear function E[g] of those values,
and the cocycle identity reduces to c(s g) = c(s) + s.c(g) for s in S.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core_arith import (
    DomainError,
    echelon_mod,
    smith_normal_form,
    unimodular_inverse,
)

MAX_CLOSURE = 10**5
MAX_TABLE = 4096


class GroupTooLarge(DomainError):
    pass


class FiniteGroupTable:
    """A finite group given by its multiplication table on indices 0..g-1."""

    def __init__(self, table, identity: int = 0, check: bool = True):
        self.table = np.asarray(table, dtype=np.int64)
        g = self.table.shape[0]
        if self.table.shape != (g, g):
            raise DomainError("multiplication table must be square")
        self.order = g
        self.identity = identity
        inv = np.full(g, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.table == identity)
        inv[rows] = cols
        self.inverse = inv
        if check:
            self._check()

    def _check(self) -> None:
        T, e, g = self.table, self.identity, self.order
        ar = np.arange(g)
        if not (np.array_equal(T[e], ar) and np.array_equal(T[:, e], ar)):
            raise DomainError("identity law fails")
        if (self.inverse < 0).any() or not np.array_equal(T[ar, self.inverse], np.full(g, e)):
            raise DomainError("some element has no inverse")
        if g <= 64:
            if not np.array_equal(T[T], T[:, T]):
                raise DomainError("table is not associative")
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, g, size=(3, 4096))
            if not np.array_equal(T[T[a, b], c], T[a, T[b, c]]):
                raise DomainError("table is not associative")

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.table[y, x]
            k += 1
        return k

    def closure(self, gens) -> frozenset:
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            h = queue.popleft()
            for s in gens:
                t = int(self.table[s, h])
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return frozenset(seen)

    def generating_set(self, elements=None) -> list[int]:
        """A small generating set of the subgroup ``elements`` (default: G)."""
        elements = range(self.order) if elements is None else sorted(elements)
        by_order = sorted(elements, key=lambda x: (-self.element_order(x), x))
        gens: list[int] = []
        H = frozenset({self.identity})
        for x in by_order:
            if x not in H:
                gens.append(x)
                H = self.closure(gens)
        return gens

    @classmethod
    def cyclic(cls, m: int) -> "FiniteGroupTable":
        ar = np.arange(m)
        return cls((ar[:, None] + ar[None, :]) % m)

    @classmethod
    def symmetric3(cls) -> "FiniteGroupTable":
        import itertools

        perms = list(itertools.permutations(range(3)))
        idx = {p: i for i, p in enumerate(perms)}
        table = [[idx[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]
        return cls(table)

    def direct_product(self, other: "FiniteGroupTable") -> "FiniteGroupTable":
        g, h = self.order, other.order
        a = np.arange(g * h)
        i, j = a // h, a % h
        table = self.table[i[:, None], i[None, :]] * h + other.table[j[:, None], j[None, :]]
        return FiniteGroupTable(table, self.identity * h + other.identity)


def _encode(mats: np.ndarray, q: int) -> np.ndarray:
    flat = mats.reshape(len(mats), -1)
    weights = q ** np.arange(flat.shape[1], dtype=np.int64)
    return flat @ weights


def matrix_group(generators, modulus: int, max_order: int | None = None) -> tuple[FiniteGroupTable, np.ndarray]:
    """Close a list of r x r matrices mod ``modulus`` under multiplication.

    Returns the group table and the (g, r, r) array of matrices, identity first.
    Raises GroupTooLarge as soon as the closure passes ``max_order``.
    """
    cap = MAX_CLOSURE if max_order is None else min(max_order, MAX_CLOSURE)
    gens = [np.asarray(m, dtype=np.int64) % modulus for m in generators]
    if not gens:
        raise DomainError("need at least one generator")
    r = gens[0].shape[0]
    if any(m.shape != (r, r) for m in gens):
        raise DomainError("generators must be square matrices of one size")
    if modulus ** (r * r) >= 2**62:
        raise DomainError("matrix size too large for table encoding")
    for m in gens:
        if math.gcd(_int_det(m), modulus) != 1:
            raise DomainError(f"generator {m.tolist()} is not invertible mod {modulus}")
    ident = np.eye(r, dtype=np.int64)
    elems = [ident]
    seen = {ident.tobytes()}
    queue = deque([ident])
    while queue:
        h = queue.popleft()
        for s in gens:
            t = s @ h % modulus
            key = t.tobytes()
            if key not in seen:
                seen.add(key)
                elems.append(t)
                queue.append(t)
                if len(elems) > cap:
                    raise GroupTooLarge(f"group closure exceeds {cap} elements")
    mats = np.array(elems)
    g = len(mats)
    if g > MAX_TABLE:
        raise GroupTooLarge(f"group of order {g} is too large for a table (max {MAX_TABLE})")
    codes = _encode(mats, modulus)
    order = np.argsort(codes)
    prods = np.einsum("aij,bjk->abik", mats, mats) % modulus
    pc = _encode(prods.reshape(g * g, r, r), modulus)
    table = order[np.searchsorted(codes[order], pc)].reshape(g, g)
    return FiniteGroupTable(table, 0), mats


def _int_det(m) -> int:
    rows = [[int(x) for x in row] for row in m]
    if len(rows) == 1:
        return rows[0][0]
    return sum(
        (-1) ** j * rows[0][j] * _int_det([row[:j] + row[j + 1 :] for row in rows[1:]])
        for j in range(len(rows))
    )


class GModule:
    """M = (Z/p^n)^r with G acting through one matrix per group element."""

    def __init__(self, group: FiniteGroupTable, p: int, n: int, action):
        self.group = group
        self.p, self.n = p, n
        self.modulus = p**n
        self.action = np.asarray(action, dtype=np.int64) % self.modulus
        g, r, r2 = self.action.shape
        if g != group.order or r != r2:
            raise DomainError("need one r x r matrix per group element")
        self.rank = r
        q = self.modulus
        if not np.array_equal(self.action[group.identity], np.eye(r, dtype=np.int64)):
            raise DomainError("identity must act trivially")
        for x in range(g):
            if math.gcd(_int_det(self.action[x]), p) != 1:
                raise DomainError(f"action matrix of element {x} is not invertible")
        lhs = self.action[group.table]
        rhs = np.einsum("aij,bjk->abik", self.action, self.action) % q
        if not np.array_equal(lhs, rhs):
            raise DomainError("action is not a homomorphism")

    @classmethod
    def from_matrix_group(cls, generators, p: int, n: int) -> "GModule":
        G, mats = matrix_group(generators, p**n)
        return cls(G, p, n, mats)

    @classmethod
    def trivial(cls, group: FiniteGroupTable, p: int, n: int, rank: int = 1) -> "GModule":
        return cls(group, p, n, np.broadcast_to(np.eye(rank, dtype=np.int64), (group.order, rank, rank)))

    @cached_property
    def _complex(self) -> "_CochainCoordinates":
        return _CochainCoordinates(self)


# ---------------------------------------------------------------------------
# linear algebra over Z/p^n


@dataclass(frozen=True)
class _Basis:
    """Submodule of (Z/q)^c as a direct sum of cyclic groups <gens[i]>."""

    gens: list
    orders: list
    inv_rows: list
    scales: list
    modulus: int

    def coords(self, v) -> list[int]:
        q = self.modulus
        out = []
        for row, s in zip(self.inv_rows, self.scales):
            w = sum(a * b for a, b in zip(row, v)) % q
            if w % s:
                raise ArithmeticError("vector is not in the submodule")
            out.append(w // s)
        return out

    @property
    def size(self) -> int:
        return math.prod(self.orders)


def _solve(rows, ncols: int, q: int) -> _Basis:
    """Solution module of rows @ v = 0 over Z/q."""
    H = echelon_mod(rows, ncols, q)
    if ncols == 0:
        return _Basis([], [], [], [], q)
    if not H:
        I = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
        return _Basis(I, [q] * ncols, I, [1] * ncols, q)
    snf = smith_normal_form(H)
    Vinv = unimodular_inverse(snf.V)
    gens, orders, inv_rows, scales = [], [], [], []
    for i in range(ncols):
        d = snf.divisors[i] if i < len(snf.divisors) else 0
        order = math.gcd(d, q) if d else q
        if order == 1:
            continue
        s = q // order
        gens.append([s * snf.V[r][i] % q for r in range(ncols)])
        orders.append(order)
        inv_rows.append(Vinv[i])
        scales.append(s)
    return _Basis(gens, orders, inv_rows, scales, q)


def _quotient(Z: _Basis, vectors) -> tuple[list[int], list[list[int]]]:
    """Invariant factors and generator vectors of Z / <vectors>."""
    k = len(Z.orders)
    if k == 0:
        return [], []
    rel = [Z.coords(v) for v in vectors]
    R = [[rel[j][i] for j in range(len(rel))] + [Z.orders[i] * (i == t) for t in range(k)] for i in range(k)]
    snf = smith_normal_form(R)
    Uinv = unimodular_inverse(snf.U)
    divisors, gens = [], []
    q = Z.modulus
    for i, d in enumerate(snf.divisors):
        if d == 1:
            continue
        coeff = [Uinv[j][i] for j in range(k)]
        vec = [sum(c * z[t] for c, z in zip(coeff, Z.gens)) % q for t in range(len(Z.gens[0]))]
        divisors.append(d)
        gens.append(vec)
    return divisors, gens


def _span(vectors, ncols: int, q: int) -> tuple[list[list[int]], list[int]]:
    """Subgroup of (Z/q)^ncols generated by ``vectors`` as a direct sum of cyclics."""
    if ncols == 0:
        return [], []
    B = [[v[i] for v in vectors] + [q * (i == j) for j in range(ncols)] for i in range(ncols)]
    snf = smith_normal_form(B)
    Uinv = unimodular_inverse(snf.U)
    gens, orders = [], []
    for i, d in enumerate(snf.divisors):
        if d == q:
            continue
        gens.append([d * Uinv[r][i] % q for r in range(ncols)])
        orders.append(q // d)
    return gens, orders


def _in_image_rows(T: list[list[int]], X: np.ndarray, q: int) -> list[list[int]]:
    """Linear conditions on v equivalent to X @ v lying in the image of T mod q."""
    snf = smith_normal_form(T)
    UX = np.array(snf.U, dtype=object) @ np.asarray(X, dtype=object)
    rows = []
    for i in range(len(T)):
        d = snf.divisors[i] if i < len(snf.divisors) else 0
        g = math.gcd(d, q) if d else q
        if g == 1:
            continue
        rows.append([int(x) * (q // g) % q for x in UX[i]])
    return rows


class _CochainCoordinates:
    def __init__(self, M: GModule):
        self.M = M
        G = M.group
        self.q = q = M.modulus
        r = M.rank
        self.gens = G.generating_set()
        k = len(self.gens)
        self.ncols = k * r
        E = np.zeros((G.order, r, k * r), dtype=np.int64)
        filled = np.zeros(G.order, dtype=bool)
        filled[G.identity] = True
        queue = deque([G.identity])
        sel = []
        for i in range(k):
            S = np.zeros((r, k * r), dtype=np.int64)
            S[:, i * r : (i + 1) * r] = np.eye(r, dtype=np.int64)
            sel.append(S)
        while queue:
            h = queue.popleft()
            for i, s in enumerate(self.gens):
                t = G.table[s, h]
                if not filled[t]:
                    E[t] = (sel[i] + M.action[s] @ E[h]) % q
                    filled[t] = True
                    queue.append(t)
        self.E = E
        rows = []
        for h in range(G.order):
            for i, s in enumerate(self.gens):
                t = G.table[s, h]
                rows.extend(((E[t] - sel[i] - M.action[s] @ E[h]) % q).tolist())
        self.cocycle_rows = rows

    def cocycle(self, v) -> np.ndarray:
        """Full table (g, r) of the cocycle with generator values v."""
        return self.E @ np.asarray(v, dtype=np.int64) % self.q

    def coboundaries(self) -> list[list[int]]:
        M, r = self.M, self.M.rank
        out = []
        for j in range(r):
            e = np.zeros(r, dtype=np.int64)
            e[j] = 1
            out.append([int(x) for s in self.gens for x in (M.action[s] @ e - e) % self.q])
        return out

    def restriction_trivial_rows(self, subgroup_gens) -> list[list[int]]:
        """Conditions for c restricted to <subgroup_gens> to be a coboundary there."""
        if not subgroup_gens:
            return []
        r, M = self.M.rank, self.M
        eye = np.eye(r, dtype=np.int64)
        T = np.vstack([(M.action[s] - eye) % self.q for s in subgroup_gens]).tolist()
        X = np.vstack([self.E[s] for s in subgroup_gens])
        return _in_image_rows(T, X, self.q)

    def quotient_by_coboundaries(self, extra_rows=()) -> "CohomologyResult":
        Z = _solve(self.cocycle_rows + list(extra_rows), self.ncols, self.q)
        divisors, vecs = _quotient(Z, self.coboundaries())
        gens = [self.cocycle(v) for v in vecs]
        return CohomologyResult(divisors, [tuple(map(tuple, c.tolist())) for c in gens])


# ---------------------------------------------------------------------------
# public operations


@dataclass(frozen=True)
class CohomologyResult:
    divisors: list[int]
    generators: list

    @property
    def order(self) -> int:
        return math.prod(self.divisors)

    @property
    def is_zero(self) -> bool:
        return not self.divisors


@dataclass(frozen=True)
class ModuleSpace:
    """A subgroup of the cochains, as generator cocycles with their orders."""

    generators: list
    orders: list[int]

    @property
    def order(self) -> int:
        return math.prod(self.orders)


def cocycle_space(M: GModule) -> ModuleSpace:
    cx = M._complex
    Z = _solve(cx.cocycle_rows, cx.ncols, cx.q)
    return ModuleSpace([cx.cocycle(v) for v in Z.gens], list(Z.orders))


def coboundary_space(M: GModule) -> ModuleSpace:
    """B^1 = image of m -> (g -> g.m - m)."""
    cx = M._complex
    gens, orders = _span(cx.coboundaries(), cx.ncols, cx.q)
    return ModuleSpace([cx.cocycle(v) for v in gens], orders)


def h1(M: GModule) -> CohomologyResult:
    return M._complex.quotient_by_coboundaries()


def cyclic_subgroups(G: FiniteGroupTable, p: int | None = None, p_only: bool = False) -> list[frozenset]:
    """Distinct cyclic subgroups <x>; with p_only, those of p-power order."""
    found: dict[frozenset, None] = {}
    for x in range(G.order):
        C = G.closure([x])
        if p_only and not _is_power_of(len(C), p):
            continue
        found.setdefault(C, None)
    return sorted(found, key=lambda C: (len(C), sorted(C)))


def _is_power_of(m: int, p: int) -> bool:
    while m % p == 0:
        m //= p
    return m == 1


def h1_loc(M: GModule, p_only: bool = False) -> CohomologyResult:
    """Classes in H^1 whose restriction to every cyclic (p-)subgroup vanishes."""
    cx, G = M._complex, M.group
    rows = []
    for C in cyclic_subgroups(G, M.p, p_only):
        gen = next(x for x in sorted(C) if G.element_order(x) == len(C))
        if gen != G.identity:
            rows += cx.restriction_trivial_rows([gen])
    return cx.quotient_by_coboundaries(rows)


def sylow_subgroup(G: FiniteGroupTable, p: int) -> frozenset:
    P = frozenset({G.identity})
    p_elements = [x for x in range(G.order) if _is_power_of(G.element_order(x), p)]
    changed = True
    while changed:
        changed = False
        for x in p_elements:
            if x in P:
                continue
            Q = G.closure(list(P) + [x])
            if _is_power_of(len(Q), p):
                P, changed = Q, True
    return P


def is_cyclic(G: FiniteGroupTable, elements) -> bool:
    n = len(elements)
    return any(G.element_order(x) == n for x in elements)


def check_p_cyclic_equivalence(M: GModule) -> bool:
    """Locally trivial classes agree whether tested on all cyclic subgroups or only cyclic p-subgroups."""
    return h1_loc(M, p_only=False).order == h1_loc(M, p_only=True).order


def check_sylow_injectivity(M: GModule) -> bool:
    """Restriction H^1(G, M) -> H^1(G_p, M) has trivial kernel."""
    cx, G = M._complex, M.group
    P = sylow_subgroup(G, M.p)
    rows = cx.restriction_trivial_rows(G.generating_set(P))
    return cx.quotient_by_coboundaries(rows).is_zero


def random_subgroup_modules(
    rng: random.Random, p: int, n: int, rank: int, count: int, max_order: int | None = None, patience: int = 500
):
    """Distinct matrix groups generated by random pairs in GL_rank(Z/p^n).

    Stops early after ``patience`` draws in a row bring nothing new, so the
    result can be shorter than ``count`` when the ambient group has few subgroups.
    """
    q = p**n
    seen, out = set(), []
    stale = 0
    while len(out) < count and stale < patience:
        stale += 1
        gens = []
        for _ in range(2):
            while True:
                m = np.array([[rng.randrange(q) for _ in range(rank)] for _ in range(rank)])
                if math.gcd(_int_det(m), p) == 1:
                    break
            gens.append(m)
        if rng.random() < 0.5:
            # powers thin the pair out, so smaller subgroups show up too
            gens = [np.linalg.matrix_power(m, rng.randrange(1, 7)) % q for m in gens]
        try:
            G, mats = matrix_group(gens, q, max_order)
        except GroupTooLarge:
            continue
        key = frozenset(m.tobytes() for m in mats)
        if key in seen:
            continue
        seen.add(key)
        stale = 0
        out.append(GModule(G, p, n, mats))
    return out
