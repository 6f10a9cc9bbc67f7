"""End-to-end check: local p^n-divisibility along S against the exact global oracle."""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .core_arith import DomainError, is_prime
from .divisibility import GlobalVerdict, Inconclusive, LocalVerdict, global_divide, local_divide_test
from .elliptic import RationalCurve, RationalPoint, format_curve, format_point
from .frobenius_sets import PersistentSetSpec, enumerate_set
from .padic_sets import Membership

DEFAULT_SAMPLE = 50
SET_ASSUMPTION = "S is the persistent set P_{Q_inf/Q}(A); stability for K_n^ab(p)/Q is assumed, not checked"


class EmptySample(RuntimeError):
    pass


@dataclass(frozen=True)
class BdBound:
    """B(d) = 3 for d = 1, else (3^(d/2) + 1)^2 = 3^d + 2*sqrt(3^d) + 1.

    ``integer_part`` and ``radicand`` hold the exact value integer_part + 2*sqrt(radicand);
    radicand is 0 whenever B(d) is an integer.
    """

    d: int
    integer_part: int
    radicand: int

    @property
    def value(self) -> int | None:
        return self.integer_part if self.radicand == 0 else None

    def exceeded_by(self, p: int) -> bool:
        """Exact test of p > B(d)."""
        if self.radicand == 0:
            return p > self.integer_part
        lhs = p - self.integer_part
        return lhs > 0 and lhs * lhs > 4 * self.radicand

    def __str__(self) -> str:
        if self.radicand == 0:
            return str(self.integer_part)
        return f"{self.integer_part} + 2*sqrt({self.radicand})"


def b_bound(d: int) -> BdBound:
    if d < 1:
        raise DomainError("degree must be >= 1")
    if d == 1:
        return BdBound(1, 3, 0)
    if d % 2 == 0:
        return BdBound(d, (3 ** (d // 2) + 1) ** 2, 0)
    return BdBound(d, 3**d + 1, 3**d)


def theorem_applicable(p: int, n: int, d: int = 1) -> bool:
    """n = 1 always; n > 1 needs p > B(d)."""
    return n == 1 or b_bound(d).exceeded_by(p)


@dataclass
class DivisibilityReport:
    curve: RationalCurve
    point: RationalPoint
    p: int
    n: int
    spec: PersistentSetSpec
    limit: int
    local: list[LocalVerdict]
    skipped: list[tuple[int, str]]
    global_status: str  # "divisible" | "not divisible" | "inconclusive"
    global_preimage: RationalPoint = None
    global_method: str = ""
    theorem_applicable: bool = False
    assumptions: list[str] = field(default_factory=list)

    @property
    def all_local_divisible(self) -> bool:
        return all(v.divisible for v in self.local)

    @property
    def theorem_prediction(self) -> str:
        if not self.all_local_divisible:
            return "not divisible (local obstruction)"
        if self.theorem_applicable:
            return "divisible"
        return "no prediction"

    @property
    def consistent(self) -> bool:
        if self.global_status == "divisible" and not self.all_local_divisible:
            return False
        if self.all_local_divisible and self.theorem_applicable and self.global_status == "not divisible":
            return False
        return True

    def to_dict(self) -> dict:
        return {
            "curve": format_curve(self.curve),
            "point": format_point(self.point),
            "p": self.p,
            "n": self.n,
            "set": str(self.spec.record),
            "limit": self.limit,
            "local_evidence": f"sampled ({len(self.local)} primes)",
            "local": [
                {
                    "ell": v.ell,
                    "divisible": v.divisible,
                    "method": v.method,
                    "witness": None if v.witness is None else list(v.witness),
                }
                for v in self.local
            ],
            "skipped": [{"ell": q, "reason": why} for q, why in self.skipped],
            "global": {
                "status": self.global_status,
                "method": self.global_method,
                "preimage": format_point(self.global_preimage) if self.global_status == "divisible" else None,
            },
            "theorem_applicable": self.theorem_applicable,
            "theorem_prediction": self.theorem_prediction,
            "consistent": self.consistent,
            "assumptions": self.assumptions,
        }

    def to_text(self) -> str:
        lines = [
            f"curve      {format_curve(self.curve)}",
            f"point      {format_point(self.point)}",
            f"divisor    {self.p}^{self.n}",
            f"set        {self.spec.record}  (primes <= {self.limit})",
            "",
            f"{'ell':>8}  {'divisible':<9}  method",
        ]
        for v in self.local:
            lines.append(f"{v.ell:>8}  {str(v.divisible):<9}  {v.method}")
        if self.skipped:
            lines.append("skipped    " + ", ".join(f"{q} ({why})" for q, why in self.skipped))
        lines += [
            "",
            f"local evidence      sampled, {len(self.local)} primes, all divisible: {self.all_local_divisible}",
            f"global oracle       {self.global_status}"
            + (f" via {self.global_method}" if self.global_method else ""),
        ]
        if self.global_status == "divisible":
            lines.append(f"global preimage     {format_point(self.global_preimage)}")
        lines += [
            f"theorem applicable  {self.theorem_applicable}",
            f"theorem prediction  {self.theorem_prediction}",
            f"consistent          {self.consistent}",
        ]
        lines += [f"assumption          {a}" for a in self.assumptions]
        return "\n".join(lines)


def _local_job(args):
    E, P, p, n, ell = args
    return local_divide_test(E, P, p, n, ell)


def select_primes(E: RationalCurve, p: int, spec: PersistentSetSpec, limit: int, sample: int):
    """First ``sample`` admissible primes of S up to ``limit``, and what was skipped."""
    disc = E.integral_discriminant
    chosen, skipped = [], []
    for q, verdict in enumerate_set(spec, limit):
        if len(chosen) >= sample:
            break
        if verdict is Membership.OUT:
            continue
        if verdict is Membership.UNKNOWN:
            skipped.append((q, "membership unknown at this depth"))
        elif q == 2:
            skipped.append((q, "ell = 2"))
        elif q == p:
            skipped.append((q, "ell = p"))
        elif disc % q == 0:
            skipped.append((q, "bad reduction"))
        else:
            chosen.append(q)
    return chosen, skipped


def run_check(
    E: RationalCurve,
    P: RationalPoint,
    p: int,
    n: int,
    spec: PersistentSetSpec,
    limit: int = 10_000,
    sample: Optional[int] = DEFAULT_SAMPLE,
    workers: int = 1,
) -> DivisibilityReport:
    if not is_prime(p) or n < 1:
        raise DomainError("need a prime p and n >= 1")
    if not E.is_on(P):
        raise DomainError(f"{format_point(P)} is not on {E}")
    chosen, skipped = select_primes(E, p, spec, limit, sample if sample is not None else math.inf)
    if not chosen:
        raise EmptySample(f"no admissible primes of S up to {limit}")
    jobs = [(E, P, p, n, ell) for ell in chosen]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            local = list(pool.map(_local_job, jobs))
    else:
        local = [_local_job(j) for j in jobs]
    try:
        g: GlobalVerdict = global_divide(E, P, p, n)
        status = "divisible" if g.divisible else "not divisible"
        pre, method = g.preimage, g.method
    except Inconclusive:
        status, pre, method = "inconclusive", None, "budget exhausted"
    assumptions = [SET_ASSUMPTION]
    if n > 1:
        assumptions.append("H^1_loc(Gal(K_n/Q), E[p^n]) = 0 is taken from the literature for p > B(1), not computed")
    return DivisibilityReport(
        E, P, p, n, spec, limit, local, skipped, status, pre, method,
        theorem_applicable(p, n), assumptions,
    )


# ---------------------------------------------------------------------------
# soundness sweep

@dataclass
class SweepRow:
    index: int
    curve: str
    point: str
    p: int
    n: int
    local_tested: int
    local_ok: bool
    preimage_ok: bool
    consistent: bool

    @property
    def passed(self) -> bool:
        return self.local_ok and self.preimage_ok and self.consistent


def random_instance(rng: random.Random, bound: int = 5):
    """A small curve through an integral point Q."""
    while True:
        x0, y0, a = rng.randint(-bound, bound), rng.randint(1, bound), rng.randint(-bound, bound)
        b = y0 * y0 - x0**3 - a * x0
        if 4 * a**3 + 27 * b * b == 0:
            continue
        E = RationalCurve(a, b)
        return E, E.point(x0, y0)


def soundness_sweep(
    count: int = 20,
    seed: int = 0,
    primes=(2, 3, 5),
    exponents=(1, 2),
    spec: PersistentSetSpec | None = None,
    limit: int = 10_000,
    sample: int = DEFAULT_SAMPLE,
) -> list[SweepRow]:
    """Check constructed divisible points P = p^n Q end to end."""
    spec = spec or PersistentSetSpec(5)
    rng = random.Random(seed)
    rows = []
    for i in range(count):
        E, Q = random_instance(rng)
        p, n = rng.choice(primes), rng.choice(exponents)
        P = E.mul(p**n, Q)
        report = run_check(E, P, p, n, spec, limit, sample)
        pre_ok = report.global_status == "divisible" and E.mul(p**n, report.global_preimage) == P
        rows.append(
            SweepRow(i, format_curve(E), format_point(Q), p, n, len(report.local),
                     report.all_local_divisible, pre_ok, report.consistent)
        )
    return rows


def format_sweep(rows: list[SweepRow]) -> str:
    head = f"{'#':>3}  {'curve':<16} {'Q':<14} {'p^n':<5} {'tested':>6}  local  global  consistent  result"
    lines = [head]
    for r in rows:
        lines.append(
            f"{r.index:>3}  {r.curve:<16} {r.point:<14} {f'{r.p}^{r.n}':<5} {r.local_tested:>6}  "
            f"{'ok' if r.local_ok else 'FAIL':<5}  {'ok' if r.preimage_ok else 'FAIL':<6}  "
            f"{str(r.consistent):<10}  {'pass' if r.passed else 'FAIL'}"
        )
    passed = sum(r.passed for r in rows)
    lines.append(f"{passed}/{len(rows)} passed")
    return "\n".join(lines)
