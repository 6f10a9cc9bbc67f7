from fractions import Fraction

import pytest

from localglobal.core_arith import DomainError, prime_sieve
from localglobal.frobenius_sets import (
    PersistentSetSpec,
    chebotarev_filter,
    enumerate_set,
    enumerate_with_coordinates,
    estimate_density,
    frobenius_coordinate,
    in_persistent_set,
    parse_filter,
)
from localglobal.padic_sets import ConstantDigit, Membership


def brute_log(u, p, N):
    mod = p ** (N + 1)
    return next(x for x in range(p**N) if pow(1 + p, x, mod) == u % mod)


def test_coordinate_examples():
    spec = PersistentSetSpec(5, depth=2)
    assert frobenius_coordinate(7, spec) == 5
    q = next(q for q in range(6, 10**5, 125) if q > 6 and all(q % d for d in range(2, int(q**0.5) + 1)))
    # q^4 = 6^4 = (1+5)^4, so the coordinate is 4 (log of q itself would be 1)
    assert frobenius_coordinate(q, spec) == 4
    # q = 1 mod 5^(N+1) gives coordinate 0
    q1 = next(q for q in range(126, 10**5, 125) if all(q % d for d in range(2, int(q**0.5) + 1)))
    assert frobenius_coordinate(q1, spec) == 0
    with pytest.raises(DomainError):
        frobenius_coordinate(10, spec)


@pytest.mark.parametrize("p, N", [(3, 3), (5, 2), (5, 3), (7, 2)])
def test_coordinate_matches_brute_force(p, N):
    spec = PersistentSetSpec(p, depth=N)
    for q in prime_sieve(3000):
        if q != p:
            assert frobenius_coordinate(q, spec) == brute_log(pow(q, p - 1, p ** (N + 1)), p, N)


def test_membership_examples():
    spec = PersistentSetSpec(5, depth=4)
    assert in_persistent_set(7, spec) is Membership.IN
    assert in_persistent_set(5, spec) is Membership.OUT
    # 11: valuation-0 digit of its coordinate is not 1
    x = frobenius_coordinate(11, spec)
    assert x % 5 not in (0, 1)
    assert in_persistent_set(11, spec) is Membership.OUT
    unknown = [q for q in prime_sieve(10**5) if q != 5 and pow(q, 4, 5**5) == 1]
    assert unknown and all(in_persistent_set(q, spec) is Membership.UNKNOWN for q in unknown)


def test_enumerate_small():
    spec = PersistentSetSpec(5, depth=4)
    rows = enumerate_set(spec, 20)
    assert [q for q, _ in rows] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert dict(rows)[5] is Membership.OUT
    assert enumerate_set(spec, 1) == []


def test_unknown_count_bound():
    spec = PersistentSetSpec(5, depth=2)
    rows = enumerate_set(spec, 50_000)
    bound = sum(1 for q in prime_sieve(50_000) if q != 5 and pow(q, 4, 125) == 1)
    assert sum(v is Membership.UNKNOWN for _, v in rows) <= bound


def test_workers_agree():
    spec = PersistentSetSpec(7, depth=5)
    assert enumerate_with_coordinates(spec, 30_000, workers=1) == enumerate_with_coordinates(spec, 30_000, workers=2)


def test_filters():
    f = chebotarev_filter(4, [1])
    assert [q for q in prime_sieve(30) if f(q)] == [5, 13, 17, 29]
    assert all(chebotarev_filter(1, [0])(q) for q in prime_sieve(100))
    assert parse_filter("1mod7") == chebotarev_filter(7, [1])
    assert parse_filter("1,2,4mod7").residues == frozenset({1, 2, 4})
    with pytest.raises(DomainError):
        parse_filter("1mod")
    with pytest.raises(DomainError):
        chebotarev_filter(6, [2])


def test_dirichlet_sanity():
    ps = prime_sieve(2_000_000)
    f = parse_filter("1mod7")
    assert abs(sum(map(f, ps)) / len(ps) - Fraction(1, 6)) < 0.01


def test_density_estimate_fields():
    spec = PersistentSetSpec(5)
    est = estimate_density(spec, 100_000)
    d = est.as_dict()
    assert set(d) == {"numerator", "denominator", "ratio_num", "ratio_den", "unknown", "limit"}
    assert Fraction(d["ratio_num"], d["ratio_den"]) == Fraction(est.numerator, est.denominator)
    assert abs(est.ratio - Fraction(1, 4)) < 0.02


def test_spec_validation():
    with pytest.raises(DomainError):
        PersistentSetSpec(2)
    with pytest.raises(DomainError):
        PersistentSetSpec(5, epsilon=Fraction(1, 5))
    s = PersistentSetSpec.for_epsilon(Fraction(1, 10))
    assert s.p == 13 and Fraction(1, s.p - 1) < Fraction(1, 10)
    assert PersistentSetSpec(5).measure == (1 - Fraction(1, 5**8)) / 4
    assert str(PersistentSetSpec(5, ConstantDigit(2), 3).record) == "p=5 rule=const:2 depth=3"
