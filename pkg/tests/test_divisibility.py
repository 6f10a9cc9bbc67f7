import random
from fractions import Fraction

import pytest

from localglobal import poly
from localglobal.core_arith import DomainError, legendre_symbol, prime_sieve
from localglobal.divisibility import (
    BadPrime,
    division_polynomial,
    global_divide,
    local_divide_test,
    multiplication_by,
)
from localglobal.elliptic import RationalCurve

from oracles import curve_torsion_abscissae, random_curves_mod, random_local_instances, torsion_abscissae

F = Fraction


def test_small_division_polynomials(e_x3_plus_1):
    assert division_polynomial(e_x3_plus_1, 1).poly == (1,)
    assert division_polynomial(e_x3_plus_1, 3).poly == (0, 12, 0, 0, 3)
    with pytest.raises(DomainError):
        division_polynomial(e_x3_plus_1, 0)


def test_degrees():
    E = RationalCurve(-7, 10)
    for m in range(1, 14):
        d = division_polynomial(E, m)
        if m % 2:
            assert d.degree == (m * m - 1) // 2
        else:
            # psi_m / y has degree (m^2 - 4) / 2
            assert d.degree == (m * m - 4) // 2
        assert poly.degree(d.squared) == m * m - 1


def test_multiplication_map_on_points():
    E = RationalCurve(0, -2)
    P = E.point(3, 5)
    for m in range(1, 8):
        phi, sq = multiplication_by(E, m)
        x = P[0]
        assert E.mul(m, P)[0] == poly.evaluate(phi, x) / poly.evaluate(sq, x)


@pytest.mark.parametrize("m", [3, 5, 7])
def test_roots_mod_ell_are_torsion_abscissae(m):
    rng = random.Random(m)
    for E, ell in random_curves_mod(rng, 10):
        Er = E.reduce(ell)
        f = list(division_polynomial(E, m).poly)
        roots = {x for x in range(ell) if poly.evaluate_mod(f, x, ell) == 0}
        assert roots == torsion_abscissae(Er, m)
        on_curve = {x for x in roots if legendre_symbol(Er.rhs(x), ell) >= 0}
        assert on_curve == curve_torsion_abscissae(Er, m)


def test_global_examples(e_x3_plus_1):
    E = e_x3_plus_1
    v = global_divide(E, E.point(0, 1), 2, 1)
    assert v.divisible and set(v.preimages) == {(0, -1), (2, 3)}
    assert E.mul(2, v.preimage) == (0, 1)
    v = global_divide(E, E.point(2, 3), 2, 1)
    assert not v.divisible and v.preimage is None
    assert global_divide(E, None, 7, 3).divisible


def test_global_on_free_points():
    E = RationalCurve(0, -2)
    Q = E.point(3, 5)
    for p, n in [(2, 1), (2, 2), (3, 1), (5, 1), (3, 2)]:
        P = E.mul(p**n, Q)
        v = global_divide(E, P, p, n)
        assert v.divisible and E.mul(p**n, v.preimage) == P
    # Q generates E(Q) modulo torsion, which is trivial here
    for p in (2, 3, 5):
        assert not global_divide(E, Q, p, 1).divisible
    assert not global_divide(E, E.mul(2, Q), 2, 2).divisible


def test_global_big_coordinates_finish_fast():
    E = RationalCurve(-4, 1)
    Q = E.point(0, 1)
    P = E.mul(25, Q)
    v = global_divide(E, P, 5, 2)
    assert v.divisible and E.mul(25, v.preimage) == P


def test_local_examples(e_x3_plus_1):
    E = e_x3_plus_1
    v = local_divide_test(E, E.point(2, 3), 2, 1, 5)
    assert not v.divisible and v.witness is None
    v = local_divide_test(E, E.point(0, 1), 2, 1, 5)
    assert v.divisible and v.witness in {(2, 3), (0, 4)}
    Er = E.reduce(5)
    assert Er.mul(2, v.witness) == (0, 1)


def test_local_rejects_bad_primes(e_x3_plus_1):
    E = e_x3_plus_1
    for ell in (2, 3, 7):
        p = 7 if ell == 7 else 2
        with pytest.raises(BadPrime):
            local_divide_test(E, E.point(2, 3), p, 1, ell)


def test_local_divisible_for_constructed_points():
    E = RationalCurve(0, -2)
    Q = E.point(3, 5)
    for p, n in [(2, 2), (3, 1), (5, 1)]:
        P = E.mul(p**n, Q)
        for ell in prime_sieve(200)[2:]:
            if ell == p or 108 % ell == 0:
                continue
            assert local_divide_test(E, P, p, n, ell).divisible


def test_structural_matches_brute_force_randomised():
    outcomes = set()
    for E, P, p, n, ell in random_local_instances(random.Random(11), 80, ell_max=400):
        s = local_divide_test(E, P, p, n, ell, cross_check=False)
        b = local_divide_test(E, P, p, n, ell, method="brute_force")
        assert s.divisible == b.divisible
        if s.divisible:
            Er = E.reduce(ell)
            assert Er.mul(p**n, s.witness) == E.reduce_point(P, ell)
        outcomes.add(s.divisible)
    assert outcomes == {True, False}
