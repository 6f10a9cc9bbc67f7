import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from localglobal import poly

F = Fraction


def from_roots(roots, extra=(1,)):
    """Integer polynomial with the given rational roots times ``extra``."""
    f = list(extra)
    for r in roots:
        f = poly.mul(f, [-r.numerator, r.denominator])
    return f


fracs = st.builds(F, st.integers(-60, 60), st.integers(1, 12))


@given(st.lists(fracs, min_size=1, max_size=5))
@settings(max_examples=80)
def test_rational_roots_divisor_route(roots):
    f = from_roots(roots, extra=[1, 0, 3])  # x^2 + ... adds no rational roots
    found, _ = poly.rational_roots(f)
    assert found == sorted(set(roots))


@given(st.lists(fracs, min_size=1, max_size=5))
@settings(max_examples=80)
def test_rational_roots_hensel_route(roots):
    f = from_roots(roots, extra=[2, 0, 0, 1])
    found, method = poly.rational_roots(f, size_limit=0)
    assert method == "hensel"
    assert found == sorted(set(roots))


def test_hensel_handles_huge_coefficients():
    rng = random.Random(3)
    roots = [F(rng.randrange(-10**40, 10**40), rng.randrange(1, 10**30)) for _ in range(3)]
    f = from_roots(roots, extra=[7, 1, 0, 1])
    found, method = poly.rational_roots(f)
    assert method == "hensel"
    assert found == sorted(set(roots))


def test_trivial_and_zero_roots():
    assert poly.rational_roots([5]) == ([], "trivial")
    assert poly.rational_roots([0, 0, 1]) == ([F(0)], "trivial")
    assert poly.rational_roots([0, 1, 0, 1])[0] == [F(0)]


def test_gcd_and_squarefree():
    f = poly.mul([1, 1], poly.mul([1, 1], [-2, 1]))
    assert poly.squarefree_part(f) == poly.primitive(poly.mul([1, 1], [-2, 1]))
    q, r = poly.divmod_poly(f, [1, 1])
    assert not poly.trim(r)
    assert poly.evaluate(q, F(2)) == 0
