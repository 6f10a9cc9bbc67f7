import pytest

from localglobal.core_arith import DomainError
from localglobal.elliptic import RationalCurve
from localglobal.frobenius_sets import PersistentSetSpec, in_persistent_set
from localglobal.padic_sets import Membership
from localglobal.pipeline import (
    EmptySample,
    b_bound,
    format_sweep,
    run_check,
    soundness_sweep,
    theorem_applicable,
)

SPEC = PersistentSetSpec(5)


def test_b_bound_examples():
    assert b_bound(1).value == 3 and b_bound(1).exceeded_by(5)
    assert b_bound(2).value == 16
    assert b_bound(2).exceeded_by(17) and not b_bound(2).exceeded_by(13)
    assert b_bound(4).value == 100
    with pytest.raises(DomainError):
        b_bound(0)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_b_bound_odd_is_exact(d):
    B = b_bound(d)
    assert B.value is None
    approx = (3 ** (d / 2) + 1) ** 2
    lo, hi = int(approx), int(approx) + 1
    assert not B.exceeded_by(lo) and B.exceeded_by(hi)
    assert str(B) == f"{3**d + 1} + 2*sqrt({3**d})"


def test_theorem_applicability():
    assert theorem_applicable(2, 1) and theorem_applicable(3, 1)
    assert not theorem_applicable(3, 2) and not theorem_applicable(2, 2)
    assert theorem_applicable(5, 3)


def test_check_divisible_point(e_x3_plus_1):
    E = e_x3_plus_1
    r = run_check(E, E.point(0, 1), 2, 1, SPEC, 10_000)
    assert len(r.local) == 50 and r.all_local_divisible
    assert r.global_status == "divisible" and r.consistent
    assert all(in_persistent_set(v.ell, SPEC) is Membership.IN for v in r.local)
    assert (3, "bad reduction") in r.skipped


def test_check_non_divisible_point(e_x3_plus_1):
    E = e_x3_plus_1
    r = run_check(E, E.point(2, 3), 2, 1, SPEC, 10_000)
    failures = [v.ell for v in r.local if not v.divisible]
    assert failures and min(failures) <= 100
    assert r.global_status == "not divisible" and r.consistent
    assert r.theorem_prediction.startswith("not divisible")


def test_check_point_at_infinity(e_x3_plus_1):
    r = run_check(e_x3_plus_1, None, 3, 2, SPEC, 2_000, sample=10)
    assert r.all_local_divisible and r.global_status == "divisible" and r.global_preimage is None
    assert not r.theorem_applicable and r.theorem_prediction == "no prediction"


def test_report_keeps_prediction_and_oracle_apart(e_x3_plus_1):
    d = run_check(e_x3_plus_1, e_x3_plus_1.point(0, 1), 5, 1, SPEC, 2_000, sample=5).to_dict()
    assert d["global"]["status"] in {"divisible", "not divisible"}
    assert "theorem_prediction" in d and d["local_evidence"].startswith("sampled")
    assert any("assumed" in a for a in d["assumptions"])


def test_consistency_flag_logic(e_x3_plus_1):
    r = run_check(e_x3_plus_1, e_x3_plus_1.point(2, 3), 2, 1, SPEC, 2_000, sample=10)
    r.global_status = "divisible"
    assert not r.consistent
    r.local = [v for v in r.local if v.divisible]
    assert r.consistent
    r.global_status = "not divisible"
    assert not r.consistent  # theorem applies and predicts divisibility


def test_check_input_errors(e_x3_plus_1):
    with pytest.raises(DomainError):
        run_check(e_x3_plus_1, (1, 1), 2, 1, SPEC)
    with pytest.raises(DomainError):
        run_check(e_x3_plus_1, None, 4, 1, SPEC)
    with pytest.raises(EmptySample):
        run_check(e_x3_plus_1, None, 2, 1, SPEC, limit=5)


def test_parallel_matches_serial(e_x3_plus_1):
    E, P = e_x3_plus_1, e_x3_plus_1.point(2, 3)
    a = run_check(E, P, 2, 1, SPEC, 5_000, sample=20, workers=1)
    b = run_check(E, P, 2, 1, SPEC, 5_000, sample=20, workers=2)
    assert a.to_dict() == b.to_dict()


def test_sweep_passes_and_is_deterministic():
    rows = soundness_sweep(8, seed=3)
    assert all(r.passed for r in rows)
    assert format_sweep(rows) == format_sweep(soundness_sweep(8, seed=3))
    assert format_sweep(rows).endswith("8/8 passed")


def test_text_report_is_deterministic():
    E = RationalCurve(0, -2)
    P = E.mul(4, E.point(3, 5))
    a = run_check(E, P, 2, 2, SPEC, 3_000, sample=15).to_text()
    assert a == run_check(E, P, 2, 2, SPEC, 3_000, sample=15).to_text()
    assert "consistent          True" in a
