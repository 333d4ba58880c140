import pytest

from eta_congruences.series import EXACT, shift, first_mismatch
from eta_congruences.report import VerifyReport, HypothesisError
from eta_congruences.qproducts import parse_eta, eta_series
from eta_congruences.identities import (
    REGISTRY,
    registry_ids,
    verify,
    verify_identity,
    verify_congruence,
    verify_all,
    TheoremFamilyHypothesis,
    mod4_second_set,
    mod4_second_quotient,
    check_mod4_main,
    check_mod4_second,
    check_mod9,
)
from eta_congruences.examples import named_quotients, random_batch

FAST_BOUND = 300


@pytest.mark.parametrize("id", registry_ids())
def test_registry_entry_holds(id):
    report = verify(id, FAST_BOUND)
    assert report.passed, str(report)
    assert report.bound == FAST_BOUND
    assert report.modulus == REGISTRY[id].modulus


@pytest.mark.slow
@pytest.mark.parametrize("id", registry_ids())
def test_registry_entry_holds_at_default_bound(id):
    assert verify(id).passed


@pytest.mark.parametrize("id,k", [("minus-q-product", 37), ("f1-3dissect", 0), ("j27-mod9-b", 150),
                                  ("f110-H7H8", 99), ("mod9-residue1", 11)])
def test_perturbation_is_caught_at_its_exponent(id, k):
    report = verify(id, 200, perturb=k)
    assert report.status == "fail"
    assert report.witness == k


def test_2dissection_cube_term_carries_f4_squared():
    N = 200
    lhs = eta_series("f1^6*f4^2/f2^3", N, EXACT)
    head = (eta_series("f8^15/f4^4/f16^6", N, EXACT)
            - 6 * shift(eta_series("f8^9/f4^2/f16^2", N, EXACT), 1)
            + 12 * shift(eta_series("f8^3*f16^2", N, EXACT), 2))
    assert lhs == head - 8 * shift(eta_series("f4^2*f16^6/f8^3", N, EXACT), 3)
    assert first_mismatch(lhs, head - 8 * shift(eta_series("f16^6/f8^3", N, EXACT), 3)) == 7
    report = verify("f16f42f23-2dissect", 400)
    assert report.passed
    assert "f4^2" in report.note


def test_registry_metadata():
    assert {"j27-mod9-a", "j27-mod9-b", "j27-mod9-c"} <= set(registry_ids())
    assert REGISTRY["j27-mod9-a"].sturm_bound == 243
    assert REGISTRY["f110-S1S2-combination"].gaussian
    assert REGISTRY["mod9-residue2"].note
    assert all(e.kind in ("identity", "congruence") for e in REGISTRY.values())
    assert all((e.kind == "congruence") == (e.modulus is not None) for e in REGISTRY.values())


def test_unknown_or_misfiled_ids():
    with pytest.raises(ValueError):
        verify("no-such-identity")
    with pytest.raises(ValueError):
        verify_identity("j27-mod9-a")
    with pytest.raises(ValueError):
        verify_congruence("minus-q-product")
    assert verify_identity("minus-q-product", 100).passed
    assert verify_congruence("jbar16-mod4-a", 100).passed


def test_verify_all_subset():
    reports = verify_all(N=200, n_jobs=2, ids=["minus-q-product", "jbar16-mod4-b", "f3f13-mod9"])
    assert [r.identity_id for r in reports] == ["minus-q-product", "jbar16-mod4-b", "f3f13-mod9"]
    assert all(r.passed for r in reports)


def test_report_serialization():
    report = verify("f1-jbar12", 50, perturb=3)
    data = report.to_dict()
    assert data["status"] == "fail"
    assert data["witness"] == 3
    assert "FAIL at q^3" in str(report)
    with pytest.raises(ValueError):
        VerifyReport("x", 10, status="fail", witness=10)
    with pytest.raises(ValueError):
        VerifyReport("x", 10, status="unknown")


@pytest.mark.parametrize("A", named_quotients("Mod4Main"))
def test_mod4_main_named(A):
    report = check_mod4_main(A, 1000)
    assert report.passed, str(report)
    assert report.identity_id == f"mod4-main[{A}]"


def test_mod4_main_random():
    for A in random_batch("Mod4Main", count=10, seed=11):
        assert check_mod4_main(A, 400).passed, str(A)


def test_mod4_main_rejects_f3_over_f1():
    with pytest.raises(HypothesisError):
        check_mod4_main("f3/f1")
    with pytest.raises(HypothesisError):
        check_mod4_main("f1^2")
    assert not TheoremFamilyHypothesis("Mod4Main").holds(parse_eta("f3/f1"))


@pytest.mark.parametrize("S", named_quotients("Mod4Second"))
def test_mod4_second_named(S):
    assert check_mod4_second(S, 1000).passed


def test_mod4_second_random():
    for S in random_batch("Mod4Second", count=10, seed=12):
        assert check_mod4_second(S, 400).passed, str(S)


def test_mod4_second_set_roundtrip():
    assert mod4_second_set("f1") == []
    assert mod4_second_set("f1^3/f2") == [(1, 1)]
    assert mod4_second_set("f2/f1") == [(1, -1)]
    S = [(1, 2), (3, -1)]
    assert mod4_second_set(mod4_second_quotient(S)) == S
    with pytest.raises(HypothesisError):
        mod4_second_set("f1/f3")
    with pytest.raises(ValueError):
        mod4_second_quotient([(0, 1)])


@pytest.mark.parametrize("A", named_quotients("Mod9"))
def test_mod9_named(A):
    assert check_mod9(A, 1000).passed


def test_mod9_random():
    for A in random_batch("Mod9", count=10, seed=13):
        assert check_mod9(A, 400).passed, str(A)


def test_mod9_hypothesis():
    with pytest.raises(HypothesisError):
        check_mod9("f1^2")
    with pytest.raises(HypothesisError):
        check_mod9("f1*f2")
    assert TheoremFamilyHypothesis("Mod9").holds(parse_eta("f1^4*f2^3*f3"))
    with pytest.raises(ValueError):
        TheoremFamilyHypothesis("Mod7")



@pytest.mark.slow
def test_theorem_families_random_batches_at_default_bound():
    assert all(check_mod4_main(A).passed for A in random_batch("Mod4Main", count=25, seed=0))
    assert all(check_mod4_second(S).passed for S in random_batch("Mod4Second", count=3, seed=0))
    assert all(check_mod9(A).passed for A in random_batch("Mod9", count=25, seed=0))
