import pytest

from eta_congruences.series import EXACT
from eta_congruences.qproducts import eta_series
from eta_congruences.combinatorics import (
    partition_numbers,
    partition_numbers_recurrence,
    partition_count,
    distinct_count,
    pentagonal_t,
    is_gen_pentagonal,
    is_S_square,
    RepCountQuery,
    rep_pairs,
    rep_count,
    restricted_partition_series,
    ds_coefficient,
    verify_merca,
    verify_pent_plus_3square,
    verify_distinct_parity,
    check_partition_parity_pairs,
    bipartition_checks,
    D_S_identities,
    signs_of_ds,
    check_even_t_quotients,
    corollary_suite,
)


def test_partition_numbers():
    assert partition_count(55) == 451276
    assert partition_count(60) == 966467
    assert partition_count(0) == 1
    assert partition_numbers_recurrence(200) == partition_numbers(200).tolist()
    with pytest.raises(ValueError):
        partition_count(-1)


def test_distinct_count():
    assert [distinct_count(n) for n in range(8)] == [1, 1, 1, 2, 2, 3, 4, 5]
    with pytest.raises(ValueError):
        distinct_count(-2)


@pytest.mark.parametrize("n,t", [(0, 0), (1, 1), (2, -1), (5, 2), (7, -2), (12, 3), (15, -3)])
def test_pentagonal_t(n, t):
    assert pentagonal_t(n) == t
    assert is_gen_pentagonal(n)


@pytest.mark.parametrize("n", [3, 4, 6, 8, 14, -1])
def test_not_pentagonal(n):
    assert pentagonal_t(n) is None


def test_is_S_square():
    assert [n for n in range(20) if is_S_square(n)] == [1, 2, 4, 8, 9, 16, 18]


@pytest.mark.parametrize("target,count", [(55, 8), (60, 6), (53, 9)])
def test_rep_count_partition_parity(target, count):
    query = RepCountQuery(target)
    assert rep_count(query) == count
    assert (count % 2 == 1) == (target % 2 == 1 and partition_count(target) % 2 == 1)


def test_rep_pairs_order_and_sets():
    assert rep_pairs(RepCountQuery(10, "pentagonal", "square")) == [(1, 9)]
    assert rep_pairs(RepCountQuery(12, "pentagonal", "three_square")) == [(0, 12)]
    assert rep_pairs(RepCountQuery(12, "pentagonal", "square_or_three_square")) == [(0, 12)]
    pairs = rep_pairs(RepCountQuery(55))
    assert [m for m, _ in pairs] == [54, 53, 51, 39, 37, 23, 6, 5]


def test_rep_count_query_validation():
    with pytest.raises(ValueError):
        RepCountQuery(0)
    with pytest.raises(ValueError):
        RepCountQuery(5, part_a="prime")
    with pytest.raises(ValueError):
        RepCountQuery(5, part_b="cube")


def test_restricted_partition_series():
    odd_parts = restricted_partition_series([1], 2, 40)
    assert odd_parts == eta_series("f2/f1", 40, EXACT)
    assert restricted_partition_series([0], 1, 30) == eta_series("1/f1", 30, EXACT)


def test_ds_coefficient():
    assert ds_coefficient(1) == -1
    assert ds_coefficient(60) == 224
    with pytest.raises(ValueError):
        ds_coefficient(-1)


def test_pentagonal_plus_s_square_parity():
    # n = 2 = 0 + 2 = 1 + 1 is pentagonal with t = -1 odd, yet its count is even
    counts = [rep_count(RepCountQuery(n, "pentagonal")) for n in range(1, 400)]
    assert counts[:7] == [1, 2, 2, 2, 1, 2, 1]
    odd = [n for n, c in enumerate(counts, start=1) if c % 2 == 1]
    assert odd == [n for n in range(1, 400) if n % 2 == 1 and is_gen_pentagonal(n)]
    assert verify_merca(400).passed


@pytest.mark.parametrize("check", [verify_merca, verify_pent_plus_3square, verify_distinct_parity,
                                   check_partition_parity_pairs, D_S_identities, signs_of_ds])
def test_partition_checks_pass(check):
    report = check(600)
    assert report.passed, str(report)


def test_bipartition_checks():
    reports = bipartition_checks(600)
    assert [r.identity_id for r in reports] == ["ds-bipartition-mod9", "3regular-bipartition-mod9"]
    assert all(r.passed for r in reports)


def test_even_t_quotients():
    reports = check_even_t_quotients((2, 4), 300)
    assert len(reports) == 5
    assert all(r.passed for r in reports)
    with pytest.raises(ValueError):
        check_even_t_quotients((3,))


def test_corollary_suite():
    reports = corollary_suite(400, n_jobs=2)
    assert len(reports) == 8
    assert all(r.passed for r in reports), [str(r) for r in reports if not r.passed]


@pytest.mark.slow
def test_corollary_suite_default_bound():
    assert all(r.passed for r in corollary_suite())
