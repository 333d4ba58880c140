import pytest
from sympy.polys.domains import ZZ_I
from sympy import primerange

from eta_congruences.series import EXACT, CoefficientRing, zero_indices
from eta_congruences.qproducts import eta_series, builtin_theta
from eta_congruences.search import TABLE_BOUND, MOD_COLUMN_EXTRA
from eta_congruences.oracles import (
    factorize,
    two_square,
    TwoSquareRep,
    rep_x2_5y2,
    HeckeLocal,
    hecke_sequence,
    hecke_power,
    orbit_period,
    local_valuation_25,
    chi_s1,
    chi_s3,
    s1_prime_coefficient,
    s3_prime_coefficient,
    coeff_f1_10,
    coeff_f1_5_f5,
    A_coeff,
    B_coeff,
    B_prime_power_residue,
    VanishingVerdict,
    vanish25_f1_10,
    vanish25_f1_5_f5,
    vanish25_A,
    necessary25_B,
    serre_vanishing_mod9,
    ORACLES,
    oracle_agreement,
)


def test_factorize():
    fac = factorize(180005)
    assert fac.pairs == ((5, 1), (7, 1), (37, 1), (139, 1))
    assert str(fac) == "5 * 7 * 37 * 139"
    assert fac.ord(7) == 1
    assert fac.ord(2) == 0
    assert str(factorize(1)) == "1"
    assert factorize(72).pairs == ((2, 3), (3, 2))
    with pytest.raises(ValueError):
        factorize(0)


@pytest.mark.parametrize("p,x,y", [(5, 2, 1), (13, 3, 2), (97, 9, 4), (29, 5, 2)])
def test_two_square(p, x, y):
    assert two_square(p) == TwoSquareRep(x, y)


@pytest.mark.parametrize("p", [7, 21, 25, 2])
def test_two_square_rejects(p):
    with pytest.raises(ValueError):
        two_square(p)


def test_rep_x2_5y2():
    assert rep_x2_5y2(29) == (3, 2)
    assert rep_x2_5y2(41) == (6, 1)
    assert rep_x2_5y2(7) is None


def test_hecke_recurrence():
    local = HeckeLocal(13, (s1_prime_coefficient(13), 0), chi_s1(13), 13 ** 4)
    assert s1_prime_coefficient(13) == -238
    assert hecke_power(local, 2) == 28083
    inert = HeckeLocal(7, (0, 0), chi_s1(7), 7 ** 4)
    assert hecke_power(inert, 1) == 0
    assert hecke_power(inert, 2) == 2401
    assert hecke_power(inert, 3) == 0


def test_hecke_gaussian_values():
    local = HeckeLocal(5, s3_prime_coefficient(5), 0, 25)
    assert hecke_power(local, 2) == ZZ_I(-4, -3) ** 2
    seq = hecke_sequence(local, 3, modulus=25)
    assert all(0 <= re < 25 and 0 <= im < 25 for re, im in seq)


def test_orbit_period():
    assert orbit_period([1, 2, 1, 2, 1, 2]) == 2
    assert orbit_period([3, 3, 3]) == 1
    assert orbit_period([1, 2, 3]) is None
    local = HeckeLocal(7, (0, 0), -1, 7 ** 4)
    assert orbit_period(hecke_sequence(local, 40, modulus=25)) is not None


def test_local_valuation_25():
    assert local_valuation_25((25, 50)) == 2
    assert local_valuation_25((5, 10)) == 1
    assert local_valuation_25((5, 1)) == 0


def _residue_pairs(values, modulus):
    return [(int(complex(v).real) % modulus, int(complex(v).imag) % modulus) for v in values]


def _synthetic(a_p, chi, twist):
    z = complex(a_p)
    return HeckeLocal(0, (int(z.real), int(z.imag)), chi, twist)


MOD5_A2 = [1, 2, 3, 4, 0]
MOD5_A3 = [1, 3, 3, 1, 0, 4, 2, 2, 4, 0]
MOD5_AI = [1, 1j, 3, 2j, 0, -2j, 2, -1j, 4, 0]
MOD5_AMI = [1, -1j, 3, -2j, 0, 2j, 2, 1j, 4, 0]

# (a_p, chi, p^w, modulus, one period of a_{p^k})
PRINTED_ORBITS = [
    (2, 1, 1, 5, MOD5_A2),
    (3, 1, 1, 5, MOD5_A3),
    (10, 1, 6, 25, [1, 10, 19, 5, 11, 5, 9, 10, 21, 0, 24, 15, 6, 20, 14, 20, 16, 15, 4, 0]),
    (2, 1, 1, 25, list(range(1, 25)) + [0]),
    (3, 1, 21, 25, [1, 3, 13, 1, 5, 19, 2, 7, 4, 15, 11, 18, 23, 16, 15, 9, 12, 22, 14, 5, 21, 8, 8, 6, 0,
                    24, 22, 12, 24, 20, 6, 23, 18, 21, 10, 14, 7, 2, 9, 10, 16, 13, 3, 11, 20, 4, 17, 17, 19, 0]),
    (15, 1, 11, 25, [1, 15, 14, 20, 21, 20, 19, 15, 16, 0, 24, 10, 11, 5, 4, 5, 6, 10, 9, 0]),
    (-5j, -1, 14, 25, [1, -5j, 14, 10j, 21, 10j, 19, -5j, 16, 0, 24, 5j, 11, -10j, 4, -10j, 6, 5j, 9, 0]),
    (1j, -1, 19, 25, [1, 1j, 18, 12j, 5, 8j, 12, -11j, 14, 5j, 11, 6j, 3, -8j, 15, -12j, 22, -6j, 24, 10j,
                      21, 11j, 13, -3j, 0, -7j, 7, -1j, 9, -10j, 6, -9j, 23, 2j, 10, -2j, 17, 4j, 19, -5j,
                      16, -4j, 8, 7j, 20, 3j, 2, 9j, 4, 0]),
    (17, 1, 16, 25, [1, 17, 23, 19, 5, 6, 22, 3, 24, 10, 11, 2, 8, 4, 15, 16, 7, 13, 9, 20, 21, 12, 18, 14, 0]),
]


@pytest.mark.parametrize("a_p,chi,twist,modulus,period", PRINTED_ORBITS)
def test_hecke_orbit_patterns(a_p, chi, twist, modulus, period):
    seq = hecke_sequence(_synthetic(a_p, chi, twist), 3 * len(period) - 1, modulus=modulus)
    assert seq == _residue_pairs(period * 3, modulus)
    assert orbit_period(seq) == len(period)


def _pair_at(series, n):
    return int(series.coeffs[n]), int(series.imag[n]) if series.imag is not None else 0


def test_prime_power_coefficients_follow_the_recurrence():
    N = 2500
    s1 = builtin_theta("S1", N)
    s3 = builtin_theta("S3", N)
    for p in primerange(5, 50):
        k = 1
        while p ** (k + 1) < N:
            k += 1
        cases = [
            (s1, HeckeLocal(p, _pair_at(s1, p), chi_s1(p), p ** 4)),
            (s3, HeckeLocal(p, _pair_at(s3, p), chi_s3(p), p ** 2)),
        ]
        for series, local in cases:
            assert hecke_sequence(local, k) == [_pair_at(series, p ** j) for j in range(k + 1)], p


def test_prime_coefficients_match_series_up_to_sign():
    N = 2500
    s1 = builtin_theta("S1", N)
    s3 = builtin_theta("S3", N)
    for p in primerange(5, N):
        a = s1_prime_coefficient(p)
        assert _pair_at(s1, p) in ((a, 0), (-a, 0)), p
        re, im = s3_prime_coefficient(p)
        assert _pair_at(s3, p) in ((re, im), (-re, -im)), p


PRIMES_1_MOD_4 = [p for p in primerange(7, 2500) if p % 4 == 1]

S1_UNIT_PAIRS = {(2, 1), (3, 21), (7, 6), (8, 16), (12, 11), (13, 11), (17, 16), (18, 6), (22, 21), (23, 1)}
S3_UNIT_PAIRS = {((a, 0), w) for a, w in S1_UNIT_PAIRS} | {
    ((0, b), w) for b, w in [(24, 19), (1, 19), (21, 4), (4, 4), (19, 9), (6, 9), (16, 14), (9, 14),
                             (14, 24), (11, 24)]
}
S3_MOD5_ORBITS = [_residue_pairs(pattern * (20 // len(pattern)), 5)
                  for pattern in (MOD5_A2, MOD5_A3, MOD5_AI, MOD5_AMI)]


def _unit_profile(k):
    return 2 if k % 25 == 24 else 1 if k % 5 == 4 else 0


def _split_profile(k):
    return 2 if k % 10 == 9 else 1 if k % 2 else 0


def _expected_valuations(p, a_p, k=99):
    if p % 12 == 1:
        return [_unit_profile(j) for j in range(k + 1)]
    if local_valuation_25(a_p) == 2:
        return [2 * (j % 2) for j in range(k + 1)]
    return [_split_profile(j) for j in range(k + 1)]


def test_s1_prime_power_residues():
    for p in PRIMES_1_MOD_4:
        a = s1_prime_coefficient(p)
        local = HeckeLocal(p, (a, 0), chi_s1(p), p ** 4)
        if p % 12 == 1:
            assert (a % 25, pow(p, 4, 25)) in S1_UNIT_PAIRS, p
            mod5 = [re for re, _ in hecke_sequence(local, 19, modulus=5)]
            assert mod5 == (MOD5_A2 * 4 if a % 5 == 2 else MOD5_A3 * 2), p
        else:
            assert a % 5 == 0, p
        valuations = [local_valuation_25(z) for z in hecke_sequence(local, 99, modulus=25)]
        assert valuations == _expected_valuations(p, (a, 0)), p


def test_s3_prime_power_residues():
    for p in PRIMES_1_MOD_4:
        e = s3_prime_coefficient(p)
        local = HeckeLocal(p, e, chi_s3(p), p ** 2)
        if p % 12 == 1:
            assert ((e[0] % 25, e[1] % 25), p * p % 25) in S3_UNIT_PAIRS, p
            assert hecke_sequence(local, 19, modulus=5) in S3_MOD5_ORBITS, p
        else:
            assert local_valuation_25(e) >= 1, p
        valuations = [local_valuation_25(z) for z in hecke_sequence(local, 99, modulus=25)]
        assert valuations == _expected_valuations(p, e), p


def test_s3_prime_coefficient_classes():
    assert s3_prime_coefficient(7) == (0, 0)
    assert s3_prime_coefficient(13) == (0, 24)
    assert s3_prime_coefficient(41) == (80, 0)


@pytest.mark.parametrize("n,value", [(0, 1), (1, -10), (5, 238), (6, 0), (10, 1054)])
def test_coeff_f1_10_values(n, value):
    assert coeff_f1_10(n) == value


def test_coeff_f1_10_matches_expansion():
    expansion = eta_series("f1^10", 150, EXACT).to_list()
    assert [coeff_f1_10(n) for n in range(150)] == expansion


def test_coeff_f1_5_f5_matches_expansion():
    expansion = eta_series("f1^5*f5", 150, EXACT).to_list()
    assert [coeff_f1_5_f5(n) for n in range(150)] == expansion


F1_10_PREFIX = [1, -10, 35, -30, -105, 238, 0, -260, -165, 140, 1054, -770, -595, 0, -715, 2162, 455]
F1_5_F5_PREFIX = [1, -5, 5, 10, -15, -7, 0, 20, 5, -5, 14, -35, -35, 0, 55, 7, 65]


def test_exact_coefficient_prefixes():
    assert [coeff_f1_10(n) for n in range(17)] == F1_10_PREFIX
    assert [coeff_f1_5_f5(n) for n in range(17)] == F1_5_F5_PREFIX


@pytest.mark.parametrize("n", [10, 20, 45, 70])
def test_coeff_f1_5_f5_when_only_the_combination_is_integral(n):
    # at n = 10 the S3 coefficient is 44 - 117i: 3u is not a multiple of 24 on its own
    expansion = eta_series("f1^5*f5", n + 1, EXACT).to_list()
    assert coeff_f1_5_f5(n) == expansion[n]


def test_A_coeff():
    assert [A_coeff(n) for n in (1, 2, 6, 7, 10, 12)] == [-1, -1, 1, 2, -2, -1]
    expansion = eta_series("f1*f5", 400, EXACT).to_list()
    assert [A_coeff(n) for n in range(400)] == expansion


def test_B_coeff():
    assert B_coeff(1) == -6
    assert B_coeff(3) == 10
    expansion = eta_series("f1^6", 400, EXACT).to_list()
    assert [B_coeff(n) for n in range(400)] == expansion


def test_B_prime_power_residue():
    assert B_prime_power_residue(5, 1) == (4, 0)
    assert B_prime_power_residue(13, 1) == (0, 0)
    with pytest.raises(ValueError):
        B_prime_power_residue(2, 1)
    with pytest.raises(ValueError):
        B_prime_power_residue(9, 1)


def test_vanishing_verdicts():
    v = vanish25_f1_10(6)
    assert v.vanishes and v.condition == "odd_ord_p_3mod4"
    assert v.to_dict() == {"n": 6, "vanishes": True, "condition": "odd_ord_p_3mod4"}
    assert not vanish25_f1_10(1).vanishes
    assert vanish25_A(5).condition == "odd_ord_p_bad_mod20"
    assert not vanish25_A(1).vanishes
    assert necessary25_B(5)
    assert not necessary25_B(1)
    with pytest.raises(ValueError):
        VanishingVerdict(1, True)
    with pytest.raises(ValueError):
        VanishingVerdict(1, False, "odd_ord_p_3mod4")


def test_serre_vanishing_mod9():
    assert [n for n in range(7) if serre_vanishing_mod9(n, "f1_10_case")] == [6]
    assert not any(serre_vanishing_mod9(n, "f1_4_case") for n in (0, 1, 4, 6))
    assert serre_vanishing_mod9(9, "f1_4_case")
    with pytest.raises(ValueError):
        serre_vanishing_mod9(1, "f1_3_case")


@pytest.mark.parametrize("which", list(ORACLES))
def test_oracle_agreement_small(which):
    result = oracle_agreement(which, 600, n_jobs=2)
    assert result.agrees, result.mismatches[:10]
    assert result.bound == 600
    assert result.contract == ORACLES[which][3]
    assert 0 < result.density <= 1


def test_unknown_oracle():
    with pytest.raises(ValueError):
        oracle_agreement("f1_11", 10)


@pytest.mark.slow
@pytest.mark.parametrize("which,count", [("f1_10", 7571), ("f1_5_f5", 7571), ("f1f5", 12168), ("f1_6", 9207)])
def test_oracle_agreement_table_scale(which, count):
    result = oracle_agreement(which, TABLE_BOUND + MOD_COLUMN_EXTRA, n_jobs=4)
    assert result.agrees
    assert result.series_count == count


@pytest.mark.slow
def test_lacunary_predicates_share_their_index_set():
    a = {n for n in range(TABLE_BOUND + MOD_COLUMN_EXTRA) if vanish25_f1_10(n).vanishes}
    b = {n for n in range(TABLE_BOUND + MOD_COLUMN_EXTRA) if vanish25_f1_5_f5(n).vanishes}
    assert a == b
    assert len(a) == 7571


@pytest.mark.slow
def test_f1_6_zeros_strictly_inside_f1f5_zeros():
    ring = CoefficientRing.mod(25)
    six = set(zero_indices(eta_series("f1^6", TABLE_BOUND + MOD_COLUMN_EXTRA, ring)).tolist())
    one = set(zero_indices(eta_series("f1*f5", TABLE_BOUND + MOD_COLUMN_EXTRA, ring)).tolist())
    assert six < one
    assert (len(six), len(one)) == (9207, 12168)


@pytest.mark.slow
def test_A_coeff_at_table_scale():
    expansion = eta_series("f1*f5", 15000, EXACT).to_list()
    assert all(A_coeff(n) == c for n, c in enumerate(expansion))
