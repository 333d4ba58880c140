import numpy as np
import pytest
from sympy.polys.domains import ZZ_I

from eta_congruences.series import (
    EXACT,
    GAUSSIAN,
    CoefficientRing,
    TruncatedSeries,
    make_series,
    from_coefficients,
    zero_series,
    one_series,
    resize,
    mul,
    invert,
    divide,
    power,
    linear_combine,
    dilate,
    shift,
    dissect,
    interleave,
    reduce_mod,
    alternate,
    lift_gaussian,
    conjugate,
    real_part,
    imag_part,
    residue_twist,
    zero_indices,
    nonzero_indices,
    first_mismatch,
)


def _random_series(rng, ring, N, unit=True, low=-5, high=6):
    values = rng.integers(low, high, size=N).tolist()
    if unit:
        values[0] = 1
    return from_coefficients(ring, values)


def test_ring_kinds():
    assert EXACT.kind == "ExactInt"
    assert CoefficientRing.mod(25).kind == "ModInt"
    assert GAUSSIAN.kind == "GaussianInt"
    assert CoefficientRing.gaussian_int() == GAUSSIAN
    assert CoefficientRing.exact() == EXACT
    assert str(CoefficientRing(modulus=5, gaussian=True)) == "ZZ_I/5"


@pytest.mark.parametrize("m", [0, 1, -3, 2**31 + 1])
def test_bad_modulus(m):
    with pytest.raises(ValueError):
        CoefficientRing.mod(m)


def test_make_series_validation():
    with pytest.raises(ValueError):
        make_series(EXACT, 5, [(1, 2), (1, 3)])
    with pytest.raises(ValueError):
        make_series(EXACT, 5, [(5, 1)])
    with pytest.raises(ValueError):
        make_series(EXACT, 0)
    with pytest.raises(ValueError):
        make_series(EXACT, 3, [(0, (1, 1))])


def test_modular_values_are_reduced():
    s = make_series(CoefficientRing.mod(4), 4, [(0, -1), (2, 9)])
    assert s.to_list() == [3, 0, 1, 0]


def test_arrays_are_read_only():
    s = one_series(EXACT, 4)
    with pytest.raises(ValueError):
        s.coeffs[0] = 5


def test_getitem_types():
    s = make_series(GAUSSIAN, 3, [(1, (2, -3))])
    assert s[1] == ZZ_I(2, -3)
    assert make_series(EXACT, 3, [(2, 7)])[2] == 7


def test_geometric_inverse():
    one_minus_q = make_series(EXACT, 10, [(0, 1), (1, -1)])
    assert invert(one_minus_q).to_list() == [1] * 10


def test_non_unit_inverse_raises():
    with pytest.raises(ValueError):
        invert(make_series(EXACT, 5, [(0, 2)]))
    with pytest.raises(ValueError):
        invert(make_series(CoefficientRing.mod(25), 5, [(0, 5)]))


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("ring", [EXACT, CoefficientRing.mod(25), CoefficientRing.mod(9)])
def test_inverse_roundtrip(seed, ring):
    rng = np.random.default_rng(seed)
    a = _random_series(rng, ring, 60)
    assert mul(a, invert(a)) == one_series(ring, 60)


def test_sparse_and_dense_inverse_agree():
    ring = CoefficientRing.mod(25)
    sparse = make_series(ring, 200, [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1)])
    dense_tail = from_coefficients(ring, [1] + [3] * 199)
    x = mul(sparse, dense_tail)
    assert divide(x, sparse) == dense_tail
    assert divide(x, dense_tail) == sparse


@pytest.mark.parametrize("seed", [3, 4])
def test_ring_axioms(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (_random_series(rng, EXACT, 40, unit=False) for _ in range(3))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == zero_series(EXACT, 40)
    assert -(-a) == a


def test_power_matches_repeated_product():
    rng = np.random.default_rng(5)
    a = _random_series(rng, EXACT, 30)
    assert power(a, 3) == a * a * a
    assert a ** -2 == invert(a * a)
    assert power(a, 0) == one_series(EXACT, 30)


@pytest.mark.parametrize("seed", [6, 7])
def test_reduce_mod_is_a_homomorphism(seed):
    rng = np.random.default_rng(seed)
    a, b = (_random_series(rng, EXACT, 50, low=-1000, high=1000) for _ in range(2))
    for m in (4, 9, 25):
        assert reduce_mod(a * b, m) == reduce_mod(a, m) * reduce_mod(b, m)
        assert reduce_mod(a + b, m) == reduce_mod(a, m) + reduce_mod(b, m)


def test_reduce_to_divisor_only():
    s = from_coefficients(CoefficientRing.mod(25), [7, 13])
    assert reduce_mod(s, 5).to_list() == [2, 3]
    with pytest.raises(ValueError):
        reduce_mod(s, 4)


def test_large_modulus_convolution_stays_exact():
    m = 2**31 - 1
    ring = CoefficientRing.mod(m)
    a = from_coefficients(ring, [m - 1] * 64)
    b = mul(a, a)
    assert b[0] == 1
    assert b[63] == 64 % m


@pytest.mark.parametrize("m", [2, 3, 5, 12])
def test_dissection_reassembles(m):
    rng = np.random.default_rng(m)
    a = _random_series(rng, EXACT, 37, unit=False)
    result = dissect(a, m)
    assert len(result.components) == m
    assert result.components[1].to_list() == a.to_list()[1::m]
    assert interleave(result) == a
    assert result.reassemble() == a


def test_dissection_with_more_components_than_terms():
    a = from_coefficients(EXACT, [4, 5])
    result = dissect(a, 3)
    assert result.components[2].trunc == 0
    assert interleave(result) == a


def test_dilate_and_shift():
    a = from_coefficients(EXACT, [1, 2, 3, 4, 5, 6])
    assert dilate(a, 2).to_list() == [1, 0, 2, 0, 3, 0]
    assert shift(a, 2).to_list() == [0, 0, 1, 2, 3, 4]
    assert shift(a, 10) == zero_series(EXACT, 6)
    with pytest.raises(ValueError):
        dilate(a, 0)


def test_resize():
    a = from_coefficients(EXACT, [1, 2, 3])
    assert resize(a, 5).to_list() == [1, 2, 3, 0, 0]
    assert resize(a, 2).to_list() == [1, 2]


def test_gaussian_arithmetic():
    a = make_series(GAUSSIAN, 4, [(0, 1), (1, (0, 1))])
    assert (a * a).to_list() == [ZZ_I(1, 0), ZZ_I(0, 2), ZZ_I(-1, 0), ZZ_I(0, 0)]
    assert conjugate(a)[1] == ZZ_I(0, -1)
    assert real_part(a).to_list() == [1, 0, 0, 0]
    assert imag_part(a).to_list() == [0, 1, 0, 0]
    assert (a * invert(a)) == one_series(GAUSSIAN, 4)


def test_gaussian_linear_combine():
    a = make_series(GAUSSIAN, 3, [(0, 1), (2, (2, 1))])
    combo = linear_combine([((0, 1), a), (2, a)])
    assert combo.to_list() == [ZZ_I(2, 1), ZZ_I(0, 0), ZZ_I(3, 4)]
    with pytest.raises(ValueError):
        linear_combine([((0, 1), one_series(EXACT, 3))])
    with pytest.raises(ValueError):
        linear_combine([])


def test_gaussian_reduction_lands_in_quotient_ring():
    a = make_series(GAUSSIAN, 2, [(0, (-1, 26))])
    r = reduce_mod(a, 25)
    assert r.ring == CoefficientRing(modulus=25, gaussian=True)
    assert r[0] == ZZ_I(24, 1)


def test_lift_gaussian_and_sympy_scalars():
    from sympy import I
    a = lift_gaussian(from_coefficients(EXACT, [1, 2]))
    assert a.ring == GAUSSIAN
    b = make_series(GAUSSIAN, 2, [(1, 3 - 4 * I)])
    assert b[1] == ZZ_I(3, -4)


def test_alternate_and_twist():
    a = from_coefficients(EXACT, [1, 1, 1, 1, 1])
    assert alternate(a).to_list() == [1, -1, 1, -1, 1]
    assert residue_twist(a, 3, [1, 0, -2]).to_list() == [1, 0, -2, 1, 0]
    with pytest.raises(ValueError):
        residue_twist(a, 3, [1, 0])


def test_scalar_operators():
    a = from_coefficients(EXACT, [1, 2, 3])
    assert (a + 1).to_list() == [2, 2, 3]
    assert (1 - a).to_list() == [0, -2, -3]
    assert (3 * a).to_list() == [3, 6, 9]


def test_mismatches_and_zero_sets():
    a = from_coefficients(EXACT, [1, 0, 2, 0])
    b = from_coefficients(EXACT, [1, 0, 3, 0])
    assert first_mismatch(a, b) == 2
    assert first_mismatch(a, a) is None
    assert zero_indices(a).tolist() == [1, 3]
    assert nonzero_indices(a).tolist() == [0, 2]


def test_ring_and_length_mismatch():
    with pytest.raises(ValueError):
        mul(one_series(EXACT, 3), one_series(CoefficientRing.mod(4), 3))
    with pytest.raises(ValueError):
        one_series(EXACT, 3) + one_series(EXACT, 4)


def test_series_rejects_out_of_range_arrays():
    with pytest.raises(ValueError):
        TruncatedSeries(CoefficientRing.mod(4), np.array([5], dtype=np.int64))
    with pytest.raises(ValueError):
        TruncatedSeries(GAUSSIAN, np.array([1], dtype=object))
