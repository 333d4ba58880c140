import logging
import numpy as np
from math import isqrt
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple, Optional, Sequence

from joblib import Parallel, delayed

from eta_congruences.report import VerifyReport
from eta_congruences.series import (
    EXACT,
    CoefficientRing,
    TruncatedSeries,
    make_series,
    from_coefficients,
    one_series,
    mul,
    dissect,
    reduce_mod,
    first_mismatch,
)
from eta_congruences.qproducts import (
    eta_series,
    inverse_pochhammer_series,
    pentagonal_terms,
)
from eta_congruences.identities import check_mod4_main

__all__ = [
    "partition_numbers",
    "partition_numbers_recurrence",
    "partition_count",
    "distinct_count",
    "pentagonal_t",
    "is_gen_pentagonal",
    "is_S_square",
    "RepCountQuery",
    "rep_pairs",
    "rep_count",
    "restricted_partition_series",
    "ds_coefficient",
    "verify_merca",
    "verify_pent_plus_3square",
    "verify_distinct_parity",
    "check_partition_parity_pairs",
    "bipartition_checks",
    "D_S_identities",
    "signs_of_ds",
    "check_even_t_quotients",
    "corollary_suite",
]

_MOD2 = CoefficientRing.mod(2)


def partition_numbers(N: int) -> np.ndarray:
    """p(0), ..., p(N-1) as exact integers, read off 1/f1."""
    return eta_series("1/f1", N, EXACT).coeffs


def partition_numbers_recurrence(N: int) -> List[int]:
    """p(0), ..., p(N-1) from Euler's recurrence ``p(n) = sum_t (-1)^{t+1} p(n - t(3t-1)/2)``."""
    terms = [(e, t) for e, t in pentagonal_terms(N) if t]
    p = [0] * N
    if N:
        p[0] = 1
    for n in range(1, N):
        total = 0
        for e, t in terms:
            if e > n:
                break
            total += p[n - e] if t % 2 else -p[n - e]
        p[n] = total
    return p


@lru_cache(maxsize=None)
def _partition_table(N: int) -> Tuple[int, ...]:
    return tuple(int(x) for x in partition_numbers(N))


def partition_count(n: int) -> int:
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return _partition_table(max(64, 1 << n.bit_length()))[n]


def distinct_count(n: int) -> int:
    """Q(n), the number of partitions of n into distinct parts."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return int(eta_series("f2/f1", n + 1, EXACT)[n])


def pentagonal_t(n: int) -> Optional[int]:
    """The t with ``n = t(3t-1)/2``, or ``None`` if n is not a generalized pentagonal number."""
    if n < 0:
        return None
    s = isqrt(24 * n + 1)
    if s * s != 24 * n + 1:
        return None
    return (s + 1) // 6 if s % 6 == 5 else (1 - s) // 6


def is_gen_pentagonal(n: int) -> bool:
    return pentagonal_t(n) is not None


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_S_square(n: int) -> bool:
    """n is a positive square or twice a positive square."""
    return n >= 1 and (_is_square(n) or (n % 2 == 0 and _is_square(n // 2)))


def _is_three_square(n: int) -> bool:
    return n >= 1 and n % 3 == 0 and _is_square(n // 3)


_PART_A = {
    "pentagonal": is_gen_pentagonal,
    "odd_partition": lambda m: partition_count(m) % 2 == 1,
}

_PART_B = {
    "square_or_twice_square": is_S_square,
    "square": lambda n: n >= 1 and _is_square(n),
    "three_square": _is_three_square,
    "square_or_three_square": lambda n: (n >= 1 and _is_square(n)) or _is_three_square(n),
}


@dataclass(frozen=True)
class RepCountQuery:
    """
    Pairs ``(m, n)`` with ``m + n = target``, m drawn from ``part_a`` and n from ``part_b``.

    ``part_a`` is ``pentagonal`` or ``odd_partition`` (m with p(m) odd); ``part_b`` is
    ``square_or_twice_square``, ``square``, ``three_square`` or ``square_or_three_square``.
    The last one counts a value that is both a square and three times a square only once,
    which cannot happen for n >= 1.
    """
    target: int
    part_a: str = "odd_partition"
    part_b: str = "square_or_twice_square"

    def __post_init__(self):
        if self.target < 1:
            raise ValueError(f"Target must be positive, got {self.target}")
        if self.part_a not in _PART_A:
            raise ValueError(f"Unknown part-A set {self.part_a!r}; known: {', '.join(_PART_A)}")
        if self.part_b not in _PART_B:
            raise ValueError(f"Unknown part-B set {self.part_b!r}; known: {', '.join(_PART_B)}")


def rep_pairs(query: RepCountQuery) -> List[Tuple[int, int]]:
    """All pairs, sorted by decreasing m."""
    in_a, in_b = _PART_A[query.part_a], _PART_B[query.part_b]
    N = query.target
    return [(N - n, n) for n in range(1, N + 1) if in_b(n) and in_a(N - n)]


def rep_count(query: RepCountQuery) -> int:
    return len(rep_pairs(query))


def restricted_partition_series(residues: Sequence[int], modulus: int, N: int) -> TruncatedSeries:
    """Generating function of partitions into parts congruent to one of ``residues`` mod ``modulus``."""
    result = one_series(EXACT, N)
    for r in sorted({r % modulus for r in residues}):
        result = mul(result, inverse_pochhammer_series(r or modulus, modulus, N, EXACT))
    return result


def ds_coefficient(n: int) -> int:
    """D_S(n): distinct parts not divisible by 3, even count minus odd count."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return int(eta_series("f1/f3", n + 1, EXACT)[n])


# corollary checks -------------------------------------------------------------

def _indicator(N: int, predicate, ring: CoefficientRing = _MOD2) -> TruncatedSeries:
    return from_coefficients(ring, [1 if predicate(n) else 0 for n in range(N)])


def _lattice(N: int, values, weight: int = 1) -> TruncatedSeries:
    return make_series(EXACT, N, [(v, weight) for v in sorted(set(values)) if v < N])


def _pentagonal_indicator(N: int) -> TruncatedSeries:
    return _lattice(N, (e for e, _ in pentagonal_terms(N)))


def _scaled_squares(N: int, scale: int) -> TruncatedSeries:
    return _lattice(N, (scale * k * k for k in range(1, isqrt(N // scale) + 2)))


def _compare(name: str, lhs: TruncatedSeries, rhs: TruncatedSeries, N: int,
             modulus: Optional[int] = None, note: str = "") -> VerifyReport:
    k = first_mismatch(lhs, rhs)
    if k is None:
        return VerifyReport(name, N, modulus, note=note)
    logging.warning(f"{name} fails at n = {k}: {lhs[k]} != {rhs[k]}")
    return VerifyReport(name, N, modulus, "fail", k, lhs[k], rhs[k], note)


def _zero_indicator(a: TruncatedSeries) -> TruncatedSeries:
    return from_coefficients(_MOD2, (a.coeffs == 0).astype(np.int64))


def verify_merca(Nmax: int = 2000) -> VerifyReport:
    """
    The number of ways to write n as a generalized pentagonal number plus a square or
    twice a square is odd exactly when n is an odd generalized pentagonal number.
    """
    N = Nmax + 1
    counts = mul(_pentagonal_indicator(N), _scaled_squares(N, 1) + _scaled_squares(N, 2))
    odd_pentagonal = _indicator(N, lambda n: n % 2 == 1 and is_gen_pentagonal(n))
    return _compare("merca-parity", reduce_mod(counts, 2), odd_pentagonal, N, 2)


def verify_pent_plus_3square(Nmax: int = 2000) -> VerifyReport:
    """
    Pentagonal plus a square or three times a square: odd count exactly at odd-t
    pentagonal numbers; and ``Q(N) = v_N + 2 w_N`` mod 4 where w counts pentagonal plus
    three times a square.
    """
    N = Nmax + 1
    P = _pentagonal_indicator(N)
    w = mul(P, _scaled_squares(N, 3))
    counts = mul(P, _scaled_squares(N, 1)) + w
    odd_t = _indicator(N, lambda n: (pentagonal_t(n) or 0) % 2 == 1)
    parity = _compare("pent-square-or-3square-parity", reduce_mod(counts, 2), odd_t, N, 2)
    if not parity.passed:
        return parity
    ring4 = CoefficientRing.mod(4)
    Q = eta_series("f2/f1", N, ring4)
    return _compare("distinct-parts-mod4", Q, reduce_mod(P + 2 * w, 4), N, 4)


def verify_distinct_parity(Nmax: int = 2000) -> VerifyReport:
    """Q(n) is odd exactly when n is a generalized pentagonal number."""
    N = Nmax + 1
    return _compare("distinct-parts-parity", eta_series("f2/f1", N, _MOD2),
                    reduce_mod(_pentagonal_indicator(N), 2), N, 2)


def check_partition_parity_pairs(Nmax: int = 2000) -> VerifyReport:
    """
    Pairs (m, n) with p(m) odd, n a square or twice a square and m + n = N come in an
    odd number exactly when N and p(N) are both odd.
    """
    N = Nmax + 1
    p_odd = reduce_mod(eta_series("1/f1", N, EXACT), 2)
    S_o = from_coefficients(EXACT, p_odd.coeffs)
    counts = mul(S_o, _scaled_squares(N, 1) + _scaled_squares(N, 2))
    expected = from_coefficients(_MOD2, [int(p_odd[n]) if n % 2 else 0 for n in range(N)])
    return _compare("partition-parity-pairs", reduce_mod(counts, 2), expected, N, 2)


def bipartition_checks(Nmax: int = 3000) -> List[VerifyReport]:
    """
    Mod 9: ``D_S(n) = 0`` iff ``p_2(n) = 0``; and the bipartitions with a 3-regular first
    component vanish exactly off the generalized pentagonal numbers.
    """
    N = Nmax + 1
    ring9 = CoefficientRing.mod(9)
    ds = eta_series("f1/f3", N, ring9)
    bip = eta_series("1/f1^2", N, ring9)
    bip3 = eta_series("f3/f1^2", N, ring9)
    non_pentagonal = _indicator(N, lambda n: not is_gen_pentagonal(n))
    return [
        _compare("ds-bipartition-mod9", _zero_indicator(ds), _zero_indicator(bip), N, 9),
        _compare("3regular-bipartition-mod9", _zero_indicator(bip3), non_pentagonal, N, 9),
    ]


# residues mod 9 whose parts count for p_{a,9}
_P_A9 = {a: [r for r in range(1, 9) if r not in (a, 9 - a)] for a in (1, 2, 4)}


def D_S_identities(Nmax: int = 3000) -> VerifyReport:
    """``D_S(3n) = p_{4,9}(n)``, ``D_S(3n+1) = -p_{2,9}(n)``, ``D_S(3n+2) = -p_{1,9}(n)``."""
    N = Nmax + 1
    components = dissect(eta_series("f1/f3", N, EXACT), 3).components
    for residue, (a, sign) in enumerate([(4, 1), (2, -1), (1, -1)]):
        comp = components[residue]
        if comp.trunc == 0:
            continue
        rhs = sign * restricted_partition_series(_P_A9[a], 9, comp.trunc)
        report = _compare(f"ds-3dissection-{residue}", comp, rhs, comp.trunc,
                          note=f"D_S(3n+{residue}) = {'+' if sign > 0 else '-'}p_{a},9(n)")
        if not report.passed:
            return report
    return VerifyReport("ds-3dissection", N)


def signs_of_ds(Nmax: int = 3000) -> VerifyReport:
    """D_S(3n) >= 0 while D_S(3n+1) and D_S(3n+2) are <= 0."""
    ds = eta_series("f1/f3", Nmax + 1, EXACT)
    for n in range(Nmax + 1):
        value = int(ds[n])
        if (value < 0) if n % 3 == 0 else (value > 0):
            return VerifyReport("ds-signs", Nmax + 1, None, "fail", n, value, 0,
                                f"sign of D_S at residue {n % 3} mod 3")
    return VerifyReport("ds-signs", Nmax + 1)


def check_even_t_quotients(ts: Sequence[int] = (2, 4, 6), N: int = 1000) -> List[VerifyReport]:
    """Run the mod 4 main family on t-core, t-regular and distinct-part generating functions."""
    reports = []
    for t in ts:
        if t % 2:
            raise ValueError(f"t must be even, got {t}")
        reports.append(check_mod4_main(f"f{t}^{t}/f1", N))
        reports.append(check_mod4_main(f"f{t}/f1", N))
    reports.append(check_mod4_main("f2/f1", N))
    return reports


def corollary_suite(nmax: int = 2000, n_jobs: int = 1) -> List[VerifyReport]:
    """All partition-theoretic checks at a common bound."""
    jobs = [
        (verify_merca, nmax),
        (verify_pent_plus_3square, nmax),
        (verify_distinct_parity, nmax),
        (check_partition_parity_pairs, nmax),
        (bipartition_checks, nmax),
        (D_S_identities, nmax),
        (signs_of_ds, nmax),
    ]
    logging.info(f"Running {len(jobs)} corollary checks to n = {nmax}")
    results = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(f)(arg) for f, arg in jobs)
    reports = []
    for r in results:
        reports.extend(r if isinstance(r, list) else [r])
    return reports
