import logging
from math import isqrt
from dataclasses import dataclass, field, asdict
from functools import lru_cache
from typing import List, Tuple, Dict, Optional, Iterator, Sequence

import sympy as sp
from sympy.polys.domains import ZZ_I
from joblib import Parallel, delayed
from tqdm import tqdm

from eta_congruences.series import CoefficientRing, zero_indices
from eta_congruences.qproducts import eta_series, UV_OFFSETS, ALPHA

__all__ = [
    "PrimeFactorization",
    "factorize",
    "TwoSquareRep",
    "two_square",
    "rep_x2_5y2",
    "HeckeLocal",
    "hecke_sequence",
    "hecke_power",
    "orbit_period",
    "local_valuation_25",
    "chi_s1",
    "chi_s3",
    "s1_prime_coefficient",
    "s3_prime_coefficient",
    "coeff_f1_10",
    "coeff_f1_5_f5",
    "A_coeff",
    "B_coeff",
    "B_prime_power_residue",
    "VanishingVerdict",
    "vanish25_f1_10",
    "vanish25_f1_5_f5",
    "vanish25_A",
    "necessary25_B",
    "serre_vanishing_mod9",
    "OracleComparison",
    "ORACLES",
    "oracle_agreement",
]


@dataclass(frozen=True)
class PrimeFactorization:
    n: int
    pairs: Tuple[Tuple[int, int], ...]

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.pairs)

    def ord(self, p: int) -> int:
        return dict(self.pairs).get(p, 0)

    def __str__(self) -> str:
        if not self.pairs:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.pairs)


@lru_cache(maxsize=65536)
def factorize(n: int) -> PrimeFactorization:
    """Complete factorization of ``n >= 1`` as sorted (prime, exponent) pairs."""
    if n < 1:
        raise ValueError(f"Can only factor positive integers, got {n}")
    return PrimeFactorization(n, tuple(sorted(sp.factorint(n).items())))


@dataclass(frozen=True)
class TwoSquareRep:
    x: int
    y: int


@lru_cache(maxsize=None)
def two_square(p: int) -> TwoSquareRep:
    """
    The unique ``p = x^2 + y^2`` with ``x > y > 0`` for a prime ``p = 1 mod 4``.

    Raises
    ------
    ValueError
        If p is not a prime congruent to 1 mod 4.
    """
    if p % 4 != 1 or not sp.isprime(p):
        raise ValueError(f"{p} is not a prime congruent to 1 mod 4")
    for y in range(1, isqrt(p // 2) + 1):
        x = isqrt(p - y * y)
        if x * x == p - y * y and x > y:
            return TwoSquareRep(x, y)
    raise RuntimeError(f"No two-square representation found for prime {p}")


@lru_cache(maxsize=None)
def rep_x2_5y2(p: int) -> Optional[Tuple[int, int]]:
    """``(X, Y)`` with ``X^2 + 5 Y^2 = p`` and ``X, Y >= 0``, or ``None``."""
    for Y in range(isqrt(p // 5) + 1):
        X = isqrt(p - 5 * Y * Y)
        if X * X == p - 5 * Y * Y:
            return X, Y
    return None


@dataclass(frozen=True)
class HeckeLocal:
    """
    Local data of a Hecke eigenform at p: ``a_{p^{k+1}} = a_p a_{p^k} - chi p^w a_{p^{k-1}}``.

    ``a_p`` is an ``(re, im)`` pair and ``twist`` is the weight factor ``p^w``.
    """
    p: int
    a_p: Tuple[int, int]
    chi: int
    twist: int


def hecke_sequence(local: HeckeLocal, k: int, modulus: Optional[int] = None) -> List[Tuple[int, int]]:
    """Terms ``a_{p^0}, ..., a_{p^k}`` as (re, im) pairs, reduced when ``modulus`` is given."""
    def red(z):
        return z if modulus is None else (z[0] % modulus, z[1] % modulus)

    ar, ai = local.a_p
    c = local.chi * local.twist
    seq = [red((1, 0)), red((ar, ai))]
    while len(seq) <= k:
        (xr, xi), (yr, yi) = seq[-1], seq[-2]
        seq.append(red((ar * xr - ai * xi - c * yr, ar * xi + ai * xr - c * yi)))
    return seq[:k + 1]


def hecke_power(local: HeckeLocal, k: int):
    """``a_{p^k}``: an int for rational ``a_p``, a ``ZZ_I`` element otherwise."""
    re, im = hecke_sequence(local, k)[k]
    return re if local.a_p[1] == 0 else ZZ_I(re, im)


def orbit_period(sequence: Sequence) -> Optional[int]:
    """Smallest period p such that the sequence repeats with period p from its start."""
    for period in range(1, len(sequence) // 2 + 1):
        if all(sequence[i] == sequence[i + period] for i in range(len(sequence) - period)):
            return period
    return None


def local_valuation_25(value: Tuple[int, int]) -> int:
    """5-adic content of a Gaussian integer capped at 2: 0, 1 (5 divides) or 2 (25 divides)."""
    re, im = value
    if re % 25 == 0 and im % 25 == 0:
        return 2
    if re % 5 == 0 and im % 5 == 0:
        return 1
    return 0


# weight-5 form S1, normalized with a_1 = 1 -------------------------------------

def chi_s1(p: int) -> int:
    return 1 if p % 4 == 1 else -1


def s1_prime_coefficient(p: int) -> int:
    """a_p of S1 up to sign."""
    if p == 5:
        return -48
    if p % 4 == 3:
        return 0
    r = two_square(p)
    x, y = r.x, r.y
    if p % 12 == 1:
        return 2 * (x * x - 2 * x * y - y * y) * (x * x + 2 * x * y - y * y)
    return 8 * x * y * (x - y) * (x + y)


def _s1_local(p: int) -> HeckeLocal:
    return HeckeLocal(p, (s1_prime_coefficient(p), 0), chi_s1(p), p ** 4)


# weight-3 form S3 -------------------------------------------------------------

def chi_s3(p: int) -> int:
    if p == 5:
        return 0
    return 1 if p % 20 in (1, 3, 7, 9) else -1


def s3_prime_coefficient(p: int) -> Tuple[int, int]:
    """e_p of S3 up to sign, as an (re, im) pair."""
    if p == 5:
        return -4, -3
    if p % 4 == 3:
        return 0, 0
    r = two_square(p)
    x, y = r.x, r.y
    residue = p % 60
    if residue in (1, 49):
        return 2 * (x * x - y * y), 0
    if residue in (13, 37):
        return 0, 4 * x * y
    if residue in (17, 53):
        return 0, 2 * (x * x - y * y)
    if residue in (29, 41):
        return 4 * x * y, 0
    raise ValueError(f"Prime {p} has no S3 coefficient rule")


def _s3_local(p: int) -> HeckeLocal:
    return HeckeLocal(p, s3_prime_coefficient(p), chi_s3(p), p ** 2)


# exact coefficients from lattice sums -----------------------------------------

def _lattice_points(M: int) -> List[Tuple[int, int]]:
    """All (u, v) with u^2 + v^2 = M."""
    points = []
    for u in range(-isqrt(M), isqrt(M) + 1):
        r = M - u * u
        v = isqrt(r)
        if v * v == r:
            points.append((u, v))
            if v:
                points.append((u, -v))
    return points


def coeff_f1_10(n: int) -> int:
    """
    Coefficient of q^n in f1^10 from the weight-5 lattice sums at ``12n + 5``.

    ``48 q^5 f12^10 = i (H8 - H7)``, so with ``H8 - H7 = X + iY`` at ``12n+5`` the
    coefficient is ``-Y/48`` and X vanishes.
    """
    M = 12 * n + 5
    X = Y = 0
    for u, v in _lattice_points(M):
        if u % 6 != 1:
            continue
        sign = 1 if v % 6 == 2 else -1 if v % 6 == 4 else 0
        re = u ** 4 - 6 * u * u * v * v + v ** 4
        im = 4 * u ** 3 * v - 4 * u * v ** 3
        X += sign * re
        Y += sign * im
    if X != 0 or Y % 48:
        raise RuntimeError(f"Lattice sum at {M} is {X}{Y:+d}i, not a multiple of 48i")
    return -Y // 48


_ALPHA_BY_CLASS: Dict[Tuple[int, int], Tuple[int, int]] = {}
for (_a, _b), _unit in zip(UV_OFFSETS, ALPHA):
    _key = (_a % 30, _b % 30)
    _prev = _ALPHA_BY_CLASS.get(_key, (0, 0))
    _ALPHA_BY_CLASS[_key] = (_prev[0] + _unit[0], _prev[1] + _unit[1])


def _s3_coefficient(M: int) -> Tuple[int, int]:
    re_total = im_total = 0
    for u, v in _lattice_points(M):
        cr, ci = _ALPHA_BY_CLASS.get((u % 30, v % 30), (0, 0))
        if cr or ci:
            re, im = u * u - v * v, 2 * u * v
            re_total += cr * re - ci * im
            im_total += cr * im + ci * re
    return re_total, im_total


def coeff_f1_5_f5(n: int) -> int:
    """
    Coefficient of q^n in f1^5 f5 as ``-(3u + 4v)/24`` where S3 has ``u + iv`` at ``12n + 5``.

    Only the combination is integral; u and v separately need not be divisible by 8 and 6.
    """
    if n == 0:
        return 1
    u, v = _s3_coefficient(12 * n + 5)
    t = 3 * u + 4 * v
    if t % 24:
        raise RuntimeError(f"S3 coefficient {u}{v:+d}i at {12 * n + 5} has no integral image")
    return -t // 24


def _A_local(p: int, m: int) -> int:
    if p == 5:
        return (-1) ** m
    r = p % 20
    if r in (1, 9):
        rep = rep_x2_5y2(p)
        if rep is None:
            raise RuntimeError(f"Prime {p} = {r} mod 20 has no representation X^2 + 5Y^2")
        return m + 1 if rep[1] % 2 == 0 else (-1) ** m * (m + 1)
    if m % 2:
        return 0
    return (-1) ** (m // 2) if r in (3, 7) else 1


def A_coeff(n: int) -> int:
    """Coefficient of q^n in f1 f5 as the product of local factors over ``4n + 1``."""
    value = 1
    for p, m in factorize(4 * n + 1):
        value *= _A_local(p, m)
    return value


def _gaussian_prime(p: int) -> Tuple[int, int]:
    r = two_square(p)
    return (r.x, r.y) if r.x % 2 else (r.y, r.x)


def _B_local(p: int, m: int) -> int:
    if p % 4 == 3:
        return 0 if m % 2 else p ** m
    x, y = _gaussian_prime(p)
    pi2 = ZZ_I(x, y) ** 2
    pibar2 = ZZ_I(x, -y) ** 2
    total = sum((pi2 ** r * pibar2 ** (m - r) for r in range(m + 1)), ZZ_I(0, 0))
    return int(total.x)


def B_coeff(n: int) -> int:
    """Coefficient of q^n in f1^6 from multiplicativity over ``4n + 1``."""
    value = 1
    for p, m in factorize(4 * n + 1):
        value *= _B_local(p, m)
    return value


def B_prime_power_residue(p: int, m: int) -> Tuple[int, int]:
    """Residue of ``B_{p^m}`` modulo 5 Z[i] as a pair; the second entry is always 0."""
    if not sp.isprime(p) or p == 2:
        raise ValueError(f"Expected an odd prime, got {p}")
    return _B_local(p, m) % 5, 0


# vanishing predicates ---------------------------------------------------------

@dataclass(frozen=True)
class VanishingVerdict:
    """Whether a coefficient vanishes mod 25, with the condition that decides it."""
    n: int
    vanishes: bool
    condition: Optional[str] = None

    def __post_init__(self):
        if self.vanishes != (self.condition is not None):
            raise ValueError("A verdict names a condition exactly when it vanishes")

    def to_dict(self) -> dict:
        return asdict(self)


def _lacunary_verdict(n: int, local) -> VanishingVerdict:
    """Shared decision for the forms supported on 12n + 5."""
    fac = factorize(12 * n + 5)
    total = 0
    for p, e in fac:
        if p == 5:
            continue
        total += local_valuation_25(hecke_sequence(local(p), e, modulus=25)[e])
    if total < 2:
        return VanishingVerdict(n, False)
    for p, e in fac:
        if p % 4 == 3 and e % 2:
            return VanishingVerdict(n, True, "odd_ord_p_3mod4")
    for p, e in fac:
        if p != 5 and p % 12 == 5 and e % 2:
            r = two_square(p)
            if r.x * r.y * (r.x - r.y) * (r.x + r.y) % 25 == 0:
                return VanishingVerdict(n, True, "odd_ord_p_5mod12_25_divides")
    for p, e in fac:
        if p != 5 and p % 12 == 5 and e % 10 == 9:
            return VanishingVerdict(n, True, "ord_9mod10_p_5mod12")
    for p, e in fac:
        if p % 12 == 1 and e % 25 == 24:
            return VanishingVerdict(n, True, "ord_24mod25_p_1mod12")
    return VanishingVerdict(n, True, "two_primes_5_adic")


def vanish25_f1_10(n: int) -> VanishingVerdict:
    """Whether the coefficient of q^n in f1^10 is 0 mod 25, from the factorization of 12n + 5."""
    return _lacunary_verdict(n, _s1_local)


def vanish25_f1_5_f5(n: int) -> VanishingVerdict:
    """Whether the coefficient of q^n in f1^5 f5 is 0 mod 25, from the factorization of 12n + 5."""
    return _lacunary_verdict(n, _s3_local)


_BAD_CLASSES = (3, 7, 11, 13, 17, 19)


def vanish25_A(n: int) -> VanishingVerdict:
    """Whether the coefficient of q^n in f1 f5 is 0 mod 25, from the factorization of 4n + 1."""
    fac = factorize(4 * n + 1)
    for p, e in fac:
        if p % 20 in _BAD_CLASSES and e % 2:
            return VanishingVerdict(n, True, "odd_ord_p_bad_mod20")
    for p, e in fac:
        if p % 20 in (1, 9) and e % 25 == 24:
            return VanishingVerdict(n, True, "ord_24mod25_p_1_9mod20")
    if sum(1 for p, e in fac if p % 20 in (1, 9) and e % 5 == 4) >= 2:
        return VanishingVerdict(n, True, "two_primes_4mod5_p_1_9mod20")
    return VanishingVerdict(n, False)


def necessary25_B(n: int) -> bool:
    """Necessary condition for the coefficient of q^n in f1^6 to be 0 mod 25."""
    for p, e in factorize(4 * n + 1):
        if p % 20 in (1, 9) and e % 5 == 4:
            return True
        if p % 20 in _BAD_CLASSES and e % 2:
            return True
    return False


def serre_vanishing_mod9(n: int, which: str) -> bool:
    """
    Sufficient condition for a zero coefficient mod 9.

    ``f1_10_case``: 12n + 5 has a prime factor 3 mod 4 to an odd power, so the q^n
    coefficient of f1^7 f3 is 0 mod 9. ``f1_4_case``: 6n + 1 has a prime factor
    2 mod 3 to an odd power, so the q^n coefficient of f1^7 / f3 is 0 mod 9.
    """
    if which == "f1_10_case":
        M, residue, modulus = 12 * n + 5, 3, 4
    elif which == "f1_4_case":
        M, residue, modulus = 6 * n + 1, 2, 3
    else:
        raise ValueError(f"Unknown case {which!r}; expected 'f1_10_case' or 'f1_4_case'")
    return any(p % modulus == residue and e % 2 for p, e in factorize(M))


# oracle against expansion -----------------------------------------------------

@dataclass
class OracleComparison:
    """
    Predicate against direct expansion on ``n < bound``.

    ``exact`` comparisons require the two index sets to coincide; one-directional
    contracts only require the expansion's zeros to satisfy the predicate (or the
    predicate's hits to be zeros for sufficient conditions).
    """
    which: str
    bound: int
    modulus: int
    predicate_count: int
    series_count: int
    mismatches: List[int] = field(default_factory=list)
    contract: str = "iff"

    @property
    def agrees(self) -> bool:
        return not self.mismatches

    @property
    def density(self) -> float:
        return self.series_count / self.bound if self.bound else 0.0


def _serre_f1_10(n):
    return serre_vanishing_mod9(n, "f1_10_case")


def _serre_f1_4(n):
    return serre_vanishing_mod9(n, "f1_4_case")


def _holds(verdict) -> bool:
    return verdict if isinstance(verdict, bool) else verdict.vanishes


# name -> (eta quotient, modulus, predicate, contract)
ORACLES = {
    "f1_10": ("f1^10", 25, vanish25_f1_10, "iff"),
    "f1_5_f5": ("f1^5*f5", 25, vanish25_f1_5_f5, "iff"),
    "f1f5": ("f1*f5", 25, vanish25_A, "iff"),
    "f1_6": ("f1^6", 25, necessary25_B, "necessary"),
    "f1_7_f3": ("f1^7*f3", 9, _serre_f1_10, "sufficient"),
    "f1_7_over_f3": ("f1^7/f3", 9, _serre_f1_4, "sufficient"),
}


def oracle_agreement(which: str, N: int, n_jobs: int = 1, progress: bool = False) -> OracleComparison:
    """
    Compare a closed-form predicate with the zero set of the expansion mod m on ``n < N``.

    Raises
    ------
    ValueError
        For an unknown oracle name.
    """
    if which not in ORACLES:
        raise ValueError(f"Unknown oracle {which!r}; known: {', '.join(ORACLES)}")
    text, modulus, predicate, contract = ORACLES[which]
    zeros = set(zero_indices(eta_series(text, N, CoefficientRing.mod(modulus))).tolist())
    ns = range(N)
    if progress:
        ns = tqdm(ns, desc=f"Oracle {which}")
    hits = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(predicate)(n) for n in ns)
    predicted = {n for n, h in enumerate(hits) if _holds(h)}
    if contract == "iff":
        mismatches = sorted(predicted ^ zeros)
    elif contract == "necessary":
        mismatches = sorted(zeros - predicted)
    else:
        mismatches = sorted(predicted - zeros)
    if mismatches:
        logging.error(f"Oracle {which} disagrees with the expansion at n = {mismatches[:10]}")
    return OracleComparison(which, N, modulus, len(predicted), len(zeros), mismatches, contract)
