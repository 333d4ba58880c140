import numpy as np
from math import isqrt
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple, Dict, Sequence

from eta_congruences.series import (
    GAUSSIAN,
    TruncatedSeries,
    linear_combine,
)
from eta_congruences.qproducts.tables import (
    UV_OFFSETS,
    UV_SLOPE,
    ALPHA,
    BETA,
    GAMMA,
    DELTA,
)

__all__ = [
    "ThetaTerm",
    "ThetaFamily",
    "theta_family_series",
    "THETA_FAMILIES",
    "theta_names",
    "builtin_theta",
]


@dataclass(frozen=True)
class ThetaTerm:
    """One lattice sum: ``u(m) = u[0] m + u[1]``, ``v(n) = v[0] n + v[1]``, scaled by ``coefficient``."""
    u: Tuple[int, int]
    v: Tuple[int, int]
    coefficient: Tuple[int, int] = (1, 0)

    def __post_init__(self):
        if self.u[0] == 0 or self.v[0] == 0:
            raise ValueError(f"Affine forms need nonzero slopes, got u={self.u}, v={self.v}")


@dataclass(frozen=True)
class ThetaFamily:
    """
    ``sum_terms coefficient * sum_{m,n} (u(m) + i v(n))^power q^{u(m)^2 + v(n)^2}``.

    ``halving`` marks forms whose natural normalization carries a factor 1/2; the
    series is always the raw sum and identities double the other side instead.
    """
    terms: Tuple[ThetaTerm, ...]
    power: int
    halving: bool = False

    def __post_init__(self):
        if self.power < 0:
            raise ValueError(f"Power must be non-negative, got {self.power}")


def _affine_values(form: Tuple[int, int], bound: int) -> np.ndarray:
    """All values ``slope m + offset`` with absolute value at most ``bound``."""
    slope, offset = abs(form[0]), form[1]
    lo = -((bound + offset) // slope)
    hi = (bound - offset) // slope
    return slope * np.arange(lo, hi + 1, dtype=np.int64) + offset


def _gaussian_power(u: np.ndarray, v: np.ndarray, t: int) -> Tuple[np.ndarray, np.ndarray]:
    re = np.ones_like(u)
    im = np.zeros_like(u)
    for _ in range(t):
        re, im = re * u - im * v, re * v + im * u
    return re, im


def theta_family_series(fam: ThetaFamily, N: int) -> TruncatedSeries:
    """
    Expand a theta family over the Gaussian integers to N terms.

    The lattice is enumerated exactly: every (m, n) with ``u(m)^2 + v(n)^2 < N``.
    """
    bound = isqrt(max(N - 1, 0))
    # |(u + iv)^t| <= N^{t/2}; fall back to Python integers when that can overflow
    dtype = np.int64 if max(N, 1) ** (fam.power + 2) < 2**124 else object
    acc_re = np.zeros(N, dtype=dtype)
    acc_im = np.zeros(N, dtype=dtype)
    for term in fam.terms:
        us, vs = np.meshgrid(_affine_values(term.u, bound), _affine_values(term.v, bound), indexing="ij")
        us, vs = us.ravel().astype(dtype), vs.ravel().astype(dtype)
        norms = us * us + vs * vs
        keep = norms < N
        us, vs, norms = us[keep], vs[keep], norms[keep].astype(np.int64)
        re, im = _gaussian_power(us, vs, fam.power)
        cr, ci = term.coefficient
        np.add.at(acc_re, norms, cr * re - ci * im)
        np.add.at(acc_im, norms, cr * im + ci * re)
    return TruncatedSeries(GAUSSIAN, acc_re.astype(object), acc_im.astype(object))


def _single(u: Tuple[int, int], v: Tuple[int, int], power: int) -> ThetaFamily:
    return ThetaFamily((ThetaTerm(u, v),), power)


def _build_families() -> Dict[str, ThetaFamily]:
    families = {
        "H3": _single((6, 1), (6, 0), 4),
        "H4": _single((6, 3), (6, -2), 4),
        "H7": _single((6, 1), (6, -2), 4),
        "H8": _single((6, 1), (6, 2), 4),
        "Hf4": ThetaFamily((ThetaTerm((2, 1), (2, 0)),), 2, halving=True),
    }
    for j, (a, b) in enumerate(UV_OFFSETS, start=1):
        families[f"uv{j}"] = _single((UV_SLOPE, a), (UV_SLOPE, b), 2)
    return families


THETA_FAMILIES: Dict[str, ThetaFamily] = _build_families()

# weight-5 combinations: S1 = H3 - H4 + i H7 - i H8, S2 = H3 - H4 - i H7 + i H8
_WEIGHT5_COMBINATIONS = {
    "S1": [((1, 0), "H3"), ((-1, 0), "H4"), ((0, 1), "H7"), ((0, -1), "H8")],
    "S2": [((1, 0), "H3"), ((-1, 0), "H4"), ((0, -1), "H7"), ((0, 1), "H8")],
}

_WEIGHT3_TABLES = {
    "S3": ALPHA,
    "S3bar": BETA,
    "S4": GAMMA,
    "S4bar": DELTA,
}


def theta_names() -> List[str]:
    return list(THETA_FAMILIES) + list(_WEIGHT5_COMBINATIONS) + list(_WEIGHT3_TABLES)


def _weight3_family(units: Sequence[Tuple[int, int]]) -> ThetaFamily:
    terms = tuple(
        ThetaTerm((UV_SLOPE, a), (UV_SLOPE, b), unit)
        for (a, b), unit in zip(UV_OFFSETS, units) if unit != (0, 0)
    )
    return ThetaFamily(terms, 2)


@lru_cache(maxsize=64)
def builtin_theta(name: str, N: int) -> TruncatedSeries:
    """
    A named theta series over the Gaussian integers.

    ``H3``, ``H4``, ``H7``, ``H8``, ``Hf4`` and ``uv1`` ... ``uv96`` are single lattice
    sums; ``S1``, ``S2`` combine the weight-5 sums and ``S3``, ``S3bar``, ``S4``,
    ``S4bar`` weight the 96 forms by the unit tables.

    Raises
    ------
    ValueError
        For an unknown name.
    """
    if name in THETA_FAMILIES:
        return theta_family_series(THETA_FAMILIES[name], N)
    if name in _WEIGHT5_COMBINATIONS:
        return linear_combine(
            (unit, builtin_theta(h, N)) for unit, h in _WEIGHT5_COMBINATIONS[name])
    if name in _WEIGHT3_TABLES:
        return theta_family_series(_weight3_family(_WEIGHT3_TABLES[name]), N)
    raise ValueError(f"Unknown theta series {name!r}; known: H3, H4, H7, H8, Hf4, uv1..uv96, "
                     f"{', '.join(_WEIGHT5_COMBINATIONS)}, {', '.join(_WEIGHT3_TABLES)}")
