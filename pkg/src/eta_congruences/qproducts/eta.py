import re
import numpy as np
from math import isqrt
from fractions import Fraction
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple, Dict, Iterable, Union

from eta_congruences.series import (
    CoefficientRing,
    TruncatedSeries,
    make_series,
    one_series,
    mul,
    divide,
)

__all__ = [
    "MAX_EXPONENT",
    "EtaQuotient",
    "parse_eta",
    "pentagonal_terms",
    "euler_series",
    "eta_series",
    "pochhammer_series",
    "inverse_pochhammer_series",
    "JSymbol",
    "j_symbol_series",
    "borwein_a",
    "square_theta_series",
]

MAX_EXPONENT = 10_000

_TOKPAT = re.compile(r"^f(\d+)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class EtaQuotient:
    """
    The product ``prod_j f_j^{n_j}`` with ``f_j = (q^j; q^j)_inf``.

    ``factors`` is normalized on construction: repeated dilations are merged by
    summing exponents, zero exponents are dropped and the pairs are sorted by j.
    """
    factors: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: Dict[int, int] = defaultdict(int)
        for j, e in self.factors:
            j, e = int(j), int(e)
            if j <= 0:
                raise ValueError(f"Dilation must be positive, got f{j}")
            merged[j] += e
        for j, e in merged.items():
            if abs(e) > MAX_EXPONENT:
                raise ValueError(f"Exponent of f{j} overflows: |{e}| > {MAX_EXPONENT}")
        object.__setattr__(
            self, "factors", tuple(sorted((j, e) for j, e in merged.items() if e)))

    @classmethod
    def from_dict(cls, exponents: Dict[int, int]) -> "EtaQuotient":
        return cls(tuple(exponents.items()))

    def exponent(self, j: int) -> int:
        return dict(self.factors).get(j, 0)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.factors)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(e for _, e in self.factors), 2)

    @property
    def order_at_infinity(self) -> Fraction:
        """Leading exponent of the matching product of eta functions, ``sum j n_j / 24``."""
        return Fraction(sum(j * e for j, e in self.factors), 24)

    def __mul__(self, other: "EtaQuotient") -> "EtaQuotient":
        return EtaQuotient(self.factors + other.factors)

    def __truediv__(self, other: "EtaQuotient") -> "EtaQuotient":
        return EtaQuotient(self.factors + tuple((j, -e) for j, e in other.factors))

    def __pow__(self, k: int) -> "EtaQuotient":
        return EtaQuotient(tuple((j, e * int(k)) for j, e in self.factors))

    def __str__(self) -> str:
        def token(j, e):
            return f"f{j}" if e == 1 else f"f{j}^{e}"
        num = [token(j, e) for j, e in self.factors if e > 0]
        den = [token(j, -e) for j, e in self.factors if e < 0]
        text = "*".join(num) if num else "1"
        return text + "".join(f"/{t}" for t in den)


def parse_eta(text: str) -> EtaQuotient:
    """
    Parse an eta quotient such as ``"f1^2*f2^3/f4"`` or ``"1/f1/f5"``.

    Tokens are ``f<j>`` with an optional ``^<e>`` (e may be negative), or the
    neutral token ``1``, joined by ``*`` and ``/``. Whitespace is ignored.

    Raises
    ------
    ValueError
        On a syntax error, a dilation ``j <= 0`` or a merged exponent larger than
        ``MAX_EXPONENT`` in absolute value.
    """
    compact = text.replace(" ", "")
    if not compact:
        raise ValueError("Empty eta quotient")
    pieces = re.split(r"([*/])", compact)
    factors: List[Tuple[int, int]] = []
    sign = 1
    for i, piece in enumerate(pieces):
        if i % 2:
            sign = 1 if piece == "*" else -1
            continue
        if piece == "1":
            continue
        match = _TOKPAT.match(piece)
        if match is None:
            raise ValueError(f"Bad token: {piece!r} in {text!r}")
        j = int(match.group(1))
        e = int(match.group(2)) if match.group(2) is not None else 1
        if j == 0:
            raise ValueError(f"Dilation must be positive, got f0 in {text!r}")
        factors.append((j, sign * e))
    return EtaQuotient(tuple(factors))


def pentagonal_terms(limit: int) -> List[Tuple[int, int]]:
    """Pairs ``(t(3t-1)/2, t)`` for all integers t with exponent below ``limit``, ascending."""
    terms = [(0, 0)] if limit > 0 else []
    t = 1
    while t * (3 * t - 1) // 2 < limit:
        terms.append((t * (3 * t - 1) // 2, t))
        if t * (3 * t + 1) // 2 < limit:
            terms.append((t * (3 * t + 1) // 2, -t))
        t += 1
    return sorted(terms)


@lru_cache(maxsize=256)
def euler_series(j: int, N: int, ring: CoefficientRing) -> TruncatedSeries:
    """f_j to N terms from Euler's pentagonal expansion ``sum (-1)^t q^{j t(3t-1)/2}``."""
    if j < 1:
        raise ValueError(f"Dilation must be positive, got {j}")
    terms = [(j * e, (-1) ** abs(t)) for e, t in pentagonal_terms(-(-N // j))]
    return make_series(ring, N, [(e, c) for e, c in terms if e < N])


def eta_series(spec: Union[EtaQuotient, str], N: int, ring: CoefficientRing) -> TruncatedSeries:
    """
    Expand an eta quotient to N terms.

    Positive exponents multiply by the sparse Euler products, negative ones divide by
    them through the coefficient recurrence, so no dense inverse is ever formed.
    """
    if isinstance(spec, str):
        spec = parse_eta(spec)
    result = one_series(ring, N)
    for j, e in sorted(spec.factors, key=lambda f: -f[1]):
        base = euler_series(j, N, ring)
        for _ in range(e):
            result = mul(result, base)
        for _ in range(-e):
            result = divide(result, base)
    return result


def _expand_product(N: int, ring: CoefficientRing, factors: Iterable[Tuple[int, int]]) -> TruncatedSeries:
    """Multiply 1 by each ``(1 + sign q^e)`` in turn."""
    arr = np.zeros(N, dtype=ring.dtype)
    arr[0] = 1
    m = ring.modulus
    for e, sign in factors:
        if e < N:
            arr[e:] += sign * arr[:N - e]
            if m is not None:
                np.mod(arr, m, out=arr)
    return _as_series(ring, arr)


def _as_series(ring: CoefficientRing, arr) -> TruncatedSeries:
    imag = np.zeros(len(arr), dtype=ring.dtype) if ring.gaussian else None
    return TruncatedSeries(ring, arr, imag)


def pochhammer_series(
    offset: int,
    step: int,
    N: int,
    ring: CoefficientRing,
    sign: int = -1,
) -> TruncatedSeries:
    """
    ``prod_{k>=0} (1 + sign q^{offset + k step})`` to N terms.

    With ``sign=-1`` this is ``(q^offset; q^step)_inf``, with ``sign=1`` it is
    ``(-q^offset; q^step)_inf``.
    """
    if offset < 1 or step < 1:
        raise ValueError(f"Offset and step must be positive, got {offset}, {step}")
    if sign not in (1, -1):
        raise ValueError(f"Sign must be +1 or -1, got {sign}")
    return _expand_product(N, ring, ((e, sign) for e in range(offset, N, step)))


def inverse_pochhammer_series(offset: int, step: int, N: int, ring: CoefficientRing) -> TruncatedSeries:
    """``1 / (q^offset; q^step)_inf`` by one strided cumulative sum per factor."""
    if offset < 1 or step < 1:
        raise ValueError(f"Offset and step must be positive, got {offset}, {step}")
    arr = np.zeros(N, dtype=ring.dtype)
    arr[0] = 1
    m = ring.modulus
    for e in range(offset, N, step):
        padded = np.zeros(-(-N // e) * e, dtype=ring.dtype)
        padded[:N] = arr
        arr = np.cumsum(padded.reshape(-1, e), axis=0).reshape(-1)[:N]
        if m is not None:
            arr = np.mod(arr, m)
    return _as_series(ring, arr.astype(ring.dtype))


@dataclass(frozen=True)
class JSymbol:
    """``J_{a,m} = (q^a, q^{m-a}, q^m; q^m)_inf``; the barred symbol negates the first two bases."""
    a: int
    m: int
    barred: bool = False

    def __post_init__(self):
        if not 0 < self.a < self.m:
            raise ValueError(f"J symbol needs 0 < a < m, got a={self.a}, m={self.m}")

    def __str__(self) -> str:
        return f"{'Jbar' if self.barred else 'J'}{self.a},{self.m}"


def j_symbol_series(sym: JSymbol, N: int, ring: CoefficientRing) -> TruncatedSeries:
    sign = 1 if sym.barred else -1
    a, m = sym.a, sym.m
    factors = [(e, sign) for e in range(a, N, m)]
    factors += [(e, sign) for e in range(m - a, N, m)]
    factors += [(e, -1) for e in range(m, N, m)]
    return _expand_product(N, ring, factors)


def borwein_a(N: int, ring: CoefficientRing) -> TruncatedSeries:
    """``a(q) = sum_{m,n} q^{m^2 + mn + n^2}`` by lattice enumeration."""
    r = isqrt(4 * max(N - 1, 0) // 3) + 1
    m, n = np.meshgrid(np.arange(-r, r + 1), np.arange(-r, r + 1), indexing="ij")
    norms = (m * m + m * n + n * n).ravel()
    counts = np.bincount(norms[norms < N], minlength=N)
    return _as_series(ring, ring.coerce(counts))


def square_theta_series(N: int, ring: CoefficientRing, alternating: bool = False) -> TruncatedSeries:
    """``sum_n q^{n^2}``, or ``sum_n (-1)^n q^{n^2}`` when ``alternating``."""
    terms = [(0, 1)]
    for n in range(1, isqrt(max(N - 1, 0)) + 1):
        terms.append((n * n, 2 * (-1) ** n if alternating else 2))
    return make_series(ring, N, terms)
