import numpy as np
import sympy as sp
from sympy.polys.domains import ZZ_I
from sympy.polys.domains.gaussiandomains import GaussianElement
from sympy.polys.polyerrors import CoercionFailed
from dataclasses import dataclass
from typing import List, Tuple, Optional, Sequence, Iterable, Union, Any
from numpy.typing import NDArray

__all__ = [
    "CoefficientRing",
    "EXACT",
    "GAUSSIAN",
    "TruncatedSeries",
    "DissectionResult",
    "make_series",
    "from_coefficients",
    "zero_series",
    "one_series",
    "mul",
    "invert",
    "divide",
    "power",
    "linear_combine",
    "dilate",
    "shift",
    "dissect",
    "interleave",
    "reduce_mod",
    "resize",
    "alternate",
    "lift_gaussian",
    "conjugate",
    "real_part",
    "imag_part",
    "residue_twist",
    "nonzero_indices",
    "zero_indices",
    "first_mismatch",
]

# operands with at most N / _SPARSE_RATIO nonzero terms are multiplied by shifted adds
_SPARSE_RATIO = 4
_MAX_MODULUS = 2**31
_INT64_BOUND = 2**63


Scalar = Union[int, Tuple[int, int], GaussianElement, sp.Expr]


def _as_pair(value: Any) -> Tuple[int, int]:
    """Split an integer, a Gaussian integer or an ``(re, im)`` pair into two ints."""
    if isinstance(value, GaussianElement):
        return int(value.x), int(value.y)
    if isinstance(value, tuple):
        if len(value) != 2:
            raise ValueError(f"Expected an (re, im) pair, got {value!r}")
        return int(value[0]), int(value[1])
    if isinstance(value, complex):
        if value.real != int(value.real) or value.imag != int(value.imag):
            raise ValueError(f"Not a Gaussian integer: {value!r}")
        return int(value.real), int(value.imag)
    if isinstance(value, sp.Basic):
        try:
            g = ZZ_I.from_sympy(value)
        except CoercionFailed as exc:
            raise ValueError(f"Not a Gaussian integer: {value!r}") from exc
        return int(g.x), int(g.y)
    if isinstance(value, (int, np.integer)):
        return int(value), 0
    raise ValueError(f"Unsupported coefficient {value!r}")


@dataclass(frozen=True)
class CoefficientRing:
    """
    Coefficient ring of a truncated series.

    ``modulus=None`` and ``gaussian=False`` is the ring of exact integers; a modulus
    selects the integers mod m; ``gaussian=True`` selects the Gaussian integers
    (reduced mod m when a modulus is also given).
    """
    modulus: Optional[int] = None
    gaussian: bool = False

    def __post_init__(self):
        if self.modulus is not None:
            if isinstance(self.modulus, bool) or int(self.modulus) != self.modulus:
                raise ValueError(f"Modulus must be an integer, got {self.modulus!r}")
            if not 2 <= self.modulus <= _MAX_MODULUS:
                raise ValueError(f"Modulus must lie in [2, 2^31], got {self.modulus}")
            object.__setattr__(self, "modulus", int(self.modulus))

    @classmethod
    def exact(cls) -> "CoefficientRing":
        return cls()

    @classmethod
    def mod(cls, m: int) -> "CoefficientRing":
        return cls(modulus=m)

    @classmethod
    def gaussian_int(cls) -> "CoefficientRing":
        return cls(gaussian=True)

    @property
    def kind(self) -> str:
        if self.gaussian:
            return "GaussianInt"
        return "ExactInt" if self.modulus is None else "ModInt"

    @property
    def dtype(self):
        return object if self.modulus is None else np.int64

    def __str__(self) -> str:
        base = "ZZ_I" if self.gaussian else "ZZ"
        return base if self.modulus is None else f"{base}/{self.modulus}"

    def coerce(self, values: Iterable) -> NDArray:
        """Convert integers to a fresh coefficient array of this ring."""
        if isinstance(values, np.ndarray) and values.dtype.kind in "iu":
            if self.modulus is None:
                return values.astype(object)
            return np.mod(values.astype(np.int64), self.modulus)
        items = [int(v) for v in values]
        if self.modulus is None:
            return np.array(items, dtype=object)
        m = self.modulus
        return np.array([v % m for v in items], dtype=np.int64)

    def unit_inverse(self, re: int, im: int = 0) -> Tuple[int, int]:
        """Inverse of a ring element, raising ``ValueError`` when it is not a unit."""
        re, im = int(re), int(im)
        m = self.modulus
        if not self.gaussian:
            if im:
                raise ValueError("Gaussian value in a rational integer ring")
            if m is None:
                if re in (1, -1):
                    return re, 0
                raise ValueError(f"Constant term {re} is not a unit of ZZ")
            try:
                return pow(re, -1, m), 0
            except ValueError:
                raise ValueError(f"Constant term {re % m} is not a unit mod {m}") from None
        norm = re * re + im * im
        if m is None:
            if norm != 1:
                raise ValueError(f"Constant term {re}{im:+d}i is not a unit of ZZ[i]")
            return re, -im
        try:
            ninv = pow(norm, -1, m)
        except ValueError:
            raise ValueError(
                f"Constant term {re % m}{im % m:+d}i is not a unit of ZZ[i]/{m}") from None
        return (re * ninv) % m, (-im * ninv) % m


EXACT = CoefficientRing()
GAUSSIAN = CoefficientRing(gaussian=True)


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """
    The series ``c_0 + c_1 q + ... + c_{N-1} q^{N-1}`` over a coefficient ring.

    ``coeffs`` holds the coefficients (their real parts over Gaussian rings) and
    ``imag`` the imaginary parts, which are present exactly for Gaussian rings. Exact
    coefficients are Python integers in object arrays, modular ones are ``int64`` in
    ``[0, m)``. The arrays are made read-only on construction.
    """
    ring: CoefficientRing
    coeffs: NDArray
    imag: Optional[NDArray] = None

    def __post_init__(self):
        if self.ring.gaussian != (self.imag is not None):
            raise ValueError("Imaginary parts are required exactly for Gaussian rings")
        for arr in self.parts:
            if arr.ndim != 1:
                raise ValueError("Coefficient arrays must be one-dimensional")
            if arr.dtype != self.ring.dtype:
                raise ValueError(f"Coefficient dtype {arr.dtype} does not match ring {self.ring}")
            if arr.shape != self.coeffs.shape:
                raise ValueError("Real and imaginary parts differ in length")
            m = self.ring.modulus
            if m is not None and arr.size and (arr.min() < 0 or arr.max() >= m):
                raise ValueError(f"Coefficients outside [0, {m})")
            arr.setflags(write=False)

    @property
    def parts(self) -> Tuple[NDArray, ...]:
        return (self.coeffs,) if self.imag is None else (self.coeffs, self.imag)

    @property
    def trunc(self) -> int:
        return len(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int):
        if self.imag is None:
            return int(self.coeffs[n])
        return ZZ_I(int(self.coeffs[n]), int(self.imag[n]))

    def to_list(self) -> list:
        return [self[n] for n in range(self.trunc)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.ring == other.ring and self.trunc == other.trunc
                and all(np.array_equal(x, y) for x, y in zip(self.parts, other.parts)))

    __hash__ = None

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.to_list()[:8])
        more = ", ..." if self.trunc > 8 else ""
        return f"TruncatedSeries({self.ring}, N={self.trunc}, [{head}{more}])"

    def _coerce_other(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return linear_combine([(other, one_series(self.ring, self.trunc))])

    def __add__(self, other):
        return linear_combine([(1, self), (1, self._coerce_other(other))])

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return linear_combine([(1, self), (-1, self._coerce_other(other))])

    def __rsub__(self, other):
        return linear_combine([(1, self._coerce_other(other)), (-1, self)])

    def __neg__(self):
        return linear_combine([(-1, self)])

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return linear_combine([(other, self)])

    def __rmul__(self, other):
        return linear_combine([(other, self)])

    def __truediv__(self, other):
        return divide(self, self._coerce_other(other))

    def __pow__(self, e: int):
        return power(self, e)


@dataclass(frozen=True)
class DissectionResult:
    """Components of an m-dissection; component i holds the coefficients of q^{mn+i}."""
    modulus: int
    trunc: int
    components: Tuple[TruncatedSeries, ...]

    def reassemble(self) -> TruncatedSeries:
        return interleave(self)


def _wrap(ring: CoefficientRing, parts: Sequence[NDArray]) -> TruncatedSeries:
    return TruncatedSeries(ring, parts[0], parts[1] if ring.gaussian else None)


def _reduce(ring: CoefficientRing, arr: NDArray) -> NDArray:
    if ring.modulus is None:
        return arr
    return np.mod(arr, ring.modulus)


def _check_compatible(a: TruncatedSeries, b: TruncatedSeries):
    if not isinstance(a, TruncatedSeries) or not isinstance(b, TruncatedSeries):
        raise ValueError("Both operands must be truncated series")
    if a.ring != b.ring:
        raise ValueError(f"Ring mismatch: {a.ring} vs {b.ring}")
    if a.trunc != b.trunc:
        raise ValueError(f"Truncation mismatch: {a.trunc} vs {b.trunc}")


def make_series(
    ring: CoefficientRing,
    trunc: int,
    sparse_terms: Iterable[Tuple[int, Scalar]] = (),
) -> TruncatedSeries:
    """
    Build a series from its nonzero terms.

    Parameters
    ----------
    ring : CoefficientRing
        Target ring; values are reduced into it.
    trunc : int
        Number of stored coefficients N.
    sparse_terms : iterable of (int, value)
        ``(exponent, value)`` pairs with distinct exponents in ``[0, N)``. Values
        may be integers, ``ZZ_I`` elements, ``(re, im)`` pairs or sympy Gaussian
        integers such as ``3 - 4*I``.

    Raises
    ------
    ValueError
        On a duplicate exponent, an exponent outside ``[0, N)``, or a Gaussian value
        for a non-Gaussian ring.
    """
    if trunc < 1:
        raise ValueError(f"Truncation must be positive, got {trunc}")
    re = [0] * trunc
    im = [0] * trunc
    seen = set()
    for exponent, value in sparse_terms:
        exponent = int(exponent)
        if not 0 <= exponent < trunc:
            raise ValueError(f"Exponent {exponent} outside [0, {trunc})")
        if exponent in seen:
            raise ValueError(f"Duplicate exponent {exponent}")
        seen.add(exponent)
        re[exponent], im[exponent] = _as_pair(value)
    if not ring.gaussian and any(im):
        raise ValueError(f"Gaussian value for ring {ring}")
    parts = [ring.coerce(re), ring.coerce(im)]
    return _wrap(ring, parts)


def from_coefficients(ring: CoefficientRing, values: Iterable[Scalar]) -> TruncatedSeries:
    """Dense constructor: the n-th value becomes the coefficient of q^n."""
    pairs = [_as_pair(v) for v in values]
    if not ring.gaussian and any(y for _, y in pairs):
        raise ValueError(f"Gaussian value for ring {ring}")
    return _wrap(ring, [ring.coerce([x for x, _ in pairs]), ring.coerce([y for _, y in pairs])])


def zero_series(ring: CoefficientRing, trunc: int) -> TruncatedSeries:
    return _wrap(ring, [np.zeros(trunc, dtype=ring.dtype) for _ in range(2)])


def one_series(ring: CoefficientRing, trunc: int) -> TruncatedSeries:
    re = np.zeros(trunc, dtype=ring.dtype)
    if trunc:
        re[0] = 1
    return _wrap(ring, [re, np.zeros(trunc, dtype=ring.dtype)])


def resize(a: TruncatedSeries, trunc: int) -> TruncatedSeries:
    """Truncate or zero-pad ``a`` to ``trunc`` coefficients."""
    if trunc < 0:
        raise ValueError(f"Truncation must be non-negative, got {trunc}")
    parts = []
    for arr in a.parts:
        out = np.zeros(trunc, dtype=arr.dtype)
        k = min(trunc, a.trunc)
        out[:k] = arr[:k]
        parts.append(out)
    return _wrap(a.ring, parts)


def _sparse_product(dense: NDArray, sparse: NDArray, N: int, modulus: Optional[int]) -> NDArray:
    out = np.zeros(N, dtype=dense.dtype)
    support = np.flatnonzero(sparse[:N])
    reduce_each = modulus is not None and (modulus - 1) ** 2 * (len(support) + 1) >= _INT64_BOUND // 2
    for k in support:
        out[k:] += sparse[k] * dense[:N - k]
        if reduce_each:
            np.mod(out, modulus, out=out)
    if modulus is not None:
        out = np.mod(out, modulus)
    return out


def _convolve(a: NDArray, b: NDArray, N: int, modulus: Optional[int]) -> NDArray:
    """Truncated product of two coefficient arrays of the same dtype."""
    if N == 0:
        return a[:0].copy()
    nnz_a, nnz_b = np.count_nonzero(a), np.count_nonzero(b)
    if nnz_b > nnz_a:
        a, b, nnz_a, nnz_b = b, a, nnz_b, nnz_a
    if nnz_b * _SPARSE_RATIO <= N:
        return _sparse_product(a, b, N, modulus)
    if modulus is None:
        return np.convolve(a, b)[:N]
    if (modulus - 1) ** 2 * N < _INT64_BOUND:
        return np.mod(np.convolve(a, b)[:N], modulus)
    out = np.convolve(a.astype(object), b.astype(object))[:N]
    return np.mod(out, modulus).astype(np.int64)


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """
    Truncated Cauchy product.

    A factor with few nonzero terms (an Euler product, a theta series) is applied
    by shifted slice additions; dense factors go through ``numpy.convolve``.

    Raises
    ------
    ValueError
        On a ring or truncation mismatch.
    """
    _check_compatible(a, b)
    ring, N, m = a.ring, a.trunc, a.ring.modulus
    if not ring.gaussian:
        return _wrap(ring, [_convolve(a.coeffs, b.coeffs, N, m)])
    rr = _convolve(a.coeffs, b.coeffs, N, m)
    ii = _convolve(a.imag, b.imag, N, m)
    ri = _convolve(a.coeffs, b.imag, N, m)
    ir = _convolve(a.imag, b.coeffs, N, m)
    return _wrap(ring, [_reduce(ring, rr - ii), _reduce(ring, ri + ir)])


def _sparse_divide(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    ring, m = a.ring, a.ring.modulus
    c0inv, _ = ring.unit_inverse(b.coeffs[0])
    terms = [(int(k), int(b.coeffs[k])) for k in np.flatnonzero(b.coeffs) if k > 0]
    quotient = [int(v) for v in a.coeffs]
    for n in range(a.trunc):
        acc = quotient[n]
        for k, c in terms:
            if k > n:
                break
            acc -= c * quotient[n - k]
        acc *= c0inv
        quotient[n] = acc if m is None else acc % m
    return _wrap(ring, [ring.coerce(quotient)])


def invert(a: TruncatedSeries) -> TruncatedSeries:
    """
    Multiplicative inverse up to truncation.

    Sparse series are inverted by the coefficient recurrence, dense ones by Newton
    iteration ``b <- b (2 - a b)`` with doubling precision.

    Raises
    ------
    ValueError
        If the constant term is not a unit of the ring.
    """
    ring, N = a.ring, a.trunc
    if N == 0:
        return a
    c0 = ring.unit_inverse(a.coeffs[0], a.imag[0] if ring.gaussian else 0)
    if not ring.gaussian and np.count_nonzero(a.coeffs) * _SPARSE_RATIO <= N:
        return _sparse_divide(one_series(ring, N), a)
    inverse = make_series(ring, 1, [(0, c0)])
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        guess = resize(inverse, prec)
        correction = 2 - mul(resize(a, prec), guess)
        inverse = mul(guess, correction)
    return inverse


def divide(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Quotient ``a / b``; a sparse divisor is handled without forming its inverse."""
    _check_compatible(a, b)
    if a.trunc == 0:
        return a
    if a.ring.gaussian or np.count_nonzero(b.coeffs) * _SPARSE_RATIO > a.trunc:
        return mul(a, invert(b))
    return _sparse_divide(a, b)


def power(a: TruncatedSeries, e: int) -> TruncatedSeries:
    """
    ``a**e`` by repeated squaring; a negative exponent inverts first.

    Raises
    ------
    ValueError
        For a negative exponent when the constant term is not a unit.
    """
    e = int(e)
    if e < 0:
        a, e = invert(a), -e
    result = one_series(a.ring, a.trunc)
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def linear_combine(terms: Iterable[Tuple[Scalar, TruncatedSeries]]) -> TruncatedSeries:
    """
    Pointwise sum of ``scalar * series``.

    Scalars are integers, or Gaussian integers when the ring is Gaussian.

    Raises
    ------
    ValueError
        On an empty term list, a ring or truncation mismatch, or a Gaussian scalar
        for a rational ring.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("linear_combine needs at least one term")
    first = terms[0][1]
    ring, m = first.ring, first.ring.modulus
    acc = [np.zeros(first.trunc, dtype=ring.dtype) for _ in first.parts]
    for scalar, s in terms:
        _check_compatible(first, s)
        x, y = _as_pair(scalar)
        if not ring.gaussian and y:
            raise ValueError(f"Gaussian scalar {scalar!r} for ring {ring}")
        if m is not None:
            x, y = x % m, y % m
        acc[0] = _reduce(ring, acc[0] + _reduce(ring, x * s.coeffs))
        if ring.gaussian:
            acc[0] = _reduce(ring, acc[0] - _reduce(ring, y * s.imag))
            acc[1] = _reduce(ring, acc[1] + _reduce(ring, x * s.imag))
            acc[1] = _reduce(ring, acc[1] + _reduce(ring, y * s.coeffs))
    return _wrap(ring, acc)


def dilate(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """Substitute q -> q^k, keeping the truncation."""
    if k < 1:
        raise ValueError(f"Dilation factor must be positive, got {k}")
    parts = []
    for arr in a.parts:
        out = np.zeros(a.trunc, dtype=arr.dtype)
        out[::k] = arr[:(a.trunc + k - 1) // k]
        parts.append(out)
    return _wrap(a.ring, parts)


def shift(a: TruncatedSeries, s: int) -> TruncatedSeries:
    """Multiply by q^s, dropping terms past the truncation."""
    if s < 0:
        raise ValueError(f"Shift must be non-negative, got {s}")
    parts = []
    for arr in a.parts:
        out = np.zeros(a.trunc, dtype=arr.dtype)
        if s < a.trunc:
            out[s:] = arr[:a.trunc - s]
        parts.append(out)
    return _wrap(a.ring, parts)


def dissect(a: TruncatedSeries, m: int) -> DissectionResult:
    """
    Split ``a`` into its m residue-class components.

    Component i at index n holds the coefficient of q^{mn+i}; its truncation is the
    number of such exponents below N, so it is empty when i >= N.
    """
    if m < 1:
        raise ValueError(f"Dissection modulus must be positive, got {m}")
    components = tuple(
        _wrap(a.ring, [arr[i::m].copy() for arr in a.parts]) for i in range(m)
    )
    return DissectionResult(modulus=m, trunc=a.trunc, components=components)


def interleave(dissection: DissectionResult) -> TruncatedSeries:
    """Reassemble ``sum_i q^i G_i(q^m)`` from a dissection."""
    m, N = dissection.modulus, dissection.trunc
    if len(dissection.components) != m:
        raise ValueError(f"Expected {m} components, got {len(dissection.components)}")
    ring = dissection.components[0].ring
    parts = [np.zeros(N, dtype=ring.dtype) for _ in dissection.components[0].parts]
    for i, comp in enumerate(dissection.components):
        if comp.ring != ring:
            raise ValueError(f"Ring mismatch: {comp.ring} vs {ring}")
        for out, arr in zip(parts, comp.parts):
            seg = arr[:len(out[i::m])]
            out[i::m][:len(seg)] = seg
    return _wrap(ring, parts)


def reduce_mod(a: TruncatedSeries, m: int) -> TruncatedSeries:
    """
    Coefficientwise reduction into ``[0, m)``.

    Gaussian series reduce both parts and land in ``CoefficientRing(m, gaussian=True)``.
    A series that is already modular can be reduced to a divisor of its modulus.
    """
    target = CoefficientRing(modulus=m, gaussian=a.ring.gaussian)
    if a.ring.modulus is not None and a.ring.modulus % m:
        raise ValueError(f"Cannot reduce {a.ring} modulo {m}")
    return _wrap(target, [np.mod(arr, m).astype(np.int64) for arr in a.parts])


def alternate(a: TruncatedSeries) -> TruncatedSeries:
    """Substitute q -> -q."""
    parts = []
    for arr in a.parts:
        out = arr.copy()
        out[1::2] = -out[1::2]
        parts.append(_reduce(a.ring, out))
    return _wrap(a.ring, parts)


def lift_gaussian(a: TruncatedSeries) -> TruncatedSeries:
    """View a rational-integer series as a Gaussian one with zero imaginary part."""
    if a.ring.gaussian:
        return a
    ring = CoefficientRing(modulus=a.ring.modulus, gaussian=True)
    return TruncatedSeries(ring, a.coeffs.copy(), np.zeros(a.trunc, dtype=ring.dtype))


def conjugate(a: TruncatedSeries) -> TruncatedSeries:
    if not a.ring.gaussian:
        return a
    return _wrap(a.ring, [a.coeffs.copy(), _reduce(a.ring, -a.imag)])


def real_part(a: TruncatedSeries) -> TruncatedSeries:
    ring = CoefficientRing(modulus=a.ring.modulus)
    return TruncatedSeries(ring, a.coeffs.copy())


def imag_part(a: TruncatedSeries) -> TruncatedSeries:
    ring = CoefficientRing(modulus=a.ring.modulus)
    if not a.ring.gaussian:
        return zero_series(ring, a.trunc)
    return TruncatedSeries(ring, a.imag.copy())


def residue_twist(a: TruncatedSeries, modulus: int, signs: Sequence[int]) -> TruncatedSeries:
    """Multiply the coefficient of q^n by ``signs[n % modulus]``."""
    if len(signs) != modulus:
        raise ValueError(f"Expected {modulus} weights, got {len(signs)}")
    weights = [int(signs[n % modulus]) for n in range(a.trunc)]
    parts = []
    for arr in a.parts:
        w = a.ring.coerce(weights)
        parts.append(_reduce(a.ring, arr * w))
    return _wrap(a.ring, parts)


def nonzero_indices(a: TruncatedSeries) -> NDArray:
    """Exponents whose coefficient is nonzero, ascending."""
    idx = np.flatnonzero(a.coeffs)
    if a.imag is not None:
        idx = np.union1d(idx, np.flatnonzero(a.imag))
    return idx.astype(np.int64)


def zero_indices(a: TruncatedSeries) -> NDArray:
    """Exponents whose coefficient vanishes, ascending."""
    mask = np.ones(a.trunc, dtype=bool)
    mask[nonzero_indices(a)] = False
    return np.flatnonzero(mask)


def first_mismatch(a: TruncatedSeries, b: TruncatedSeries) -> Optional[int]:
    """Smallest exponent where ``a`` and ``b`` differ, or ``None``."""
    diff = nonzero_indices(a - b)
    return int(diff[0]) if len(diff) else None
