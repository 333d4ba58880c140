import time
import logging
import numpy as np
from collections import defaultdict
from dataclasses import dataclass
from typing import List, Tuple, Dict, Optional, Callable, Union, Sequence

from joblib import Parallel, delayed

from eta_congruences.report import VerifyReport, HypothesisError
from eta_congruences.series import (
    EXACT,
    CoefficientRing,
    TruncatedSeries,
    make_series,
    zero_series,
    one_series,
    shift,
    dilate,
    alternate,
    lift_gaussian,
    conjugate,
    real_part,
    imag_part,
    reduce_mod,
    residue_twist,
    first_mismatch,
)
from eta_congruences.qproducts import (
    EtaQuotient,
    JSymbol,
    parse_eta,
    eta_series,
    j_symbol_series,
    borwein_a,
    square_theta_series,
    pentagonal_terms,
    builtin_theta,
)

__all__ = [
    "DEFAULT_BOUND",
    "DEEP_BOUND",
    "CM_BOUND",
    "RegistryEntry",
    "REGISTRY",
    "registry_ids",
    "verify",
    "verify_identity",
    "verify_congruence",
    "verify_all",
    "TheoremFamilyHypothesis",
    "mod4_second_set",
    "mod4_second_quotient",
    "check_mod4_main",
    "check_mod4_second",
    "check_mod9",
]

DEFAULT_BOUND = 1000
DEEP_BOUND = 3000
CM_BOUND = 3000

Sides = Tuple[TruncatedSeries, TruncatedSeries]


class _Ctx:
    """Series constructors at a fixed truncation and ring."""

    def __init__(self, N: int, ring: CoefficientRing):
        self.N = N
        self.ring = ring

    def eta(self, text: str) -> TruncatedSeries:
        return eta_series(parse_eta(text), self.N, self.ring)

    def J(self, a: int, m: int) -> TruncatedSeries:
        return j_symbol_series(JSymbol(a, m), self.N, self.ring)

    def Jbar(self, a: int, m: int) -> TruncatedSeries:
        return j_symbol_series(JSymbol(a, m, barred=True), self.N, self.ring)

    def theta(self, name: str) -> TruncatedSeries:
        s = builtin_theta(name, self.N)
        return s if self.ring.modulus is None else reduce_mod(s, self.ring.modulus)

    def gauss(self, s: TruncatedSeries) -> TruncatedSeries:
        return lift_gaussian(s)

    def zero(self, gaussian: bool = False) -> TruncatedSeries:
        ring = CoefficientRing(modulus=self.ring.modulus, gaussian=gaussian)
        return zero_series(ring, self.N)


@dataclass(frozen=True)
class RegistryEntry:
    """
    A named identity or congruence.

    ``build(ctx)`` returns both sides; congruences are compared after reduction
    modulo ``modulus``. ``sturm_bound`` records a known proof bound as metadata only.
    """
    id: str
    kind: str
    build: Callable[[_Ctx], Sides]
    modulus: Optional[int] = None
    default_bound: int = DEFAULT_BOUND
    sturm_bound: Optional[int] = None
    gaussian: bool = False
    description: str = ""
    note: str = ""


# identities -------------------------------------------------------------------

def _f1_2dissect_a(c: _Ctx) -> Sides:
    return c.eta("f1"), c.eta("f2/f4") * (c.Jbar(6, 16) - shift(c.Jbar(2, 16), 1))


def _f1_2dissect_b(c: _Ctx) -> Sides:
    return c.eta("1/f1"), c.eta("1/f2^2") * (c.Jbar(6, 16) + shift(c.Jbar(2, 16), 1))


def _minus_q_product(c: _Ctx) -> Sides:
    return alternate(c.eta("f1")), c.eta("f2^3/f1/f4")


def _f12f2_theta(c: _Ctx) -> Sides:
    return c.eta("f1^2/f2"), square_theta_series(c.N, c.ring, alternating=True)


def _f12f2_2dissect(c: _Ctx) -> Sides:
    return c.eta("f1^2/f2"), c.eta("f8^5/f4^2/f16^2") - 2 * shift(c.eta("f16^2/f8"), 1)


def _f1_jbar12(c: _Ctx) -> Sides:
    return c.eta("f1"), c.Jbar(5, 12) - shift(c.Jbar(1, 12), 1)


def _f1_3dissect(c: _Ctx) -> Sides:
    rhs = c.J(12, 27) - shift(c.J(6, 27), 1) - shift(c.J(3, 27), 2)
    return c.eta("f1"), rhs


def _borwein_a_q3(c: _Ctx) -> Sides:
    return dilate(borwein_a(c.N, c.ring), 3), c.eta("f1^3/f3") + 3 * shift(c.eta("f9^3/f3"), 1)


def _f3f13_borwein(c: _Ctx) -> Sides:
    a3 = dilate(borwein_a(c.N, c.ring), 3)
    c1 = c.eta("f9^3/f3")
    inner = a3 * a3 + 3 * shift(a3 * c1, 1) + 9 * shift(c.eta("f9^6/f3^2"), 2)
    return c.eta("f3/f1^3"), c.eta("f9^3/f3^9") * inner


def _f12f23_2dissect(c: _Ctx) -> Sides:
    rhs = (c.eta("f8^15/f4^4/f16^6")
           - 2 * shift(c.eta("f8^9/f4^2/f16^2"), 1)
           - 4 * shift(c.eta("f8^3*f16^2"), 2)
           + 8 * shift(c.eta("f4^2*f16^6/f8^3"), 3))
    return c.eta("f1^2*f2^3"), rhs


def _f16f42f23_2dissect(c: _Ctx) -> Sides:
    rhs = (c.eta("f8^15/f4^4/f16^6")
           - 6 * shift(c.eta("f8^9/f4^2/f16^2"), 1)
           + 12 * shift(c.eta("f8^3*f16^2"), 2)
           - 8 * shift(c.eta("f4^2*f16^6/f8^3"), 3))
    return c.eta("f1^6*f4^2/f2^3"), rhs


def _sum_squares_theta(c: _Ctx) -> Sides:
    return c.eta("f2^5/f1^2/f4^2"), square_theta_series(c.N, c.ring)


def _f110_S1S2(c: _Ctx) -> Sides:
    x = c.gauss(shift(c.eta("f12^10"), 5))
    return 96 * x + c.theta("S1") - c.theta("S2"), c.zero(gaussian=True)


def _f110_H7H8(c: _Ctx) -> Sides:
    x = c.gauss(shift(c.eta("f12^10"), 5))
    return 48 * x, (0, 1) * (c.theta("H8") - c.theta("H7"))


def _f15f5_S3S4(c: _Ctx) -> Sides:
    y = c.gauss(shift(c.eta("f12^5*f60"), 5))
    rhs = ((-3, 4) * c.theta("S3") + (-3, -4) * c.theta("S3bar")
           + (3, -4) * c.theta("S4") + (3, 4) * c.theta("S4bar"))
    return 96 * y, rhs


_RESIDUE_1_5 = [0, 1, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0]
_RESIDUE_5 = [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0]


def _S1S2_twist(c: _Ctx) -> Sides:
    return c.theta("S2"), residue_twist(c.theta("S1"), 12, _RESIDUE_1_5)


def _S3S4_twist(c: _Ctx) -> Sides:
    return c.theta("S4"), residue_twist(c.theta("S3"), 12, _RESIDUE_1_5)


def _S3bar_conjugate(c: _Ctx) -> Sides:
    return c.theta("S3bar"), conjugate(c.theta("S3"))


def _S4bar_conjugate(c: _Ctx) -> Sides:
    return c.theta("S4bar"), conjugate(c.theta("S4"))


def _f110_S1_residue5(c: _Ctx) -> Sides:
    x = c.gauss(shift(c.eta("f12^10"), 5))
    return 48 * x, -residue_twist(c.theta("S1"), 12, _RESIDUE_5)


def _f15f5_S3_residue5(c: _Ctx) -> Sides:
    t = residue_twist(c.theta("S3"), 12, _RESIDUE_5)
    rhs = -12 * real_part(t) - 16 * imag_part(t)
    return 96 * shift(c.eta("f12^5*f60"), 5), rhs


def _odd_even_lattice_f4(c: _Ctx) -> Sides:
    return c.theta("Hf4"), c.gauss(2 * shift(c.eta("f4^6"), 1))


# congruences ------------------------------------------------------------------

def _jbar16_mod4_a(c: _Ctx) -> Sides:
    j2, j6 = c.Jbar(2, 16), c.Jbar(6, 16)
    lhs = (-2 * shift(c.eta("f16^2/f8") * j2, 2)
           - c.eta("f2^2/f4") * j6
           + 2 * j6
           - c.eta("f8^5/f4^2/f16^2") * j6)
    return lhs, c.zero()


def _jbar16_mod4_b(c: _Ctx) -> Sides:
    j2, j6 = c.Jbar(2, 16), c.Jbar(6, 16)
    lhs = (c.eta("f2^2/f4") * j2
           + c.eta("f8^5/f4^2/f16^2") * j2
           + 2 * c.eta("f16^2/f8") * j6)
    return lhs, c.zero()


def _f1_jbar512_mod4(c: _Ctx) -> Sides:
    lhs = c.eta("f1") * (c.eta("f1^2/f2") + c.eta("f3^2/f6")) - 2 * c.Jbar(5, 12)
    return lhs, c.zero()


def _f12f2f4_mod4(c: _Ctx) -> Sides:
    return c.eta("f1^2*f2/f4"), c.eta("f1^2/f2") + c.eta("f2^2/f4") - 1


def _j27_parts(c: _Ctx):
    x = 2 * (c.eta("f1^3/f3") - 1) - 3 * shift(c.eta("f9^3/f3"), 1)
    return x, c.eta("f9^3/f3"), c.J(3, 27), c.J(6, 27), c.J(12, 27)


def _j27_a_expr(c: _Ctx) -> TruncatedSeries:
    x, c1, j3, _, j12 = _j27_parts(c)
    return x * j12 - 3 * shift(c1 * j3, 3)


def _j27_b_expr(c: _Ctx) -> TruncatedSeries:
    x, c1, _, j6, j12 = _j27_parts(c)
    return (x + 3) * j6 - 3 * c1 * j12


def _j27_c_expr(c: _Ctx) -> TruncatedSeries:
    x, c1, j3, j6, _ = _j27_parts(c)
    return (x - 3) * j3 + 3 * c1 * j6


def _j27_a(c: _Ctx) -> Sides:
    return _j27_a_expr(c), c.zero()


def _j27_b(c: _Ctx) -> Sides:
    return _j27_b_expr(c), c.zero()


def _j27_c(c: _Ctx) -> Sides:
    return _j27_c_expr(c), c.zero()


def _f3f13_mod9(c: _Ctx) -> Sides:
    return c.eta("f3/f1^3"), 2 * c.eta("f1^3/f3") - 1


def _borwein_a_mod3(c: _Ctx) -> Sides:
    return borwein_a(c.N, c.ring) - 1, c.zero()


def _borwein_a_square_mod9(c: _Ctx) -> Sides:
    a = borwein_a(c.N, c.ring)
    return a * a, 2 * a - 1


def _f125_over_f55(c: _Ctx) -> Sides:
    a = c.eta("f1^10")
    return a * c.eta("f1^25/f5^5"), a


def _f110_S1_mod25(c: _Ctx) -> Sides:
    x = c.gauss(shift(c.eta("f12^10"), 5))
    return x, 13 * residue_twist(c.theta("S1"), 12, _RESIDUE_5)


# sample member of the mod-9 family: A = f1^4 f2^3 f3 with P = f1^3 f2^3 and D = f3
def _mod9_family_parts(c: _Ctx):
    a = c.eta("f1^4*f2^3*f3")
    b = a * c.eta("f3/f1^3")
    d = c.eta("f3")
    a0 = residue_twist(c.eta("f1^3*f2^3"), 3, [1, 0, 0])
    return a, b, d * a0


def _mod9_residue0(c: _Ctx) -> Sides:
    a, b, da0 = _mod9_family_parts(c)
    return residue_twist(b - a, 3, [1, 0, 0]), da0 * _j27_a_expr(c)


def _mod9_residue1(c: _Ctx) -> Sides:
    a, b, da0 = _mod9_family_parts(c)
    return residue_twist(b + 2 * a, 3, [0, 1, 0]), -shift(da0 * _j27_b_expr(c), 1)


def _mod9_residue2(c: _Ctx) -> Sides:
    a, b, da0 = _mod9_family_parts(c)
    return residue_twist(2 * b + a, 3, [0, 0, 1]), shift(da0 * _j27_c_expr(c), 2)


def _identity(id, build, description, gaussian=False, **kw) -> RegistryEntry:
    bound = CM_BOUND if gaussian else DEFAULT_BOUND
    return RegistryEntry(id, "identity", build, None, bound, gaussian=gaussian,
                         description=description, **kw)


def _congruence(id, build, modulus, description, gaussian=False, **kw) -> RegistryEntry:
    bound = CM_BOUND if gaussian else DEFAULT_BOUND
    return RegistryEntry(id, "congruence", build, modulus, bound, gaussian=gaussian,
                         description=description, **kw)


REGISTRY: Dict[str, RegistryEntry] = {e.id: e for e in [
    _identity("f1-2dissect-a", _f1_2dissect_a, "f1 = (f2/f4)(Jbar6,16 - q Jbar2,16)"),
    _identity("f1-2dissect-b", _f1_2dissect_b, "1/f1 = (1/f2^2)(Jbar6,16 + q Jbar2,16)"),
    _identity("minus-q-product", _minus_q_product, "(-q;-q)_inf = f2^3/(f1 f4)"),
    _identity("f12f2-theta", _f12f2_theta, "f1^2/f2 = 1 + 2 sum (-1)^n q^{n^2}"),
    _identity("f12f2-2dissect", _f12f2_2dissect, "f1^2/f2 = f8^5/(f4^2 f16^2) - 2q f16^2/f8"),
    _identity("f1-jbar12", _f1_jbar12, "f1 = Jbar5,12 - q Jbar1,12"),
    _identity("f1-3dissect", _f1_3dissect, "f1 = J12,27 - q J6,27 - q^2 J3,27"),
    _identity("borwein-a-q3", _borwein_a_q3, "a(q^3) = f1^3/f3 + 3q f9^3/f3"),
    _identity("f3f13-borwein", _f3f13_borwein,
              "f3/f1^3 = (f9^3/f3^9)(a(q^3)^2 + 3q a(q^3) f9^3/f3 + 9q^2 f9^6/f3^2)"),
    _identity("f12f23-2dissect", _f12f23_2dissect, "2-dissection of f1^2 f2^3"),
    _identity("f16f42f23-2dissect", _f16f42f23_2dissect, "2-dissection of f1^6 f4^2/f2^3",
              note="the q^3 term is -8 q^3 f4^2 f16^6/f8^3; without f4^2 it fails at q^7"),
    _identity("sum-squares-theta", _sum_squares_theta, "f2^5/(f1^2 f4^2) = sum q^{n^2}"),
    _identity("f110-S1S2-combination", _f110_S1S2, "96 q^5 f12^10 + S1 - S2 = 0", gaussian=True),
    _identity("f110-H7H8", _f110_H7H8, "48 q^5 f12^10 = i (H8 - H7)", gaussian=True),
    _identity("f110-S1-residue5", _f110_S1_residue5,
              "48 q^5 f12^10 = -(terms of S1 at exponents 5 mod 12)", gaussian=True),
    _identity("f15f5-S3S4-combination", _f15f5_S3S4,
              "96 q^5 f12^5 f60 = (-3+4i)S3 + (-3-4i)S3bar + (3-4i)S4 + (3+4i)S4bar", gaussian=True),
    _identity("f15f5-S3-residue5", _f15f5_S3_residue5,
              "96 q^5 f12^5 f60 = -12 Re T - 16 Im T, T = terms of S3 at exponents 5 mod 12",
              gaussian=True),
    _identity("S1S2-twist", _S1S2_twist, "S2 = S1 at 1 mod 12, -S1 at 5 mod 12, 0 otherwise",
              gaussian=True),
    _identity("S3S4-twist", _S3S4_twist, "S4 = S3 at 1 mod 12, -S3 at 5 mod 12, 0 otherwise",
              gaussian=True),
    _identity("S3bar-conjugate", _S3bar_conjugate, "S3bar = conj(S3)", gaussian=True),
    _identity("S4bar-conjugate", _S4bar_conjugate, "S4bar = conj(S4)", gaussian=True),
    _identity("odd-even-lattice-f4", _odd_even_lattice_f4, "sum (2m+1+2ni)^2 q^{norm} = 2 q f4^6", gaussian=True),
    _congruence("jbar16-mod4-a", _jbar16_mod4_a, 4,
                "-2q^2 f16^2 Jbar2,16/f8 - f2^2 Jbar6,16/f4 + 2 Jbar6,16 - f8^5 Jbar6,16/(f4^2 f16^2) = 0"),
    _congruence("jbar16-mod4-b", _jbar16_mod4_b, 4,
                "f2^2 Jbar2,16/f4 + f8^5 Jbar2,16/(f4^2 f16^2) + 2 f16^2 Jbar6,16/f8 = 0"),
    _congruence("f1-jbar512-mod4", _f1_jbar512_mod4, 4, "f1 (f1^2/f2 + f3^2/f6) - 2 Jbar5,12 = 0"),
    _congruence("f12f2f4-mod4", _f12f2f4_mod4, 4, "f1^2 f2/f4 = f1^2/f2 + f2^2/f4 - 1"),
    _congruence("j27-mod9-a", _j27_a, 9, "X J12,27 - 3q^3 (f9^3/f3) J3,27 = 0", sturm_bound=243),
    _congruence("j27-mod9-b", _j27_b, 9, "(X + 3) J6,27 - 3 (f9^3/f3) J12,27 = 0", sturm_bound=243),
    _congruence("j27-mod9-c", _j27_c, 9, "(X - 3) J3,27 + 3 (f9^3/f3) J6,27 = 0", sturm_bound=243),
    _congruence("f3f13-mod9", _f3f13_mod9, 9, "f3/f1^3 = 2 f1^3/f3 - 1"),
    _congruence("borwein-a-mod3", _borwein_a_mod3, 3, "a(q) - 1 = 0"),
    _congruence("borwein-a-square-mod9", _borwein_a_square_mod9, 9, "a(q)^2 = 2 a(q) - 1"),
    _congruence("f125-over-f55-trivial", _f125_over_f55, 25, "A f1^25/f5^5 = A for A = f1^10"),
    _congruence("f110-S1-mod25", _f110_S1_mod25, 25,
                "q^5 f12^10 = 13 (terms of S1 at exponents 5 mod 12)", gaussian=True),
    _congruence("mod9-residue0", _mod9_residue0, 9,
                "sum (b_3n - a_3n) q^3n = D A0 (j27-mod9-a expression), A = f1^4 f2^3 f3"),
    _congruence("mod9-residue1", _mod9_residue1, 9,
                "sum (b_3n+1 + 2a_3n+1) q^3n+1 = -D A0 q (j27-mod9-b expression), A = f1^4 f2^3 f3"),
    _congruence("mod9-residue2", _mod9_residue2, 9,
                "sum (2b_3n+2 + a_3n+2) q^3n+2 = D A0 q^2 (j27-mod9-c expression), A = f1^4 f2^3 f3",
                note="holds with the factor A0 on the right-hand side, "
                     "not without it"),
]}


def registry_ids() -> List[str]:
    return list(REGISTRY)


def _entry(id: str) -> RegistryEntry:
    try:
        return REGISTRY[id]
    except KeyError:
        raise ValueError(f"Unknown registry id {id!r}") from None


def _report(
    identity_id: str,
    lhs: TruncatedSeries,
    rhs: TruncatedSeries,
    N: int,
    modulus: Optional[int],
    note: str = "",
) -> VerifyReport:
    if modulus is not None:
        lhs, rhs = reduce_mod(lhs, modulus), reduce_mod(rhs, modulus)
    k = first_mismatch(lhs, rhs)
    if k is None:
        return VerifyReport(identity_id, N, modulus, note=note)
    return VerifyReport(identity_id, N, modulus, "fail", k, lhs[k], rhs[k], note)


def verify(id: str, N: Optional[int] = None, perturb: Optional[int] = None) -> VerifyReport:
    """
    Check a registry entry on the first N coefficients.

    Parameters
    ----------
    id : str
        Registry id, see ``registry_ids()``.
    N : int, optional
        Bound; defaults to the entry's own bound.
    perturb : int, optional
        Add ``q^perturb`` to the right-hand side, which must turn a pass into a
        failure at exactly that exponent.
    """
    entry = _entry(id)
    N = entry.default_bound if N is None else N
    ring = EXACT if entry.modulus is None else CoefficientRing.mod(entry.modulus)
    lhs, rhs = entry.build(_Ctx(N, ring))
    if perturb is not None:
        rhs = rhs + shift(one_series(rhs.ring, N), perturb)
    if entry.note:
        logging.warning(f"{id}: {entry.note}")
    return _report(id, lhs, rhs, N, entry.modulus, entry.note)


def verify_identity(id: str, N: Optional[int] = None) -> VerifyReport:
    if _entry(id).kind != "identity":
        raise ValueError(f"{id!r} is registered as a congruence")
    return verify(id, N)


def verify_congruence(id: str, N: Optional[int] = None) -> VerifyReport:
    if _entry(id).kind != "congruence":
        raise ValueError(f"{id!r} is registered as an identity")
    return verify(id, N)


def verify_all(
    N: Optional[int] = None,
    n_jobs: int = 1,
    ids: Optional[Sequence[str]] = None,
) -> List[VerifyReport]:
    """
    Run registry entries, by default all of them.

    Gaussian entries run at ``max(N, CM_BOUND)`` since their forms only start to
    separate past a few hundred terms.
    """
    ids = registry_ids() if ids is None else list(ids)

    def bound(id):
        entry = _entry(id)
        if N is None:
            return entry.default_bound
        return max(N, CM_BOUND) if entry.gaussian else N

    start = time.perf_counter()
    logging.info(f"Verifying {len(ids)} registry entries")
    reports = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(verify)(id, bound(id)) for id in ids)
    for r in reports:
        if not r.passed:
            logging.error(str(r))
    logging.info(f"Verified {len(ids)} entries in {time.perf_counter() - start:.1f}s")
    return reports


# theorem families -------------------------------------------------------------

_FAMILIES = ("Mod4Main", "Mod4Second", "Mod9")


def mod4_second_set(A: Union[EtaQuotient, str]) -> List[Tuple[int, int]]:
    """
    Recover S with ``A = f1 prod_{(j, n) in S} (f_j^2 / f_{2j})^n``.

    Raises
    ------
    HypothesisError
        When ``A / f1`` has no such decomposition.
    """
    if isinstance(A, str):
        A = parse_eta(A)
    rest = defaultdict(int, (A / EtaQuotient(((1, 1),))).as_dict())
    S = []
    while any(rest.values()):
        j = min(k for k, e in rest.items() if e)
        e = rest.pop(j)
        if e % 2:
            raise HypothesisError("Mod4Second", f"f{j} has odd exponent {e} after removing f1")
        S.append((j, e // 2))
        rest[2 * j] += e // 2
    return S


def mod4_second_quotient(S: Sequence[Tuple[int, int]]) -> EtaQuotient:
    factors = [(1, 1)]
    for j, n in S:
        if j < 1:
            raise ValueError(f"Elements of S must be positive, got {j}")
        factors += [(j, 2 * n), (2 * j, -n)]
    return EtaQuotient(tuple(factors))


@dataclass(frozen=True)
class TheoremFamilyHypothesis:
    """Shape constraint of one theorem family; ``check`` raises ``HypothesisError``."""
    family: str

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"Unknown family {self.family!r}; expected one of {_FAMILIES}")

    def check(self, A: EtaQuotient) -> None:
        if self.family == "Mod4Main":
            if A.exponent(1) % 2 == 0:
                raise HypothesisError(self.family, f"exponent of f1 must be odd, got {A.exponent(1)}")
            for j, e in A.factors:
                if j > 1 and j % 2 == 1 and e % 2:
                    raise HypothesisError(self.family, f"odd j={j} has odd exponent {e}")
        elif self.family == "Mod9":
            if A.exponent(1) % 3 != 1:
                raise HypothesisError(self.family,
                                      f"exponent of f1 must be 1 mod 3, got {A.exponent(1)}")
            for j, e in A.factors:
                if j > 1 and j % 3 and e % 3:
                    raise HypothesisError(self.family,
                                          f"f{j} with 3 not dividing {j} has exponent {e}, not 0 mod 3")
        else:
            mod4_second_set(A)

    def holds(self, A: EtaQuotient) -> bool:
        try:
            self.check(A)
        except HypothesisError:
            return False
        return True


def _zero_set_mismatch(a: TruncatedSeries, b: TruncatedSeries, value: int = 0) -> Optional[int]:
    diff = np.flatnonzero((a.coeffs == value) != (b.coeffs == value))
    return int(diff[0]) if len(diff) else None


def _family_report(
    name: str,
    N: int,
    modulus: int,
    a: TruncatedSeries,
    b: TruncatedSeries,
    congruence: TruncatedSeries,
    relation: Callable[[int], str],
    extra_values: Sequence[int] = (),
    cross: Optional[Tuple[TruncatedSeries, TruncatedSeries]] = None,
) -> VerifyReport:
    """Report the first failure among the congruence, the equal zero sets and a cross-check."""
    k = first_mismatch(congruence, zero_series(congruence.ring, N))
    if k is not None:
        return VerifyReport(name, N, modulus, "fail", k, a[k], b[k], relation(k))
    for value in (0,) + tuple(extra_values):
        k = _zero_set_mismatch(a, b, value)
        if k is not None:
            return VerifyReport(name, N, modulus, "fail", k, a[k], b[k],
                                f"a_n = {value} and b_n = {value} are not equivalent mod {modulus}")
    if cross is not None:
        k = first_mismatch(*cross)
        if k is not None:
            return VerifyReport(name, N, modulus, "fail", k, cross[0][k], cross[1][k],
                                "B differs from its congruent form")
    return VerifyReport(name, N, modulus)


def check_mod4_main(A: Union[EtaQuotient, str], N: int = DEFAULT_BOUND) -> VerifyReport:
    """
    ``B = A f1^2 f2 / f4`` satisfies ``a_2n = b_2n`` and ``a_2n+1 = -b_2n+1`` mod 4.

    Also checks that ``a_n = 0`` and ``b_n = 0`` (and the same for 2) are equivalent
    mod 4 and that B agrees with ``A (f1^2/f2 + f2^2/f4 - 1)`` mod 4.

    Raises
    ------
    HypothesisError
        Unless the exponent of f1 is odd and every odd j > 1 has an even exponent.
    """
    if isinstance(A, str):
        A = parse_eta(A)
    TheoremFamilyHypothesis("Mod4Main").check(A)
    c = _Ctx(N, CoefficientRing.mod(4))
    a = eta_series(A, N, c.ring)
    b = a * c.eta("f1^2*f2/f4")
    congruence = a - residue_twist(b, 2, [1, -1])
    alt = a * (c.eta("f1^2/f2") + c.eta("f2^2/f4") - 1)
    return _family_report(
        f"mod4-main[{A}]", N, 4, a, b, congruence,
        lambda k: "a_2n != b_2n mod 4" if k % 2 == 0 else "a_2n+1 != -b_2n+1 mod 4",
        extra_values=(2,), cross=(b, alt))


def check_mod4_second(S: Sequence[Tuple[int, int]], N: int = DEFAULT_BOUND) -> VerifyReport:
    """
    For ``A = f1 prod (f_j^2/f_2j)^n_j`` and ``B = A f1^2 f3^2/(f2 f6)``:
    ``b_n = a_n + 2`` mod 4 at generalized pentagonal n = t(3t-1)/2 with t odd and
    ``b_n = a_n`` mod 4 otherwise.
    """
    A = mod4_second_quotient(S)
    c = _Ctx(N, CoefficientRing.mod(4))
    a = eta_series(A, N, c.ring)
    b = a * c.eta("f1^2*f3^2/f2/f6")
    odd_pentagonal = [(e, 2) for e, t in pentagonal_terms(N) if t % 2]
    marks = make_series(c.ring, N, odd_pentagonal)
    congruence = b - a - marks
    return _family_report(
        f"mod4-second[{A}]", N, 4, a, b, congruence,
        lambda k: "b_n != a_n + 2 mod 4 at an odd-t pentagonal n" if marks[k] else "b_n != a_n mod 4")


def check_mod9(A: Union[EtaQuotient, str], N: int = DEFAULT_BOUND) -> VerifyReport:
    """
    ``B = A f3/f1^3`` satisfies ``a_3n = b_3n``, ``2a_3n+1 + b_3n+1 = 0`` and
    ``a_3n+2 + 2b_3n+2 = 0`` mod 9, hence ``a_n = 0`` iff ``b_n = 0`` mod 9.

    Raises
    ------
    HypothesisError
        Unless A = f1^{3k+1} prod_{3 not | i} f_i^{3k_i} prod_{3 | i} f_i^{k_i}.
    """
    if isinstance(A, str):
        A = parse_eta(A)
    TheoremFamilyHypothesis("Mod9").check(A)
    c = _Ctx(N, CoefficientRing.mod(9))
    a = eta_series(A, N, c.ring)
    b = a * c.eta("f3/f1^3")
    congruence = residue_twist(a, 3, [1, 2, 1]) + residue_twist(b, 3, [-1, 1, 2])
    relations = ["a_3n != b_3n mod 9", "2a_3n+1 + b_3n+1 != 0 mod 9", "a_3n+2 + 2b_3n+2 != 0 mod 9"]
    return _family_report(f"mod9[{A}]", N, 9, a, b, congruence, lambda k: relations[k % 3])
