import numpy as np
from typing import List, Tuple, Optional

from eta_congruences.qproducts import EtaQuotient, parse_eta

__all__ = [
    "MOD4_MAIN_NAMED",
    "MOD4_SECOND_NAMED",
    "MOD9_NAMED",
    "random_mod4_main",
    "random_mod4_second_set",
    "random_mod9",
    "random_batch",
    "named_quotients",
]

# partition generating functions with known parity behaviour
MOD4_MAIN_NAMED = ["f1", "1/f1", "f3^2/f1", "f2/f1", "f2^2/f1"]
MOD4_SECOND_NAMED: List[List[Tuple[int, int]]] = [[], [(1, -1)]]
MOD9_NAMED = ["f1", "f1/f3", "f1^10", "f1^7/f3"]


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _draw(rng: np.random.Generator, max_j: int, max_abs: int, allowed) -> EtaQuotient:
    factors = []
    for j in range(2, max_j + 1):
        if rng.random() < 0.5:
            choices = [e for e in range(-max_abs, max_abs + 1) if e and allowed(j, e)]
            factors.append((j, int(rng.choice(choices))))
    return EtaQuotient(tuple(factors))


def random_mod4_main(seed=None, max_j: int = 8, max_abs: int = 4) -> EtaQuotient:
    """An eta quotient with odd f1 exponent and even exponents on odd j > 1."""
    rng = _rng(seed)
    n1 = int(rng.choice([e for e in range(-max_abs, max_abs + 1) if e % 2]))
    rest = _draw(rng, max_j, max_abs, lambda j, e: j % 2 == 0 or e % 2 == 0)
    return EtaQuotient(((1, n1),)) * rest


def random_mod4_second_set(seed=None, size: int = 2, max_j: int = 6, max_abs: int = 3) -> List[Tuple[int, int]]:
    """A set S of pairs (j, n) with distinct j."""
    rng = _rng(seed)
    js = rng.choice(np.arange(1, max_j + 1), size=min(size, max_j), replace=False)
    exps = [e for e in range(-max_abs, max_abs + 1) if e]
    return sorted((int(j), int(rng.choice(exps))) for j in js)


def random_mod9(seed=None, max_j: int = 8, max_abs: int = 4) -> EtaQuotient:
    """``f1^{3k+1}`` times cubes of f_i with 3 not dividing i and any power of f_i with 3 | i."""
    rng = _rng(seed)
    k = int(rng.integers(-1, 2))
    rest = _draw(rng, max_j, max_abs * 3, lambda j, e: (j % 3 == 0 and abs(e) <= max_abs) or e % 3 == 0)
    return EtaQuotient(((1, 3 * k + 1),)) * rest


def random_batch(family: str, count: int = 25, seed: Optional[int] = 0) -> list:
    """``count`` random members of ``Mod4Main``, ``Mod4Second`` or ``Mod9`` from one seeded generator."""
    rng = np.random.default_rng(seed)
    draw = {
        "Mod4Main": random_mod4_main,
        "Mod4Second": random_mod4_second_set,
        "Mod9": random_mod9,
    }
    if family not in draw:
        raise ValueError(f"Unknown family {family!r}; expected one of {', '.join(draw)}")
    return [draw[family](rng) for _ in range(count)]


def named_quotients(family: str) -> list:
    if family == "Mod4Main":
        return [parse_eta(s) for s in MOD4_MAIN_NAMED]
    if family == "Mod9":
        return [parse_eta(s) for s in MOD9_NAMED]
    if family == "Mod4Second":
        return [list(s) for s in MOD4_SECOND_NAMED]
    raise ValueError(f"Unknown family {family!r}")
