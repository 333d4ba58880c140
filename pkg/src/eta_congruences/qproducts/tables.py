from typing import Tuple, Dict

__all__ = [
    "UV_OFFSETS",
    "UV_SLOPE",
    "ALPHA",
    "BETA",
    "GAMMA",
    "DELTA",
    "unit_list",
]

# u_j(m) = 30 m + a_j, v_j(n) = 30 n + b_j for the weight-3 family of 96 forms
UV_SLOPE = 30

UV_OFFSETS: Tuple[Tuple[int, int], ...] = (
    (-23, 2), (-23, 4), (-23, 12), (-23, 14), (-23, 22), (-23, 24),
    (-21, 2), (-21, 4), (-21, 14), (-21, 22), (-13, 2), (-13, 4),
    (-13, 12), (-13, 14), (-13, 22), (-13, 24), (-11, 2), (-11, 4),
    (-11, 12), (-11, 14), (-11, 22), (-11, 24), (-3, 2), (-3, 4),
    (-3, 14), (-3, 22), (-1, 2), (-1, 4), (-1, 12), (-1, 14),
    (-1, 22), (-1, 24), (1, 0), (1, 2), (1, 4), (1, 10),
    (1, 12), (1, 14), (1, 20), (1, 22), (1, 24), (3, 2),
    (3, 4), (3, 10), (3, 14), (3, 20), (3, 22), (5, 2),
    (5, 4), (5, 12), (5, 14), (5, 22), (5, 24), (11, 0),
    (11, 2), (11, 4), (11, 10), (11, 12), (11, 14), (11, 20),
    (11, 22), (11, 24), (13, 0), (13, 2), (13, 4), (13, 10),
    (13, 12), (13, 14), (13, 20), (13, 22), (13, 24), (15, 2),
    (15, 4), (15, 14), (15, 22), (21, 2), (21, 4), (21, 10),
    (21, 14), (21, 20), (21, 22), (23, 0), (23, 2), (23, 4),
    (23, 10), (23, 12), (23, 14), (23, 20), (23, 22), (23, 24),
    (25, 2), (25, 4), (25, 12), (25, 14), (25, 22), (25, 24)
)

_UNITS: Dict[str, Tuple[int, int]] = {
    "0": (0, 0),
    "1": (1, 0),
    "-1": (-1, 0),
    "i": (0, 1),
    "-i": (0, -1),
}


def unit_list(text: str) -> Tuple[Tuple[int, int], ...]:
    """Parse a whitespace separated list of 0, 1, -1, i, -i into (re, im) pairs."""
    try:
        return tuple(_UNITS[tok] for tok in text.split())
    except KeyError as exc:
        raise ValueError(f"Bad unit token: {exc.args[0]!r}") from None


ALPHA = unit_list("""
    i i -1 -i -i 1 0 -1 -1 0 -i -i
    -1 i i 1 0 i 0 -i 0 1 1 -1
    -1 1 0 -i 0 i 0 1 1 i -i i
    -1 i -i -i -1 -1 0 1 0 1 -1 i
    i 1 -i -i -1 1 -i i -i -1 -i i
    i -1 -1 -i 0 -i 1 0 i i 0 -1
    1 1 -1 1 1 -1 1 -1 1 -1 i 0
    i 1 0 -i -i 0 -i -i 1 i i -1
""")

BETA = unit_list("""
    -i 0 1 0 i 0 1 1 1 1 i 0
    1 0 -i 0 i -i -1 i -i -1 -1 0
    0 -1 -i i -1 -i i -1 1 0 i i
    0 -i -i 0 1 1 -1 1 -1 1 1 i
    i 1 -i -i -1 1 0 -i -i 0 i i
    0 1 -1 i i -i -1 -i i -i 1 -1
    1 1 -1 0 -1 -1 -1 -1 0 -1 -i -i
    i -1 i -i i 1 -i -i 1 i i -1
""")

GAMMA = unit_list("""
    -i -i -1 i i 1 0 -1 -1 0 i i
    -1 -i -i 1 0 -i 0 i 0 1 1 -1
    -1 1 0 i 0 -i 0 1 1 -i i -i
    -1 -i i i -1 -1 0 1 0 1 -1 -i
    -i 1 i i -1 1 i -i i -1 i -i
    -i -1 -1 i 0 i 1 0 -i -i 0 -1
    1 1 -1 1 1 -1 1 -1 1 -1 -i 0
    -i 1 0 i i 0 i i 1 -i -i -1
""")

DELTA = unit_list("""
    i 0 1 0 -i 0 1 1 1 1 -i 0
    1 0 i 0 -i i -1 -i i -1 -1 0
    0 -1 i -i -1 i -i -1 1 0 -i -i
    0 i i 0 1 1 -1 1 -1 1 1 -i
    -i 1 i i -1 1 0 i i 0 -i -i
    0 1 -1 -i -i i -1 i -i i 1 -1
    1 1 -1 0 -1 -1 -1 -1 0 -1 i i
    -i -1 -i i -i 1 i i 1 -i -i -1
""")
