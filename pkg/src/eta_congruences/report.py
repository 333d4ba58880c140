import json
from dataclasses import dataclass, asdict
from typing import Optional, Any, Dict

__all__ = [
    "HypothesisError",
    "VerifyReport",
]


class HypothesisError(ValueError):
    """An eta quotient does not have the shape a theorem family requires."""

    def __init__(self, family: str, condition: str):
        super().__init__(f"{family} hypothesis violated: {condition}")
        self.family = family
        self.condition = condition


def _plain(value: Any) -> Any:
    if value is None or isinstance(value, (bool, int, str)):
        return value
    return str(value)


@dataclass(frozen=True)
class VerifyReport:
    """
    Outcome of a finite-prefix check.

    A failing report carries the smallest exponent ``witness < bound`` where the two
    sides disagree together with both values there.
    """
    identity_id: str
    bound: int
    modulus: Optional[int] = None
    status: str = "pass"
    witness: Optional[int] = None
    lhs: Any = None
    rhs: Any = None
    note: str = ""

    def __post_init__(self):
        if self.status not in ("pass", "fail"):
            raise ValueError(f"Unknown status {self.status!r}")
        if self.status == "fail" and (self.witness is None or not 0 <= self.witness < self.bound):
            raise ValueError("A failing report needs a witness exponent below the bound")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> Dict[str, Any]:
        return {k: _plain(v) for k, v in asdict(self).items()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __str__(self) -> str:
        mod = f" mod {self.modulus}" if self.modulus else ""
        if self.passed:
            return f"{self.identity_id}{mod}: pass (N={self.bound})"
        return (f"{self.identity_id}{mod}: FAIL at q^{self.witness} "
                f"(lhs={self.lhs}, rhs={self.rhs}, N={self.bound})")
