import csv
import json
import time
import hashlib
import logging
import numpy as np
from pathlib import Path
from dataclasses import dataclass, field, asdict
from collections import defaultdict
from typing import List, Tuple, Dict, Optional, Sequence, Union, TextIO

from joblib import Parallel, delayed
from tqdm import tqdm

from eta_congruences.series import (
    EXACT,
    CoefficientRing,
    TruncatedSeries,
    zero_indices,
    reduce_mod,
)
from eta_congruences.qproducts import EtaQuotient, parse_eta, eta_series

__all__ = [
    "TABLE_BOUND",
    "MOD_COLUMN_EXTRA",
    "RELATION_KINDS",
    "Candidate",
    "ScanConfig",
    "Relation",
    "ScanRow",
    "load_candidates",
    "packaged_candidates",
    "quintuple_scan",
    "classify",
    "scan_candidates",
    "reproduce_table",
    "write_csv",
    "write_sidecar",
    "repeated_extra_exponents",
]

TABLE_BOUND = 15000
# the mod-m columns of the candidate tables run 10 coefficients past the exact-zero columns
MOD_COLUMN_EXTRA = 10
N_COLUMNS = 5

RELATION_KINDS = (
    "AllFiveIdentical",
    "FourIdenticalFifthSuperset",
    "ThreeIdenticalOneExtra",
    "Other",
)

_TABLES = ("t1", "t2")


@dataclass(frozen=True)
class Candidate:
    """One line of a candidate file; ``quotient`` is ``None`` when the expression did not parse."""
    label: str
    text: str
    quotient: Optional[EtaQuotient] = None
    error: Optional[str] = None


@dataclass
class ScanConfig:
    """
    Settings shared by every candidate of a scan.

    Attributes
    ----------
    bound : int
        Number of coefficients N of the exact-zero columns.
    modulus : int
        Modulus m of the zero counts, 25 for the packaged candidate tables.
    mod_extra : int
        The mod-m columns count zeros among the first ``bound + mod_extra``
        coefficients.
    exact : bool
        Also count exactly vanishing coefficients; this needs big-integer arithmetic.
    n_jobs : int
        joblib workers over candidates.
    progress : bool
        Show a tqdm bar.
    """
    bound: int = TABLE_BOUND
    modulus: int = 25
    exact: bool = True
    n_jobs: int = 1
    progress: bool = False
    mod_extra: int = MOD_COLUMN_EXTRA

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError(f"Bound must be positive, got {self.bound}")
        if self.modulus < 2:
            raise ValueError(f"Modulus must be at least 2, got {self.modulus}")
        if self.mod_extra < 0:
            raise ValueError(f"mod_extra must be non-negative, got {self.mod_extra}")

    @property
    def mod_bound(self) -> int:
        return self.bound + self.mod_extra


@dataclass(frozen=True)
class Relation:
    """
    How the five zero sets mod m relate within the scanned range.

    ``which`` lists the columns with identical zero sets, ``superset`` the column that
    strictly contains them (if any). ``extra_exponent`` and the 1-based
    ``extra_ordinal`` locate the single extra zero of a ThreeIdenticalOneExtra row.
    """
    kind: str
    which: Tuple[int, ...] = ()
    superset: Optional[int] = None
    extra_exponent: Optional[int] = None
    extra_ordinal: Optional[int] = None
    witnesses: Tuple[int, ...] = ()
    description: str = ""

    def __post_init__(self):
        if self.kind not in RELATION_KINDS:
            raise ValueError(f"Unknown relation kind {self.kind!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["which"] = list(self.which)
        d["witnesses"] = list(self.witnesses)
        return d


@dataclass
class ScanRow:
    label: str
    candidate: str
    bound: int
    modulus: int
    mod_counts: Tuple[int, ...] = ()
    exact_counts: Optional[Tuple[int, ...]] = None
    mod5_identical: Optional[bool] = None
    relation: Optional[Relation] = None
    digests: Dict[str, List[dict]] = field(default_factory=dict)
    error: Optional[str] = None
    mod_bound: Optional[int] = None
    zero_sets: List[np.ndarray] = field(default_factory=list, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "candidate": self.candidate,
            "bound": self.bound,
            "mod_bound": self.bound if self.mod_bound is None else self.mod_bound,
            "modulus": self.modulus,
            "mod_counts": list(self.mod_counts),
            "exact_counts": None if self.exact_counts is None else list(self.exact_counts),
            "mod5_identical": self.mod5_identical,
            "relation": None if self.relation is None else self.relation.to_dict(),
            "digests": self.digests,
            "error": self.error,
        }


def _parse_line(line: str, index: int) -> Optional[Candidate]:
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    head, _, rest = text.partition(" ")
    label, expr = (head, rest.strip()) if head.isdigit() and rest.strip() else (str(index), text)
    try:
        return Candidate(label, expr, parse_eta(expr))
    except ValueError as exc:
        logging.warning(f"Candidate {label} ({expr!r}) does not parse: {exc}")
        return Candidate(label, expr, None, str(exc))


def load_candidates(path: Union[str, Path]) -> List[Candidate]:
    """
    Read a candidate file: one ``[label] expression`` per line, ``#`` starts a comment.

    Unlabeled lines are numbered by their position among the candidates.
    """
    candidates = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            cand = _parse_line(line, len(candidates) + 1)
            if cand is not None:
                candidates.append(cand)
    return candidates


def packaged_candidates(table: str) -> Path:
    """Path of the shipped candidate file for ``t1`` or ``t2``."""
    if table not in _TABLES:
        raise ValueError(f"Unknown table {table!r}; expected one of {_TABLES}")
    return Path(__file__).parent / "tables" / f"{table}.txt"


def _digest(indices: np.ndarray) -> dict:
    text = ",".join(str(int(i)) for i in indices)
    return {
        "length": int(len(indices)),
        "head": [int(i) for i in indices[:8]],
        "sha256": hashlib.sha256(text.encode("ascii")).hexdigest(),
    }


def classify(zero_sets: Sequence[np.ndarray], max_witnesses: int = 8) -> Relation:
    """
    Classify five zero index sets by equality and inclusion.

    Three identical sets plus a fourth with more than one extra index demote to
    ``Other`` with the extra indices as witnesses.
    """
    sets = [frozenset(int(i) for i in z) for z in zero_sets]
    groups: Dict[frozenset, List[int]] = defaultdict(list)
    for j, s in enumerate(sets):
        groups[s].append(j)
    common, which = max(groups.items(), key=lambda kv: (len(kv[1]), -kv[1][0]))
    which = tuple(which)
    others = [j for j in range(len(sets)) if j not in which]

    if not others:
        return Relation("AllFiveIdentical", which, description="all zero sets coincide")

    if len(which) == 4:
        j = others[0]
        if sets[j] > common:
            extra = sorted(sets[j] - common)
            return Relation("FourIdenticalFifthSuperset", which, j,
                            witnesses=tuple(extra[:max_witnesses]),
                            description=f"G_{j} vanishes at {len(extra)} further exponents")
        return Relation("Other", which, description=f"G_{j} is not a superset of the common set")

    if len(which) == 3:
        candidates = [j for j in others if sets[j] > common]
        single = [j for j in candidates if len(sets[j] - common) == 1]
        if single:
            j = single[0]
            (extra,) = sets[j] - common
            ordinal = sorted(sets[j]).index(extra) + 1
            return Relation("ThreeIdenticalOneExtra", which, j, extra, ordinal, (extra,),
                            f"G_{j} has the single extra zero q^{extra}")
        if candidates:
            j = candidates[0]
            extra = sorted(sets[j] - common)
            logging.warning(f"G_{j} has {len(extra)} extra zeros, not one; classified as Other")
            return Relation("Other", which, j, witnesses=tuple(extra[:max_witnesses]),
                            description=f"G_{j} has {len(extra)} extra zeros")

    return Relation("Other", which, description=f"largest identical group has {len(which)} members")


def _g_series(F: EtaQuotient, N: int, ring: CoefficientRing) -> List[TruncatedSeries]:
    """``G_j = F (f1^5/f5)^j`` for j = 0..4, each from the previous one."""
    step = parse_eta("f1^5/f5")
    series = [eta_series(F, N, ring)]
    for _ in range(1, N_COLUMNS):
        s = series[-1]
        for j, e in step.factors:
            factor = eta_series(EtaQuotient(((j, 1),)), N, ring)
            for _ in range(abs(e)):
                s = s * factor if e > 0 else s / factor
        series.append(s)
    return series


def quintuple_scan(
    F: Union[EtaQuotient, str],
    N: int = TABLE_BOUND,
    m: int = 25,
    exact: bool = True,
    label: str = "",
    mod_bound: Optional[int] = None,
) -> ScanRow:
    """
    Zero counts mod m (and exactly, when ``exact``) of ``G_j = F (f1^5/f5)^j``, j = 0..4.

    The mod-m counts run over the first ``mod_bound`` coefficients (default N), the
    exact counts over the first N.

    Raises
    ------
    ValueError
        If F does not parse, ``N < 1``, ``m < 2`` or ``mod_bound < N``.
    """
    if isinstance(F, str):
        F = parse_eta(F)
    if N < 1 or m < 2:
        raise ValueError(f"Need N >= 1 and m >= 2, got N={N}, m={m}")
    mod_bound = N if mod_bound is None else mod_bound
    if mod_bound < N:
        raise ValueError(f"mod_bound {mod_bound} is below N={N}")
    ring = EXACT if exact else CoefficientRing.mod(m)
    gs = _g_series(F, mod_bound, ring)
    reduced = [reduce_mod(g, m) for g in gs]
    mod_sets = [zero_indices(r) for r in reduced]
    row = ScanRow(label, str(F), N, m, tuple(len(z) for z in mod_sets), mod_bound=mod_bound)
    row.zero_sets = mod_sets
    row.digests["mod"] = [_digest(z) for z in mod_sets]
    if m % 5 == 0:
        mod5 = [frozenset(zero_indices(reduce_mod(r, 5)).tolist()) for r in reduced]
        row.mod5_identical = all(s == mod5[0] for s in mod5)
    if exact:
        exact_sets = [z[z < N] for z in (zero_indices(g) for g in gs)]
        row.exact_counts = tuple(len(z) for z in exact_sets)
        row.digests["exact"] = [_digest(z) for z in exact_sets]
        for z, zm in zip(exact_sets, mod_sets):
            if not set(z.tolist()) <= set(zm.tolist()):
                raise RuntimeError(f"Exact zeros of {F} are not zeros mod {m}")
    row.relation = classify(mod_sets)
    return row


def _scan_one(cand: Candidate, config: ScanConfig) -> ScanRow:
    if cand.quotient is None:
        return ScanRow(cand.label, cand.text, config.bound, config.modulus, error=cand.error)
    return quintuple_scan(cand.quotient, config.bound, config.modulus, config.exact, cand.label,
                          mod_bound=config.mod_bound)


def scan_candidates(candidates: Sequence[Candidate], config: Optional[ScanConfig] = None) -> List[ScanRow]:
    """Scan every candidate; rows come back in input order whatever ``n_jobs`` is."""
    config = ScanConfig() if config is None else config
    start = time.perf_counter()
    logging.info(f"Scanning {len(candidates)} candidates to N={config.bound} mod {config.modulus}")
    items = tqdm(candidates, desc="Scanning") if config.progress else candidates
    rows = Parallel(n_jobs=config.n_jobs, prefer="threads")(
        delayed(_scan_one)(c, config) for c in items)
    logging.info(f"Scanned {len(rows)} candidates in {time.perf_counter() - start:.1f}s")
    return rows


def reproduce_table(
    table: str,
    candidates: Optional[Union[str, Path]] = None,
    config: Optional[ScanConfig] = None,
) -> List[ScanRow]:
    """Scan a candidate file, by default the shipped one for ``table``."""
    path = packaged_candidates(table) if candidates is None else Path(candidates)
    return scan_candidates(load_candidates(path), config)


def _header(table: str) -> List[str]:
    cols = ["n", "F(q)"] + [f"mod{j}" for j in range(N_COLUMNS)] + [f"zero{j}" for j in range(N_COLUMNS)]
    return cols + ["C_N", "N"] if table == "t2" else cols


def _csv_cells(row: ScanRow, table: str) -> list:
    if row.error is not None:
        return [row.label, row.candidate] + [""] * (len(_header(table)) - 2)
    exact = list(row.exact_counts) if row.exact_counts is not None else [""] * N_COLUMNS
    cells = [row.label, row.candidate] + list(row.mod_counts) + exact
    if table == "t2":
        rel = row.relation
        if rel is not None and rel.kind == "ThreeIdenticalOneExtra":
            cells += [rel.extra_exponent, rel.extra_ordinal]
        else:
            cells += ["", ""]
    return cells


def write_csv(rows: Sequence[ScanRow], out: Union[str, Path, TextIO], table: str = "t1") -> None:
    """Write rows in the table layout; ``t2`` adds the C_N and N columns."""
    if table not in _TABLES:
        raise ValueError(f"Unknown table {table!r}; expected one of {_TABLES}")
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh, table)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_header(table))
    for row in rows:
        writer.writerow(_csv_cells(row, table))


def write_sidecar(rows: Sequence[ScanRow], out: Union[str, Path, TextIO]) -> None:
    """JSON with one entry per row: counts, relation and index-set digests."""
    payload = {"rows": [row.to_dict() for row in rows]}
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        json.dump(payload, out, indent=2)
        out.write("\n")


def repeated_extra_exponents(rows: Sequence[ScanRow]) -> Dict[int, List[str]]:
    """Extra-zero exponents C_N shared by two or more rows, with their labels."""
    seen: Dict[int, List[str]] = defaultdict(list)
    for row in rows:
        rel = row.relation
        if rel is not None and rel.kind == "ThreeIdenticalOneExtra":
            seen[rel.extra_exponent].append(row.label)
    return {c: labels for c, labels in sorted(seen.items()) if len(labels) > 1}
