import io
import sys
import json
import logging
import argparse
from dataclasses import dataclass
from typing import List, Optional, Sequence, TextIO

from tabulate import tabulate

from eta_congruences import __version__
from eta_congruences.report import VerifyReport
from eta_congruences.series import EXACT, CoefficientRing, dissect
from eta_congruences.qproducts import parse_eta, eta_series, theta_names, builtin_theta
from eta_congruences.identities import (
    DEFAULT_BOUND,
    DEEP_BOUND,
    REGISTRY,
    verify,
    verify_all,
    mod4_second_set,
    check_mod4_main,
    check_mod4_second,
    check_mod9,
)
from eta_congruences.oracles import (
    ORACLES,
    oracle_agreement,
    coeff_f1_10,
    coeff_f1_5_f5,
    A_coeff,
    B_coeff,
    factorize,
)
from eta_congruences.search import (
    TABLE_BOUND,
    MOD_COLUMN_EXTRA,
    ScanConfig,
    reproduce_table,
    write_csv,
    write_sidecar,
    repeated_extra_exponents,
)
from eta_congruences.combinatorics import corollary_suite

__all__ = [
    "CliConfig",
    "build_parser",
    "run",
    "main",
]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class CliConfig:
    """Settings shared by every subcommand, resolved from the parsed flags."""
    command: str
    bound: int = DEFAULT_BOUND
    modulus: Optional[int] = None
    output: Optional[str] = None
    fmt: str = "text"
    n_jobs: int = 1
    progress: bool = True

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError(f"Bound must be positive, got {self.bound}")
        if self.modulus is not None and self.modulus < 2:
            raise ValueError(f"Modulus must be at least 2, got {self.modulus}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        if args.table_scale:
            bound = TABLE_BOUND
        elif args.deep:
            bound = DEEP_BOUND
        else:
            bound = args.N if args.N is not None else DEFAULT_BOUND
        return cls(
            command=args.command,
            bound=bound,
            modulus=getattr(args, "mod", None),
            output=args.output,
            fmt=args.format,
            n_jobs=args.jobs,
            progress=not args.quiet,
        )


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-N", type=int, default=None, help=f"number of coefficients (default {DEFAULT_BOUND})")
    common.add_argument("--deep", action="store_true", help=f"use N={DEEP_BOUND}")
    common.add_argument("--table-scale", action="store_true", help=f"use N={TABLE_BOUND}")
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers (-1 for all cores)")
    common.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--quiet", action="store_true", help="no progress bars")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="eta-congruences",
        description="Expand eta quotients and check their congruences and vanishing coefficients.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="coefficients of an eta quotient or theta series")
    p.add_argument("eta")
    p.add_argument("--mod", type=int, default=None)

    p = sub.add_parser("dissect", parents=[common], help="m-dissection components")
    p.add_argument("eta")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--mod", type=int, default=None)

    p = sub.add_parser("verify", parents=[common], help="check a registry entry, or all of them")
    p.add_argument("id")

    p = sub.add_parser("theorem", parents=[common], help="check a theorem family on one eta quotient")
    p.add_argument("family", choices=["mod4", "mod4b", "mod9"])
    p.add_argument("--A", required=True, dest="A")

    p = sub.add_parser("scan", parents=[common], help="quintuple zero-count scan of a candidate table")
    p.add_argument("--table", choices=["t1", "t2"], required=True)
    p.add_argument("--candidates", default=None, help="candidate file (default: the shipped one)")
    p.add_argument("--mod", type=int, default=25)
    p.add_argument("--no-exact", action="store_true", help="skip exact zero counts")
    p.add_argument("--mod-extra", type=int, default=MOD_COLUMN_EXTRA,
                   help=f"mod-m columns run this many coefficients past N (default {MOD_COLUMN_EXTRA})")
    p.add_argument("--sidecar", default=None, help="JSON file with index-set digests")

    p = sub.add_parser("oracle", parents=[common], help="closed-form vanishing verdict for one n")
    p.add_argument("name", choices=list(ORACLES))
    p.add_argument("--n", type=int, required=True, dest="n")

    p = sub.add_parser("oracle-equiv", parents=[common], help="cross-check an oracle against expansion")
    p.add_argument("name", choices=list(ORACLES))

    p = sub.add_parser("corollaries", parents=[common], help="partition-theoretic corollaries")
    p.add_argument("--nmax", type=int, default=2000)

    sub.add_parser("list", parents=[common], help="registry ids with metadata")
    return parser


def _reports_out(reports: Sequence[VerifyReport], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([r.to_dict() for r in reports], indent=2)
    rows = [[r.identity_id, r.modulus or "", r.bound, r.status,
             "" if r.witness is None else r.witness,
             "" if r.lhs is None else r.lhs, "" if r.rhs is None else r.rhs, r.note]
            for r in reports]
    headers = ["id", "mod", "N", "status", "witness", "lhs", "rhs", "note"]
    if fmt == "csv":
        return "\n".join(",".join(str(c) for c in row) for row in [headers] + rows)
    return tabulate(rows, headers=headers, tablefmt="github")


def _status(reports: Sequence[VerifyReport]) -> int:
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_expand(args, cfg: CliConfig, out: TextIO) -> int:
    if args.eta in theta_names():
        s = builtin_theta(args.eta, cfg.bound)
    else:
        ring = EXACT if cfg.modulus is None else CoefficientRing.mod(cfg.modulus)
        s = eta_series(parse_eta(args.eta), cfg.bound, ring)
    values = [str(v) for v in s.to_list()]
    if cfg.fmt == "json":
        out.write(json.dumps({"expression": args.eta, "N": cfg.bound, "modulus": cfg.modulus,
                              "coefficients": values}) + "\n")
    elif cfg.fmt == "csv":
        out.write("n,coefficient\n" + "".join(f"{n},{v}\n" for n, v in enumerate(values)))
    else:
        out.write(" ".join(values) + "\n")
    return EXIT_OK


def _cmd_dissect(args, cfg: CliConfig, out: TextIO) -> int:
    ring = EXACT if cfg.modulus is None else CoefficientRing.mod(cfg.modulus)
    result = dissect(eta_series(parse_eta(args.eta), cfg.bound, ring), args.m)
    comps = {f"{args.m}n+{i}": [str(v) for v in c.to_list()] for i, c in enumerate(result.components)}
    if cfg.fmt == "json":
        out.write(json.dumps(comps, indent=2) + "\n")
    else:
        for name, values in comps.items():
            out.write(f"{name}: {' '.join(values)}\n")
    return EXIT_OK


def _cmd_verify(args, cfg: CliConfig, out: TextIO) -> int:
    bound = None if args.N is None and not (args.deep or args.table_scale) else cfg.bound
    if args.id == "all":
        reports = verify_all(bound, n_jobs=cfg.n_jobs)
    else:
        reports = [verify(args.id, bound)]
    out.write(_reports_out(reports, cfg.fmt) + "\n")
    if cfg.fmt == "text":
        passed = sum(r.passed for r in reports)
        out.write(f"\n{passed}/{len(reports)} passed\n")
    return _status(reports)


def _cmd_theorem(args, cfg: CliConfig, out: TextIO) -> int:
    if args.family == "mod4":
        report = check_mod4_main(args.A, cfg.bound)
    elif args.family == "mod9":
        report = check_mod9(args.A, cfg.bound)
    else:
        S = mod4_second_set(args.A)
        logging.info(f"Recovered S = {S} from {args.A}")
        report = check_mod4_second(S, cfg.bound)
    out.write(_reports_out([report], cfg.fmt) + "\n")
    return _status([report])


def _cmd_scan(args, cfg: CliConfig, out: TextIO) -> int:
    config = ScanConfig(bound=cfg.bound, modulus=args.mod, exact=not args.no_exact,
                        n_jobs=cfg.n_jobs, progress=cfg.progress, mod_extra=args.mod_extra)
    rows = reproduce_table(args.table, args.candidates, config)
    if cfg.fmt == "json":
        out.write(json.dumps([r.to_dict() for r in rows], indent=2) + "\n")
    else:
        write_csv(rows, out, args.table)
    if args.sidecar:
        write_sidecar(rows, args.sidecar)
    for c, labels in repeated_extra_exponents(rows).items():
        logging.info(f"Extra zero q^{c} recurs in rows {', '.join(labels)}")
    return EXIT_USAGE if any(r.error for r in rows) else EXIT_OK


_EXACT_COEFFICIENTS = {
    "f1_10": coeff_f1_10,
    "f1_5_f5": coeff_f1_5_f5,
    "f1f5": A_coeff,
    "f1_6": B_coeff,
}


def _verdict(name: str, n: int) -> dict:
    _, modulus, predicate, contract = ORACLES[name]
    verdict = predicate(n)
    if isinstance(verdict, bool):
        record = {"n": n, "holds": verdict, "contract": contract}
    else:
        record = verdict.to_dict()
    record["modulus"] = modulus
    if name in _EXACT_COEFFICIENTS:
        record["coefficient"] = _EXACT_COEFFICIENTS[name](n)
    return record


def _cmd_oracle(args, cfg: CliConfig, out: TextIO) -> int:
    if args.n < 0:
        raise ValueError(f"n must be non-negative, got {args.n}")
    record = _verdict(args.name, args.n)
    M = 6 * args.n + 1 if args.name == "f1_7_over_f3" else (
        4 * args.n + 1 if args.name in ("f1f5", "f1_6") else 12 * args.n + 5)
    record["factorization"] = f"{M} = {factorize(M)}"
    if cfg.fmt == "json":
        out.write(json.dumps(record) + "\n")
    else:
        out.write(tabulate(sorted(record.items()), tablefmt="github") + "\n")
    return EXIT_OK


def _cmd_oracle_equiv(args, cfg: CliConfig, out: TextIO) -> int:
    cmp = oracle_agreement(args.name, cfg.bound, n_jobs=cfg.n_jobs, progress=cfg.progress)
    text, modulus, _, _ = ORACLES[args.name]
    series = eta_series(text, cfg.bound, CoefficientRing.mod(modulus))
    mismatches = [dict(_verdict(args.name, n), series_mod=series[n]) for n in cmp.mismatches[:10]]
    summary = {
        "oracle": cmp.which, "N": cmp.bound, "modulus": cmp.modulus, "contract": cmp.contract,
        "predicate_count": cmp.predicate_count, "series_zero_count": cmp.series_count,
        "density": round(cmp.density, 6), "mismatches": len(cmp.mismatches),
    }
    if cfg.fmt == "json":
        out.write(json.dumps(dict(summary, first_mismatches=mismatches), indent=2) + "\n")
    else:
        out.write(tabulate(list(summary.items()), tablefmt="github") + "\n")
        if mismatches:
            out.write("\n" + tabulate(mismatches, headers="keys", tablefmt="github") + "\n")
    return EXIT_OK if cmp.agrees else EXIT_FAIL


def _cmd_corollaries(args, cfg: CliConfig, out: TextIO) -> int:
    reports = corollary_suite(args.nmax, n_jobs=cfg.n_jobs)
    out.write(_reports_out(reports, cfg.fmt) + "\n")
    return _status(reports)


def _cmd_list(args, cfg: CliConfig, out: TextIO) -> int:
    rows = [[e.id, e.kind, e.modulus or "", e.default_bound, e.sturm_bound or "",
             "yes" if e.gaussian else "", e.description] for e in REGISTRY.values()]
    headers = ["id", "kind", "mod", "N", "sturm", "gaussian", "description"]
    if cfg.fmt == "json":
        out.write(json.dumps([dict(zip(headers, r)) for r in rows], indent=2) + "\n")
    else:
        out.write(tabulate(rows, headers=headers, tablefmt="github") + "\n")
    return EXIT_OK


_COMMANDS = {
    "expand": _cmd_expand,
    "dissect": _cmd_dissect,
    "verify": _cmd_verify,
    "theorem": _cmd_theorem,
    "scan": _cmd_scan,
    "oracle": _cmd_oracle,
    "oracle-equiv": _cmd_oracle_equiv,
    "corollaries": _cmd_corollaries,
    "list": _cmd_list,
}


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Parse ``argv`` and run one subcommand; returns the exit code.

    Output is buffered and written once the command finishes, so ``--jobs`` never
    reorders it.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s")
    stdout = sys.stdout if stdout is None else stdout

    buffer = io.StringIO()
    try:
        cfg = CliConfig.from_args(args)
        code = _COMMANDS[args.command](args, cfg, buffer)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        logging.error(f"{args.command} failed: {exc}")
        return EXIT_FAIL

    try:
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(buffer.getvalue())
        else:
            stdout.write(buffer.getvalue())
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


def main(argv: Optional[List[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
