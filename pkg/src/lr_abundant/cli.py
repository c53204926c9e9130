"""``lr-abundant`` command line.

Exit codes: 0 success, 1 usage or I/O error, 2 a bound or Robin check failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager

from . import exact_oracle
from .checkpoint import CheckpointError, load_checkpoint
from .chebyshev import (DEFAULT_LIMIT, SUITE_IDS, SieveTables, check_dusart,
                        check_mertens_shift, run_suite)
from .constants import compute_m_constant, compute_w1, compute_w2, verify_theorem3
from .lr_engine import CSV_FIELDS, EXP_GAMMA, Engine, LRState, robin_check, run
from .primes import sieve
from .zstream import ZRangeError

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
MAX_PRECISION = 15

THEOREM_ALIASES = {
    "lemma1": "lemma1", "l1": "lemma1",
    "lemma2": "lemma2", "l2": "lemma2",
    "2": "theorem2", "theorem2": "theorem2",
    "4": "theorem4", "theorem4": "theorem4",
    "6": "theorem6", "theorem6": "theorem6",
    "7": "theorem7", "theorem7": "theorem7",
    "dusart": "dusart", "6.8": "dusart",
    "mertens": "mertens_shift", "6.6": "mertens_shift",
}
ALL_CHECKS = (*SUITE_IDS, "dusart", "mertens_shift")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _number(text: str) -> int:
    """Accept ``1000``, ``1e7`` or ``10_000_000``."""
    try:
        value = float(text.replace("_", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value != int(value) or value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer: {text!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lr-abundant", description="Largest rho-value numbers and the Robin inequality.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--count", type=_number, default=20)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--checkpoint", help="write a checkpoint here")
    common.add_argument("--checkpoint-every", type=_number, default=None)
    common.add_argument("--resume", help="continue from this checkpoint")
    common.add_argument("--precision", type=int, default=4, help=f"decimals, 0..{MAX_PRECISION}")

    sub.add_parser("generate", parents=[common], help="emit LR-number records")
    sub.add_parser("robin", parents=[common], help="check the Robin inequality for n_m > 5040")

    p = sub.add_parser("constants", help="W1, M, W2 and the W2 - W1 = gamma identity")
    p.add_argument("--max-z", type=_number, default=10 ** 7)
    p.add_argument("--out")

    p = sub.add_parser("bounds", help="run bound suites")
    p.add_argument("--theorem", default="all", help="comma list: lemma1,lemma2,2,4,6,7,dusart,mertens or all")
    p.add_argument("--m-max", type=_number, default=1000)
    p.add_argument("--sample-to", type=_number, default=None, help="extra Theorem 7 samples up to this m")
    p.add_argument("--samples", type=_number, default=10)
    p.add_argument("--max-z", type=_number, default=10 ** 7, help="truncation for the W1 estimate")
    p.add_argument("--sieve-limit", type=_number, default=DEFAULT_LIMIT)
    p.add_argument("--out")

    p = sub.add_parser("oracle", help="brute-force maximizer of sigma(n)/n over S_m")
    p.add_argument("--m", type=_number, required=True)
    p.add_argument("--out")
    return parser


@contextmanager
def _output(path):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            yield f
    else:
        yield sys.stdout


def _write_json(obj, path) -> None:
    with _output(path) as f:
        json.dump(obj, f, indent=2, sort_keys=False)
        f.write("\n")


def _engine(args) -> Engine:
    return load_checkpoint(args.resume) if args.resume else Engine()


def _check_precision(args) -> int:
    if not 0 <= args.precision <= MAX_PRECISION:
        raise UsageError(f"--precision must be in 0..{MAX_PRECISION}")
    return args.precision


def cmd_generate(args) -> int:
    d = _check_precision(args)
    engine = _engine(args)
    with _output(args.out) as f:
        if args.format == "csv":
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_FIELDS)

            def sink(rec):
                writer.writerow(rec.formatted(d))
        else:
            def sink(rec):
                vals = rec.formatted(d)
                obj = {"m": rec.m, "q": rec.q, "k": rec.k, "z": rec.z,
                       "delta": float(vals[4]), "rho": float(vals[5]),
                       "log_n": float(vals[6]), "G": float(vals[7]), "verdict": rec.verdict}
                f.write(json.dumps(obj) + "\n")

        if engine.state.m < args.count:
            run(args.count, sink, args.checkpoint_every, args.checkpoint, engine)
    return EXIT_OK


def _describe_failure(rec, state: LRState | None = None) -> dict:
    out = {"m": rec.m, "q": rec.q, "k": rec.k, "z": rec.z, "G": rec.G}
    if state is not None and state.m == rec.m:
        v = robin_check(state)
        out.update(margin=v.margin, error_bound=v.error_bound, indeterminate=v.indeterminate,
                   n=exact_oracle.render(state.exponents))
    return out


def cmd_robin(args) -> int:
    d = _check_precision(args)
    engine = _engine(args)
    failures = []

    def sink(rec):
        if rec.verdict == "fails":
            failures.append(_describe_failure(rec, engine.state))

    summary = run(args.count, sink, args.checkpoint_every, args.checkpoint, engine)
    result = {
        "checked": summary.count,
        "above_threshold": summary.above_threshold,
        "exp_gamma": EXP_GAMMA,
        "max_G": summary.max_g,
        "max_G_formatted": None if summary.max_g is None else f"{summary.max_g:.{d}f}",
        "max_G_m": summary.max_g_m,
        "holds": not failures,
    }
    if summary.above_threshold == 0:
        result["note"] = "no LR numbers above threshold checked; all n_m <= 5040"
    if failures:
        result["witnesses"] = failures
    _write_json(result, args.out)
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_constants(args) -> int:
    if args.max_z < 900:
        raise UsageError("--max-z must be >= 900")
    primes = sieve(args.max_z)
    w1 = compute_w1(args.max_z, primes)
    m = compute_m_constant(args.max_z, primes)
    w2 = compute_w2(args.max_z, primes)
    t3 = verify_theorem3(w1, w2)
    _write_json({"W1": w1.to_json(), "M": m.to_json(), "W2": w2.to_json(), "theorem3": t3.to_json()}, args.out)
    return EXIT_OK if t3.passed else EXIT_FAIL


def _parse_theorems(text: str) -> list[str]:
    if text.strip().lower() == "all":
        return list(ALL_CHECKS)
    out = []
    for tok in text.split(","):
        key = tok.strip().lower()
        if key not in THEOREM_ALIASES:
            raise UsageError(f"unknown theorem id {tok!r}")
        if THEOREM_ALIASES[key] not in out:
            out.append(THEOREM_ALIASES[key])
    return out


def cmd_bounds(args) -> int:
    checks = _parse_theorems(args.theorem)
    tables = SieveTables(args.sieve_limit)
    reports = []
    suite_ids = [c for c in checks if c in SUITE_IDS]
    if suite_ids:
        w1 = compute_w1(args.max_z) if "theorem4" in suite_ids else None
        samples = []
        if args.sample_to and args.sample_to > args.m_max:
            step = max(1, (args.sample_to - args.m_max) // max(1, args.samples))
            samples = list(range(args.sample_to, args.m_max, -step))
        suite = run_suite(suite_ids, args.m_max, tables, w1, samples)
        reports.extend(suite[c] for c in suite_ids)
    if "dusart" in checks:
        reports.append(check_dusart(tables))
    if "mertens_shift" in checks:
        reports.append(check_mertens_shift(tables))
    _write_json([r.to_json() for r in reports], args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_oracle(args) -> int:
    m = args.m
    if not 1 <= m <= exact_oracle.MAX_ENUMERATION_M:
        raise UsageError(f"--m must be in 1..{exact_oracle.MAX_ENUMERATION_M}")
    exps, value = exact_oracle.brute_force_max_rho(m)
    engine = Engine()
    for _ in engine.states(m):
        pass
    engine_rho = exact_oracle.sigma_over_n_exact(engine.state.exponents)
    n = exact_oracle.materialize(exps)
    result = {
        "m": m,
        "n": n,
        "factorization": exact_oracle.render(exps),
        "rho": f"{value.numerator}/{value.denominator}",
        "rho_float": float(value),
        "engine_n": exact_oracle.materialize(engine.state.exponents),
        "matches_engine": engine_rho == value and exps == engine.state.exponents,
        "maximizers": [exact_oracle.render(e) for e in exact_oracle.maximizers(m)],
        "candidates": exact_oracle.candidate_count(m),
    }
    _write_json(result, args.out)
    return EXIT_OK if result["matches_engine"] else EXIT_FAIL


COMMANDS = {
    "generate": cmd_generate,
    "robin": cmd_robin,
    "constants": cmd_constants,
    "bounds": cmd_bounds,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, CheckpointError) as exc:
        print(f"lr-abundant: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ZRangeError) as exc:
        print(f"lr-abundant: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
