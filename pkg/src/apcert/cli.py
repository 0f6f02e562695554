"""Command-line front end.

Exit status: 0 success, 2 bad arguments, 3 a certificate failed to verify,
4 an enumeration cap was exceeded. Errors print one line ``error: <kind>:
<message>`` on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

from . import apcount, certify, lpbound, necklace
from .modgroup import primes_between

CONFIG_ENV = "APCERT_CONFIG"

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_CAP = 0, 2, 3, 4


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


@dataclass
class RunConfig:
    enumeration_cap: int = apcount.DEFAULT_CAP
    thread_count: int = 1
    output: str = "-"
    format: str = "text"

    def validate(self) -> RunConfig:
        if not 1 <= self.enumeration_cap <= apcount.HARD_CAP:
            raise UsageError(f"enumeration_cap must be in 1..{apcount.HARD_CAP}")
        if self.thread_count < 1:
            raise UsageError("thread_count must be >= 1")
        if self.format not in ("text", "csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        return self

    @classmethod
    def load(cls, path: str | None) -> RunConfig:
        """Defaults, overridden by the JSON file named by ``path`` or $APCERT_CONFIG."""
        path = path or os.environ.get(CONFIG_ENV)
        if not path:
            return cls()
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)


def _csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands; each returns the text to emit


def cmd_necklaces(args: argparse.Namespace, cfg: RunConfig) -> str:
    strings = [str(x) for x in (necklace.gen_colex if args.order == "colex" else necklace.gen_coollex)(args.n, args.ones)]
    if cfg.format == "json":
        return json.dumps({"n": args.n, "ones": args.ones, "order": args.order, "necklaces": strings}) + "\n"
    if cfg.format == "csv":
        return _csv(["necklace"], [[s] for s in strings])
    return "".join(s + "\n" for s in strings)


def cmd_table(args: argparse.Namespace, cfg: RunConfig) -> str:
    if args.n_min > args.n_max:
        raise UsageError("--n-min exceeds --n-max")
    if args.n_max > cfg.enumeration_cap:
        raise apcount.CapExceeded(f"n={args.n_max} exceeds enumeration cap {cfg.enumeration_cap}")
    ns = list(range(args.n_min, args.n_max + 1))
    for n in ns:
        if args.k > n:
            raise UsageError(f"k={args.k} exceeds n={n}")

    def row(n: int) -> list[int]:
        return apcount.w_row(n, args.k, args.convention, cfg.enumeration_cap)

    with ThreadPoolExecutor(max_workers=cfg.thread_count) as pool:
        rows = dict(zip(ns, pool.map(row, ns)))
    if cfg.format == "csv":
        return _csv(["n", "D", "W"], [[n, D, w] for n in ns for D, w in enumerate(rows[n])])
    if cfg.format == "json":
        return json.dumps({"k": args.k, "convention": args.convention, "rows": {str(n): rows[n] for n in ns}}) + "\n"
    return "".join(f"{n:>3} | " + " ".join(str(w) for w in rows[n]) + "\n" for n in ns)


def cmd_dist(args: argparse.Namespace, cfg: RunConfig) -> str:
    stats = apcount.min_aps(args.n, args.k, args.ones, args.convention, cfg.enumeration_cap)
    hist = sorted(stats.histogram.items())
    if cfg.format == "csv":
        return _csv(["count", "necklaces"], hist)
    if cfg.format == "json":
        return json.dumps({
            "n": args.n, "k": args.k, "D": args.ones,
            "min_count": stats.min_count, "witness": str(stats.witness),
            "histogram": {str(c): v for c, v in hist},
        }) + "\n"
    lines = [f"min {stats.min_count} witness {stats.witness}"]
    lines += [f"{c}: {v}" for c, v in hist]
    return "\n".join(lines) + "\n"


def _theorem(args: argparse.Namespace) -> str:
    if args.theorem:
        return args.theorem
    return "small" if args.p in certify.SMALL_PRIMES else "general"


def cmd_lambda(args: argparse.Namespace, cfg: RunConfig) -> str:
    small = args.theorem == "small"
    value = certify.lambda_small(args.p, args.D) if small else certify.lambda_general(args.p, args.D)
    if cfg.format == "json":
        return json.dumps({"p": args.p, "D": args.D, "theorem": args.theorem, "lambda": str(value)}) + "\n"
    return f"{value}\n"


def cmd_certify(args: argparse.Namespace, cfg: RunConfig) -> str:
    theorem = _theorem(args)
    report = certify.verify_smallprime(args.p) if theorem == "small" else certify.verify_theorem1(args.p)
    if args.json or cfg.format == "json":
        out = json.dumps(report.to_json(), indent=2) + "\n"
    else:
        status = "verified" if report.verified else "NOT verified"
        lines = [
            f"p={report.p} theorem={report.theorem}: {status}",
            f"reading: {report.reading}",
            f"bound: {report.bound_formula}",
            f"checked D: {report.checked_D}",
        ]
        if report.verified:
            for D, terms in report.term_lines.items():
                for name, w in terms.items():
                    lines.append(f"  D={D} {name}: {w}")
        else:
            lines.append(f"residual: {report.residual}")
        for att in report.attempts:
            if not att.verified:
                why = att.error or "nonzero residual " + str(next(iter(att.residuals.values()), ""))
                lines.append(f"  rejected reading [{att.reading}]: {why}")
        out = "\n".join(lines) + "\n"
    if not report.verified:
        raise VerificationFailed(out)
    return out


def cmd_lp(args: argparse.Namespace, cfg: RunConfig) -> str:
    res = lpbound.solve_lp(args.p, args.D)
    if args.json or cfg.format == "json":
        out = json.dumps(res.to_json()) + "\n"
    else:
        out = f"{res.bound:.9f} ({res.status}, max violation {res.residuals:.2e})\n"
    if res.status != "optimal":
        raise VerificationFailed(out.strip() + (f" {res.detail}" if res.detail else ""))
    return out


def cmd_threshold(args: argparse.Namespace, cfg: RunConfig) -> str:
    D = lpbound.threshold(args.p)
    lo, hi = lpbound.bracket(args.p)
    if cfg.format == "json":
        return json.dumps({"p": args.p, "Dstar": D, "lower_bracket": lo, "upper_bracket": hi}) + "\n"
    return f"{D}\n"


CURVE_HEADER = ["p", "Dstar", "delta_star", "lower_bracket", "upper_bracket"]


def cmd_threshold_curve(args: argparse.Namespace, cfg: RunConfig) -> str:
    primes = primes_between(5, args.p_max)
    with ThreadPoolExecutor(max_workers=cfg.thread_count) as pool:
        stars = list(pool.map(lpbound.threshold, primes))
    rows = []
    for p, D in zip(primes, stars):
        lo, hi = lpbound.bracket(p)
        rows.append([p, D, f"{D / p:.6f}", lo, hi])
    text = _csv(CURVE_HEADER, rows)
    if args.csv:
        Path(args.csv).write_text(text)
        return ""
    return text


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "csv", "json"])
    common.add_argument("--cap", type=int, help="enumeration cap for brute force (max 32)")
    common.add_argument("--threads", type=int, help="worker threads")
    common.add_argument("--output", help="write output to this file instead of stdout")
    common.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")

    parser = _Parser(prog="apcert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("necklaces", parents=[common], help="list fixed-density necklaces")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--ones", type=int, required=True)
    s.add_argument("--order", choices=["colex", "coollex"], default="coollex")
    s.set_defaults(func=cmd_necklaces)

    conv = dict(choices=list(apcount.CONVENTIONS), default="published")

    s = sub.add_parser("table", parents=[common], help="W(k, Z_n, D/n) rows by brute force")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n-min", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--convention", **conv)
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("dist", parents=[common], help="histogram of progression counts")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--ones", type=int, required=True)
    s.add_argument("--convention", **conv)
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("lambda", parents=[common], help="closed-form lower bound")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--theorem", choices=["general", "small"], default="general")
    s.set_defaults(func=cmd_lambda)

    s = sub.add_parser("certify", parents=[common], help="verify a certificate exactly")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--theorem", choices=["general", "small"])
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("lp", parents=[common], help="solve the circulant LP")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_lp)

    s = sub.add_parser("threshold", parents=[common], help="least D with a positive LP bound")
    s.add_argument("--p", type=int, required=True)
    s.set_defaults(func=cmd_threshold)

    s = sub.add_parser("threshold-curve", parents=[common], help="threshold for every prime up to --p-max")
    s.add_argument("--p-max", type=int, required=True)
    s.add_argument("--csv", help="write the CSV here")
    s.set_defaults(func=cmd_threshold_curve)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.load(args.config)
    if args.format:
        cfg.format = args.format
    if args.cap is not None:
        cfg.enumeration_cap = args.cap
    if args.threads is not None:
        cfg.thread_count = args.threads
    if args.output:
        cfg.output = args.output
    return cfg.validate()


def _emit(text: str, cfg: RunConfig) -> None:
    if not text:
        return
    if cfg.output in ("-", ""):
        sys.stdout.write(text)
    else:
        Path(cfg.output).write_text(text)


def _fail(kind: str, message: str, code: int) -> int:
    first = message.strip().splitlines()[0] if message.strip() else kind
    print(f"error: {kind}: {first}", file=sys.stderr)
    return code


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        _emit(args.func(args, cfg), cfg)
    except VerificationFailed as exc:
        text = str(exc)
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return _fail("verification", text, EXIT_VERIFY)
    except apcount.CapExceeded as exc:
        return _fail("resource-cap", str(exc), EXIT_CAP)
    except (UsageError, ValueError, TypeError) as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    except (lpbound.NumericalFailure, lpbound.BracketViolation) as exc:
        return _fail("verification", str(exc), EXIT_VERIFY)
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
