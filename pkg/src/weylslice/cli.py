"""Command line entry point: ``weylslice {complete-sum,verify,witness}``.

Exit codes: 0 success, 1 domain or suite failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import datetime as dt
import hashlib
import io
import json
import logging
import math
import sys
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional

from weylslice import __version__
from weylslice._parallel import THREADS_ENV, resolve_threads
from weylslice.complete_sums import complete_sum
from weylslice.core import IntPolynomial, TorusPoint, is_prime
from weylslice.errors import InvalidArgument, LemmaViolation
from weylslice.sweeps import SUITES, run_suite
from weylslice.witness import SweepResult, WitnessConfig, exponent_sweep

log = logging.getLogger("weylslice")

WITNESS_COLUMNS = ["p", "a1", "a2", "P", "f_abs", "target", "ratio", "exponent"]


def load_schema(name: str) -> dict:
    text = resources.files("weylslice").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def _modulus(text: str) -> int:
    try:
        q = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if q < 2:
        raise argparse.ArgumentTypeError(f"modulus must be >= 2, got {q}")
    return q


def _tau(text: str) -> float:
    try:
        tau = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 < tau < 0.25:
        raise argparse.ArgumentTypeError(f"tau must lie in (0, 1/4), got {tau}")
    return tau


def _threads(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("thread count must be >= 1")
    return n


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _csv_text(rows: List[Dict], columns: List[str]) -> str:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write(path: Path, text: str) -> str:
    data = text.encode("utf-8")
    path.write_bytes(data)
    return hashlib.sha256(data).hexdigest()


def _manifest(command: str, args: argparse.Namespace, outputs: Dict[str, str]) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    return {
        "command": command,
        "parameters": params,
        "version": __version__,
        "timestamp": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        "seed": params.get("seed"),
        "outputs": outputs,
    }


def cmd_complete_sum(args: argparse.Namespace) -> int:
    phi = IntPolynomial.parse(args.phi)
    q, a, c = args.q, args.a, args.c
    s = complete_sum(phi, q, a, c).value
    ratio: Optional[float] = None
    if is_prime(q) and c % q:
        ratio = abs(s) / ((phi.degree - 1) * math.sqrt(q))
    rec = {"phi": list(phi.coeffs), "q": q, "a": a, "c": c, "real": s.real, "imag": s.imag,
           "magnitude": abs(s), "weil_ratio": ratio}
    if args.format == "json":
        sys.stdout.write(_json_text(rec))
    elif args.format == "csv":
        row = dict(rec, phi=",".join(map(str, phi.coeffs)),
                   weil_ratio="" if ratio is None else ratio)
        sys.stdout.write(_csv_text([row], list(rec)))
    else:
        print(f"S({q}; {a}, {c}) = {s.real!r} + {s.imag!r}i")
        print(f"|S| = {abs(s)!r}")
        if ratio is not None:
            print(f"|S| / ((k-1) sqrt(q)) = {ratio!r}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    phi = IntPolynomial.parse(args.phi)
    res = run_suite(args.suite, phi, args.p_max, p_min=args.p_min, threads=args.threads,
                    samples=args.samples, seed=args.seed, ceiling=args.ceiling)
    rec = {"suite": res.suite, "phi": res.phi, "primes": res.primes, "checked": res.checked,
           "failures": res.failures, "worst": res.worst, "passed": res.passed}
    if args.format == "json":
        sys.stdout.write(_json_text(rec))
    else:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.suite} phi={res.phi}: {res.checked} checks over {res.primes} primes, "
              f"{len(res.failures)} failures")
        print("worst case: " + ", ".join(f"{k}={_fmt(v)}" for k, v in res.worst.items()))
        for f in res.failures[:20]:
            print("  failed: " + ", ".join(f"{k}={_fmt(v)}" for k, v in f.items()))
    return 0 if res.passed else 1


def _witness_record(args, phi: IntPolynomial, p_min: int, result: SweepResult) -> dict:
    return {
        "phi": list(phi.coeffs),
        "tau": args.tau,
        "alpha2": args.alpha2,
        "p_min": p_min,
        "p_max": args.p_max,
        "reports": [r.as_row() for r in result.reports],
        "slope": result.slope,
        "rejected": [{"a": r.a, "p": r.p} for r in result.rejected],
        "diagnostic": result.diagnostic,
    }


def _gnuplot_stub(dat_name: str, tau: float) -> str:
    return (
        "# log-log growth of |f| against P\n"
        "set xlabel 'log P'\nset ylabel 'log |f|'\n"
        f"plot '{dat_name}' using 1:2 with linespoints title 'witness', "
        f"{0.75 - tau!r}*x title 'P^(3/4 - tau)', 0.5*x title 'P^(1/2)'\n"
    )


def cmd_witness(args: argparse.Namespace) -> int:
    phi = IntPolynomial.parse(args.phi)
    alpha2 = TorusPoint.parse(args.alpha2)
    p_min = args.p_min if args.p_min is not None else (2 * phi.degree) ** 4 + 1
    config = WitnessConfig(phi, args.tau, p_min, args.p_max, alpha2)
    result = exponent_sweep(config, strategy=args.strategy, threads=args.threads)
    rows = [r.as_row() for r in result.reports]

    print(_csv_text(rows, WITNESS_COLUMNS).replace("\r\n", "\n"), end="")
    if result.diagnostic:
        print(f"diagnostic: {result.diagnostic}")
    for r in result.rejected:
        print(f"rejected approximation {r.a}/{r.p}")
    print(f"fitted slope: {_fmt(result.slope) if result.slope is not None else 'n/a'}")

    if args.out:
        prefix = Path(args.out)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        outputs = {}
        files = {
            ".csv": _csv_text(rows, WITNESS_COLUMNS),
            ".json": _json_text(_witness_record(args, phi, p_min, result)),
            ".dat": "# log_P log_f_abs\n"
            + "".join(f"{math.log(r.P)!r} {math.log(r.f_abs)!r}\n" for r in result.reports),
        }
        files[".gp"] = _gnuplot_stub(prefix.name + ".dat", args.tau)
        for ext, text in files.items():
            path = prefix.with_name(prefix.name + ext)
            outputs[path.name] = _write(path, text)
        manifest = _manifest("witness", args, outputs)
        _write(prefix.with_name(prefix.name + ".manifest.json"), _json_text(manifest))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weylslice", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true")
    common.add_argument("--threads", type=_threads, default=None,
                        help=f"worker threads (default ${THREADS_ENV} or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complete-sum", parents=[common], help="evaluate S(q; a, c)")
    p.add_argument("--phi", required=True, help="coefficients c0,c1,...,ck")
    p.add_argument("--q", type=_modulus, required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.set_defaults(func=cmd_complete_sum)

    p = sub.add_parser("verify", parents=[common], help="run an invariant sweep over primes")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--phi", default="0,0,1")
    p.add_argument("--p-min", type=int, default=None)
    p.add_argument("--p-max", type=int, required=True)
    p.add_argument("--samples", type=int, default=10, help="lemma1: random (a, c, beta) per prime")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ceiling", type=float, default=20.0, help="lemma1: normalized error ceiling")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", parents=[common], help="construct large-sum witnesses over a prime range")
    p.add_argument("--phi", default="0,0,1")
    p.add_argument("--tau", type=_tau, default=0.1)
    p.add_argument("--alpha2", default="sqrt2m1", help="decimal, a/b, or one of: sqrt2m1, golden")
    p.add_argument("--p-min", type=int, default=None, help="default (2k)^4 + 1")
    p.add_argument("--p-max", type=int, required=True)
    p.add_argument("--strategy", choices=["prime-scan", "convergent-filter"], default="prime-scan")
    p.add_argument("--out", default=None, help="output prefix for .csv/.json/.dat/.gp/.manifest.json")
    p.set_defaults(func=cmd_witness)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.threads = resolve_threads(args.threads)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InvalidArgument, LemmaViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
