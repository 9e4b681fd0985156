"""Command-line front end.

    cntheta lvalue 5 --json
    cntheta sha 113
    cntheta zero-order 41 --precision 192
    cntheta scan 1 500 --out results.csv --jobs 4
    cntheta verify --suite gauss

Exit codes: 0 ok, 1 domain error, 2 verification failure, 64 usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import DomainError
from .hpc import DEFAULT_BITS, PrecisionContext
from .identities import lvalue_oracles, verify_corthetaf, verify_factorization, verify_gauss
from .lvalue import central_lvalue, predicted_sha
from .zeros import ScanRecord, default_jobs, digits_for, fmt, mock_heegner_scan, vanishing_order, verify_atkin_lehner

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2, 64

CSV_COLUMNS = [
    "n", "case", "b", "theta_abs", "lvalue", "err", "vanishing",
    "sha_rounded", "tunnell_a", "tunnell_b", "zero_order", "status",
]
DONE = ("ok", "flagged")

# fixed verification sets for the CLI suites (even b throughout)
AL_NS = (5, 13, 17, 29, 37, 41, 65, 73)
FACTORIZATION_TUPLES = ((1, 1, 1, 0), (1, 1, 5, 2), (5, 1, 1, 18), (1, 5, 1, 2), (13, 1, 5, 268), (1, 17, 13, 174))
DIVISOR_SUM_TUPLES = ((1, 1, 1, 0), (5, 1, 1, 2), (13, 1, 1, 70), (65, 1, 1, 8), (13, 5, 1, 18))


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--precision", type=int, default=DEFAULT_BITS, metavar="BITS", help="working precision in bits (default %(default)s)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    p.add_argument("--jobs", type=int, default=None, metavar="K", help="scan worker processes (default: available cores)")
    return p


def build_parser() -> Parser:
    common = _common()
    ap = Parser(prog="cntheta", description="Central L-values of congruent number curves from theta CM values.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", parser_class=Parser)
    sub.required = True
    for name, help_ in (("lvalue", "L(E_n, 1) with error bound and vanishing verdict"), ("sha", "predicted order of Sha(E_n)"), ("zero-order", "vanishing order of theta_chi_n at tau_n (odd n)")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("n", type=int)
    p = sub.add_parser("scan", parents=[common], help="analyse every valid n in a range")
    p.add_argument("n_from", type=int)
    p.add_argument("n_to", type=int)
    p.add_argument("--no-order", action="store_true", help="skip vanishing-order computations")
    p = sub.add_parser("verify", parents=[common], help="numerical identity checks")
    p.add_argument("--suite", choices=("gauss", "atkin-lehner", "factorization", "tunnell", "all"), default="all")
    return ap


# --------------------------------------------------------------------------
# documents


def report_doc(rep, bits: int, zero_order=None) -> dict:
    inp = rep.input
    tun = rep.tunnell
    return {
        "n": inp.n,
        "case": inp.case.value,
        "b": rep.b,
        "tau": {"num_b": rep.b, "num_offset": rep.tau.b - rep.b, "den": rep.tau.d},
        "theta_abs": fmt(rep.theta_abs, bits),
        "lvalue": fmt(rep.lvalue, bits),
        "err": fmt(rep.err, bits),
        "vanishing": rep.vanishing.value,
        "sha_predicted": None if rep.sha is None else fmt(rep.sha.value, bits),
        "sha_rounded": rep.sha_rounded,
        "tunnell": None if tun is None else {"a": tun.a_count, "b": tun.b_count, "vanishing": tun.vanishing},
        "zero_order": zero_order,
    }


def record_doc(rec: ScanRecord) -> dict:
    tau = None
    if rec.tau is not None:
        tau = {"num_b": rec.b, "num_offset": rec.tau.b - rec.b, "den": rec.tau.d}
    tun = None
    if rec.tunnell_a is not None:
        tun = {"a": rec.tunnell_a, "b": rec.tunnell_b, "vanishing": rec.tunnell_vanishing}
    doc = {
        "n": rec.n,
        "case": rec.case,
        "b": rec.b,
        "tau": tau,
        "theta_abs": rec.theta_abs,
        "lvalue": rec.lvalue,
        "err": rec.err,
        "vanishing": rec.vanishing,
        "sha_predicted": rec.sha_predicted,
        "sha_rounded": rec.sha_rounded,
        "tunnell": tun,
        "zero_order": rec.zero_order,
        "status": rec.status,
    }
    if rec.flags:
        doc["flags"] = list(rec.flags)
    if rec.message:
        doc["message"] = rec.message
    return doc


def record_row(rec: ScanRecord) -> list:
    vals = [rec.n, rec.case, rec.b, rec.theta_abs, rec.lvalue, rec.err, rec.vanishing,
            rec.sha_rounded, rec.tunnell_a, rec.tunnell_b, rec.zero_order, rec.status]
    return ["" if v is None else v for v in vals]


def _csv_line(row) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(row)
    return buf.getvalue()


def _json_line(doc) -> str:
    return json.dumps(doc, sort_keys=False) + "\n"


class Output:
    """stdout or a file, always UTF-8 with LF line endings."""

    def __init__(self, path):
        self.path = path
        self.fh = open(path, "w", encoding="utf-8", newline="\n") if path else sys.stdout

    def write(self, text: str):
        self.fh.write(text)

    def close(self):
        if self.path:
            self.fh.close()


# --------------------------------------------------------------------------
# commands


def cmd_lvalue(args, ctx) -> int:
    rep = central_lvalue(args.n, ctx)
    out = Output(args.out)
    try:
        if args.json:
            out.write(_json_line(report_doc(rep, ctx.bits)))
            return EXIT_OK
        d = digits_for(ctx.bits)
        mp = ctx.mp
        out.write(f"n = {rep.input.n} ({rep.input.case.value}, n = {rep.input.n_mod_8} mod 8)\n")
        out.write(f"tau = {rep.tau}  (b = {rep.b})\n")
        out.write(f"|theta| = {mp.nstr(rep.theta_abs, d)}\n")
        out.write(f"L(E_n,1) = {mp.nstr(rep.lvalue, d)}  +- {mp.nstr(rep.err, 3)}\n")
        out.write(f"vanishing: {rep.vanishing.value}\n")
        if rep.sha is not None:
            out.write(f"Sha (predicted) = {mp.nstr(rep.sha.value, d)}  ~ {rep.sha.rounded}\n")
        t = rep.tunnell
        out.write(f"Tunnell: A = {t.a_count}, B = {t.b_count} ({'vanishing' if t.vanishing else 'nonvanishing'})\n")
    finally:
        out.close()
    return EXIT_OK


def cmd_sha(args, ctx) -> int:
    rep = central_lvalue(args.n, ctx)
    sha = predicted_sha(rep.input, ctx, rep)
    out = Output(args.out)
    try:
        if args.json:
            out.write(_json_line(report_doc(rep, ctx.bits)))
        else:
            mp = ctx.mp
            out.write(f"Sha(E_{args.n}) predicted = {mp.nstr(sha.value, digits_for(ctx.bits))}\n")
            out.write(f"rounded = {sha.rounded} (near integer: {sha.near_integer}, square: {sha.is_square})\n")
    finally:
        out.close()
    return EXIT_OK


def cmd_zero_order(args, ctx) -> int:
    rep = vanishing_order(args.n, ctx)
    out = Output(args.out)
    try:
        if args.json:
            doc = {
                "n": rep.n,
                "tau": {"num_b": rep.tau.b, "num_offset": 0, "den": rep.tau.d},
                "order": rep.order,
                "coeff_mags": [fmt(c, ctx.bits) for c in rep.coeff_mags],
                "radius": fmt(rep.radius, ctx.bits),
                "samples": rep.samples,
            }
            out.write(_json_line(doc))
        else:
            out.write(f"n = {rep.n}, tau = {rep.tau}, order = {rep.order}\n")
            for j, c in enumerate(rep.coeff_mags):
                out.write(f"  |c_{j} r^{j}| = {ctx.mp.nstr(c, 6)}\n")
    finally:
        out.close()
    return EXIT_OK


def _read_existing(path: str, as_json: bool, lo: int, hi: int) -> dict[int, str]:
    """Completed lines of a previous run keyed by n (the line text)."""
    if not path or not os.path.exists(path):
        return {}
    done = {}
    with open(path, encoding="utf-8", newline="") as fh:
        if as_json:
            for line in fh:
                if not line.strip():
                    continue
                try:
                    doc = json.loads(line)
                except json.JSONDecodeError:
                    continue  # truncated final line of an interrupted run
                if doc.get("status") in DONE and lo <= doc["n"] <= hi:
                    done[doc["n"]] = line if line.endswith("\n") else line + "\n"
        else:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != CSV_COLUMNS:
                return {}
            for row in reader:
                if len(row) != len(CSV_COLUMNS) or row[-1] not in DONE:
                    continue
                n = int(row[0])
                if lo <= n <= hi:
                    done[n] = _csv_line(row)
    return done


def cmd_scan(args, ctx) -> int:
    jobs = args.jobs if args.jobs else default_jobs()
    done = _read_existing(args.out, args.json, args.n_from, args.n_to)
    lines = dict(done)
    header = "" if args.json else _csv_line(CSV_COLUMNS)

    def render(rec):
        return _json_line(record_doc(rec)) if args.json else _csv_line(record_row(rec))

    if args.out:
        # append as we go so an interrupted scan can resume
        fresh = not os.path.exists(args.out) or not done
        fh = open(args.out, "w" if fresh else "a", encoding="utf-8", newline="\n")
        if fresh:
            fh.write(header)
            for n in sorted(done):
                fh.write(done[n])
    else:
        fh = sys.stdout
        fh.write(header)

    def on_record(rec):
        text = render(rec)
        lines[rec.n] = text
        fh.write(text)
        fh.flush()

    try:
        records = mock_heegner_scan(args.n_from, args.n_to, ctx, jobs=jobs, with_order=not args.no_order, skip=set(done), on_record=on_record)
    finally:
        if args.out:
            fh.close()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header)
            for n in sorted(lines):
                fh.write(lines[n])
    return EXIT_VERIFY if any(r.status == "error" for r in records) else EXIT_OK


def _suite_checks(suite: str, ctx):
    """Yield (name, residual, err, ok) for one suite."""
    if suite == "gauss":
        for c in verify_gauss(ctx) + lvalue_oracles(ctx):
            yield c.name, c.residual, c.err, c.ok
    elif suite == "atkin-lehner":
        rng = np.random.default_rng(20240601)
        for n in AL_NS:
            for _ in range(5):
                tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.2, 2.0))
                c = verify_atkin_lehner(n, ctx.mp.mpc(tau), ctx)
                yield f"atkin-lehner n={n} tau={tau:.6f}", c.residual, c.err, c.ok
    elif suite == "factorization":
        for t in FACTORIZATION_TUPLES:
            c = verify_factorization(*t, ctx)
            yield c.name, c.residual, c.err, c.ok
        for t in DIVISOR_SUM_TUPLES:
            c = verify_corthetaf(*t, ctx)
            yield c.name, c.residual, c.err, c.ok
    elif suite == "tunnell":
        from .arith import is_valid_curve

        for n in range(1, 201):
            if not is_valid_curve(n):
                continue
            rep = central_lvalue(n, ctx)
            agree = rep.tunnell_consistent is True
            yield f"tunnell n={n} {rep.vanishing.value}", ctx.mp.mpf(0 if agree else 1), ctx.mp.mpf(0), agree


def cmd_verify(args, ctx) -> int:
    suites = ("gauss", "atkin-lehner", "factorization", "tunnell") if args.suite == "all" else (args.suite,)
    out = Output(args.out)
    failed = 0
    try:
        for suite in suites:
            for name, residual, err, ok in _suite_checks(suite, ctx):
                failed += not ok
                if args.json:
                    out.write(_json_line({"suite": suite, "name": name, "residual": fmt(residual, ctx.bits), "err": fmt(err, ctx.bits), "ok": ok}))
                else:
                    mp = ctx.mp
                    out.write(f"{'PASS' if ok else 'FAIL'}  {name}  residual={mp.nstr(residual, 3)}  err={mp.nstr(err, 3)}\n")
    finally:
        out.close()
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {"lvalue": cmd_lvalue, "sha": cmd_sha, "zero-order": cmd_zero_order, "scan": cmd_scan, "verify": cmd_verify}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"cntheta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        ctx = PrecisionContext(args.precision)
    except ValueError as exc:
        print(f"cntheta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, ctx)
    except DomainError as exc:
        print(f"cntheta: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
