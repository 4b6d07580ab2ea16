"""Command-line front end.

Exit codes: 0 pass (or no oracle), 2 usage or scope error, 3 verification
failure, 4 internal assertion.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from .codelab import DefiningSetSpec, EmptyDefiningSet
from .expsum import ValueDistribution, joint_distribution, sweep_s_distribution
from .galois import MAX_M, FieldError, PolyConfigError, field_ctx, load_poly_config
from .oracle import EvenM, OutOfTheoremScope, VerificationReport, compare, predict
from .verify import SUBJECTS, construct, require_scope, run_subject

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INTERNAL = 0, 2, 3, 4


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _hex(text: str) -> int:
    if not text.lower().startswith("0x"):
        raise argparse.ArgumentTypeError("expected 0x<hex>")
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad hex value {text!r}") from None


def _m_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad m list {text!r}") from None


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument("--out", help="write output to this file (UTF-8) instead of stdout")
    p.add_argument("--workers", type=_positive, default=1, help="maximum parallel sweep workers")
    p.add_argument("--poly-file", help="file of 'm=<int> poly=0x<hex>' lines overriding defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="z4lee", description="Z4-linear trace codes over GR(4,m)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code, enumerate it, compare with the closed form")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--set", dest="spec", required=True, help="single:t | pair:t1,t2 | complement:t")
    p.add_argument("--poly", type=_hex, help="defining polynomial as 0x<hex> bitmask")
    p.add_argument("--timings", action="store_true", help="report wall-clock time")
    _add_common(p)

    p = sub.add_parser("verify", help="check one subject against its closed forms")
    p.add_argument("subject", choices=SUBJECTS)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--poly", type=_hex)
    p.add_argument("--timings", action="store_true", help="report wall-clock time per sub-case")
    _add_common(p)

    p = sub.add_parser("batch", help="verify several subjects across several m")
    p.add_argument("--m", type=_m_list, required=True, help="comma-separated odd m values")
    p.add_argument("--subjects", required=True, help="comma-separated subject names")
    _add_common(p)

    p = sub.add_parser("sums", help="export exponential-sum value distributions")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--poly", type=_hex)
    p.add_argument("--which", choices=("plus", "minus", "joint"), default="plus")
    p.add_argument("--shifts", default="0,2", help="Z4 shifts for --which joint, e.g. 0,1,2,3")
    _add_common(p)
    return parser


def _poly_for(args, m: int) -> int | None:
    overrides = load_poly_config(args.poly_file) if args.poly_file else None
    if getattr(args, "poly", None) is not None:
        return args.poly
    if overrides and m in overrides:
        return overrides[m]
    return None


def _ctx(args, m: int):
    if not 1 <= m <= MAX_M:
        raise UsageError(f"m must satisfy 1 <= m <= {MAX_M}, got {m}")
    return field_ctx(m, _poly_for(args, m))


# ---------------------------------------------------------------------------
# rendering helpers
# ---------------------------------------------------------------------------

def _table(headers: list[str], rows: list[list]) -> str:
    cells = [[str(c) for c in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(headers)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(headers, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def _report_dict(rep: VerificationReport, timings: bool) -> dict:
    d = rep.as_dict()
    d["diffs"] = [{k: (v if isinstance(v, (int, str, list, bool)) or v is None else str(v))
                   for k, v in diff.items()} for diff in d["diffs"]]
    if not timings:
        d["runtime_ms"] = None
    return d


def _report_line(rep: VerificationReport, timings: bool) -> str:
    line = f"{rep.status}  m={rep.m}  {rep.subject}"
    if timings:
        line += f"  [{rep.runtime_ms:.1f} ms]"
    if not rep.passed:
        line += f"  first diff: {rep.first_diff()}"
    return line


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_construct(args) -> int:
    try:
        spec = DefiningSetSpec.parse(args.spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ctx = _ctx(args, args.m)
    t0 = time.perf_counter()
    c = construct(ctx, spec, args.workers)

    report, note = None, None
    if ctx.m % 2 == 0:
        note = "no oracle (even m); exploratory enumeration"
    else:
        try:
            pred = predict(ctx.m, spec)
        except OutOfTheoremScope as exc:
            note = f"no oracle ({exc}); exploratory enumeration"
        else:
            report = compare(pred, c.summary(), ctx.m, f"Theorem {pred.theorem} {spec}", t0)
            if c.type_result.size != c.codewords:
                raise AssertionError(f"type 4^{c.type_result.k1}*2^{c.type_result.k2} != {c.codewords}")
    elapsed = (time.perf_counter() - t0) * 1000

    dist = c.distribution
    if args.format == "json":
        obj = {
            "m": ctx.m, "poly": f"{ctx.poly:#x}", "spec": str(spec), "n": c.code.n,
            "codewords": c.codewords, "k1": c.type_result.k1, "k2": c.type_result.k2,
            "d_lee": c.d_lee, "distribution": [[w, f] for w, f in dist.entries],
            "verification": _report_dict(report, args.timings) if report else None,
            "note": note,
        }
        if args.timings:
            obj["runtime_ms"] = round(elapsed, 3)
        text = json.dumps(obj) + "\n"
    elif args.format == "csv":
        text = dist.to_csv()
    else:
        head = [
            ["m", ctx.m], ["poly", f"{ctx.poly:#x}"], ["spec", str(spec)], ["n", c.code.n],
            ["codewords", c.codewords], ["k1", c.type_result.k1], ["k2", c.type_result.k2],
            ["d_lee", c.d_lee if c.d_lee is not None else "-"],
        ]
        text = "".join(f"{k:<10} {v}\n" for k, v in head)
        text += "\n" + _table(["lee_weight", "frequency"], [[w, f] for w, f in dist.entries]) + "\n"
        text += (_report_line(report, args.timings) if report else f"note: {note}") + "\n"
        if args.timings:
            text += f"elapsed: {elapsed:.1f} ms\n"
    _emit(args, text)
    return EXIT_FAIL if report is not None and not report.passed else EXIT_OK


def _scope(subject: str, m: int) -> None:
    try:
        require_scope(subject, m)
    except OutOfTheoremScope as exc:
        raise UsageError(f"{subject} at m={m}: {exc}") from None


def cmd_verify(args) -> int:
    _scope(args.subject, args.m)
    ctx = _ctx(args, args.m)
    reports = run_subject(args.subject, args.m, ctx.poly, args.workers)
    if args.format == "json":
        text = json.dumps([_report_dict(r, args.timings) for r in reports], indent=1) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "subject", "status", "first_diff"] + (["runtime_ms"] if args.timings else []))
        for r in reports:
            w.writerow([r.m, r.subject, r.status, r.first_diff()]
                       + ([f"{r.runtime_ms:.1f}"] if args.timings else []))
        text = buf.getvalue()
    else:
        text = "".join(_report_line(r, args.timings) + "\n" for r in reports)
    _emit(args, text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_batch(args) -> int:
    subjects = [s.strip() for s in args.subjects.split(",") if s.strip()]
    if not subjects:
        raise UsageError("empty subject list")
    bad = [s for s in subjects if s not in SUBJECTS]
    if bad:
        raise UsageError(f"unknown subjects {bad}; choose from {', '.join(SUBJECTS)}")
    if not args.m:
        raise UsageError("empty m list")
    for m in args.m:
        if m % 2 == 0 or not 3 <= m <= MAX_M:
            raise UsageError(f"batch needs odd m with 3 <= m <= {MAX_M}, got {m}")

    cells = []
    for m in args.m:
        ctx = _ctx(args, m)
        for s in subjects:
            t0 = time.perf_counter()
            try:
                require_scope(s, m)
            except OutOfTheoremScope as exc:
                cells.append({"m": m, "subject": s, "status": "SKIP", "reason": str(exc),
                              "runtime_ms": 0.0, "cases": []})
                continue
            reports = run_subject(s, m, ctx.poly, args.workers)
            status = "PASS" if all(r.passed for r in reports) else "FAIL"
            cells.append({"m": m, "subject": s, "status": status,
                          "runtime_ms": round((time.perf_counter() - t0) * 1000, 1),
                          "cases": [_report_dict(r, True) for r in reports]})
    failed = any(c["status"] == "FAIL" for c in cells)

    if args.format == "json":
        text = json.dumps({"cells": cells, "status": "FAIL" if failed else "PASS"}, indent=1) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "subject", "status", "runtime_ms", "detail"])
        for c in cells:
            detail = c.get("reason", "")
            for r in c["cases"]:
                if r["status"] != "PASS":
                    d = r["diffs"][0]
                    detail = f"{r['subject']}: {d['key']}: predicted {d['predicted']}, enumerated {d['enumerated']}"
                    break
            w.writerow([c["m"], c["subject"], c["status"], c["runtime_ms"], detail])
        text = buf.getvalue()
    else:
        ms = sorted({c["m"] for c in cells})
        grid = {(c["m"], c["subject"]): c for c in cells}
        rows = [[s] + [grid[(m, s)]["status"] for m in ms] for s in subjects]
        text = _table(["subject"] + [f"m={m}" for m in ms], rows)
        text += "\n" + _table(["m", "subject", "status", "ms"],
                              [[c["m"], c["subject"], c["status"], f"{c['runtime_ms']:.1f}"] for c in cells])
        for c in cells:
            for r in c["cases"]:
                if r["status"] != "PASS":
                    d = r["diffs"][0]
                    text += (f"FAIL m={c['m']} {r['subject']}: {d['key']}: predicted {d['predicted']}, "
                             f"enumerated {d['enumerated']}\n")
    _emit(args, text)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_sums(args) -> int:
    ctx = _ctx(args, args.m)
    if args.which == "joint":
        try:
            shifts = [int(s) for s in args.shifts.split(",") if s.strip()]
        except ValueError:
            raise UsageError(f"bad shift list {args.shifts!r}") from None
        if not shifts:
            raise UsageError("empty shift list")
        dist: ValueDistribution = joint_distribution(ctx, shifts, args.workers)
    else:
        dist = sweep_s_distribution(ctx, args.which, args.workers)
    if args.format == "csv":
        text = dist.to_csv()
    elif args.format == "json":
        text = dist.to_json() + "\n"
    else:
        cols = dist._columns()
        text = _table(cols, dist._rows())
    _emit(args, text)
    return EXIT_OK


COMMANDS = {"construct": cmd_construct, "verify": cmd_verify, "batch": cmd_batch, "sums": cmd_sums}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, EmptyDefiningSet, FieldError, PolyConfigError, EvenM, OutOfTheoremScope, OSError) as exc:
        print(f"z4lee: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"z4lee: internal assertion: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
