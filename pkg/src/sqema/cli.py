"""Command-line front end: ``sqema {correspond,classify,verify,gen,batch}``.

Exit status is 0 on success, 1 when the algorithm fails or a verification
finds a counterexample, 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence, TextIO

from . import fol
from .classify import is_monadic_inductive
from .engine import EngineConfig, SqemaResult, run
from .formula import Formula, ParseError, parse_formula, pretty
from .generate import FormulaClass, SizeBounds, gen_formula
from .oracle import CorrespondenceReport, verify_correspondence

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _max_worlds(text: str) -> int:
    n = int(text)
    if not 1 <= n <= 4:
        raise argparse.ArgumentTypeError("must be between 1 and 4")
    return n


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--trace", action="store_true", help="print every rule application")
    common.add_argument("--max-orders", type=_positive, default=24, metavar="N",
                        help="elimination orders tried before giving up (default 24)")
    common.add_argument("--no-polarity-switch", action="store_true")
    common.add_argument("--budget", type=_positive, default=10_000, metavar="N",
                        help="rule applications allowed per branch")
    common.add_argument("--order", help="comma-separated elimination order, e.g. q,p")
    common.add_argument("--verify", action="store_true", help="check the result on small frames")
    common.add_argument("--max-worlds", type=_max_worlds, default=3, metavar="{1..4}")

    p = _Parser(prog="sqema", description="Modal formulae to first-order frame correspondents.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("correspond", parents=[common], help="compute a first-order correspondent")
    c.add_argument("formula")
    c = sub.add_parser("classify", parents=[common], help="Sahlqvist / inductive class flags")
    c.add_argument("formula")
    c = sub.add_parser("verify", parents=[common], help="compare a formula with a correspondent on small frames")
    c.add_argument("formula")
    c.add_argument("--against", metavar="FO", help="first-order formula with yi free; default: computed")
    c = sub.add_parser("gen", parents=[common], help="emit generated formulae")
    c.add_argument("cls", choices=[k.value for k in FormulaClass])
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--count", type=_positive, default=1)
    c.add_argument("--max-depth", type=int, default=4)
    c.add_argument("--max-vars", type=int, default=3)
    c = sub.add_parser("batch", parents=[common], help="process a file with one formula per line")
    c.add_argument("file", help="path, or - for stdin; blank lines and %% comments are skipped")
    return p


def _config(args) -> EngineConfig:
    order = None
    if args.order:
        order = tuple(v.strip() for v in args.order.split(",") if v.strip())
    return EngineConfig(max_order_permutations=args.max_orders,
                        allow_polarity_switch=not args.no_polarity_switch,
                        max_rule_applications=args.budget,
                        elimination_order=order)


def _parse_error_json(e: ParseError, line_offset: int = 0) -> dict:
    return {"error": "parse", "message": e.message, "line": e.line + line_offset, "column": e.column}


# ---------------------------------------------------------------------------
# payloads

def _report_text(rep: CorrespondenceReport) -> str:
    if rep.ok:
        return f"VERIFIED ({rep.frames_checked} frames, {rep.worlds_checked} worlds)"
    ce = rep.counterexample
    return (f"REFUTED at frame {ce.frame.literal()} world {ce.world}: "
            f"only the {ce.side} side holds")


def _correspond_payload(phi: Formula, res: SqemaResult, args, rep: CorrespondenceReport | None) -> dict:
    out: dict = {
        "formula": pretty(phi),
        "success": res.success,
        "reason": res.reason.value if res.reason else None,
        "canonical": res.canonical,
        "branches": [
            {
                "id": b.branch_id,
                "success": b.success,
                "reason": b.reason.value if b.reason else None,
                "pure": pretty(p) if p is not None else None,
                "furthest": b.furthest.lines(),
            }
            for b, p in zip(res.branches, res.pure_per_branch + [None] * len(res.branches))
        ],
        "local": fol.pretty(res.local_fo) if res.success else None,
        "global": fol.pretty(res.global_fo) if res.success else None,
    }
    if rep is not None:
        out["verification"] = rep.to_json()
    if args.trace:
        out["trace"] = [s.to_json() for s in (st for t in res.traces for st in t)]
    return out


def _correspond_text(p: dict, res: SqemaResult, rep: CorrespondenceReport | None) -> list[str]:
    lines = [f"formula: {p['formula']}"]
    if "trace" in p:
        lines.append("trace:")
        for t in res.traces:
            for st in t:
                lines.extend("  " + ln for ln in st.to_text().splitlines())
    if p["success"]:
        for b in p["branches"]:
            lines.append(f"pure[{b['id']}]: {b['pure']}")
        lines += [f"local: {p['local']}", f"global: {p['global']}", "canonical: true", "status: SUCCESS"]
    else:
        lines.append(f"status: FAILURE ({p['reason']})")
        for b in p["branches"]:
            if not b["success"]:
                lines.append(f"furthest system [{b['id']}]:")
                lines.extend("  " + ln for ln in b["furthest"] or ["true"])
    if rep is not None:
        lines.append("verification: " + _report_text(rep))
    return lines


def _classify_payload(phi: Formula) -> dict:
    return {"formula": pretty(phi), **is_monadic_inductive(phi).to_json()}


def _classify_text(p: dict) -> list[str]:
    lines = [f"formula: {p['formula']}",
             f"sahlqvist={str(p['sahlqvist']).lower()}",
             f"regular={str(p['regular']).lower()}",
             f"inductive={str(p['inductive']).lower()}",
             "edges: " + (", ".join(f"{a}->{b}" for a, b in p["edges"]) or "none")]
    if p["cycle"]:
        lines.append("cycle: " + " -> ".join(p["cycle"]))
    return lines


# ---------------------------------------------------------------------------
# commands

def _emit(args, out: TextIO, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def _cmd_correspond(args, out) -> int:
    phi = parse_formula(args.formula)
    res = run(phi, _config(args))
    rep = verify_correspondence(phi, res.local_fo, args.max_worlds) if args.verify and res.success else None
    payload = _correspond_payload(phi, res, args, rep)
    _emit(args, out, payload, _correspond_text(payload, res, rep))
    if not res.success or (rep is not None and not rep.ok):
        return EXIT_FAIL
    return EXIT_OK


def _cmd_classify(args, out) -> int:
    phi = parse_formula(args.formula)
    payload = _classify_payload(phi)
    _emit(args, out, payload, _classify_text(payload))
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    phi = parse_formula(args.formula)
    if args.against is not None:
        try:
            target = fol.parse_fo(args.against)
        except fol.FOParseError as e:
            raise _UsageError(f"--against: {e}") from e
        source = "given"
    else:
        res = run(phi, _config(args))
        if not res.success:
            payload = {"formula": pretty(phi), "against": None, "source": "computed",
                       "reason": res.reason.value, "verification": None}
            _emit(args, out, payload, [f"formula: {pretty(phi)}",
                                       f"status: FAILURE ({res.reason.value}); nothing to verify"])
            return EXIT_FAIL
        target, source = res.local_fo, "computed"
    rep = verify_correspondence(phi, target, args.max_worlds)
    payload = {"formula": pretty(phi), "against": fol.pretty(target), "source": source,
               "reason": None, "verification": rep.to_json()}
    _emit(args, out, payload, [f"formula: {pretty(phi)}", f"against: {fol.pretty(target)}",
                               "verification: " + _report_text(rep)])
    return EXIT_OK if rep.ok else EXIT_FAIL


def _cmd_gen(args, out) -> int:
    try:
        bounds = SizeBounds(max_depth=args.max_depth, max_vars=args.max_vars)
    except ValueError as e:
        raise _UsageError(str(e)) from e
    items = []
    for k in range(args.count):
        f = gen_formula(args.cls, args.seed + k, bounds)
        items.append({"seed": args.seed + k, "formula": pretty(f)})
    payload = {"class": args.cls, "formulae": items}
    _emit(args, out, payload, [i["formula"] for i in items])
    return EXIT_OK


def _batch_line(text: str, lineno: int, args, cfg: EngineConfig) -> dict:
    row: dict = {"line": lineno, "formula": text.strip()}
    try:
        phi = parse_formula(text)
    except ParseError as e:
        row.update(status="error", error=_parse_error_json(e, lineno - 1))
        return row
    res = run(phi, cfg)
    cls = is_monadic_inductive(phi)
    row.update(status="success" if res.success else "failure",
               reason=res.reason.value if res.reason else None,
               sahlqvist=cls.sahlqvist, inductive=cls.monadic_inductive,
               local=fol.pretty(res.local_fo) if res.success else None,
               verified=None)
    if args.verify and res.success:
        row["verified"] = verify_correspondence(phi, res.local_fo, args.max_worlds).ok
    return row


def _cmd_batch(args, out) -> int:
    try:
        if args.file == "-":
            lines = sys.stdin.read().splitlines()
        else:
            with open(args.file, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
    except OSError as e:
        raise _UsageError(f"cannot read {args.file}: {e.strerror}") from e
    cfg = _config(args)
    rows = [_batch_line(t, k, args, cfg) for k, t in enumerate(lines, start=1)
            if t.strip() and not t.lstrip().startswith("%")]
    summary = {s: sum(r["status"] == s for r in rows) for s in ("success", "failure", "error")}
    summary["total"] = len(rows)
    summary["refuted"] = sum(r.get("verified") is False for r in rows)
    payload = {"rows": rows, "summary": summary}

    def flag(v):
        return "-" if v is None else ("yes" if v else "no")

    text = [f"{'line':>4}  {'status':<8} {'sahl':<4} {'ind':<4} {'ver':<4} formula"]
    for r in rows:
        if r["status"] == "error":
            e = r["error"]
            text.append(f"{r['line']:>4}  {'error':<8} {'-':<4} {'-':<4} {'-':<4} "
                        f"{r['formula']}  [{e['message']} at column {e['column']}]")
        else:
            text.append(f"{r['line']:>4}  {r['status']:<8} {flag(r['sahlqvist']):<4} "
                        f"{flag(r['inductive']):<4} {flag(r['verified']):<4} {r['formula']}")
    text.append(f"total {summary['total']}: {summary['success']} success, {summary['failure']} failure, "
                f"{summary['error']} error, {summary['refuted']} refuted")
    _emit(args, out, payload, text)
    if summary["error"]:
        return EXIT_USAGE
    return EXIT_FAIL if summary["failure"] or summary["refuted"] else EXIT_OK


_COMMANDS = {
    "correspond": _cmd_correspond,
    "classify": _cmd_classify,
    "verify": _cmd_verify,
    "gen": _cmd_gen,
    "batch": _cmd_batch,
}


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except _UsageError as e:
        err.write(f"sqema: error: {e}\n")
        return EXIT_USAGE
    except ParseError as e:
        if getattr(args, "format", "text") == "json":
            out.write(json.dumps(_parse_error_json(e)) + "\n")
        err.write(f"sqema: parse error at line {e.line}, column {e.column}: {e.message}\n")
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return int(e.code or 0)


if __name__ == "__main__":
    sys.exit(main())
