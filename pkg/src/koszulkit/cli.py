"""Command line interface.

    koszulkit verify FILE [--window LO,HI] [--cap N] [--trunc N] [--out PATH]
    koszulkit list-checks KIND

Exit codes: 0 no failing check, 1 some check failed, 2 unreadable or invalid
scenario (or unknown kind), 3 internal error.  ``KOSZULKIT_LOG`` sets the log
level (default WARNING).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import traceback

from .report import Report
from .scenario import KINDS, ScenarioError, load
from .suites import list_checks, run_suite

log = logging.getLogger("koszulkit")


def _window(text: str) -> tuple[int, int]:
    parts = text.replace(":", ",").split(",")
    try:
        lo, hi = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("expected LO,HI") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("LO exceeds HI")
    return lo, hi


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="koszulkit", description="Exact verification of twisted Koszul and bar constructions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run the check suite for a scenario file")
    v.add_argument("file")
    v.add_argument("--window", type=_window, help="degree window LO,HI (default -8,8)")
    v.add_argument("--cap", type=_positive, help="bar length / weight cap (default 6)")
    v.add_argument("--trunc", type=_positive, help="polynomial truncation of O_X (default 3)")
    v.add_argument("--out", help="write the JSON report here")
    ls = sub.add_parser("list-checks", help="list check ids and anchors for a scenario kind")
    ls.add_argument("kind")
    return p


def _setup_logging() -> None:
    level = os.environ.get("KOSZULKIT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def verify(path: str, window=None, cap=None, trunc=None, out: str | None = None) -> int:
    try:
        sc = load(path, window=window, cap=cap, trunc=trunc)
    except ScenarioError as exc:
        print(f"koszulkit: invalid scenario {path}: {exc}", file=sys.stderr)
        return 2
    try:
        report = Report(sc, run_suite(sc))
    except Exception:  # noqa: BLE001 - anything escaping a check is a bug
        traceback.print_exc()
        print("koszulkit: internal error", file=sys.stderr)
        return 3
    sys.stdout.write(report.to_text())
    if out:
        with open(out, "w") as fh:
            fh.write(report.to_json())
    return report.exit_code


def _glue_negative_window(argv: list[str]) -> list[str]:
    # argparse takes "-3,3" for an option; rewrite "--window -3,3" as "--window=-3,3"
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a == "--window" and i + 1 < len(argv) and argv[i + 1][:2].lstrip("-")[:1].isdigit():
            out.append(f"--window={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    _setup_logging()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_window(argv))
    if args.command == "list-checks":
        if args.kind not in KINDS:
            print(f"koszulkit: unknown kind {args.kind!r} (expected one of {', '.join(KINDS)})", file=sys.stderr)
            return 2
        for spec in list_checks(args.kind):
            print(f"{spec.id}\t{spec.anchor}")
        return 0
    return verify(args.file, args.window, args.cap, args.trunc, args.out)


if __name__ == "__main__":
    sys.exit(main())
