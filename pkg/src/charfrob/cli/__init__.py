"""Command line: run .frob scripts, an interactive prompt, and a corpus runner."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ResourceLimitError
from ..groebner import DEFAULT_BUDGET, set_budget
from . import lang
from .interp import BUILTIN_NAMES, Interpreter, ScriptError, format_value, to_json

REPORT_SCHEMA = "charfrob.report/1"
EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


@dataclass
class RunReport:
    path: str
    seed: int
    output: list = field(default_factory=list)
    expectations: list = field(default_factory=list)
    error: str | None = None
    bindings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.error is None and all(r.passed for r in self.expectations)

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return EXIT_ERROR
        return EXIT_PASS if self.passed else EXIT_FAIL

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "file": self.path,
            "seed": self.seed,
            "status": ("pass", "fail", "error")[self.exit_code],
            "error": self.error,
            "output": list(self.output),
            "expectations": [
                {"line": r.line, "text": r.text, "passed": r.passed, "detail": r.detail or None}
                for r in self.expectations
            ],
            "bindings": {k: to_json(v) for k, v in sorted(self.bindings.items())},
        }

    def render(self) -> str:
        lines = list(self.output)
        for r in self.expectations:
            mark = "ok  " if r.passed else "FAIL"
            lines.append(f"{mark} line {r.line}: expect {r.text}")
            if not r.passed and r.detail:
                lines.extend("       " + d for d in r.detail.splitlines())
        if self.error:
            lines.append(f"error: {self.error}")
        n = len(self.expectations)
        k = sum(r.passed for r in self.expectations)
        lines.append(f"{k}/{n} expectations passed")
        return "\n".join(lines)


def run_script(text: str, seed: int = 0, budget: int = DEFAULT_BUDGET, path: str = "<script>") -> RunReport:
    """Parse, statically check and execute a script; never raises for script faults."""
    report = RunReport(path, seed)
    set_budget(budget)
    try:
        script = lang.parse(text)
        lang.check(script, BUILTIN_NAMES)
    except lang.ScriptSyntaxError as ex:
        report.error = f"syntax error: {ex}"
        return report
    ctx = Interpreter(seed=seed)
    try:
        for st in script.statements:
            ctx.execute(st)
    except ScriptError as ex:
        report.error = str(ex)
    except ResourceLimitError as ex:
        report.error = f"resource limit: {ex}"
    finally:
        report.output = ctx.output
        report.expectations = ctx.results
        report.bindings = dict(ctx.env)
    return report


def _cmd_run(args) -> int:
    path = Path(args.file)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_ERROR
    report = run_script(text, seed=args.seed, budget=args.budget, path=str(path))
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        print(report.render())
    return report.exit_code


def _cmd_corpus(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        print(f"error: {root} is not a directory", file=sys.stderr)
        return EXIT_ERROR
    files = sorted(root.glob("*.frob"))
    failures = 0
    for f in files:
        start = time.perf_counter()
        report = run_script(f.read_text(encoding="utf-8"), seed=args.seed, budget=args.budget, path=str(f))
        elapsed = time.perf_counter() - start
        status = ("pass", "FAIL", "ERROR")[report.exit_code]
        n = len(report.expectations)
        k = sum(r.passed for r in report.expectations)
        print(f"{status:5} {f.name:40} {k}/{n} expectations  {elapsed:7.2f}s")
        if report.exit_code:
            failures += 1
            for r in report.expectations:
                if not r.passed:
                    print(f"      line {r.line}: expect {r.text}")
            if report.error:
                print(f"      {report.error}")
    print(f"{len(files)} files, {len(files) - failures} passed, {failures} failed")
    return EXIT_FAIL if failures else EXIT_PASS


def _cmd_repl(args) -> int:
    set_budget(args.budget)
    ctx = Interpreter(seed=args.seed, echo=print)
    buffer = ""
    while True:
        try:
            line = input("... " if buffer else "frob> ")
        except EOFError:
            print()
            return EXIT_PASS
        buffer += line + "\n"
        if not buffer.strip():
            buffer = ""
            continue
        if not buffer.rstrip().endswith(";"):
            continue
        text, buffer = buffer, ""
        try:
            script = lang.parse(text)
            for st in script.statements:
                before = len(ctx.results)
                value = ctx.execute(st)
                if value is not None:
                    print(format_value(value))
                for r in ctx.results[before:]:
                    print(("ok: " if r.passed else "FAILED: ") + r.text)
                    if r.detail:
                        print(r.detail)
        except (lang.ScriptSyntaxError, ScriptError, ResourceLimitError) as ex:
            print(f"error: {ex}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="charfrob", description="Frobenius and test-ideal computations in characteristic p.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="seed for randomized choices (default 0)")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, metavar="STEPS",
                       help=f"reduction step budget (default {DEFAULT_BUDGET})")

    p_run = sub.add_parser("run", help="run a .frob script")
    p_run.add_argument("file")
    p_run.add_argument("--json", action="store_true", help="emit a JSON report")
    common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_repl = sub.add_parser("repl", help="interactive prompt")
    common(p_repl)
    p_repl.set_defaults(func=_cmd_repl)

    p_corpus = sub.add_parser("corpus", help="run every .frob file in a directory")
    p_corpus.add_argument("dir")
    common(p_corpus)
    p_corpus.set_defaults(func=_cmd_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
