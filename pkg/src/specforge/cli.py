"""Command-line entry points: batch load, interactive REPL, dependency export."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import syntax as sx
from .analyze import dep_graph_dot
from .errors import ParseError, SpecforgeError
from .evaluator import DEFAULT_FUEL
from .session import PROMPT, LoadError, Session, repl_command
from .spec import spec_functions

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2


def _report_error(err: LoadError, path, out) -> int:
    print(f"{path}: {err}", file=out)
    if err.counterexample:
        binding = ", ".join(f"{k.name}={sx.show(v)}" for k, v in err.counterexample.items())
        if binding not in str(err):
            print(f"counterexample: {binding}", file=out)
    return EXIT_PARSE if isinstance(err.cause, ParseError) else EXIT_FAILURE


def _load_into(session, path, err_out):
    """Load one file; returns an exit code (0 on success)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        print(f"{path}: {e.strerror}", file=err_out)
        return EXIT_FAILURE
    try:
        session.load_text(text)
    except ParseError as e:
        print(f"{path}: {e}", file=err_out)
        return EXIT_PARSE
    except LoadError as e:
        return _report_error(e, path, err_out)
    return EXIT_OK


def cmd_load(args) -> int:
    session = Session(paranoid=args.paranoid, assume=args.assume, fuel=args.fuel)
    code = _load_into(session, args.file, sys.stderr)
    for line in session.report:
        print(line)
    return code


def cmd_deps(args) -> int:
    session = Session(fuel=args.fuel)
    code = _load_into(session, args.file, sys.stderr)
    if code:
        return code
    try:
        spec = sx.read_one(args.spec)
        print(session.deps(spec))
        if args.dot:
            Path(args.dot).write_text(dep_graph_dot(session.world,
                                                    spec_functions(session.world, spec)))
    except ParseError as e:
        print(f"Parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except SpecforgeError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def balanced(text: str) -> bool:
    """True once every open parenthesis outside comments is closed."""
    depth = 0
    for line in text.splitlines():
        for ch in line:
            if ch == ";":
                break
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
    return depth <= 0


def run_repl(session, stdin, stdout) -> None:
    buf = []
    while True:
        stdout.write(PROMPT if not buf else "")
        stdout.flush()
        line = stdin.readline()
        if not line:
            break
        if not buf and line.strip().lower() in (":q", ":quit"):
            break
        buf.append(line)
        text = "".join(buf)
        if not balanced(text):
            continue
        buf = []
        out = repl_command(session, text)
        if out:
            print(out, file=stdout)
    stdout.write("\n")


def cmd_repl(args) -> int:
    session = Session(paranoid=args.paranoid, assume=args.assume, fuel=args.fuel)
    for path in args.files:
        code = _load_into(session, path, sys.stderr)
        if code:
            return code
    run_repl(session, sys.stdin, sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specforge",
                                     description="Generic theories with defspec and instantiation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--fuel", type=int, default=DEFAULT_FUEL,
                       help="unfolding budget per evaluation")
        p.add_argument("--paranoid", action="store_true",
                       help="re-check copied theorems over the universe")
        p.add_argument("--assume", action="store_true",
                       help="admit theorems and obligations without checking")

    p = sub.add_parser("load", help="admit every event of a file")
    p.add_argument("file")
    common(p)
    p.set_defaults(run=cmd_load)

    p = sub.add_parser("repl", help="interactive session")
    p.add_argument("files", nargs="*")
    common(p)
    p.set_defaults(run=cmd_repl)

    p = sub.add_parser("deps", help="derived functions and theorems of a spec")
    p.add_argument("file")
    p.add_argument("spec")
    p.add_argument("--dot", metavar="OUT", help="write the dependency graph as DOT")
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.set_defaults(run=cmd_deps)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.fuel < 1:
        print("--fuel must be positive", file=sys.stderr)
        return EXIT_PARSE
    return args.run(args)


if __name__ == "__main__":
    sys.exit(main())
