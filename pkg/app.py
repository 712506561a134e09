# app.py
"""
homscope command line.

    python app.py run scenario.json [--threads N] [--out DIR] [--gnuplot]
    python app.py validate scenario.json
    python app.py examples list
    python app.py examples copy NAME [--out DIR]

Exit codes: 0 success, 2 invalid scenario, 3 numerical precondition
failure, 4 file-system error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import config
from homscope import __version__
from homscope.errors import HomScopeError, ScenarioError
from homscope.runner import run_scenario, write_result
from homscope.scenario import catalog, load_scenario, validate_text

LOGGER = logging.getLogger("homscope")

EXIT_OK = 0
EXIT_SCENARIO = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _setup_logging(verbose: bool):
    level = logging.DEBUG if verbose else getattr(logging, str(config.HOMSCOPE_LOG_LEVEL).upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger().setLevel(level)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homscope", description="Time-frequency HOM interference simulator")
    parser.add_argument("--version", action="version", version=f"homscope {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run a scenario file")
    run.add_argument("scenario", help="path to a scenario JSON file")
    run.add_argument("--threads", type=int, default=None,
                     help=f"worker threads (default: ${config.THREADS_ENV_VAR} or 1)")
    run.add_argument("--out", default=None, help=f"output directory (default: {config.HOMSCOPE_OUT_DIR})")
    run.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script")

    validate = commands.add_parser("validate", help="check a scenario file without running it")
    validate.add_argument("scenario")

    examples = commands.add_parser("examples", help="bundled scenario catalog")
    actions = examples.add_subparsers(dest="action", required=True)
    actions.add_parser("list", help="list bundled scenarios")
    copy = actions.add_parser("copy", help="copy a bundled scenario to a directory")
    copy.add_argument("name")
    copy.add_argument("--out", default=".", help="destination directory (default: .)")
    return parser


def _print_diagnostics(diagnostics):
    for diagnostic in diagnostics:
        print(str(diagnostic), file=sys.stderr)


def _run(args) -> int:
    scenario = load_scenario(args.scenario)
    _print_diagnostics(scenario.warnings)
    result = run_scenario(scenario, config.resolve_threads(args.threads))
    out_dir = Path(args.out or config.HOMSCOPE_OUT_DIR)
    for path in write_result(result, out_dir, gnuplot=args.gnuplot):
        print(f"Wrote: {path}")
    return EXIT_OK


def _validate(args) -> int:
    text = Path(args.scenario).read_text(encoding="utf-8")
    diagnostics = validate_text(text, args.scenario)
    _print_diagnostics(diagnostics)
    if any(d.level == "error" for d in diagnostics):
        return EXIT_SCENARIO
    print(f"{args.scenario}: ok")
    return EXIT_OK


def _examples(args) -> int:
    entries = catalog()
    if args.action == "list":
        for name in entries:
            print(name)
        return EXIT_OK
    if args.name not in entries:
        print(f"error: no bundled scenario named '{args.name}'", file=sys.stderr)
        return EXIT_SCENARIO
    target = Path(args.out) / f"{args.name}.json"
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(entries[args.name], encoding="utf-8")
    print(f"Wrote: {target}")
    return EXIT_OK


COMMANDS = {"run": _run, "validate": _validate, "examples": _examples}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    _setup_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except ScenarioError as exc:
        _print_diagnostics(exc.diagnostics)
        return EXIT_SCENARIO
    except HomScopeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
