"""Command-line interface for validating scenarios and running checks.

Exit codes: 0 when everything requested passed, 1 when any check failed
or errored, 2 for usage problems and invalid scenario documents. With
``--format machine`` the standard output stream carries exactly the
canonical JSON report, nothing else.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .checks import CHECK_REGISTRY, EXPERIMENT_CHECKS, run_checks
from .errors import ScenarioError, VarquantError
from .scenario import (
    Report,
    Scenario,
    list_corpus,
    load_corpus_scenario,
    load_scenario,
    parse_report,
    serialize_report,
)

EXPERIMENT_COMMANDS = ("born", "chsh", "ozawa", "context")


def _load(ref: str) -> Scenario:
    """A scenario from a file path, or from the bundled corpus by name."""
    path = Path(ref)
    if path.is_file():
        return load_scenario(path)
    if "/" not in ref and not ref.endswith(".yaml") and ref in list_corpus():
        return load_corpus_scenario(ref)
    return load_scenario(path)


def _parse_only(raw: str | None) -> tuple[str, ...] | None:
    if raw is None:
        return None
    names = tuple(n.strip() for n in raw.split(",") if n.strip())
    unknown = [n for n in names if n not in CHECK_REGISTRY]
    if unknown:
        raise ScenarioError(
            [("--only", f"unknown check {n!r}") for n in unknown], source="usage"
        )
    return names


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _report_exit(report: Report) -> int:
    return 0 if report.all_passed else 1


def _run_command(scenario: Scenario, names, args) -> int:
    only = _parse_only(args.only)
    if only is not None:
        names = tuple(n for n in names if n in only)
    report = run_checks(scenario, names=names, seed=args.seed)
    text = serialize_report(report, args.format)
    if args.command == "chsh" and args.format == "human":
        values = [
            (key.split(".", 1)[1], value)
            for result in report.results if result.name == "correlation-value"
            for key, value in sorted(result.metrics.items())
            if key.startswith("value.")
        ]
        if len(values) == 1:
            text = f"S = {values[0][1]!r}\n" + text
        else:
            text = "".join(f"S[{bid}] = {v!r}\n" for bid, v in values) + text
    _emit(text, args.out)
    return _report_exit(report)


def _cmd_validate(args) -> int:
    scenario = _load(args.scenario)
    doc = scenario.document
    counts = {
        "variables": len(doc.get("variables", [])),
        "groups": len(doc.get("groups", [])),
        "states": len(doc.get("states", [])),
        "experiments": len(doc.get("experiments", [])),
        "checks": len(scenario.checks),
    }
    if args.format == "machine":
        payload = {"name": scenario.name, "valid": True, "counts": counts}
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    else:
        lines = [f"scenario {scenario.name} is valid"]
        if scenario.description:
            lines.append(f"  {scenario.description}")
        lines.extend(f"  {key}: {n}" for key, n in counts.items())
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_check(args) -> int:
    scenario = _load(args.scenario)
    return _run_command(scenario, scenario.checks, args)


def _cmd_experiment(args) -> int:
    scenario = _load(args.scenario)
    return _run_command(scenario, EXPERIMENT_CHECKS[args.command], args)


def _cmd_report(args) -> int:
    text = Path(args.report_file).read_text(encoding="utf-8")
    try:
        report = parse_report(text)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(
            [("$", f"not a machine-format report: {exc}")], source=args.report_file
        ) from exc
    _emit(serialize_report(report, args.format), args.out)
    return _report_exit(report)


def _add_common(parser: argparse.ArgumentParser, with_checks: bool) -> None:
    parser.add_argument("--format", choices=("machine", "human"), default="human",
                        help="output format (default: human)")
    parser.add_argument("--out", metavar="PATH",
                        help="write the output to a file instead of stdout")
    if with_checks:
        parser.add_argument("--only", metavar="CHECKS",
                            help="comma-separated check names to restrict to")
        parser.add_argument("--seed", type=int, default=0,
                            help="seed for randomized sweeps (default: 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varquant",
        description="Validate scenario documents and run their named checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load a scenario and report its shape")
    p.add_argument("scenario", help="scenario file or bundled scenario name")
    _add_common(p, with_checks=False)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("check", help="run the checks a scenario declares")
    p.add_argument("scenario", help="scenario file or bundled scenario name")
    _add_common(p, with_checks=True)
    p.set_defaults(func=_cmd_check)

    for name, about in (
        ("born", "run the transition-probability checks"),
        ("chsh", "run the correlation-bound checks"),
        ("ozawa", "run the pointer-measurement checks"),
        ("context", "run the context-graph checks"),
    ):
        p = sub.add_parser(name, help=about)
        p.add_argument("scenario", help="scenario file or bundled scenario name")
        _add_common(p, with_checks=True)
        p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("report", help="re-render a stored machine report")
    p.add_argument("report_file", help="path to a machine-format report")
    _add_common(p, with_checks=False)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VarquantError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
