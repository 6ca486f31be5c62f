"""Command-line frontend: load a model, detect races, report witnesses.

Exit status: 0 when no races were found, 1 when races were found, 2 on
usage or model errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .domains import DynaraceError
from .engine import build_tree
from .model import infer_domains, load_model
from .races import extract_witnesses
from .render import (
    _edge_label,
    emit_dot,
    render_state_clocks,
    render_traces,
)

EXIT_NO_RACE = 0
EXIT_RACE = 1
EXIT_ERROR = 2


@dataclass
class RunConfig:
    model_path: str
    unfold_depth: int = 3
    graph_mode: str = "race"
    color: bool = False
    show_steps: bool = False
    output_file: str | None = None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("unfold depth must be >= 1")
    return value


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynarace",
        description=(
            "Detect data races between the control and data planes of an "
            "SDN model and explain them with minimal packet sequences."
        ),
        epilog=(
            "Exit status: 0 no races found, 1 races found, 2 usage or "
            "model error.  Flag values may be fused (-u3, -grace) or "
            "spaced (-u 3, -g race)."
        ),
    )
    parser.add_argument("model", help="path to the model file")
    parser.add_argument(
        "-u",
        dest="unfold_depth",
        type=_positive_int,
        default=3,
        metavar="INT",
        help="unfold depth (default 3)",
    )
    parser.add_argument(
        "-g",
        dest="graph_mode",
        choices=("race", "full"),
        default="race",
        help="types of trees and traces to generate (default race)",
    )
    parser.add_argument(
        "-c", dest="color", action="store_true", help="output text with color"
    )
    parser.add_argument(
        "-t", dest="show_steps", action="store_true", help="show tracing steps"
    )
    parser.add_argument(
        "-f",
        dest="output_file",
        metavar="NAME",
        help="name for text output file (copy of console output)",
    )
    return parser


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one analysis run; returns the exit status."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr

    model_path = Path(config.model_path)
    if not model_path.is_file():
        print(f"dynarace: model file not found: {model_path}", file=stderr)
        return EXIT_ERROR
    try:
        model = load_model(model_path)
        dom = infer_domains(model)
    except DynaraceError as exc:
        print(f"dynarace: {exc}", file=stderr)
        return EXIT_ERROR

    plain_lines: list = []

    def emit(plain: str, colored: str | None = None) -> None:
        plain_lines.append(plain)
        print(colored if (colored and config.color) else plain, file=stdout)

    trace_cb = None
    if config.show_steps:

        def trace_cb(tree, node):
            state = render_state_clocks(tree.component_names, node.state.clocks)
            if node.parent is None:
                emit(f"tracing: nid:{node.node_id} {state}")
            else:
                label = _edge_label(node.label, dom).replace('\\"', '"')
                emit(
                    f"tracing: nid:{node.parent} -> nid:{node.node_id} "
                    f"{label} {state}"
                )

    try:
        tree = build_tree(
            model, dom, config.unfold_depth, config.graph_mode, trace=trace_cb
        )
    except DynaraceError as exc:
        print(f"dynarace: {exc}", file=stderr)
        return EXIT_ERROR
    witnesses = extract_witnesses(tree)

    report_plain = render_traces(witnesses, tree, dom, color=False)
    report_colored = render_traces(witnesses, tree, dom, color=True)
    plain_lines.append(report_plain.rstrip("\n"))
    print(
        (report_colored if config.color else report_plain).rstrip("\n"),
        file=stdout,
    )

    dot_dir = (
        Path(config.output_file).resolve().parent
        if config.output_file
        else model_path.resolve().parent
    )
    dot_path = dot_dir / (model_path.stem + ".dot")
    dot_path.write_text(emit_dot(tree, witnesses, dom), encoding="utf-8")

    if config.output_file:
        Path(config.output_file).write_text(
            "\n".join(plain_lines) + "\n", encoding="utf-8"
        )
    return EXIT_RACE if witnesses else EXIT_NO_RACE


def main(argv=None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        model_path=args.model,
        unfold_depth=args.unfold_depth,
        graph_mode=args.graph_mode,
        color=args.color,
        show_steps=args.show_steps,
        output_file=args.output_file,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
