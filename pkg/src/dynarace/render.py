"""Console trace rendering and DOT graph emission."""

from __future__ import annotations

from .domains import FieldDomains
from .model import Message, PolicyMsg, Token, Var, render_policy, render_term
from .races import PacketInput, RaceWitness, witness_packets

ANSI_TITLE = "\x1b[1;31m"
ANSI_TRACE = "\x1b[1;36m"
ANSI_RESET = "\x1b[0m"


def render_clock(clock) -> str:
    return "[" + ", ".join(str(c) for c in clock) + "]"


def render_message_quoted(msg: Message) -> str:
    """Channel payloads come out quoted, e.g. ``'"one"'``."""
    inner = msg.name if isinstance(msg, Token) else render_policy(msg.policy)
    return f"'\"{inner}\"'"


def render_rcfg(channel: str, msg: Message) -> str:
    return f"rcfg('{channel}', {render_message_quoted(msg)})"


def render_state_clocks(names, clocks) -> str:
    inner = " || ".join(
        f"{name}{render_clock(clock)}" for name, clock in zip(names, clocks)
    )
    return "{" + inner + "}"


def _short_step(step, dom: FieldDomains) -> str:
    if isinstance(step, PacketInput):
        return f'"{dom.render_test(step.alpha)}"'
    return render_rcfg(step.channel, step.message)


def _long_step(step, names, dom: FieldDomains) -> str:
    clocks = render_state_clocks(names, step.clocks)
    if isinstance(step, PacketInput):
        head = f'[{step.actor}] "{dom.render_test(step.alpha)}"'
    else:
        head = f"[{step.sender} -> {step.receiver}] " + render_rcfg(
            step.channel, step.message
        )
    return f"{head} {clocks} nid:{step.node_id};"


def render_traces(witnesses, tree, dom: FieldDomains, color: bool = False) -> str:
    """The RACE SHORT TRACES / RACE LONG TRACES report of a run."""

    def title(text):
        return f"{ANSI_TITLE}{text}{ANSI_RESET}" if color else text

    def header(text):
        return f"{ANSI_TRACE}{text}{ANSI_RESET}" if color else text

    names = tree.component_names
    lines = [title("RACE SHORT TRACES")]
    for k, w in enumerate(witnesses):
        lines.append(header(f"Trace {k}:"))
        lines.append("; ".join(_short_step(s, dom) for s in w.steps))
        lines.append("")
    lines.append("")
    lines.append(title("RACE LONG TRACES"))
    for k, w in enumerate(witnesses):
        lines.append(header(f"Trace {k}:"))
        root_clocks = tree.root.state.clocks
        lines.append(f"{render_state_clocks(names, root_clocks)} nid:0;")
        for step in w.steps:
            lines.append(_long_step(step, names, dom))
        lines.append("")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# DOT


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _component_label(term) -> str:
    return term.name if isinstance(term, Var) else render_term(term)


def _node_label(node, tree) -> str:
    comps = " || ".join(
        f"{_component_label(term)}{render_clock(clock)}"
        for term, clock in node.state.components
    )
    return f"{node.node_id}\\n{_dot_escape(comps)}"


def _edge_label(label, dom: FieldDomains) -> str:
    if hasattr(label, "actor"):
        return _dot_escape(
            f"({dom.render_packet(label.alpha)},{dom.render_packet(label.pi)})"
        )
    return _dot_escape(render_rcfg(label.channel, label.message))


def emit_dot(tree, witnesses, dom: FieldDomains) -> str:
    """DOT digraph of the execution tree.

    In race mode only nodes on witness paths appear (the root always
    does); in full mode every node appears.  Racy nodes get a distinct
    fill.
    """
    if tree.mode == "race":
        keep = {0}
        for w in witnesses:
            keep.update(tree.path_to(w.racy_node_id))
    else:
        keep = set(tree.nodes)
    lines = ["digraph execution {", "    node [shape=box];"]
    for nid in sorted(keep):
        node = tree.nodes[nid]
        attrs = [f'label="{_node_label(node, tree)}"']
        if node.racy:
            attrs.append("style=filled")
            attrs.append("fillcolor=lightcoral")
        lines.append(f'    n{nid} [{", ".join(attrs)}];')
    for parent, label, child in tree.edges():
        if parent in keep and child in keep:
            lines.append(
                f'    n{parent} -> n{child} [label="{_edge_label(label, dom)}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
