"""Racy-state detection and extraction of minimal race witnesses."""

from __future__ import annotations

from dataclasses import dataclass

from .clocks import VectorClock, first_concurrent_pair
from .domains import Packet
from .model import Message


def state_has_race(state) -> tuple | None:
    """Smallest component pair (i, j), i < j, with incomparable clocks."""
    return first_concurrent_pair(state.clocks)


@dataclass(frozen=True)
class PacketInput:
    """One processed packet: who matched it and what came out."""

    actor: str
    alpha: Packet
    pi: Packet
    node_id: int
    clocks: tuple


@dataclass(frozen=True)
class Rcfg:
    """One control/data-plane handshake."""

    sender: str
    receiver: str
    channel: str
    message: Message
    node_id: int
    clocks: tuple


WitnessStep = PacketInput | Rcfg


@dataclass(frozen=True)
class RaceWitness:
    """A minimal root-to-racy-node trace with the incomparable clock pair."""

    steps: tuple
    racy_node_id: int
    racy_pair: tuple  # (i, j, clock_i, clock_j)


def _witness_for(tree, node_id: int) -> RaceWitness:
    names = tree.component_names
    steps = []
    for nid in tree.path_to(node_id)[1:]:
        node = tree.nodes[nid]
        label = node.label
        clocks = node.state.clocks
        if hasattr(label, "actor"):
            steps.append(
                PacketInput(names[label.actor], label.alpha, label.pi, nid, clocks)
            )
        else:
            steps.append(
                Rcfg(
                    names[label.sender],
                    names[label.receiver],
                    label.channel,
                    label.message,
                    nid,
                    clocks,
                )
            )
    i, j = tree.nodes[node_id].racy_pair
    clocks = tree.nodes[node_id].state.clocks
    return RaceWitness(
        steps=tuple(steps),
        racy_node_id=node_id,
        racy_pair=(i, j, clocks[i], clocks[j]),
    )


def extract_witnesses(tree) -> list:
    """One witness per racy node with no racy proper ancestor.

    Ordered with the shortest packet explanations first, ties broken by
    node id.
    """
    witnesses = []
    for nid in sorted(tree.nodes):
        node = tree.nodes[nid]
        if not node.racy:
            continue
        ancestors = tree.path_to(nid)[:-1]
        if any(tree.nodes[a].racy for a in ancestors):
            continue
        witnesses.append(_witness_for(tree, nid))
    witnesses.sort(key=lambda w: (len(witness_packets(w)), w.racy_node_id))
    return witnesses


def witness_packets(w: RaceWitness) -> list:
    """The input packets of the witness, in order; handshakes contribute none."""
    return [s.alpha for s in w.steps if isinstance(s, PacketInput)]
