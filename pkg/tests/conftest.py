"""Shared fixtures: the four-example battery, small random systems, and an
independent brute-force separation oracle used to cross-check the engines."""

from __future__ import annotations

import itertools
from typing import Iterable, Optional

import pytest

from boolsynth import Interaction, NetType, Region, TransitionSystem, TsUnion

TAU = NetType.from_spec("nop,set,swap,free")
TAU_TILDE = NetType.from_spec("nop,res,swap,used")


@pytest.fixture(scope="session")
def tau() -> NetType:
    return TAU


@pytest.fixture(scope="session")
def tau_tilde() -> NetType:
    return TAU_TILDE


def build_battery() -> dict[str, TransitionSystem]:
    """The four canonical three-to-four-state examples.

    a1: a line into a two-cycle (both properties hold)
    a2: a plain two-step line (state separation only)
    a3: a line into a terminal self-loop (event inhibition only)
    a4: a three-step line (neither property)
    """
    a1 = TransitionSystem.build(
        "s0", [("s0", "a", "s1"), ("s1", "a", "s2"), ("s2", "a", "s1")], name="A1"
    )
    a2 = TransitionSystem.build(
        "s0", [("s0", "a", "s1"), ("s1", "a", "s2")], name="A2"
    )
    a3 = TransitionSystem.build(
        "s0", [("s0", "a", "s1"), ("s1", "a", "s2"), ("s2", "a", "s2")], name="A3"
    )
    a4 = TransitionSystem.build(
        "s0",
        [("s0", "a", "s1"), ("s1", "a", "s2"), ("s2", "a", "s3")],
        name="A4",
    )
    return {"a1": a1, "a2": a2, "a3": a3, "a4": a4}


@pytest.fixture(scope="session")
def battery() -> dict[str, TransitionSystem]:
    return build_battery()


# ------------------------------------------------------- brute-force oracle


def oracle_event_interactions(
    subject: TransitionSystem | TsUnion,
    tau: NetType,
    support: dict[str, int],
    event: str,
) -> set[Interaction]:
    """All interactions of ``tau`` consistent with every arc of ``event``
    under ``support`` — by direct definition, no shared code with the lib."""
    allowed = set(tau.interactions)
    for arc in subject.arcs:
        if arc.event != event:
            continue
        src, dst = support[arc.source], support[arc.target]
        allowed = {
            i for i in allowed if i.effect[src] is not None and i.effect[src] == dst
        }
    return allowed


def oracle_regions(
    subject: TransitionSystem | TsUnion, tau: NetType
) -> Iterable[Region]:
    """Every admissible region, one per (support, full signature choice) —
    signatures enumerated exhaustively (cartesian product per event)."""
    states = list(subject.states)
    events = list(subject.events)
    for bits in itertools.product((0, 1), repeat=len(states)):
        support = dict(zip(states, bits))
        per_event = [
            sorted(
                oracle_event_interactions(subject, tau, support, e),
                key=list(Interaction).index,
            )
            for e in events
        ]
        if any(not options for options in per_event):
            continue
        for combo in itertools.product(*per_event):
            yield Region(support, dict(zip(events, combo)))


def oracle_separable(
    subject: TransitionSystem | TsUnion, tau: NetType, first: str, second: str
) -> bool:
    states = list(subject.states)
    events = list(subject.events)
    for bits in itertools.product((0, 1), repeat=len(states)):
        support = dict(zip(states, bits))
        if support[first] == support[second]:
            continue
        if all(
            oracle_event_interactions(subject, tau, support, e) for e in events
        ):
            return True
    return False


def oracle_inhibitable(
    subject: TransitionSystem | TsUnion, tau: NetType, event: str, state: str
) -> bool:
    states = list(subject.states)
    events = list(subject.events)
    for bits in itertools.product((0, 1), repeat=len(states)):
        support = dict(zip(states, bits))
        options = oracle_event_interactions(subject, tau, support, event)
        if not any(i.effect[support[state]] is None for i in options):
            continue
        if all(
            oracle_event_interactions(subject, tau, support, e)
            for e in events
            if e != event
        ):
            return True
    return False


def oracle_ssp(subject: TransitionSystem | TsUnion, tau: NetType) -> Optional[tuple]:
    """First inseparable same-member pair, or None when the property holds."""
    if isinstance(subject, TsUnion):
        members: tuple[TransitionSystem, ...] = subject.members
    else:
        members = (subject,)
    for member in members:
        states = member.states
        for i, j in itertools.combinations(range(len(states)), 2):
            if not oracle_separable(subject, tau, states[i], states[j]):
                return (states[i], states[j])
    return None


def oracle_essp(subject: TransitionSystem | TsUnion, tau: NetType) -> Optional[tuple]:
    """First uninhibitable missing (event, state), or None when it holds."""
    enabled = {(arc.source, arc.event) for arc in subject.arcs}
    for event in subject.events:
        for state in subject.states:
            if (state, event) in enabled:
                continue
            if not oracle_inhibitable(subject, tau, event, state):
                return (event, state)
    return None


# ------------------------------------------------- deterministic random TSs


def random_ts(rng, max_states: int = 6, max_events: int = 4) -> TransitionSystem:
    """A small deterministic transition system with every state reachable."""
    n_states = rng.randint(1, max_states)
    n_events = rng.randint(1, max_events)
    states = [f"s{k}" for k in range(n_states)]
    events = [f"e{k}" for k in range(n_events)]
    arcs: list[tuple[str, str, str]] = []
    used: set[tuple[str, str]] = set()
    # spanning arcs keep everything reachable from s0
    for k in range(1, n_states):
        source = states[rng.randrange(k)]
        options = [e for e in events if (source, e) not in used]
        if not options:
            source = states[k - 1]
            options = [e for e in events if (source, e) not in used]
        event = rng.choice(options)
        used.add((source, event))
        arcs.append((source, event, states[k]))
    for source in states:
        for event in events:
            if (source, event) in used:
                continue
            if rng.random() < 0.35:
                arcs.append((source, event, states[rng.randrange(n_states)]))
                used.add((source, event))
    present = {e for _, e, _ in arcs}
    if not arcs:  # single state, no events drawn
        return TransitionSystem.build("s0", [])
    return TransitionSystem.build(
        "s0", arcs, states=states, events=[e for e in events if e in present]
    )
