"""Boolean Petri nets: firing semantics, reachability graphs, region-based
synthesis, and isomorphism checking between transition systems.

A net's behavior lives entirely in its flow map: each (place, transition)
pair carries one interaction, and a transition fires in a marking exactly
when every place's interaction is defined on that place's current bit.
Reachability exploration encodes markings as integers (one bit per place,
first place = most significant) so successor computation is a handful of
mask operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional

from .interactions import Interaction, NetType, require_usable
from .regions import Region, validate_region
from .solving import Atom, essp_atoms, ssp_atoms
from .ts import TransitionSystem


class SynthesisError(ValueError):
    """A witness set leaves some separation requirement unsolved."""

    def __init__(self, atom: Atom) -> None:
        self.atom = atom
        super().__init__(f"witness set leaves unsolved: {atom}")


@dataclass(frozen=True)
class BooleanNet:
    """A net over a boolean type: places, transitions, a total flow map
    (place, transition) -> interaction, and an initial marking."""

    net_type: NetType
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    flow: Mapping[tuple[str, str], Interaction]
    initial_marking: Mapping[str, int]
    name: str = ""

    def __post_init__(self) -> None:
        if len(set(self.places)) != len(self.places):
            raise ValueError("duplicate place names")
        if len(set(self.transitions)) != len(self.transitions):
            raise ValueError("duplicate transition names")
        allowed = self.net_type.interactions
        for place in self.places:
            bit = self.initial_marking.get(place)
            if bit not in (0, 1):
                raise ValueError(
                    f"initial marking must give place {place!r} a 0/1 value"
                )
            for transition in self.transitions:
                interaction = self.flow.get((place, transition))
                if interaction is None:
                    raise ValueError(
                        f"flow is not total: missing ({place!r}, {transition!r})"
                    )
                if interaction not in allowed:
                    raise ValueError(
                        f"flow({place!r}, {transition!r}) = {interaction.value} "
                        f"is outside the net type {self.net_type.spec()}"
                    )
        if len(self.flow) != len(self.places) * len(self.transitions):
            raise ValueError("flow map has entries outside places x transitions")
        if len(self.initial_marking) != len(self.places):
            raise ValueError("initial marking has entries outside places")


def fire(
    net: BooleanNet, marking: Mapping[str, int], transition: str
) -> Optional[Dict[str, int]]:
    """The successor marking, or None when some place blocks the firing."""
    if transition not in net.transitions:
        raise ValueError(f"unknown transition {transition!r}")
    if set(marking) != set(net.places):
        raise ValueError("marking is not total over the net's places")
    successor: Dict[str, int] = {}
    for place in net.places:
        bit = marking[place]
        if bit not in (0, 1):
            raise ValueError(f"marking of place {place!r} must be 0 or 1")
        image = net.flow[(place, transition)].apply(bit)
        if image is None:
            return None
        successor[place] = image
    return successor


class _FiringMasks:
    """Integer-mask compilation of one transition's column of the flow map."""

    __slots__ = ("need_one", "need_zero", "force_one", "force_zero", "toggle")

    def __init__(self, net: BooleanNet, transition: str, bit_of: Dict[str, int]):
        self.need_one = 0  # places whose interaction is undefined at 0
        self.need_zero = 0  # places whose interaction is undefined at 1
        self.force_one = 0
        self.force_zero = 0
        self.toggle = 0
        for place in net.places:
            mask = bit_of[place]
            on0, on1 = net.flow[(place, transition)].effect
            if on0 is None:
                self.need_one |= mask
            if on1 is None:
                self.need_zero |= mask
            if on0 == 1 and on1 == 1:
                self.force_one |= mask
            elif on0 == 0 and on1 == 0:
                self.force_zero |= mask
            elif on0 == 1 and on1 == 0:
                self.toggle |= mask
            elif on0 == 1:  # defined only at 0, image 1
                self.force_one |= mask
            elif on1 == 0:  # defined only at 1, image 0
                self.force_zero |= mask

    def successor(self, marking: int) -> Optional[int]:
        if marking & self.need_one != self.need_one:
            return None
        if marking & self.need_zero:
            return None
        return ((marking | self.force_one) & ~self.force_zero) ^ self.toggle


def _marking_name(marking: int, width: int) -> str:
    return "m" + format(marking, f"0{width}b") if width else "m"


def reachability_graph(net: BooleanNet) -> TransitionSystem:
    """Breadth-first exploration of all markings reachable from the initial
    one. States are named by the marking's bit vector over the place order;
    the event set keeps only transitions that fire at least once."""
    width = len(net.places)
    bit_of = {p: 1 << (width - 1 - k) for k, p in enumerate(net.places)}
    masks = {t: _FiringMasks(net, t, bit_of) for t in net.transitions}
    start = 0
    for place, bit in net.initial_marking.items():
        if bit:
            start |= bit_of[place]
    order: dict[int, None] = {start: None}
    queue = [start]
    arcs: list[tuple[str, str, str]] = []
    fired: dict[str, None] = {}
    head = 0
    while head < len(queue):
        marking = queue[head]
        head += 1
        source = _marking_name(marking, width)
        for transition in net.transitions:
            successor = masks[transition].successor(marking)
            if successor is None:
                continue
            fired.setdefault(transition, None)
            if successor not in order:
                order[successor] = None
                queue.append(successor)
            arcs.append((source, transition, _marking_name(successor, width)))
    return TransitionSystem.build(
        initial=_marking_name(start, width),
        arcs=arcs,
        states=(_marking_name(m, width) for m in order),
        events=fired,
        name=net.name,
    )


def synthesize(
    subject: TransitionSystem,
    tau: NetType,
    witnesses: Iterable[Region],
) -> BooleanNet:
    """Build a net from admissible regions: one place per distinct region,
    flow = the region's signature, initial marking = the region's value at
    the initial state.

    The witness set must jointly settle every state-separation and
    event-inhibition requirement of ``subject`` (raises
    :class:`SynthesisError` naming the first unsolved one otherwise).
    """
    require_usable(tau)
    distinct: dict[tuple, Region] = {}
    for region in witnesses:
        if not validate_region(subject, tau, region):
            raise ValueError("witness is not an admissible region of the input")
        distinct.setdefault(region.key(), region)
    regions = [distinct[key] for key in sorted(distinct)]
    for pair_atom in ssp_atoms(subject):
        if not any(
            r.separates(pair_atom.first, pair_atom.second) for r in regions
        ):
            raise SynthesisError(pair_atom)
    for inhibit_atom in essp_atoms(subject):
        if not any(
            r.inhibits(inhibit_atom.event, inhibit_atom.state) for r in regions
        ):
            raise SynthesisError(inhibit_atom)
    places = tuple(f"p{k}" for k in range(len(regions)))
    flow = {
        (place, event): region.signature[event]
        for place, region in zip(places, regions)
        for event in subject.events
    }
    marking = {
        place: region.support[subject.initial]
        for place, region in zip(places, regions)
    }
    return BooleanNet(
        net_type=tau,
        places=places,
        transitions=tuple(subject.events),
        flow=flow,
        initial_marking=marking,
        name=subject.name,
    )


def is_isomorphic(
    a: TransitionSystem, b: TransitionSystem
) -> Optional[Dict[str, str]]:
    """The unique label-preserving, initial-preserving state bijection
    between two deterministic systems, or None if there is none.

    Determinism pins the candidate map down: the initial states must
    correspond, and matching arcs propagate the correspondence. The
    traversal fails fast on any mismatch of enabled labels and finally
    demands the map be a bijection on the full state sets.
    """
    if len(a.states) != len(b.states):
        return None
    if set(a.events) != set(b.events):
        return None
    out_a: Dict[str, Dict[str, str]] = {s: {} for s in a.states}
    for arc in a.arcs:
        out_a[arc.source][arc.event] = arc.target
    out_b: Dict[str, Dict[str, str]] = {s: {} for s in b.states}
    for arc in b.arcs:
        out_b[arc.source][arc.event] = arc.target
    mapping: Dict[str, str] = {a.initial: b.initial}
    image = {b.initial}
    queue = [a.initial]
    head = 0
    while head < len(queue):
        state_a = queue[head]
        head += 1
        state_b = mapping[state_a]
        succ_a = out_a[state_a]
        succ_b = out_b[state_b]
        if succ_a.keys() != succ_b.keys():
            return None
        for event, target_a in succ_a.items():
            target_b = succ_b[event]
            known = mapping.get(target_a)
            if known is not None:
                if known != target_b:
                    return None
                continue
            if target_b in image:
                return None
            mapping[target_a] = target_b
            image.add(target_b)
            queue.append(target_a)
    if len(mapping) != len(a.states):
        return None  # unreachable states cannot be matched up
    return mapping
