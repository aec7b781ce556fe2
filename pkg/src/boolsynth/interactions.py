"""Boolean place/transition interactions and net types.

An interaction is a partial map {0,1} -> {0,1} describing how firing a
transition changes (or constrains) the token count of a boolean place. A net
type is the set of interactions a net is allowed to use on its flow arcs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional


class Interaction(enum.Enum):
    """One of the eight partial maps {0,1} -> {0,1}."""

    NOP = "nop"
    INP = "inp"
    OUT = "out"
    SET = "set"
    RES = "res"
    SWAP = "swap"
    USED = "used"
    FREE = "free"

    def __repr__(self) -> str:  # keep solver/witness dumps compact
        return self.value

    @property
    def effect(self) -> tuple[Optional[int], Optional[int]]:
        """(image of 0, image of 1); None where the map is undefined."""
        return _EFFECT[self]

    def apply(self, tokens: int) -> Optional[int]:
        """Apply to a token count (0 or 1). None if undefined there."""
        if tokens not in (0, 1):
            raise ValueError(f"token count must be 0 or 1, got {tokens!r}")
        return _EFFECT[self][tokens]

    @property
    def is_partial(self) -> bool:
        on0, on1 = _EFFECT[self]
        return on0 is None or on1 is None


_EFFECT: dict[Interaction, tuple[Optional[int], Optional[int]]] = {
    Interaction.NOP: (0, 1),
    Interaction.INP: (None, 0),
    Interaction.OUT: (1, None),
    Interaction.SET: (1, 1),
    Interaction.RES: (0, 0),
    Interaction.SWAP: (1, 0),
    Interaction.USED: (None, 1),
    Interaction.FREE: (0, None),
}

#: Fixed enumeration order used everywhere a canonical order is needed.
INTERACTION_ORDER: tuple[Interaction, ...] = tuple(Interaction)

#: Interaction undefined at 0 / at 1 (used for inhibition queries).
UNDEFINED_AT: tuple[frozenset[Interaction], frozenset[Interaction]] = (
    frozenset(i for i in Interaction if _EFFECT[i][0] is None),
    frozenset(i for i in Interaction if _EFFECT[i][1] is None),
)

#: The token-complement conjugation: renaming 0 <-> 1 turns each interaction
#: into its mirror partner and fixes nop and swap.
COMPLEMENT_MAP: dict[Interaction, Interaction] = {
    Interaction.NOP: Interaction.NOP,
    Interaction.SWAP: Interaction.SWAP,
    Interaction.INP: Interaction.OUT,
    Interaction.OUT: Interaction.INP,
    Interaction.SET: Interaction.RES,
    Interaction.RES: Interaction.SET,
    Interaction.USED: Interaction.FREE,
    Interaction.FREE: Interaction.USED,
}


def parse_interaction(token: str) -> Interaction:
    try:
        return Interaction(token.strip().lower())
    except ValueError:
        raise ValueError(f"unknown interaction {token!r}") from None


@dataclass(frozen=True)
class NetType:
    """A set of interactions; the 'alphabet' available to a boolean net.

    The empty type is constructible (so it can be reported on) but every
    decision procedure rejects it.
    """

    interactions: frozenset[Interaction]

    @classmethod
    def of(cls, *interactions: Interaction) -> "NetType":
        return cls(frozenset(interactions))

    @classmethod
    def from_spec(cls, text: str) -> "NetType":
        """Parse a comma-separated list such as ``"nop,set,swap,free"``."""
        tokens = [t for t in (piece.strip() for piece in text.split(",")) if t]
        if not tokens:
            raise ValueError(f"empty net-type spec {text!r}")
        seen: set[Interaction] = set()
        for token in tokens:
            seen.add(parse_interaction(token))
        return cls(frozenset(seen))

    def spec(self) -> str:
        """Canonical comma-separated rendering."""
        return ",".join(i.value for i in self)

    def complement(self) -> "NetType":
        """The image under the token-complement conjugation."""
        return NetType(frozenset(COMPLEMENT_MAP[i] for i in self.interactions))

    @property
    def is_empty(self) -> bool:
        return not self.interactions

    def __contains__(self, interaction: Interaction) -> bool:
        return interaction in self.interactions

    def __iter__(self) -> Iterator[Interaction]:
        return iter(i for i in INTERACTION_ORDER if i in self.interactions)

    def __len__(self) -> int:
        return len(self.interactions)

    def __str__(self) -> str:
        return "{" + self.spec() + "}"


def all_net_types(include_empty: bool = False) -> Iterator[NetType]:
    """All 256 net types (or 255 nonempty ones) in a fixed order."""
    n = len(INTERACTION_ORDER)
    for bits in range(0 if include_empty else 1, 1 << n):
        members = [INTERACTION_ORDER[k] for k in range(n) if bits >> k & 1]
        yield NetType(frozenset(members))


@dataclass(frozen=True)
class TypeIsomorphism:
    """A verdict-preserving correspondence between two net types.

    ``token_map`` is the bijection on token counts (images of 0 and 1) and
    ``interaction_map`` the induced bijection on interactions. Regions,
    separation and inhibition transfer along it in both directions, so two
    isomorphic types decide exactly the same synthesis questions.
    """

    token_map: tuple[int, int]
    interaction_map: tuple[tuple[Interaction, Interaction], ...]

    def map_interaction(self, interaction: Interaction) -> Interaction:
        for src, dst in self.interaction_map:
            if src is interaction:
                return dst
        raise KeyError(interaction)


_IDENTITY_PAIRS = tuple((i, i) for i in INTERACTION_ORDER)
_COMPLEMENT_PAIRS = tuple((i, COMPLEMENT_MAP[i]) for i in INTERACTION_ORDER)


def type_isomorphism(tau: NetType, other: NetType) -> Optional[TypeIsomorphism]:
    """Find a verdict-preserving isomorphism between two net types.

    Only two candidate token maps exist (identity and complement); each
    induces the interaction map that conjugation by it produces. The identity
    candidate is preferred when both apply. Returns None if neither works.
    """
    if tau.interactions == other.interactions:
        pairs = tuple(p for p in _IDENTITY_PAIRS if p[0] in tau)
        return TypeIsomorphism(token_map=(0, 1), interaction_map=pairs)
    if frozenset(COMPLEMENT_MAP[i] for i in tau.interactions) == other.interactions:
        pairs = tuple(p for p in _COMPLEMENT_PAIRS if p[0] in tau)
        return TypeIsomorphism(token_map=(1, 0), interaction_map=pairs)
    return None


def require_usable(tau: NetType) -> None:
    """Reject the empty net type (no decision is meaningful over it)."""
    if tau.is_empty:
        raise ValueError("the empty net type admits no regions and no nets")


def interactions_matching(
    source_bit: int, target_bit: int
) -> frozenset[Interaction]:
    """All interactions i with i(source_bit) defined and equal to target_bit."""
    return _MATCHING[source_bit][target_bit]


def _build_matching() -> tuple[tuple[frozenset[Interaction], ...], ...]:
    table = []
    for a in (0, 1):
        row = []
        for b in (0, 1):
            row.append(
                frozenset(i for i in INTERACTION_ORDER if _EFFECT[i][a] == b)
            )
        table.append(tuple(row))
    return tuple(table)


_MATCHING = _build_matching()


def iter_type(tau: NetType | Iterable[Interaction]) -> tuple[Interaction, ...]:
    """The interactions of ``tau`` in canonical order."""
    members = set(tau) if not isinstance(tau, NetType) else tau.interactions
    return tuple(i for i in INTERACTION_ORDER if i in members)
