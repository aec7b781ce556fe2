"""Regions, admissibility checking, the generator families and coherence."""

from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from boolsynth import (
    COMPLEMENT_MAP,
    Family,
    Interaction,
    NetType,
    Region,
    RegionDomainError,
    TransitionSystem,
    derive_signature,
    family_types,
    parse_family,
    region_coherence_report,
    validate_region,
)
from conftest import TAU, TAU_TILDE, oracle_regions, random_ts

PROPERTY_SETTINGS = settings(
    max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)


def region_of(ts, support_states, event_interactions) -> Region:
    support = {s: (1 if s in support_states else 0) for s in ts.states}
    signature = {e: event_interactions[e] for e in ts.events}
    return Region(support, signature)


class TestRegionBasics:
    def test_separates_and_support_set(self, battery):
        region = region_of(battery["a1"], {"s0", "s2"}, {"a": Interaction.SWAP})
        assert region.separates("s0", "s1")
        assert not region.separates("s0", "s2")
        assert region.support_set() == {"s0", "s2"}

    def test_inhibits_follows_the_undefined_bit(self, battery):
        region = region_of(battery["a2"], {"s0"}, {"a": Interaction.FREE})
        # free is undefined at 1, so only supported states are inhibited
        assert region.inhibits("a", "s0")
        assert not region.inhibits("a", "s1")

    def test_key_identifies_equal_content(self, battery):
        a = region_of(battery["a2"], {"s0"}, {"a": Interaction.INP})
        b = Region(
            {"s2": 0, "s1": 0, "s0": 1}, {"a": Interaction.INP}
        )
        assert a.key() == b.key()


class TestCanonicalRegionsOfTheTwoCycleExample:
    """The three admissible regions witnessing feasibility of a1 under
    {nop,set,swap,free}, and their images under complementation."""

    CASES = [
        ({"s0", "s2"}, Interaction.SWAP),
        ({"s1", "s2"}, Interaction.SET),
        (set(), Interaction.FREE),
    ]

    @pytest.mark.parametrize("support,interaction", CASES)
    def test_valid_under_tau(self, battery, support, interaction):
        region = region_of(battery["a1"], support, {"a": interaction})
        assert validate_region(battery["a1"], TAU, region)

    @pytest.mark.parametrize("support,interaction", CASES)
    def test_complement_image_valid_under_complement_type(
        self, battery, support, interaction
    ):
        ts = battery["a1"]
        flipped = {s: (0 if s in support else 1) for s in ts.states}
        region = Region(flipped, {"a": COMPLEMENT_MAP[interaction]})
        assert validate_region(ts, TAU_TILDE, region)

    def test_the_three_regions_settle_every_separation_question(self, battery):
        regions = [
            region_of(battery["a1"], sup, {"a": i}) for sup, i in self.CASES
        ]
        swap_r, set_r, free_r = regions
        assert swap_r.separates("s0", "s1") and swap_r.separates("s1", "s2")
        assert set_r.separates("s0", "s1") and set_r.separates("s0", "s2")
        # a is enabled everywhere, so no inhibition is ever needed
        assert not any(r.inhibits("a", s) for r in regions for s in "s0 s1 s2".split())


class TestValidateRegion:
    def test_bad_arc_image_fails(self, battery):
        region = region_of(battery["a1"], {"s0"}, {"a": Interaction.NOP})
        assert not validate_region(battery["a1"], TAU, region)

    def test_signature_outside_type_raises(self, battery):
        region = region_of(battery["a1"], {"s0", "s2"}, {"a": Interaction.SWAP})
        narrow = NetType.from_spec("nop,set,free")
        with pytest.raises(RegionDomainError):
            validate_region(battery["a1"], narrow, region)

    def test_missing_state_raises(self, battery):
        region = Region({"s0": 1, "s1": 0}, {"a": Interaction.SWAP})
        with pytest.raises(RegionDomainError):
            validate_region(battery["a1"], TAU, region)

    def test_missing_event_raises(self, battery):
        region = Region(
            {"s0": 0, "s1": 0, "s2": 0}, {"wrong": Interaction.NOP}
        )
        with pytest.raises(RegionDomainError):
            validate_region(battery["a1"], TAU, region)

    @PROPERTY_SETTINGS
    @given(seed=st.integers(0, 10**9))
    def test_agrees_with_direct_arc_scan(self, seed):
        rng = random.Random(seed)
        ts = random_ts(rng, max_states=4, max_events=3)
        tau = NetType(frozenset(rng.sample(list(Interaction), 4)))
        support = {s: rng.randint(0, 1) for s in ts.states}
        signature = {e: rng.choice(list(tau)) for e in ts.events}
        region = Region(support, signature)
        expected = all(
            signature[a.event].apply(support[a.source]) == support[a.target]
            for a in ts.arcs
        )
        assert validate_region(ts, tau, region) == expected


class TestFamilies:
    def test_free_family_is_a_single_type(self):
        assert Family.FREE.types() == (NetType.from_spec("nop,set,swap,free"),)

    def test_used_family_has_four_types(self):
        types = Family.USED.types()
        assert len(types) == 4
        base = {Interaction.NOP, Interaction.SET, Interaction.SWAP, Interaction.USED}
        for tau in types:
            assert base <= tau.interactions
            assert tau.interactions - base <= {Interaction.RES, Interaction.FREE}
        assert types[0] == NetType.from_spec("nop,set,swap,used")
        assert types[-1] == NetType.from_spec("nop,set,swap,used,res,free")

    def test_family_types_lists_all_five_free_first(self):
        types = family_types()
        assert len(types) == 5
        assert types[0] == Family.FREE.base_type
        assert types[1:] == Family.USED.types()
        assert len(set(types)) == 5

    def test_blank_signatures(self):
        assert Family.FREE.blank_signature is Interaction.FREE
        assert Family.USED.blank_signature is Interaction.USED

    def test_parse_family(self):
        assert parse_family(" FREE ") is Family.FREE
        assert parse_family("used") is Family.USED
        with pytest.raises(ValueError, match="unknown family"):
            parse_family("loose")


class TestDeriveSignature:
    def test_recovers_the_three_canonical_regions(self, battery):
        ts = battery["a1"]
        for support, expected in TestCanonicalRegionsOfTheTwoCycleExample.CASES:
            region = derive_signature(ts, support, Family.FREE)
            assert region.signature["a"] is expected
            assert validate_region(ts, TAU, region)

    def test_blank_rule_under_used_family(self, battery):
        ts = battery["a2"]
        region = derive_signature(ts, {"s0", "s1", "s2"}, Family.USED)
        # full support: every endpoint inside -> the family blank (used)
        assert region.signature["a"] is Interaction.USED

    def test_support_can_be_given_as_mapping(self, battery):
        ts = battery["a1"]
        region = derive_signature(ts, {"s0": 0, "s1": 1, "s2": 1}, Family.FREE)
        assert region.signature["a"] is Interaction.SET

    def test_unknown_support_state_raises(self, battery):
        with pytest.raises(RegionDomainError):
            derive_signature(battery["a1"], {"nope"}, Family.FREE)

    def test_candidates_are_not_always_valid(self, battery):
        # a partial support of the chain yields nop, which the arcs refute
        ts = battery["a4"]
        region = derive_signature(ts, {"s1", "s2"}, Family.FREE)
        assert not validate_region(ts, TAU, region)


class TestCoherenceReport:
    def test_valid_regions_are_coherent(self, battery):
        for support, interaction in TestCanonicalRegionsOfTheTwoCycleExample.CASES:
            region = region_of(battery["a1"], support, {"a": interaction})
            assert region_coherence_report(battery["a1"], TAU, region).ok

    def test_arc_image_violation_reported(self, battery):
        region = region_of(battery["a1"], {"s0"}, {"a": Interaction.NOP})
        report = region_coherence_report(battery["a1"], TAU, region)
        assert any(v.code == "arc-image" for v in report.violations)

    def test_flip_mismatch_reported(self, battery):
        # s1 <-a-> s2 is a two-way arc; equal bits with swap is incoherent
        region = region_of(battery["a1"], set(), {"a": Interaction.SWAP})
        report = region_coherence_report(
            battery["a1"], NetType.from_spec("nop,swap"), region
        )
        assert any(v.code == "flip-mismatch" for v in report.violations)

    def test_swap_return_reported(self, battery):
        # s0 -a-> s1 <-a-> s2 with swap: s0 and s2 must agree, 1 vs 0 breaks
        region = region_of(battery["a1"], {"s0", "s1"}, {"a": Interaction.SWAP})
        report = region_coherence_report(battery["a1"], TAU, region)
        assert any(v.code == "swap-return" for v in report.violations)

    @PROPERTY_SETTINGS
    @given(seed=st.integers(0, 10**9))
    def test_every_admissible_region_is_coherent(self, seed):
        rng = random.Random(seed)
        ts = random_ts(rng, max_states=3, max_events=2)
        tau = TAU if rng.random() < 0.5 else TAU_TILDE
        for region in oracle_regions(ts, tau):
            assert region_coherence_report(ts, tau, region).ok
