"""The command-line front end, exercised in process through ``main``."""

from __future__ import annotations

import pytest

from boolsynth import (
    PHI_SAT,
    PHI_UNSAT,
    Family,
    build_instance,
    is_isomorphic,
    solve_atom,
)
from boolsynth.cli import main
from boolsynth.fileformats import (
    WitnessRecord,
    format_cnf,
    format_instance,
    format_ts,
    format_witnesses,
    parse_instance,
    parse_net,
    parse_ts,
    parse_witnesses,
)
from conftest import build_battery

TAU_SPEC = "nop,set,swap,free"


@pytest.fixture()
def battery_files(tmp_path):
    paths = {}
    for name, ts in build_battery().items():
        path = tmp_path / f"{name}.ts"
        path.write_text(format_ts(ts))
        paths[name] = str(path)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_feasible_yes(self, capsys, battery_files):
        code, out, _ = run(
            capsys, "check", "feasible", battery_files["a1"], "--type", TAU_SPEC
        )
        assert code == 0
        assert out.strip() == "feasible: yes"

    def test_ssp_counterexample(self, capsys, battery_files):
        code, out, _ = run(
            capsys, "check", "ssp", battery_files["a3"], "--type", TAU_SPEC
        )
        assert code == 1
        assert "ssp: no" in out
        assert "counterexample: sp s1 s2" in out

    def test_essp_counterexample(self, capsys, battery_files):
        code, out, _ = run(
            capsys, "check", "essp", battery_files["a2"], "--type", TAU_SPEC
        )
        assert code == 1
        assert "counterexample: essp a s2" in out

    def test_twin_type_gives_identical_verdicts(self, capsys, battery_files):
        for prop, name, expected in (
            ("feasible", "a1", 0),
            ("ssp", "a3", 1),
            ("essp", "a2", 1),
            ("feasible", "a4", 1),
        ):
            code, _, _ = run(
                capsys, "check", prop, battery_files[name],
                "--type", "nop,res,swap,used",
            )
            assert code == expected

    def test_budget_inconclusive(self, capsys, battery_files):
        code, out, _ = run(
            capsys, "check", "feasible", battery_files["a1"],
            "--type", TAU_SPEC, "--engine", "sat", "--budget", "0",
        )
        assert code == 3
        assert "inconclusive" in out

    def test_witness_file_settles_every_requirement(
        self, capsys, battery_files, tmp_path
    ):
        witness_path = tmp_path / "a1.wit"
        code, _, _ = run(
            capsys, "check", "feasible", battery_files["a1"],
            "--type", TAU_SPEC, "--witness", str(witness_path),
        )
        assert code == 0
        records = parse_witnesses(witness_path.read_text())
        # a1 has three state pairs and no inhibition requirements; records
        # group requirements by the region settling them, each exactly once
        rendered = [str(atom) for r in records for atom in r.atoms]
        assert sorted(rendered) == ["ssp s0 s1", "ssp s0 s2", "ssp s1 s2"]
        key_set = {r.region.key() for r in records}
        assert len(key_set) == len(records)
        for record in records:
            for atom in record.atoms:
                assert record.region.separates(atom.first, atom.second)

    def test_bad_type_spec_is_a_usage_error(self, capsys, battery_files):
        code, _, err = run(
            capsys, "check", "feasible", battery_files["a1"], "--type", "bogus"
        )
        assert code == 2
        assert "error" in err

    def test_missing_file_is_a_usage_error(self, capsys):
        code, _, err = run(
            capsys, "check", "feasible", "/nonexistent.ts", "--type", TAU_SPEC
        )
        assert code == 2
        assert "cannot read" in err


class TestSynthRgIso:
    def test_synth_round_trip_through_files(self, capsys, battery_files, tmp_path):
        net_path = tmp_path / "a1.net"
        code, _, _ = run(
            capsys, "synth", battery_files["a1"], "--type", TAU_SPEC,
            "-o", str(net_path),
        )
        assert code == 0
        net = parse_net(net_path.read_text())
        assert net.net_type.spec() == TAU_SPEC

        rg_path = tmp_path / "a1rg.ts"
        code, _, _ = run(capsys, "rg", str(net_path), "-o", str(rg_path))
        assert code == 0
        graph = parse_ts(rg_path.read_text())
        original = parse_ts(open(battery_files["a1"]).read())
        assert is_isomorphic(graph, original) is not None

        code, out, _ = run(capsys, "iso", str(rg_path), battery_files["a1"])
        assert code == 0 and out.strip() == "isomorphic"

    def test_synth_writes_to_stdout_by_default(self, capsys, battery_files):
        code, out, _ = run(
            capsys, "synth", battery_files["a1"], "--type", TAU_SPEC
        )
        assert code == 0
        assert out.startswith("net")
        assert "type nop,set,swap,free" in out

    def test_synth_refuses_infeasible_input(self, capsys, battery_files):
        code, out, _ = run(
            capsys, "synth", battery_files["a3"], "--type", TAU_SPEC
        )
        assert code == 1
        assert "feasible: no" in out
        assert "counterexample: sp s1 s2" in out

    def test_iso_negative(self, capsys, battery_files):
        code, out, _ = run(
            capsys, "iso", battery_files["a1"], battery_files["a4"]
        )
        assert code == 1
        assert out.strip() == "not isomorphic"


class TestReduceSolveExtract:
    @pytest.fixture()
    def cnf_files(self, tmp_path):
        sat_path = tmp_path / "phi3.cnf"
        sat_path.write_text(format_cnf(PHI_SAT))
        unsat_path = tmp_path / "phi4.cnf"
        unsat_path.write_text(format_cnf(PHI_UNSAT))
        return {"sat": str(sat_path), "unsat": str(unsat_path)}

    def test_solve13(self, capsys, cnf_files):
        code, out, _ = run(capsys, "solve13", cnf_files["sat"])
        assert code == 0 and out.strip() == "x0"
        code, out, _ = run(capsys, "solve13", cnf_files["unsat"])
        assert code == 1 and out.strip() == "UNSAT"

    def test_reduce_writes_a_reloadable_instance(self, capsys, cnf_files, tmp_path):
        out_path = tmp_path / "inst.ts"
        code, _, _ = run(
            capsys, "reduce", cnf_files["sat"], "--family", "free",
            "-o", str(out_path),
        )
        assert code == 0
        instance = parse_instance(out_path.read_text())
        assert instance.family is Family.FREE
        assert instance.cnf == PHI_SAT

    def test_reduce_sigma_flags_select_the_family(self, capsys, cnf_files, tmp_path):
        for sigma, family in (("1", Family.FREE), ("2", Family.USED)):
            out_path = tmp_path / f"inst{sigma}.ts"
            code, _, _ = run(
                capsys, "reduce", cnf_files["sat"], "--sigma", sigma,
                "-o", str(out_path),
            )
            assert code == 0
            assert parse_instance(out_path.read_text()).family is family

    def test_reduce_union_lists_every_member(self, capsys, cnf_files):
        code, out, _ = run(
            capsys, "reduce", cnf_files["sat"], "--family", "used", "--union"
        )
        assert code == 0
        assert out.count("\nts ") + out.startswith("ts ") == 39
        assert "# role family = used" in out

    def test_reduce_requires_exactly_one_family_flag(self, capsys, cnf_files):
        code, _, _ = run(capsys, "reduce", cnf_files["sat"])
        assert code == 2
        code, _, _ = run(
            capsys, "reduce", cnf_files["sat"], "--sigma", "1", "--family", "used"
        )
        assert code == 2

    def test_bad_cnf_is_a_usage_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.cnf"
        bad.write_text("p cnf13 1\nx0 x1 x2\n")
        code, _, err = run(capsys, "reduce", str(bad), "--family", "free")
        assert code == 2
        assert "error" in err


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("extract")
    instance = build_instance(PHI_SAT, Family.FREE)
    tau = Family.FREE.types()[0]
    region = solve_atom(instance.ts, tau, instance.target_atom, engine="sat")
    assert region is not None
    instance_path = tmp / "inst.ts"
    instance_path.write_text(format_instance(instance))
    witness_path = tmp / "inst.wit"
    witness_path.write_text(
        format_witnesses([WitnessRecord(region, (instance.target_atom,))])
    )
    return {
        "instance": str(instance_path),
        "witness": str(witness_path),
        "region": region,
        "tmp": tmp,
    }


class TestExtract:
    def test_extracts_a_certified_model(self, capsys, pipeline):
        code, out, _ = run(
            capsys, "extract", pipeline["witness"], pipeline["instance"]
        )
        assert code == 0
        model = frozenset(out.strip().split())
        assert PHI_SAT.is_model(model)

    def test_type_override_accepted(self, capsys, pipeline):
        code, out, _ = run(
            capsys, "extract", pipeline["witness"], pipeline["instance"],
            "--type", TAU_SPEC,
        )
        assert code == 0
        assert PHI_SAT.is_model(frozenset(out.strip().split()))

    def test_irrelevant_witnesses_are_a_usage_error(self, capsys, pipeline):
        empty = pipeline["tmp"] / "empty.wit"
        empty.write_text("")
        code, _, err = run(
            capsys, "extract", str(empty), pipeline["instance"]
        )
        assert code == 2
        assert "no witness record" in err

    def test_tampered_witness_is_an_internal_error(self, capsys, pipeline):
        region = pipeline["region"]
        # claim the target atom but break a forced signature
        from boolsynth import Interaction, Region

        flip = parse_instance(
            open(pipeline["instance"]).read()
        ).roles.flip_events[0]
        broken = Region(
            dict(region.support), {**region.signature, flip: Interaction.NOP}
        )
        bad_path = pipeline["tmp"] / "bad.wit"
        instance = parse_instance(open(pipeline["instance"]).read())
        bad_path.write_text(
            format_witnesses([WitnessRecord(broken, (instance.target_atom,))])
        )
        code, _, err = run(
            capsys, "extract", str(bad_path), pipeline["instance"]
        )
        assert code == 4
        assert "forced-shape" in err

    def test_tampered_instance_file_rejected(self, capsys, pipeline):
        text = open(pipeline["instance"]).read()
        lines = text.splitlines()
        for k, line in enumerate(lines):
            if line.startswith("arc "):
                lines[k] = line + "x"  # rename the target of one arc
                break
        hacked = pipeline["tmp"] / "hacked.ts"
        hacked.write_text("\n".join(lines) + "\n")
        code, _, err = run(
            capsys, "extract", pipeline["witness"], str(hacked)
        )
        assert code == 2
        assert "does not match" in err


class TestUsage:
    def test_no_arguments(self, capsys):
        assert run(capsys, )[0] == 2

    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_help_exits_zero(self, capsys):
        assert run(capsys, "--help")[0] == 0

    def test_unknown_property_choice(self, capsys, battery_files):
        code, _, _ = run(
            capsys, "check", "liveness", battery_files["a1"], "--type", TAU_SPEC
        )
        assert code == 2

    def test_unknown_engine_choice(self, capsys, battery_files):
        code, _, _ = run(
            capsys, "check", "ssp", battery_files["a1"],
            "--type", TAU_SPEC, "--engine", "bdd",
        )
        assert code == 2
