"""Scenario files, presets, CLI commands, emitted-document schemas."""

import json
from importlib import resources
from pathlib import Path

import pytest

import smclab
from smclab import ConfigurationError, list_presets, load_config, load_preset
from smclab.cli import main

POLY_INI = (resources.files("smclab") / "presets" / "fo-hybrid-poly.ini").read_text()


def _write_variant(tmp_path, name, transform):
    text = transform(POLY_INI)
    path = tmp_path / name
    path.write_text(text)
    return str(path)


@pytest.fixture(scope="module")
def schemas():
    jsonschema = pytest.importorskip("jsonschema")
    loaded = {}
    schema_dir = resources.files("smclab") / "schemas"
    for entry in schema_dir.iterdir():
        if entry.name.endswith(".schema.json"):
            loaded[entry.name.split(".")[0]] = json.loads(entry.read_text())
    return jsonschema, loaded


def _validate(schemas, kind, path):
    jsonschema, loaded = schemas
    jsonschema.validate(json.loads(Path(path).read_text()), loaded[kind])


class TestPresets:
    def test_all_presets_load_and_validate(self):
        names = list_presets()
        assert len(names) == len(set(names))
        for name in names:
            scenario = load_preset(name)
            assert scenario.name == name
            assert scenario.config.dt > 0

    def test_expected_block_parsed(self):
        scenario = load_preset("fo-sato")
        verdict = scenario.expected.evaluate({"rms": 0.9318, "iae": 99.0,
                                              "mean_u": 1.4})
        assert verdict["rms"]["within"] and verdict["mean_u"]["within"]
        assert not verdict["iae"]["within"]

    def test_unknown_preset_lists_available(self):
        with pytest.raises(ConfigurationError, match="available"):
            load_preset("nope")


class TestScenarioFiles:
    def test_round_trip_equals_preset(self, tmp_path):
        import dataclasses
        path = _write_variant(tmp_path, "copy.ini", lambda s: s)
        from_file = dataclasses.replace(load_config(path).config, label="")
        bundled = dataclasses.replace(load_preset("fo-hybrid-poly").config, label="")
        assert from_file == bundled

    def test_bad_gamma_names_constraint(self, tmp_path):
        path = _write_variant(tmp_path, "bad.ini",
                              lambda s: s.replace("gamma = 0.7", "gamma = 1.5"))
        with pytest.raises(ConfigurationError, match="0 < gamma < 1"):
            load_config(path)

    def test_missing_field_names_section_and_key(self, tmp_path):
        path = _write_variant(tmp_path, "missing.ini",
                              lambda s: s.replace("eps0 = 0.25\n", ""))
        with pytest.raises(ConfigurationError, match=r"\[outer\] eps0"):
            load_config(path)

    def test_unknown_field_rejected(self, tmp_path):
        path = _write_variant(tmp_path, "unknown.ini",
                              lambda s: s.replace("[layer]", "[layer]\nspares = 1"))
        with pytest.raises(ConfigurationError, match="unknown field"):
            load_config(path)

    def test_non_numeric_values_rejected(self, tmp_path):
        path = _write_variant(tmp_path, "nan1.ini",
                              lambda s: s.replace("k0 = 0.8", "k0 = fast"))
        with pytest.raises(ConfigurationError, match="number list"):
            load_config(path)
        path = _write_variant(tmp_path, "nan2.ini",
                              lambda s: s.replace("eps0 = 0.25", "eps0 = wide"))
        with pytest.raises(ConfigurationError, match="must be a number"):
            load_config(path)


class TestCmdSimulate:
    def test_writes_artifacts_and_reproduces_reference_rms(self, tmp_path, schemas):
        out = tmp_path / "run"
        assert main(["simulate", "--preset", "fo-hybrid-poly",
                     "--out", str(out)]) == 0
        for name in ("trajectory.csv", "metrics.json", "bounds.json",
                     "audit.json", "expected.json"):
            assert (out / name).exists()
        metrics = json.loads((out / "metrics.json").read_text())
        assert abs(metrics["rms"] - 0.9145) <= 0.1 * 0.9145
        _validate(schemas, "metrics", out / "metrics.json")
        _validate(schemas, "bounds", out / "bounds.json")
        _validate(schemas, "audit", out / "audit.json")
        _validate(schemas, "expected", out / "expected.json")
        assert not list(out.glob("*.tmp"))

    def test_zero_start_enters_immediately(self, tmp_path):
        path = _write_variant(tmp_path, "zero.ini",
                              lambda s: s.replace("x0 = 3.0", "x0 = 0.0"))
        out = tmp_path / "zero"
        assert main(["simulate", "--config", path, "--out", str(out),
                     "--horizon", "1.0"]) == 0
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["t_entry"] == 0.0

    def test_invalid_config_exits_2_citing_constraint(self, tmp_path, capsys):
        path = _write_variant(tmp_path, "bad.ini",
                              lambda s: s.replace("gamma = 0.7", "gamma = 1.5"))
        assert main(["simulate", "--config", path, "--out", str(tmp_path / "x")]) == 2
        assert "0 < gamma < 1" in capsys.readouterr().err

    def test_divergence_exits_3_with_step(self, tmp_path, capsys):
        out = tmp_path / "div"
        code = main(["simulate", "--preset", "el-hybrid-poly", "--out", str(out),
                     "--dt", "0.5", "--horizon", "50"])
        assert code == 3
        assert "step" in capsys.readouterr().err

    def test_byte_identical_reruns(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["simulate", "--preset", "fo-sato", "--out", str(out1)])
        main(["simulate", "--preset", "fo-sato", "--out", str(out2)])
        assert ((out1 / "trajectory.csv").read_bytes()
                == (out2 / "trajectory.csv").read_bytes())

    def test_mode_alias_maps_to_literal(self, tmp_path):
        out = tmp_path / "lit"
        assert main(["simulate", "--preset", "fo-hybrid-poly", "--out", str(out),
                     "--mode", "paper-literal", "--horizon", "1.0"]) == 0
        audit = json.loads((out / "audit.json").read_text())
        assert audit["bound_mode"] == "literal"


class TestCmdCompare:
    def test_benchmark_comparison_table(self, tmp_path, schemas):
        out = tmp_path / "cmp"
        code = main(["compare", "fo-sato", "fo-hybrid-poly-microlayer",
                     "fo-hybrid-erf", "--out", str(out)])
        assert code == 0
        doc = json.loads((out / "comparison.json").read_text())
        assert doc["baseline"] == "fo-sato"
        drop = doc["rows"]["fo-hybrid-poly-microlayer"]["pct_decrease"]["mean_u"]
        assert 25.0 <= drop <= 37.0
        _validate(schemas, "comparison", out / "comparison.json")

    def test_self_comparison_is_all_zero(self, tmp_path):
        out = tmp_path / "self"
        assert main(["compare", "fo-sato", "fo-sato", "--out", str(out)]) == 0
        doc = json.loads((out / "comparison.json").read_text())
        pct = doc["rows"]["fo-sato"]["pct_decrease"]
        assert all(v == 0.0 for v in pct.values())

    def test_mismatched_dt_refused(self, tmp_path, capsys):
        path = _write_variant(tmp_path, "fast.ini",
                              lambda s: s.replace("dt = 1e-3", "dt = 1e-4"))
        code = main(["compare", "fo-hybrid-poly", path, "--out", str(tmp_path / "x")])
        assert code == 2
        assert "unfair comparison" in capsys.readouterr().err

    def test_mismatched_plant_refused(self, tmp_path):
        code = main(["compare", "fo-sato", "el-hybrid-poly",
                     "--out", str(tmp_path / "x")])
        assert code == 2

    def test_single_preset_rejected(self, tmp_path):
        assert main(["compare", "fo-sato", "--out", str(tmp_path / "x")]) == 2


class TestCmdSweep:
    def test_initial_condition_grid(self, tmp_path, schemas):
        spec = tmp_path / "sweep.json"
        spec.write_text(json.dumps([{"x0": 4.0}, {"x0": -5.0}, {"x0": 6.0}]))
        out = tmp_path / "grid"
        code = main(["sweep", "--preset", "fo-hybrid-erf", "--sweep", str(spec),
                     "--out", str(out), "--horizon", "10.0"])
        assert code == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["total"] == 3 and summary["failed"] == 0
        assert summary["respected"] == 3
        for vid in ("v000", "v001", "v002"):
            assert (out / vid / "metrics.json").exists()
        _validate(schemas, "summary", out / "summary.json")

    def test_log_grid_all_respected(self, tmp_path):
        import math

        import numpy as np
        grid = np.logspace(math.log10(0.1), math.log10(10.0), 25)
        spec = tmp_path / "grid.json"
        spec.write_text(json.dumps([{"x0": float(v)} for v in grid]))
        out = tmp_path / "grid25"
        code = main(["sweep", "--preset", "fo-hybrid-poly", "--sweep", str(spec),
                     "--out", str(out), "--horizon", "10.0", "--mode", "rederived"])
        assert code == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["total"] == 25
        assert summary["respected"] == 25

    def test_empty_spec_matches_simulate(self, tmp_path):
        out_sweep = tmp_path / "sw"
        out_sim = tmp_path / "si"
        main(["sweep", "--preset", "fo-sato", "--out", str(out_sweep)])
        main(["simulate", "--preset", "fo-sato", "--out", str(out_sim)])
        assert ((out_sweep / "v000" / "trajectory.csv").read_bytes()
                == (out_sim / "trajectory.csv").read_bytes())

    def test_failing_variant_recorded_not_fatal(self, tmp_path, schemas):
        spec = tmp_path / "sweep.json"
        spec.write_text(json.dumps({"variants": [
            {"dt": 0.5, "horizon": 50.0}, {"horizon": 1.0}]}))
        out = tmp_path / "mixed"
        code = main(["sweep", "--preset", "el-hybrid-poly", "--sweep", str(spec),
                     "--out", str(out)])
        assert code == 3
        summary = json.loads((out / "summary.json").read_text())
        assert summary["failed"] == 1
        assert (out / "v000" / "error.json").exists()
        assert (out / "v001" / "metrics.json").exists()
        _validate(schemas, "error", out / "v000" / "error.json")

    def test_invalid_path_refused_before_runs(self, tmp_path, capsys):
        spec = tmp_path / "sweep.json"
        spec.write_text(json.dumps([{"x0": 4.0}, {"bogus.path": 1.0}]))
        out = tmp_path / "none"
        code = main(["sweep", "--preset", "fo-sato", "--sweep", str(spec),
                     "--out", str(out)])
        assert code == 2
        assert not out.exists()


class TestCmdBounds:
    def test_poly_report_both_modes(self, capsys):
        assert main(["bounds", "--preset", "fo-hybrid-poly"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["bounds"]["rederived"]["t_in"] == pytest.approx(2.375)
        assert doc["bounds"]["literal"]["t_out"] == pytest.approx(8.283, abs=5e-4)
        assert doc["diagnostics"]["refined_residual_radius"] == pytest.approx(
            0.09537, abs=1e-4)

    def test_erf_branch_used(self, capsys):
        assert main(["bounds", "--preset", "fo-hybrid-erf"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["bounds"]["rederived"]["t_in"] == pytest.approx(
            0.08 / 0.5634723105433097, rel=1e-9)

    def test_infeasible_floor_exits_2_naming_inequality(self, tmp_path, capsys):
        path = _write_variant(tmp_path, "weak.ini",
                              lambda s: s.replace("k0 = 0.8", "k0 = 0.4"))
        assert main(["bounds", "--config", path]) == 2
        assert "k0 must exceed" in capsys.readouterr().err
