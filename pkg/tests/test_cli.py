import json
import os
import subprocess
import sys

import pytest

from shadowkit.core import discrepancy1, jumps, jump_at
from shadowkit.generators import (make_periodic_pseudo_orbit,
                                  make_pseudo_orbit, schedule_magnitude)
from shadowkit.serialize import (RunConfig, dump_json, load_json,
                                 orbit_from_jsonable, orbit_to_jsonable)


def run_cli(*args, env=None):
    e = dict(os.environ)
    if env:
        e.update(env)
    return subprocess.run([sys.executable, "-m", "shadowkit.cli", *args],
                          capture_output=True, text=True, env=e)


class TestGenerators:
    def test_constant_schedule_bounds_jumps(self, cat):
        x = make_pseudo_orbit(cat, 1, "constant", 1e-4, -20, 20)
        js = jumps(x)
        assert 0.0 < max(js.values()) <= 1e-4
        assert len(js) == 40

    def test_one_spike(self, cat):
        x = make_pseudo_orbit(cat, 2, "one-spike", 1e-3, -10, 10)
        js = {i: v for i, v in jumps(x).items() if v > 0}
        assert set(js) == {0}

    def test_geometric_decay_envelope(self, cat):
        x = make_pseudo_orbit(cat, 3, "geometric-decay", 1e-3, -12, 12)
        for i, v in jumps(x).items():
            assert v <= 1e-3 * 2.0 ** (-abs(i)) * (1 + 1e-12)

    def test_quiet_window_zeros_inside(self, cat):
        x = make_pseudo_orbit(cat, 4, "quiet-window", 1e-3, -24, 24,
                              quiet_halfwidth=10)
        js = jumps(x)
        assert all(js[i] == 0.0 for i in range(-10, 11))
        assert max(js[i] for i in js if abs(i) > 10) > 0.0

    def test_true_orbit_schedule(self, ns):
        x = make_pseudo_orbit(ns, 5, "true-orbit", 0.0, -10, 10)
        assert discrepancy1(x) < 1e-13

    def test_periodic_generator(self, cat):
        x = make_periodic_pseudo_orbit(cat, 6, 1e-3, 8)
        assert x.extension == "periodic"
        assert x.period == 8
        assert jump_at(x, 8) == jump_at(x, 0)

    def test_determinism(self, cat):
        a = make_pseudo_orbit(cat, 7, "constant", 1e-4, -10, 10)
        b = make_pseudo_orbit(cat, 7, "constant", 1e-4, -10, 10)
        assert a.structurally_equal(b)

    def test_unknown_schedule(self):
        with pytest.raises(ValueError):
            schedule_magnitude("wiggly", 0, 1e-3)


class TestSerialization:
    def test_orbit_round_trip(self, cat):
        x = make_pseudo_orbit(cat, 8, "constant", 1e-4, -6, 6)
        obj = orbit_to_jsonable(cat, x)
        y = orbit_from_jsonable(obj, cat)
        assert x.structurally_equal(y)

    def test_orbit_round_trip_by_system_id(self, odometer):
        x = make_pseudo_orbit(odometer, 9, "constant", 2.0 ** -4, -4, 4)
        obj = orbit_to_jsonable(odometer, x)
        y = orbit_from_jsonable(obj)
        assert x.structurally_equal(y)

    def test_shift_points_round_trip(self, shift3):
        x = make_pseudo_orbit(shift3, 10, "constant", 1e-4, -4, 4)
        obj = orbit_to_jsonable(shift3, x)
        y = orbit_from_jsonable(obj, shift3)
        assert x.structurally_equal(y)

    def test_config_round_trip(self):
        cfg = RunConfig(system="ns-circle", method="bowen", delta=2e-4,
                        seed=11, window=40)
        again = RunConfig.from_jsonable(json.loads(
            json.dumps(cfg.to_jsonable())))
        assert again == cfg

    def test_config_rejects_unknown_fields(self):
        with pytest.raises(ValueError):
            RunConfig.from_jsonable({"bogus": 1})

    def test_env_seed_override(self, monkeypatch):
        monkeypatch.setenv("SHADOWKIT_SEED", "99")
        assert RunConfig(seed=1).with_env_seed().seed == 99


class TestCli:
    def test_gen_shadow_verify_pipeline(self, tmp_path):
        orbit = tmp_path / "orbit.json"
        r = run_cli("gen", "--system", "cat", "--seed", "5", "--delta",
                    "1e-4", "--window", "16", "--out", str(orbit))
        assert r.returncode == 0, r.stderr
        obj = load_json(str(orbit))
        assert obj["system_id"] == "cat"
        assert obj["d1"] <= 1e-4

        result = tmp_path / "result.json"
        r = run_cli("shadow", "--orbit", str(orbit), "--method", "bowen",
                    "--out", str(result))
        assert r.returncode == 0, r.stderr
        res = load_json(str(result))
        assert res["tail_bound"] < 1e-6
        assert res["shadow_error"] < 1e-2

        out = tmp_path / "reports.jsonl"
        r = run_cli("verify", "--system", "cat", "--suite", "bracket-axioms",
                    "--seed", "1", "--out", str(out))
        assert r.returncode == 0, r.stdout + r.stderr
        lines = out.read_text().strip().splitlines()
        assert all(json.loads(line)["passed"] for line in lines)

    def test_gen_deterministic_bytes(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        for path in (a, b):
            r = run_cli("gen", "--system", "ns-circle", "--seed", "12",
                        "--delta", "1e-3", "--window", "8",
                        "--out", str(path))
            assert r.returncode == 0, r.stderr
        assert a.read_bytes() == b.read_bytes()

    def test_env_seed_changes_output(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        run_cli("gen", "--system", "cat", "--seed", "1", "--window", "8",
                "--out", str(a))
        run_cli("gen", "--system", "cat", "--seed", "1", "--window", "8",
                "--out", str(b), env={"SHADOWKIT_SEED": "77"})
        assert a.read_bytes() != b.read_bytes()

    def test_bad_system_exits_2(self):
        r = run_cli("gen", "--system", "lorenz")
        assert r.returncode == 2

    def test_bad_suite_exits_2(self):
        r = run_cli("verify", "--system", "cat", "--suite", "bogus")
        assert r.returncode == 2

    def test_inadmissible_orbit_exits_2(self, tmp_path):
        orbit = tmp_path / "orbit.json"
        run_cli("gen", "--system", "cat", "--seed", "5", "--delta", "0.2",
                "--window", "8", "--out", str(orbit))
        r = run_cli("shadow", "--orbit", str(orbit), "--method", "bowen")
        assert r.returncode == 2
        assert "cap" in r.stderr

    def test_stability_command(self, tmp_path):
        out = tmp_path / "stab.jsonl"
        r = run_cli("stability", "--system", "cat", "--delta", "1e-3",
                    "--window", "24", "--grid", "12", "--out", str(out))
        assert r.returncode == 0, r.stdout + r.stderr
        assert "stability-grid[oracle]" in r.stdout

    def test_report_writes_csv_and_figures(self, tmp_path):
        out = tmp_path / "rep"
        r = run_cli("report", "--system", "cat", "--method", "oracle",
                    "--delta", "1e-4", "--window", "12", "--seed", "3",
                    "--out", str(out))
        assert r.returncode == 0, r.stdout + r.stderr
        names = sorted(os.listdir(out))
        assert "per_index_error.csv" in names
        assert "per_index_error.png" in names
        assert "decay_profile.csv" in names
        assert "decay_profile.png" in names
        assert "tuning_curve.csv" in names
        assert "tuning_curve.png" in names
        header = (out / "per_index_error.csv").read_text().splitlines()[0]
        assert header.split(",")[:2] == ["index", "shadow_error"]
