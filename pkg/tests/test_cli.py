import filecmp
import json
from pathlib import Path

import pytest

from badgekit.cli import run

from test_hub import make_registry

MEETING_DOC = {
    "duration_ms": 600_000,
    "participants": [
        {
            "id": "alice",
            "position_xy_m": [0.0, 0.0],
            "base_volume": 0.5,
            "speech_intervals": [[0, 60_000], [121_500, 180_000], [300_000, 330_000]],
        },
        {
            "id": "bob",
            "position_xy_m": [2.5, 0.0],
            "base_volume": 0.5,
            "speech_intervals": [[61_000, 120_000]],
        },
        {
            "id": "carol",
            "position_xy_m": [0.0, 2.5],
            "base_volume": 0.5,
            "speech_intervals": [[181_000, 240_000], [400_000, 460_000]],
        },
    ],
    "noise_floor": 0.01,
    "rng_seed": 42,
}

SCRIPT_SPEAKING_MS = {"alice": 148_500, "bob": 59_000, "carol": 119_000}


@pytest.fixture
def script_path(tmp_path):
    path = tmp_path / "meeting.json"
    path.write_text(json.dumps(MEETING_DOC))
    return path


@pytest.fixture
def registry_path(tmp_path):
    path = tmp_path / "registry.json"
    make_registry().save(path)
    return path


def dirs_identical(a: Path, b: Path) -> bool:
    cmp = filecmp.dircmp(a, b)
    if cmp.diff_files or cmp.left_only or cmp.right_only:
        return False
    for name, sub in cmp.subdirs.items():
        if not dirs_identical(a / name, b / name):
            return False
    return all(
        (a / f).read_bytes() == (b / f).read_bytes() for f in cmp.common_files
    )


class TestSimulate:
    def test_deterministic_directories(self, tmp_path, script_path, capsys):
        for out in ("out1", "out2"):
            assert run(["simulate", str(script_path), "--out", str(tmp_path / out),
                        "--seed", "7"]) == 0
        assert dirs_identical(tmp_path / "out1", tmp_path / "out2")
        for badge in ("alice", "bob", "carol"):
            assert (tmp_path / "out1" / badge / "chunks.jsonl").exists()
            assert (tmp_path / "out1" / badge / "scans.jsonl").exists()

    def test_stdout_is_json(self, tmp_path, script_path, capsys):
        assert run(["simulate", str(script_path), "--out", str(tmp_path / "out")]) == 0
        out = capsys.readouterr().out.strip()
        doc = json.loads(out)
        assert doc["badges"] == ["alice", "bob", "carol"]

    def test_missing_script_is_data_error(self, tmp_path, capsys):
        code = run(["simulate", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o")])
        assert code == 2
        err = json.loads(capsys.readouterr().err.strip())
        assert err["error"] == "data"

    def test_bad_usage(self, capsys):
        assert run(["simulate"]) == 1


class TestEndToEnd:
    def test_simulate_ingest_analyze(self, tmp_path, script_path, registry_path, capsys):
        trace = tmp_path / "trace"
        data = tmp_path / "store"
        assert run(["simulate", str(script_path), "--out", str(trace)]) == 0
        assert run(["--data-dir", str(data), "ingest", str(trace),
                    "--registry", str(registry_path)]) == 0
        assert run(["--data-dir", str(data), "analyze", "--group", "g1",
                    "--from", "0", "--to", "600000"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        result = json.loads(lines[-1])
        stats = result["stats"]
        for pid, expected in SCRIPT_SPEAKING_MS.items():
            got = stats["speaking_ms"][pid]
            assert abs(got - expected) / expected < 0.05, (pid, got, expected)
        assert stats["dominant"] == "alice"
        assert stats["turns"] == {"alice": 3, "bob": 1, "carol": 2}
        assert result["proximity"]["edges"]
        assert "mediator" in result

    def test_analyze_empty_store_zeroed(self, tmp_path, capsys):
        assert run(["--data-dir", str(tmp_path / "empty"), "analyze", "--group", "g1",
                    "--from", "0", "--to", "60000"]) == 0
        result = json.loads(capsys.readouterr().out.strip())
        assert result["stats"]["speaking_ms"] == {}
        assert result["stats"]["turn_rate_per_min"] == 0.0
        assert result["stats"]["dominant"] is None

    def test_export_bundle(self, tmp_path, script_path, registry_path, capsys):
        trace = tmp_path / "trace"
        data = tmp_path / "store"
        run(["simulate", str(script_path), "--out", str(trace)])
        run(["--data-dir", str(data), "ingest", str(trace), "--registry", str(registry_path)])
        out = tmp_path / "bundle.jsonl"
        assert run(["--data-dir", str(data), "export", "--group", "g1",
                    "--from", "0", "--to", "600000", "--out", str(out)]) == 0
        kinds = {json.loads(line)["kind"] for line in out.read_text().splitlines()}
        assert kinds == {"volume", "event", "scan"}

    def test_env_var_data_dir(self, tmp_path, script_path, registry_path, monkeypatch, capsys):
        trace = tmp_path / "trace"
        monkeypatch.setenv("OPENBADGE_DATA_DIR", str(tmp_path / "env_store"))
        run(["simulate", str(script_path), "--out", str(trace)])
        assert run(["ingest", str(trace), "--registry", str(registry_path)]) == 0
        assert (tmp_path / "env_store" / "g1" / "volumes.jsonl").exists()


class TestConfigFile:
    def test_config_file_overrides_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "hub.conf"
        cfg.write_text("speak_threshold = 0.2\nturn_gap_ms = 500  # tighter turns\n")
        assert run(["--config", str(cfg), "--data-dir", str(tmp_path / "d"),
                    "analyze", "--group", "g1", "--from", "0", "--to", "1000"]) == 0

    def test_unknown_key_is_usage_error(self, tmp_path, capsys):
        cfg = tmp_path / "hub.conf"
        cfg.write_text("nonsense = 12\n")
        assert run(["--config", str(cfg), "analyze", "--group", "g1",
                    "--from", "0", "--to", "1000"]) == 1
        err = json.loads(capsys.readouterr().err.strip())
        assert err["error"] == "configuration"
