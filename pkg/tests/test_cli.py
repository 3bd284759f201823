import pytest

from canforge.cli import main
from canforge.dataset import read_labeled


def run(*argv):
    return main(list(argv))


@pytest.fixture(scope="module")
def small_dataset(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "s2.csv"
    assert run("generate", "--scenario", "2", "--seed", "7", "--out", str(path)) == 0
    return path


class TestGenerate:
    def test_writes_parseable_dataset(self, small_dataset):
        records = read_labeled(small_dataset)
        assert len(records) > 100_000

    def test_deterministic_across_runs(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run("generate", "--scenario", "3", "--seed", "42", "--out", str(a)) == 0
        assert run("generate", "--scenario", "3", "--seed", "42", "--out", str(b)) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_unknown_scenario_is_an_error(self, tmp_path, capsys):
        code = run("generate", "--scenario", "11", "--out", str(tmp_path / "x.csv"))
        assert code == 1
        assert "scenario" in capsys.readouterr().err

    def test_replay_scenario_uses_bundled_tape(self, tmp_path):
        out = tmp_path / "s5.csv"
        assert run("generate", "--scenario", "5", "--seed", "1", "--out", str(out)) == 0
        assert out.exists()

    def test_custom_spec_file(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(
            """
            {"scenario_id": 42, "total_time": 20, "boot_end": 0, "takeoff_end": 2,
             "landing_start": 18, "label_mode": "origin",
             "attacks": [{"kind": "flooding", "start": 5, "duration": 2, "interval": 0.01}]}
            """
        )
        out = tmp_path / "custom.csv"
        assert run("generate", "--spec", str(spec), "--out", str(out)) == 0
        records = read_labeled(out)
        attack = sum(1 for r in records if r.label.value == "Attack")
        assert attack == 400

    def test_fidelity_override(self, tmp_path):
        out = tmp_path / "p.csv"
        assert run(
            "generate", "--scenario", "2", "--seed", "7",
            "--fidelity", "protocol", "--out", str(out),
        ) == 0
        attack_first = next(
            r for r in read_labeled(out) if r.label.value == "Attack"
        )
        assert attack_first.frame.data[-1] == 0x80

    def test_usage_error_without_source(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run("generate", "--out", str(tmp_path / "x.csv"))
        assert exc.value.code == 2


class TestDecode:
    def test_single_id(self, capsys):
        assert run("decode", "--id", "05040601") == 0
        out = capsys.readouterr().out
        assert "message" in out and "type=1030" in out and "source=1" in out

    def test_service_id(self, capsys):
        assert run("decode", "--id", "00018281") == 0
        out = capsys.readouterr().out
        assert "service" in out and "dest=2" in out

    def test_dataset_decode(self, small_dataset, capsys):
        assert run("decode", str(small_dataset), "--limit", "3") == 0
        out = capsys.readouterr().out
        assert "transfers" in out.splitlines()[-1]


class TestAnalyze:
    def test_summary_table(self, small_dataset, capsys):
        assert run("analyze", str(small_dataset), "--summary") == 0
        out = capsys.readouterr().out
        assert "frames" in out

    def test_kv_output(self, small_dataset, capsys):
        assert run("analyze", str(small_dataset), "--summary", "--kv") == 0
        out = capsys.readouterr().out
        assert any(line.startswith("normal_frames=") for line in out.splitlines())
        assert any(line.startswith("attack_frames=") for line in out.splitlines())

    def test_detect_with_defaults(self, small_dataset, capsys):
        assert run("analyze", str(small_dataset), "--detect", "--kv") == 0
        out = capsys.readouterr().out
        assert "alarms=3" in out

    def test_detect_explicit_params(self, small_dataset, capsys):
        assert run("analyze", str(small_dataset), "--detect", "1.0", "560") == 0
        assert "alarm" in capsys.readouterr().out

    def test_detect_wrong_arity(self, small_dataset):
        assert run("analyze", str(small_dataset), "--detect", "1.0") == 2

    def test_missing_file_is_error(self, tmp_path):
        assert run("analyze", str(tmp_path / "nope.csv")) == 1


class TestExportValidate:
    def test_export_candump(self, small_dataset, tmp_path, capsys):
        out = tmp_path / "dump.log"
        assert run("export-candump", str(small_dataset), "--out", str(out)) == 0
        first = out.read_text().splitlines()[0]
        assert first.startswith("(") and "#" in first

    def test_validate_ok(self, small_dataset, capsys):
        assert run("validate", str(small_dataset)) == 0
        assert "OK" in capsys.readouterr().out

    def test_validate_reports_positions(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text(
            "label,timestamp,interface,can_id,dlc,data\n"
            "Normal,0.000000,can0,05040601,8,a635000000000080\n"
            "bogus line\n"
        )
        assert run("validate", str(bad)) == 1
        out = capsys.readouterr().out
        assert ":3:" in out and "INVALID" in out
