import json
import logging
from pathlib import Path

import filelock
import pytest

from corpsim.cli import main
from corpsim.config import ConfigError, load_config, parse_config_text
from corpsim.experiments import ExperimentReport
from corpsim.reports import emit_plot_data, load_report, table_to_csv, write_report
from corpsim.synth import SynthSpec, generate_synthetic_corpus

SMALL = ["--sample-size", "2000", "--vocab-k", "3000", "--pairs-exp1", "5", "--pairs-exp2", "5",
         "--pairs-exp3", "5", "--pairs-exp4", "5"]


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    spec = SynthSpec(languages=2, varieties=3, samples_per_cell=3, sample_size=2000, vocab_size=1000,
                     variety_divergence=0.3, register_divergence=0.8, seed=4)
    return generate_synthetic_corpus(spec, tmp_path_factory.mktemp("corpus"))


def run_cli(tmp_path, corpus, *extra, name="ws"):
    ws, out = tmp_path / name, tmp_path / f"{name}_out"
    code = main(["run", "--corpus", str(corpus), "--workspace", str(ws), "--output", str(out),
                 *SMALL, *extra])
    return code, ws, out


def snapshot(out: Path) -> dict:
    return {p.relative_to(out).as_posix(): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()}


class TestRun:
    def test_selection_rule(self, tmp_path, corpus):
        code, _, out = run_cli(tmp_path, corpus, "--experiments", "exp1,exp3")
        assert code == 0
        names = {p.name for p in out.glob("*.csv")}
        assert {"exp1.csv", "exp3.csv"} <= names
        assert not any(n.startswith(("exp2", "exp4", "exp5", "geo")) for n in names)

    def test_rerun_skips_and_is_byte_identical(self, tmp_path, corpus, caplog):
        code, ws, out = run_cli(tmp_path, corpus)
        assert code == 0
        first = snapshot(out)
        manifest = (ws / "manifest.json").read_bytes()
        caplog.clear()
        with caplog.at_level(logging.INFO):
            assert run_cli(tmp_path, corpus)[0] == 0
        skipped = [r.getMessage() for r in caplog.records if "skipping" in r.getMessage()]
        assert any(m.startswith("ingest") for m in skipped) and any(m.startswith("exp5") for m in skipped)
        assert snapshot(out) == first
        assert (ws / "manifest.json").read_bytes() == manifest

    def test_workers_byte_identical(self, tmp_path, corpus):
        assert run_cli(tmp_path, corpus, "--workers", "1", name="w1")[0] == 0
        assert run_cli(tmp_path, corpus, "--workers", "8", name="w8")[0] == 0
        assert snapshot(tmp_path / "w1_out") == snapshot(tmp_path / "w8_out")
        assert snapshot(tmp_path / "w1" / "vocab") == snapshot(tmp_path / "w8" / "vocab")

    def test_every_artifact_carries_digest(self, tmp_path, corpus):
        _, _, out = run_cli(tmp_path, corpus)
        digest = json.loads((out / "exp1.json").read_text())["config_digest"]
        assert len(digest) == 64
        for csv in out.glob("*.csv"):
            assert csv.read_text().splitlines()[0] == f"# config_digest={digest}"
        for js in out.rglob("*.json"):
            assert json.loads(js.read_text())["config_digest"] == digest

    def test_missing_corpus(self, tmp_path, capsys):
        code = main(["run", "--corpus", str(tmp_path / "absent.jsonl"), "--workspace", str(tmp_path / "w")])
        assert code == 2
        assert "absent.jsonl" in capsys.readouterr().err

    def test_conflict_needs_force(self, tmp_path, corpus, capsys):
        assert run_cli(tmp_path, corpus, "--experiments", "exp1")[0] == 0
        code = main(["run", "--corpus", str(corpus), "--workspace", str(tmp_path / "ws"),
                     "--output", str(tmp_path / "ws_out"), "--sample-size", "1000", "--experiments", "exp1"])
        assert code == 1
        assert "--force" in capsys.readouterr().err
        code = main(["run", "--corpus", str(corpus), "--workspace", str(tmp_path / "ws"), "--force",
                     "--output", str(tmp_path / "ws_out"), "--sample-size", "1000", "--experiments", "exp1"])
        assert code == 0

    def test_locked_workspace(self, tmp_path, corpus):
        ws = tmp_path / "ws"
        ws.mkdir()
        with filelock.FileLock(str(ws / ".lock")):
            assert run_cli(tmp_path, corpus)[0] == 1

    def test_failure_marker(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"text": "x", "language": "eng"}\n', encoding="utf-8")
        code = main(["ingest", "--corpus", str(bad), "--workspace", str(tmp_path / "w")])
        assert code == 1
        failed = json.loads((tmp_path / "w" / "FAILED.json").read_text())
        assert failed["stage"] == "ingest" and "missing field country" in failed["error"]


class TestStages:
    def test_stepwise_matches_run(self, tmp_path, corpus):
        common = ["--corpus", str(corpus), "--workspace", str(tmp_path / "s"),
                  "--output", str(tmp_path / "s_out"), *SMALL]
        assert main(["ingest", *common]) == 0
        assert main(["vocab", *common]) == 0
        assert main(["exp", "exp4", "exp2", *common]) == 0
        assert main(["geo", *common]) == 0
        assert run_cli(tmp_path, corpus, "--experiments", "exp2,exp3,exp4,geo", name="r")[0] == 0
        for name in ("exp2.csv", "exp4.csv", "exp3.csv", "geo.csv"):
            assert (tmp_path / "s_out" / name).read_bytes() == (tmp_path / "r_out" / name).read_bytes()

    def test_exp_before_vocab(self, tmp_path, corpus):
        common = ["--corpus", str(corpus), "--workspace", str(tmp_path / "s"), *SMALL]
        assert main(["exp", "exp1", *common]) == 1

    def test_unknown_experiment(self, tmp_path):
        assert main(["exp", "exp9", "--workspace", str(tmp_path)]) == 2

    def test_verify(self, tmp_path, corpus, capsys):
        _, ws, out = run_cli(tmp_path, corpus)
        assert main(["verify", "--workspace", str(ws), "--output", str(out)]) == 0
        victim = next((ws / "counts").rglob("*.char3.tsv"))
        victim.write_text(victim.read_text()[:-10])
        assert main(["verify", "--workspace", str(ws), "--output", str(out)]) == 1
        assert victim.name in capsys.readouterr().out


class TestConfig:
    def test_file_and_override(self, tmp_path):
        cfg_file = tmp_path / "c.cfg"
        cfg_file.write_text("# run\ncorpus = data.jsonl\nseed = 7\npairs_exp1 = 10\nkinds = char3\n"
                            "focus_kind = char3\n")
        cfg = load_config(cfg_file, {"seed": "9"})
        assert cfg.experiment.seed == 9 and cfg.experiment.pairs_exp1 == 10
        assert cfg.corpus == "data.jsonl"

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigError, match="colour"):
            parse_config_text("colour = red\n")
        cfg_file = tmp_path / "c.cfg"
        cfg_file.write_text("colour = red\n")
        assert main(["run", "--config", str(cfg_file)]) == 2

    def test_invalid_values(self):
        with pytest.raises(ConfigError):
            load_config(None, {"alpha": "2"})
        with pytest.raises(ConfigError):
            load_config(None, {"pairs_exp4": "0"})
        assert main(["run", "--corpus", ".", "--seed", "x"]) == 2

    def test_bad_usage(self):
        assert main([]) == 2
        assert main(["run", "--nonsense"]) == 2


class TestSmallCommands:
    def test_synth_count_compare(self, tmp_path, capsys):
        assert main(["synth", "--out", str(tmp_path / "syn"), "--languages", "1", "--varieties", "1",
                     "--samples-per-cell", "1", "--sample-size", "500", "--vocab-size", "100"]) == 0
        text = tmp_path / "t.txt"
        text.write_text("The cat sat.\nthe dog\n", encoding="utf-8")
        assert main(["count", str(text), "--kind", "word", "--out", str(tmp_path / "c.tsv")]) == 0
        lines = (tmp_path / "c.tsv").read_text().splitlines()
        assert lines[0].startswith("#kind=word tokens=5 ") and lines[1] == "the\t2"
        capsys.readouterr()
        assert main(["compare", str(tmp_path / "c.tsv"), str(text), "--kind", "word"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["spearman"] == 1.0 and result["chi_square"] == 0.0
        assert main(["compare", str(tmp_path / "c.tsv"), str(text), "--kind", "char3"]) == 2
        assert main(["synth", "--out", str(tmp_path / "x"), "--sample-size", "10",
                     "--tokens-per-cell", "5"]) == 2


class TestPlotData:
    def exp3(self, rows, raw=True):
        return ExperimentReport(
            "exp3", ["language", "country", "kind", "mean"],
            [{"language": lang, "country": c, "kind": "char3", "mean": m} for lang, c, m in rows],
            config_digest="d" * 64,
            raw={f"{lang}/{c}": [m, m] for lang, c, m in rows} if raw else {})

    def test_thirteen_countries(self, tmp_path):
        countries = [f"C{i:02d}" for i in range(13)]
        emit_plot_data(self.exp3([("ara", c, 0.5) for c in countries]), tmp_path)
        data = json.loads((tmp_path / "violin_ara.json").read_text())
        assert sorted(data["countries"]) == countries
        assert data["countries"]["C00"]["scores"] == [0.5, 0.5]
        assert len(json.loads((tmp_path / "country_map.json").read_text())["countries"]) == 13

    def test_singleton(self, tmp_path):
        emit_plot_data(self.exp3([("eng", "NZ", 0.6)]), tmp_path)
        assert list(json.loads((tmp_path / "violin_eng.json").read_text())["countries"]) == ["NZ"]

    def test_errors(self, tmp_path):
        with pytest.raises(ValueError, match="raw scores required"):
            emit_plot_data(self.exp3([("eng", "NZ", 0.6)], raw=False), tmp_path)
        with pytest.raises(ValueError, match="empty"):
            emit_plot_data(self.exp3([]), tmp_path)

    def test_csv_quoting_and_report_round_trip(self, tmp_path):
        text = table_to_csv(["a", "b"], [{"a": "x,y", "b": 0.1}, {"a": None, "b": float("nan")}], "z")
        assert text.splitlines() == ["# config_digest=z", "a,b", '"x,y",0.1', ","]
        rep = self.exp3([("eng", "NZ", 0.6)])
        write_report(rep, tmp_path)
        back = load_report(tmp_path / "exp3.json")
        assert back.rows == rep.rows and back.raw == rep.raw
