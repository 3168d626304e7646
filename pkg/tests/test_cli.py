import pytest

from conftest import GOLDEN_CORPUS, GOLDEN_KELLY, GOLDEN_SENSES

from cefrlab import load_model, parse_corpus
from cefrlab.cli import run_cli


@pytest.fixture(scope="module")
def bundle_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("bundle")
    code = run_cli([
        "gen", "--seed", "7", "--docs-per-level", "8", "--standalone-per-level", "6",
        "--lexicon-size", "120", "--out", str(out),
    ])
    assert code == 0
    return out


def bundle_flags(out):
    return [
        "--corpus", str(out / "corpus.tsv"),
        "--kelly", str(out / "kelly.tsv"),
        "--senses", str(out / "senses.tsv"),
        "--catmap", str(out / "catmap.cfg"),
    ]


class TestGen:
    def test_files_exist_and_parse(self, bundle_dir):
        corpus = parse_corpus((bundle_dir / "corpus.tsv").read_text(encoding="utf-8"))
        assert len(corpus.documents) == 40
        assert (bundle_dir / "manifest.json").exists()

    def test_rerun_byte_identical(self, bundle_dir, tmp_path):
        code = run_cli([
            "gen", "--seed", "7", "--docs-per-level", "8", "--standalone-per-level", "6",
            "--lexicon-size", "120", "--out", str(tmp_path),
        ])
        assert code == 0
        for name in ("corpus.tsv", "kelly.tsv", "senses.tsv", "catmap.cfg", "manifest.json"):
            assert (tmp_path / name).read_bytes() == (bundle_dir / name).read_bytes()


class TestValidateAndStats:
    def test_validate_clean_exits_zero(self, bundle_dir, capsys):
        assert run_cli(["validate", "--corpus", str(bundle_dir / "corpus.tsv")]) == 0
        out = capsys.readouterr().out
        assert "# issues = 0" in out

    def test_validate_broken_corpus_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.tsv"
        bad.write_text("# level = A1\n1\ta\ta\tNN\t_\t2\tX\t_\n2\tb\tb\tNN\t_\t1\tX\t_\n")
        assert run_cli(["validate", "--corpus", str(bad)]) == 1
        assert "missing-root" in capsys.readouterr().out

    def test_malformed_corpus_is_a_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.tsv"
        bad.write_text("# level = A1\n1\ta\ta\n")
        assert run_cli(["validate", "--corpus", str(bad)]) == 3
        assert "columns" in capsys.readouterr().err

    def test_stats_empty_corpus(self, tmp_path, capsys):
        empty = tmp_path / "empty.tsv"
        empty.write_text("")
        assert run_cli(["stats", "--corpus", str(empty)]) == 0
        out = capsys.readouterr().out
        assert "A1\t0\t0.0\t0" in out
        assert "Total\t0\t0.0\t0" in out

    def test_stats_header_embeds_invocation(self, bundle_dir, tmp_path):
        out = tmp_path / "artifacts"
        assert run_cli(["stats", "--corpus", str(bundle_dir / "corpus.tsv"), "--out", str(out)]) == 0
        first = (out / "stats.tsv").read_text(encoding="utf-8").splitlines()[0]
        assert first.startswith("# invocation = cefrlab stats --corpus")

    def test_unknown_flag_is_usage_error(self, bundle_dir, capsys):
        assert run_cli(["stats", "--corpus", "x", "--frobnicate"]) == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_unknown_subcommand_is_usage_error(self):
        assert run_cli(["transmogrify"]) == 2

    def test_missing_file_is_data_error(self, capsys):
        assert run_cli(["stats", "--corpus", "/nonexistent/corpus.tsv"]) == 3


class TestExtract:
    def test_feature_table_shape(self, bundle_dir, tmp_path):
        out = tmp_path / "feats"
        code = run_cli(
            ["extract"] + bundle_flags(bundle_dir) + ["--unit", "text", "--out", str(out)]
        )
        assert code == 0
        lines = (out / "features.tsv").read_text(encoding="utf-8").splitlines()
        header = lines[1].split("\t")
        assert header[:2] == ["unit_id", "level"]
        assert len(header) == 63
        assert header[2] == "f01_sentence_length"
        assert header[-1] == "f61_pron_to_prep"
        assert len(lines) == 2 + 40  # invocation + header + one row per document

    def test_sentence_unit_rows(self, bundle_dir, tmp_path):
        out = tmp_path / "feats"
        code = run_cli(
            ["extract"] + bundle_flags(bundle_dir) + ["--unit", "sentence", "--out", str(out)]
        )
        assert code == 0
        lines = (out / "features.tsv").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2 + 30


class TestTrainCvPredict:
    def test_cv_lex_group_is_eleven_features(self, bundle_dir, tmp_path):
        out = tmp_path / "cv"
        code = run_cli(
            ["cv"] + bundle_flags(bundle_dir)
            + ["--group", "Lex", "--k", "5", "--seed", "42", "--out", str(out)]
        )
        assert code == 0
        metrics = (out / "metrics.tsv").read_text(encoding="utf-8")
        assert "n_features\t11" in metrics
        assert "accuracy\t" in metrics
        assert (out / "confusion.csv").exists()
        predictions = (out / "predictions.tsv").read_text(encoding="utf-8").splitlines()
        assert len(predictions) == 2 + 40

    def test_cv_deterministic_across_reruns(self, bundle_dir, tmp_path):
        args = (
            ["cv"] + bundle_flags(bundle_dir)
            + ["--group", "Lex", "--k", "5", "--seed", "42", "--out", str(tmp_path / "cv")]
        )
        assert run_cli(args) == 0
        first = {p.name: p.read_bytes() for p in (tmp_path / "cv").iterdir()}
        assert run_cli(args) == 0
        second = {p.name: p.read_bytes() for p in (tmp_path / "cv").iterdir()}
        assert first == second

    def test_train_then_predict(self, bundle_dir, tmp_path):
        model_dir = tmp_path / "model"
        code = run_cli(
            ["train"] + bundle_flags(bundle_dir) + ["--group", "All", "--out", str(model_dir)]
        )
        assert code == 0
        model = load_model(model_dir / "model.json")
        assert model.n_features == 61
        meta = (model_dir / "training_meta.tsv").read_text(encoding="utf-8")
        assert meta.startswith("# invocation = cefrlab train")
        assert "converged\tTrue" in meta

        pred_dir = tmp_path / "pred"
        code = run_cli(
            ["predict", str(bundle_dir / "corpus.tsv"),
             "--model", str(model_dir / "model.json"),
             "--kelly", str(bundle_dir / "kelly.tsv"),
             "--senses", str(bundle_dir / "senses.tsv"),
             "--catmap", str(bundle_dir / "catmap.cfg"),
             "--level-mode", "zero-out",
             "--out", str(pred_dir)]
        )
        assert code == 0
        lines = (pred_dir / "predictions.tsv").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2 + 40 + 30  # every text and standalone sentence
        for line in lines[2:]:
            probs = [float(v) for v in line.split("\t")[4:]]
            assert len(probs) == 5
            assert sum(probs) == pytest.approx(1.0, abs=1e-9)

    def test_distribution_rows_normalized(self, bundle_dir, tmp_path):
        model_dir = tmp_path / "smodel"
        code = run_cli(
            ["train"] + bundle_flags(bundle_dir)
            + ["--unit", "sentence", "--group", "All", "--out", str(model_dir)]
        )
        assert code == 0
        dist_dir = tmp_path / "dist"
        code = run_cli(
            ["distribution"] + bundle_flags(bundle_dir)
            + ["--model", str(model_dir / "model.json"), "--out", str(dist_dir)]
        )
        assert code == 0
        lines = (dist_dir / "distribution.csv").read_text(encoding="utf-8").splitlines()
        assert lines[1].startswith("doc_level,A1,A2,B1,B2,C1")
        for line in lines[2:]:
            cells = line.split(",")
            assert sum(float(v) for v in cells[1:6]) == pytest.approx(1.0, abs=1e-9)

    def test_group_model_predicts_with_that_group(self, bundle_dir, tmp_path):
        model_dir = tmp_path / "lexmodel"
        assert run_cli(
            ["train"] + bundle_flags(bundle_dir) + ["--group", "Lex", "--out", str(model_dir)]
        ) == 0
        pred_dir = tmp_path / "lexpred"
        code = run_cli(
            ["predict", "--corpus", str(bundle_dir / "corpus.tsv"),
             "--model", str(model_dir / "model.json"),
             "--kelly", str(bundle_dir / "kelly.tsv"),
             "--senses", str(bundle_dir / "senses.tsv"),
             "--catmap", str(bundle_dir / "catmap.cfg"),
             "--out", str(pred_dir)]
        )
        assert code == 0


class TestCatmapDefaulting:
    def test_env_var_supplies_catmap(self, tmp_path, monkeypatch, bundle_dir):
        corpus = tmp_path / "c.tsv"
        corpus.write_text(GOLDEN_CORPUS, encoding="utf-8")
        kelly = tmp_path / "k.tsv"
        kelly.write_text(GOLDEN_KELLY, encoding="utf-8")
        senses = tmp_path / "s.tsv"
        senses.write_text(GOLDEN_SENSES, encoding="utf-8")
        monkeypatch.setenv("CEFRLAB_CATMAP", str(bundle_dir / "catmap.cfg"))
        out = tmp_path / "f"
        code = run_cli([
            "extract", "--corpus", str(corpus), "--kelly", str(kelly),
            "--senses", str(senses), "--out", str(out),
        ])
        assert code == 0

    def test_bundled_default_used_without_env(self, tmp_path, monkeypatch):
        monkeypatch.delenv("CEFRLAB_CATMAP", raising=False)
        corpus = tmp_path / "c.tsv"
        corpus.write_text(GOLDEN_CORPUS, encoding="utf-8")
        kelly = tmp_path / "k.tsv"
        kelly.write_text(GOLDEN_KELLY, encoding="utf-8")
        senses = tmp_path / "s.tsv"
        senses.write_text(GOLDEN_SENSES, encoding="utf-8")
        out = tmp_path / "f"
        code = run_cli([
            "extract", "--corpus", str(corpus), "--kelly", str(kelly),
            "--senses", str(senses), "--out", str(out),
        ])
        assert code == 0
        table = (out / "features.tsv").read_text(encoding="utf-8").splitlines()
        row = table[2].split("\t")
        assert row[0] == "fix1"
        assert float(row[2]) == 5.0  # sentence length of the golden fixture
