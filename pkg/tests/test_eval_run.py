"""Tests for run-level evaluation, sidecar components and CSV export."""

import csv
import json

import numpy as np
import pytest

from src.csv_export import export_hallucination, export_metrics
from src.errors import AlignmentError, ConfigError, EmptyEvaluation, EvaluationError
from src.eval import (
    HashedBagOfWordsEmbedder,
    HashedTokenEmbedder,
    SidecarEntityExtractor,
    SidecarReportEmbedder,
    SidecarTokenEmbedder,
    VocabEntityExtractor,
    evaluate_run,
    sort_ids,
)
from src.index_data import EmbeddingSet, write_embeddings
from src.vocab import load_vocab

PREDICTIONS = {
    "1": "Mild bibasilar atelectasis. Small right pleural effusion.",
    "2": "Moderate cardiomegaly with mild pulmonary edema.",
    "10": "No pneumothorax.",
}

REFERENCES = {
    "1": "Small right pleural effusion with bibasilar atelectasis.",
    "2": "Moderate cardiomegaly.",
    "10": "No pneumothorax.",
}


@pytest.fixture
def components():
    """Hashed token and report embedders with the vocabulary extractor."""
    return HashedTokenEmbedder(), HashedBagOfWordsEmbedder(), VocabEntityExtractor(load_vocab())


def write_jsonl(path, rows):
    path.write_text("".join(json.dumps(row) + "\n" for row in rows), encoding="utf-8")
    return path


class TestEvaluateRun:
    """Test evaluate_run."""

    def test_identity_scores_one(self, components):
        """Test that predictions equal to references score 1 on every metric."""
        run = evaluate_run(REFERENCES, REFERENCES, None, *components)

        for value in run.means.to_dict().values():
            assert value == pytest.approx(1.0)
        assert run.hallucination is None

    def test_records_in_id_order(self, components):
        """Test that numeric ids sort numerically."""
        run = evaluate_run(PREDICTIONS, REFERENCES, None, *components)

        assert [r.record_id for r in run.records] == ["1", "2", "10"]

    def test_mean_of_records(self, components):
        """Test that means are the average of per-record scores."""
        run = evaluate_run(PREDICTIONS, REFERENCES, None, *components)

        expected = np.mean([r.scores.entity_f1 for r in run.records])
        assert run.means.entity_f1 == pytest.approx(expected)
        assert run.records[1].scores.entity_recall == 1.0
        assert run.records[1].scores.entity_precision == pytest.approx(1 / 3)

    def test_misaligned_ids(self, components):
        """Test that differing id sets raise AlignmentError with both sides."""
        predictions = {"1": "a", "3": "b"}
        references = {"1": "a", "2": "b"}

        with pytest.raises(AlignmentError) as exc_info:
            evaluate_run(predictions, references, None, *components)

        assert exc_info.value.missing == ["2"]
        assert exc_info.value.extra == ["3"]

    def test_empty(self, components):
        """Test that nothing to evaluate raises EmptyEvaluation."""
        with pytest.raises(EmptyEvaluation):
            evaluate_run({}, {}, None, *components)

    def test_grounding_block(self, components):
        """Test that contexts add a hallucination report keyed by record id."""
        contexts = {rid: [text] for rid, text in PREDICTIONS.items()}

        run = evaluate_run(PREDICTIONS, REFERENCES, contexts, *components, threshold=0.5)

        assert run.hallucination.threshold == 0.5
        assert run.hallucination.fraction_above == 1.0
        assert list(run.hallucination.scores) == ["1", "2", "10"]

    def test_missing_context(self, components):
        """Test that every evaluated record needs a context."""
        with pytest.raises(AlignmentError):
            evaluate_run(PREDICTIONS, REFERENCES, {"1": ["x"]}, *components)

    def test_workers_do_not_change_results(self, components):
        """Test that parallel scoring gives the same run."""
        serial = evaluate_run(PREDICTIONS, REFERENCES, None, *components, workers=1)
        parallel = evaluate_run(PREDICTIONS, REFERENCES, None, *components, workers=4)

        assert parallel.to_dict() == serial.to_dict()

    def test_write_json(self, tmp_path, components):
        """Test the metrics JSON layout."""
        run = evaluate_run(PREDICTIONS, REFERENCES, None, *components)
        path = tmp_path / "out" / "metrics.json"

        run.write_json(path)
        data = json.loads(path.read_text())

        assert data["count"] == 3
        assert "no idf" in data["bertscore_variant"]
        assert set(data["means"]) == {
            "bertscore_precision",
            "bertscore_recall",
            "bertscore_f1",
            "s_emb",
            "entity_precision",
            "entity_recall",
            "entity_f1",
        }

    def test_sort_ids(self):
        """Test mixed numeric and text ids."""
        assert sort_ids(["b", "10", "2", "a"]) == ["2", "10", "a", "b"]


class TestSidecars:
    """Test components backed by precomputed outputs."""

    def test_entity_sidecar(self, tmp_path):
        """Test entities looked up by text through their record id."""
        path = write_jsonl(
            tmp_path / "entities.jsonl",
            [
                {"record_id": "1", "entities": ["Effusion", "atelectasis"]},
                {"record_id": "2", "entities": []},
            ],
        )
        extractor = SidecarEntityExtractor().add({"1": "text one", "2": "text two"}, path)

        assert extractor.extract("text one") == {"effusion", "atelectasis"}
        assert extractor.extract("text two") == set()

    def test_unknown_text(self, tmp_path):
        """Test that a text without sidecar output raises EvaluationError."""
        path = write_jsonl(tmp_path / "entities.jsonl", [{"record_id": 1, "entities": []}])
        extractor = SidecarEntityExtractor().add({"1": "text one"}, path)

        with pytest.raises(EvaluationError):
            extractor.extract("another text")

    def test_missing_ids(self, tmp_path):
        """Test that a sidecar must cover every record."""
        path = write_jsonl(tmp_path / "entities.jsonl", [{"record_id": 1, "entities": []}])

        with pytest.raises(ConfigError):
            SidecarEntityExtractor().add({"1": "a", "2": "b"}, path)

    def test_missing_file(self, tmp_path):
        """Test that a missing sidecar file is a config error."""
        with pytest.raises(ConfigError):
            SidecarTokenEmbedder().add({"1": "a"}, tmp_path / "nope.jsonl")

    def test_token_sidecar(self, tmp_path):
        """Test per-token vectors from a sidecar file."""
        path = write_jsonl(
            tmp_path / "tokens.jsonl", [{"record_id": 1, "tokens": [[1.0, 0.0], [0.0, 1.0]]}]
        )
        embedder = SidecarTokenEmbedder().add({"1": "left effusion"}, path)

        vectors = embedder.embed_tokens("left effusion")

        assert [v.values.tolist() for v in vectors] == [[1.0, 0.0], [0.0, 1.0]]

    def test_report_sidecar(self, tmp_path):
        """Test report embeddings from an embedding file."""
        path = tmp_path / "pred.emb"
        write_embeddings(
            path,
            EmbeddingSet(np.array([1, 2], dtype=np.uint64), np.eye(2, dtype=np.float32)),
        )
        embedder = SidecarReportEmbedder().add({"1": "first", "2": "second"}, path)

        assert embedder.embed_report("second").values.tolist() == [0.0, 1.0]


class TestCsvExport:
    """Test CSV output."""

    def test_metrics_csv(self, tmp_path, components):
        """Test one row per record plus a mean row."""
        contexts = {rid: [text] for rid, text in PREDICTIONS.items()}
        run = evaluate_run(PREDICTIONS, REFERENCES, contexts, *components)

        path = export_metrics(run, str(tmp_path / "data"))
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))

        assert [r["record_id"] for r in rows] == ["1", "2", "10", "mean"]
        assert rows[2]["bertscore_f1"] == "1.000000"
        assert "grounding_s_emb" in rows[0]

    def test_hallucination_csv(self, tmp_path, components):
        """Test the above_threshold flag."""
        contexts = {"1": ["Mild bibasilar atelectasis."], "2": ["Unrelated words."], "10": ["x"]}
        run = evaluate_run(PREDICTIONS, REFERENCES, contexts, *components, threshold=0.5)

        path = export_hallucination(run.hallucination, str(tmp_path))
        with open(path, newline="") as f:
            rows = {r["record_id"]: r for r in csv.DictReader(f)}

        assert rows["1"]["above_threshold"] == "1"
        assert rows["2"]["above_threshold"] == "0"
