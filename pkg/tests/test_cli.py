"""End-to-end tests for the command-line pipeline with stub LLM clients."""

import csv
import itertools
import json
import time

import numpy as np
import pytest

from src.cli import EXIT_CONFIG, EXIT_OK, EXIT_PARTIAL, main
from src.corpus_data import load_corpus
from src.errors import LlmUnavailable
from src.eval import HashedBagOfWordsEmbedder
from src.index_data import EmbeddingSet, write_embeddings
from src.llm import ConcatenateClient

REPORTS = [
    {"study_id": "s1", "text": "Mild bibasilar atelectasis. No pneumothorax."},
    {"study_id": "s2", "text": "Small right pleural effusion. No pneumothorax."},
    {"study_id": "s3", "text": "Moderate cardiomegaly. Mild pulmonary edema."},
]

QUERIES = {
    0: "bibasilar atelectasis",
    1: "pleural effusion",
    2: "cardiomegaly and edema",
}


class FlakyClient(ConcatenateClient):
    """Concatenating stub whose endpoint is down for prompts about effusions."""

    def complete(self, request):
        if "effusion" in request.prompt.as_text():
            raise LlmUnavailable("endpoint unavailable")
        return super().complete(request)


def embed(texts_by_id, path, dim=256):
    """Write bag-of-words embeddings for the texts as an EMB1 file."""
    embedder = HashedBagOfWordsEmbedder(dim)
    ids = sorted(texts_by_id)
    matrix = np.stack([embedder.embed_report(texts_by_id[i]).values for i in ids])
    write_embeddings(path, EmbeddingSet(np.asarray(ids, dtype=np.uint64), matrix))
    return path


def read_jsonl(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


@pytest.fixture
def workspace(tmp_path, monkeypatch):
    """Working directory with reports, corpus, index and query embeddings."""
    monkeypatch.chdir(tmp_path)
    reports = tmp_path / "reports.jsonl"
    reports.write_text("".join(json.dumps(r) + "\n" for r in REPORTS), encoding="utf-8")

    assert main(["ingest", str(reports), "--out", "corpus.jsonl"]) == EXIT_OK
    corpus = load_corpus(tmp_path / "corpus.jsonl")
    embed({r.record_id: r.text for r in corpus}, tmp_path / "corpus.emb")
    embed(QUERIES, tmp_path / "queries.emb")

    args = ["build-index", "--corpus", "corpus.jsonl", "--embeddings", "corpus.emb"]
    assert main(args + ["--out", "index.emb"]) == EXIT_OK
    return tmp_path


def generate_args(out_dir, *extra):
    return [
        "generate",
        "--corpus",
        "corpus.jsonl",
        "--index",
        "index.emb",
        "--queries",
        "queries.emb",
        "--out-dir",
        out_dir,
        *extra,
    ]


class TestIngest:
    """Test the ingest command."""

    def test_sentence_corpus_and_summary(self, workspace):
        """Test that ingest splits, dedupes and writes a summary."""
        corpus = load_corpus(workspace / "corpus.jsonl")
        summary = json.loads((workspace / "corpus.summary.json").read_text())

        assert corpus.level == "sentence"
        assert corpus.count == 5
        assert summary == {
            "level": "sentence",
            "reports": 3,
            "records": 5,
            "blank_skipped": 0,
            "duplicates_removed": 1,
        }

    def test_report_level(self, workspace):
        """Test report-level ingestion."""
        args = ["ingest", "reports.jsonl", "--level", "report", "--out", "reports.corpus.jsonl"]
        code = main(args)

        assert code == EXIT_OK
        assert load_corpus(workspace / "reports.corpus.jsonl").count == 3

    def test_missing_input(self, workspace):
        """Test that a missing input file exits with the config code."""
        assert main(["ingest", "missing.jsonl"]) == EXIT_CONFIG


class TestRetrieve:
    """Test the retrieve command."""

    def test_top_k_per_query(self, workspace):
        """Test that each query gets k ranked records with text."""
        code = main(
            ["retrieve", "--corpus", "corpus.jsonl", "--index", "index.emb"]
            + ["--queries", "queries.emb", "--k", "2", "--out", "retrieved.jsonl"]
        )
        rows = read_jsonl(workspace / "retrieved.jsonl")

        assert code == EXIT_OK
        assert [row["query_id"] for row in rows] == [0, 1, 2]
        assert all(len(row["results"]) == 2 for row in rows)
        assert rows[0]["results"][0]["text"] == "Mild bibasilar atelectasis."
        assert [r["rank"] for r in rows[1]["results"]] == [0, 1]


class TestGenerate:
    """Test the generate command."""

    def test_outputs_are_deterministic(self, workspace):
        """Test that two stub runs write byte-identical impressions."""
        assert main(generate_args("run1", "--client", "echo")) == EXIT_OK
        assert main(generate_args("run2", "--client", "echo")) == EXIT_OK

        first = (workspace / "run1" / "impressions.jsonl").read_bytes()
        second = (workspace / "run2" / "impressions.jsonl").read_bytes()
        assert first == second
        assert b"\r\n" not in first

    def test_impressions_and_manifest(self, workspace):
        """Test impression rows and the run manifest."""
        assert main(generate_args("run", "--client", "concatenate", "--k", "2")) == EXIT_OK

        rows = read_jsonl(workspace / "run" / "impressions.jsonl")
        manifest = json.loads((workspace / "run" / "manifest.json").read_text())

        assert [row["query_id"] for row in rows] == [0, 1, 2]
        assert rows[0]["provenance"][0] == 0
        assert rows[0]["impression"] == "\n".join(rows[0]["context"])
        assert all(row["llm_call_count"] == 1 for row in rows)
        assert manifest["command"] == "generate"
        assert manifest["config"]["generation"]["k"] == 2
        assert manifest["provenance"]["0"] == rows[0]["provenance"]
        assert manifest["failures"] == {}

    def test_refine_when_over_budget(self, workspace):
        """Test that a tight budget with --refine uses one call per record."""
        code = main(
            generate_args("run", "--client", "concatenate", "--refine", "--token-budget", "85")
        )
        rows = read_jsonl(workspace / "run" / "impressions.jsonl")

        assert code == EXIT_OK
        assert all(row["strategy"] == "refine" for row in rows)
        assert all(row["llm_call_count"] == 3 for row in rows)
        assert rows[0]["impression"] == " ".join(rows[0]["context"])

    def test_partial_failure(self, workspace):
        """Test that per-query failures exit 1 and are listed in the manifest."""
        code = main(generate_args("run", "--client", "echo", "--template", "structured_few_shot"))
        rows = read_jsonl(workspace / "run" / "impressions.jsonl")
        manifest = json.loads((workspace / "run" / "manifest.json").read_text())

        assert code == EXIT_PARTIAL
        assert all(row["error_type"] == "NotJson" for row in rows)
        assert sorted(manifest["failures"]) == ["0", "1", "2"]

    def test_endpoint_down_for_some_queries(self, workspace, monkeypatch):
        """Test that only the unavailable queries fail while the rest are written."""
        monkeypatch.setattr("src.cli.build_client", lambda config, renderer: FlakyClient(renderer))

        code = main(generate_args("run", "--k", "1"))
        rows = read_jsonl(workspace / "run" / "impressions.jsonl")
        manifest = json.loads((workspace / "run" / "manifest.json").read_text())

        assert code == EXIT_PARTIAL
        assert [row["query_id"] for row in rows] == [0, 1, 2]
        assert rows[0]["impression"] == "Mild bibasilar atelectasis."
        assert rows[1]["error_type"] == "LlmUnavailable"
        assert "impression" not in rows[1]
        assert rows[2]["impression"] == "Moderate cardiomegaly."
        assert list(manifest["failures"]) == ["1"]
        assert sorted(manifest["provenance"]) == ["0", "2"]

    def test_budget_below_prompt_frame(self, workspace):
        """Test that a budget too small for the prompt itself exits 2."""
        assert main(generate_args("run", "--client", "echo", "--token-budget", "10")) == EXIT_CONFIG

    def test_missing_queries(self, workspace):
        """Test that a missing queries file exits 2."""
        args = generate_args("run", "--client", "echo")
        args[args.index("queries.emb")] = "nope.emb"

        assert main(args) == EXIT_CONFIG


class TestEvaluate:
    """Test the evaluate and hallucinate commands."""

    def test_identity_run(self, workspace):
        """Test that scoring impressions against themselves gives ones."""
        assert main(generate_args("run", "--client", "echo")) == EXIT_OK
        impressions = str(workspace / "run" / "impressions.jsonl")

        code = main(
            ["evaluate", "--predictions", impressions, "--references", impressions]
            + ["--contexts", impressions, "--out-dir", "eval"]
        )
        metrics = json.loads((workspace / "eval" / "metrics.json").read_text())

        assert code == EXIT_OK
        assert metrics["count"] == 3
        for value in metrics["means"].values():
            assert value == pytest.approx(1.0)
        assert metrics["hallucination"]["fraction_above"] == 1.0
        assert (workspace / "eval" / "metrics.csv").exists()

    def test_misaligned_references(self, workspace):
        """Test that missing references exit with the config code."""
        assert main(generate_args("run", "--client", "echo")) == EXIT_OK
        references = workspace / "refs.jsonl"
        references.write_text(json.dumps({"query_id": 0, "impression": "No effusion."}) + "\n")

        code = main(
            ["evaluate", "--predictions", "run/impressions.jsonl", "--references", str(references)]
        )

        assert code == EXIT_CONFIG

    def test_hallucinate(self, workspace):
        """Test grounding outputs for extractive generations."""
        assert main(generate_args("run", "--client", "extractive")) == EXIT_OK

        code = main(
            ["hallucinate", "--predictions", "run/impressions.jsonl", "--threshold", "0.7"]
            + ["--out-dir", "grounding"]
        )
        report = json.loads((workspace / "grounding" / "hallucination.json").read_text())

        assert code == EXIT_OK
        assert report["count"] == 3
        assert report["threshold"] == 0.7
        assert report["min"] >= 0.99
        assert (workspace / "grounding" / "hallucination.csv").exists()
        assert (workspace / "grounding" / "hallucination.png").stat().st_size > 0

    def test_invalid_threshold(self, workspace):
        """Test that an out-of-range threshold exits 2."""
        assert main(generate_args("run", "--client", "echo")) == EXIT_OK

        code = main(["hallucinate", "--predictions", "run/impressions.jsonl", "--threshold", "1.5"])

        assert code == EXIT_CONFIG


@pytest.fixture
def sweep_workspace(workspace):
    """Workspace with a report-level index and references for every query."""
    args = ["ingest", "reports.jsonl", "--level", "report", "--out", "reports.corpus.jsonl"]
    assert main(args) == EXIT_OK
    reports = load_corpus(workspace / "reports.corpus.jsonl")
    embed({r.record_id: r.text for r in reports}, workspace / "reports.emb")
    args = ["build-index", "--corpus", "reports.corpus.jsonl", "--embeddings", "reports.emb"]
    assert main(args + ["--out", "reports.index.emb"]) == EXIT_OK

    references = [
        {"query_id": 0, "impression": "Bibasilar atelectasis."},
        {"query_id": 1, "impression": "Right pleural effusion."},
        {"query_id": 2, "impression": "Cardiomegaly with mild edema."},
    ]
    (workspace / "refs.jsonl").write_text("".join(json.dumps(r) + "\n" for r in references))
    return workspace


def sweep_args(out_dir, *extra):
    return [
        "sweep",
        "--corpus",
        "corpus.jsonl",
        "--index",
        "index.emb",
        "--corpus",
        "reports.corpus.jsonl",
        "--index",
        "reports.index.emb",
        "--queries",
        "queries.emb",
        "--references",
        "refs.jsonl",
        "--out-dir",
        out_dir,
        *extra,
    ]


class TestSweep:
    """Test the sweep command."""

    def test_grid_rows(self, sweep_workspace):
        """Test one CSV row and one impressions file per grid point."""
        code = main(
            sweep_args("grid", "--client", "extractive", "--k", "1", "2")
            + ["--temperature", "0", "0.5", "1"]
        )
        with open(sweep_workspace / "grid" / "sweep.csv", newline="") as f:
            rows = list(csv.DictReader(f))
        manifest = json.loads((sweep_workspace / "grid" / "manifest.json").read_text())

        assert code == EXIT_OK
        assert len(rows) == 12
        assert [(r["corpus_level"], r["k"], r["temperature"]) for r in rows[:3]] == [
            ("report", "1", "0.0"),
            ("report", "1", "0.5"),
            ("report", "1", "1.0"),
        ]
        assert all(r["failed"] == "0" and r["queries"] == "3" for r in rows)
        assert all(r["bertscore_f1"] and r["grounding_mean"] for r in rows)
        assert manifest["command"] == "sweep"
        assert manifest["points"][0] == "report_k1_t0"
        point_rows = read_jsonl(sweep_workspace / "grid" / "sentence_k2_t1" / "impressions.jsonl")
        assert [len(row["provenance"]) for row in point_rows] == [2, 2, 2]

    def test_default_k_values(self, sweep_workspace):
        """Test that K defaults to 1, 2 and 3 at one temperature."""
        assert main(sweep_args("grid", "--client", "echo")) == EXIT_OK

        with open(sweep_workspace / "grid" / "sweep.csv", newline="") as f:
            rows = list(csv.DictReader(f))

        assert [(r["corpus_level"], r["k"]) for r in rows] == [
            ("report", "1"),
            ("report", "2"),
            ("report", "3"),
            ("sentence", "1"),
            ("sentence", "2"),
            ("sentence", "3"),
        ]

    def test_partial_failure(self, sweep_workspace, monkeypatch):
        """Test that failed queries are counted per point and exit 1."""
        monkeypatch.setattr("src.cli.build_client", lambda config, renderer: FlakyClient(renderer))

        code = main(sweep_args("grid", "--k", "1"))
        with open(sweep_workspace / "grid" / "sweep.csv", newline="") as f:
            rows = {r["corpus_level"]: r for r in csv.DictReader(f)}
        manifest = json.loads((sweep_workspace / "grid" / "manifest.json").read_text())

        assert code == EXIT_PARTIAL
        assert rows["sentence"]["failed"] == "1"
        assert rows["sentence"]["bertscore_f1"] != ""
        assert "sentence_k1_t0/1" in manifest["failures"]

    def test_missing_reference(self, sweep_workspace):
        """Test that a query without a reference exits 2."""
        (sweep_workspace / "refs.jsonl").write_text(
            json.dumps({"query_id": 0, "impression": "Bibasilar atelectasis."}) + "\n"
        )

        assert main(sweep_args("grid", "--client", "echo")) == EXIT_CONFIG

    def test_unpaired_index(self, sweep_workspace):
        """Test that every corpus needs its own index."""
        args = sweep_args("grid", "--client", "echo")
        at = args.index("reports.index.emb")
        del args[at - 1 : at + 1]

        assert main(args) == EXIT_CONFIG


SEVERITIES = ["Mild", "Moderate", "Severe", "Minimal", "Small"]
FINDINGS = [
    "atelectasis",
    "pleural effusion",
    "pulmonary edema",
    "consolidation",
    "pneumothorax",
    "cardiomegaly",
    "opacity",
    "interstitial thickening",
    "hilar prominence",
    "scarring",
]
LOCATIONS = [
    "in the left lower lobe",
    "in the right lower lobe",
    "in the left upper lobe",
    "in the right upper lobe",
    "at the lung bases",
]
TRENDS = ["unchanged", "new", "improved", "worsened"]

LARGE_QUERIES = {
    0: "left lower lobe atelectasis",
    1: "new right pleural effusion",
    2: "severe pulmonary edema at the bases",
    3: "improved consolidation in the right upper lobe",
    4: "small pneumothorax",
    5: "worsened cardiomegaly",
}


@pytest.fixture(scope="module")
def large_workspace(tmp_path_factory):
    """1,000 distinct sentences in 250 reports, indexed, with six queries."""
    root = tmp_path_factory.mktemp("large")
    sentences = [
        f"{severity} {finding} {location}, {trend}."
        for severity, finding, location, trend in itertools.product(
            SEVERITIES, FINDINGS, LOCATIONS, TRENDS
        )
    ]
    reports = [
        {"study_id": f"s{n}", "text": " ".join(sentences[n * 4 : n * 4 + 4])}
        for n in range(len(sentences) // 4)
    ]
    (root / "reports.jsonl").write_text("".join(json.dumps(r) + "\n" for r in reports))

    args = ["ingest", str(root / "reports.jsonl"), "--out", str(root / "corpus.jsonl")]
    assert main(args) == EXIT_OK
    corpus = load_corpus(root / "corpus.jsonl")
    embed({r.record_id: r.text for r in corpus}, root / "corpus.emb")
    embed(LARGE_QUERIES, root / "queries.emb")
    args = ["build-index", "--corpus", str(root / "corpus.jsonl")]
    args += ["--embeddings", str(root / "corpus.emb"), "--out", str(root / "index.emb")]
    assert main(args) == EXIT_OK
    return root


class TestLargeCorpus:
    """Test generation over a 1,000-sentence corpus."""

    def test_corpus_size(self, large_workspace):
        """Test that every generated sentence becomes a record."""
        assert load_corpus(large_workspace / "corpus.jsonl").count == 1000

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_reruns_are_byte_identical(self, large_workspace, k):
        """Test that repeating a run at each K writes identical impressions."""
        outputs = []
        started = time.perf_counter()
        for run in ("first", "second"):
            out_dir = large_workspace / f"k{k}_{run}"
            args = ["generate", "--corpus", str(large_workspace / "corpus.jsonl")]
            args += ["--index", str(large_workspace / "index.emb")]
            args += ["--queries", str(large_workspace / "queries.emb")]
            args += ["--client", "echo", "--k", str(k), "--out-dir", str(out_dir)]
            assert main(args) == EXIT_OK
            outputs.append((out_dir / "impressions.jsonl").read_bytes())

        assert time.perf_counter() - started < 30
        assert outputs[0] == outputs[1]
        rows = [json.loads(line) for line in outputs[0].decode("utf-8").splitlines()]
        assert [row["query_id"] for row in rows] == sorted(LARGE_QUERIES)
        assert all(len(row["provenance"]) == k for row in rows)
        assert all(-1.0 <= s <= 1.0 + 1e-6 for row in rows for s in row["scores"])
