"""
Command-line entry point for the radiology impression RAG engine.

Subcommands communicate only through files:
    ingest -> build-index -> retrieve / generate -> evaluate / hallucinate
    ingest -> build-index (per corpus level) -> sweep

Exit codes: 0 success, 1 partial failure, 2 configuration or input error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from dotenv import find_dotenv, load_dotenv
from termcolor import colored
from tqdm import tqdm

from .charts import plot_score_distribution
from .config import HTTP_CLIENT, RunConfig, get_api_key, get_run_config, load_config
from .corpus_data import (
    REPORT,
    SENTENCE,
    dedupe,
    ingest_reports,
    load_corpus,
    save_corpus,
    sentence_split,
)
from .csv_export import export_hallucination, export_metrics, export_sweep
from .display_helpers import (
    print_info_box,
    print_score_histogram,
    print_section_header,
    print_table,
    score_color,
)
from .errors import ConfigError, RagError
from .eval import (
    HashedBagOfWordsEmbedder,
    HashedTokenEmbedder,
    SidecarEntityExtractor,
    SidecarReportEmbedder,
    SidecarTokenEmbedder,
    VocabEntityExtractor,
    evaluate_run,
    hallucination_report,
    sort_ids,
)
from .eval.metrics import join_context
from .generation import BatchOutcome, generate_batch
from .index_data import (
    EmbeddingVector,
    build_index,
    load_index,
    read_embeddings,
    save_index,
    top_k,
)
from .llm import STUB_CLIENTS, OpenAICompatibleClient
from .manifest import build_manifest, write_json, write_jsonl
from .prompting import (
    STRUCTURED_FEW_SHOT,
    PromptRenderer,
    default_templates,
    load_shots,
    load_templates,
)
from .sweep import SweepResult, run_sweep, sweep_row
from .vocab import load_vocab

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _require_file(path: Optional[str], what: str) -> Path:
    if not path:
        raise ConfigError(f"{what} is required")
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"{what} not found: {p}")
    return p


# ingest


def cmd_ingest(args, config: RunConfig) -> int:
    source = _require_file(args.reports, "reports file")
    reports = ingest_reports(source)
    corpus = sentence_split(reports) if args.level == SENTENCE else reports
    if not args.keep_duplicates:
        corpus = dedupe(corpus)

    out = Path(args.out or config.paths.corpus or Path(config.paths.output_dir) / "corpus.jsonl")
    save_corpus(corpus, out)
    summary = {
        "level": corpus.level,
        "reports": reports.count,
        "records": corpus.count,
        "blank_skipped": reports.blank_skipped,
        "duplicates_removed": corpus.duplicates_removed,
    }
    summary_path = write_json(out.with_suffix(".summary.json"), summary)

    print_section_header("CORPUS")
    print_info_box(
        {
            "Reports read:": summary["reports"],
            "Level:": summary["level"],
            "Records written:": summary["records"],
            "Blank reports skipped:": summary["blank_skipped"],
            "Duplicates removed:": summary["duplicates_removed"],
            "Corpus file:": str(out),
            "Summary file:": str(summary_path),
        },
        separators=[2, 5],
    )
    return EXIT_OK


# index and retrieval


def cmd_build_index(args, config: RunConfig) -> int:
    corpus = load_corpus(_require_file(args.corpus or config.paths.corpus, "corpus"))
    embeddings = read_embeddings(
        _require_file(args.embeddings or config.paths.embeddings, "embeddings")
    )
    index = build_index(corpus, embeddings, normalize=not args.no_normalize)
    out = Path(args.out or config.paths.index or Path(config.paths.output_dir) / "index.emb")
    save_index(index, out)

    print_section_header("INDEX")
    print_info_box(
        {
            "Records:": index.count,
            "Dimension:": index.dim,
            "Normalized:": index.normalized,
            "Index file:": str(out),
        }
    )
    return EXIT_OK


def _load_queries(path: Optional[str]) -> List[Tuple[int, EmbeddingVector]]:
    queries = read_embeddings(_require_file(path, "query embeddings"))
    pairs = [(int(rid), queries.vector(i)) for i, rid in enumerate(queries.record_ids)]
    return sorted(pairs, key=lambda pair: pair[0])


def _load_index_and_corpus(args, config: RunConfig):
    corpus = load_corpus(_require_file(args.corpus or config.paths.corpus, "corpus"))
    index_path = args.index or config.paths.index
    if index_path:
        index = load_index(_require_file(index_path, "index"), corpus)
    else:
        embeddings = read_embeddings(
            _require_file(config.paths.embeddings, "index or embeddings")
        )
        index = build_index(corpus, embeddings)
    return corpus, index


def cmd_retrieve(args, config: RunConfig) -> int:
    corpus, index = _load_index_and_corpus(args, config)
    queries = _load_queries(args.queries or config.paths.queries)
    k = args.k or config.generation.k

    rows = []
    for query_id, query in queries:
        results = top_k(index, query, k)
        rows.append(
            {
                "query_id": query_id,
                "results": [
                    {**r.to_dict(), "text": corpus.get(r.record_id).text} for r in results
                ],
            }
        )
    out = Path(args.out or Path(config.paths.output_dir) / "retrieved.jsonl")
    write_jsonl(out, rows)

    print_section_header("RETRIEVAL")
    print_info_box({"Queries:": len(rows), "K:": k, "Results file:": str(out)})
    return EXIT_OK


# generation


def build_client(config: RunConfig, renderer: PromptRenderer):
    llm = config.llm
    if llm.client == HTTP_CLIENT:
        if get_api_key(llm) is None:
            logger.warning("%s is not set; sending requests without an API key", llm.api_key_env)
        return OpenAICompatibleClient(
            base_url=llm.base_url,
            api_key_env=llm.api_key_env,
            timeout=llm.timeout,
            max_attempts=llm.max_attempts,
            backoff_base=llm.backoff_base,
        )
    return STUB_CLIENTS[llm.client](renderer)


def _renderer(config: RunConfig) -> PromptRenderer:
    if config.paths.templates:
        return PromptRenderer(load_templates(config.paths.templates))
    return PromptRenderer(default_templates())


def _apply_generation_flags(args, config: RunConfig) -> RunConfig:
    config = config.with_overrides(
        "generation",
        k=args.k,
        mode=args.mode,
        model_name=args.model,
        temperature=args.temperature,
        token_budget=args.token_budget,
        maxlen=args.maxlen,
        template=args.template,
        refine_enabled=True if args.refine else None,
    )
    config = config.with_overrides("llm", client=args.client, base_url=args.base_url)
    return config.with_overrides(
        "paths",
        corpus=args.corpus,
        index=args.index,
        queries=args.queries,
        output_dir=args.out_dir,
    )


def _outcome_row(outcome: BatchOutcome) -> Dict:
    if outcome.ok:
        return {"query_id": outcome.query_id, **outcome.impression.to_dict()}
    return {"query_id": outcome.query_id, "error": outcome.error, "error_type": outcome.error_type}


def cmd_generate(args, config: RunConfig) -> int:
    config = _apply_generation_flags(args, config)
    config.validate(required=("corpus", "queries"))
    gen = config.generation

    corpus, index = _load_index_and_corpus(args, config)
    queries = _load_queries(config.paths.queries)
    renderer = _renderer(config)
    vocab = shots = None
    if gen.template == STRUCTURED_FEW_SHOT:
        vocab = load_vocab(config.paths.vocab)
        shots = load_shots(config.paths.shots)
    client = build_client(config, renderer)

    with tqdm(total=len(queries), desc="Generating", unit="query", disable=None) as progress:
        outcomes = generate_batch(
            queries,
            index,
            corpus,
            gen,
            client,
            max_in_flight=config.llm.max_in_flight,
            renderer=renderer,
            vocab=vocab,
            shots=shots,
            on_done=lambda _: progress.update(1),
        )
    if hasattr(client, "close"):
        client.close()

    out_dir = Path(config.paths.output_dir)
    rows = [_outcome_row(o) for o in outcomes]
    impressions_path = write_jsonl(out_dir / "impressions.jsonl", rows)
    failures = {str(o.query_id): o.error for o in outcomes if not o.ok}
    manifest = build_manifest(
        "generate",
        config,
        renderer.templates,
        provenance={str(o.query_id): o.impression.provenance for o in outcomes if o.ok},
        failures=failures,
    )
    manifest_path = write_json(out_dir / "manifest.json", manifest)

    print_section_header("GENERATION")
    print_info_box(
        {
            "Queries:": len(outcomes),
            "Succeeded:": len(outcomes) - len(failures),
            "Failed:": len(failures),
            "K / mode / template:": f"{gen.k} / {gen.mode} / {gen.template}",
            "LLM calls:": sum(o.impression.llm_call_count for o in outcomes if o.ok),
            "Impressions file:": str(impressions_path),
            "Manifest:": str(manifest_path),
        },
        separators=[3, 5],
    )
    if failures:
        message = f"  {len(failures)} queries failed: {sorted(failures)}"
        print(colored(message, "red", attrs=["bold"]))
        return EXIT_PARTIAL
    return EXIT_OK


# evaluation


def _read_jsonl(path: Path) -> List[Dict]:
    rows = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}:{line_no}: invalid JSON: {e}") from e
    return rows


def _row_id(row: Dict, path: Path) -> str:
    for key in ("query_id", "record_id", "id"):
        if key in row:
            return str(row[key])
    raise ConfigError(f"{path}: row without query_id/record_id: {row}")


def load_texts(path: Path) -> Dict[str, str]:
    """Impression texts keyed by id; rows without text (failed queries) are skipped."""
    texts = {}
    for row in _read_jsonl(path):
        text = row.get("impression", row.get("text"))
        if text is None:
            continue
        texts[_row_id(row, path)] = text
    return texts


def load_contexts(path: Path) -> Dict[str, List[str]]:
    contexts = {}
    for row in _read_jsonl(path):
        if "context" in row:
            context = row["context"]
            contexts[_row_id(row, path)] = [context] if isinstance(context, str) else list(context)
    return contexts


def build_report_embedder(config: RunConfig, texts_by_role: Dict[str, Dict[str, str]]):
    sidecars = config.evaluation.sidecars
    roles = {
        "pred": "pred_report_embeddings",
        "ref": "ref_report_embeddings",
        "context": "context_report_embeddings",
    }
    present = {role for role, key in roles.items() if key in sidecars}
    if not present:
        return HashedBagOfWordsEmbedder(config.evaluation.report_dim)
    needed = {role for role in roles if role in texts_by_role}
    if needed - present:
        raise ConfigError(f"report embedding sidecars missing for: {sorted(needed - present)}")
    embedder = SidecarReportEmbedder()
    for role in sorted(needed):
        embedder.add(texts_by_role[role], sidecars[roles[role]])
    return embedder


def _paired_sidecar(config: RunConfig, pred_key: str, ref_key: str, cls, texts_by_role, default):
    sidecars = config.evaluation.sidecars
    if pred_key not in sidecars and ref_key not in sidecars:
        return default()
    if pred_key not in sidecars or ref_key not in sidecars:
        raise ConfigError(f"sidecars {pred_key} and {ref_key} must be given together")
    component = cls()
    component.add(texts_by_role["pred"], sidecars[pred_key])
    component.add(texts_by_role["ref"], sidecars[ref_key])
    return component


def cmd_evaluate(args, config: RunConfig) -> int:
    config = config.with_overrides("evaluation", threshold=args.threshold)
    config = config.with_overrides("paths", output_dir=args.out_dir)
    config.validate()
    predictions_path = _require_file(args.predictions, "predictions file")
    predictions = load_texts(predictions_path)
    references = load_texts(_require_file(args.references, "references file"))
    contexts = None
    if args.contexts:
        contexts = load_contexts(_require_file(args.contexts, "contexts file"))

    texts_by_role = {"pred": predictions, "ref": references}
    if contexts is not None:
        texts_by_role["context"] = {rid: join_context(c) for rid, c in contexts.items()}

    evaluation = config.evaluation
    token_embedder = _paired_sidecar(
        config,
        "pred_token_embeddings",
        "ref_token_embeddings",
        SidecarTokenEmbedder,
        texts_by_role,
        lambda: HashedTokenEmbedder(evaluation.token_dim, seed=config.seed),
    )
    extractor = _paired_sidecar(
        config,
        "pred_entities",
        "ref_entities",
        SidecarEntityExtractor,
        texts_by_role,
        lambda: VocabEntityExtractor(load_vocab(config.paths.vocab)),
    )
    report_embedder = build_report_embedder(config, texts_by_role)

    run = evaluate_run(
        predictions,
        references,
        contexts,
        token_embedder,
        report_embedder,
        extractor,
        threshold=evaluation.threshold,
        workers=evaluation.workers,
    )

    out_dir = Path(config.paths.output_dir)
    run.write_json(out_dir / "metrics.json")
    csv_path = export_metrics(run, str(out_dir))

    print_section_header("EVALUATION")
    means = run.means
    print_table(
        ["Records", "BERTScore P", "BERTScore R", "BERTScore F1", "S_emb", "Entity F1"],
        [
            [
                len(run.records),
                f"{means.bertscore_precision:.4f}",
                f"{means.bertscore_recall:.4f}",
                f"{means.bertscore_f1:.4f}",
                f"{means.s_emb:.4f}",
                f"{means.entity_f1:.4f}",
            ]
        ],
    )
    if run.hallucination is not None:
        _print_hallucination(run.hallucination)
    print(f"\n  Metrics written to {out_dir / 'metrics.json'} and {csv_path}")
    return EXIT_OK


def _print_hallucination(report) -> None:
    print_section_header("GROUNDING (S_emb vs retrieved context)")
    print_info_box(
        {
            "Records:": report.count,
            "Mean:": f"{report.mean:.4f}",
            "Min / max:": f"{report.minimum:.4f} / {report.maximum:.4f}",
            f"Above {report.threshold:.2f}:": f"{report.fraction_above:.1%}",
        }
    )
    print_table(
        ["Least grounded record", "S_emb"],
        [[rid, score_color(score, report.threshold)] for rid, score in report.lowest(5)],
    )


def cmd_hallucinate(args, config: RunConfig) -> int:
    config = config.with_overrides("evaluation", threshold=args.threshold)
    config = config.with_overrides("paths", output_dir=args.out_dir)
    config.validate()
    path = _require_file(args.predictions, "impressions file")
    predictions = load_texts(path)
    contexts = load_contexts(path)
    ids = sort_ids(set(predictions) & set(contexts))
    if not ids:
        raise ConfigError(f"{path} has no records with both an impression and a context")

    texts_by_role = {
        "pred": {rid: predictions[rid] for rid in ids},
        "context": {rid: join_context(contexts[rid]) for rid in ids},
    }
    embedder = build_report_embedder(config, texts_by_role)
    report = hallucination_report(
        [(predictions[rid], contexts[rid]) for rid in ids],
        embedder,
        threshold=config.evaluation.threshold,
        record_ids=ids,
    )

    out_dir = Path(config.paths.output_dir)
    write_json(out_dir / "hallucination.json", report.to_dict())
    csv_path = export_hallucination(report, str(out_dir))
    chart_path = plot_score_distribution(
        list(report.scores.values()), report.threshold, out_dir / "hallucination.png"
    )

    _print_hallucination(report)
    print_score_histogram(list(report.scores.values()), report.threshold)
    print(f"\n  Report written to {out_dir / 'hallucination.json'}, {csv_path} and {chart_path}")
    return EXIT_OK


# experiment grid


def _load_sweep_indexes(args, config: RunConfig) -> Dict[str, Tuple]:
    corpora = args.corpus or [config.paths.corpus]
    indexes = args.index or [config.paths.index]
    if len(corpora) != len(indexes):
        raise ConfigError("give one --index for every --corpus")

    by_level = {}
    for corpus_path, index_path in zip(corpora, indexes):
        corpus = load_corpus(_require_file(corpus_path, "corpus"))
        if corpus.level in by_level:
            raise ConfigError(f"more than one {corpus.level}-level corpus given")
        index = load_index(_require_file(index_path, "index"), corpus)
        by_level[corpus.level] = (corpus, index)
    return by_level


def cmd_sweep(args, config: RunConfig) -> int:
    config = config.with_overrides(
        "generation",
        mode=args.mode,
        model_name=args.model,
        token_budget=args.token_budget,
        template=args.template,
        refine_enabled=True if args.refine else None,
    )
    config = config.with_overrides("llm", client=args.client, base_url=args.base_url)
    config = config.with_overrides("evaluation", threshold=args.threshold)
    config = config.with_overrides("sweep", k_values=args.k, temperatures=args.temperature)
    config = config.with_overrides("paths", queries=args.queries, output_dir=args.out_dir)
    config.validate(required=("queries",))
    gen = config.generation

    indexes = _load_sweep_indexes(args, config)
    queries = _load_queries(config.paths.queries)
    references = load_texts(_require_file(args.references, "references file"))
    renderer = _renderer(config)
    vocab = load_vocab(config.paths.vocab)
    shots = load_shots(config.paths.shots) if gen.template == STRUCTURED_FEW_SHOT else None
    client = build_client(config, renderer)
    out_dir = Path(config.paths.output_dir)

    def save_point(result: SweepResult) -> None:
        point_dir = out_dir / result.point.label
        write_jsonl(point_dir / "impressions.jsonl", [_outcome_row(o) for o in result.outcomes])
        progress.update(1)

    points = len(indexes) * len(set(config.sweep.k_values)) * len(set(config.sweep.temperatures))
    with tqdm(total=points, desc="Sweeping", unit="point", disable=None) as progress:
        results = run_sweep(
            indexes,
            queries,
            references,
            gen,
            client,
            HashedTokenEmbedder(config.evaluation.token_dim, seed=config.seed),
            HashedBagOfWordsEmbedder(config.evaluation.report_dim),
            VocabEntityExtractor(vocab),
            k_values=config.sweep.k_values,
            temperatures=config.sweep.temperatures,
            threshold=config.evaluation.threshold,
            max_in_flight=config.llm.max_in_flight,
            renderer=renderer,
            vocab=vocab,
            shots=shots,
            on_point=save_point,
        )
    if hasattr(client, "close"):
        client.close()

    rows = [sweep_row(r) for r in results]
    csv_path = export_sweep(rows, str(out_dir))
    failures = {
        f"{r.point.label}/{qid}": error for r in results for qid, error in r.failures.items()
    }
    manifest = build_manifest(
        "sweep",
        config,
        renderer.templates,
        failures=failures,
        extra={"points": [r.point.label for r in results]},
    )
    manifest_path = write_json(out_dir / "manifest.json", manifest)

    print_section_header("SWEEP")
    print_table(
        ["Corpus", "K", "Temp", "Failed", "BERTScore F1", "S_emb", "Entity F1", "Grounded"],
        [
            [
                row["corpus_level"],
                row["k"],
                f"{row['temperature']:g}",
                row["failed"],
                *(
                    f"{row[name]:.4f}" if name in row else "-"
                    for name in ("bertscore_f1", "s_emb", "entity_f1")
                ),
                f"{row['grounding_above_threshold']:.1%}" if "grounding_mean" in row else "-",
            ]
            for row in rows
        ],
    )
    print(f"\n  Sweep written to {csv_path} and {manifest_path}")
    if failures:
        print(colored(f"  {len(failures)} query runs failed", "red", attrs=["bold"]))
        return EXIT_PARTIAL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rag-impressions",
        description="Retrieval-augmented radiology impression generation and evaluation",
    )
    parser.add_argument(
        "--config", help="YAML/JSON config file (default: ./config.yaml if present)"
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="Build a report- or sentence-level corpus")
    p.add_argument("reports", help="Reports file (JSON lines or study_id<TAB>text)")
    p.add_argument("--level", choices=[REPORT, SENTENCE], default=SENTENCE)
    p.add_argument("--out", help="Corpus JSONL output path")
    p.add_argument("--keep-duplicates", action="store_true", help="Skip deduplication")
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser("build-index", help="Align embeddings with a corpus and save the index")
    p.add_argument("--corpus")
    p.add_argument("--embeddings")
    p.add_argument("--out", help="Index output path (EMB1)")
    p.add_argument(
        "--no-normalize", action="store_true", help="Keep raw vectors (dot product scoring)"
    )
    p.set_defaults(handler=cmd_build_index)

    p = sub.add_parser("retrieve", help="Top-K records for each query embedding")
    p.add_argument("--corpus")
    p.add_argument("--index")
    p.add_argument("--queries")
    p.add_argument("--k", type=int)
    p.add_argument("--out", help="JSONL output path")
    p.set_defaults(handler=cmd_retrieve)

    p = sub.add_parser("generate", help="Generate impressions for query embeddings")
    p.add_argument("--corpus")
    p.add_argument("--index")
    p.add_argument("--queries")
    p.add_argument("--k", type=int)
    p.add_argument("--mode", choices=["completion", "chat"])
    p.add_argument("--model")
    p.add_argument("--temperature", type=float)
    p.add_argument("--token-budget", type=int)
    p.add_argument("--maxlen", type=int)
    p.add_argument("--template", choices=["zero_shot", STRUCTURED_FEW_SHOT])
    p.add_argument(
        "--refine",
        action="store_true",
        help="Refine over records when the prompt exceeds the budget",
    )
    p.add_argument("--client", choices=sorted([HTTP_CLIENT, *STUB_CLIENTS]))
    p.add_argument("--base-url")
    p.add_argument("--out-dir")
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("evaluate", help="Score predictions against references")
    p.add_argument("--predictions", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--contexts", help="JSONL with a context list per id (impressions.jsonl works)")
    p.add_argument("--threshold", type=float)
    p.add_argument("--out-dir")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("hallucinate", help="Similarity of generations to their retrieved context")
    p.add_argument("--predictions", required=True, help="impressions.jsonl from generate")
    p.add_argument("--threshold", type=float)
    p.add_argument("--out-dir")
    p.set_defaults(handler=cmd_hallucinate)

    p = sub.add_parser(
        "sweep", help="Generate and score over a grid of corpus level, K and temperature"
    )
    p.add_argument("--corpus", action="append", help="Corpus JSONL; repeat for each level")
    p.add_argument("--index", action="append", help="Index for the matching --corpus")
    p.add_argument("--queries")
    p.add_argument("--references", required=True)
    p.add_argument("--k", type=int, nargs="+", help="Retrieval depths (default 1 2 3)")
    p.add_argument("--temperature", type=float, nargs="+", help="Temperatures (default 0)")
    p.add_argument("--mode", choices=["completion", "chat"])
    p.add_argument("--model")
    p.add_argument("--token-budget", type=int)
    p.add_argument("--template", choices=["zero_shot", STRUCTURED_FEW_SHOT])
    p.add_argument("--refine", action="store_true")
    p.add_argument("--client", choices=sorted([HTTP_CLIENT, *STUB_CLIENTS]))
    p.add_argument("--base-url")
    p.add_argument("--threshold", type=float)
    p.add_argument("--out-dir")
    p.set_defaults(handler=cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv(find_dotenv(usecwd=True))
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    try:
        config = get_run_config(load_config(args.config))
        return args.handler(args, config)
    except ConfigError as e:
        print(colored(f"Configuration error: {e}", "red"), file=sys.stderr)
        return EXIT_CONFIG
    except RagError as e:
        print(colored(f"{type(e).__name__}: {e}", "red"), file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(colored(f"I/O error: {e}", "red"), file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
