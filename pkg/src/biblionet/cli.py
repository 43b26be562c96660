"""Command-line pipeline: parse, stats, network, keywords, dedup-authors.

Outputs use fixed filenames under the chosen output directory so that
downstream plotting scripts stay stable; identical inputs, configuration
and seed produce byte-identical output trees.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import dedup, graph_stats, graphs, keywords, metrics
from .errors import DegenerateDataError, FormatError
from .normalize import NormalizationRules
from .wos_ingest import merge_corpora, parse_file, read_corpus_jsonl, write_corpus_jsonl

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_CONFIG_ERROR = 2
EXIT_DEGENERATE = 3

OUT_DIR_ENV = "BIBLIONET_OUT"

# exact analytics are impractical above this size; sampled estimates
# activate automatically and the sample size lands in the report meta
AUTO_SAMPLE_THRESHOLD = 20_000
AUTO_SAMPLE_SIZE = 1_000

_CONFIG_KEYS = {"out", "format", "top_k", "fuzzy_threshold", "seed", "sample", "stopwords", "rules"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    out: Path = Path("out")
    format: str = "auto"
    top_k: int = 10
    fuzzy_threshold: float = dedup.DEFAULT_THRESHOLD
    seed: int = 0
    sample: int | None = None
    stopwords: str | None = None
    rules: str | None = None

    def rule_tables(self) -> NormalizationRules | None:
        return NormalizationRules.from_file(self.rules) if self.rules else None


def load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key, value in data.items():
            setattr(config, key, Path(value) if key == "out" else value)
    env_out = os.environ.get(OUT_DIR_ENV)
    if env_out:
        config.out = Path(env_out)
    if getattr(args, "out", None):
        config.out = Path(args.out)
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "top_k", None) is not None:
        config.top_k = args.top_k
    if getattr(args, "sample", None) is not None:
        config.sample = args.sample
    if getattr(args, "format", None):
        config.format = args.format
    if getattr(args, "threshold", None) is not None:
        config.fuzzy_threshold = args.threshold
    if getattr(args, "stopwords", None):
        config.stopwords = args.stopwords
    if getattr(args, "rules", None):
        config.rules = args.rules
    if config.top_k < 1:
        raise ConfigError(f"top_k must be >= 1, got {config.top_k}")
    if not 0 < config.fuzzy_threshold <= 1:
        raise ConfigError(f"fuzzy_threshold must lie in (0, 1], got {config.fuzzy_threshold}")
    if config.format not in ("auto", "tagged", "tab_delimited"):
        raise ConfigError(f"unknown format {config.format!r}")
    return config


# ---------------------------------------------------------------------------
# deterministic emission helpers

def _sig6(x: float) -> float:
    return float(f"{x:.6g}")


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2, ensure_ascii=False)
        fh.write("\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_manifest(outdir: Path, command: str, config: RunConfig, **extra) -> None:
    payload = {
        "command": command,
        "seed": config.seed,
        "sample": config.sample,
        "top_k": config.top_k,
        "fuzzy_threshold": config.fuzzy_threshold,
        "format": config.format,
    }
    payload.update(extra)
    _write_json(outdir / "manifest.json", payload)


def _counts_table(outdir: Path, name: str, counts, k: int) -> None:
    ranked = metrics.top_k(dict(counts), k) if counts else []
    _write_csv(outdir / f"{name}.csv", ["value", "count"], ranked)
    _write_json(outdir / f"{name}.json", [{"value": value, "count": count} for value, count in ranked])


# ---------------------------------------------------------------------------
# commands

def cmd_parse(args: argparse.Namespace, config: RunConfig) -> int:
    rules = config.rule_tables()
    parts = []
    parsed = 0
    skipped = 0
    warnings: list[str] = []
    for path in args.inputs:
        result = parse_file(path, config.format)
        parts.append(result.records)
        parsed += len(result.records)
        skipped += result.skipped
        warnings.extend(f"{path}: {message}" for message in result.warnings)
    corpus = merge_corpora(parts, rules)
    duplicates_removed = parsed - len(corpus)

    config.out.mkdir(parents=True, exist_ok=True)
    write_corpus_jsonl(corpus, config.out / "corpus.jsonl")
    summary = {
        "files": len(args.inputs),
        "records_parsed": parsed,
        "records_skipped": skipped,
        "duplicates_removed": duplicates_removed,
        "corpus_size": len(corpus),
        "dated_view_size": len(corpus.dated_view),
        "warnings": warnings,
    }
    _write_json(config.out / "parse_summary.json", summary)
    _write_manifest(config.out, "parse", config)
    print(
        f"parsed {parsed} records ({skipped} skipped, {duplicates_removed} duplicates removed); "
        f"corpus {len(corpus)}, dated view {len(corpus.dated_view)}"
    )
    return EXIT_OK


def cmd_stats(args: argparse.Namespace, config: RunConfig) -> int:
    rules = config.rule_tables()
    corpus = read_corpus_jsonl(args.corpus, rules)
    outdir = config.out / "stats"
    k = config.top_k

    table = "field counts"
    try:
        for name, field in (
            ("publication_types", "publication_type"),
            ("document_types", "document_type"),
            ("languages", "language"),
            ("sources", "source"),
            ("countries", "country"),
            ("institutions", "institution"),
            ("research_areas", "research_area"),
            ("author_keywords", "keyword"),
        ):
            table = name
            _counts_table(outdir, name, metrics.field_counts(corpus, field, rules), k)

        table = "page_stats"
        pages = [record.page_count for record in corpus.records if record.page_count is not None]
        _write_json(outdir / "page_stats.json", _stats_payload(pages))

        table = "authors_per_paper"
        _write_json(outdir / "authors_per_paper.json", _stats_payload(metrics.authors_per_paper(corpus)))

        table = "most_cited"
        cited = metrics.most_cited(corpus, k)
        _write_csv(
            outdir / "most_cited.csv",
            ["title", "authors", "times_cited", "research_areas"],
            [(title, authors, cited_count, "; ".join(areas)) for title, authors, cited_count, areas in cited],
        )
        _write_json(outdir / "most_cited.json", [
            {"title": title, "authors": authors, "times_cited": cited_count, "research_areas": list(areas)}
            for title, authors, cited_count, areas in cited
        ])

        table = "author_table"
        rows = metrics.author_table(corpus, k)
        _write_csv(
            outdir / "author_table.csv",
            ["name", "total_cited", "papers", "cited_per_paper", "h_index", "g_index"],
            [(r.name, r.total_cited, r.papers, f"{r.cited_per_paper:.6g}", r.h, r.g) for r in rows],
        )
        _write_json(outdir / "author_table.json", {
            "note": "papers without a citation count contribute 0 to their authors' vectors",
            "rows": [
                {
                    "name": r.name, "total_cited": r.total_cited, "papers": r.papers,
                    "cited_per_paper": _sig6(r.cited_per_paper), "h_index": r.h, "g_index": r.g,
                }
                for r in rows
            ],
        })

        for name, group_by in (
            ("monthly_all", "all"),
            ("monthly_by_country", "country"),
            ("monthly_by_source", "source"),
            ("monthly_by_research_area", "research_area"),
        ):
            table = name
            if group_by == "all":
                keys = None
            else:
                field = {"country": "country", "source": "source", "research_area": "research_area"}[group_by]
                keys = [key for key, _ in metrics.top_k(dict(metrics.field_counts(corpus, field, rules)), k)]
            series = metrics.monthly_counts(corpus, group_by, keys, rules)
            _write_csv(
                outdir / f"{name}.csv",
                ["key", "month", "count"],
                [(s.key, str(ym), count) for s in series for ym, count in s.points.items()],
            )
            _write_json(outdir / f"{name}.json", [
                {"key": s.key, "points": {str(ym): count for ym, count in s.points.items()}}
                for s in series
            ])

        table = "collaboration"
        _write_json(outdir / "collaboration.json", {
            "degree_of_collaboration": _sig6(metrics.degree_of_collaboration(corpus)),
            "international_collaboration_ratio": _sig6(metrics.international_collab_ratio(corpus, rules)),
            "multidisciplinary_ratio": _sig6(metrics.multidisciplinary_ratio(corpus)),
        })

        table = "correlation_matrix"
        matrix = metrics.correlation_matrix(corpus, rules)
        _write_csv(
            outdir / "correlation_matrix.csv",
            ["variable", *matrix.variables],
            [
                (variable, *[f"{value:.6g}" for value in row])
                for variable, row in zip(matrix.variables, matrix.entries)
            ],
        )
        _write_json(outdir / "correlation_matrix.json", {
            "variables": list(matrix.variables),
            "entries": [[_sig6(value) for value in row] for row in matrix.entries],
        })
    except DegenerateDataError as exc:
        print(f"stats: {table}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE

    _write_manifest(config.out / "stats", "stats", config)
    print(f"stats written to {outdir}")
    return EXIT_OK


def _stats_payload(values) -> dict:
    values = list(values)
    stats = metrics.descriptive_stats(values)
    return {
        "min": _sig6(stats.minimum),
        "max": _sig6(stats.maximum),
        "mean": _sig6(stats.mean),
        "median": _sig6(stats.median),
        "mode": _sig6(stats.mode),
        "n": len(values),
    }


_GRAPH_BUILDERS = {
    "coauthor": lambda corpus, rules: graphs.build_coauthorship(corpus),
    "country": lambda corpus, rules: graphs.build_country_graph(corpus, rules),
    "institution": lambda corpus, rules: graphs.build_institution_graph(corpus),
    "research-area": lambda corpus, rules: graphs.build_cooccurrence(corpus, "research_area"),
    "keyword": lambda corpus, rules: graphs.build_cooccurrence(corpus, "keyword"),
}


def cmd_network(args: argparse.Namespace, config: RunConfig) -> int:
    rules = config.rule_tables()
    corpus = read_corpus_jsonl(args.corpus, rules)
    graph = _GRAPH_BUILDERS[args.kind](corpus, rules)
    outdir = config.out / f"network_{args.kind.replace('-', '_')}"
    outdir.mkdir(parents=True, exist_ok=True)

    facts = graphs.graph_facts(graph)
    _write_json(outdir / "facts.json", {
        "kind": graph.kind.value,
        "node_count": facts.node_count,
        "edge_count": facts.edge_count,
        "self_loop_count": facts.self_loop_count,
        "isolated_count": facts.isolated_count,
        "component_count": facts.component_count,
        "component_sizes_top10": list(facts.component_sizes[:10]),
    })

    graphs.write_graphml(graph, outdir / "graph.graphml")
    graphs.write_dot(graph, outdir / "graph.dot")
    graphs.write_edge_csv(graph, outdir / "edges.csv")
    _write_csv(
        outdir / "top_edges.csv",
        ["label_a", "label_b", "weight"],
        graphs.top_weighted_edges(graph, config.top_k) if graph.edges else [],
    )
    _write_csv(
        outdir / "degree_histogram.csv",
        ["degree", "count"],
        sorted(graphs.degree_counts(graph).items()),
    )

    component_size = facts.component_sizes[0] if facts.component_sizes else 0
    sample = config.sample
    auto_sampled = sample is None and component_size > AUTO_SAMPLE_THRESHOLD
    if auto_sampled:
        sample = AUTO_SAMPLE_SIZE
    meta = {"seed": config.seed, "sample": sample, "auto_sampled": auto_sampled}

    try:
        table = graph_stats.centrality_table(
            graph, betweenness_sample=sample, seed=config.seed,
            scope="whole" if args.whole_graph else "largest",
            literal_closeness=args.literal_closeness,
        )
        _write_csv(
            outdir / "centrality.csv",
            ["node", "degree", "betweenness", "closeness"],
            [
                (
                    row.node, f"{row.degree:.6f}", f"{row.betweenness:.6f}",
                    "" if row.closeness is None else f"{row.closeness:.6f}",
                )
                for row in table.rows
            ],
        )
        _write_json(outdir / "centrality.json", {
            "meta": meta,
            "rows": [
                {
                    "node": row.node,
                    "degree": _sig6(row.degree),
                    "betweenness": _sig6(row.betweenness),
                    "closeness": None if row.closeness is None else _sig6(row.closeness),
                }
                for row in table.rows
            ],
        })
    except DegenerateDataError as exc:
        _write_csv(outdir / "centrality.csv", ["node", "degree", "betweenness", "closeness"], [])
        _write_json(outdir / "centrality.json", {"meta": meta, "skipped": str(exc)})

    try:
        report = graph_stats.small_world_check(graph, sample_sources=sample, seed=config.seed)
        _write_json(outdir / "smallworld.json", {
            "meta": meta,
            "avg_shortest_path": _sig6(report.avg_shortest_path),
            "ln_node_count": _sig6(report.ln_node_count),
            "avg_clustering": _sig6(report.avg_clustering),
            "sampled": report.sampled,
            "verdict": report.verdict,
        })
    except DegenerateDataError as exc:
        _write_json(outdir / "smallworld.json", {"meta": meta, "skipped": str(exc)})

    degrees = sorted(len(nbrs) for nbrs in graph.adjacency().values() if nbrs)
    try:
        fit = graph_stats.fit_power_law(degrees)
        digest = hashlib.sha256(",".join(map(str, degrees)).encode()).hexdigest()
        _write_json(outdir / "powerlaw.json", {
            "meta": meta,
            "gamma": _sig6(fit.gamma),
            "xmin": fit.xmin,
            "ks": _sig6(fit.ks_statistic),
            "n_tail": fit.n_tail,
            "sampled_degrees_hash": digest,
        })
    except DegenerateDataError as exc:
        _write_json(outdir / "powerlaw.json", {"meta": meta, "skipped": str(exc)})

    series = graph_stats.per_component_assortativity(graph)
    _write_csv(
        outdir / "assortativity.csv",
        ["component_size", "assortativity", "defined"],
        [
            (res.component_size, "" if res.r is None else f"{res.r:.6f}", str(res.defined).lower())
            for res in series
        ],
    )
    _write_json(outdir / "assortativity.json", {
        "meta": meta,
        "components": [
            {"component_size": res.component_size, "r": None if res.r is None else _sig6(res.r)}
            for res in series
        ],
    })

    _write_manifest(outdir, "network", config, kind=args.kind)
    print(f"network analytics for kind={args.kind} written to {outdir}")
    return EXIT_OK


def cmd_keywords(args: argparse.Namespace, config: RunConfig) -> int:
    corpus = read_corpus_jsonl(args.corpus, config.rule_tables())
    stopword_set = (
        keywords.StopwordSet.from_file(config.stopwords) if config.stopwords else keywords.StopwordSet()
    )
    ranked = keywords.keyword_frequencies(corpus, stopword_set, args.n)
    outdir = config.out / "keywords"
    _write_csv(outdir / "keyword_frequencies.csv", ["token", "count"], ranked)
    _write_json(outdir / "keyword_frequencies.json", [
        {"token": token, "count": count} for token, count in ranked
    ])
    _write_manifest(outdir, "keywords", config, n=args.n)
    print(f"{len(ranked)} keyword frequencies written to {outdir}")
    return EXIT_OK


def cmd_dedup_authors(args: argparse.Namespace, config: RunConfig) -> int:
    corpus = read_corpus_jsonl(args.corpus, config.rule_tables())
    names = sorted({name for record in corpus.records for name in record.distinct_authors()})
    if config.sample is not None:
        names = dedup.sample_names(names, config.sample, config.seed)
    pairs = dedup.find_suspect_pairs(names, config.fuzzy_threshold)
    outdir = config.out / "dedup"
    outdir.mkdir(parents=True, exist_ok=True)
    dedup.write_suspect_pairs_csv(pairs, outdir / "suspect_pairs.csv")
    _write_manifest(outdir, "dedup-authors", config, names_compared=len(names))
    print(f"{len(pairs)} suspect pairs (threshold {config.fuzzy_threshold}) written to {outdir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", help=f"output directory (env {OUT_DIR_ENV} overrides config)")
    common.add_argument("--seed", type=int, help="seed for all sampled analytics (default 0)")
    common.add_argument("--top-k", dest="top_k", type=int, help="rows per ranking table (default 10)")
    common.add_argument("--sample", type=int, help="source sample size for large-graph analytics")
    common.add_argument("--rules", help="JSON file overriding country/month rule tables")

    parser = argparse.ArgumentParser(prog="biblionet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_parse = sub.add_parser("parse", parents=[common], help="parse export files into a corpus")
    p_parse.add_argument("inputs", nargs="+", help="export files (.txt)")
    p_parse.add_argument("--format", choices=["auto", "tagged", "tab_delimited"], help="export dialect")
    p_parse.set_defaults(func=cmd_parse)

    p_stats = sub.add_parser("stats", parents=[common], help="descriptive tables and ratios")
    p_stats.add_argument("corpus", help="corpus.jsonl produced by parse")
    p_stats.set_defaults(func=cmd_stats)

    p_network = sub.add_parser("network", parents=[common], help="build and analyze one graph")
    p_network.add_argument("corpus", help="corpus.jsonl produced by parse")
    p_network.add_argument("--kind", required=True, choices=sorted(_GRAPH_BUILDERS))
    p_network.add_argument("--whole-graph", action="store_true", help="centrality over the whole graph instead of the largest component")
    p_network.add_argument("--literal-closeness", action="store_true", help="closeness numerator N instead of N-1")
    p_network.set_defaults(func=cmd_network)

    p_keywords = sub.add_parser("keywords", parents=[common], help="title+abstract keyword frequencies")
    p_keywords.add_argument("corpus", help="corpus.jsonl produced by parse")
    p_keywords.add_argument("--n", type=int, default=100, help="number of keywords (default 100)")
    p_keywords.add_argument("--stopwords", help="custom stopword list, one word per line")
    p_keywords.set_defaults(func=cmd_keywords)

    p_dedup = sub.add_parser("dedup-authors", parents=[common], help="report near-duplicate author names")
    p_dedup.add_argument("corpus", help="corpus.jsonl produced by parse")
    p_dedup.add_argument("--threshold", type=float, help="similarity threshold (default 0.8)")
    p_dedup.set_defaults(func=cmd_dedup_authors)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    try:
        return args.func(args, config)
    except (FormatError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except DegenerateDataError as exc:
        print(f"analysis error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
