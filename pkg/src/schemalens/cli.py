"""Command-line front end: metrics, evaluate, validate, capability, graph.

Exit codes are a stable contract: 0 success, 1 at least one instance failed
validation, 2 usage/corpus/config errors. The corpus directory defaults to
the bundled data tree; override with --corpus or the SCHEMALENS_CORPUS
environment variable (the directory must hold a manifest.json).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import report
from .corpus import (
    CorpusManifest,
    capability_grid,
    capability_matrix,
    capability_records,
    default_criteria_path,
    default_weights_path,
    load_manifest,
)
from .errors import SchemaLensError
from .evaluation import load_criteria, load_weight_cases, run_comparison
from .graph import to_dot
from .loader import resolve
from .metrics import DEFAULT_COEFFICIENTS, WidthCoefficients
from .validator import validate

ENV_CORPUS = "SCHEMALENS_CORPUS"


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--corpus",
        help=f"directory holding a manifest.json (default: bundled data, or ${ENV_CORPUS})",
    )
    parser.add_argument(
        "--format",
        choices=["table", "csv", "records"],
        default="table",
        help="output format (default: table)",
    )


def _add_schema_flag(parser: argparse.ArgumentParser, default_all: bool):
    parser.add_argument(
        "--schema",
        action="append",
        help="schema set name from the manifest; repeatable"
        + (" (default: all)" if default_all else " (default: lei)"),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schemalens",
        description="Structural metrics, weighted evaluation and validation "
        "for livestock event schema corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="compute the structural metric table")
    _add_common(p)
    _add_schema_flag(p, default_all=True)
    p.add_argument("--collection", help="override the level-0 collection name")
    p.add_argument("--type", dest="type_filter", help="only rows targeting this type name")
    p.add_argument("--coefficients", help="docWidth coefficients a,b,c,d (default 1,2,1,3)")
    p.add_argument("--criteria", help="criteria config file (default: bundled)")

    p = sub.add_parser("evaluate", help="score schemas under the weight cases")
    _add_common(p)
    _add_schema_flag(p, default_all=True)
    p.add_argument("--collection", help="override the level-0 collection name")
    p.add_argument("--coefficients", help="docWidth coefficients a,b,c,d (default 1,2,1,3)")
    p.add_argument("--criteria", help="criteria config file (default: bundled)")
    p.add_argument("--weights", help="weight cases config file (default: bundled)")
    p.add_argument("--breakdown", action="store_true", help="also print per-criterion scores")
    p.add_argument("--chart-data", action="store_true", help="emit case->schema->score JSON")

    p = sub.add_parser("validate", help="validate instance files against the envelope schema")
    _add_common(p)
    _add_schema_flag(p, default_all=False)
    p.add_argument("files", nargs="+", help="instance files or directories of instances")

    p = sub.add_parser("capability", help="event-capture capability matrix")
    _add_common(p)

    p = sub.add_parser("graph", help="export a schema's metric graph as DOT")
    _add_common(p)
    _add_schema_flag(p, default_all=False)
    p.add_argument("--collection", help="override the level-0 collection name")
    p.add_argument("--graph-dot", help="write DOT here instead of stdout")
    return parser


def _manifest(args) -> CorpusManifest:
    root = args.corpus or os.environ.get(ENV_CORPUS)
    return load_manifest(root)


def _schema_names(args, manifest: CorpusManifest, default_all: bool) -> list[str]:
    if args.schema:
        names = []
        for chunk in args.schema:
            names.extend(n.strip() for n in chunk.split(",") if n.strip())
        return names
    return manifest.schema_names() if default_all else ["lei"]


def _coefficients(args) -> WidthCoefficients:
    if getattr(args, "coefficients", None):
        return WidthCoefficients.parse(args.coefficients)
    return DEFAULT_COEFFICIENTS


def _criteria(args, manifest: CorpusManifest):
    path = getattr(args, "criteria", None)
    if path is None:
        bundled = manifest.root / "configs" / "criteria.json"
        path = bundled if bundled.is_file() else default_criteria_path()
    criteria, default_collection = load_criteria(path)
    override = getattr(args, "collection", None)
    if override and default_collection and override != default_collection:
        criteria = [
            replace(
                c,
                type_name=override if c.type_name == default_collection else c.type_name,
                collection=override if c.collection == default_collection else c.collection,
            )
            for c in criteria
        ]
    return criteria


def _weight_cases(args, manifest: CorpusManifest):
    path = getattr(args, "weights", None)
    if path is None:
        bundled = manifest.root / "configs" / "weights.json"
        path = bundled if bundled.is_file() else default_weights_path()
    return load_weight_cases(path)


def cmd_metrics(args) -> int:
    manifest = _manifest(args)
    names = _schema_names(args, manifest, default_all=True)
    graphs = manifest.graphs(names, args.collection)
    criteria = _criteria(args, manifest)
    if args.type_filter:
        criteria = [c for c in criteria if c.type_name == args.type_filter]
    metric_report = report.build_metric_report(graphs, criteria, _coefficients(args))
    if args.format == "csv":
        sys.stdout.write(report.render_metric_csv(metric_report))
    elif args.format == "records":
        print(json.dumps(report.metric_report_records(metric_report), indent=2))
    else:
        sys.stdout.write(report.render_metric_table(metric_report))
    return 0


def cmd_evaluate(args) -> int:
    manifest = _manifest(args)
    names = _schema_names(args, manifest, default_all=True)
    graphs = manifest.graphs(names, args.collection)
    criteria = _criteria(args, manifest)
    cases = _weight_cases(args, manifest)
    result = run_comparison(graphs, criteria, cases, _coefficients(args))
    if args.chart_data:
        print(json.dumps(result.chart_data(), indent=2))
        return 0
    if args.format == "csv":
        sys.stdout.write(report.render_score_csv(result))
        if args.breakdown:
            sys.stdout.write(report.render_breakdown_csv(result))
    elif args.format == "records":
        payload = {"scores": report.score_records(result)}
        if args.breakdown:
            payload["breakdown"] = {
                schema: {str(cid): score for cid, score in result.normalized[schema].items()}
                for schema in result.schemas
            }
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(report.render_score_table(result))
        if args.breakdown:
            sys.stdout.write("\n" + report.render_breakdown_table(result))
    return 0


def _instance_paths(raw_paths: list[str]) -> list[Path]:
    paths: list[Path] = []
    for raw in raw_paths:
        path = Path(raw)
        if path.is_dir():
            paths.extend(sorted(path.rglob("*.json")))
        elif path.is_file():
            paths.append(path)
        else:
            raise SchemaLensError(f"no such file or directory: {raw}")
    if not paths:
        raise SchemaLensError("no instance files found")
    return paths


def cmd_validate(args) -> int:
    manifest = _manifest(args)
    name = _schema_names(args, manifest, default_all=False)[0]
    schema_set = manifest.schema_set(name)
    if schema_set.envelope is None:
        raise SchemaLensError(f"schema set {name!r} has no instance envelope to validate against")
    envelope = resolve(schema_set.corpus(), schema_set.envelope)

    paths = _instance_paths(args.files)
    records = []
    any_invalid = False
    for path in paths:
        try:
            instance = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaLensError(f"{path}: not valid JSON: {exc}") from exc
        outcome = validate(instance, envelope)
        any_invalid = any_invalid or not outcome.valid
        records.append(
            {
                "file": str(path),
                "valid": outcome.valid,
                "violations": [
                    {
                        "instancePath": v.instance_path,
                        "schemaPath": v.schema_path,
                        "keyword": v.keyword,
                        "message": v.message,
                    }
                    for v in outcome.violations
                ],
            }
        )
    if args.format == "records":
        print(json.dumps(records, indent=2))
    else:
        for record in records:
            status = "valid" if record["valid"] else "INVALID"
            print(f"{record['file']}: {status}")
            for violation in record["violations"]:
                print(f"  {violation['instancePath'] or '/'} [{violation['keyword']}] {violation['message']}")
    return 1 if any_invalid else 0


def cmd_capability(args) -> int:
    manifest = _manifest(args)
    verdicts = capability_matrix(manifest)
    if args.format == "records":
        print(json.dumps(capability_records(verdicts), indent=2))
        return 0
    header, rows = capability_grid(manifest, verdicts)
    if args.format == "csv":
        sys.stdout.write(report.grid_csv(header, rows))
    else:
        sys.stdout.write(report.render_grid(header, rows))
    return 0


def cmd_graph(args) -> int:
    manifest = _manifest(args)
    name = _schema_names(args, manifest, default_all=False)[0]
    graph = manifest.graph(name, args.collection)
    dot = to_dot(graph, title=manifest.schema_set(name).title)
    if args.graph_dot:
        Path(args.graph_dot).write_text(dot, encoding="utf-8")
    else:
        sys.stdout.write(dot)
    return 0


_COMMANDS = {
    "metrics": cmd_metrics,
    "evaluate": cmd_evaluate,
    "validate": cmd_validate,
    "capability": cmd_capability,
    "graph": cmd_graph,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SchemaLensError, OSError, ValueError) as exc:
        print(f"schemalens: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
