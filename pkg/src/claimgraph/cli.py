"""Command-line entry points.

Thin orchestration over the core package: ``decompose`` and ``audit`` run
the pipeline on files, ``eval-summeval`` drives the benchmark harness,
``export-graph`` dumps a stored session's graph document, and ``serve``
launches the HTTP service.

Exit codes are a stable contract: 0 success/consistent, 1 configuration
or input error, 2 provider error, 3 hallucinated verdict.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .decompose import DecomposeConfig, decompose
from .errors import (
    ClaimGraphError,
    ConfigError,
    DecodeError,
    InputError,
    JudgmentError,
    MetricError,
    ParseError,
    TransportError,
)
from .evalharness import (
    METHODS,
    load_summeval,
    run_method,
    sweep_threshold,
    write_report,
)
from .graph import LayoutConfig, graph_json_bytes, render_svg
from .pipeline import PipelineConfig, run_audit
from .providers import ProviderSet, StubOptions

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PROVIDER = 2
EXIT_HALLUCINATED = 3


def _read_text(path: str) -> str:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"file not found: {path}")
    return p.read_text(encoding="utf-8")


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path} must hold a flat JSON object")
    return doc


def _setting(args: argparse.Namespace, file_cfg: dict, name: str, default):
    """Flag > config file > default."""
    value = getattr(args, name.replace("-", "_"), None)
    if value is not None:
        return value
    if name in file_cfg:
        return file_cfg[name]
    return default


def _providers(file_cfg: dict) -> ProviderSet:
    stub_opts = StubOptions(
        latency_s=float(file_cfg.get("stub_latency", 0.0)),
        fail_extraction=bool(file_cfg.get("stub_fail_extraction", False)),
    )
    providers = ProviderSet.from_env(stub_options=stub_opts)
    cache_dir = file_cfg.get("cache_dir") or os.environ.get("AUDIT_CACHE_DIR", "")
    if cache_dir:
        providers = providers.with_cache(cache_dir)
    return providers


def _pipeline_config(args: argparse.Namespace, file_cfg: dict) -> PipelineConfig:
    return PipelineConfig(
        strategy=_setting(args, file_cfg, "strategy", "sici"),
        window_radius=int(_setting(args, file_cfg, "radius", 0)),
        coref=bool(_setting(args, file_cfg, "coref", True)),
        k=int(_setting(args, file_cfg, "k", 3)),
        threshold=float(_setting(args, file_cfg, "threshold", 0.5)),
        layout=LayoutConfig(rng_seed=int(_setting(args, file_cfg, "seed", 0))),
    )


def _cmd_decompose(args: argparse.Namespace) -> int:
    file_cfg = _load_config_file(args.config)
    document = _read_text(args.input)
    cfg = DecomposeConfig(
        strategy=_setting(args, file_cfg, "strategy", "sici"),
        window_radius=int(_setting(args, file_cfg, "radius", 0)),
        coref=bool(_setting(args, file_cfg, "coref", True)),
    )
    claims, failed = decompose(document, args.origin, cfg, _providers(file_cfg))
    for claim in claims:
        print(json.dumps(claim.to_json(), ensure_ascii=False))
    if failed:
        print("extraction failed", file=sys.stderr)
        return EXIT_PROVIDER
    return EXIT_OK


def _cmd_audit(args: argparse.Namespace) -> int:
    file_cfg = _load_config_file(args.config)
    source = _read_text(args.source)
    output = _read_text(args.output)
    cfg = _pipeline_config(args, file_cfg)
    outcome = run_audit(source, output, cfg, _providers(file_cfg))

    payload = graph_json_bytes(outcome.document)
    if args.json:
        Path(args.json).write_bytes(payload + b"\n")
    else:
        sys.stdout.write(payload.decode("utf-8") + "\n")
    if args.svg:
        Path(args.svg).write_text(render_svg(outcome.document), encoding="utf-8")

    verdict = outcome.verdict
    print(f"verdict: {verdict.label} (score={verdict.response_score:.4f}, "
          f"threshold={verdict.threshold})", file=sys.stderr)
    return EXIT_OK if verdict.label == "consistent" else EXIT_HALLUCINATED


def _cmd_eval(args: argparse.Namespace) -> int:
    file_cfg = _load_config_file(args.config)
    if args.method not in METHODS:
        print(f"unknown method {args.method!r}; valid methods: {', '.join(METHODS)}",
              file=sys.stderr)
        return EXIT_CONFIG
    records = load_summeval(args.data)
    if args.subset:
        wanted = _read_text(args.subset).split()
        try:
            indices = sorted({int(w) for w in wanted})
            records = [records[i] for i in indices if 0 <= i < len(records)]
        except ValueError:
            ids = set(wanted)
            records = [r for r in records if r.record_id in ids]
    if not records:
        raise InputError("subset selects no records")

    threshold = float(_setting(args, file_cfg, "threshold", 0.5))
    cfg = _pipeline_config(args, file_cfg)
    report = run_method(
        records, args.method, _providers(file_cfg), pipeline_config=cfg,
        threshold=threshold, workers=int(_setting(args, file_cfg, "workers", 1)),
        report_dir=args.report,
    )
    print(f"method={report.method_name} n={report.n} "
          f"balanced_accuracy={report.balanced_accuracy:.4f} "
          f"wall_clock_seconds={report.wall_clock_seconds:.3f}")
    if args.sweep:
        scores = [row[1] for row in report.per_example]
        labels = [row[3] for row in report.per_example]
        sweep = sweep_threshold(scores, labels)
        print(f"best_threshold={sweep.best_threshold:.2f} best_ba={sweep.best_ba:.4f}")
        if args.report:
            write_report(report, args.report, pipeline_config=cfg, sweep=sweep)
    return EXIT_OK


def _cmd_export_graph(args: argparse.Namespace) -> int:
    _load_config_file(args.config)  # accepted for interface uniformity
    session_dir = Path(args.session)
    rev_dir = session_dir / "revisions"
    if not rev_dir.is_dir():
        raise ConfigError(f"not a session directory: {args.session}")
    revisions = sorted(rev_dir.glob("*.json"), key=lambda p: int(p.stem))
    if not revisions:
        raise ConfigError(f"session has no revisions: {args.session}")
    if args.revision is not None:
        wanted = rev_dir / f"{args.revision}.json"
        if not wanted.exists():
            raise ConfigError(f"unknown revision {args.revision}")
        chosen = wanted
    else:
        chosen = revisions[-1]
    payload = json.loads(chosen.read_text(encoding="utf-8"))
    sys.stdout.write(graph_json_bytes(payload["document"]).decode("utf-8") + "\n")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    file_cfg = _load_config_file(args.config)
    port = int(_setting(args, file_cfg, "port",
                        os.environ.get("AUDIT_SERVICE_PORT", 8000)))
    host = _setting(args, file_cfg, "host", "127.0.0.1")
    store = _setting(args, file_cfg, "store", None)
    app = create_app(store_dir=store, providers=_providers(file_cfg))
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    except (OSError, SystemExit) as exc:
        print(f"server failed to start: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="claimgraph",
        description="Audit LLM outputs against source context for factual consistency.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dec = sub.add_parser("decompose", help="split a document into checkable claims")
    p_dec.add_argument("--input", required=True)
    p_dec.add_argument("--origin", choices=["source", "output"], default="output")
    p_dec.add_argument("--strategy", choices=["sici", "triples"])
    p_dec.add_argument("--radius", type=int)
    p_dec.add_argument("--coref", action=argparse.BooleanOptionalAction)
    p_dec.add_argument("--config")
    p_dec.set_defaults(func=_cmd_decompose)

    p_audit = sub.add_parser("audit", help="audit an output file against a source file")
    p_audit.add_argument("--source", required=True)
    p_audit.add_argument("--output", required=True)
    p_audit.add_argument("--strategy", choices=["sici", "triples"])
    p_audit.add_argument("--radius", type=int)
    p_audit.add_argument("--k", type=int)
    p_audit.add_argument("--threshold", type=float)
    p_audit.add_argument("--seed", type=int)
    p_audit.add_argument("--json", help="write the graph document here")
    p_audit.add_argument("--svg", help="write a static scatter here")
    p_audit.add_argument("--config")
    p_audit.set_defaults(func=_cmd_audit)

    p_eval = sub.add_parser("eval-summeval", help="benchmark a method on annotated pairs")
    p_eval.add_argument("--data", required=True)
    p_eval.add_argument("--method", required=True)
    p_eval.add_argument("--subset", help="file of record indexes or ids to keep")
    p_eval.add_argument("--threshold", type=float)
    p_eval.add_argument("--sweep", action="store_true")
    p_eval.add_argument("--report", help="directory for report files")
    p_eval.add_argument("--workers", type=int)
    p_eval.add_argument("--seed", type=int)
    p_eval.add_argument("--config")
    p_eval.set_defaults(func=_cmd_eval)

    p_export = sub.add_parser("export-graph", help="print a stored session's graph document")
    p_export.add_argument("--session", required=True, help="session directory")
    p_export.add_argument("--revision", type=int)
    p_export.add_argument("--config")
    p_export.set_defaults(func=_cmd_export_graph)

    p_serve = sub.add_parser("serve", help="run the HTTP audit service")
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)
    p_serve.add_argument("--store", help="session store directory")
    p_serve.add_argument("--config")
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        # argparse exits itself on --help (0) and bad/unknown flags (2);
        # flag problems are configuration errors under our exit-code contract.
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    except (ConfigError, InputError, ParseError, MetricError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TransportError, DecodeError, JudgmentError) as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except ClaimGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
