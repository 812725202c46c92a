"""SummEval-style benchmark harness.

Loads the public annotated-pairs JSON-lines release (never bundled),
binarizes expert consistency ratings with the unanimous-5 rule, runs a
configured detection method over the records, and reports balanced
accuracy plus wall-clock runtime. Per-record scores stream to a
``scores.jsonl`` so interrupted runs resume, and the provider cache makes
re-runs cheap.
"""

from __future__ import annotations

import csv
import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import InputError, MetricError, ParseError
from .judge import Label
from .pipeline import PipelineConfig, score_pair
from .providers import ProviderSet, nli_score

log = logging.getLogger(__name__)

METHODS = ("hhem_baseline", "grapheval_plus", "sici_0", "sici_1")


@dataclass(frozen=True)
class SummEvalRecord:
    record_id: str
    source_text: str
    summary_text: str
    model_id: str
    expert_consistency: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.source_text or not self.summary_text:
            raise ValueError("record texts must be non-empty")
        if any(r not in (1, 2, 3, 4, 5) for r in self.expert_consistency):
            raise ValueError(f"ratings outside 1-5: {self.expert_consistency}")


@dataclass(frozen=True)
class EvalReport:
    method_name: str
    n: int
    tp: int
    tn: int
    fp: int
    fn: int
    balanced_accuracy: float
    threshold: float
    wall_clock_seconds: float
    per_example: tuple[tuple[str, float, Label, Label], ...] = ()
    unevaluable: int = 0

    def to_json(self) -> dict:
        doc = {
            "method_name": self.method_name,
            "n": self.n,
            "tp": self.tp,
            "tn": self.tn,
            "fp": self.fp,
            "fn": self.fn,
            "balanced_accuracy": self.balanced_accuracy,
            "threshold": self.threshold,
            "wall_clock_seconds": self.wall_clock_seconds,
            "unevaluable": self.unevaluable,
        }
        if self.per_example:
            doc["per_example"] = [list(row) for row in self.per_example]
        return doc


def _coerce_rating(value) -> int:
    rating = int(value)
    if rating != value and abs(rating - float(value)) > 1e-9:
        raise ValueError(f"non-integer rating {value}")
    return rating


def load_summeval(path: str | Path) -> list[SummEvalRecord]:
    """Read the annotated-pairs JSON-lines file in file order.

    Records without expert annotations are skipped with a warning;
    malformed lines abort with the line number.
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"dataset file not found: {path}")
    records: list[SummEvalRecord] = []
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"line {line_no}: invalid JSON ({exc})",
                                 line_number=line_no) from exc
            annotations = raw.get("expert_annotations")
            if not annotations:
                skipped += 1
                log.warning("line %d: missing expert annotations, skipped", line_no)
                continue
            try:
                ratings = tuple(_coerce_rating(a["consistency"]) for a in annotations)
                source = raw.get("text") or raw.get("source") or raw.get("article") or ""
                summary = raw.get("decoded") or raw.get("summary") or ""
                model_id = str(raw.get("model_id", ""))
                base_id = str(raw.get("id", f"line-{line_no}"))
                record = SummEvalRecord(
                    record_id=f"{base_id}::{model_id}" if model_id else base_id,
                    source_text=source,
                    summary_text=summary,
                    model_id=model_id,
                    expert_consistency=ratings,
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"line {line_no}: bad record ({exc})",
                                 line_number=line_no) from exc
            records.append(record)
    if skipped:
        log.warning("skipped %d records lacking expert annotations", skipped)
    return records


def binarize_consistency(ratings) -> Label:
    """Consistent only under expert unanimity at the top rating."""
    ratings = list(ratings)
    if not ratings:
        raise InputError("no ratings to binarize")
    if any(r not in (1, 2, 3, 4, 5) for r in ratings):
        raise InputError(f"ratings outside 1-5: {ratings}")
    return "consistent" if all(r == 5 for r in ratings) else "hallucinated"


def confusion(preds: list[Label], labels: list[Label]) -> tuple[int, int, int, int]:
    """(tp, tn, fp, fn) with 'consistent' as the positive class."""
    if len(preds) != len(labels):
        raise InputError(f"length mismatch: {len(preds)} preds vs {len(labels)} labels")
    tp = tn = fp = fn = 0
    for pred, label in zip(preds, labels):
        if label == "consistent":
            if pred == "consistent":
                tp += 1
            else:
                fn += 1
        else:
            if pred == "consistent":
                fp += 1
            else:
                tn += 1
    return tp, tn, fp, fn


def balanced_accuracy(preds: list[Label], labels: list[Label]) -> float:
    """Mean of per-class recalls; undefined when labels are single-class."""
    tp, tn, fp, fn = confusion(preds, labels)
    if tp + fn == 0 or tn + fp == 0:
        raise MetricError("balanced accuracy undefined: labels contain a single class")
    return 0.5 * (tp / (tp + fn) + tn / (tn + fp))


@dataclass(frozen=True)
class SweepResult:
    best_threshold: float
    best_ba: float
    curve: tuple[tuple[float, float], ...]  # (threshold, balanced accuracy)


def sweep_threshold(scores: list[float], labels: list[Label]) -> SweepResult:
    """Exhaustive grid over thresholds 0.01..0.99; ties favor the smallest."""
    if len(scores) != len(labels):
        raise InputError("scores and labels differ in length")
    best_t, best_ba = None, -1.0
    curve = []
    for i in range(1, 100):
        t = round(i * 0.01, 2)
        preds: list[Label] = ["consistent" if s >= t else "hallucinated" for s in scores]
        ba = balanced_accuracy(preds, labels)
        curve.append((t, ba))
        if ba > best_ba:
            best_t, best_ba = t, ba
    return SweepResult(best_threshold=best_t, best_ba=best_ba, curve=tuple(curve))


def token_stats(records: list[SummEvalRecord]) -> tuple[float, float]:
    """(mean summary tokens, mean source tokens) under whitespace tokenization."""
    if not records:
        raise InputError("no records")
    mean_summary = sum(len(r.summary_text.split()) for r in records) / len(records)
    mean_source = sum(len(r.source_text.split()) for r in records) / len(records)
    return mean_summary, mean_source


def stratified_subset(records: list[SummEvalRecord], n: int, seed: int = 0) -> list[SummEvalRecord]:
    """Label-stratified deterministic subset, file order preserved."""
    import random

    by_label: dict[Label, list[SummEvalRecord]] = {"consistent": [], "hallucinated": []}
    for r in records:
        by_label[binarize_consistency(r.expert_consistency)].append(r)
    rng = random.Random(seed)
    picked = []
    for label, group in by_label.items():
        want = round(n * len(group) / len(records))
        picked.extend(rng.sample(group, min(want, len(group))))
    order = {id(r): i for i, r in enumerate(records)}
    picked.sort(key=lambda r: order[id(r)])
    return picked[:n]


def _method_config(method: str, base: PipelineConfig) -> PipelineConfig:
    if method == "grapheval_plus":
        return replace(base, strategy="triples", window_radius=0)
    if method == "sici_0":
        return replace(base, strategy="sici", window_radius=0)
    if method == "sici_1":
        return replace(base, strategy="sici", window_radius=1)
    raise InputError(f"unknown method {method!r}; valid methods: {', '.join(METHODS)}")


def _score_record(record: SummEvalRecord, method: str, cfg: PipelineConfig,
                  providers: ProviderSet) -> tuple[float, bool]:
    if method == "hhem_baseline":
        verdict = nli_score(record.source_text, record.summary_text, providers.nli)
        return verdict.entail, False
    return score_pair(record.source_text, record.summary_text, cfg, providers)


def run_method(
    records: list[SummEvalRecord],
    method: str,
    providers: ProviderSet,
    pipeline_config: PipelineConfig | None = None,
    threshold: float = 0.5,
    workers: int = 1,
    report_dir: str | Path | None = None,
    keep_per_example: bool = True,
) -> EvalReport:
    """Evaluate one detection method over the records.

    With ``report_dir`` set, per-record scores stream to scores.jsonl as
    they complete and an interrupted run resumes from that file.
    """
    if not records:
        raise InputError("no records to evaluate")
    if method not in METHODS:
        raise InputError(f"unknown method {method!r}; valid methods: {', '.join(METHODS)}")
    base = pipeline_config or PipelineConfig()
    cfg = base if method == "hhem_baseline" else _method_config(method, base)

    done: dict[str, float] = {}
    scores_path = None
    if report_dir is not None:
        report_dir = Path(report_dir)
        report_dir.mkdir(parents=True, exist_ok=True)
        scores_path = report_dir / "scores.jsonl"
        if scores_path.exists():
            with open(scores_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        entry = json.loads(line)
                        done[entry["record_id"]] = entry["score"]

    started = time.monotonic()
    pending = [r for r in records if r.record_id not in done]

    def evaluate(record: SummEvalRecord) -> tuple[str, float]:
        score, _forced = _score_record(record, method, cfg, providers)
        return record.record_id, score

    results: dict[str, float] = dict(done)
    persist_lock = threading.Lock()

    def persist(record_id: str, score: float) -> None:
        # Flush each score as it lands so an aborted run resumes from here.
        if scores_path is None:
            return
        with persist_lock:
            with open(scores_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps({"record_id": record_id, "score": score}) + "\n")

    if pending:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(evaluate, r) for r in pending]
                for future in as_completed(futures):
                    record_id, score = future.result()
                    results[record_id] = score
                    persist(record_id, score)
        else:
            for record in pending:
                record_id, score = evaluate(record)
                results[record_id] = score
                persist(record_id, score)
    wall_clock = time.monotonic() - started

    per_example = []
    preds: list[Label] = []
    labels: list[Label] = []
    for record in sorted(records, key=lambda r: r.record_id):
        score = results[record.record_id]
        pred: Label = "consistent" if score >= threshold else "hallucinated"
        label = binarize_consistency(record.expert_consistency)
        per_example.append((record.record_id, score, pred, label))
        preds.append(pred)
        labels.append(label)

    tp, tn, fp, fn = confusion(preds, labels)
    try:
        ba = balanced_accuracy(preds, labels)
    except MetricError:
        ba = float("nan")
    report = EvalReport(
        method_name=method, n=len(records), tp=tp, tn=tn, fp=fp, fn=fn,
        balanced_accuracy=ba, threshold=threshold, wall_clock_seconds=wall_clock,
        per_example=tuple(per_example) if keep_per_example else (),
    )
    if report_dir is not None:
        write_report(report, report_dir, pipeline_config=cfg)
    return report


def write_report(report: EvalReport, report_dir: str | Path,
                 pipeline_config: PipelineConfig | None = None,
                 sweep: SweepResult | None = None) -> None:
    """Emit report.json / report.csv (and curve.csv, config.json) into a run dir."""
    report_dir = Path(report_dir)
    report_dir.mkdir(parents=True, exist_ok=True)
    with open(report_dir / "report.json", "w", encoding="utf-8") as fh:
        json.dump(report.to_json(), fh, indent=2)
        fh.write("\n")
    with open(report_dir / "report.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "n", "tp", "tn", "fp", "fn",
                         "balanced_accuracy", "threshold", "wall_clock_seconds"])
        writer.writerow([report.method_name, report.n, report.tp, report.tn, report.fp,
                         report.fn, report.balanced_accuracy, report.threshold,
                         report.wall_clock_seconds])
    if report.per_example:
        with open(report_dir / "per_example.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["record_id", "score", "pred", "label"])
            writer.writerows(report.per_example)
    if pipeline_config is not None:
        snapshot = {
            "method": report.method_name,
            "strategy": pipeline_config.strategy,
            "window_radius": pipeline_config.window_radius,
            "coref": pipeline_config.coref,
            "k": pipeline_config.k,
            "aggregation": pipeline_config.aggregation,
            "threshold": report.threshold,
        }
        with open(report_dir / "config.json", "w", encoding="utf-8") as fh:
            json.dump(snapshot, fh, indent=2)
            fh.write("\n")
    if sweep is not None:
        with open(report_dir / "curve.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["threshold", "balanced_accuracy"])
            writer.writerows(sweep.curve)
