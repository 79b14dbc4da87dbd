"""Batch scanning and ground-truth evaluation.

``scan`` runs the per-file pipeline (parse, classify, rule match, and in
taint mode DDG confirmation) over directories of ``.pp`` files.  Files
are analyzed independently, so the worker pool only shares immutable
configuration and the merged report does not depend on scheduling.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .classify import (
    ResourceInfo,
    build_membership_index,
    classify_expressions,
    collect_function_calls,
)
from .ddg import build_ddg, collect_propagations, confirm_findings
from .errors import ScanError
from .parser import parse_manifest
from .report import (
    CorpusStats,
    Finding,
    DEFAULT_TAXONOMY,
    VERSION,
    compute_stats,
    load_taxonomy,
    sorted_findings,
)
from .rules import (
    DEFAULT_PATTERNS,
    PatternSet,
    RULE_SEMANTICS,
    WeaknessCategory,
    detect_candidates,
    load_pattern_overrides,
)

JOBS_ENV_VAR = "PUPSEC_JOBS"


@dataclass(frozen=True)
class RunConfig:
    inputs: tuple[str, ...]
    mode: str = "taint"  # 'taint' | 'pattern'
    fmt: str = "json"  # 'json' | 'text' | 'sarif'
    taxonomy_path: Optional[str] = None
    patterns_path: Optional[str] = None
    ground_truth_path: Optional[str] = None
    fail_on_findings: bool = False
    jobs: int = 0  # 0 = one worker per CPU
    on_parse_error: str = "skip"  # 'skip' | 'abort'
    out_path: Optional[str] = None


@dataclass(frozen=True)
class Report:
    version: str
    mode: str
    rule_semantics: str
    findings: tuple[Finding, ...]
    stats: CorpusStats
    skipped: tuple[tuple[str, str], ...] = ()  # (path, reason) for skipped files


@dataclass(frozen=True)
class _FileResult:
    path: str
    findings: tuple[Finding, ...]
    resources: tuple[ResourceInfo, ...]
    error: Optional[str]


def _gather_manifests(inputs: tuple[str, ...]) -> list[str]:
    paths: list[str] = []
    for item in inputs:
        p = Path(item)
        if not p.exists():
            raise FileNotFoundError(f"input path does not exist: {item}")
        if p.is_dir():
            paths.extend(str(f) for f in p.glob("**/*.pp"))
        else:
            paths.append(str(p))
    return sorted(set(paths))


def _analyze_file(path: str, mode: str, patterns: PatternSet) -> _FileResult:
    try:
        text = Path(path).read_text(encoding="utf-8")
        manifest = parse_manifest(text, path)
    except (ScanError, UnicodeDecodeError) as exc:
        return _FileResult(path, (), (), str(exc))
    classified = classify_expressions(manifest)
    index = build_membership_index(manifest)
    calls = collect_function_calls(manifest)
    candidates = detect_candidates(classified, calls, patterns)
    if mode == "pattern":
        findings = tuple(
            Finding(
                category=c.category,
                manifest_path=path,
                weakness_location=c.location,
                weakness_name=c.display_name,
                sink=None,
                sink_location=None,
                path=(),
            )
            for c in candidates
        )
    else:
        ddg = build_ddg(manifest, candidates, index)
        if ddg is None:
            findings = ()
        else:
            propagations = collect_propagations(ddg)
            findings = tuple(confirm_findings(candidates, propagations, index))
    return _FileResult(path, findings, tuple(index.resource_list), None)


def scan(config: RunConfig) -> Report:
    """Scan all manifests named by the config and aggregate one report.

    Results are merged in sorted path order, so reports are byte-identical
    regardless of worker count."""
    if config.mode not in ("taint", "pattern"):
        raise ValueError(f"unknown mode: {config.mode!r}")
    if config.on_parse_error not in ("skip", "abort"):
        raise ValueError(f"unknown on_parse_error policy: {config.on_parse_error!r}")
    patterns = (
        load_pattern_overrides(config.patterns_path)
        if config.patterns_path
        else DEFAULT_PATTERNS
    )
    taxonomy = load_taxonomy(config.taxonomy_path) if config.taxonomy_path else DEFAULT_TAXONOMY
    paths = _gather_manifests(config.inputs)

    jobs = config.jobs if config.jobs > 0 else (os.cpu_count() or 1)
    if paths:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda p: _analyze_file(p, config.mode, patterns), paths))
    else:
        results = []

    findings: list[Finding] = []
    resources: list[ResourceInfo] = []
    skipped: list[tuple[str, str]] = []
    for result in results:  # already in sorted path order
        if result.error is not None:
            if config.on_parse_error == "abort":
                raise ScanError(f"parse failure in {result.path}: {result.error}")
            skipped.append((result.path, result.error))
            continue
        findings.extend(result.findings)
        resources.extend(result.resources)

    stats = compute_stats(findings, resources, taxonomy)
    return Report(
        version=VERSION,
        mode=config.mode,
        rule_semantics=RULE_SEMANTICS,
        findings=tuple(sorted_findings(findings)),
        stats=stats,
        skipped=tuple(skipped),
    )


# --- ground truth evaluation --------------------------------------------------


@dataclass(frozen=True)
class GroundTruthEntry:
    manifest_path: str
    category: WeaknessCategory
    line: int


@dataclass(frozen=True)
class MetricRow:
    tp: int
    fp: int
    fn: int
    precision: Optional[float]
    recall: Optional[float]
    f_measure: Optional[float]


@dataclass(frozen=True)
class EvalMetrics:
    overall: MetricRow
    per_category: dict[str, MetricRow]


def load_ground_truth(path: str) -> list[GroundTruthEntry]:
    """Read a header-bearing CSV of labeled true weaknesses.  Manifest
    paths are taken relative to the CSV file's own directory."""
    base = Path(path).resolve().parent
    entries: list[GroundTruthEntry] = []
    seen: set[tuple[str, str, int]] = set()
    valid = {c.value: c for c in WeaknessCategory}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"manifest_path", "category", "line"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"{path}: ground truth needs columns {sorted(required)}")
        for row in reader:
            category = valid.get(row["category"].strip())
            if category is None:
                raise ValueError(f"{path}: unknown category {row['category']!r}")
            manifest = row["manifest_path"].strip()
            resolved = manifest if os.path.isabs(manifest) else str((base / manifest).resolve())
            key = (resolved, category.value, int(row["line"]))
            if key in seen:
                raise ValueError(f"{path}: duplicate ground truth entry {key}")
            seen.add(key)
            entries.append(GroundTruthEntry(resolved, category, int(row["line"])))
    return entries


def _metric_row(tp: int, fp: int, fn: int) -> MetricRow:
    precision = tp / (tp + fp) if tp + fp > 0 else None
    recall = tp / (tp + fn) if tp + fn > 0 else None
    f_measure = None
    if precision is not None and recall is not None and precision + recall > 0:
        f_measure = 2 * precision * recall / (precision + recall)
    return MetricRow(tp, fp, fn, precision, recall, f_measure)


def evaluate(report: Report, truth: list[GroundTruthEntry]) -> EvalMetrics:
    """Precision/recall/F-measure of the report against labeled truths,
    matched at (manifest, category, line) granularity.  A weakness that
    reaches several sinks counts once."""
    found: set[tuple[str, str, int]] = {
        (str(Path(f.manifest_path).resolve()), f.category.value, f.weakness_location.line)
        for f in report.findings
    }
    labeled: set[tuple[str, str, int]] = {
        (t.manifest_path, t.category.value, t.line) for t in truth
    }
    per_category: dict[str, MetricRow] = {}
    for category in WeaknessCategory:
        f_cat = {k for k in found if k[1] == category.value}
        t_cat = {k for k in labeled if k[1] == category.value}
        if not f_cat and not t_cat:
            continue
        per_category[category.value] = _metric_row(
            tp=len(f_cat & t_cat), fp=len(f_cat - t_cat), fn=len(t_cat - f_cat)
        )
    overall = _metric_row(
        tp=len(found & labeled), fp=len(found - labeled), fn=len(labeled - found)
    )
    return EvalMetrics(overall=overall, per_category=per_category)


def metrics_to_dict(metrics: EvalMetrics) -> dict:
    def row(r: MetricRow) -> dict:
        rnd = lambda x: round(x, 4) if x is not None else None
        return {
            "tp": r.tp,
            "fp": r.fp,
            "fn": r.fn,
            "precision": rnd(r.precision),
            "recall": rnd(r.recall),
            "f_measure": rnd(r.f_measure),
        }

    return {
        "overall": row(metrics.overall),
        "per_category": {k: row(v) for k, v in sorted(metrics.per_category.items())},
    }
