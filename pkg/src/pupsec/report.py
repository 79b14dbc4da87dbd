"""Findings, resource taxonomy, corpus statistics, and report rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .classify import AttributeId, ResourceInfo
from .errors import UnknownFormat, ZeroTotal
from .nodes import SourceLocation
from .rules import RULE_SEMANTICS, WeaknessCategory

VERSION = "0.1.0"


@dataclass(frozen=True)
class PathStep:
    kind: str  # 'taint' | 'intermediate' | 'sink'
    label: str
    line: int
    column: int


@dataclass(frozen=True)
class Finding:
    category: WeaknessCategory
    manifest_path: str
    weakness_location: SourceLocation
    weakness_name: str
    sink: Optional[AttributeId]  # None in pattern-only mode
    sink_location: Optional[SourceLocation]
    path: tuple[PathStep, ...]
    rule_semantics: str = RULE_SEMANTICS


# --- resource taxonomy ------------------------------------------------------


@dataclass(frozen=True)
class ResourceTaxonomy:
    categories: tuple[tuple[str, tuple[str, ...]], ...]
    fallback: str = "Unknown"


DEFAULT_TAXONOMY = ResourceTaxonomy(
    categories=(
        ("ContinuousIntegration", ("jenkins", "gitlab-ci")),
        ("CommunicationPlatforms", ("slack", "discourse", "irc")),
        ("Containerization", ("docker", "magnum", "kubernetes")),
        ("DataStorage", ("mysql", "postgres", "memcached")),
        ("File", ("file", "file_line", "concat")),
        ("LoadBalancers", ("haproxy",)),
        ("Networking", ("firewall", "vlan", "onos", "network")),
    )
)


def load_taxonomy(path: str) -> ResourceTaxonomy:
    """Load a JSON object mapping category names to keyword lists.
    Object order is significant: the first matching category wins."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: taxonomy file must be a JSON object")
    categories = []
    for name, keywords in data.items():
        if not isinstance(keywords, list) or not all(isinstance(k, str) for k in keywords):
            raise ValueError(f"{path}: {name} must map to a list of strings")
        categories.append((name, tuple(k.lower() for k in keywords)))
    return ResourceTaxonomy(categories=tuple(categories))


def categorize_resource(
    resource_type: str, resource_title: str, taxonomy: ResourceTaxonomy = DEFAULT_TAXONOMY
) -> str:
    """First taxonomy category whose keywords appear in the resource type
    or title; the fallback category if none match."""
    haystack = f"{resource_type} {resource_title}".lower()
    for name, keywords in taxonomy.categories:
        if any(k in haystack for k in keywords):
            return name
    return taxonomy.fallback


# --- statistics -------------------------------------------------------------


def impacted_resource_pct(impacted: int, total: int) -> float:
    """Share of distinct resources reached by at least one weakness,
    as a percentage with two decimal places."""
    if total == 0:
        raise ZeroTotal("no resources in the dataset")
    if not 0 <= impacted <= total:
        raise ValueError("impacted must be between 0 and total")
    return round(impacted / total * 100.0, 2)


def resources_per_weakness_stats(
    findings: list[Finding],
) -> Optional[tuple[int, int, int]]:
    """(min, median, max) of distinct sink-resource counts per weakness
    instance; None when there are no confirmed findings.  The median of an
    even-sized list is the lower middle element."""
    per_weakness: dict[tuple, set] = {}
    for f in findings:
        if f.sink is None:
            continue
        key = (f.manifest_path, f.category.value, f.weakness_location.line, f.weakness_location.column)
        per_weakness.setdefault(key, set()).add(f.sink.resource_key)
    if not per_weakness:
        return None
    counts = sorted(len(s) for s in per_weakness.values())
    median = counts[(len(counts) - 1) // 2]
    return (counts[0], median, counts[-1])


@dataclass(frozen=True)
class CategoryStat:
    name: str
    impacted_resources: int
    pct_of_impacted: float


@dataclass(frozen=True)
class CorpusStats:
    total_resources: int
    impacted_resources: int
    impacted_pct: float
    per_category: tuple[CategoryStat, ...]
    per_weakness: Optional[tuple[int, int, int]]


def compute_stats(
    findings: list[Finding],
    resources: list[ResourceInfo],
    taxonomy: ResourceTaxonomy = DEFAULT_TAXONOMY,
) -> CorpusStats:
    total = len(resources)
    impacted_keys = {f.sink.resource_key for f in findings if f.sink is not None}
    impacted = len(impacted_keys)
    pct = impacted_resource_pct(impacted, total) if total else 0.0

    by_category: dict[str, int] = {}
    for key in impacted_keys:
        _, rtype, rtitle, _ = key
        name = categorize_resource(rtype, rtitle, taxonomy)
        by_category[name] = by_category.get(name, 0) + 1
    per_category = tuple(
        CategoryStat(name, count, round(count / impacted * 100.0, 2) if impacted else 0.0)
        for name, count in sorted(by_category.items())
    )
    return CorpusStats(
        total_resources=total,
        impacted_resources=impacted,
        impacted_pct=pct,
        per_category=per_category,
        per_weakness=resources_per_weakness_stats(findings),
    )


# --- rendering ---------------------------------------------------------------


def _finding_sort_key(f: Finding):
    sink_key = (
        (f.sink.resource_type, f.sink.resource_title, f.sink.attribute_name, f.sink.ordinal)
        if f.sink is not None
        else ("", "", "", -1)
    )
    return (
        f.manifest_path,
        f.weakness_location.line,
        f.weakness_location.column,
        f.category.value,
        sink_key,
    )


def sorted_findings(findings: list[Finding]) -> list[Finding]:
    return sorted(findings, key=_finding_sort_key)


def _finding_to_dict(f: Finding) -> dict:
    sink = None
    if f.sink is not None:
        sink = {
            "resource_type": f.sink.resource_type,
            "resource_title": f.sink.resource_title,
            "attribute": f.sink.attribute_name,
            "line": f.sink_location.line if f.sink_location else None,
        }
    return {
        "category": f.category.value,
        "manifest": f.manifest_path,
        "line": f.weakness_location.line,
        "column": f.weakness_location.column,
        "name": f.weakness_name,
        "sink": sink,
        "path": [
            {"kind": s.kind, "label": s.label, "line": s.line, "column": s.column}
            for s in f.path
        ],
    }


def _stats_to_dict(stats: CorpusStats) -> dict:
    per_weakness = None
    if stats.per_weakness is not None:
        per_weakness = {
            "min": stats.per_weakness[0],
            "median": stats.per_weakness[1],
            "max": stats.per_weakness[2],
        }
    return {
        "total_resources": stats.total_resources,
        "impacted_resources": stats.impacted_resources,
        "impacted_pct": stats.impacted_pct,
        "per_category": {
            c.name: {"resources": c.impacted_resources, "pct": c.pct_of_impacted}
            for c in stats.per_category
        },
        "per_weakness_stats": per_weakness,
    }


def render_report(
    findings: list[Finding],
    stats: CorpusStats,
    fmt: str,
    mode: str = "taint",
    evaluation: Optional[dict] = None,
) -> bytes:
    """Render findings and statistics to bytes.  Output is deterministic:
    findings are sorted by (manifest, location, category, sink)."""
    ordered = sorted_findings(findings)
    if fmt == "json":
        return _render_json(ordered, stats, mode, evaluation)
    if fmt == "text":
        return _render_text(ordered, stats, mode, evaluation)
    if fmt == "sarif":
        return _render_sarif(ordered, mode)
    raise UnknownFormat(fmt)


def _render_json(findings, stats, mode, evaluation) -> bytes:
    doc = {
        "version": VERSION,
        "mode": mode,
        "rule_semantics": RULE_SEMANTICS,
        "findings": [_finding_to_dict(f) for f in findings],
        "stats": _stats_to_dict(stats),
    }
    if evaluation is not None:
        doc["evaluation"] = evaluation
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def _render_text(findings, stats, mode, evaluation) -> bytes:
    lines = []
    for f in findings:
        where = f"{f.manifest_path}:{f.weakness_location.line}:{f.weakness_location.column}"
        if f.sink is not None:
            sink_line = f.sink_location.line if f.sink_location else "?"
            lines.append(
                f"{where}: {f.category.value}: {f.weakness_name} -> "
                f"{f.sink.resource_type}[{f.sink.resource_title}]."
                f"{f.sink.attribute_name} (line {sink_line})"
            )
        else:
            lines.append(f"{where}: {f.category.value}: {f.weakness_name}")
    lines.append("")
    lines.append(
        f"{len(findings)} finding(s), mode={mode}; "
        f"{stats.impacted_resources}/{stats.total_resources} resources impacted "
        f"({stats.impacted_pct:.2f}%)"
    )
    if evaluation is not None:
        overall = {k: ("NA" if v is None else v) for k, v in evaluation["overall"].items()}
        lines.append(
            "evaluation: precision={precision} recall={recall} f_measure={f_measure} "
            "(tp={tp} fp={fp} fn={fn})".format(**overall)
        )
    lines.append("")
    return "\n".join(lines).encode("utf-8")


_RULE_DESCRIPTIONS = {
    WeaknessCategory.ADMIN_BY_DEFAULT: "Administrative privileges assigned by default",
    WeaknessCategory.EMPTY_PASSWORD: "Zero-length string used for a password",
    WeaknessCategory.HARD_CODED_SECRET: "User name, password, or private key revealed in code",
    WeaknessCategory.INVALID_IP_BINDING: "Service bound to 0.0.0.0",
    WeaknessCategory.HTTP_WITHOUT_TLS: "HTTP used without TLS",
    WeaknessCategory.WEAK_CRYPTO_ALGORITHM: "MD5 or SHA1 used",
}


def _render_sarif(findings, mode) -> bytes:
    results = []
    for f in findings:
        related = [
            {
                "physicalLocation": {
                    "artifactLocation": {"uri": f.manifest_path},
                    "region": {"startLine": step.line, "startColumn": step.column},
                },
                "message": {"text": f"{step.kind}: {step.label}"},
            }
            for step in f.path
        ]
        message = f"{_RULE_DESCRIPTIONS[f.category]}: {f.weakness_name}"
        if f.sink is not None:
            message += (
                f" propagates into {f.sink.resource_type}"
                f"[{f.sink.resource_title}].{f.sink.attribute_name}"
            )
        results.append(
            {
                "ruleId": f.category.value,
                "level": "warning",
                "message": {"text": message},
                "locations": [
                    {
                        "physicalLocation": {
                            "artifactLocation": {"uri": f.manifest_path},
                            "region": {
                                "startLine": f.weakness_location.line,
                                "startColumn": f.weakness_location.column,
                            },
                        }
                    }
                ],
                "relatedLocations": related,
            }
        )
    doc = {
        "$schema": "https://raw.githubusercontent.com/oasis-tcs/sarif-spec/master/Schemata/sarif-schema-2.1.0.json",
        "version": "2.1.0",
        "runs": [
            {
                "tool": {
                    "driver": {
                        "name": "pupsec",
                        "version": VERSION,
                        "rules": [
                            {
                                "id": cat.value,
                                "shortDescription": {"text": _RULE_DESCRIPTIONS[cat]},
                            }
                            for cat in WeaknessCategory
                        ],
                    }
                },
                "properties": {"mode": mode, "rule_semantics": RULE_SEMANTICS},
                "results": results,
            }
        ],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
