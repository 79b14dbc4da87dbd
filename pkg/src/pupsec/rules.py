"""Security weakness rules and their text patterns.

Six categories are detected over classified expressions and function-call
sites.  All matching is case-insensitive.  Name predicates for hard-coded
secrets are joined disjunctively (a name matching any of user/password/
private-key counts); reports carry a ``rule_semantics`` marker recording
that choice.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Union

from .classify import (
    AttributeOwner,
    ClassifiedExpression,
    CompositeValue,
    ExpressionKind,
    FunctionCallSite,
    ParameterOwner,
    StringValue,
    VariableOwner,
)
from .errors import UnknownPredicate
from .nodes import SourceLocation

RULE_SEMANTICS = "disjunctive-names"


class WeaknessCategory(Enum):
    ADMIN_BY_DEFAULT = "admin_by_default"
    EMPTY_PASSWORD = "empty_password"
    HARD_CODED_SECRET = "hard_coded_secret"
    INVALID_IP_BINDING = "invalid_ip_binding"
    HTTP_WITHOUT_TLS = "http_without_tls"
    WEAK_CRYPTO_ALGORITHM = "weak_crypto_algorithm"


@dataclass(frozen=True)
class PatternSet:
    """Per-predicate match lists.  All entries are plain substrings except
    ``is_pvt_key``, whose entries are regular expressions."""

    is_admin: tuple[str, ...] = ("admin",)
    is_http: tuple[str, ...] = ("http:",)
    is_invalid_bind: tuple[str, ...] = ("0.0.0.0",)
    is_password: tuple[str, ...] = ("pwd", "pass", "password")
    is_pvt_key: tuple[str, ...] = (r"(pvt|priv).*(cert|key|rsa|secret|ssl)",)
    is_user: tuple[str, ...] = ("user",)
    uses_weak_algo: tuple[str, ...] = ("md5", "sha1")


DEFAULT_PATTERNS = PatternSet()

_PREDICATE_FIELDS = {
    "isAdmin": "is_admin",
    "isHTTP": "is_http",
    "isInvalidBind": "is_invalid_bind",
    "isPassword": "is_password",
    "isPvtKey": "is_pvt_key",
    "isUser": "is_user",
    "usesWeakAlgo": "uses_weak_algo",
}

_HTTP_WORD = re.compile(r"\bhttp\b")


def load_pattern_overrides(path: str) -> PatternSet:
    """Load a JSON object mapping predicate names to pattern lists;
    predicates not present keep their defaults."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: pattern file must be a JSON object")
    overrides = {}
    for key, value in data.items():
        if key not in _PREDICATE_FIELDS:
            raise UnknownPredicate(key)
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ValueError(f"{path}: {key} must map to a list of strings")
        overrides[_PREDICATE_FIELDS[key]] = tuple(v.lower() for v in value)
    return replace(DEFAULT_PATTERNS, **overrides)


def _contains_any(text: str, patterns: tuple[str, ...]) -> bool:
    return any(p in text for p in patterns)


def evaluate_predicate(predicate: str, text: str, patterns: PatternSet = DEFAULT_PATTERNS) -> bool:
    """Case-insensitive predicate match over *text*."""
    lowered = text.lower()
    if predicate == "isAdmin":
        return _contains_any(lowered, patterns.is_admin)
    if predicate == "isUser":
        return _contains_any(lowered, patterns.is_user)
    if predicate == "isPassword":
        return _contains_any(lowered, patterns.is_password)
    if predicate == "isInvalidBind":
        return _contains_any(lowered, patterns.is_invalid_bind)
    if predicate == "usesWeakAlgo":
        return _contains_any(lowered, patterns.uses_weak_algo)
    if predicate == "isPvtKey":
        return any(re.search(p, lowered) for p in patterns.is_pvt_key)
    if predicate == "isHTTP":
        # Plain-http values only: 'http:' anywhere or 'http' as a whole
        # word, and never anything that is already https.
        if "https" in lowered:
            return False
        return _contains_any(lowered, patterns.is_http) or bool(_HTTP_WORD.search(lowered))
    raise UnknownPredicate(predicate)


@dataclass(frozen=True)
class WeaknessCandidate:
    category: WeaknessCategory
    element: Union[ClassifiedExpression, FunctionCallSite] = field(repr=False)
    matched_text: str
    location: SourceLocation

    @property
    def display_name(self) -> str:
        if isinstance(self.element, FunctionCallSite):
            return self.element.name
        owner = self.element.owner
        if isinstance(owner, AttributeOwner):
            return self.element.name
        return f"${self.element.name}"


def _string_value(ce: ClassifiedExpression) -> Union[str, None]:
    return ce.value.text if isinstance(ce.value, StringValue) else None


def _value_fragments(ce: ClassifiedExpression) -> tuple[str, ...]:
    if isinstance(ce.value, StringValue):
        return (ce.value.text,)
    if isinstance(ce.value, CompositeValue):
        return ce.value.literal_fragments
    return ()


def detect_candidates(
    classified: list[ClassifiedExpression],
    function_calls: list[FunctionCallSite],
    patterns: PatternSet = DEFAULT_PATTERNS,
) -> list[WeaknessCandidate]:
    """Apply every rule to one manifest's classified expressions and call
    sites.  The result is the pattern-level (pre-propagation) finding set."""
    out: list[WeaknessCandidate] = []

    for ce in classified:
        sv = _string_value(ce)
        named_owner = isinstance(ce.owner, (VariableOwner, AttributeOwner, ParameterOwner))

        if (
            ce.kind is ExpressionKind.PARAMETER
            and sv is not None
            and evaluate_predicate("isUser", ce.name, patterns)
            and evaluate_predicate("isAdmin", sv, patterns)
        ):
            out.append(
                WeaknessCandidate(WeaknessCategory.ADMIN_BY_DEFAULT, ce, sv, ce.location)
            )

        if (
            named_owner
            and sv is not None
            and len(sv) == 0
            and evaluate_predicate("isPassword", ce.name, patterns)
        ):
            out.append(
                WeaknessCandidate(WeaknessCategory.EMPTY_PASSWORD, ce, ce.name, ce.location)
            )

        if (
            named_owner
            and sv is not None
            and len(sv) > 0
            and (
                evaluate_predicate("isUser", ce.name, patterns)
                or evaluate_predicate("isPassword", ce.name, patterns)
                or evaluate_predicate("isPvtKey", ce.name, patterns)
            )
        ):
            out.append(
                WeaknessCandidate(WeaknessCategory.HARD_CODED_SECRET, ce, ce.name, ce.location)
            )

        if named_owner:
            for fragment in _value_fragments(ce):
                if evaluate_predicate("isInvalidBind", fragment, patterns):
                    out.append(
                        WeaknessCandidate(
                            WeaknessCategory.INVALID_IP_BINDING, ce, fragment, ce.location
                        )
                    )
                    break
            for fragment in _value_fragments(ce):
                if evaluate_predicate("isHTTP", fragment, patterns):
                    out.append(
                        WeaknessCandidate(
                            WeaknessCategory.HTTP_WITHOUT_TLS, ce, fragment, ce.location
                        )
                    )
                    break

    for site in function_calls:
        if evaluate_predicate("usesWeakAlgo", site.name, patterns):
            out.append(
                WeaknessCandidate(
                    WeaknessCategory.WEAK_CRYPTO_ALGORITHM, site, site.name, site.location
                )
            )

    return out
