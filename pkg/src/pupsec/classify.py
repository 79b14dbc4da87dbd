"""Expression classification and attribute-to-resource membership.

Every assigned value in a manifest is classified as a string, function,
or parameter expression (or left unclassified) and tied to its owner:
a variable, a resource attribute, or a class/defined-type parameter.
Attributes additionally get a corpus-unique identifier recording which
resource and manifest they belong to.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .nodes import (
    ArrayLiteral,
    Assignment,
    AttributeNode,
    CaseStatement,
    ClassDef,
    DefinedTypeDef,
    Expr,
    ExprStatement,
    FunctionCall,
    HashLiteral,
    IfStatement,
    InterpolatedString,
    Manifest,
    Parameter,
    ResourceDecl,
    ResourceOverride,
    SourceLocation,
    Statement,
    StrLiteral,
    UndefLiteral,
)
from .printer import expr_text


class ExpressionKind(Enum):
    STRING = "string"
    FUNCTION = "function"
    PARAMETER = "parameter"


# --- value views ----------------------------------------------------------


@dataclass(frozen=True)
class StringValue:
    text: str


@dataclass(frozen=True)
class FunctionValue:
    function_name: str
    args: tuple


@dataclass(frozen=True)
class UndefValue:
    pass


@dataclass(frozen=True)
class CompositeValue:
    """Interpolated string, array, or hash.  For interpolated strings the
    literal text fragments are kept for value-pattern matching."""

    literal_fragments: tuple[str, ...]


@dataclass(frozen=True)
class OtherValue:
    pass


ValueView = Union[StringValue, FunctionValue, UndefValue, CompositeValue, OtherValue]


def value_view(expr: Expr) -> ValueView:
    if isinstance(expr, StrLiteral):
        return StringValue(expr.value)
    if isinstance(expr, InterpolatedString):
        if all(isinstance(p, str) for p in expr.parts):
            return StringValue("".join(expr.parts))
        fragments = tuple(p for p in expr.parts if isinstance(p, str))
        return CompositeValue(fragments)
    if isinstance(expr, FunctionCall):
        return FunctionValue(expr.name, tuple(value_view(a) for a in expr.args))
    if isinstance(expr, UndefLiteral):
        return UndefValue()
    if isinstance(expr, (ArrayLiteral, HashLiteral)):
        return CompositeValue(())
    return OtherValue()


# --- owners and identifiers ------------------------------------------------


@dataclass(frozen=True)
class VariableOwner:
    var_name: str


@dataclass(frozen=True)
class AttributeOwner:
    attribute_id: "AttributeId"


@dataclass(frozen=True)
class ParameterOwner:
    class_name: str
    param_name: str


Owner = Union[VariableOwner, AttributeOwner, ParameterOwner]


@dataclass(frozen=True)
class AttributeId:
    manifest_path: str
    resource_type: str
    resource_title: str
    attribute_name: str
    ordinal: int  # 0-based index of the resource within the manifest

    @property
    def resource_key(self) -> tuple[str, str, str, int]:
        return (self.manifest_path, self.resource_type, self.resource_title, self.ordinal)


@dataclass(frozen=True)
class ResourceInfo:
    manifest_path: str
    resource_type: str
    resource_title: str
    ordinal: int
    loc: SourceLocation

    @property
    def resource_key(self) -> tuple[str, str, str, int]:
        return (self.manifest_path, self.resource_type, self.resource_title, self.ordinal)


@dataclass(frozen=True)
class MembershipIndex:
    attr_to_resource: dict[AttributeId, tuple[str, str, str]]
    resource_list: tuple[ResourceInfo, ...]
    # (attribute node, id) pairs in textual order; lets the taint tracker
    # resolve AST attribute nodes to their identifiers.
    attribute_nodes: tuple[tuple[AttributeNode, AttributeId], ...]


@dataclass(frozen=True)
class ClassifiedExpression:
    id: int
    owner: Owner
    kind: Optional[ExpressionKind]
    name: str
    value: ValueView
    location: SourceLocation
    node: object = field(compare=False, repr=False)  # Assignment | AttributeNode | Parameter


@dataclass(frozen=True)
class FunctionCallSite:
    name: str
    location: SourceLocation
    owner: Optional[Owner]
    owner_node: object = field(compare=False, repr=False)  # def/attribute node or None
    call: FunctionCall = field(compare=False, repr=False)


# --- collection walk --------------------------------------------------------


def _title_text(title: Expr) -> str:
    if isinstance(title, StrLiteral):
        return title.value
    if isinstance(title, InterpolatedString) and all(isinstance(p, str) for p in title.parts):
        return "".join(title.parts)
    return expr_text(title)


class _Collector:
    def __init__(self, manifest: Manifest):
        self.manifest = manifest
        self.resources: list[ResourceInfo] = []
        self.attributes: list[tuple[AttributeNode, AttributeId]] = []
        self.assignments: list[Assignment] = []
        self.parameters: list[tuple[str, Parameter]] = []
        self.call_sites: list[FunctionCallSite] = []
        self._walk(manifest.statements)

    def _walk(self, statements: tuple[Statement, ...]) -> None:
        for stmt in statements:
            if isinstance(stmt, Assignment):
                self.assignments.append(stmt)
                owner = VariableOwner(stmt.var_name)
                self._collect_calls(stmt.value, owner, stmt)
            elif isinstance(stmt, (ResourceDecl, ResourceOverride)):
                self._resource(stmt)
            elif isinstance(stmt, (ClassDef, DefinedTypeDef)):
                for param in stmt.parameters:
                    self.parameters.append((stmt.name, param))
                    if param.default is not None:
                        owner = ParameterOwner(stmt.name, param.name)
                        self._collect_calls(param.default, owner, param)
                self._walk(stmt.body)
            elif isinstance(stmt, IfStatement):
                self._collect_calls(stmt.condition, None, None)
                self._walk(stmt.then_body)
                self._walk(stmt.else_body)
            elif isinstance(stmt, CaseStatement):
                self._collect_calls(stmt.scrutinee, None, None)
                for arm in stmt.arms:
                    for m in arm.matches:
                        self._collect_calls(m, None, None)
                    self._walk(arm.body)
            elif isinstance(stmt, ExprStatement):
                self._collect_calls(stmt.expr, None, None)

    def _resource(self, stmt) -> None:
        ordinal = len(self.resources)
        info = ResourceInfo(
            manifest_path=self.manifest.path,
            resource_type=stmt.type_name,
            resource_title=_title_text(stmt.title),
            ordinal=ordinal,
            loc=stmt.loc,
        )
        self.resources.append(info)
        self._collect_calls(stmt.title, None, None)
        for attr in stmt.attributes:
            attr_id = AttributeId(
                manifest_path=info.manifest_path,
                resource_type=info.resource_type,
                resource_title=info.resource_title,
                attribute_name=attr.name,
                ordinal=ordinal,
            )
            self.attributes.append((attr, attr_id))
            self._collect_calls(attr.value, AttributeOwner(attr_id), attr)

    def _collect_calls(self, expr, owner, owner_node) -> None:
        if expr is None:
            return
        if isinstance(expr, FunctionCall):
            self.call_sites.append(
                FunctionCallSite(expr.name, expr.loc, owner, owner_node, expr)
            )
            for arg in expr.args:
                self._collect_calls(arg, owner, owner_node)
            return
        for child in _children(expr):
            self._collect_calls(child, owner, owner_node)


def _children(expr):
    if isinstance(expr, InterpolatedString):
        return [p for p in expr.parts if not isinstance(p, str)]
    if isinstance(expr, ArrayLiteral):
        return list(expr.items)
    if isinstance(expr, HashLiteral):
        return [e for pair in expr.entries for e in pair]
    if hasattr(expr, "__dataclass_fields__"):
        out = []
        for name in expr.__dataclass_fields__:
            v = getattr(expr, name)
            if isinstance(v, Expr):
                out.append(v)
            elif isinstance(v, tuple):
                for item in v:
                    if isinstance(item, Expr):
                        out.append(item)
                    elif hasattr(item, "__dataclass_fields__"):
                        out.extend(
                            getattr(item, f)
                            for f in item.__dataclass_fields__
                            if isinstance(getattr(item, f), Expr)
                        )
        return out
    return []


# --- public operations ------------------------------------------------------


def _classify_value(owner: Owner, view: ValueView) -> Optional[ExpressionKind]:
    if isinstance(view, FunctionValue):
        return ExpressionKind.FUNCTION
    if isinstance(view, StringValue):
        if isinstance(owner, ParameterOwner):
            return ExpressionKind.PARAMETER
        return ExpressionKind.STRING
    return None


def classify_expressions(manifest: Manifest) -> list[ClassifiedExpression]:
    """One classified entry per variable assignment, resource attribute,
    and class/defined-type parameter with a default value."""
    collector = _Collector(manifest)
    out: list[ClassifiedExpression] = []

    def add(owner: Owner, name: str, expr: Expr, loc: SourceLocation, node) -> None:
        view = value_view(expr)
        out.append(
            ClassifiedExpression(
                id=len(out),
                owner=owner,
                kind=_classify_value(owner, view),
                name=name,
                value=view,
                location=loc,
                node=node,
            )
        )

    entries: list[tuple[SourceLocation, int, tuple]] = []
    for stmt in collector.assignments:
        entries.append((stmt.loc, 0, (VariableOwner(stmt.var_name), stmt.var_name, stmt.value, stmt.loc, stmt)))
    for attr, attr_id in collector.attributes:
        entries.append((attr.loc, 1, (AttributeOwner(attr_id), attr.name, attr.value, attr.loc, attr)))
    for class_name, param in collector.parameters:
        if param.default is not None:
            owner = ParameterOwner(class_name, param.name)
            entries.append((param.loc, 2, (owner, param.name, param.default, param.loc, param)))
    entries.sort(key=lambda e: (e[0].line, e[0].column, e[1]))
    for _, _, args in entries:
        add(*args)
    return out


def collect_function_calls(manifest: Manifest) -> list[FunctionCallSite]:
    """All function-call sites in the manifest, with the variable,
    attribute, or parameter that receives the call result (if any)."""
    return _Collector(manifest).call_sites


def build_membership_index(manifest: Manifest) -> MembershipIndex:
    """Map every attribute of every resource to its resource and manifest."""
    collector = _Collector(manifest)
    attr_to_resource = {
        attr_id: (attr_id.resource_type, attr_id.resource_title, attr_id.manifest_path)
        for _, attr_id in collector.attributes
    }
    return MembershipIndex(
        attr_to_resource=attr_to_resource,
        resource_list=tuple(collector.resources),
        attribute_nodes=tuple(collector.attributes),
    )
