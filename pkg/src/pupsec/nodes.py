"""AST node types for the supported Puppet manifest subset.

All nodes are frozen dataclasses; once a manifest is parsed its tree is
immutable and can be shared freely across threads.  Child sequences are
tuples so structural equality (``==``) works on whole subtrees.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Union


@dataclass(frozen=True)
class SourceLocation:
    path: str
    line: int  # 1-based
    column: int  # 1-based


class Expr:
    """Marker base class for expression nodes."""


class Statement:
    """Marker base class for statement nodes."""


# --- expressions ---------------------------------------------------------


@dataclass(frozen=True)
class StrLiteral(Expr):
    value: str
    loc: SourceLocation


@dataclass(frozen=True)
class InterpolatedString(Expr):
    # Parts are literal text fragments (plain str, escapes already resolved)
    # or embedded expressions.
    parts: tuple[Union[str, Expr], ...]
    loc: SourceLocation


@dataclass(frozen=True)
class VarRef(Expr):
    name: str  # without the '$' sigil, leading '::' stripped
    loc: SourceLocation


@dataclass(frozen=True)
class FunctionCall(Expr):
    name: str
    args: tuple[Expr, ...]
    loc: SourceLocation


@dataclass(frozen=True)
class ArrayLiteral(Expr):
    items: tuple[Expr, ...]
    loc: SourceLocation


@dataclass(frozen=True)
class HashLiteral(Expr):
    entries: tuple[tuple[Expr, Expr], ...]
    loc: SourceLocation


@dataclass(frozen=True)
class AccessExpr(Expr):
    base: Expr
    key: Expr
    loc: SourceLocation


@dataclass(frozen=True)
class UndefLiteral(Expr):
    loc: SourceLocation


@dataclass(frozen=True)
class BoolLiteral(Expr):
    value: bool
    loc: SourceLocation


@dataclass(frozen=True)
class NumberLiteral(Expr):
    value: Union[int, float]
    loc: SourceLocation


@dataclass(frozen=True)
class SelectorArm:
    match: Union[Expr, None]  # None for the 'default' arm
    value: Expr
    is_default: bool
    loc: SourceLocation


@dataclass(frozen=True)
class SelectorExpr(Expr):
    scrutinee: Expr
    arms: tuple[SelectorArm, ...]
    loc: SourceLocation


@dataclass(frozen=True)
class ResourceRef(Expr):
    """A reference to a declared resource, e.g. ``File['motd']``."""

    type_name: str
    title: Expr
    loc: SourceLocation


@dataclass(frozen=True)
class BinaryOp(Expr):
    op: str
    left: Expr
    right: Expr
    loc: SourceLocation


@dataclass(frozen=True)
class UnaryOp(Expr):
    op: str
    operand: Expr
    loc: SourceLocation


# --- statements ----------------------------------------------------------


@dataclass(frozen=True)
class Assignment(Statement):
    var_name: str
    value: Expr
    loc: SourceLocation


@dataclass(frozen=True)
class AttributeNode:
    """One ``name => value`` pair inside a resource body."""

    name: str
    value: Expr
    loc: SourceLocation


@dataclass(frozen=True)
class ResourceDecl(Statement):
    type_name: str
    title: Expr
    attributes: tuple[AttributeNode, ...]
    loc: SourceLocation


@dataclass(frozen=True)
class ResourceOverride(Statement):
    """Attribute override on a resource reference, e.g. ``File['x'] {...}``."""

    type_name: str
    title: Expr
    attributes: tuple[AttributeNode, ...]
    loc: SourceLocation


@dataclass(frozen=True)
class Parameter:
    name: str
    default: Union[Expr, None]
    loc: SourceLocation


@dataclass(frozen=True)
class ClassDef(Statement):
    name: str
    parameters: tuple[Parameter, ...]
    body: tuple[Statement, ...]
    loc: SourceLocation


@dataclass(frozen=True)
class DefinedTypeDef(Statement):
    name: str
    parameters: tuple[Parameter, ...]
    body: tuple[Statement, ...]
    loc: SourceLocation


@dataclass(frozen=True)
class IfStatement(Statement):
    condition: Expr
    then_body: tuple[Statement, ...]
    else_body: tuple[Statement, ...]  # empty when there is no else branch
    loc: SourceLocation


@dataclass(frozen=True)
class CaseArm:
    matches: tuple[Expr, ...]
    body: tuple[Statement, ...]
    is_default: bool
    loc: SourceLocation


@dataclass(frozen=True)
class CaseStatement(Statement):
    scrutinee: Expr
    arms: tuple[CaseArm, ...]
    loc: SourceLocation


@dataclass(frozen=True)
class ExprStatement(Statement):
    expr: Expr
    loc: SourceLocation


@dataclass(frozen=True)
class Manifest:
    path: str
    statements: tuple[Statement, ...]
    raw_text: str


# --- helpers -------------------------------------------------------------


def iter_nodes(obj):
    """Yield every AST node (statements, expressions, attribute/parameter
    records) contained in *obj*, pre-order."""
    if isinstance(obj, Manifest):
        for s in obj.statements:
            yield from iter_nodes(s)
        return
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return
    if isinstance(obj, tuple):
        for item in obj:
            yield from iter_nodes(item)
        return
    if isinstance(obj, SourceLocation):
        return
    yield obj
    for f in fields(obj):
        yield from iter_nodes(getattr(obj, f.name))


def structurally_equal(a, b) -> bool:
    """Structural AST equality that ignores source locations.

    Used by round-trip tests, where the pretty-printed text has different
    line/column coordinates than the original."""
    if isinstance(a, Manifest) and isinstance(b, Manifest):
        return structurally_equal(a.statements, b.statements)
    if type(a) is not type(b):
        return False
    if isinstance(a, tuple):
        return len(a) == len(b) and all(
            structurally_equal(x, y) for x, y in zip(a, b)
        )
    if isinstance(a, SourceLocation):
        return True
    if isinstance(a, (str, int, float, bool)) or a is None:
        return a == b
    return all(
        structurally_equal(getattr(a, f.name), getattr(b, f.name))
        for f in fields(a)
        if f.name != "loc"
    )
