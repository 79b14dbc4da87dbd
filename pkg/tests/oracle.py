"""Brute-force reachability oracle.

Enumerates every branch combination of a manifest as a linear trace of
definition and use events, then answers reachability queries by scanning
the traces.  Deliberately independent of the dataflow engine under test:
no reaching-definitions machinery, just replaying assignments per trace.
"""

from __future__ import annotations

from itertools import product

from pupsec.nodes import (
    Assignment,
    CaseStatement,
    ClassDef,
    DefinedTypeDef,
    ExprStatement,
    IfStatement,
    Manifest,
    ResourceDecl,
    ResourceOverride,
)

# An event is ('def', var, id(node)) or ('use', var, id(node)).
Trace = tuple


def _use_events(expr, node) -> list[tuple]:
    # Local variable-collection so the oracle does not depend on the
    # implementation's uses_of either.
    from pupsec.nodes import (
        AccessExpr,
        ArrayLiteral,
        BinaryOp,
        FunctionCall,
        HashLiteral,
        InterpolatedString,
        ResourceRef,
        SelectorExpr,
        UnaryOp,
        VarRef,
    )

    names: list[str] = []

    def walk(e):
        if isinstance(e, VarRef):
            names.append(e.name)
        elif isinstance(e, InterpolatedString):
            for p in e.parts:
                if not isinstance(p, str):
                    walk(p)
        elif isinstance(e, FunctionCall):
            for a in e.args:
                walk(a)
        elif isinstance(e, ArrayLiteral):
            for i in e.items:
                walk(i)
        elif isinstance(e, HashLiteral):
            for k, v in e.entries:
                walk(k)
                walk(v)
        elif isinstance(e, AccessExpr):
            walk(e.base)
            walk(e.key)
        elif isinstance(e, SelectorExpr):
            walk(e.scrutinee)
            for arm in e.arms:
                if arm.match is not None:
                    walk(arm.match)
                walk(arm.value)
        elif isinstance(e, ResourceRef):
            walk(e.title)
        elif isinstance(e, BinaryOp):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, UnaryOp):
            walk(e.operand)

    walk(expr)
    return [("use", name, id(node)) for name in sorted(set(names))]


def _stmt_traces(stmt) -> list[list[tuple]]:
    if isinstance(stmt, Assignment):
        return [_use_events(stmt.value, stmt) + [("def", stmt.var_name, id(stmt))]]
    if isinstance(stmt, (ClassDef, DefinedTypeDef)):
        prefix: list[tuple] = []
        for param in stmt.parameters:
            if param.default is not None:
                prefix += _use_events(param.default, param)
            prefix.append(("def", param.name, id(param)))
        return [prefix + body for body in _block_traces(stmt.body)]
    if isinstance(stmt, IfStatement):
        prefix = _use_events(stmt.condition, stmt)
        branches = _block_traces(stmt.then_body)
        branches += _block_traces(stmt.else_body) if stmt.else_body else [[]]
        return [prefix + b for b in branches]
    if isinstance(stmt, CaseStatement):
        prefix = _use_events(stmt.scrutinee, stmt)
        for arm in stmt.arms:
            for m in arm.matches:
                prefix += _use_events(m, stmt)
        alternatives: list[list[tuple]] = []
        for arm in stmt.arms:
            alternatives += _block_traces(arm.body)
        if not any(arm.is_default for arm in stmt.arms):
            alternatives.append([])
        return [prefix + a for a in alternatives]
    if isinstance(stmt, (ResourceDecl, ResourceOverride)):
        events = _use_events(stmt.title, stmt)
        for attr in stmt.attributes:
            events += _use_events(attr.value, attr)
        return [events]
    if isinstance(stmt, ExprStatement):
        return [_use_events(stmt.expr, stmt)]
    raise TypeError(f"unknown statement: {stmt!r}")


def _block_traces(statements) -> list[list[tuple]]:
    per_stmt = [_stmt_traces(s) for s in statements]
    out: list[list[tuple]] = []
    for combo in product(*per_stmt) if per_stmt else [()]:
        trace: list[tuple] = []
        for piece in combo:
            trace += piece
        out.append(trace)
    return out


def enumerate_traces(manifest: Manifest) -> list[list[tuple]]:
    return _block_traces(manifest.statements)


def oracle_reaches(traces, def_node, use_node, var: str) -> bool:
    """True when some trace executes the definition and later the use with
    no other definition of the same variable in between."""
    for trace in traces:
        def_pos = None
        for idx, (kind, name, node_id) in enumerate(trace):
            if kind == "def" and name == var:
                def_pos = idx if node_id == id(def_node) else None
            elif (
                kind == "use"
                and name == var
                and node_id == id(use_node)
                and def_pos is not None
            ):
                return True
    return False


def all_def_use_pairs(manifest: Manifest):
    """Every (definition node, use node, variable) pair of the manifest,
    covering assignments and parameters against every kind of use site."""
    defs: list[tuple[object, str]] = []
    uses: list[tuple[object, set[str]]] = []

    def visit(statements):
        for stmt in statements:
            if isinstance(stmt, Assignment):
                defs.append((stmt, stmt.var_name))
                uses.append((stmt, _names_of(stmt.value)))
            elif isinstance(stmt, (ClassDef, DefinedTypeDef)):
                for param in stmt.parameters:
                    defs.append((param, param.name))
                    if param.default is not None:
                        uses.append((param, _names_of(param.default)))
                visit(stmt.body)
            elif isinstance(stmt, IfStatement):
                uses.append((stmt, _names_of(stmt.condition)))
                visit(stmt.then_body)
                visit(stmt.else_body)
            elif isinstance(stmt, CaseStatement):
                names = _names_of(stmt.scrutinee)
                for arm in stmt.arms:
                    for m in arm.matches:
                        names |= _names_of(m)
                uses.append((stmt, names))
                for arm in stmt.arms:
                    visit(arm.body)
            elif isinstance(stmt, (ResourceDecl, ResourceOverride)):
                uses.append((stmt, _names_of(stmt.title)))
                for attr in stmt.attributes:
                    uses.append((attr, _names_of(attr.value)))
            elif isinstance(stmt, ExprStatement):
                uses.append((stmt, _names_of(stmt.expr)))

    visit(manifest.statements)
    for def_node, var in defs:
        for use_node, names in uses:
            if var in names:
                yield def_node, use_node, var


def _names_of(expr) -> set[str]:
    return {name for _, name, _ in _use_events(expr, expr)}
