"""Seeded random manifest generator.

Produces small manifests over the supported grammar subset, biased toward
weakness-prone names and values so that rule matching and taint tracking
both get exercised.  Generation builds an AST and pretty-prints it, so
every generated text is parseable by construction.
"""

from __future__ import annotations

import random

from .nodes import (
    ArrayLiteral,
    Assignment,
    AttributeNode,
    BoolLiteral,
    CaseArm,
    CaseStatement,
    ClassDef,
    ExprStatement,
    FunctionCall,
    HashLiteral,
    IfStatement,
    InterpolatedString,
    Manifest,
    NumberLiteral,
    Parameter,
    ResourceDecl,
    SelectorArm,
    SelectorExpr,
    SourceLocation,
    StrLiteral,
    UndefLiteral,
    VarRef,
)
from .printer import manifest_source

_LOC = SourceLocation("synthetic.pp", 1, 1)

VAR_NAMES = ["app_name", "db_password", "admin_user", "bind_addr", "svc_url", "greeting"]
STRING_VALUES = [
    "",
    "admin",
    "0.0.0.0",
    "http://internal:8080",
    "https://secure:8443",
    "secret123",
    "plain",
    "x1",
]
FUNCTION_NAMES = ["join", "pick", "sha1", "md5", "template", "upcase"]
RESOURCE_TYPES = [
    "file",
    "file_line",
    "exec",
    "mysql::db",
    "haproxy::listen",
    "jenkins::job",
    "custom::svc",
    "network::iface",
]
ATTRIBUTE_NAMES = ["ensure", "content", "command", "password", "user", "line", "path", "url", "vip"]


class ManifestGenerator:
    def __init__(self, rng: random.Random, max_statements: int = 12, max_depth: int = 2,
                 max_branches: int = 5):
        self.rng = rng
        self.max_statements = max_statements
        self.max_depth = max_depth
        self.max_branches = max_branches
        self._branch_budget = max_branches

    def manifest_text(self) -> str:
        self._branch_budget = self.max_branches
        count = self.rng.randint(1, self.max_statements)
        statements = tuple(self._statement(0) for _ in range(count))
        return manifest_source(Manifest("synthetic.pp", statements, ""))

    # -- statements ------------------------------------------------------

    def _statement(self, depth: int):
        roll = self.rng.random()
        branching_ok = depth < self.max_depth and self._branch_budget > 0
        if roll < 0.45:
            return self._assignment()
        if roll < 0.65:
            return self._resource()
        if roll < 0.80 and branching_ok:
            self._branch_budget -= 1
            return self._if(depth)
        if roll < 0.88 and branching_ok:
            self._branch_budget -= 1
            return self._case(depth)
        if roll < 0.93 and depth == 0:
            return self._class(depth)
        if roll < 0.97:
            return ExprStatement(
                FunctionCall("notice", (self._expr(1),), _LOC), _LOC
            )
        return self._assignment()

    def _assignment(self) -> Assignment:
        return Assignment(self.rng.choice(VAR_NAMES), self._expr(0), _LOC)

    def _block(self, depth: int, max_len: int = 3):
        return tuple(self._statement(depth) for _ in range(self.rng.randint(1, max_len)))

    def _if(self, depth: int) -> IfStatement:
        condition = self.rng.choice([self._var(), BoolLiteral(True, _LOC), self._var()])
        then_body = self._block(depth + 1)
        else_body = self._block(depth + 1) if self.rng.random() < 0.6 else ()
        return IfStatement(condition, then_body, else_body, _LOC)

    def _case(self, depth: int) -> CaseStatement:
        arms = []
        for _ in range(self.rng.randint(1, 2)):
            matches = (StrLiteral(self.rng.choice(["a", "b", "c"]), _LOC),)
            arms.append(CaseArm(matches, self._block(depth + 1, 2), False, _LOC))
        if self.rng.random() < 0.5:
            arms.append(CaseArm((), self._block(depth + 1, 2), True, _LOC))
        return CaseStatement(self._var(), tuple(arms), _LOC)

    def _class(self, depth: int) -> ClassDef:
        params = []
        for name in self.rng.sample(VAR_NAMES, self.rng.randint(0, 2)):
            default = None
            if self.rng.random() < 0.8:
                default = self._leaf_expr()
            params.append(Parameter(name, default, _LOC))
        name = f"gen::cls{self.rng.randint(0, 9)}"
        return ClassDef(name, tuple(params), self._block(depth + 1), _LOC)

    def _resource(self) -> ResourceDecl:
        rtype = self.rng.choice(RESOURCE_TYPES)
        title = self.rng.choice(
            [StrLiteral(f"res{self.rng.randint(0, 99)}", _LOC), self._var()]
        )
        names = self.rng.sample(ATTRIBUTE_NAMES, self.rng.randint(1, 3))
        attrs = tuple(AttributeNode(n, self._expr(1), _LOC) for n in names)
        return ResourceDecl(rtype, title, attrs, _LOC)

    # -- expressions -----------------------------------------------------

    def _var(self) -> VarRef:
        return VarRef(self.rng.choice(VAR_NAMES), _LOC)

    def _leaf_expr(self):
        roll = self.rng.random()
        if roll < 0.55:
            return StrLiteral(self.rng.choice(STRING_VALUES), _LOC)
        if roll < 0.7:
            return self._var()
        if roll < 0.8:
            return NumberLiteral(self.rng.randint(0, 100), _LOC)
        if roll < 0.9:
            return UndefLiteral(_LOC)
        return BoolLiteral(self.rng.random() < 0.5, _LOC)

    def _expr(self, depth: int):
        roll = self.rng.random()
        if depth >= 2 or roll < 0.45:
            return self._leaf_expr()
        if roll < 0.6:
            parts = ["v=", self._var()]
            if self.rng.random() < 0.5:
                parts += [":", self._var()]
            return InterpolatedString(tuple(parts), _LOC)
        if roll < 0.75:
            name = self.rng.choice(FUNCTION_NAMES)
            args = tuple(self._expr(depth + 1) for _ in range(self.rng.randint(1, 2)))
            return FunctionCall(name, args, _LOC)
        if roll < 0.85:
            items = tuple(self._expr(depth + 1) for _ in range(self.rng.randint(1, 3)))
            return ArrayLiteral(items, _LOC)
        if roll < 0.93:
            entries = tuple(
                (StrLiteral(f"k{i}", _LOC), self._expr(depth + 1))
                for i in range(self.rng.randint(1, 2))
            )
            return HashLiteral(entries, _LOC)
        arms = [
            SelectorArm(StrLiteral("a", _LOC), self._expr(depth + 1), False, _LOC),
            SelectorArm(None, self._expr(depth + 1), True, _LOC),
        ]
        return SelectorExpr(self._var(), tuple(arms), _LOC)


def generate_manifest_text(seed: int, max_statements: int = 12, max_depth: int = 2) -> str:
    """One deterministic pseudo-random manifest for the given seed."""
    rng = random.Random(seed)
    return ManifestGenerator(rng, max_statements, max_depth).manifest_text()
