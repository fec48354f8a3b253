"""Contract data model: declarations, statements, expressions, pretty-printer.

Type names are stored as canonical text (rebuilt from parsed pieces, not
sliced from the source), so two parses of equivalent declarations compare
equal regardless of original spacing.
"""

from __future__ import annotations

from dataclasses import dataclass, field


# --------------------------------------------------------------------------
# Expressions
# --------------------------------------------------------------------------

@dataclass
class Expr:
    line: int = 0


@dataclass
class Ident(Expr):
    name: str = ""


@dataclass
class Literal(Expr):
    text: str = ""
    kind: str = "number"  # number | string | bool


@dataclass
class Unary(Expr):
    op: str = ""
    operand: Expr | None = None
    prefix: bool = True


@dataclass
class Binary(Expr):
    op: str = ""
    left: Expr | None = None
    right: Expr | None = None


@dataclass
class Ternary(Expr):
    cond: Expr | None = None
    then: Expr | None = None
    other: Expr | None = None


@dataclass
class Call(Expr):
    callee: Expr | None = None
    args: list[Expr] = field(default_factory=list)


@dataclass
class Member(Expr):
    base: Expr | None = None
    member: str = ""


@dataclass
class Index(Expr):
    base: Expr | None = None
    index: Expr | None = None


@dataclass
class TupleExpr(Expr):
    items: list[Expr] = field(default_factory=list)


@dataclass
class New(Expr):
    type_name: str = ""


ASSIGN_OPS = frozenset({"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="})
COMPOUND_ASSIGN_OPS = ASSIGN_OPS - {"="}


# --------------------------------------------------------------------------
# Statements
# --------------------------------------------------------------------------

@dataclass
class Stmt:
    line: int = 0


@dataclass
class Block(Stmt):
    statements: list[Stmt] = field(default_factory=list)


@dataclass
class VarDeclStmt(Stmt):
    type_name: str = ""
    location: str = "default"
    name: str = ""
    init: Expr | None = None


@dataclass
class ExprStmt(Stmt):
    expr: Expr | None = None


@dataclass
class IfStmt(Stmt):
    cond: Expr | None = None
    then: Stmt | None = None
    otherwise: Stmt | None = None


@dataclass
class ForStmt(Stmt):
    init: Stmt | None = None  # VarDeclStmt or ExprStmt
    cond: Expr | None = None
    post: Expr | None = None
    body: Stmt | None = None


@dataclass
class WhileStmt(Stmt):
    cond: Expr | None = None
    body: Stmt | None = None


@dataclass
class ReturnStmt(Stmt):
    value: Expr | None = None


@dataclass
class EmitStmt(Stmt):
    call: Call | None = None


# --------------------------------------------------------------------------
# Declarations
# --------------------------------------------------------------------------

@dataclass
class Parameter:
    name: str  # may be empty for unnamed parameters
    type_name: str
    location: str = "default"  # calldata | memory | storage | default


@dataclass
class StateVariable:
    name: str
    type_name: str
    visibility: str  # public | private | internal
    is_constant: bool
    declaring_contract: str
    line: int = 0
    initializer: Expr | None = None


@dataclass
class Event:
    name: str
    parameters: list[Parameter] = field(default_factory=list)


@dataclass
class ModifierDef:
    """A modifier declaration; its body is inlined into using functions."""

    name: str
    parameters: list[Parameter] = field(default_factory=list)
    body: Block | None = None
    line: int = 0


@dataclass
class Function:
    name: str
    parameters: list[Parameter] = field(default_factory=list)
    returns: list[Parameter] = field(default_factory=list)
    visibility: str = "public"  # public | private | internal | external
    mutability: str = "nonpayable"  # pure | view | payable | nonpayable
    modifier_invocations: list[Call] = field(default_factory=list)
    body: Block | None = None
    is_constructor: bool = False
    is_fallback: bool = False
    is_receive: bool = False
    line: int = 0
    # First and last source line of the declaration, including the body.
    span: tuple[int, int] = (0, 0)
    key: str = ""  # name/arity, unique within the contract

    @property
    def modifiers(self) -> list[str]:
        names = []
        for inv in self.modifier_invocations:
            if isinstance(inv.callee, Ident):
                names.append(inv.callee.name)
        return names

    @property
    def arity(self) -> int:
        return len(self.parameters)


@dataclass
class Contract:
    name: str
    state_variables: list[StateVariable] = field(default_factory=list)
    functions: list[Function] = field(default_factory=list)
    events: list[Event] = field(default_factory=list)
    modifiers: list[ModifierDef] = field(default_factory=list)
    line: int = 0

    def state_variable_names(self) -> set[str]:
        return {v.name for v in self.state_variables}

    def event_names(self) -> set[str]:
        return {e.name for e in self.events}


@dataclass
class SourceUnit:
    path: str
    pragma: str | None = None
    contracts: list[Contract] = field(default_factory=list)


# --------------------------------------------------------------------------
# Pretty-printer
# --------------------------------------------------------------------------
# Nested expressions are printed fully parenthesized; parentheses are pure
# grouping in the grammar, so reparsing the output reproduces the same tree.

def expr_source(e: Expr) -> str:
    if isinstance(e, Ident):
        return e.name
    if isinstance(e, Literal):
        if e.kind == "string":
            return '"' + e.text + '"'
        return e.text
    if isinstance(e, Unary):
        inner = expr_source(e.operand)
        if e.op == "delete":
            return f"(delete {inner})"
        if e.prefix:
            return f"({e.op}{inner})"
        return f"({inner}{e.op})"
    if isinstance(e, Binary):
        return f"({expr_source(e.left)} {e.op} {expr_source(e.right)})"
    if isinstance(e, Ternary):
        return f"({expr_source(e.cond)} ? {expr_source(e.then)} : {expr_source(e.other)})"
    if isinstance(e, Call):
        args = ", ".join(expr_source(a) for a in e.args)
        return f"{expr_source(e.callee)}({args})"
    if isinstance(e, Member):
        return f"{expr_source(e.base)}.{e.member}"
    if isinstance(e, Index):
        return f"{expr_source(e.base)}[{expr_source(e.index)}]"
    if isinstance(e, TupleExpr):
        return "(" + ", ".join(expr_source(i) for i in e.items) + ")"
    if isinstance(e, New):
        return f"new {e.type_name}"
    raise TypeError(f"unprintable expression: {e!r}")


def _param_source(p: Parameter) -> str:
    parts = [p.type_name]
    if p.location != "default":
        parts.append(p.location)
    if p.name:
        parts.append(p.name)
    return " ".join(parts)


def stmt_source(s: Stmt, indent: int = 0) -> str:
    pad = "    " * indent
    if isinstance(s, Block):
        lines = [pad + "{"]
        for inner in s.statements:
            lines.append(stmt_source(inner, indent + 1))
        lines.append(pad + "}")
        return "\n".join(lines)
    if isinstance(s, VarDeclStmt):
        loc = f" {s.location}" if s.location != "default" else ""
        init = f" = {expr_source(s.init)}" if s.init is not None else ""
        return f"{pad}{s.type_name}{loc} {s.name}{init};"
    if isinstance(s, ExprStmt):
        return f"{pad}{expr_source(s.expr)};"
    if isinstance(s, IfStmt):
        text = f"{pad}if ({expr_source(s.cond)})\n{stmt_source(s.then, indent)}"
        if s.otherwise is not None:
            text += f"\n{pad}else\n{stmt_source(s.otherwise, indent)}"
        return text
    if isinstance(s, ForStmt):
        init = stmt_source(s.init, 0).strip() if s.init is not None else ";"
        cond = expr_source(s.cond) if s.cond is not None else ""
        post = expr_source(s.post) if s.post is not None else ""
        return f"{pad}for ({init} {cond}; {post})\n{stmt_source(s.body, indent)}"
    if isinstance(s, WhileStmt):
        return f"{pad}while ({expr_source(s.cond)})\n{stmt_source(s.body, indent)}"
    if isinstance(s, ReturnStmt):
        if s.value is None:
            return f"{pad}return;"
        return f"{pad}return {expr_source(s.value)};"
    if isinstance(s, EmitStmt):
        return f"{pad}emit {expr_source(s.call)};"
    raise TypeError(f"unprintable statement: {s!r}")


def _function_source(fn: Function, indent: int = 1) -> str:
    pad = "    " * indent
    params = ", ".join(_param_source(p) for p in fn.parameters)
    if fn.is_constructor:
        head = f"{pad}constructor({params})"
        if fn.mutability == "payable":
            head += " payable"
    elif fn.is_fallback or fn.is_receive:
        head = f"{pad}{fn.name}({params}) external"
        if fn.mutability == "payable":
            head += " payable"
    else:
        head = f"{pad}function {fn.name}({params}) {fn.visibility}"
        if fn.mutability != "nonpayable":
            head += f" {fn.mutability}"
    for inv in fn.modifier_invocations:
        head += f" {expr_source(inv)}" if inv.args else f" {expr_source(inv.callee)}"
    if fn.returns:
        rets = ", ".join(_param_source(p) for p in fn.returns)
        head += f" returns ({rets})"
    if fn.body is None:
        return head + ";"
    return head + "\n" + stmt_source(fn.body, indent)


def to_source(unit: SourceUnit) -> str:
    """Render a parsed unit back to compilable-shaped source text."""
    out: list[str] = []
    if unit.pragma is not None:
        out.append(f"pragma solidity {unit.pragma};")
        out.append("")
    for c in unit.contracts:
        out.append(f"contract {c.name} {{")
        for v in c.state_variables:
            parts = [v.type_name, v.visibility]
            if v.is_constant:
                parts.append("constant")
            parts.append(v.name)
            decl = "    " + " ".join(parts)
            if v.initializer is not None:
                decl += f" = {expr_source(v.initializer)}"
            out.append(decl + ";")
        for e in c.events:
            params = ", ".join(_param_source(p) for p in e.parameters)
            out.append(f"    event {e.name}({params});")
        for m in c.modifiers:
            params = ", ".join(_param_source(p) for p in m.parameters)
            out.append(f"    modifier {m.name}({params})")
            out.append(stmt_source(m.body, 1))
        for fn in c.functions:
            out.append(_function_source(fn))
        out.append("}")
        out.append("")
    return "\n".join(out)
