"""Per-function state-variable access extraction.

Materializes the R (reads), W (writes), C (calls) maps that conflict
detection consumes. Bodies are walked with a block-scope stack so locals
and parameters shadow same-named state variables; modifier bodies are
inlined into their host function; every call site is classified as
same-contract, cross-contract, builtin, or unresolved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .lexer import is_type_keyword
from .nodes import (
    ASSIGN_OPS,
    Binary,
    Block,
    Call,
    COMPOUND_ASSIGN_OPS,
    Contract,
    EmitStmt,
    Expr,
    ExprStmt,
    ForStmt,
    Function,
    Ident,
    IfStmt,
    Index,
    Literal,
    Member,
    ModifierDef,
    New,
    ReturnStmt,
    SourceUnit,
    StateVariable,
    Stmt,
    Ternary,
    TupleExpr,
    Unary,
    VarDeclStmt,
    WhileStmt,
)

READ = "read"
WRITE = "write"
_RW = "rw"

# Global builtins whose invocation is not a user function call.
_BUILTIN_FUNCTIONS = frozenset({
    "require", "assert", "revert", "keccak256", "sha256", "ripemd160",
    "ecrecover", "addmod", "mulmod", "selfdestruct", "blockhash",
    "gasleft", "payable", "type",
})
# Value namespaces; members of these are environment reads, never calls.
_BUILTIN_NAMESPACES = frozenset({"msg", "block", "tx", "abi"})
_ARRAY_MUTATORS = frozenset({"push", "pop"})


@dataclass(frozen=True)
class AccessRecord:
    """One state-variable touch: qualified name, read or write, source line."""

    variable: str
    mode: str
    site: int


@dataclass(frozen=True)
class CallSite:
    """A potentially resolvable call. receiver None means the own contract."""

    receiver: str | None
    name: str
    arity: int
    site: int


class FunctionIndex:
    """Qualified lookup over every contract and function in a corpus.

    Contract qualifiers are the declared names; when several files declare
    the same contract name, later ones (sorted by path, then declaration
    order) get an ``@N`` suffix so their storage stays distinct.
    """

    def __init__(self, units: Iterable[SourceUnit]):
        self.contracts: dict[str, Contract] = {}
        self.paths: dict[str, str] = {}
        self.functions: dict[str, Function] = {}
        self.owner: dict[str, str] = {}
        self._by_name: dict[str, list[str]] = {}
        for unit in sorted(units, key=lambda u: u.path):
            for contract in unit.contracts:
                prior = self._by_name.setdefault(contract.name, [])
                qualifier = contract.name if not prior else f"{contract.name}@{len(prior) + 1}"
                prior.append(qualifier)
                self.contracts[qualifier] = contract
                self.paths[qualifier] = unit.path
                for fn in contract.functions:
                    key = f"{qualifier}.{fn.key}"
                    self.functions[key] = fn
                    self.owner[key] = qualifier

    def contract_names(self) -> set[str]:
        return set(self._by_name)

    def resolve_in(self, qualifier: str, name: str, arity: int) -> set[str]:
        """Match by name and arity inside one contract; fall back to name only."""
        contract = self.contracts.get(qualifier)
        if contract is None:
            return set()
        exact = [f for f in contract.functions if f.name == name and f.arity == arity]
        matches = exact or [f for f in contract.functions if f.name == name]
        return {f"{qualifier}.{f.key}" for f in matches}

    def resolve_named(self, contract_name: str, name: str, arity: int) -> set[str]:
        """Resolve against every contract declared with this raw name."""
        keys: set[str] = set()
        for qualifier in self._by_name.get(contract_name, ()):
            keys |= self.resolve_in(qualifier, name, arity)
        return keys


@dataclass
class AccessMaps:
    """Algorithm inputs: per-function reads, writes, callees, unresolved names."""

    reads: dict[str, set[str]] = field(default_factory=dict)
    writes: dict[str, set[str]] = field(default_factory=dict)
    calls: dict[str, set[str]] = field(default_factory=dict)
    unresolved_calls: dict[str, set[str]] = field(default_factory=dict)
    records: dict[str, list[AccessRecord]] = field(default_factory=dict)
    index: FunctionIndex | None = None


class _BodyWalker:
    """Per-contract walker; walk_function resets per-function state."""

    def __init__(self, contract: Contract, qualifier: str, contract_names: set[str]):
        self.qualifier = qualifier
        self.contract_names = contract_names
        self.state_vars = {v.name for v in contract.state_variables}
        self.event_names = set(contract.event_names())
        self.modifier_defs = {m.name: m for m in contract.modifiers}
        self.records: list[AccessRecord] = []
        self.sites: list[CallSite] = []
        self.unresolved: set[str] = set()
        self.scopes: list[set[str]] = []
        self.site_line = 0  # nonzero while inlining a modifier body

    def walk_function(self, fn: Function) -> tuple[list[AccessRecord], list[CallSite], set[str]]:
        self.records, self.sites, self.unresolved = [], [], set()
        outer = {p.name for p in fn.parameters if p.name}
        outer |= {p.name for p in fn.returns if p.name}
        self.scopes = [outer]
        for inv in fn.modifier_invocations:
            for arg in inv.args:
                self.expr(arg, READ)
            name = inv.callee.name if isinstance(inv.callee, Ident) else ""
            definition = self.modifier_defs.get(name)
            if definition is not None:
                self._inline_modifier(definition, inv.line or fn.line)
        if fn.body is not None:
            self.stmt(fn.body)
        return self.records, self.sites, self.unresolved

    def _inline_modifier(self, definition: ModifierDef, line: int) -> None:
        # modifier code runs inside the call, so its accesses belong to the
        # host function; record them on the invocation line
        saved_scopes, saved_line = self.scopes, self.site_line
        self.scopes = [{p.name for p in definition.parameters if p.name}]
        self.site_line = line
        try:
            self.stmt(definition.body)
        finally:
            self.scopes, self.site_line = saved_scopes, saved_line

    # -- helpers --------------------------------------------------------------

    def _shadowed(self, name: str) -> bool:
        return any(name in frame for frame in self.scopes)

    def _line(self, node: Expr | Stmt) -> int:
        return self.site_line or node.line

    def _touch(self, node: Expr, name: str, mode: str) -> None:
        if name not in self.state_vars or self._shadowed(name):
            return
        variable = f"{self.qualifier}.{name}"
        line = self._line(node)
        if mode in (READ, _RW):
            self.records.append(AccessRecord(variable, READ, line))
        if mode in (WRITE, _RW):
            self.records.append(AccessRecord(variable, WRITE, line))

    # -- statements -------------------------------------------------------------

    def stmt(self, s: Stmt) -> None:
        if isinstance(s, Block):
            self.scopes.append(set())
            for inner in s.statements:
                self.stmt(inner)
            self.scopes.pop()
        elif isinstance(s, VarDeclStmt):
            if s.init is not None:
                self.expr(s.init, READ)
            if s.name:
                self.scopes[-1].add(s.name)
        elif isinstance(s, ExprStmt):
            self.expr(s.expr, READ)
        elif isinstance(s, IfStmt):
            self.expr(s.cond, READ)
            self.stmt(s.then)
            if s.otherwise is not None:
                self.stmt(s.otherwise)
        elif isinstance(s, ForStmt):
            self.scopes.append(set())
            if s.init is not None:
                self.stmt(s.init)
            if s.cond is not None:
                self.expr(s.cond, READ)
            if s.post is not None:
                self.expr(s.post, READ)
            self.stmt(s.body)
            self.scopes.pop()
        elif isinstance(s, WhileStmt):
            self.expr(s.cond, READ)
            self.stmt(s.body)
        elif isinstance(s, ReturnStmt):
            if s.value is not None:
                self.expr(s.value, READ)
        elif isinstance(s, EmitStmt):
            for arg in s.call.args:
                self.expr(arg, READ)

    # -- expressions -------------------------------------------------------------

    def expr(self, e: Expr, mode: str) -> None:
        if isinstance(e, Ident):
            self._touch(e, e.name, mode)
        elif isinstance(e, Binary):
            if e.op in ASSIGN_OPS:
                self.expr(e.left, _RW if e.op in COMPOUND_ASSIGN_OPS else WRITE)
                self.expr(e.right, READ)
            else:
                self.expr(e.left, READ)
                self.expr(e.right, READ)
        elif isinstance(e, Unary):
            if e.op in ("++", "--"):
                self.expr(e.operand, _RW)
            elif e.op == "delete":
                self.expr(e.operand, WRITE)
            else:
                self.expr(e.operand, READ)
        elif isinstance(e, Ternary):
            self.expr(e.cond, READ)
            self.expr(e.then, mode)
            self.expr(e.other, mode)
        elif isinstance(e, Index):
            # element writes attribute to the base variable
            self.expr(e.base, mode)
            self.expr(e.index, READ)
        elif isinstance(e, Member):
            self.expr(e.base, mode)
        elif isinstance(e, TupleExpr):
            for item in e.items:
                self.expr(item, mode)
        elif isinstance(e, Call):
            self._call(e)
        elif isinstance(e, (Literal, New)):
            pass

    def _call(self, call: Call) -> None:
        for arg in call.args:
            self.expr(arg, READ)
        callee = call.callee
        if isinstance(callee, Member):
            if callee.member in _ARRAY_MUTATORS:
                self.expr(callee.base, WRITE)
                return
            base = callee.base
            if isinstance(base, Ident) and not self._shadowed(base.name):
                name = base.name
                if name in _BUILTIN_NAMESPACES:
                    return
                if name == "this":
                    self.sites.append(CallSite(None, callee.member, len(call.args), self._line(call)))
                    return
                if name in self.state_vars:
                    # calling through a stored reference reads the variable;
                    # the target address is not statically known
                    self._touch(base, name, READ)
                    self.unresolved.add(callee.member)
                    return
                if name in self.contract_names:
                    self.sites.append(CallSite(name, callee.member, len(call.args), self._line(call)))
                    return
                self.unresolved.add(callee.member)
                return
            self.expr(base, READ)
            self.unresolved.add(callee.member)
            return
        if isinstance(callee, Ident):
            name = callee.name
            if name in _BUILTIN_FUNCTIONS or is_type_keyword(name):
                return
            if name in self.event_names:
                return
            if self._shadowed(name):
                self.unresolved.add(name)
                return
            if name in self.state_vars:
                self._touch(callee, name, READ)
                self.unresolved.add(name)
                return
            self.sites.append(CallSite(None, name, len(call.args), self._line(call)))
            return
        if isinstance(callee, New):
            # array allocation or contract creation, not a call edge
            return
        # computed callee, e.g. an indexed or ternary expression
        self.expr(callee, READ)
        self.unresolved.add("<dynamic>")


def _clamp_records(fn: Function, records: list[AccessRecord], constants: set[str]) -> list[AccessRecord]:
    """Enforce declared mutability: pure touches nothing, view never writes.
    Constant variables are compile-time values, never written storage."""
    if fn.mutability == "pure":
        return []
    out = []
    for r in records:
        if r.mode == WRITE and (fn.mutability == "view" or r.variable in constants):
            continue
        out.append(r)
    return out


def _resolve_sites(
    index: FunctionIndex, qualifier: str, sites: list[CallSite], unresolved: set[str]
) -> tuple[set[str], set[str]]:
    resolved: set[str] = set()
    for site in sites:
        if site.receiver is None:
            targets = index.resolve_in(qualifier, site.name, site.arity)
        else:
            targets = index.resolve_named(site.receiver, site.name, site.arity)
        if targets:
            resolved |= targets
        else:
            unresolved.add(site.name)
    return resolved, unresolved


def build_access_maps(units: Iterable[SourceUnit]) -> AccessMaps:
    """Populate R/W/C and unresolved-call maps for every function of every unit."""
    index = FunctionIndex(units)
    maps = AccessMaps(index=index)
    names = index.contract_names()
    for qualifier in sorted(index.contracts):
        contract = index.contracts[qualifier]
        constants = {
            f"{qualifier}.{v.name}" for v in contract.state_variables if v.is_constant
        }
        walker = _BodyWalker(contract, qualifier, names)
        for fn in contract.functions:
            key = f"{qualifier}.{fn.key}"
            records, sites, unresolved = walker.walk_function(fn)
            records = _clamp_records(fn, records, constants)
            resolved, unresolved = _resolve_sites(index, qualifier, sites, unresolved)
            maps.records[key] = records
            maps.reads[key] = {r.variable for r in records if r.mode == READ}
            maps.writes[key] = {r.variable for r in records if r.mode == WRITE}
            maps.calls[key] = resolved
            maps.unresolved_calls[key] = unresolved
    return maps


def _single_contract_context(
    f: Function, vars: Iterable[StateVariable], modifiers: Iterable[ModifierDef]
) -> Contract:
    vars = list(vars)
    name = vars[0].declaring_contract if vars else "Contract"
    return Contract(name=name, state_variables=vars, functions=[f], modifiers=list(modifiers))


def _extract_sets(
    f: Function, vars: Iterable[StateVariable], modifiers: Iterable[ModifierDef]
) -> tuple[set[str], set[str]]:
    contract = _single_contract_context(f, vars, modifiers)
    walker = _BodyWalker(contract, contract.name, {contract.name})
    records, _, _ = walker.walk_function(f)
    constants = {
        f"{contract.name}.{v.name}" for v in contract.state_variables if v.is_constant
    }
    records = _clamp_records(f, records, constants)
    reads = {r.variable for r in records if r.mode == READ}
    writes = {r.variable for r in records if r.mode == WRITE}
    return reads, writes


def extract_reads(
    f: Function, vars: Iterable[StateVariable], modifiers: Iterable[ModifierDef] = ()
) -> set[str]:
    """Qualified state variables f reads, shadowing and mutability applied."""
    return _extract_sets(f, vars, modifiers)[0]


def extract_writes(
    f: Function, vars: Iterable[StateVariable], modifiers: Iterable[ModifierDef] = ()
) -> set[str]:
    """Qualified state variables f writes via assignment, ++/--, delete, push/pop."""
    return _extract_sets(f, vars, modifiers)[1]


def extract_calls(
    f: Function, contract: Contract, others: Iterable[Contract] = ()
) -> tuple[set[str], set[str]]:
    """(resolved function keys, unresolved raw callee names) for one function.

    `contract` is the declaring contract; `others` are additional parsed
    contracts available as cross-contract call targets.
    """
    unit = SourceUnit(path="<memory>", contracts=[contract, *others])
    index = FunctionIndex([unit])
    walker = _BodyWalker(contract, contract.name, index.contract_names())
    _, sites, unresolved = walker.walk_function(f)
    return _resolve_sites(index, contract.name, sites, unresolved)
