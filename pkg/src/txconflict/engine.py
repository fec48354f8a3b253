"""Pairwise conflict detection over transactional functions.

Three detectors run per unordered function pair: direct read-write,
direct write-write, and call-mediated (transitive) overlap. Per variable
the kinds are disjoint with precedence WWC > RWC > FCC, so corpus-level
kind counts partition the conflict population. The transitive closure
walks resolved calls with a visited set, so cyclic call graphs terminate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from .access import READ, WRITE, AccessMaps, build_access_maps
from .nodes import Contract, Function, SourceUnit

RWC = "RWC"
WWC = "WWC"
FCC = "FCC"
KINDS = (RWC, WWC, FCC)

HIGH = "High"
MEDIUM = "Medium"
LOW = "Low"


@dataclass(frozen=True)
class Conflict:
    """An unordered function pair sharing state with at least one write."""

    first: str
    second: str
    kind: str
    variables: tuple[str, ...]
    severity: str
    description: str


@dataclass
class DetectionState:
    """Pair-enumeration hygiene: each unordered pair is evaluated once."""

    visited_pairs: set[tuple[str, str]] = field(default_factory=set)
    conflicts: list[Conflict] = field(default_factory=list)


@dataclass
class ConflictMatrix:
    """Boolean conflict marks over a contract's transactional functions."""

    functions: list[str]
    cells: set[tuple[str, str]] = field(default_factory=set)

    def cell(self, a: str, b: str) -> bool:
        if a == b:
            return False
        return (min(a, b), max(a, b)) in self.cells


@dataclass
class AnalysisResult:
    """Everything the reports need for one contract."""

    contract: Contract
    qualifier: str
    path: str
    conflicts: list[Conflict]
    matrix: ConflictMatrix
    conflict_percentage: float
    counts_by_kind: dict[str, int]
    analysis_time: float = 0.0  # milliseconds, filled by the driver


def should_skip(f: Function) -> bool:
    """True for functions that cannot be the root of a transaction race:
    private/internal (not directly invocable), pure (touch no state),
    constructors (run once at deployment), and empty bodies."""
    if f.is_constructor:
        return True
    if f.visibility in ("private", "internal"):
        return True
    if f.mutability == "pure":
        return True
    return f.body is None or not f.body.statements


def is_read_only(f: Function) -> bool:
    return f.mutability in ("view", "pure")


def assign_severity(kind: str, write_write: bool = False) -> str:
    """Policy table: write-write collisions rank highest; for FCC,
    `write_write` says whether the transitive overlap is write-write."""
    if kind == WWC:
        return HIGH
    if kind == RWC:
        return MEDIUM
    return HIGH if write_write else MEDIUM


def _pair(f1: str, f2: str) -> tuple[str, str]:
    return (f1, f2) if f1 <= f2 else (f2, f1)


def _vlist(variables: Iterable[str]) -> str:
    return ", ".join(variables)


def detect_rwc(f1: str, f2: str, maps: AccessMaps) -> Conflict | None:
    """Direct read-write overlap. Variables both functions write are left
    to detect_wwc so each variable reports under exactly one kind."""
    r1, w1 = maps.reads.get(f1, set()), maps.writes.get(f1, set())
    r2, w2 = maps.reads.get(f2, set()), maps.writes.get(f2, set())
    shared = ((r1 & w2) | (r2 & w1)) - (w1 & w2)
    if not shared:
        return None
    first, second = _pair(f1, f2)
    variables = tuple(sorted(shared))
    return Conflict(
        first, second, RWC, variables, assign_severity(RWC),
        f"{first} and {second} have a read-write overlap on {_vlist(variables)}.",
    )


def detect_wwc(f1: str, f2: str, maps: AccessMaps) -> Conflict | None:
    shared = maps.writes.get(f1, set()) & maps.writes.get(f2, set())
    if not shared:
        return None
    first, second = _pair(f1, f2)
    variables = tuple(sorted(shared))
    return Conflict(
        first, second, WWC, variables, assign_severity(WWC),
        f"{first} and {second} both write {_vlist(variables)}.",
    )


def recursive_access(f: str, maps: AccessMaps) -> set[tuple[str, str]]:
    """Union of (variable, mode) over f and everything reachable through
    resolved calls. Each function contributes once; cycles terminate."""
    result: set[tuple[str, str]] = set()
    visited: set[str] = set()
    stack = [f]
    while stack:
        key = stack.pop()
        if key in visited:
            continue
        visited.add(key)
        result.update((v, READ) for v in maps.reads.get(key, ()))
        result.update((v, WRITE) for v in maps.writes.get(key, ()))
        stack.extend(maps.calls.get(key, ()))
    return result


def detect_fcc(f1: str, f2: str, maps: AccessMaps) -> Conflict | None:
    """Call-mediated overlap: shared variables with a write in the pair's
    transitive access sets, excluding anything the direct detectors
    already report for this pair."""
    t1, t2 = recursive_access(f1, maps), recursive_access(f2, maps)
    modes1: dict[str, set[str]] = {}
    modes2: dict[str, set[str]] = {}
    for v, m in t1:
        modes1.setdefault(v, set()).add(m)
    for v, m in t2:
        modes2.setdefault(v, set()).add(m)
    r1, w1 = maps.reads.get(f1, set()), maps.writes.get(f1, set())
    r2, w2 = maps.reads.get(f2, set()), maps.writes.get(f2, set())
    direct = (r1 & w2) | (r2 & w1) | (w1 & w2)
    shared = []
    for v in modes1.keys() & modes2.keys():
        if v in direct:
            continue
        if WRITE in modes1[v] or WRITE in modes2[v]:
            shared.append(v)
    if not shared:
        return None
    write_write = any(WRITE in modes1[v] and WRITE in modes2[v] for v in shared)
    first, second = _pair(f1, f2)
    variables = tuple(sorted(shared))
    return Conflict(
        first, second, FCC, variables, assign_severity(FCC, write_write),
        f"{first} and {second} reach {_vlist(variables)} through nested calls "
        "with at least one write.",
    )


def conflict_percentage(matrix: ConflictMatrix) -> float:
    """Conflicting pairs over all pairs of the contract's transactional
    functions; 0 when fewer than two such functions exist."""
    n = len(matrix.functions)
    pairs = n * (n - 1) // 2
    return len(matrix.cells) / pairs if pairs else 0.0


def _conservative_conflict(f1: str, f2: str, maps: AccessMaps) -> Conflict | None:
    externals = sorted(
        maps.unresolved_calls.get(f1, set()) | maps.unresolved_calls.get(f2, set())
    )
    if not externals:
        return None
    first, second = _pair(f1, f2)
    variables = tuple(f"<external:{name}>" for name in externals)
    return Conflict(
        first, second, FCC, variables, assign_severity(FCC),
        f"{first} and {second} may conflict through unresolved external calls: "
        f"{_vlist(externals)}.",
    )


def detect_all(
    units: Iterable[SourceUnit],
    maps: AccessMaps | None = None,
    conservative_external: bool = False,
) -> list[AnalysisResult]:
    """Run all detectors over every unordered pair of transactional
    functions, including cross-contract pairs, and group the findings per
    contract. Output order is canonical and independent of input order."""
    units = list(units)
    if maps is None or maps.index is None:
        maps = build_access_maps(units)
    index = maps.index
    assert index is not None

    started = time.monotonic()
    tx_keys: dict[str, list[str]] = {}
    for qualifier in sorted(index.contracts):
        contract = index.contracts[qualifier]
        tx_keys[qualifier] = sorted(
            f"{qualifier}.{f.key}" for f in contract.functions if not should_skip(f)
        )
    all_keys = sorted(k for keys in tx_keys.values() for k in keys)

    state = DetectionState()
    for i, f1 in enumerate(all_keys):
        for f2 in all_keys[i + 1:]:
            pair = _pair(f1, f2)
            if pair in state.visited_pairs:
                continue
            state.visited_pairs.add(pair)
            if is_read_only(index.functions[f1]) and is_read_only(index.functions[f2]):
                continue
            found = [
                c
                for c in (
                    detect_rwc(f1, f2, maps),
                    detect_wwc(f1, f2, maps),
                    detect_fcc(f1, f2, maps),
                )
                if c is not None
            ]
            if not found and conservative_external:
                marker = _conservative_conflict(f1, f2, maps)
                if marker is not None:
                    found = [marker]
            state.conflicts.extend(found)

    elapsed_ms = (time.monotonic() - started) * 1000.0
    per_contract_ms = elapsed_ms / len(index.contracts) if index.contracts else 0.0

    results: list[AnalysisResult] = []
    for qualifier in sorted(index.contracts):
        keys = tx_keys[qualifier]
        keyset = set(keys)
        own = sorted(
            (
                c
                for c in state.conflicts
                if index.owner[c.first] == qualifier or index.owner[c.second] == qualifier
            ),
            key=lambda c: (c.first, c.second, c.kind),
        )
        cells = {
            _pair(c.first, c.second)
            for c in own
            if c.first in keyset and c.second in keyset
        }
        matrix = ConflictMatrix(functions=keys, cells=cells)
        counts = {kind: sum(1 for c in own if c.kind == kind) for kind in KINDS}
        results.append(
            AnalysisResult(
                contract=index.contracts[qualifier],
                qualifier=qualifier,
                path=index.paths[qualifier],
                conflicts=own,
                matrix=matrix,
                conflict_percentage=conflict_percentage(matrix),
                counts_by_kind=counts,
                analysis_time=per_contract_ms,
            )
        )
    return results
