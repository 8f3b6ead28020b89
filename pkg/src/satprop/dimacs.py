"""DIMACS CNF ingestion and emission, random 3SAT generation, and the JSON
run-report format.

The parser is 3SAT-only: clauses of more than three distinct variables are
rejected with a diagnostic rather than split.  Diagnostics carry 1-based
line/column positions into the source text.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from . import __version__
from .clausal import EMPTY, TAUTOLOGY, Instance, canonicalize

_TOKEN = re.compile(r"\S+")


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str  # "error" | "warning"

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


@dataclass
class ParseResult:
    instance: Instance | None
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)

    @property
    def errors(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]

    @property
    def warnings(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity == "warning"]


def parse_dimacs(text: str) -> ParseResult:
    """Parse DIMACS CNF text into a canonical 3SAT instance.

    Comment lines start with 'c'; one 'p cnf <vars> <clauses>' problem line
    is required before any clause; clauses are nonzero integers terminated
    by 0 and may span lines.  Header/clause count mismatch and dropped
    tautologies are warnings; out-of-range literals, missing header, and
    clauses wider than 3 distinct variables are errors.
    """
    diagnostics: list[ParseDiagnostic] = []
    num_vars: int | None = None
    declared_clauses = 0
    raw_clauses: list[list[int]] = []
    has_empty = False
    tautologies = 0
    pending: list[int] = []
    pending_pos: tuple[int, int] | None = None

    def error(line: int, col: int, message: str) -> None:
        diagnostics.append(ParseDiagnostic(line, col, message, "error"))

    def warning(line: int, col: int, message: str) -> None:
        diagnostics.append(ParseDiagnostic(line, col, message, "warning"))

    def finish_clause(line: int, col: int) -> None:
        nonlocal has_empty, tautologies
        assert num_vars is not None
        start = pending_pos or (line, col)
        distinct = {abs(lit) for lit in pending}
        if len(distinct) > 3:
            error(start[0], start[1],
                  f"clause has {len(distinct)} distinct variables; this tool is 3SAT-only")
            return
        result = canonicalize(pending, num_vars)
        if result is TAUTOLOGY:
            tautologies += 1
            warning(start[0], start[1], "tautological clause dropped")
        elif result is EMPTY:
            has_empty = True
            warning(start[0], start[1], "empty clause: instance is trivially unsatisfiable")
            raw_clauses.append([])
        else:
            raw_clauses.append(list(pending))

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.lstrip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            col = line.index("p") + 1
            if num_vars is not None:
                error(lineno, col, "duplicate problem line")
                continue
            parts = stripped.split()
            if len(parts) != 4 or parts[1] != "cnf":
                error(lineno, col, f"malformed problem line: {stripped!r}")
                continue
            try:
                num_vars = int(parts[2])
                declared_clauses = int(parts[3])
            except ValueError:
                error(lineno, col, f"non-numeric counts in problem line: {stripped!r}")
                num_vars = None
            if num_vars is not None and (num_vars < 0 or declared_clauses < 0):
                error(lineno, col, "negative counts in problem line")
                num_vars = None
            continue
        for match in _TOKEN.finditer(line):
            token, col = match.group(), match.start() + 1
            if num_vars is None:
                error(lineno, col, "clause data before problem line")
                return ParseResult(None, diagnostics)
            try:
                lit = int(token)
            except ValueError:
                error(lineno, col, f"not an integer literal: {token!r}")
                continue
            if lit == 0:
                finish_clause(lineno, col)
                pending = []
                pending_pos = None
            else:
                if abs(lit) > num_vars:
                    error(lineno, col,
                          f"literal {lit} out of range for {num_vars} variables")
                    continue
                if pending_pos is None:
                    pending_pos = (lineno, col)
                pending.append(lit)

    last_line = text.count("\n") + 1
    if num_vars is None:
        error(last_line, 1, "missing problem line")
        return ParseResult(None, diagnostics)
    if pending:
        error(pending_pos[0], pending_pos[1], "clause not terminated by 0")
    parsed_count = len(raw_clauses) + tautologies
    if parsed_count != declared_clauses:
        warning(last_line, 1,
                f"header declares {declared_clauses} clauses, found {parsed_count}")

    if any(d.severity == "error" for d in diagnostics):
        return ParseResult(None, diagnostics)

    instance = Instance.from_raw(num_vars, [c for c in raw_clauses if c])
    if has_empty:
        instance = Instance(
            instance.num_vars, instance.clauses, True, instance.tautologies_dropped
        )
    if tautologies:
        instance = Instance(
            instance.num_vars, instance.clauses, instance.has_empty_clause, tautologies
        )
    return ParseResult(instance, diagnostics)


def emit_dimacs(instance: Instance) -> str:
    """Canonical emission: sorted literals, one clause per line.  Parsing
    the output reproduces the instance."""
    count = len(instance.clauses) + (1 if instance.has_empty_clause else 0)
    lines = [f"p cnf {instance.num_vars} {count}"]
    for clause in instance.clauses:
        lines.append(" ".join(str(lit) for lit in clause.as_ints()) + " 0")
    if instance.has_empty_clause:
        lines.append("0")
    return "\n".join(lines) + "\n"


def gen_random_3sat(n: int, m: int, seed: int) -> Instance:
    """Uniform random 3SAT: each clause picks 3 distinct variables with
    rng.sample(range(1, n+1), 3), sorts them ascending, then draws one
    polarity per variable with rng.random() < 0.5 meaning positive.
    Duplicate clauses are permitted.  Deterministic for a fixed seed."""
    if n < 3:
        raise ValueError(f"need at least 3 variables, got {n}")
    rng = random.Random(seed)
    raw = []
    for _ in range(m):
        vars_ = sorted(rng.sample(range(1, n + 1), 3))
        raw.append([v if rng.random() < 0.5 else -v for v in vars_])
    return Instance.from_raw(n, raw)


def mask_hex(mask: int) -> str:
    return f"0x{mask:02X}"


def build_report(
    *,
    instance: Instance,
    source: str,
    engine_verdict: str,
    empty_triple: Sequence[int] | None,
    cubes: Iterable[tuple[Sequence[int], int]],
    stats: dict[str, int],
    oracle_verdict: str | None,
    oracle_agrees: bool | None,
    assignment: dict[int, bool] | None,
    assignment_verified: bool | None,
    order: str,
    seeds: dict[str, Any],
    unconstrained_vars: Sequence[int] = (),
) -> dict[str, Any]:
    """Assemble the run-report document (see README for the schema)."""
    return {
        "tool": "satprop",
        "version": __version__,
        "source": source,
        "instance": {
            "num_vars": instance.num_vars,
            "num_clauses": len(instance.clauses),
            "tautologies_dropped": instance.tautologies_dropped,
            "has_empty_clause": instance.has_empty_clause,
            "unconstrained_vars": list(unconstrained_vars),
        },
        "order": order,
        "seeds": seeds,
        "engine_verdict": engine_verdict,
        "empty_triple": list(empty_triple) if empty_triple is not None else None,
        "oracle_verdict": oracle_verdict,
        "oracle_agrees": oracle_agrees,
        "assignment": (
            {str(v): val for v, val in sorted(assignment.items())}
            if assignment is not None
            else None
        ),
        "assignment_verified": assignment_verified,
        "cubes": [
            {"triple": list(triple), "mask": mask_hex(mask)}
            for triple, mask in cubes
        ],
        "stats": stats,
    }


def write_report(report: dict[str, Any]) -> str:
    """Serialize a report deterministically (sorted keys, 2-space indent)."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
