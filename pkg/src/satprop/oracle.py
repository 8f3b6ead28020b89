"""Independent brute-force ground truth.

Everything here recomputes results by direct enumeration, deliberately
avoiding the partition-combination code it is used to check: SAT decisions
and model counts come from truth tables (or DPLL with unit propagation for
larger decide-only instances), and the join-semantics reference for the
two-sided combination scans the neighbor's cells for support directly.
Only the Partition value type is shared.

Size guards are hard errors, not silent truncation: decide <= 30 vars,
count/project <= 20, full truth-table partition <= 16.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .bitspace import Partition
from .clausal import Instance, Triple

DECIDE_LIMIT = 30
COUNT_LIMIT = 20
TRUTH_TABLE_LIMIT = 16


@dataclass
class OracleVerdict:
    satisfiable: bool
    witness: dict[int, bool] | None
    solution_count: int | None


@lru_cache(maxsize=None)
def _column(pos: int, n: int) -> int:
    """Bitmask over 2^n cells where bit `pos` of the cell index is 1."""
    period = 1 << (pos + 1)
    chunk = ((1 << (1 << pos)) - 1) << (1 << pos)
    reps = ((1 << (1 << n)) - 1) // ((1 << period) - 1)
    return chunk * reps


def _sat_mask(instance: Instance, vars_order: Sequence[int]) -> int:
    """Truth-table mask over all assignments to vars_order (ascending id at
    bit position 0): bit set iff the assignment satisfies every clause."""
    n = len(vars_order)
    pos = {v: i for i, v in enumerate(vars_order)}
    full = (1 << (1 << n)) - 1
    if instance.has_empty_clause:
        return 0
    acc = full
    for clause in instance.clauses:
        clause_mask = 0
        for lit in clause.literals:
            col = _column(pos[lit.variable], n)
            clause_mask |= (full ^ col) if lit.negated else col
        acc &= clause_mask
        if acc == 0:
            break
    return acc


def _cell_to_assignment(cell: int, vars_order: Sequence[int]) -> dict[int, bool]:
    return {v: bool(cell >> i & 1) for i, v in enumerate(vars_order)}


def brute_force_sat(instance: Instance) -> OracleVerdict:
    """Exact SAT decision; exact model count when num_vars <= 20."""
    n = instance.num_vars
    if n > DECIDE_LIMIT:
        raise ValueError(f"num_vars {n} exceeds oracle decide limit {DECIDE_LIMIT}")
    if instance.has_empty_clause:
        return OracleVerdict(False, None, 0 if n <= COUNT_LIMIT else None)
    if n == 0:
        return OracleVerdict(True, {}, 1)
    if n <= COUNT_LIMIT:
        vars_order = tuple(range(1, n + 1))
        mask = _sat_mask(instance, vars_order)
        if mask == 0:
            return OracleVerdict(False, None, 0)
        cell = (mask & -mask).bit_length() - 1
        return OracleVerdict(True, _cell_to_assignment(cell, vars_order), mask.bit_count())
    witness = _dpll([list(c.as_ints()) for c in instance.clauses], n)
    if witness is None:
        return OracleVerdict(False, None, None)
    return OracleVerdict(True, witness, None)


def _dpll(clauses: list[list[int]], num_vars: int) -> dict[int, bool] | None:
    """Plain DPLL with unit propagation; returns a full model or None."""
    assignment: dict[int, bool] = {}

    def solve(clauses: list[list[int]]) -> bool:
        while True:
            unit = None
            for clause in clauses:
                if not clause:
                    return False
                if len(clause) == 1:
                    unit = clause[0]
                    break
            if unit is None:
                break
            assignment[abs(unit)] = unit > 0
            clauses = _assign(clauses, unit)
        if not clauses:
            return True
        var = abs(clauses[0][0])
        for value in (True, False):
            lit = var if value else -var
            assignment[var] = value
            if solve(_assign(clauses, lit)):
                return True
            del assignment[var]
        return False

    if solve(clauses):
        for v in range(1, num_vars + 1):
            assignment.setdefault(v, False)
        return assignment
    return None


def _assign(clauses: list[list[int]], lit: int) -> list[list[int]]:
    out = []
    for clause in clauses:
        if lit in clause:
            continue
        if -lit in clause:
            out.append([x for x in clause if x != -lit])
        else:
            out.append(clause)
    return out


def join_semantics_oracle(
    p: Partition, q: Partition
) -> tuple[Partition, Partition]:
    """Reference semantics for the two-sided combination: a cell survives
    iff it was GREEN and some GREEN cell of the other partition agrees with
    it on the shared coordinates.  Computed by direct cell enumeration."""
    shared = tuple(sorted(set(p.coords) & set(q.coords)))
    if not shared:
        raise ValueError(
            f"disjoint coordinates: {list(p.coords)} vs {list(q.coords)}"
        )
    return (
        Partition(p.coords, _supported_mask(p, q, shared)),
        Partition(q.coords, _supported_mask(q, p, shared)),
    )


def _supported_mask(a: Partition, b: Partition, shared: Sequence[int]) -> int:
    b_pos = [b.coords.index(v) for v in shared]
    support = set()
    for cell in b.green_cells():
        support.add(tuple(cell >> pos & 1 for pos in b_pos))
    a_pos = [a.coords.index(v) for v in shared]
    out = 0
    for cell in a.green_cells():
        if tuple(cell >> pos & 1 for pos in a_pos) in support:
            out |= 1 << cell
    return out


def projected_solution_sets(
    instance: Instance, triples: Iterable[Triple]
) -> dict[Triple, set[int]]:
    """For each triple, the set of cell indices reachable as restrictions of
    satisfying assignments.  Free variables appearing only in triples (e.g.
    padding) are enumerated alongside the constrained ones."""
    triples = list(triples)
    var_set = set(instance.constrained_vars())
    for triple in triples:
        var_set.update(triple)
    vars_order = tuple(sorted(var_set))
    if len(vars_order) > COUNT_LIMIT:
        raise ValueError(
            f"{len(vars_order)} variables exceeds projection limit {COUNT_LIMIT}"
        )
    mask = _sat_mask(instance, vars_order)
    pos = {v: i for i, v in enumerate(vars_order)}
    full = (1 << (1 << len(vars_order))) - 1
    out: dict[Triple, set[int]] = {}
    for triple in triples:
        cells = set()
        cols = [_column(pos[v], len(vars_order)) for v in triple]
        for cell in range(8):
            sel = mask
            for i, col in enumerate(cols):
                sel &= col if cell >> i & 1 else full ^ col
                if sel == 0:
                    break
            if sel:
                cells.add(cell)
        out[triple] = cells
    return out


def conjunction_truth_table(instance: Instance) -> Partition:
    """The full-space partition whose GREEN cells are exactly the satisfying
    assignments, over the constrained variables (all variables if the
    instance has no clauses)."""
    coords = instance.constrained_vars()
    if not coords:
        if instance.num_vars == 0:
            raise ValueError("no variables to build a truth table over")
        coords = tuple(range(1, instance.num_vars + 1))
    if len(coords) > TRUTH_TABLE_LIMIT:
        raise ValueError(
            f"{len(coords)} constrained variables exceeds truth-table limit "
            f"{TRUTH_TABLE_LIMIT}"
        )
    return Partition(coords, _sat_mask(instance, coords))
