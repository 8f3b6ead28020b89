"""3SAT instances and their clausal partition.

An instance is a conjunction of disjunctive clauses of at most three
literals.  The clausal partition maps canonical variable triples to 8-cell
cubes; each clause marks RED the cells that falsify it (for a clause on
three distinct variables that is exactly the complement assignment).
Clauses with fewer than three distinct variables are hosted on a triple
padded with the smallest absent variable ids, so every cube stays
3-dimensional.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .bitspace import Partition

Triple = tuple[int, int, int]


class Degenerate(Enum):
    """Outcomes of canonicalization that are not ordinary clauses."""

    TAUTOLOGY = "tautology"
    EMPTY = "empty"


TAUTOLOGY = Degenerate.TAUTOLOGY
EMPTY = Degenerate.EMPTY


@dataclass(frozen=True)
class Literal:
    variable: int
    negated: bool

    def __post_init__(self) -> None:
        if self.variable < 1:
            raise ValueError(f"variable id must be >= 1, got {self.variable}")

    def as_int(self) -> int:
        return -self.variable if self.negated else self.variable

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("literal 0 is reserved as clause terminator")
        return cls(abs(lit), lit < 0)


@dataclass(frozen=True)
class Clause:
    """Canonical disjunctive clause: literals sorted by variable, no
    duplicates, not tautological."""

    literals: tuple[Literal, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.literals) <= 3:
            raise ValueError(f"clause width {len(self.literals)} outside 1..3")
        vars_ = [lit.variable for lit in self.literals]
        if vars_ != sorted(set(vars_)):
            raise ValueError("clause literals must be sorted and duplicate-free")

    def variables(self) -> tuple[int, ...]:
        return tuple(lit.variable for lit in self.literals)

    def satisfied_by(self, assignment: Mapping[int, bool]) -> bool:
        return any(
            assignment[lit.variable] != lit.negated for lit in self.literals
        )

    def as_ints(self) -> tuple[int, ...]:
        return tuple(lit.as_int() for lit in self.literals)


def canonicalize(
    literals: Iterable[int | Literal], num_vars: int
) -> Clause | Degenerate:
    """Merge duplicate literals, sort by variable, detect tautologies and
    the empty clause.  Raises on variable ids outside 1..num_vars."""
    polarity: dict[int, bool] = {}
    for raw in literals:
        lit = raw if isinstance(raw, Literal) else Literal.from_int(raw)
        if lit.variable > num_vars:
            raise ValueError(
                f"variable u{lit.variable} exceeds declared count {num_vars}"
            )
        if lit.variable in polarity:
            if polarity[lit.variable] != lit.negated:
                return TAUTOLOGY
        else:
            polarity[lit.variable] = lit.negated
    if not polarity:
        return EMPTY
    return Clause(tuple(Literal(v, polarity[v]) for v in sorted(polarity)))


@dataclass(frozen=True)
class Instance:
    """A 3SAT instance E = (U, C) after canonicalization."""

    num_vars: int
    clauses: tuple[Clause, ...]
    has_empty_clause: bool = False
    tautologies_dropped: int = 0

    def __post_init__(self) -> None:
        for clause in self.clauses:
            for lit in clause.literals:
                if lit.variable > self.num_vars:
                    raise ValueError(
                        f"variable u{lit.variable} exceeds num_vars {self.num_vars}"
                    )

    @classmethod
    def from_raw(
        cls, num_vars: int, raw_clauses: Iterable[Sequence[int]]
    ) -> "Instance":
        clauses = []
        tautologies = 0
        has_empty = False
        for raw in raw_clauses:
            result = canonicalize(raw, num_vars)
            if result is TAUTOLOGY:
                tautologies += 1
            elif result is EMPTY:
                has_empty = True
            else:
                clauses.append(result)
        return cls(num_vars, tuple(clauses), has_empty, tautologies)

    def constrained_vars(self) -> tuple[int, ...]:
        seen: set[int] = set()
        for clause in self.clauses:
            seen.update(clause.variables())
        return tuple(sorted(seen))

    def unconstrained_vars(self) -> tuple[int, ...]:
        constrained = set(self.constrained_vars())
        return tuple(v for v in range(1, self.num_vars + 1) if v not in constrained)

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        if self.has_empty_clause:
            return False
        return all(clause.satisfied_by(assignment) for clause in self.clauses)


def host_triple(clause: Clause, num_vars: int) -> Triple:
    """The canonical triple hosting a clause: its own variables, padded with
    the smallest absent ids.  Padding past num_vars uses phantom ids."""
    vars_ = set(clause.variables())
    triple = sorted(vars_)
    candidate = 1
    while len(triple) < 3:
        while candidate in vars_:
            candidate += 1
        triple.append(candidate)
        vars_.add(candidate)
    return tuple(sorted(triple))  # type: ignore[return-value]


def forbidden_cells(clause: Clause, triple: Triple) -> set[int]:
    """Cell indices of the host triple whose assignments falsify the clause:
    one cell for a 3-variable clause, 2^(3-t) for a t-variable clause."""
    positions = {}
    for lit in clause.literals:
        if lit.variable not in triple:
            raise ValueError(f"variable u{lit.variable} not in triple {triple}")
        positions[lit.variable] = triple.index(lit.variable)
    cells = set()
    for cell in range(8):
        falsified = all(
            (cell >> positions[lit.variable] & 1 == 1) == lit.negated
            for lit in clause.literals
        )
        if falsified:
            cells.add(cell)
    return cells


@dataclass
class ClausalState:
    """Mapping from canonical variable triples to 3-coordinate cubes."""

    cubes: dict[Triple, Partition]

    def copy(self) -> "ClausalState":
        return ClausalState(dict(self.cubes))

    def triples(self) -> list[Triple]:
        return sorted(self.cubes)

    def total_green(self) -> int:
        return sum(cube.green_mask.bit_count() for cube in self.cubes.values())

    def phantom_vars(self, num_vars: int) -> tuple[int, ...]:
        seen: set[int] = set()
        for triple in self.cubes:
            seen.update(v for v in triple if v > num_vars)
        return tuple(sorted(seen))


@dataclass
class ClausalBuild:
    """Result of building the clausal partition from an instance."""

    state: ClausalState
    trivially_unsat: bool
    tautologies_dropped: int


def build_clausal_partition(instance: Instance) -> ClausalBuild:
    """Group clauses by host triple; each cube starts all-GREEN and loses
    the forbidden cells of every clause it hosts.  An empty clause makes
    the instance trivially unsatisfiable (flagged, not raised)."""
    cubes: dict[Triple, int] = {}
    for clause in instance.clauses:
        triple = host_triple(clause, instance.num_vars)
        mask = cubes.get(triple, 0xFF)
        for cell in forbidden_cells(clause, triple):
            mask &= ~(1 << cell)
        cubes[triple] = mask
    state = ClausalState(
        {triple: Partition(triple, mask) for triple, mask in sorted(cubes.items())}
    )
    return ClausalBuild(state, instance.has_empty_clause, instance.tautologies_dropped)


def assignment_restriction(
    assignment: Mapping[int, bool], triple: Sequence[int]
) -> int:
    """Cell index of an assignment's restriction to a coordinate tuple."""
    cell = 0
    for i, var in enumerate(triple):
        if assignment[var]:
            cell |= 1 << i
    return cell
