"""Fixpoint propagation over the clausal partition.

Cubes sharing one or two variables are adjacent; along each directed edge
the source cube's projection onto the shared variables is imposed on the
target (the unidirectional combination).  A FIFO worklist re-enqueues the
outgoing edges of any cube that changed, and the system runs until no
edge application changes anything.  Cubes only ever lose GREEN cells, so
the number of change-making applications is bounded by 8 x cube count and
the fixpoint is independent of scheduling order.

A bidirectional variant applying the full two-sided combination per
undirected pair exists to check that both settle to the same state.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .bitspace import Partition, bc, bc_uni, impose
from .clausal import ClausalState, Instance, Triple

Edge = tuple[Triple, Triple]


@dataclass(frozen=True)
class AdjacencyGraph:
    nodes: tuple[Triple, ...]
    edges: tuple[Edge, ...]


@dataclass
class PropStats:
    passes: int = 0
    edge_applications: int = 0
    applications_changed: int = 0
    cells_removed: int = 0


@dataclass
class TraceRecord:
    edge: Edge
    before: int
    after: int
    cells_removed: int


@dataclass
class Extraction:
    assignment: dict[int, bool]
    verified: bool


@dataclass
class PropagationResult:
    fixpoint: ClausalState
    empty_triple: Triple | None
    stats: PropStats
    trace: list[TraceRecord] | None = None
    extracted: Extraction | None = None

    @property
    def verdict(self) -> str:
        return "empty_cube" if self.empty_triple is not None else "no_empty_cube"


def build_adjacency(state: ClausalState) -> AdjacencyGraph:
    """All ordered pairs of distinct triples sharing 1 or 2 variables."""
    nodes = tuple(state.triples())
    edges = []
    for src in nodes:
        src_set = set(src)
        for tgt in nodes:
            if tgt != src and len(src_set & set(tgt)) in (1, 2):
                edges.append((src, tgt))
    return AdjacencyGraph(nodes, tuple(sorted(edges)))


def apply_edge(state: ClausalState, edge: Edge) -> tuple[ClausalState, bool]:
    """Impose the source cube's shared-coordinate projection on the target.
    Returns the new state and whether any target cell turned RED."""
    src, tgt = edge
    new_state = state.copy()
    changed = _apply_edge_inplace(new_state.cubes, edge)
    return new_state, changed


def _apply_edge_inplace(cubes: dict[Triple, Partition], edge: Edge) -> bool:
    src, tgt = edge
    updated = bc_uni(cubes[tgt], cubes[src])
    if updated.green_mask == cubes[tgt].green_mask:
        return False
    cubes[tgt] = updated
    return True


def fixpoint(
    state: ClausalState,
    order: str = "fifo",
    seed: int | None = None,
    early_exit: bool = True,
    record_trace: bool = False,
) -> PropagationResult:
    """Run the unidirectional operator to steady state.

    order: "fifo" processes edges in lexicographic order; "random" shuffles
    the initial worklist (and each re-enqueue batch) with the given seed.
    early_exit stops at the first all-RED cube; disable it to force full
    closure (the fixpoint masks can differ below an empty cube, the verdict
    cannot).
    """
    graph = build_adjacency(state)
    out_edges: dict[Triple, list[Edge]] = {node: [] for node in graph.nodes}
    for edge in graph.edges:
        out_edges[edge[0]].append(edge)

    rng = random.Random(seed) if order == "random" else None
    if order not in ("fifo", "random"):
        raise ValueError(f"unknown order {order!r}, expected 'fifo' or 'random'")

    cubes = dict(state.cubes)
    stats = PropStats()
    trace: list[TraceRecord] | None = [] if record_trace else None

    empty_triple = _find_empty(cubes)
    if empty_triple is not None and early_exit:
        return PropagationResult(ClausalState(cubes), empty_triple, stats, trace)

    initial = list(graph.edges)
    if rng is not None:
        rng.shuffle(initial)
    queue: deque[Edge | None] = deque(initial)
    queued: set[Edge] = set(initial)
    queue.append(None)  # pass marker
    if initial:
        stats.passes = 1

    changed_this_pass = False
    while queue:
        item = queue.popleft()
        if item is None:
            if queue and changed_this_pass:
                stats.passes += 1
                queue.append(None)
                changed_this_pass = False
            continue
        edge = item
        queued.discard(edge)
        stats.edge_applications += 1
        before = cubes[edge[1]].green_mask
        if _apply_edge_inplace(cubes, edge):
            after = cubes[edge[1]].green_mask
            removed = (before ^ after).bit_count()
            stats.applications_changed += 1
            stats.cells_removed += removed
            changed_this_pass = True
            if trace is not None:
                trace.append(TraceRecord(edge, before, after, removed))
            if after == 0:
                if early_exit:
                    return PropagationResult(
                        ClausalState(cubes), edge[1], stats, trace
                    )
            requeue = [e for e in out_edges[edge[1]] if e not in queued]
            if rng is not None:
                rng.shuffle(requeue)
            for e in requeue:
                queue.append(e)
                queued.add(e)

    return PropagationResult(ClausalState(cubes), _find_empty(cubes), stats, trace)


def bidirectional_fixpoint(
    state: ClausalState, early_exit: bool = True
) -> PropagationResult:
    """As fixpoint, but applying the symmetric two-sided combination to both
    cubes of each undirected adjacent pair."""
    graph = build_adjacency(state)
    pairs = sorted({tuple(sorted((a, b))) for a, b in graph.edges})
    touching: dict[Triple, list[tuple[Triple, Triple]]] = {n: [] for n in graph.nodes}
    for pair in pairs:
        touching[pair[0]].append(pair)
        touching[pair[1]].append(pair)

    cubes = dict(state.cubes)
    stats = PropStats()

    empty_triple = _find_empty(cubes)
    if empty_triple is not None and early_exit:
        return PropagationResult(ClausalState(cubes), empty_triple, stats)

    queue: deque[tuple[Triple, Triple] | None] = deque(pairs)
    queued = set(pairs)
    queue.append(None)
    if pairs:
        stats.passes = 1
    changed_this_pass = False

    while queue:
        item = queue.popleft()
        if item is None:
            if queue and changed_this_pass:
                stats.passes += 1
                queue.append(None)
                changed_this_pass = False
            continue
        pair = item
        queued.discard(pair)
        a, b = pair
        stats.edge_applications += 1
        before_a, before_b = cubes[a].green_mask, cubes[b].green_mask
        new_a, new_b = bc(cubes[a], cubes[b])
        if (new_a.green_mask, new_b.green_mask) != (before_a, before_b):
            removed = (before_a ^ new_a.green_mask).bit_count() + (
                before_b ^ new_b.green_mask
            ).bit_count()
            cubes[a], cubes[b] = new_a, new_b
            stats.applications_changed += 1
            stats.cells_removed += removed
            changed_this_pass = True
            if early_exit and (new_a.green_mask == 0 or new_b.green_mask == 0):
                empty = a if new_a.green_mask == 0 else b
                return PropagationResult(ClausalState(cubes), empty, stats)
            for node in (a, b):
                if cubes[node].green_mask != (before_a if node == a else before_b):
                    for p in touching[node]:
                        if p not in queued:
                            queue.append(p)
                            queued.add(p)

    return PropagationResult(ClausalState(cubes), _find_empty(cubes), stats)


def _find_empty(cubes: Mapping[Triple, Partition]) -> Triple | None:
    for triple in sorted(cubes):
        if cubes[triple].green_mask == 0:
            return triple
    return None


def extract_assignment(
    result: PropagationResult, instance: Instance
) -> Extraction | None:
    """Greedy assignment extraction with one-level value backtracking.

    Walks variables in ascending order, tries F then T, imposes the choice
    on every cube containing the variable and re-propagates; if both values
    empty a cube, gives up.  Any assignment returned is verified by direct
    clause evaluation.  Not a complete solver by design: returning None on
    a satisfiable instance is a recorded possibility, not a bug.
    """
    if result.empty_triple is not None:
        raise ValueError("cannot extract an assignment from an empty-cube verdict")

    state = result.fixpoint.copy()
    cube_vars = sorted({v for triple in state.cubes for v in triple})
    chosen: dict[int, bool] = {}

    for var in cube_vars:
        committed = None
        for value in (False, True):
            unit = Partition((var,), 0b01 if not value else 0b10)
            trial = ClausalState(
                {
                    triple: impose(cube, unit) if var in triple else cube
                    for triple, cube in state.cubes.items()
                }
            )
            trial_result = fixpoint(trial)
            if trial_result.empty_triple is None:
                committed = (value, trial_result.fixpoint)
                break
        if committed is None:
            return None
        chosen[var], state = committed

    assignment = {v: False for v in range(1, instance.num_vars + 1)}
    for var, value in chosen.items():
        if var <= instance.num_vars:
            assignment[var] = value
    verified = instance.evaluate(assignment)
    return Extraction(assignment, verified)
