"""Colored partitions of Z2 vector spaces and their combination operators.

A Partition colors every point of a small Boolean cube GREEN (allowed) or
RED (disallowed).  Two cellwise operators exist: WS keeps GREEN alive
(disjunction) and BS keeps RED alive (conjunction).  On top of those sit
the structural operations: cross products, projection onto a coordinate
subset (GREEN-preserving fold), cylindrical lifting, imposition, and the
two-sided / one-sided combination of overlapping cubes (bc / bc_uni).

Cell indexing convention (used everywhere in this package): coordinates
are kept sorted ascending; the coordinate at position i contributes bit
2**i of the cell index, with F=0 and T=1.  Position 0 is the least
significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

MAX_DIM = 16


class Color(Enum):
    RED = 0
    GREEN = 1


RED = Color.RED
GREEN = Color.GREEN


def ws(a: Color, b: Color) -> Color:
    """GREEN-preserving scalar operator (disjunction). RED is its identity."""
    return GREEN if (a is GREEN or b is GREEN) else RED


def bs(a: Color, b: Color) -> Color:
    """RED-preserving scalar operator (conjunction). GREEN is its identity."""
    return RED if (a is RED or b is RED) else GREEN


@dataclass(frozen=True)
class Partition:
    """An ordered coordinate tuple plus a GREEN-cell bitmask over 2^k cells."""

    coords: tuple[int, ...]
    green_mask: int

    def __post_init__(self) -> None:
        k = len(self.coords)
        if not 1 <= k <= MAX_DIM:
            raise ValueError(f"dimension {k} outside 1..{MAX_DIM}")
        if any(c < 1 for c in self.coords):
            raise ValueError(f"coordinates must be positive: {self.coords}")
        if list(self.coords) != sorted(set(self.coords)):
            raise ValueError(f"coordinates must be strictly ascending: {self.coords}")
        if not 0 <= self.green_mask < (1 << (1 << k)):
            raise ValueError(f"mask 0x{self.green_mask:X} too wide for {k} coordinates")

    @property
    def k(self) -> int:
        return len(self.coords)

    @property
    def num_cells(self) -> int:
        return 1 << self.k

    @property
    def full_mask(self) -> int:
        return (1 << self.num_cells) - 1

    def color_at(self, cell: int) -> Color:
        if not 0 <= cell < self.num_cells:
            raise ValueError(f"cell {cell} out of range for {self.k} coordinates")
        return GREEN if self.green_mask >> cell & 1 else RED

    def green_cells(self) -> Iterator[int]:
        mask = self.green_mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def green_count(self) -> int:
        return self.green_mask.bit_count()

    def is_all_red(self) -> bool:
        return self.green_mask == 0

    def render(self) -> str:
        """Debug form, e.g. ``u1,u2,u3:RGGGGGGG`` (cells in index order)."""
        cells = "".join(
            "G" if self.green_mask >> i & 1 else "R" for i in range(self.num_cells)
        )
        return ",".join(f"u{c}" for c in self.coords) + ":" + cells

    @classmethod
    def all_green(cls, coords: Sequence[int]) -> "Partition":
        coords = tuple(coords)
        return cls(coords, (1 << (1 << len(coords))) - 1)

    @classmethod
    def all_red(cls, coords: Sequence[int]) -> "Partition":
        return cls(tuple(coords), 0)


@lru_cache(maxsize=None)
def _fiber_masks(coords: tuple[int, ...], sub: tuple[int, ...]) -> tuple[int, ...]:
    """For each cell of `sub`, the mask of `coords` cells restricting to it."""
    positions = [coords.index(v) for v in sub]
    fibers = [0] * (1 << len(sub))
    for cell in range(1 << len(coords)):
        idx = 0
        for j, pos in enumerate(positions):
            if cell >> pos & 1:
                idx |= 1 << j
        fibers[idx] |= 1 << cell
    return tuple(fibers)


def _project_mask(mask: int, coords: tuple[int, ...], sub: tuple[int, ...]) -> int:
    fibers = _fiber_masks(coords, sub)
    out = 0
    for idx, fiber in enumerate(fibers):
        if mask & fiber:
            out |= 1 << idx
    return out


def _lift_mask(mask: int, sub: tuple[int, ...], coords: tuple[int, ...]) -> int:
    fibers = _fiber_masks(coords, sub)
    out = 0
    for idx, fiber in enumerate(fibers):
        if mask >> idx & 1:
            out |= fiber
    return out


def cellwise(op: str, p: Partition, q: Partition) -> Partition:
    """Apply an operator cell by cell; `op` is "WS" or "BS"."""
    if op == "WS":
        return cellwise_ws(p, q)
    if op == "BS":
        return cellwise_bs(p, q)
    raise ValueError(f"unknown operator {op!r}, expected 'WS' or 'BS'")


def cellwise_ws(p: Partition, q: Partition) -> Partition:
    _check_same_coords(p, q)
    return Partition(p.coords, p.green_mask | q.green_mask)


def cellwise_bs(p: Partition, q: Partition) -> Partition:
    _check_same_coords(p, q)
    return Partition(p.coords, p.green_mask & q.green_mask)


def _check_same_coords(p: Partition, q: Partition) -> None:
    if p.coords != q.coords:
        raise ValueError(
            f"coordinate mismatch: {list(p.coords)} vs {list(q.coords)}"
        )


def cross(op: str, p: Partition, q: Partition) -> Partition:
    """Cross-product extension over disjoint coordinates; `op` is "WS" or "BS"."""
    if op == "WS":
        return cross_ws(p, q)
    if op == "BS":
        return cross_bs(p, q)
    raise ValueError(f"unknown operator {op!r}, expected 'WS' or 'BS'")


def cross_ws(p: Partition, q: Partition) -> Partition:
    return _cross(p, q, use_ws=True)


def cross_bs(p: Partition, q: Partition) -> Partition:
    return _cross(p, q, use_ws=False)


def _cross(p: Partition, q: Partition, use_ws: bool) -> Partition:
    overlap = set(p.coords) & set(q.coords)
    if overlap:
        raise ValueError(f"cross requires disjoint coordinates, shared: {sorted(overlap)}")
    coords = tuple(sorted(p.coords + q.coords))
    if len(coords) > MAX_DIM:
        raise ValueError(f"cross result dimension {len(coords)} exceeds {MAX_DIM}")
    pm = _lift_mask(p.green_mask, p.coords, coords)
    qm = _lift_mask(q.green_mask, q.coords, coords)
    return Partition(coords, pm | qm if use_ws else pm & qm)


def project(p: Partition, target: Sequence[int]) -> Partition:
    """GREEN-preserving fold onto `target`: a target cell is GREEN iff any
    cell in its fiber over the dropped coordinates is GREEN."""
    target = tuple(sorted(target))
    if not target:
        raise ValueError("projection target must be nonempty")
    if not set(target) <= set(p.coords):
        raise ValueError(f"target {list(target)} not a subset of {list(p.coords)}")
    if target == p.coords:
        return p
    return Partition(target, _project_mask(p.green_mask, p.coords, target))


def lift(p: Partition, target: Sequence[int]) -> Partition:
    """Cylindrical extension: each target cell takes the color of its
    restriction to p's coordinates."""
    target = tuple(sorted(target))
    if not set(p.coords) <= set(target):
        raise ValueError(f"target {list(target)} not a superset of {list(p.coords)}")
    if target == p.coords:
        return p
    if len(target) > MAX_DIM:
        raise ValueError(f"lift target dimension {len(target)} exceeds {MAX_DIM}")
    return Partition(target, _lift_mask(p.green_mask, p.coords, target))


def impose(p: Partition, q: Partition) -> Partition:
    """Clear every GREEN cell of p whose restriction to q's coordinates is
    RED in q.  Never turns a cell GREEN."""
    if not set(q.coords) <= set(p.coords):
        raise ValueError(f"{list(q.coords)} not a subset of {list(p.coords)}")
    lifted = _lift_mask(q.green_mask, q.coords, p.coords)
    return Partition(p.coords, p.green_mask & lifted)


def shared_coords(p: Partition, q: Partition) -> tuple[int, ...]:
    return tuple(sorted(set(p.coords) & set(q.coords)))


def bc(p: Partition, q: Partition) -> tuple[Partition, Partition]:
    """Two-sided combination of overlapping cubes: project both onto the
    shared coordinates, meet the projections, impose the meet back on each
    operand.  Both outputs are GREEN-subsets of their inputs."""
    shared = _check_overlap(p, q)
    pp = _project_mask(p.green_mask, p.coords, shared)
    qp = _project_mask(q.green_mask, q.coords, shared)
    meet = pp & qp
    return (
        Partition(p.coords, p.green_mask & _lift_mask(meet, shared, p.coords)),
        Partition(q.coords, q.green_mask & _lift_mask(meet, shared, q.coords)),
    )


def bc_uni(p: Partition, q: Partition) -> Partition:
    """One-sided combination: q's projection onto the shared coordinates
    imposed on p.  q is not modified."""
    shared = _check_overlap(p, q)
    qp = _project_mask(q.green_mask, q.coords, shared)
    return Partition(p.coords, p.green_mask & _lift_mask(qp, shared, p.coords))


def _check_overlap(p: Partition, q: Partition) -> tuple[int, ...]:
    shared = shared_coords(p, q)
    if not shared:
        raise ValueError(
            f"disjoint coordinates: {list(p.coords)} vs {list(q.coords)}"
        )
    if p.coords == q.coords:
        raise ValueError("operands must differ in at least one coordinate")
    return shared


def assemble(parts: Iterable[Partition], op: str = "BS") -> Partition:
    """Fold partitions over overlapping coordinate sets into one partition
    on the union of their coordinates.  Starts from the operator identity
    (all-GREEN for BS, all-RED for WS) and folds each part in via lift.
    Under BS this is the global truth table of a conjunction."""
    if op not in ("WS", "BS"):
        raise ValueError(f"unknown operator {op!r}, expected 'WS' or 'BS'")
    use_ws = op == "WS"
    parts = list(parts)
    coord_set: set[int] = set()
    for part in parts:
        coord_set.update(part.coords)
    if not coord_set:
        raise ValueError("assemble requires at least one coordinate")
    if len(coord_set) > MAX_DIM:
        raise ValueError(f"assemble dimension {len(coord_set)} exceeds {MAX_DIM}")
    coords = tuple(sorted(coord_set))
    acc = 0 if use_ws else (1 << (1 << len(coords))) - 1
    for part in parts:
        lifted = _lift_mask(part.green_mask, part.coords, coords)
        acc = acc | lifted if use_ws else acc & lifted
    return Partition(coords, acc)
