"""Lattice animals on Z^d: contact counts, cube-union surface, quasi-cubes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InternalInconsistency
from .geometry import PackingConfig, lattice_packing

Cell = tuple[int, ...]


@dataclass(frozen=True)
class LatticeShape:
    """Finite set of integer cells (centers of unit cubes / unit-diameter balls)."""

    dimension: int
    cells: frozenset

    def __post_init__(self):
        cells = frozenset(tuple(int(v) for v in c) for c in self.cells)
        for c in cells:
            if len(c) != self.dimension:
                raise ValueError(f"cell {c} does not have dimension {self.dimension}")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_cells(cls, cells: Iterable[Iterable[int]], dimension: int | None = None) -> "LatticeShape":
        cells = [tuple(int(v) for v in c) for c in cells]
        if dimension is None:
            if not cells:
                raise ValueError("cannot infer the dimension of an empty shape")
            dimension = len(cells[0])
        if len(set(cells)) != len(cells):
            raise ValueError("cells must be distinct")
        return cls(dimension, frozenset(cells))

    @property
    def n(self) -> int:
        return len(self.cells)

    def sorted_cells(self) -> list[Cell]:
        return sorted(self.cells)

    def canonical(self) -> "LatticeShape":
        """Translate so the lexicographically least cell sits at the origin."""
        if not self.cells:
            return self
        m = min(self.cells)
        return LatticeShape(self.dimension, frozenset(tuple(a - b for a, b in zip(c, m)) for c in self.cells))

    def to_packing(self) -> PackingConfig:
        return lattice_packing(self.sorted_cells(), self.dimension)


def _unit_steps(d: int) -> list[Cell]:
    return [tuple(1 if k == axis else 0 for k in range(d)) for axis in range(d)]


def adjacency_count(s: LatticeShape) -> int:
    """Number of cell pairs at distance exactly 1."""
    cells = s.cells
    count = 0
    for step in _unit_steps(s.dimension):
        for c in cells:
            if tuple(a + b for a, b in zip(c, step)) in cells:
                count += 1
    return count


def _exposed_faces(s: LatticeShape) -> int:
    cells = s.cells
    exposed = 0
    for step in _unit_steps(s.dimension):
        for c in cells:
            if tuple(a + b for a, b in zip(c, step)) not in cells:
                exposed += 1
            if tuple(a - b for a, b in zip(c, step)) not in cells:
                exposed += 1
    return exposed


def cube_union_surface(s: LatticeShape) -> int:
    """Surface area of the union of unit cubes centred at the cells.

    Computed by counting exposed faces and cross-checked against
    ``2dn - 2 * adjacency_count``.
    """
    faces = _exposed_faces(s)
    via_contacts = 2 * s.dimension * s.n - 2 * adjacency_count(s)
    if faces != via_contacts:
        raise InternalInconsistency(f"face count {faces} != 2dn - 2c = {via_contacts}")
    return faces


def _side(n: int, d: int) -> int:
    k = max(1, int(round(n ** (1.0 / d))))
    while k ** d < n:
        k += 1
    while k > 1 and (k - 1) ** d >= n:
        k -= 1
    return k


def quasicube(n: int, d: int) -> LatticeShape:
    """Greedy near-cube with ``n`` cells inside the side-``ceil(n^(1/d))`` cube.

    Each step adds the free cell with the most occupied neighbours; ties go
    to the earliest cell in layer-row-column order (last axis slowest).
    """
    if n < 1 or d < 2:
        raise ValueError("need n >= 1 and d >= 2")
    k = _side(n, d)
    shape = (k,) * d
    # canonical index: last coordinate is the most significant digit
    coords = np.array(np.unravel_index(np.arange(k ** d), shape[::-1])).T[:, ::-1]
    occupied = np.zeros(k ** d, dtype=bool)
    gain = np.zeros(k ** d, dtype=np.int64)
    strides = [k ** axis for axis in range(d)]
    chosen = []
    for _ in range(n):
        score = np.where(occupied, -1, gain)
        idx = int(np.argmax(score))
        occupied[idx] = True
        chosen.append(idx)
        c = coords[idx]
        for axis in range(d):
            if c[axis] > 0:
                gain[idx - strides[axis]] += 1
            if c[axis] < k - 1:
                gain[idx + strides[axis]] += 1
    return LatticeShape(d, frozenset(tuple(int(v) for v in coords[i]) for i in chosen))


def asymptotic_ratio(k: int) -> float:
    """``(3n - contacts(quasicube(n, 3))) / n^(2/3)`` at ``n = k^3``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    n = k ** 3
    return (3 * n - adjacency_count(quasicube(n, 3))) / (k * k)


def box_shape(sides: Iterable[int]) -> LatticeShape:
    sides = list(sides)
    grid = np.indices(sides).reshape(len(sides), -1).T
    return LatticeShape(len(sides), frozenset(tuple(int(v) for v in row) for row in grid))


def random_animal(n: int, d: int, rng: np.random.Generator) -> LatticeShape:
    """Connected shape grown by adding uniformly chosen frontier cells."""
    origin = (0,) * d
    cells = {origin}
    order = [origin]
    frontier: dict[Cell, None] = {}
    steps = _unit_steps(d)

    def push(c):
        for st in steps:
            for sign in (1, -1):
                nb = tuple(a + sign * b for a, b in zip(c, st))
                if nb not in cells:
                    frontier[nb] = None

    push(origin)
    while len(cells) < n:
        pick = list(frontier)[int(rng.integers(len(frontier)))]
        del frontier[pick]
        cells.add(pick)
        order.append(pick)
        push(pick)
    return LatticeShape(d, frozenset(cells))


def random_subset(n: int, d: int, side: int, rng: np.random.Generator) -> LatticeShape:
    """``n`` distinct cells drawn from the box ``[0, side)^d`` (may be disconnected)."""
    if n > side ** d:
        raise ValueError("box too small")
    flat = rng.choice(side ** d, size=n, replace=False)
    coords = np.array(np.unravel_index(flat, (side,) * d)).T
    return LatticeShape(d, frozenset(tuple(int(v) for v in row) for row in coords))


def format_shape(s: LatticeShape) -> str:
    return "".join(",".join(str(v) for v in c) + "\n" for c in s.sorted_cells())


def parse_shape(text: str, dimension: int | None = None) -> LatticeShape:
    cells = [tuple(int(v) for v in line.split(",")) for line in text.splitlines() if line.strip()]
    return LatticeShape.from_cells(cells, dimension)
