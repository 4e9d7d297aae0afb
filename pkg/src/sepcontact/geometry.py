"""Packing representation, contact detection and elementary geometry.

Two radius conventions coexist: unit-radius balls (``radius=1``, continuous
mode) and unit-diameter balls on the integer lattice (``radius=1/2``,
lattice mode). Everything scales through the explicit ``radius`` field.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import CollinearError, DegreeError, OverlapError

CONTACT_TOL = 1e-9

CONTINUOUS = "continuous"
LATTICE = "lattice"


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class PackingConfig:
    """A finite packing of congruent balls.

    ``centers`` is an ``(n, d)`` array; integer dtype in lattice mode.
    Construction validates non-overlap unless ``validate=False``.
    """

    dimension: int
    radius: float
    centers: np.ndarray
    mode: str = CONTINUOUS
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if self.mode not in (CONTINUOUS, LATTICE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.dimension < 2:
            raise ValueError("dimension must be at least 2")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        raw = np.asarray(self.centers)
        if raw.ndim == 1 and raw.size == 0:
            raw = raw.reshape(0, self.dimension)
        if raw.ndim != 2 or raw.shape[1] != self.dimension:
            raise ValueError(f"centers must have shape (n, {self.dimension})")
        if raw.shape[0] < 1:
            raise ValueError("a packing needs at least one ball")
        if self.mode == LATTICE:
            if not np.all(np.asarray(raw, dtype=float) == np.round(np.asarray(raw, dtype=float))):
                raise ValueError("lattice mode requires integer coordinates")
            arr = np.asarray(np.round(np.asarray(raw, dtype=float)), dtype=np.int64).copy()
        else:
            arr = np.asarray(raw, dtype=np.float64).copy()
        object.__setattr__(self, "centers", _readonly(arr))
        if self.validate:
            self._check_overlap()

    @property
    def n(self) -> int:
        return int(self.centers.shape[0])

    def _check_overlap(self) -> None:
        if self.n < 2:
            return
        if self.mode == LATTICE:
            tree = cKDTree(self.centers)
            dup = tree.query_pairs(0.5)
            if dup:
                i, j = min(dup)
                raise OverlapError(f"balls {i} and {j} share a center")
            return
        tree = cKDTree(self.centers)
        close = tree.query_pairs(2 * self.radius - CONTACT_TOL - 1e-12)
        for i, j in sorted(close):
            dist = float(np.linalg.norm(self.centers[i] - self.centers[j]))
            if dist < 2 * self.radius - CONTACT_TOL:
                raise OverlapError(f"balls {i} and {j} overlap: distance {dist!r} < {2 * self.radius!r}")

    def with_centers(self, centers) -> "PackingConfig":
        return PackingConfig(self.dimension, self.radius, centers, self.mode)


def lattice_packing(cells, dimension: int | None = None) -> PackingConfig:
    """Unit-diameter packing with one ball per integer cell."""
    arr = np.asarray(list(cells), dtype=np.int64)
    if dimension is None:
        dimension = arr.shape[1]
    return PackingConfig(dimension, 0.5, arr.reshape(-1, dimension), LATTICE)


def scale_to_unit_radius(p: PackingConfig) -> PackingConfig:
    """Rescale a packing to unit radius as a continuous configuration."""
    factor = 1.0 / p.radius
    return PackingConfig(p.dimension, 1.0, np.asarray(p.centers, dtype=float) * factor, CONTINUOUS)


@dataclass(frozen=True)
class ContactGraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    degree: tuple[int, ...]

    @property
    def contact_number(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return [sorted(x) for x in adj]


@dataclass(frozen=True)
class Hyperplane:
    """The plane ``{x : normal . x = offset}`` with a unit normal."""

    normal: tuple[float, ...]
    offset: float

    def __post_init__(self):
        nrm = math.sqrt(sum(v * v for v in self.normal))
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"hyperplane normal must be a unit vector, got norm {nrm!r}")
        object.__setattr__(self, "normal", tuple(float(v) for v in self.normal))
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def through(cls, normal, offset) -> "Hyperplane":
        v = np.asarray(normal, dtype=float)
        nrm = float(np.linalg.norm(v))
        return cls(tuple(v / nrm), float(offset) / nrm)

    def signed_distance(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ np.asarray(self.normal) - self.offset


def contact_graph(p: PackingConfig, tol: float = CONTACT_TOL) -> ContactGraph:
    """Contact graph of a packing.

    Lattice packings are compared exactly (squared distance 1); continuous
    packings use ``|dist - 2r| <= tol``.
    """
    n, d = p.n, p.dimension
    edges: list[tuple[int, int]] = []
    if n > 1:
        tree = cKDTree(p.centers)
        if p.mode == LATTICE:
            for i, j in tree.query_pairs(1.5):
                diff = p.centers[i] - p.centers[j]
                sq = int(np.dot(diff, diff))
                if sq == 0:
                    raise OverlapError(f"balls {i} and {j} share a center")
                if sq == 1:
                    edges.append((min(i, j), max(i, j)))
        else:
            two_r = 2 * p.radius
            for i, j in tree.query_pairs(two_r + tol):
                dist = float(np.linalg.norm(p.centers[i] - p.centers[j]))
                if dist < two_r - tol:
                    raise OverlapError(f"balls {i} and {j} overlap: distance {dist!r}")
                if abs(dist - two_r) <= tol:
                    edges.append((min(i, j), max(i, j)))
    edges.sort()
    degree = [0] * n
    for i, j in edges:
        degree[i] += 1
        degree[j] += 1
    for i, deg in enumerate(degree):
        if deg > 2 * d:
            raise DegreeError(f"ball {i} has {deg} contacts, more than 2d = {2 * d}")
    return ContactGraph(n, tuple(edges), tuple(degree))


@dataclass(frozen=True)
class TangentDirections:
    directions: np.ndarray
    min_angle: float | None


def tangent_directions(g: ContactGraph, p: PackingConfig, i: int) -> TangentDirections:
    """Unit vectors from ball ``i`` towards each ball touching it."""
    if not 0 <= i < g.n:
        raise IndexError(f"ball index {i} out of range for n = {g.n}")
    c = np.asarray(p.centers, dtype=float)
    dirs = []
    for j in g.neighbors(i):
        v = c[j] - c[i]
        dirs.append(v / np.linalg.norm(v))
    arr = np.array(dirs, dtype=float).reshape(-1, p.dimension)
    min_angle = None
    for u, v in itertools.combinations(arr, 2):
        ang = math.acos(max(-1.0, min(1.0, float(np.dot(u, v)))))
        min_angle = ang if min_angle is None else min(min_angle, ang)
    return TangentDirections(arr, min_angle)


def _ball_from_support(support: list[np.ndarray]) -> tuple[np.ndarray, float]:
    q0 = support[0]
    if len(support) == 1:
        return q0.copy(), 0.0
    A = np.array([q - q0 for q in support[1:]])
    M = 2.0 * A @ A.T
    rhs = np.einsum("ij,ij->i", A, A)
    lam = np.linalg.lstsq(M, rhs, rcond=None)[0]
    center = q0 + A.T @ lam
    radius = max(float(np.linalg.norm(q - center)) for q in support)
    return center, radius


def _mtf_ball(pts: list[np.ndarray], end: int, support: list[np.ndarray], dim: int):
    center, radius = _ball_from_support(support) if support else (None, -1.0)
    if len(support) == dim + 1:
        return center, radius
    i = 0
    while i < end:
        p = pts[i]
        if center is None or np.linalg.norm(p - center) > radius * (1 + 1e-14) + 1e-14:
            center, radius = _mtf_ball(pts, i, support + [p], dim)
            # move-to-front keeps the next pass short
            pts.insert(0, pts.pop(i))
        i += 1
    return center, radius


def min_enclosing_ball(points: Sequence[Sequence[float]]) -> tuple[np.ndarray, float]:
    """Smallest enclosing ball by Welzl's recursion with move-to-front.

    Deterministic for a given input order.
    """
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("need a non-empty (k, d) array of points")
    pts = [row.copy() for row in arr]
    center, radius = _mtf_ball(pts, len(pts), [], arr.shape[1])
    return center, radius


def circumradius_triangle(a, b, c) -> float:
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    u, v = b - a, c - a
    uu, vv, uv = float(u @ u), float(v @ v), float(u @ v)
    gram = uu * vv - uv * uv
    scale = max(uu, vv, float((c - b) @ (c - b)))
    if gram <= 1e-24 * scale * scale or scale == 0.0:
        raise CollinearError("triangle vertices are collinear")
    la, lb, lc = math.sqrt(uu), math.sqrt(vv), float(np.linalg.norm(c - b))
    area = 0.5 * math.sqrt(gram)
    return la * lb * lc / (4.0 * area)


def ball_volume(d: int) -> float:
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def sphere_surface(d: int) -> float:
    """Surface measure of the unit sphere bounding the unit ball of R^d."""
    return d * ball_volume(d)
