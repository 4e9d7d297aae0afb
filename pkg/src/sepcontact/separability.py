"""Separation certificates for totally separable packings.

A certificate maps every unordered pair of balls to one hyperplane that
separates the pair and misses the interior of every ball. Checking a
certificate is exact; finding one is a sound but incomplete search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import CapacityError, DuplicateCenterError, MissingPairError
from .geometry import CONTINUOUS, LATTICE, Hyperplane, PackingConfig

CERT_TOL = 1e-9
N_OFFSETS = 17


@dataclass(frozen=True)
class SeparationCertificate:
    planes: Mapping[tuple[int, int], Hyperplane]

    def __post_init__(self):
        norm = {}
        for (i, j), h in self.planes.items():
            norm[(min(i, j), max(i, j))] = h
        object.__setattr__(self, "planes", MappingProxyType(dict(sorted(norm.items()))))

    def __len__(self):
        return len(self.planes)


@dataclass(frozen=True)
class Unknown:
    """Certificate search gave up on ``pair``; says nothing about separability."""

    pair: tuple[int, int]


@dataclass(frozen=True)
class CertificateReport:
    valid: bool
    first_violation: dict | None = None


def _plane_violation(centers: np.ndarray, r: float, i: int, j: int, h: Hyperplane) -> dict | None:
    s = centers @ np.asarray(h.normal) - h.offset
    si, sj = float(s[i]), float(s[j])
    separates = (si <= -r + CERT_TOL and sj >= r - CERT_TOL) or (sj <= -r + CERT_TOL and si >= r - CERT_TOL)
    if not separates:
        return {"pair": [i, j], "normal": list(h.normal), "offset": h.offset,
                "reason": "pair not on opposite sides", "ball": i if abs(si) < r - CERT_TOL else j}
    bad = np.nonzero(np.abs(s) < r - CERT_TOL)[0]
    if bad.size:
        k = int(bad[0])
        return {"pair": [i, j], "normal": list(h.normal), "offset": h.offset,
                "reason": "plane cuts a ball interior", "ball": k}
    return None


def verify_certificate(p: PackingConfig, cert: SeparationCertificate) -> CertificateReport:
    centers = np.asarray(p.centers, dtype=float)
    for i, j in itertools.combinations(range(p.n), 2):
        if (i, j) not in cert.planes:
            raise MissingPairError(f"certificate has no plane for pair ({i}, {j})")
    for (i, j), h in cert.planes.items():
        v = _plane_violation(centers, p.radius, i, j, h)
        if v is not None:
            return CertificateReport(False, v)
    return CertificateReport(True, None)


def axis_certificate(p: PackingConfig) -> SeparationCertificate:
    """Half-integer axis planes for a unit-diameter lattice packing."""
    if p.mode != LATTICE:
        raise ValueError("axis_certificate needs a lattice-mode packing")
    c = p.centers
    planes = {}
    for i, j in itertools.combinations(range(p.n), 2):
        diff = np.nonzero(c[i] != c[j])[0]
        if diff.size == 0:
            raise DuplicateCenterError(f"balls {i} and {j} share a center")
        k = int(diff[0])
        normal = [0.0] * p.dimension
        normal[k] = 1.0
        planes[(i, j)] = Hyperplane(tuple(normal), float(min(c[i][k], c[j][k])) + 0.5)
    return SeparationCertificate(planes)


def _offsets(proj: np.ndarray, i: int, j: int, r: float) -> list[float]:
    lo, hi = sorted((float(proj[i]), float(proj[j])))
    lo, hi = lo + r, hi - r
    if hi < lo - CERT_TOL:
        return []
    if hi < lo:
        hi = lo
    out = np.linspace(lo, hi, N_OFFSETS)
    # slab endpoints are the only places a feasible offset set can start or end
    ends = np.concatenate((proj - r, proj + r))
    ends = ends[(ends >= lo) & (ends <= hi)]
    return np.concatenate((out, np.sort(ends), [lo, hi])).tolist()


def _candidates(centers: np.ndarray, i: int, j: int, r: float):
    d = centers.shape[1]
    for k in range(d):
        e = np.zeros(d)
        e[k] = 1.0
        for t in _offsets(centers[:, k], i, j, r):
            yield Hyperplane(tuple(e), t)
    u = centers[j] - centers[i]
    u = u / np.linalg.norm(u)
    mid = 0.5 * (centers[i] + centers[j])
    yield Hyperplane(tuple(u), float(u @ mid))
    for t in _offsets(centers @ u, i, j, r):
        yield Hyperplane(tuple(u), t)


def find_certificate(p: PackingConfig, budget: int | None = None) -> SeparationCertificate | Unknown:
    """Search a fixed candidate family of planes for every pair.

    Candidates per pair: axis-aligned planes across the gap, the
    perpendicular bisector, and planes orthogonal to the center line at
    offsets across the gap. ``budget`` caps candidates tried per pair.
    Returns :class:`Unknown` when some pair is not certified.
    """
    centers = np.asarray(p.centers, dtype=float)
    r = p.radius
    planes = {}
    for i, j in itertools.combinations(range(p.n), 2):
        found = None
        for tried, h in enumerate(_candidates(centers, i, j, r)):
            if budget is not None and tried >= budget:
                break
            if _plane_violation(centers, r, i, j, h) is None:
                found = h
                break
        if found is None:
            return Unknown((i, j))
        planes[(i, j)] = found
    return SeparationCertificate(planes)


# -- guillotine generator ---------------------------------------------------

def _capacity_width(count: int, other: int) -> int:
    # smallest width (multiple of 2) whose grid capacity hosts `count` balls
    return 2 * (-(-count // other))


def _feasible_intervals(lo: float, hi: float, cuts: list[float]) -> list[tuple[float, float]]:
    ivs = [(lo + 1.0, hi - 1.0)]
    for t in cuts:
        nxt = []
        for a, b in ivs:
            if t + 1.0 <= a or t - 1.0 >= b:
                nxt.append((a, b))
                continue
            if a <= t - 1.0:
                nxt.append((a, t - 1.0))
            if t + 1.0 <= b:
                nxt.append((t + 1.0, b))
        ivs = nxt
    return ivs


def _nearest(ivs: list[tuple[float, float]], x: float) -> float:
    best, bd = None, None
    for a, b in ivs:
        y = min(max(x, a), b)
        if bd is None or abs(y - x) < bd:
            best, bd = y, abs(y - x)
    return best


class _Attempt:
    def __init__(self, d: int, rng: np.random.Generator):
        self.d = d
        self.rng = rng
        self.cuts: list[list[float]] = [[] for _ in range(d)]
        self.leaves: list[tuple[np.ndarray, np.ndarray]] = []
        self.pair_plane: dict[tuple[int, int], tuple[int, float]] = {}

    def split(self, lo: np.ndarray, hi: np.ndarray, count: int) -> list[int]:
        if count == 1:
            self.leaves.append((lo, hi))
            return [len(self.leaves) - 1]
        side = hi - lo
        cap = np.floor(side / 2.0).astype(int)
        first = int(self.rng.integers(1, count))
        choice = None
        for n1 in [first] + [m for m in range(1, count) if m != first]:
            for k in np.argsort(-side, kind="stable"):
                other = int(np.prod(np.delete(cap, k))) or 1
                wl = _capacity_width(n1, other)
                wr = _capacity_width(count - n1, other)
                if wl + wr <= side[k] + 1e-12:
                    choice = (n1, int(k), wl, wr)
                    break
            if choice:
                break
        if choice is None:
            raise CapacityError(f"box of sides {side.tolist()} cannot host {count} balls")
        n1, k, wl, wr = choice
        a, b = lo[k] + wl, hi[k] - wr
        t = float(a + (0.2 + 0.6 * self.rng.random()) * (b - a))
        # snap to the even grid: odd coordinates then stay clear of every cut
        t = float(min(max(2.0 * round(t / 2.0), a), b))
        self.cuts[k].append(t)
        hi_left, lo_right = hi.copy(), lo.copy()
        hi_left[k] = t
        lo_right[k] = t
        left = self.split(lo, hi_left, n1)
        right = self.split(lo_right, hi, count - n1)
        for i in left:
            for j in right:
                self.pair_plane[(min(i, j), max(i, j))] = (k, t)
        return left + right

    def place(self, jitter: float) -> np.ndarray | None:
        centers = []
        for lo, hi in self.leaves:
            c = np.empty(self.d)
            for k in range(self.d):
                ivs = _feasible_intervals(float(lo[k]), float(hi[k]), self.cuts[k])
                if not ivs:
                    return None
                mid = 0.5 * (lo[k] + hi[k])
                u = self.rng.uniform(-1.0, 1.0) if jitter > 0 else 0.0
                target = mid + jitter * u * max(0.0, 0.5 * (hi[k] - lo[k]) - 1.0)
                c[k] = _nearest(ivs, float(target))
            centers.append(c)
        return np.array(centers)


def guillotine_generate(d: int, n: int, seed: int, jitter: float = 0.0) -> tuple[PackingConfig, SeparationCertificate]:
    """Random totally separable unit-ball packing from a guillotine partition.

    The box of side ``4 * ceil(n ** (1/d))`` is cut recursively by
    axis-parallel planes; each cut is drawn in the middle 60% of its
    feasible range and snapped to an even coordinate. Every ball keeps
    distance at least 1 from *every* cut plane, so the cut at the lowest
    common ancestor of two cells separates them and misses all balls.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if d not in (2, 3):
        raise ValueError("guillotine_generate supports d in {2, 3}")
    if jitter < 0:
        raise ValueError("jitter must be non-negative")
    side = 4.0 * _iroot_ceil(n, d)
    rng = np.random.default_rng(seed)
    att = _Attempt(d, rng)
    att.split(np.zeros(d), np.full(d, side), n)
    centers = att.place(jitter)
    if centers is None:
        raise CapacityError("a guillotine cell has no position clear of all cuts")
    planes = {}
    for (i, j), (k, t) in att.pair_plane.items():
        e = [0.0] * d
        e[k] = 1.0
        planes[(i, j)] = Hyperplane(tuple(e), t)
    return PackingConfig(d, 1.0, centers, CONTINUOUS), SeparationCertificate(planes)


def _iroot_ceil(n: int, d: int) -> int:
    k = max(1, int(round(n ** (1.0 / d))))
    while k ** d < n:
        k += 1
    while k > 1 and (k - 1) ** d >= n:
        k -= 1
    return k
