"""Face census of planar contact graphs.

The contact graph of a 2D packing is embedded with straight edges between
centers. Faces are traced by half-edges: leaving ``v`` after arriving from
``u``, take the neighbour that precedes ``u`` in counter-clockwise order.
Bounded faces then wind counter-clockwise and the outer face has negative
signed area.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field

import numpy as np

from .bounds import harborth_ts
from .errors import DisconnectedError, EmbeddingError, InternalInconsistency
from .geometry import ContactGraph, PackingConfig, contact_graph


@dataclass(frozen=True)
class FaceCensus:
    n: int
    c: int
    b: int
    b2: int
    b3: int
    b4: int
    b_other: int
    outer_walk: int
    f: dict[int, int]
    two_connected: bool
    checks: dict[str, bool | None] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n, "c": self.c, "b": self.b,
            "b2": self.b2, "b3": self.b3, "b4": self.b4, "b_other": self.b_other,
            "outer_walk": self.outer_walk,
            "f": {str(k): v for k, v in sorted(self.f.items())},
            "two_connected": self.two_connected,
            "checks": dict(sorted(self.checks.items())),
        }


def _connected(adj: list[list[int]], skip: int = -1) -> bool:
    n = len(adj)
    start = 0 if skip != 0 else 1
    if n - (skip >= 0) <= 1:
        return True
    seen = {start}
    todo = deque([start])
    while todo:
        v = todo.popleft()
        for w in adj[v]:
            if w != skip and w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == n - (skip >= 0)


def is_two_connected(g: ContactGraph) -> bool:
    adj = g.adjacency()
    if g.n < 3 or not _connected(adj):
        return False
    return all(_connected(adj, skip=v) for v in range(g.n))


def _faces(g: ContactGraph, xy: np.ndarray) -> list[list[int]]:
    adj = g.adjacency()
    order = []
    for v, nbrs in enumerate(adj):
        ang = [math.atan2(xy[w, 1] - xy[v, 1], xy[w, 0] - xy[v, 0]) for w in nbrs]
        srt = sorted(zip(ang, nbrs))
        for (a1, _), (a2, _) in zip(srt, srt[1:]):
            if abs(a2 - a1) < 1e-12:
                raise EmbeddingError(f"two edges at vertex {v} overlap")
        order.append([w for _, w in srt])
    pos = [{w: k for k, w in enumerate(nb)} for nb in order]
    used = set()
    faces = []
    for u, v in g.edges:
        for start in ((u, v), (v, u)):
            if start in used:
                continue
            walk = []
            a, b = start
            while (a, b) not in used:
                used.add((a, b))
                walk.append(a)
                nb = order[b]
                a, b = b, nb[(pos[b][a] - 1) % len(nb)]
            faces.append(walk)
    return faces


def _signed_area(walk: list[int], xy: np.ndarray) -> float:
    pts = xy[walk]
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def face_census(p: PackingConfig, g: ContactGraph | None = None) -> FaceCensus:
    """Boundary and face statistics of a connected 2D contact graph.

    The boundary inequalities are evaluated only on 2-connected graphs
    without degree-1 vertices; otherwise they are reported as ``None``.
    """
    if p.dimension != 2:
        raise ValueError("face_census works on planar packings only")
    g = g or contact_graph(p)
    adj = g.adjacency()
    if not _connected(adj):
        raise DisconnectedError("contact graph is not connected")
    xy = np.asarray(p.centers, dtype=float)
    n, c = g.n, g.contact_number
    if c == 0:
        outer, inner = [0], []
    else:
        faces = _faces(g, xy)
        areas = [_signed_area(w, xy) for w in faces]
        k_out = int(np.argmin(areas))
        outer = faces[k_out]
        inner = [w for k, w in enumerate(faces) if k != k_out]
    f = dict(sorted(Counter(len(w) for w in inner).items()))
    outer_len = len(outer) if c else 0
    bverts = sorted(set(outer))
    degs = Counter(g.degree[v] for v in bverts)
    b = len(bverts)
    b2, b3, b4 = degs.get(2, 0), degs.get(3, 0), degs.get(4, 0)
    b_other = b - b2 - b3 - b4
    if n - c + sum(f.values()) != 1:
        raise InternalInconsistency("Euler relation failed; the embedding is not planar")
    if sum(i * m for i, m in f.items()) != 2 * c - outer_len:
        raise InternalInconsistency("face sides do not add up to 2c minus the outer walk")
    two_conn = is_two_connected(g)
    boundary_ok = two_conn and min(g.degree) >= 2
    checks: dict[str, bool | None] = {
        "euler": True,
        "side_identity": True,
        "faces_at_least_4": all(i >= 4 for i in f),
        "h1": (b2 + 2 * b3 + 3 * b4 <= 2 * b - 4) if boundary_ok else None,
        "h4": (2 * c - 3 * n + 4 <= n - b) if boundary_ok else None,
        "h6": (c <= harborth_ts(n - b) + 2 * b - 4) if boundary_ok and n - b >= 2 else None,
    }
    return FaceCensus(n, c, b, b2, b3, b4, b_other, outer_len, f, two_conn, checks)


def components(p: PackingConfig, g: ContactGraph | None = None) -> list[list[int]]:
    g = g or contact_graph(p)
    adj = g.adjacency()
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp, todo = [], [s]
        seen[s] = True
        while todo:
            v = todo.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    todo.append(w)
        out.append(sorted(comp))
    return out


def component_censuses(p: PackingConfig) -> list[FaceCensus]:
    """Census of every connected component, in order of smallest ball index."""
    out = []
    for comp in components(p):
        sub = PackingConfig(p.dimension, p.radius, np.asarray(p.centers)[comp], p.mode, validate=False)
        out.append(face_census(sub))
    return out
