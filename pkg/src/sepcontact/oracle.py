"""Exhaustive search for c_Z(n, d) over lattice animals.

Connected animals are enumerated with Redelmeier's algorithm: each fixed
animal is produced exactly once, rooted at its lexicographically least
cell. Branch-and-bound prunes a partial animal when no completion can beat
the incumbent.

Upper bound for completing a partial animal ``S`` (``m`` cells, ``c``
contacts) by ``k = n - m`` new cells ``N``::

    contacts gained = e(S, N) + e(N)
    e(S, N) <= T_k               (T_k: sum of the k largest free-cell
                                  neighbour counts towards S)
    e(N)    <= thm1(k, d)
    2 e(N) + e(S, N) <= 2 d k    (degree cap)

together with the global cap ``thm1(n, d)``.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .bounds import thm1_bound
from .errors import LimitError
from .lattice import LatticeShape, adjacency_count, format_shape, parse_shape, quasicube

VERSION = 1
LIMITS = {2: 14, 3: 9}
SPLIT_DEPTH = 3


@dataclass(frozen=True)
class SearchResult:
    n: int
    d: int
    max_contacts: int
    witness: LatticeShape
    shapes_explored: int
    pruned: int
    quantity: str = field(default="c_Z")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "quantity": self.quantity,
            "max_contacts": self.max_contacts,
            "witness": [list(c) for c in self.witness.sorted_cells()],
            "shapes_explored": self.shapes_explored,
            "pruned": self.pruned,
        }


class _Stop(Exception):
    pass


class _Search:
    """Mutable Redelmeier state over an integer cell encoding."""

    def __init__(self, n: int, d: int, prune: bool, best: int):
        self.n, self.d, self.prune = n, d, prune
        self.base = 2 * n + 1
        size = self.base ** d
        self.steps = [self.base ** (d - 1 - i) for i in range(d)]
        self.origin = n * sum(self.steps)
        self.occ = bytearray(size)
        self.reached = bytearray(size)
        self.nbcnt = bytearray(size)
        self.hist = [0] * (2 * d + 1)
        self.cells: list[int] = []
        self.contacts = 0
        self.best = best
        self.witness: list[int] | None = None
        self.explored = 0
        self.pruned = 0
        self.cap = thm1_bound(n, d) if n >= 2 else 0
        self.rest_cap = [0, 0] + [thm1_bound(k, d) for k in range(2, n + 1)]

    def neighbors(self, x: int):
        for s in self.steps:
            yield x + s
            yield x - s

    def add(self, x: int) -> None:
        nb, hist, occ = self.nbcnt, self.hist, self.occ
        cnt = nb[x]
        self.contacts += cnt
        if cnt:
            hist[cnt] -= 1
        occ[x] = 1
        self.cells.append(x)
        for y in self.neighbors(x):
            old = nb[y]
            nb[y] = old + 1
            if not occ[y]:
                if old:
                    hist[old] -= 1
                hist[old + 1] += 1

    def remove(self, x: int) -> None:
        nb, hist, occ = self.nbcnt, self.hist, self.occ
        self.cells.pop()
        occ[x] = 0
        for y in self.neighbors(x):
            old = nb[y]
            nb[y] = old - 1
            if not occ[y]:
                hist[old] -= 1
                if old > 1:
                    hist[old - 1] += 1
        cnt = nb[x]
        if cnt:
            hist[cnt] += 1
        self.contacts -= cnt

    def upper_bound(self) -> int:
        k = self.n - len(self.cells)
        top, left = 0, k
        for j in range(2 * self.d, 0, -1):
            if not left:
                break
            take = min(self.hist[j], left)
            top += take * j
            left -= take
        two_dk = 2 * self.d * k
        gain = min(two_dk, top + self.rest_cap[k], (top + two_dk) // 2)
        return min(self.cap, self.contacts + gain)

    def leaf(self) -> None:
        self.explored += 1
        if self.contacts > self.best:
            self.best = self.contacts
            self.witness = list(self.cells)
            if self.prune and self.best >= self.cap:
                raise _Stop

    def run(self, untried: list[int], tasks: list | None = None) -> None:
        """Redelmeier recursion; with ``tasks`` it snapshots subtrees at SPLIT_DEPTH."""
        reached = self.reached
        origin = self.origin
        while untried:
            x = untried.pop()
            self.add(x)
            if len(self.cells) == self.n:
                self.leaf()
            elif self.prune and self.upper_bound() <= self.best:
                self.pruned += 1
            else:
                fresh = [y for y in self.neighbors(x) if y >= origin and not reached[y]]
                for y in fresh:
                    reached[y] = 1
                child = untried + fresh
                if tasks is not None and len(self.cells) == SPLIT_DEPTH:
                    tasks.append((list(self.cells), child,
                                  [i for i, v in enumerate(reached) if v]))
                else:
                    self.run(child, tasks)
                for y in fresh:
                    reached[y] = 0
            self.remove(x)

    def decode(self, cells: list[int]) -> LatticeShape:
        out = []
        for x in cells:
            coord = []
            for s in self.steps:
                coord.append(x // s - self.n)
                x %= s
            out.append(tuple(coord))
        return LatticeShape(self.d, frozenset(out)).canonical()


def _run_task(args) -> tuple[int, list | None, int, int]:
    n, d, prune, best, (cells, untried, reached) = args
    s = _Search(n, d, prune, best)
    for x in cells:
        s.add(x)
    for i in reached:
        s.reached[i] = 1
    try:
        s.run(list(untried))
    except _Stop:
        pass
    witness = s.decode(s.witness).sorted_cells() if s.witness is not None else None
    return s.best, witness, s.explored, s.pruned


def _search_connected(n: int, d: int, prune: bool, threads: int) -> SearchResult:
    seed_best = adjacency_count(quasicube(n, d)) - 1 if prune else -1
    root = _Search(n, d, prune, seed_best)
    root.reached[root.origin] = 1
    tasks: list = []
    try:
        root.run([root.origin], tasks)
    except _Stop:
        tasks = []
    results = []
    if root.witness is not None:
        results.append((root.best, root.decode(root.witness).sorted_cells()))
    explored, pruned = root.explored, root.pruned
    if tasks and not (prune and root.best >= root.cap):
        args = [(n, d, prune, seed_best, t) for t in tasks]
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as ex:
                outs = list(ex.map(_run_task, args, chunksize=max(1, len(args) // (4 * threads))))
        else:
            outs = [_run_task(a) for a in args]
        for best, witness, e, p in outs:
            explored += e
            pruned += p
            if witness is not None:
                results.append((best, witness))
    if not results:
        raise RuntimeError("search found no animal; the seeded lower bound is inconsistent")
    top = max(b for b, _ in results)
    witness = min(w for b, w in results if b == top)
    shape = LatticeShape.from_cells(witness, d)
    return SearchResult(n, d, top, shape, explored, pruned)


def _cache_paths(cache_dir, n: int, d: int) -> tuple[Path, Path]:
    stem = Path(cache_dir) / f"cZ_n{n}_d{d}_v{VERSION}"
    return stem.with_suffix(".shape"), stem.with_suffix(".json")


def _load_cache(cache_dir, n: int, d: int) -> SearchResult | None:
    shape_path, meta_path = _cache_paths(cache_dir, n, d)
    if not (shape_path.exists() and meta_path.exists()):
        return None
    try:
        shape = parse_shape(shape_path.read_text(), d)
        meta = json.loads(meta_path.read_text())
    except (OSError, ValueError):
        return None
    # advisory cache: the stored count must match the stored witness
    if shape.n != n or adjacency_count(shape) != meta.get("max_contacts"):
        return None
    return SearchResult(n, d, meta["max_contacts"], shape, meta["shapes_explored"], meta["pruned"])


def _store_cache(cache_dir, res: SearchResult) -> None:
    shape_path, meta_path = _cache_paths(cache_dir, res.n, res.d)
    shape_path.parent.mkdir(parents=True, exist_ok=True)
    shape_path.write_text(format_shape(res.witness))
    meta = res.to_dict()
    del meta["witness"]
    meta_path.write_text(json.dumps(meta, sort_keys=True))


def max_contacts_lattice(n: int, d: int, connected_only: bool = True, prune: bool = True,
                         allow_large: bool = False, threads: int = 1,
                         cache_dir: str | os.PathLike | None = None) -> SearchResult:
    """Exact c_Z(n, d) by exhaustive enumeration of lattice animals.

    Desk-scale limits (d=2: n <= 14, d=3: n <= 9) apply unless
    ``allow_large``. The result, witness included, does not depend on
    ``threads``. With ``connected_only=False`` disconnected shapes are
    included by combining connected optima over all partitions of ``n``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not allow_large and (d not in LIMITS or n > LIMITS[d]):
        raise LimitError(f"(n={n}, d={d}) exceeds desk-scale limits {LIMITS}; pass allow_large")
    if not connected_only:
        return _search_any(n, d, prune, threads)
    use_cache = cache_dir is not None and prune
    if use_cache:
        hit = _load_cache(cache_dir, n, d)
        if hit is not None:
            return hit
    if n == 1:
        res = SearchResult(1, d, 0, LatticeShape(d, frozenset({(0,) * d})), 1, 0)
    else:
        res = _search_connected(n, d, prune, threads)
    if use_cache:
        _store_cache(cache_dir, res)
    return res


def _search_any(n: int, d: int, prune: bool, threads: int) -> SearchResult:
    conn = {m: max_contacts_lattice(m, d, prune=prune, allow_large=True, threads=threads)
            for m in range(1, n + 1)}
    # best[m]: max contacts over shapes of m cells, any number of components
    best = {0: (0, [])}
    for m in range(1, n + 1):
        cands = []
        for part in range(1, m + 1):
            value = conn[part].max_contacts + best[m - part][0]
            cands.append((value, -part, [part] + best[m - part][1]))
        value, _, parts = max(cands)
        best[m] = (value, parts)
    value, parts = best[n]
    cells, shift = [], 0
    for part in parts:
        w = conn[part].witness.sorted_cells()
        cells.extend((c[0] + shift,) + tuple(c[1:]) for c in w)
        shift += max(c[0] for c in w) + 2
    explored = sum(r.shapes_explored for r in conn.values())
    pruned = sum(r.pruned for r in conn.values())
    return SearchResult(n, d, value, LatticeShape.from_cells(cells, d), explored, pruned)


def verify_formula_2d(n_max: int, **kwargs) -> list[tuple[int, int, int, bool]]:
    """Rows ``(n, oracle, floor(2n - 2 sqrt n), equal)`` for ``2 <= n <= n_max``."""
    from .bounds import harborth_ts

    if n_max > LIMITS[2]:
        raise LimitError(f"n_max must be at most {LIMITS[2]}")
    rows = []
    for n in range(2, n_max + 1):
        got = max_contacts_lattice(n, 2, **kwargs).max_contacts
        formula = harborth_ts(n)
        rows.append((n, got, formula, got == formula))
    return rows
