"""Numeric verification of the constants behind the 3D contact bound.

Covers the circumradius profile of separable disk triples, the density of
the unit ball in the extremal orthoscheme (deterministic quadrature plus
Monte Carlo), spherical-cap constants, box-polytope isoperimetry and Monte
Carlo estimates of the volume and surface of unions of inflated balls.

Monte Carlo runs split into ``partitions`` independently seeded substreams
(children of ``numpy.random.SeedSequence(seed)``) reduced in partition order,
so results depend only on ``(seed, samples, partitions)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate, optimize
from scipy.spatial import cKDTree

from .errors import DomainError, RealizabilityError
from .geometry import PackingConfig, contact_graph
from .lattice import LatticeShape, cube_union_surface

Z95 = 1.959963984540054
DENSITY_BOUND = 0.6401
THM3_COEFF = Fraction(1346, 1000)

SQRT2 = math.sqrt(2.0)
PROFILE_ARGMIN = math.sqrt(1.5)
PROFILE_MIN = 3.0 * math.sqrt(3.0) / 4.0

# vol(W n B^3) / vol(W) for the orthoscheme with edge norms (1, 3*sqrt(3)/4, sqrt(2)),
# produced by orthoscheme_density_quadrature (nested adaptive quad, abs. error < 1e-12)
# and re-derived in the test suite.
ORTHOSCHEME_DENSITY = 0.640068335041662


@dataclass(frozen=True)
class McEstimate:
    value: float
    half_width: float
    samples: int
    seed: int
    partitions: int = 1

    @property
    def sigma(self) -> float:
        return self.half_width / Z95

    def to_dict(self) -> dict:
        return {"value": self.value, "half_width": self.half_width, "samples": self.samples,
                "seed": self.seed, "partitions": self.partitions}


def _streams(seed: int, partitions: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(partitions)]


def _split(total: int, parts: int) -> list[int]:
    q, r = divmod(total, parts)
    return [q + (1 if i < r else 0) for i in range(parts)]


def _pmap(fn, items, threads: int):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


# -- circumradius profile -----------------------------------------------------

def circumradius_profile(x: float) -> float:
    """Circumradius ``x^3 / (2 sqrt(x^2 - 1))`` of the extremal separable triple with half-base ``x``."""
    if not (1.0 < x <= SQRT2 * (1 + 1e-15)):
        raise DomainError(f"profile defined for 1 < x <= sqrt(2), got {x!r}")
    s = x * x - 1.0
    if s <= 0.0:
        return math.inf
    return x ** 3 / (2.0 * math.sqrt(s))


def minimize_profile(tol: float = 1e-9) -> tuple[float, float]:
    """Closed-form minimiser (x^2 = 3/2), confirmed by golden-section search.

    A smooth minimum pins the argument only to about sqrt(machine eps), so
    the search is checked to ``sqrt(tol)`` in ``x`` and ``tol`` in value.
    """
    res = optimize.minimize_scalar(circumradius_profile, bracket=(1.05, 1.2, 1.4), method="golden",
                                   options={"xtol": 1e-12})
    x_star = PROFILE_ARGMIN
    if abs(res.x - x_star) > math.sqrt(tol) or abs(res.fun - PROFILE_MIN) > tol:
        raise AssertionError(f"golden-section minimum {res.x!r} disagrees with sqrt(3/2)")
    return x_star, circumradius_profile(x_star)


# -- orthoschemes ---------------------------------------------------------------

@dataclass(frozen=True)
class OrthoschemeSpec:
    """Norms of the three non-origin vertices of a 3D orthoscheme."""

    norms: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "norms", tuple(float(v) for v in self.norms))
        if len(self.norms) != 3:
            raise RealizabilityError("need exactly three norms")
        a, b, c = self.norms
        if not (0 < a < b < c):
            raise RealizabilityError(f"norms must increase strictly, got {self.norms}")

    @property
    def legs(self) -> tuple[float, float, float]:
        a, w2, w3 = self.norms
        return a, math.sqrt(w2 * w2 - a * a), math.sqrt(w3 * w3 - w2 * w2)


EXTREMAL_ORTHOSCHEME = OrthoschemeSpec((1.0, PROFILE_MIN, SQRT2))


def build_orthoscheme(spec: OrthoschemeSpec) -> np.ndarray:
    """Vertices ``w1=(a,0,0), w2=(a,b,0), w3=(a,b,c)`` as rows of a 3x3 array."""
    a, b, c = spec.legs
    if b <= 0 or c <= 0:
        raise RealizabilityError("degenerate orthoscheme")
    w = np.array([[a, 0.0, 0.0], [a, b, 0.0], [a, b, c]])
    w1, w2, w3 = w
    for lhs, rhs in ((w1, w2 - w1), (w1, w3 - w1), (w2, w3 - w2)):
        if abs(float(lhs @ rhs)) > 1e-12:
            raise AssertionError("orthoscheme orthogonality violated")
    for vec, target in zip(w, spec.norms):
        if abs(float(np.linalg.norm(vec)) - target) > 1e-12:
            raise AssertionError("orthoscheme norms not reproduced")
    return w


def orthoscheme_volume(spec: OrthoschemeSpec) -> float:
    a, b, c = spec.legs
    return a * b * c / 6.0


def orthoscheme_density_quadrature(spec: OrthoschemeSpec) -> tuple[float, float]:
    """Deterministic ``vol(W n B^3)/vol(W)`` with an error estimate.

    Rays from the origin through the far face (the triangle in the plane
    ``x = a``) cover ``W``; the ray through face point ``q`` keeps the
    fraction ``min(1, |q|^-3)`` of its cone volume inside the unit ball.
    The density is the face average of that fraction, integrated by nested
    adaptive quadrature split along the circle ``|q| = 1``.
    """
    a, b, c = spec.legs
    build_orthoscheme(spec)
    a2 = a * a
    err = [0.0]

    def inner(y: float) -> float:
        top = c / b * y
        rest = 1.0 - a2 - y * y
        pts = [math.sqrt(rest)] if rest > 0 and math.sqrt(rest) < top else None
        val, e = integrate.quad(lambda z: min(1.0, (a2 + y * y + z * z) ** -1.5), 0.0, top,
                                points=pts, epsabs=1e-14, epsrel=1e-13, limit=200)
        err[0] = max(err[0], e)
        return val

    kink = 1.0 - a2
    pts = [math.sqrt(kink)] if 0 < kink < b * b else None
    total, e_outer = integrate.quad(inner, 0.0, b, points=pts, epsabs=1e-14, epsrel=1e-13, limit=200)
    area = 0.5 * b * c
    return total / area, (e_outer + err[0] * b) / area


def _hits(w: np.ndarray, u: np.ndarray) -> np.ndarray:
    u = np.sort(u, axis=-1)
    lam = np.stack((u[..., 2] - u[..., 1], u[..., 1] - u[..., 0], u[..., 0]), axis=-1)
    x = lam @ w
    return np.einsum("...i,...i->...", x, x) <= 1.0


def orthoscheme_ball_density(spec: OrthoschemeSpec, seed: int = 42, samples: int = 10 ** 8,
                             partitions: int = 8, method: str = "stratified",
                             strata: int | None = None, threads: int = 1) -> McEstimate:
    """Monte Carlo ``vol(W n B^3)/vol(W)``: uniform points in the simplex, hit iff ``|x| <= 1``.

    Points come from sorted uniforms mapped to barycentric weights. With
    ``method="stratified"`` the unit cube of raw uniforms is cut into
    ``strata^3`` equal cells sampled equally often (the sorting map is
    measure preserving, so the sample is still uniform on the simplex) and
    the variance is estimated within strata.
    """
    w = build_orthoscheme(spec)
    if method == "plain":
        return _density_plain(w, seed, samples, partitions, threads)
    if method != "stratified":
        raise ValueError(f"unknown method {method!r}")
    g = strata or max(1, min(100, int((samples / 16) ** (1 / 3))))
    m = samples // g ** 3
    if m < 2:
        raise ValueError("need at least two samples per stratum")
    rngs = _streams(seed, partitions)
    slabs = np.array_split(np.arange(g), partitions)
    grid = np.indices((g, g)).reshape(2, -1).T.astype(float)

    def work(k: int):
        rng, total, sq = rngs[k], 0.0, 0.0
        for i in slabs[k]:
            u = rng.random((g * g, m, 3))
            u[..., 0] += i
            u[..., 1:] += grid[:, None, :]
            u /= g
            p = _hits(w, u).mean(axis=1)
            total += p.sum()
            sq += (p * (1.0 - p)).sum() * m / (m - 1)
        return total, sq

    parts = _pmap(work, range(partitions), threads)
    n_strata = g ** 3
    value = sum(t for t, _ in parts) / n_strata
    var = sum(s for _, s in parts) / (n_strata ** 2 * m)
    used = n_strata * m
    return McEstimate(value, max(Z95 * math.sqrt(var), 1.0 / used), used, seed, partitions)


def _density_plain(w, seed, samples, partitions, threads) -> McEstimate:
    rngs = _streams(seed, partitions)
    shares = _split(samples, partitions)
    chunk = 1 << 22

    def work(k: int) -> int:
        rng, left, hits = rngs[k], shares[k], 0
        while left:
            step = min(chunk, left)
            hits += int(_hits(w, rng.random((step, 3))).sum())
            left -= step
        return hits

    hits = sum(_pmap(work, range(partitions), threads))
    p = hits / samples
    hw = Z95 * math.sqrt(p * (1 - p) / samples)
    return McEstimate(p, max(hw, 1.0 / samples), samples, seed, partitions)


def rogers_comparison_sample(spec_a: OrthoschemeSpec, spec_b: OrthoschemeSpec, seed: int = 0,
                             samples: int = 10 ** 6, method: str = "mc") -> bool:
    """Sampled check that ``density(A) <= density(B)`` when ``1 <= B <= A`` componentwise."""
    build_orthoscheme(spec_a)
    build_orthoscheme(spec_b)
    if not all(1.0 <= b <= a for a, b in zip(spec_a.norms, spec_b.norms)):
        raise ValueError("comparison needs 1 <= norms(B) <= norms(A) componentwise")
    if method == "quadrature":
        da, ea = orthoscheme_density_quadrature(spec_a)
        db, eb = orthoscheme_density_quadrature(spec_b)
        return da <= db + ea + eb + 1e-12
    ma = orthoscheme_ball_density(spec_a, seed, samples, partitions=1)
    mb = orthoscheme_ball_density(spec_b, seed + 1, samples, partitions=1)
    return ma.value <= mb.value + ma.half_width + mb.half_width


def theorem3_constant_check(rho: Fraction | float = Fraction("0.6401")) -> bool:
    """Exact test of ``1 / rho^(2/3) > 1.346``, i.e. ``1 > 1.346^3 rho^2``."""
    rho = Fraction(rho)
    return THM3_COEFF ** 3 * rho * rho < 1


# -- spherical caps -------------------------------------------------------------

def cap_area(theta: float, radius: float = 1.0) -> float:
    if not (0 < theta <= math.pi) or radius <= 0:
        raise DomainError("need 0 < theta <= pi and radius > 0")
    return 2.0 * math.pi * radius * radius * (1.0 - math.cos(theta))


def cap_density_constant() -> float:
    """Area of the pi/4 cap over the regular spherical quadrilateral of area 2 pi / 3."""
    return cap_area(math.pi / 4, 1.0) / (2.0 * math.pi / 3.0)


def inscribed_cap_angle() -> float:
    """Angular radius of the cap cut from a radius-sqrt(3) sphere by a touching neighbour's sqrt(3)-ball."""
    return math.acos(1.0 / math.sqrt(3.0))


# -- unions of balls --------------------------------------------------------------

def union_volume(p: PackingConfig, R: float, seed: int = 0, samples: int = 10 ** 6,
                 partitions: int = 4, threads: int = 1) -> McEstimate:
    """Hit-or-miss volume of ``U (c_i + R B^d)`` over its bounding box."""
    if R <= 0:
        raise DomainError("R must be positive")
    centers = np.asarray(p.centers, dtype=float)
    lo, hi = centers.min(axis=0) - R, centers.max(axis=0) + R
    box = float(np.prod(hi - lo))
    tree = cKDTree(centers)
    rngs = _streams(seed, partitions)
    shares = _split(samples, partitions)
    chunk = 1 << 20

    def work(k: int) -> int:
        rng, left, hits = rngs[k], shares[k], 0
        while left:
            step = min(chunk, left)
            x = lo + (hi - lo) * rng.random((step, p.dimension))
            dist, _ = tree.query(x, k=1)
            hits += int((dist <= R).sum())
            left -= step
        return hits

    hits = sum(_pmap(work, range(partitions), threads))
    frac = hits / samples
    hw = Z95 * box * math.sqrt(frac * (1 - frac) / samples)
    return McEstimate(box * frac, max(hw, box / samples), samples, seed, partitions)


def union_surface(p: PackingConfig, R: float, seed: int = 0, samples: int = 10 ** 5,
                  partitions: int = 4, threads: int = 1) -> McEstimate:
    """Boundary area of ``U (c_i + R B^3)``; ``samples`` points per sphere.

    Each sphere contributes ``4 pi R^2`` times the fraction of its points
    lying outside every other ball; the union's boundary is the disjoint
    union of these visible patches.
    """
    if p.dimension != 3:
        raise DomainError("union_surface is implemented for d = 3")
    if R <= 0:
        raise DomainError("R must be positive")
    centers = np.asarray(p.centers, dtype=float)
    n = len(centers)
    tree = cKDTree(centers)
    rngs = _streams(seed, partitions)
    shares = _split(samples, partitions)

    def work(k: int) -> np.ndarray:
        rng = rngs[k]
        counts = np.zeros(n, dtype=np.int64)
        for i in range(n):
            v = rng.standard_normal((shares[k], 3))
            v /= np.linalg.norm(v, axis=1, keepdims=True)
            x = centers[i] + R * v
            if n == 1:
                counts[i] = shares[k]
                continue
            # exposed <=> the nearest center other than i is farther than R
            dist, idx = tree.query(x, k=2)
            other = np.where(idx[:, 0] == i, dist[:, 1], dist[:, 0])
            counts[i] = int((other > R).sum())
        return counts

    counts = sum(_pmap(work, range(partitions), threads))
    sphere = 4.0 * math.pi * R * R
    frac = counts / samples
    value = float(sphere * frac.sum())
    var = float((sphere ** 2 * frac * (1 - frac) / samples).sum())
    return McEstimate(value, max(Z95 * math.sqrt(var), sphere / samples), samples * n, seed, partitions)


def union_inequalities(p: PackingConfig, seed: int = 0, volume_samples: int = 10 ** 6,
                       surface_samples: int = 10 ** 5, partitions: int = 4) -> dict:
    """Monte Carlo audit of the union-of-balls inequalities at ``R = sqrt(3)``.

    Checks, with Monte Carlo slack: (a) packing density in the union below
    0.6401; (b) the isoperimetric inequality ``36 pi V^2 <= S^3``; (c)
    ``S <= 12 pi n - 4 pi contacts``; (d) ``S > 4 pi n^(2/3) / 0.6401^(2/3)``;
    (e) ``S <= 12 pi (n - m)`` with ``m`` the balls touching 2d = 6 others.
    """
    if p.dimension != 3 or abs(p.radius - 1.0) > 1e-12:
        raise DomainError("union_inequalities expects a unit-radius 3D packing")
    R = math.sqrt(3.0)
    g = contact_graph(p)
    n, contacts = p.n, g.contact_number
    m = sum(1 for deg in g.degree if deg == 6)
    V = union_volume(p, R, seed, volume_samples, partitions)
    S = union_surface(p, R, seed + 1, surface_samples, partitions)
    dens = 4.0 * math.pi / 3.0 * n / V.value
    dens_hw = dens * V.half_width / V.value
    lower_d = 4.0 * math.pi / DENSITY_BOUND ** (2.0 / 3.0) * n ** (2.0 / 3.0)
    upper_c = 12.0 * math.pi * n - 4.0 * math.pi * contacts
    upper_e = 12.0 * math.pi * (n - m)
    v_lo = max(V.value - 3 * V.sigma, 0.0)
    s_hi = S.value + 3 * S.sigma
    return {
        "n": n, "contacts": contacts, "full_degree": m,
        "volume": V.to_dict(), "surface": S.to_dict(),
        "density": dens,
        "a_density": dens < DENSITY_BOUND + 3 * dens_hw,
        "b_isoperimetric": 36.0 * math.pi * v_lo ** 2 <= s_hi ** 3,
        "c_contact_surface": S.value <= upper_c + 3 * S.sigma,
        "d_surface_lower": S.value >= lower_d - 3 * S.sigma,
        "e_full_degree": S.value <= upper_e + 3 * S.sigma,
        "bounds": {"c": upper_c, "d": lower_d, "e": upper_e},
    }


# -- box polytopes --------------------------------------------------------------

@dataclass(frozen=True)
class IsoResult:
    quotient: Fraction
    bound: int
    passed: bool
    equality: bool


def box_isoperimetric_check(s: LatticeShape) -> IsoResult:
    """Exact ``surface^d / volume^(d-1) >= (2d)^d`` for a union of unit cubes."""
    d, vol = s.dimension, s.n
    surf = cube_union_surface(s)
    lhs, rhs = surf ** d, (2 * d) ** d * vol ** (d - 1)
    return IsoResult(Fraction(surf ** d, vol ** (d - 1)), (2 * d) ** d, lhs >= rhs, lhs == rhs)
