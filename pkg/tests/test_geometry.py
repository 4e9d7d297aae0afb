import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sepcontact.errors import CollinearError, DegreeError, OverlapError
from sepcontact.geometry import (CONTINUOUS, LATTICE, Hyperplane, PackingConfig, ball_volume, circumradius_triangle,
                                 contact_graph, lattice_packing, min_enclosing_ball, scale_to_unit_radius,
                                 sphere_surface, tangent_directions)


def test_contact_graph_square():
    g = contact_graph(lattice_packing([(0, 0), (0, 1), (1, 0), (1, 1)]))
    assert g.contact_number == 4
    assert g.edges == ((0, 1), (0, 2), (1, 3), (2, 3))


def test_single_ball_has_no_contacts():
    assert contact_graph(lattice_packing([(0, 0, 0)])).contact_number == 0


def test_domino_3d():
    g = contact_graph(lattice_packing([(0, 0, 0), (0, 0, 1)]))
    assert g.contact_number == 1 and g.degree == (1, 1)


def test_continuous_contacts_with_tolerance():
    p = PackingConfig(2, 1.0, [[0.0, 0.0], [2.0 + 1e-12, 0.0], [0.0, 2.5]])
    assert contact_graph(p).edges == ((0, 1),)


def test_overlap_rejected():
    with pytest.raises(OverlapError):
        PackingConfig(2, 1.0, [[0.0, 0.0], [1.5, 0.0]])
    with pytest.raises(OverlapError):
        contact_graph(PackingConfig(2, 0.5, [[0, 0], [0, 0]], LATTICE, validate=False))


def test_degree_cap_enforced_on_unvalidated_input():
    # centre touching 5 balls in the plane: impossible without overlaps elsewhere
    ring = [[2 * math.cos(t), 2 * math.sin(t)] for t in np.linspace(0, 2 * math.pi, 6)[:-1]]
    p = PackingConfig(2, 1.0, [[0.0, 0.0]] + ring, CONTINUOUS, validate=False)
    with pytest.raises(DegreeError):
        contact_graph(p)


def test_lattice_mode_requires_integers():
    with pytest.raises(ValueError):
        PackingConfig(2, 0.5, [[0.5, 0.0]], LATTICE)


def test_centers_are_read_only():
    p = lattice_packing([(0, 0), (1, 0)])
    with pytest.raises(ValueError):
        p.centers[0, 0] = 5


def test_scale_to_unit_radius_keeps_contacts():
    p = lattice_packing([(0, 0), (1, 0), (1, 1)])
    q = scale_to_unit_radius(p)
    assert q.radius == 1.0 and contact_graph(q).edges == contact_graph(p).edges


def test_tangent_directions_plus_pentomino():
    p = lattice_packing([(1, 1), (0, 1), (2, 1), (1, 0), (1, 2)])
    td = tangent_directions(contact_graph(p), p, 0)
    assert len(td.directions) == 4
    assert td.min_angle == pytest.approx(math.pi / 2, abs=1e-12)


def test_tangent_directions_hexagonal_triple():
    p = PackingConfig(2, 1.0, [[0.0, 0.0], [2.0, 0.0], [1.0, math.sqrt(3.0)]])
    td = tangent_directions(contact_graph(p), p, 0)
    assert td.min_angle == pytest.approx(math.pi / 3, abs=1e-9)


def test_tangent_directions_isolated():
    p = PackingConfig(2, 1.0, [[0.0, 0.0], [5.0, 0.0]])
    td = tangent_directions(contact_graph(p), p, 0)
    assert td.directions.shape == (0, 2) and td.min_angle is None


def test_min_enclosing_ball_square():
    c, r = min_enclosing_ball([(1, 1, 0), (1, -1, 0), (-1, 1, 0), (-1, -1, 0)])
    assert r == pytest.approx(math.sqrt(2), abs=1e-12)
    assert np.allclose(c, 0, atol=1e-12)


def test_min_enclosing_ball_single_point():
    c, r = min_enclosing_ball([(3.0, 4.0)])
    assert r == 0.0 and np.allclose(c, [3, 4])


def test_min_enclosing_ball_regular_tetrahedron():
    tet = np.array([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], dtype=float) / math.sqrt(2)
    _, r = min_enclosing_ball(tet)
    assert r == pytest.approx(math.sqrt(1.5), abs=1e-12)


def _brute_min_ball(pts):
    """Smallest ball among those determined by every subset of <= d+1 points."""
    best = math.inf
    k = len(pts)
    for size in range(1, min(k, pts.shape[1] + 1) + 1):
        for sub in itertools.combinations(range(k), size):
            q = pts[list(sub)]
            if size == 1:
                c = q[0]
            else:
                A = q[1:] - q[0]
                lam, *_ = np.linalg.lstsq(2 * A @ A.T, np.einsum("ij,ij->i", A, A), rcond=None)
                c = q[0] + A.T @ lam
            r = float(np.max(np.linalg.norm(pts - c, axis=1)))
            best = min(best, r)
    return best


@given(st.lists(st.tuples(*[st.floats(-5, 5, allow_nan=False)] * 3), min_size=1, max_size=7))
def test_min_enclosing_ball_matches_brute_force(pts):
    pts = np.array(pts)
    c, r = min_enclosing_ball(pts)
    assert np.all(np.linalg.norm(pts - c, axis=1) <= r + 1e-9)
    assert r == pytest.approx(_brute_min_ball(pts), abs=1e-7)


def test_circumradius_examples():
    assert circumradius_triangle((0, 0), (2, 0), (1, math.sqrt(3))) == pytest.approx(2 / math.sqrt(3))
    assert circumradius_triangle((0, 0), (3, 0), (0, 4)) == pytest.approx(2.5)


@pytest.mark.parametrize("x", [1.05, 1.1, math.sqrt(1.5), 1.3, math.sqrt(2)])
def test_circumradius_matches_profile_triangle(x):
    from sepcontact.constants import circumradius_profile
    # isosceles triangle with base 2x and legs x^2 has circumradius x^3 / (2 sqrt(x^2 - 1))
    apex = (0.0, x * math.sqrt(x * x - 1.0))
    r = circumradius_triangle((-x, 0.0), (x, 0.0), apex)
    assert r == pytest.approx(circumradius_profile(x), rel=1e-12)


def test_circumradius_collinear():
    with pytest.raises(CollinearError):
        circumradius_triangle((0, 0), (1, 1), (2, 2))


def test_ball_volume_and_surface():
    assert ball_volume(3) == pytest.approx(4 * math.pi / 3)
    assert sphere_surface(3) == pytest.approx(4 * math.pi)
    assert ball_volume(2) == pytest.approx(math.pi)
    assert sphere_surface(2) == pytest.approx(2 * math.pi)
    assert sphere_surface(4) ** 4 / ball_volume(4) ** 3 == pytest.approx(4 ** 4 * ball_volume(4), rel=1e-10)


def test_hyperplane_normalisation():
    h = Hyperplane.through([3.0, 4.0], 10.0)
    assert h.normal == pytest.approx((0.6, 0.8)) and h.offset == pytest.approx(2.0)
    with pytest.raises(ValueError):
        Hyperplane((1.0, 1.0), 0.0)
