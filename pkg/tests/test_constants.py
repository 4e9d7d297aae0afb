import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sepcontact.constants import (ORTHOSCHEME_DENSITY, EXTREMAL_ORTHOSCHEME, OrthoschemeSpec, box_isoperimetric_check,
                                  build_orthoscheme, cap_area, cap_density_constant, circumradius_profile,
                                  minimize_profile, orthoscheme_ball_density, orthoscheme_density_quadrature,
                                  orthoscheme_volume, rogers_comparison_sample, theorem3_constant_check,
                                  union_inequalities, union_surface, union_volume)
from sepcontact.errors import DomainError, RealizabilityError
from sepcontact.geometry import PackingConfig
from sepcontact.lattice import LatticeShape, box_shape, random_animal

SQ3 = math.sqrt(3.0)


def test_profile_values():
    assert circumradius_profile(math.sqrt(1.5)) == pytest.approx(3 * SQ3 / 4, abs=1e-15)
    assert circumradius_profile(math.sqrt(2)) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert circumradius_profile(math.nextafter(1.0, 2.0)) > 1e7
    with pytest.raises(DomainError):
        circumradius_profile(1.0)
    with pytest.raises(DomainError):
        circumradius_profile(1.5)


def test_minimize_profile():
    x, v = minimize_profile()
    assert abs(x * x - 1.5) <= 1e-12 and abs(v - 3 * SQ3 / 4) <= 1e-12


def test_profile_grid_minimum():
    xs = np.linspace(1.0001, math.sqrt(2), 200001)
    vals = xs ** 3 / (2 * np.sqrt(xs ** 2 - 1))
    assert xs[np.argmin(vals)] == pytest.approx(math.sqrt(1.5), abs=1e-5)


def test_build_extremal_orthoscheme():
    w = build_orthoscheme(EXTREMAL_ORTHOSCHEME)
    assert np.allclose(w[1], [1, math.sqrt(11) / 4, 0], atol=1e-15)
    assert np.allclose(w[2], [1, math.sqrt(11) / 4, math.sqrt(5) / 4], atol=1e-15)
    vol = abs(np.linalg.det(w)) / 6
    assert vol == pytest.approx(math.sqrt(55) / 96, abs=1e-15)
    assert orthoscheme_volume(EXTREMAL_ORTHOSCHEME) == pytest.approx(vol, abs=1e-15)


def test_orthoscheme_unit_legs():
    assert orthoscheme_volume(OrthoschemeSpec((1, math.sqrt(2), SQ3))) == pytest.approx(1 / 6)


def test_degenerate_orthoscheme():
    with pytest.raises(RealizabilityError):
        OrthoschemeSpec((1, 1, 1))
    with pytest.raises(RealizabilityError):
        OrthoschemeSpec((1, 0.5, 2))


def test_quadrature_reproduces_golden_value():
    val, err = orthoscheme_density_quadrature(EXTREMAL_ORTHOSCHEME)
    assert abs(val - ORTHOSCHEME_DENSITY) <= 1e-12 and err < 1e-10


def _density_by_grid(spec, m=400):
    """Midpoint rule on the far face with a per-ray analytic fraction, no adaptive refinement."""
    a, b, c = spec.legs
    ys = (np.arange(m) + 0.5) / m
    total = 0.0
    for y in ys * b:
        zs = (np.arange(m) + 0.5) / m * (c / b * y)
        r2 = a * a + y * y + zs ** 2
        total += np.minimum(1.0, r2 ** -1.5).sum() * (c / b * y) / m
    return total * b / m / (0.5 * b * c)


@pytest.mark.parametrize("norms,expected", [
    ((1.1, 1.4, 1.6), 0.48356),
    ((1, 1.01, 1.02), 0.98031),
    ((2, 2.5, 3), 0.080538),
])
def test_quadrature_against_grid_oracle(norms, expected):
    spec = OrthoschemeSpec(norms)
    val, _ = orthoscheme_density_quadrature(spec)
    assert val == pytest.approx(_density_by_grid(spec), abs=2e-4)
    assert val == pytest.approx(expected, abs=1e-5)


def test_simplex_inside_ball_has_density_one():
    spec = OrthoschemeSpec((0.5, 0.7, 0.9))
    assert orthoscheme_density_quadrature(spec)[0] == pytest.approx(1.0, abs=1e-12)
    mc = orthoscheme_ball_density(spec, seed=1, samples=10 ** 5, partitions=2)
    assert mc.value == 1.0 and mc.half_width > 0


def test_density_tends_to_one_near_unit_sphere():
    vals = [orthoscheme_density_quadrature(OrthoschemeSpec((1, 1 + e, 1 + 2 * e)))[0] for e in (0.1, 0.01, 0.001)]
    assert vals[0] < vals[1] < vals[2] < 1 and vals[2] > 0.99


@pytest.mark.parametrize("method", ["stratified", "plain"])
def test_monte_carlo_agrees_with_quadrature(method):
    for norms in ((1.0, 3 * SQ3 / 4, math.sqrt(2)), (2, 2.5, 3)):
        spec = OrthoschemeSpec(norms)
        q, _ = orthoscheme_density_quadrature(spec)
        mc = orthoscheme_ball_density(spec, seed=3, samples=10 ** 6, partitions=4, method=method)
        assert abs(mc.value - q) <= 2 * mc.half_width


def test_monte_carlo_determinism_and_threads():
    a = orthoscheme_ball_density(EXTREMAL_ORTHOSCHEME, seed=9, samples=200000, partitions=4)
    b = orthoscheme_ball_density(EXTREMAL_ORTHOSCHEME, seed=9, samples=200000, partitions=4, threads=4)
    c = orthoscheme_ball_density(EXTREMAL_ORTHOSCHEME, seed=10, samples=200000, partitions=4)
    assert a == b and a != c


def test_theorem3_constant():
    assert theorem3_constant_check(Fraction("0.6401"))
    assert theorem3_constant_check(ORTHOSCHEME_DENSITY)
    assert 1 / 0.6401 ** (2 / 3) > 1.346
    assert not theorem3_constant_check(Fraction("0.6405"))


def test_caps():
    assert cap_area(math.pi / 2, 1) == pytest.approx(2 * math.pi)
    assert cap_area(math.pi / 4, 1) == pytest.approx(2 * math.pi * (1 - 1 / math.sqrt(2)))
    assert cap_density_constant() == pytest.approx(3 * (1 - 1 / math.sqrt(2)), abs=1e-12)
    assert cap_density_constant() == pytest.approx(0.878680, abs=1e-6)
    with pytest.raises(DomainError):
        cap_area(0.0)


def _two_ball_closed_forms(R, dist=2.0):
    h = R - dist / 2
    lens = 2 * math.pi * h * h * (3 * R - h) / 3
    vol = 2 * 4 / 3 * math.pi * R ** 3 - lens
    surf = 2 * 4 * math.pi * R * R - 2 * 2 * math.pi * R * h
    return vol, surf


def test_union_single_ball():
    p = PackingConfig(3, 1.0, [[0.0, 0.0, 0.0]])
    s = union_surface(p, SQ3, seed=0, samples=10 ** 4)
    assert s.value == pytest.approx(12 * math.pi)
    v = union_volume(p, SQ3, seed=0, samples=10 ** 6)
    assert abs(v.value - 4 * SQ3 * math.pi) <= 2 * v.half_width


def test_union_two_balls_closed_form():
    p = PackingConfig(3, 1.0, [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
    vol, surf = _two_ball_closed_forms(SQ3)
    assert vol == pytest.approx(math.pi * (12 * SQ3 + 16) / 3)
    assert surf == pytest.approx(12 * math.pi + 4 * SQ3 * math.pi)
    s = union_surface(p, SQ3, seed=4, samples=10 ** 6)
    v = union_volume(p, SQ3, seed=4, samples=2 * 10 ** 6)
    assert abs(s.value - surf) <= 1.5 * s.half_width
    assert abs(v.value - vol) <= 1.5 * v.half_width
    assert surf <= 20 * math.pi


def test_union_surface_relative_precision():
    p = PackingConfig(3, 1.0, [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 2.0, 0.0]])
    s = union_surface(p, SQ3, seed=0, samples=10 ** 6)
    assert s.half_width / s.value < 2e-3


def test_union_estimates_deterministic():
    p = PackingConfig(3, 1.0, [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
    assert union_surface(p, SQ3, seed=1, samples=5000) == union_surface(p, SQ3, seed=1, samples=5000, threads=2)
    assert union_volume(p, SQ3, seed=1, samples=5000) == union_volume(p, SQ3, seed=1, samples=5000, threads=2)


def test_union_inequalities_on_suite(suite3d):
    for p in suite3d[:6]:
        rep = union_inequalities(p, seed=0, volume_samples=2 * 10 ** 5, surface_samples=2 * 10 ** 4)
        assert all(rep[k] for k in ("a_density", "b_isoperimetric", "c_contact_surface",
                                     "d_surface_lower", "e_full_degree")), rep


@pytest.mark.parametrize("shape,quotient,equal", [
    (box_shape((2, 2, 2)), Fraction(24 ** 3, 64), True),
    (box_shape((1, 1)), Fraction(16), True),
    (LatticeShape.from_cells([(0, 0), (1, 0), (0, 1)]), Fraction(64, 3), False),
])
def test_box_isoperimetry_examples(shape, quotient, equal):
    r = box_isoperimetric_check(shape)
    assert r.quotient == quotient and r.passed and r.equality is equal


@given(st.integers(1, 30), st.integers(2, 4), st.integers(0, 10 ** 6))
def test_box_isoperimetry_random(n, d, seed):
    r = box_isoperimetric_check(random_animal(n, d, np.random.default_rng(seed)))
    assert r.passed and r.quotient >= r.bound


@pytest.mark.parametrize("a,b", [
    ((1.1, 1.4, 1.6), (1.0, 3 * SQ3 / 4, math.sqrt(2))),
    ((1.0, 3 * SQ3 / 4, math.sqrt(2)), (1.0, 3 * SQ3 / 4, math.sqrt(2))),
    ((1.0, 3 * SQ3 / 4, math.sqrt(2)), (1.0, 1.01, 1.02)),
])
@pytest.mark.parametrize("method", ["mc", "quadrature"])
def test_rogers_comparison(a, b, method):
    assert rogers_comparison_sample(OrthoschemeSpec(a), OrthoschemeSpec(b), seed=0, samples=10 ** 5, method=method)


def test_rogers_precondition():
    with pytest.raises(ValueError):
        rogers_comparison_sample(OrthoschemeSpec((1, 1.01, 1.02)), OrthoschemeSpec((1.1, 1.4, 1.6)))
