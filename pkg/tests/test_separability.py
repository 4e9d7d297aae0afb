import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sepcontact.errors import DuplicateCenterError, MissingPairError
from sepcontact.geometry import Hyperplane, PackingConfig, contact_graph, lattice_packing
from sepcontact.lattice import box_shape, random_animal
from sepcontact.separability import (SeparationCertificate, Unknown, axis_certificate, find_certificate,
                                     guillotine_generate, verify_certificate)

HEX_TRIPLE = PackingConfig(2, 1.0, [[0.0, 0.0], [2.0, 0.0], [1.0, math.sqrt(3.0)]])


def test_axis_certificate_domino():
    cert = axis_certificate(lattice_packing([(0, 0), (1, 0)]))
    h = cert.planes[(0, 1)]
    assert h.normal == (1.0, 0.0) and h.offset == 0.5


def test_axis_certificate_second_axis():
    cert = axis_certificate(lattice_packing([(0, 0), (0, 3)]))
    h = cert.planes[(0, 1)]
    assert h.normal == (0.0, 1.0) and h.offset == 0.5


def test_axis_certificate_square():
    p = box_shape((2, 2)).to_packing()
    cert = axis_certificate(p)
    assert len(cert) == 6
    assert {(h.normal, h.offset) for h in cert.planes.values()} <= {((1.0, 0.0), 0.5), ((0.0, 1.0), 0.5)}
    assert verify_certificate(p, cert).valid


def test_axis_certificate_duplicate_centers():
    p = PackingConfig(2, 0.5, [[0, 0], [0, 0]], "lattice", validate=False)
    with pytest.raises(DuplicateCenterError):
        axis_certificate(p)


@given(st.integers(1, 30), st.integers(2, 3), st.integers(0, 10 ** 6))
def test_every_lattice_shape_is_axis_certified(n, d, seed):
    s = random_animal(n, d, np.random.default_rng(seed))
    p = s.to_packing()
    assert verify_certificate(p, axis_certificate(p)).valid


def test_two_balls_bisector():
    p = PackingConfig(3, 1.0, [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
    assert verify_certificate(p, SeparationCertificate({(0, 1): Hyperplane((1.0, 0.0, 0.0), 1.0)})).valid
    cert = find_certificate(p)
    assert isinstance(cert, SeparationCertificate) and verify_certificate(p, cert).valid


def test_hexagonal_triple_is_not_certified():
    assert isinstance(find_certificate(HEX_TRIPLE), Unknown)
    # every pair's bisector cuts the third disk
    bis = SeparationCertificate({
        (0, 1): Hyperplane((1.0, 0.0), 1.0),
        (0, 2): Hyperplane.through([1.0, math.sqrt(3.0)], 2.0),
        (1, 2): Hyperplane.through([-1.0, math.sqrt(3.0)], 1.0),
    })
    rep = verify_certificate(HEX_TRIPLE, bis)
    assert not rep.valid and rep.first_violation["reason"] == "plane cuts a ball interior"


def _brute_no_plane(centers, r, i, j, angles=3600):
    """Dense scan of line directions; True iff no direction admits a separating gap."""
    for t in np.linspace(0, math.pi, angles, endpoint=False):
        u = np.array([math.cos(t), math.sin(t)])
        s = centers @ u
        lo, hi = sorted((s[i], s[j]))
        if hi - lo < 2 * r:
            continue
        # free offsets: [lo + r, hi - r] minus every ball's open slab
        free = [(lo + r, hi - r)]
        for k in range(len(centers)):
            a, b = s[k] - r, s[k] + r
            free = [seg for lo2, hi2 in free for seg in ((lo2, min(hi2, a)), (max(lo2, b), hi2)) if seg[0] <= seg[1]]
        if free:
            return False
    return True


def test_hexagonal_triple_brute_force_oracle():
    c = np.asarray(HEX_TRIPLE.centers)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        assert _brute_no_plane(c, 1.0, i, j)


def test_missing_pair():
    p = PackingConfig(2, 1.0, [[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]])
    with pytest.raises(MissingPairError):
        verify_certificate(p, SeparationCertificate({(0, 1): Hyperplane((1.0, 0.0), 1.5)}))


def test_violation_reports_side():
    p = PackingConfig(2, 1.0, [[0.0, 0.0], [3.0, 0.0]])
    rep = verify_certificate(p, SeparationCertificate({(0, 1): Hyperplane((0.0, 1.0), 5.0)}))
    assert not rep.valid and rep.first_violation["reason"] == "pair not on opposite sides"


def test_guillotine_single_ball():
    p, cert = guillotine_generate(2, 1, seed=5)
    assert p.n == 1 and len(cert) == 0


def test_guillotine_example_3d():
    p, cert = guillotine_generate(3, 4, seed=7, jitter=0.0)
    assert p.n == 4 and verify_certificate(p, cert).valid


def test_guillotine_min_distance():
    p, _ = guillotine_generate(2, 50, seed=1)
    c = np.asarray(p.centers)
    diff = np.linalg.norm(c[:, None] - c[None], axis=-1) + np.eye(p.n) * 10
    assert diff.min() >= 2 - 1e-12


def test_guillotine_is_deterministic():
    a, ca = guillotine_generate(3, 20, seed=11, jitter=0.4)
    b, cb = guillotine_generate(3, 20, seed=11, jitter=0.4)
    assert np.array_equal(a.centers, b.centers) and ca == cb


@given(st.integers(2, 40), st.integers(2, 3), st.integers(0, 10 ** 6), st.sampled_from([0.0, 0.5, 1.0]))
def test_guillotine_certificates_valid_and_rediscovered(n, d, seed, jitter):
    p, cert = guillotine_generate(d, n, seed, jitter=jitter)
    assert p.n == n
    assert verify_certificate(p, cert).valid
    g = contact_graph(p)
    assert max(g.degree) <= 2 * d
    found = find_certificate(p)
    assert isinstance(found, SeparationCertificate) and verify_certificate(p, found).valid


def test_guillotine_produces_contacts():
    total = sum(contact_graph(guillotine_generate(2, 30, s)[0]).contact_number for s in range(10))
    assert total > 0


def test_find_certificate_budget():
    p = PackingConfig(2, 1.0, [[0.0, 0.0], [2.0, 0.0]])
    assert isinstance(find_certificate(p, budget=0), Unknown)
