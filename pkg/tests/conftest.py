import functools

import numpy as np
import pytest
from hypothesis import settings

from sepcontact.geometry import CONTINUOUS, PackingConfig
from sepcontact.lattice import box_shape, quasicube, random_animal
from sepcontact.oracle import max_contacts_lattice
from sepcontact.separability import axis_certificate, guillotine_generate, verify_certificate

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


def unit_radius(shape) -> PackingConfig:
    """Lattice shape rescaled so its balls have radius 1 (centers doubled)."""
    return PackingConfig(shape.dimension, 1.0, np.asarray(shape.sorted_cells(), dtype=float) * 2.0, CONTINUOUS)


@functools.lru_cache(maxsize=None)
def certified_3d_suite() -> tuple[PackingConfig, ...]:
    """Certified 3D unit-ball packings: lattice shapes and guillotine outputs."""
    out = []
    shapes = [quasicube(n, 3) for n in (1, 2, 5, 8, 12, 18, 27)]
    shapes += [box_shape((1, 1, 5)), box_shape((2, 2, 3))]
    shapes += [max_contacts_lattice(n, 3).witness for n in (4, 6, 9)]
    rng = np.random.default_rng(2024)
    shapes += [random_animal(int(rng.integers(3, 25)), 3, rng) for _ in range(6)]
    for s in shapes:
        lat = s.to_packing()
        assert verify_certificate(lat, axis_certificate(lat)).valid
        out.append(unit_radius(s))
    for seed in range(6):
        p, cert = guillotine_generate(3, 6 + 4 * seed, seed, jitter=0.3 * (seed % 2))
        assert verify_certificate(p, cert).valid
        out.append(p)
    return tuple(out)


@pytest.fixture(scope="session")
def suite3d():
    return certified_3d_suite()
