"""Contact numbers of totally separable unit-ball packings.

Geometry and certificates, lattice animals with an exact search oracle,
closed-form bounds, planar face census and numeric constant verification.
"""

__version__ = "0.1.0"

from .bounds import bound_report, harborth_ts, thm1_bound, thm2_bound, thm3_bound
from .geometry import ContactGraph, Hyperplane, PackingConfig, contact_graph, min_enclosing_ball
from .lattice import LatticeShape, adjacency_count, cube_union_surface, quasicube
from .oracle import max_contacts_lattice
from .separability import SeparationCertificate, find_certificate, guillotine_generate, verify_certificate

__all__ = [
    "ContactGraph", "Hyperplane", "LatticeShape", "PackingConfig", "SeparationCertificate",
    "adjacency_count", "bound_report", "contact_graph", "cube_union_surface", "find_certificate",
    "guillotine_generate", "harborth_ts", "max_contacts_lattice", "min_enclosing_ball", "quasicube",
    "thm1_bound", "thm2_bound", "thm3_bound", "verify_certificate",
]
