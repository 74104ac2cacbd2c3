"""Exact torsion invariant of closed oriented triangulated 3-manifolds.

The pipeline: glue tetrahedra into a closed oriented pseudo-manifold, place
its vertex classes at generic rational points of the plane, assemble the
six-term complex of differentials built on edge values and curvatures,
check acyclicity by exact rank counting, and normalize the torsion of the
complex into a number that bistellar moves do not change.
"""

from .chain import (
    AcyclicityReport,
    ChainComplex,
    build_chain,
    check_acyclic,
    dump_chain,
    verify_chain,
)
from .errors import (
    DegenerateGeometryError,
    InvarianceError,
    MoveError,
    NotAcyclicError,
    ParseError,
    PentachainError,
    TorsionError,
    ValidationError,
)
from .exact import RatMatrix, Rational, det, format_rational, minor, parse_rational, rank, row_reduce
from .geometry import (
    EdgeValues,
    GeometryAssignment,
    HolonomyGenerator,
    angle,
    assign_geometry,
    domega_dlambda,
    edge_values,
    face_circulations,
    holonomy_generator,
    lambda_of,
    omega,
    parse_geometry,
    s_of_face,
    subseed,
)
from .library import (
    BUILTIN_NAMES,
    fixed_sphere_geometry,
    load_builtin,
    opposite_edge_pairs,
    projective_paper_partition,
    sphere_paper_partition,
    tet0_edges,
)
from .pachner import KINDS, MoveSite, apply_move, enumerate_sites, random_walk, walk_states
from .pentagon import (
    FivePointConfig,
    solve_flat_lambda,
    verify_pentagon,
    verify_vector_identities,
)
from .torsion import BasisPartition, InvariantResult, invariant, minors, partition_valid, select_partition, tau
from .triangulation import (
    EdgeClass,
    EdgeStar,
    FaceClass,
    Gluing,
    Triangulation,
    VertexClass,
    build,
    canonical_form,
    isomorphic,
)

__version__ = "0.1.0"
