"""Plane coordinates on vertex classes and the scalar fields built on them.

Vertices of the quotient complex are placed at exact rational points of the
plane and each carries an extra parameter kappa.  Edge values are

    lambda(A -> B) = area(O, A, B) + kappa_B - kappa_A

with O the coordinate origin, oriented areas halved determinants.  Face
circulations sum lambda around a triangle boundary (kappa telescopes away),
dihedral-angle values are the rational expressions

    angle = (S_PDQ + S_PEQ) / (2 * S_PDE * S_QDE)

signed by the parity of (P, Q, tail, head) against the tetrahedron's
positive ordering, and the curvature around an edge sums angle values over
its star.  Coordinates induced this way are flat: every curvature vanishes
identically, which is what makes the derivative matrix of the curvatures a
chain map downstream.

Derivatives of curvatures with respect to edge values treat each edge
class's lambda as an independent variable; every circulation is affine in
those variables with incidence coefficients in {-1, 0, +1}, so the quotient
rule gives exact partial derivatives.  The same machinery is reused by the
pentagon verifier on five-point configurations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import DegenerateGeometryError, ParseError
from .exact import parse_rational
from .triangulation import EdgeStar, Triangulation

SAMPLE_NUMERATOR_BOUND = 64
SAMPLE_DENOMINATOR_BOUND = 16
DEFAULT_MAX_RETRIES = 100


def subseed(seed: int, *tags) -> int:
    """Stable derived seed for a named sub-stream of randomness."""
    import hashlib

    digest = hashlib.blake2b(repr((seed,) + tags).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class GeometryAssignment:
    """Plane coordinates and kappa per vertex class."""

    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]
    kappa: tuple[Fraction, ...]
    seed: int | None = None


@dataclass(frozen=True)
class EdgeValues:
    """lambda per canonically oriented edge class."""

    values: tuple[Fraction, ...]

    def of(self, edge_id: int, reverse: bool = False) -> Fraction:
        v = self.values[edge_id]
        return -v if reverse else v


def triangle_area(ax, ay, bx, by, cx, cy) -> Fraction:
    """Oriented area of a plane triangle (half the cross product)."""
    return ((bx - ax) * (cy - ay) - (cx - ax) * (by - ay)) / 2


def lambda_of(tri: Triangulation, g: GeometryAssignment, edge_id: int, reverse: bool = False) -> Fraction:
    """Edge value of a canonically oriented edge class (negated if reversed)."""
    e = tri.edges[edge_id]
    a, b = (e.head, e.tail) if reverse else (e.tail, e.head)
    value = (g.x[a] * g.y[b] - g.x[b] * g.y[a]) / 2 + g.kappa[b] - g.kappa[a]
    return value


def edge_values(tri: Triangulation, g: GeometryAssignment) -> EdgeValues:
    return EdgeValues(tuple(lambda_of(tri, g, e.id) for e in tri.edges))


def directed_lambda(tri: Triangulation, lam: EdgeValues, tet: int, tail: int, head: int) -> Fraction:
    eid, sign = tri.edge_class(tet, tail, head)
    return sign * lam.values[eid]


class LinForm:
    """Affine form in the edge-value variables: exact value plus integer
    incidence coefficients per variable key."""

    __slots__ = ("value", "coeffs")

    def __init__(self, value: Fraction, coeffs: dict):
        self.value = value
        self.coeffs = coeffs

    def coeff(self, var) -> int:
        return self.coeffs.get(var, 0)

    def __add__(self, other: "LinForm") -> "LinForm":
        coeffs = dict(self.coeffs)
        for var, c in other.coeffs.items():
            coeffs[var] = coeffs.get(var, 0) + c
        return LinForm(self.value + other.value, coeffs)


def face_form(tri: Triangulation, lam: EdgeValues, tet: int, slots: Sequence[int]) -> LinForm:
    """Circulation of lambda around the ordered slot triple, as a LinForm."""
    a, b, c = slots
    value = Fraction(0)
    coeffs: dict = {}
    for tail, head in ((a, b), (b, c), (c, a)):
        eid, sign = tri.edge_class(tet, tail, head)
        value += sign * lam.values[eid]
        coeffs[eid] = coeffs.get(eid, 0) + sign
    return LinForm(value, coeffs)


def s_of_face(tri: Triangulation, lam: EdgeValues, face_id: int, reverse: bool = False) -> Fraction:
    """Face circulation, evaluated on the class's stored boundary order."""
    tet, slots = tri.faces[face_id].boundary
    value = face_form(tri, lam, tet, slots).value
    return -value if reverse else value


def face_circulations(tri: Triangulation, lam: EdgeValues) -> tuple[Fraction, ...]:
    return tuple(s_of_face(tri, lam, f.id) for f in tri.faces)


def assign_geometry(
    tri: Triangulation,
    seed: int,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> GeometryAssignment:
    """Sample generic rational coordinates, rejecting degenerate draws.

    Numerators are uniform in [-64, 64] and denominators in [1, 16]; a draw
    is accepted once every face circulation is nonzero.  The retry sequence
    is a deterministic function of the seed.
    """
    rng = random.Random(seed)
    nv = len(tri.vertices)

    def draw() -> Fraction:
        return Fraction(
            rng.randint(-SAMPLE_NUMERATOR_BOUND, SAMPLE_NUMERATOR_BOUND),
            rng.randint(1, SAMPLE_DENOMINATOR_BOUND),
        )

    for _ in range(max_retries):
        g = GeometryAssignment(
            x=tuple(draw() for _ in range(nv)),
            y=tuple(draw() for _ in range(nv)),
            kappa=tuple(draw() for _ in range(nv)),
            seed=seed,
        )
        lam = edge_values(tri, g)
        if all(s != 0 for s in face_circulations(tri, lam)):
            return g
    message = f"no nondegenerate geometry found after {max_retries} attempts"
    if any(e.tail == e.head for e in tri.edges):
        message += (
            "; the triangulation has an edge class with identified endpoints, "
            "so every face containing it has zero circulation. Subdivide with "
            "1->4 moves before computing."
        )
    raise DegenerateGeometryError(message)


def ensure_nondegenerate(tri: Triangulation, g: GeometryAssignment) -> EdgeValues:
    """Check the nondegeneracy certificate for an explicit assignment."""
    lam = edge_values(tri, g)
    for f, s in zip(tri.faces, face_circulations(tri, lam)):
        if s == 0:
            raise DegenerateGeometryError(
                f"face class {f.id} (vertices {f.vertices}) has zero circulation"
            )
    return lam


# -- angle values and curvature ---------------------------------------


def _angle_forms(tri, lam, tet, pq, ed):
    p, q = pq
    e, d = ed
    n1 = face_form(tri, lam, tet, (p, d, q))
    n2 = face_form(tri, lam, tet, (p, e, q))
    d1 = face_form(tri, lam, tet, (p, d, e))
    d2 = face_form(tri, lam, tet, (q, d, e))
    if d1.value == 0 or d2.value == 0:
        bad = tri.face_class(tet, q if d1.value == 0 else p)
        raise DegenerateGeometryError(
            f"zero face circulation on face class {bad} while evaluating the "
            f"angle at edge slots {ed} of tetrahedron {tet}"
        )
    return n1, n2, d1, d2


def angle(
    tri: Triangulation,
    lam: EdgeValues,
    tet: int,
    pq: tuple[int, int],
    ed: tuple[int, int],
) -> Fraction:
    """Dihedral-angle value at an oriented edge of an oriented tetrahedron.

    ``pq`` are the two off-edge slots and ``ed`` the (tail, head) slots.
    The raw circulation formula is already antisymmetric in P and Q; the
    edge direction is signed against the edge class's canonical
    orientation, so the value also flips under a reversal of the edge.
    """
    n1, n2, d1, d2 = _angle_forms(tri, lam, tet, pq, ed)
    _, direction = tri.edge_class(tet, ed[0], ed[1])
    return direction * (n1.value + n2.value) / (2 * d1.value * d2.value)


def quotient_rule_terms(n1: LinForm, n2: LinForm, d1: LinForm, d2: LinForm):
    """Value and exact gradient of (n1 + n2) / (2 * d1 * d2)."""
    numerator = n1.value + n2.value
    dd = d1.value * d2.value
    value = numerator / (2 * dd)
    grad: dict = {}
    for var in set(n1.coeffs) | set(n2.coeffs) | set(d1.coeffs) | set(d2.coeffs):
        dn = n1.coeff(var) + n2.coeff(var)
        ddv = d1.coeff(var) * d2.value + d1.value * d2.coeff(var)
        grad[var] = Fraction(dn * dd - numerator * ddv) / (2 * dd * dd)
    return value, grad


def omega(tri: Triangulation, lam: EdgeValues, star: EdgeStar | int) -> Fraction:
    """Curvature around an edge class: sum of angle values over its star."""
    if isinstance(star, int):
        star = tri.edge_star(star)
    total = Fraction(0)
    for tet, pq, ed in star.contributions:
        n1, n2, d1, d2 = _angle_forms(tri, lam, tet, pq, ed)
        total += (n1.value + n2.value) / (2 * d1.value * d2.value)
    return total


def omega_row(tri: Triangulation, lam: EdgeValues, edge_id: int) -> tuple[Fraction, dict]:
    """Curvature of an edge and its gradient over all edge values."""
    value = Fraction(0)
    row: dict = {}
    for tet, pq, ed in tri.edge_star(edge_id).contributions:
        forms = _angle_forms(tri, lam, tet, pq, ed)
        term, grad = quotient_rule_terms(*forms)
        value += term
        for var, dv in grad.items():
            row[var] = row.get(var, Fraction(0)) + dv
    return value, row


def domega_dlambda(tri: Triangulation, lam: EdgeValues, edge_a: int, edge_b: int) -> Fraction:
    """Exact partial derivative of curvature a with respect to edge value b."""
    _, row = omega_row(tri, lam, edge_a)
    return row.get(edge_b, Fraction(0))


# -- holonomy ----------------------------------------------------------


@dataclass(frozen=True)
class HolonomyGenerator:
    """Traceless 2x2 generator of the basis change around an edge, with its
    equivalent column form (x^2, xy, y^2) * domega / 2."""

    matrix: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    column: tuple[Fraction, Fraction, Fraction]


def holonomy_generator(edge_vector: tuple[Fraction, Fraction], domega: Fraction) -> HolonomyGenerator:
    x, y = Fraction(edge_vector[0]), Fraction(edge_vector[1])
    half = Fraction(domega) / 2
    matrix = ((-x * y * half, x * x * half), (-y * y * half, x * y * half))
    column = (x * x * half, x * y * half, y * y * half)
    return HolonomyGenerator(matrix, column)


# -- explicit geometry files -------------------------------------------


def parse_geometry(text: str, tri: Triangulation) -> GeometryAssignment:
    """Parse ``vertex <class-id> <x> <y> <kappa>`` lines."""
    nv = len(tri.vertices)
    xs: dict[int, Fraction] = {}
    ys: dict[int, Fraction] = {}
    ks: dict[int, Fraction] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 5 or fields[0] != "vertex":
            raise ParseError(f"bad geometry line {raw!r}")
        try:
            vid = int(fields[1])
            x, y, k = (parse_rational(f) for f in fields[2:5])
        except ValueError as exc:
            raise ParseError(f"bad geometry line {raw!r}") from exc
        if not 0 <= vid < nv:
            raise ParseError(f"geometry line names unknown vertex class {vid}")
        if vid in xs:
            raise ParseError(f"duplicate geometry line for vertex class {vid}")
        xs[vid], ys[vid], ks[vid] = x, y, k
    missing = [v for v in range(nv) if v not in xs]
    if missing:
        raise ParseError(f"geometry file misses vertex classes {missing}")
    return GeometryAssignment(
        x=tuple(xs[v] for v in range(nv)),
        y=tuple(ys[v] for v in range(nv)),
        kappa=tuple(ks[v] for v in range(nv)),
    )
