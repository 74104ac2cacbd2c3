"""The six-term complex attached to a triangulation with generic geometry.

Spaces and bases, in order:

    C0 (dim 6)   dt1 dt2 dt3 dx dy dk      global motions and kappa shift
    C1 (dim 3V)  dx_v dy_v dk_v            per vertex class
    C2 (dim E)   dl_e                      per edge class
    C3 (dim E)   dw_e                      per edge class
    C4 (dim 3V)  dg1_v dg2_v dg3_v         per vertex class
    C5 (dim 6)   db1 .. db6

The five maps are assembled at the flat configuration induced by the
vertex coordinates:

    f1  differentials of the area-preserving affine action plus the kappa
        compensation dk_v = dk + (x dy - y dx)/2,
    f2  differential of lambda(A->B) in the vertex data,
    f3  exact partial derivatives of edge curvatures by edge values,
    f4  per-edge holonomy columns (x^2, xy, y^2)/2 into the tail vertex
        block and their negatives into the head block,
    f5  the six closing sums over vertex blocks.

Each composition of consecutive maps is exactly zero; ``build_chain``
asserts this by default.  Acyclicity is equivalent to the rank pattern
(6, 3V-6, E-3V+6, 3V-6, 6) once the chain property holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PentachainError
from .exact import RatMatrix, format_rational, rank
from .geometry import EdgeValues, GeometryAssignment, edge_values, omega_row
from .triangulation import Triangulation

C0_LABELS = ("dt1", "dt2", "dt3", "dx", "dy", "dk")
C5_LABELS = ("db1", "db2", "db3", "db4", "db5", "db6")


def vertex_labels(n: int) -> tuple[str, ...]:
    out = []
    for v in range(n):
        out += [f"dx_v{v}", f"dy_v{v}", f"dk_v{v}"]
    return tuple(out)


def gamma_labels(n: int) -> tuple[str, ...]:
    out = []
    for v in range(n):
        out += [f"dg1_v{v}", f"dg2_v{v}", f"dg3_v{v}"]
    return tuple(out)


def edge_labels(n: int, prefix: str) -> tuple[str, ...]:
    return tuple(f"{prefix}_e{e}" for e in range(n))


@dataclass(frozen=True)
class ChainComplex:
    """The five labeled matrices, plus the data they were built from."""

    f1: RatMatrix
    f2: RatMatrix
    f3: RatMatrix
    f4: RatMatrix
    f5: RatMatrix
    vertex_count: int
    edge_count: int

    @property
    def dims(self) -> tuple[int, int, int, int, int, int]:
        v3 = 3 * self.vertex_count
        e = self.edge_count
        return (6, v3, e, e, v3, 6)

    @property
    def maps(self):
        return (self.f1, self.f2, self.f3, self.f4, self.f5)


def build_chain(
    tri: Triangulation,
    g: GeometryAssignment,
    lam: EdgeValues | None = None,
    verify: bool = True,
) -> ChainComplex:
    """Assemble all five matrices at the flat point of the given geometry."""
    nv = len(tri.vertices)
    ne = len(tri.edges)
    if lam is None:
        lam = edge_values(tri, g)
    vlabels = vertex_labels(nv)
    glabels = gamma_labels(nv)

    f1 = [[Fraction(0)] * 6 for _ in range(3 * nv)]
    for v in range(nv):
        xa, ya = g.x[v], g.y[v]
        row = f1[3 * v]
        row[0], row[2], row[3] = ya, xa, Fraction(1)
        row = f1[3 * v + 1]
        row[1], row[2], row[4] = xa, -ya, Fraction(1)
        row = f1[3 * v + 2]
        row[3], row[4], row[5] = -ya / 2, xa / 2, Fraction(1)

    f2 = [[Fraction(0)] * (3 * nv) for _ in range(ne)]
    for e in tri.edges:
        a, b = e.tail, e.head
        row = f2[e.id]
        row[3 * a] += g.y[b] / 2
        row[3 * a + 1] += -g.x[b] / 2
        row[3 * a + 2] += -1
        row[3 * b] += -g.y[a] / 2
        row[3 * b + 1] += g.x[a] / 2
        row[3 * b + 2] += 1

    f3 = [[Fraction(0)] * ne for _ in range(ne)]
    flat = []
    for e in range(ne):
        value, row = omega_row(tri, lam, e)
        flat.append(value)
        for b, dv in row.items():
            f3[e][b] = dv
    if verify and any(v != 0 for v in flat):
        bad = next(e for e, v in enumerate(flat) if v != 0)
        raise PentachainError(
            f"internal error: curvature of edge class {bad} is nonzero at the flat point"
        )

    f4 = [[Fraction(0)] * ne for _ in range(3 * nv)]
    for e in tri.edges:
        p, q = e.tail, e.head
        vx, vy = g.x[q] - g.x[p], g.y[q] - g.y[p]
        triple = (vx * vx / 2, vx * vy / 2, vy * vy / 2)
        for r in range(3):
            f4[3 * p + r][e.id] += triple[r]
            f4[3 * q + r][e.id] -= triple[r]

    f5 = [[Fraction(0)] * (3 * nv) for _ in range(6)]
    for v in range(nv):
        xa, ya = g.x[v], g.y[v]
        f5[0][3 * v] = Fraction(1)
        f5[1][3 * v + 1] = Fraction(1)
        f5[2][3 * v + 2] = Fraction(1)
        f5[3][3 * v] = ya
        f5[3][3 * v + 1] = -xa
        f5[4][3 * v + 1] = ya
        f5[4][3 * v + 2] = -xa
        f5[5][3 * v] = ya * ya
        f5[5][3 * v + 1] = -2 * xa * ya
        f5[5][3 * v + 2] = xa * xa

    c = ChainComplex(
        f1=RatMatrix(f1, vlabels, C0_LABELS),
        f2=RatMatrix(f2, edge_labels(ne, "dl"), vlabels),
        f3=RatMatrix(f3, edge_labels(ne, "dw"), edge_labels(ne, "dl")),
        f4=RatMatrix(f4, glabels, edge_labels(ne, "dw")),
        f5=RatMatrix(f5, C5_LABELS, glabels),
        vertex_count=nv,
        edge_count=ne,
    )
    if verify:
        ok, witness = verify_chain(c)
        if not ok:
            raise PentachainError(
                f"internal error: composition f{witness[0] + 1}.f{witness[0]} "
                f"is nonzero at ({witness[1]}, {witness[2]})"
            )
    return c


def _composition_witness(left: RatMatrix, right: RatMatrix):
    """First nonzero entry of left*right, iterating sparsely; None if zero."""
    # rows of the product, built from nonzero entries only
    right_rows = right.entries
    for i, arow in enumerate(left.entries):
        acc: dict[int, Fraction] = {}
        for j, a in enumerate(arow):
            if a:
                for k, b in enumerate(right_rows[j]):
                    if b:
                        acc[k] = acc.get(k, Fraction(0)) + a * b
        for k in sorted(acc):
            if acc[k] != 0:
                return (left.row_labels[i], right.col_labels[k])
    return None


def verify_chain(c: ChainComplex) -> tuple[bool, tuple | None]:
    """Exact check of all four compositions.

    Returns (True, None), or (False, (k, row_label, col_label)) locating the
    first nonzero entry of f_{k+1} * f_k.
    """
    pairs = ((c.f2, c.f1), (c.f3, c.f2), (c.f4, c.f3), (c.f5, c.f4))
    for k, (left, right) in enumerate(pairs, start=1):
        witness = _composition_witness(left, right)
        if witness is not None:
            return False, (k, witness[0], witness[1])
    return True, None


def expected_ranks(vertex_count: int, edge_count: int) -> tuple[int, int, int, int, int]:
    v3 = 3 * vertex_count
    return (6, v3 - 6, edge_count - v3 + 6, v3 - 6, 6)


@dataclass(frozen=True)
class AcyclicityReport:
    acyclic: bool
    ranks: tuple[int, int, int, int, int]
    expected: tuple[int, int, int, int, int]


def check_acyclic(c: ChainComplex) -> AcyclicityReport:
    """Rank test: with the chain property, acyclicity is exactly the rank
    pattern (6, 3V-6, E-3V+6, 3V-6, 6)."""
    ranks = tuple(rank(m) for m in c.maps)
    expected = expected_ranks(c.vertex_count, c.edge_count)
    return AcyclicityReport(ranks == expected, ranks, expected)


def dump_chain(c: ChainComplex) -> str:
    """Diffable text dump: one line per nonzero entry, `f<k> <row> <col> <p/q>`."""
    lines = []
    for k, m in enumerate(c.maps, start=1):
        for i, row in enumerate(m.entries):
            for j, v in enumerate(row):
                if v:
                    lines.append(
                        f"f{k} {m.row_labels[i]} {m.col_labels[j]} {format_rational(v)}"
                    )
    return "\n".join(lines) + "\n"
