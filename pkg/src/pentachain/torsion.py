"""Torsion of the based acyclic complex and the normalized invariant.

The torsion is an alternating product of five compatible minors: every
middle space's basis splits into rows for the map on its left and columns
for the map on its right, and

    tau = (minor f1 * minor f3 * minor f5) / (minor f2 * minor f4).

For an acyclic complex any partition with nonzero minors yields the same
value up to sign.  Partitions are chosen greedily left to right: pivot rows
of f1 become C1's left rows, the complementary labels become f2's columns,
pivot rows of the restricted f2 become C2's left rows, and so on; each
stage is guaranteed full rank by acyclicity, but the selection still
verifies nonvanishing and retries with reshuffled pivot orders if a later
minor degenerates.

The manifold invariant normalizes the torsion by the product of all face
circulations and a power of two:

    invariant = tau * (product of S over face classes) * 2^(-V-1),

reported also as an absolute value since both the torsion and the face
orientations are only defined up to sign.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .chain import ChainComplex, build_chain, check_acyclic
from .errors import NotAcyclicError, TorsionError
from .exact import RatMatrix, det, independent_rows
from .geometry import (
    GeometryAssignment,
    assign_geometry,
    edge_values,
    ensure_nondegenerate,
    face_circulations,
    subseed,
)
from .triangulation import Triangulation

SELECTION_ATTEMPTS = 64


@dataclass(frozen=True)
class BasisPartition:
    """Basis split of each middle space: labels used as rows of the left
    map; the complement supplies columns of the right map."""

    c1_rows: tuple[str, ...]
    c2_rows: tuple[str, ...]
    c3_rows: tuple[str, ...]
    c4_rows: tuple[str, ...]

    def cols(self, c: ChainComplex) -> tuple[tuple[str, ...], ...]:
        """Column label sets (K1..K4) in ambient label order."""
        splits = (
            (c.f1.row_labels, set(self.c1_rows)),
            (c.f2.row_labels, set(self.c2_rows)),
            (c.f3.row_labels, set(self.c3_rows)),
            (c.f4.row_labels, set(self.c4_rows)),
        )
        out = []
        for labels, rows in splits:
            out.append(tuple(lab for lab in labels if lab not in rows))
        return tuple(out)


def _expected_split_sizes(c: ChainComplex) -> tuple[int, int, int, int]:
    v3 = 3 * c.vertex_count
    e = c.edge_count
    return (6, v3 - 6, e - v3 + 6, v3 - 6)


def minors(c: ChainComplex, p: BasisPartition) -> tuple[Fraction, ...]:
    """The five compatible minors (m1..m5) of a partition.

    Raises TorsionError if sizes are inconsistent or any minor vanishes.
    """
    sizes = _expected_split_sizes(c)
    rows = (p.c1_rows, p.c2_rows, p.c3_rows, p.c4_rows)
    for k, (want, have) in enumerate(zip(sizes, rows), start=1):
        if len(set(have)) != want:
            raise TorsionError(
                f"C{k} split must pick {want} rows, got {len(set(have))}"
            )
    k1, k2, k3, k4 = p.cols(c)
    # f3's row labels are dw_*, its cols dl_*; the C2/C3 splits are stated
    # in each space's own labels
    values = (
        det(c.f1.submatrix(p.c1_rows, c.f1.col_labels)),
        det(c.f2.submatrix(p.c2_rows, k1)),
        det(c.f3.submatrix(p.c3_rows, k2)),
        det(c.f4.submatrix(p.c4_rows, k3)),
        det(c.f5.submatrix(c.f5.row_labels, k4)),
    )
    for k, v in enumerate(values, start=1):
        if v == 0:
            raise TorsionError(f"minor of f{k} vanishes for this partition")
    return values


def partition_valid(c: ChainComplex, p: BasisPartition) -> bool:
    try:
        minors(c, p)
    except TorsionError:
        return False
    return True


def tau(c: ChainComplex, p: BasisPartition) -> Fraction:
    """Torsion: alternating product of the five minors."""
    m1, m2, m3, m4, m5 = minors(c, p)
    return m1 * m3 * m5 / (m2 * m4)


def select_partition(c: ChainComplex, seed: int = 0) -> BasisPartition:
    """Greedy left-to-right pivot propagation with seeded retries.

    For an acyclic complex the greedy pass always succeeds (each stage's
    restricted matrix has full column rank exactly because the previous
    minor is nonzero); reshuffling covers hypothetical degeneracies and
    supplies partition variety for independence tests.
    """
    rng = random.Random(seed)
    sizes = _expected_split_sizes(c)

    def stage_orders(shuffle: bool):
        orders = []
        for m in (c.f1, c.f2, c.f3, c.f4):
            order = list(m.row_labels)
            if shuffle:
                rng.shuffle(order)
            orders.append(order)
        return orders

    last_error = None
    for attempt in range(SELECTION_ATTEMPTS):
        orders = stage_orders(shuffle=attempt > 0)
        try:
            c1 = independent_rows(c.f1, orders[0])
            if len(c1) != sizes[0]:
                raise TorsionError("f1 is not injective")
            k1 = tuple(lab for lab in c.f1.row_labels if lab not in set(c1))
            c2 = independent_rows(c.f2.submatrix(c.f2.row_labels, k1), orders[1])
            if len(c2) != sizes[1]:
                raise TorsionError("restricted f2 is column-rank deficient")
            k2 = tuple(lab for lab in c.f2.row_labels if lab not in set(c2))
            c3 = independent_rows(c.f3.submatrix(c.f3.row_labels, k2), orders[2])
            if len(c3) != sizes[2]:
                raise TorsionError("restricted f3 is column-rank deficient")
            k3 = tuple(lab for lab in c.f3.row_labels if lab not in set(c3))
            c4 = independent_rows(c.f4.submatrix(c.f4.row_labels, k3), orders[3])
            if len(c4) != sizes[3]:
                raise TorsionError("restricted f4 is column-rank deficient")
            k4 = tuple(lab for lab in c.f4.row_labels if lab not in set(c4))
            if det(c.f5.submatrix(c.f5.row_labels, k4)) == 0:
                raise TorsionError("closing minor of f5 vanishes")
            return BasisPartition(tuple(c1), tuple(c2), tuple(c3), tuple(c4))
        except TorsionError as exc:
            last_error = exc
    raise TorsionError(
        f"no valid basis partition found in {SELECTION_ATTEMPTS} attempts; "
        f"last failure: {last_error}"
    )


@dataclass(frozen=True)
class InvariantResult:
    tau: Fraction
    face_product: Fraction
    vertex_count: int
    invariant: Fraction
    abs_invariant: Fraction
    ranks: tuple[int, int, int, int, int]
    f_vector: tuple[int, int, int, int]
    seed: int | None


def invariant(
    tri: Triangulation,
    seed: int = 0,
    max_retries: int = 100,
    geometry: GeometryAssignment | None = None,
    verify: bool = True,
) -> InvariantResult:
    """Full pipeline: geometry, chain, acyclicity, torsion, normalization.

    The absolute value of the result is independent of the seed, of the
    sampled geometry and of the partition; the sign is gauge.
    """
    if geometry is None:
        geometry = assign_geometry(tri, subseed(seed, "geometry"), max_retries)
        lam = edge_values(tri, geometry)
    else:
        lam = ensure_nondegenerate(tri, geometry)
    c = build_chain(tri, geometry, lam=lam, verify=verify)
    report = check_acyclic(c)
    if not report.acyclic:
        raise NotAcyclicError(report.ranks, report.expected)
    partition = select_partition(c, subseed(seed, "partition"))
    t = tau(c, partition)
    face_product = Fraction(1)
    for s in face_circulations(tri, lam):
        face_product *= s
    value = t * face_product * Fraction(1, 2 ** (len(tri.vertices) + 1))
    return InvariantResult(
        tau=t,
        face_product=face_product,
        vertex_count=len(tri.vertices),
        invariant=value,
        abs_invariant=abs(value),
        ranks=report.ranks,
        f_vector=tri.f_vector(),
        seed=seed,
    )
