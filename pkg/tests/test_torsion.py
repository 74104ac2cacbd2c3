from fractions import Fraction

import pytest

from pentachain import (
    BasisPartition,
    GeometryAssignment,
    TorsionError,
    assign_geometry,
    build_chain,
    edge_values,
    face_circulations,
    invariant,
    minors,
    partition_valid,
    projective_paper_partition,
    select_partition,
    sphere_paper_partition,
    tau,
    tet0_edges,
)
from pentachain.library import SPHERE_C1_ROWS

F = Fraction


def test_sphere_reference_values(s3, sphere_geometry):
    result = invariant(s3, seed=0, geometry=sphere_geometry)
    assert abs(result.tau) == 512
    assert result.face_product == F(1, 16)
    assert result.abs_invariant == 1
    assert result.ranks == (6, 6, 0, 6, 6)
    assert result.vertex_count == 4


def test_sphere_paper_partition_ratios(s3, sphere_geometry):
    c = build_chain(s3, sphere_geometry)
    p = sphere_paper_partition(c)
    assert p.c1_rows == SPHERE_C1_ROWS
    assert partition_valid(c, p)
    m1, m2, m3, m4, m5 = minors(c, p)
    assert abs(m1 / m2) == 8
    assert m3 == 1  # empty minor
    lam = edge_values(s3, sphere_geometry)
    s_product = F(1)
    for s in face_circulations(s3, lam):
        s_product *= s
    assert abs(m5 / m4) == abs(4 / s_product)
    assert abs(tau(c, p)) == 512


def test_sphere_split_sizes_are_forced(s3, sphere_geometry):
    c = build_chain(s3, sphere_geometry)
    p = select_partition(c, seed=0)
    assert len(p.c2_rows) == 6 and len(p.c3_rows) == 0
    k1, k2, k3, k4 = p.cols(c)
    assert len(k2) == 0 and len(k3) == 6


def test_projective_space_value(rp3):
    for seed in (1, 2, 3):
        result = invariant(rp3, seed=seed)
        assert result.abs_invariant == 64
        assert result.ranks == (6, 6, 6, 6, 6)


def test_projective_paper_partition(rp3, rp3_geometry):
    c = build_chain(rp3, rp3_geometry)
    p = projective_paper_partition(c, rp3)
    unprimed = set(tet0_edges(rp3))
    assert set(p.c2_rows) == {f"dl_e{e}" for e in range(12) if e not in unprimed}
    assert set(p.c3_rows) == {f"dw_e{e}" for e in unprimed}
    assert partition_valid(c, p)
    m = minors(c, p)
    lam = edge_values(rp3, rp3_geometry)
    s_cubed = F(1)
    for k in range(4):
        face = rp3.face_class(0, k)
        s_cubed *= abs(face_circulations(rp3, lam)[face]) ** 3
    assert abs(m[2]) == 64 / s_cubed
    # the partition reproduces the same torsion magnitude as any other
    assert abs(tau(c, p)) == abs(tau(c, select_partition(c, seed=5)))


def test_partition_independence(rp3, rp3_geometry):
    c = build_chain(rp3, rp3_geometry)
    values = {abs(tau(c, select_partition(c, seed=s))) for s in range(10)}
    assert len(values) == 1


def test_geometry_independence(s3, rp3):
    for tri, expect in ((s3, 1), (rp3, 64)):
        for seed in range(10):
            assert invariant(tri, seed=seed).abs_invariant == expect


def test_kappa_rerandomization_preserves_invariant(s3):
    g = assign_geometry(s3, 77)
    base = invariant(s3, geometry=g)
    other = GeometryAssignment(g.x, g.y, tuple(k + F(7, 5) for k in g.kappa))
    assert invariant(s3, geometry=other).abs_invariant == base.abs_invariant


def test_selection_determinism(rp3, rp3_geometry):
    c = build_chain(rp3, rp3_geometry)
    assert select_partition(c, seed=4) == select_partition(c, seed=4)


def test_invalid_partition_rejected(s3, sphere_geometry):
    c = build_chain(s3, sphere_geometry)
    good = select_partition(c, seed=0)
    # a C1 split that misses the kappa directions cannot be completed:
    # dk columns of f1 are only supported on the dk rows
    bad_rows = ("dx_v0", "dy_v0", "dx_v1", "dy_v1", "dx_v2", "dy_v2")
    bad = BasisPartition(bad_rows, good.c2_rows, good.c3_rows, good.c4_rows)
    assert not partition_valid(c, bad)
    with pytest.raises(TorsionError):
        tau(c, bad)
    with pytest.raises(TorsionError, match="split"):
        minors(c, BasisPartition(("dx_v0",), good.c2_rows, good.c3_rows, good.c4_rows))


def test_result_fields(s3, sphere_geometry):
    r = invariant(s3, seed=3, geometry=sphere_geometry)
    assert r.invariant == r.tau * r.face_product * F(1, 2 ** (r.vertex_count + 1))
    assert r.abs_invariant == abs(r.invariant)
    assert r.f_vector == (4, 6, 4, 2)
