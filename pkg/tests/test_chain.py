from fractions import Fraction

import pytest

from pentachain import (
    RatMatrix,
    assign_geometry,
    build_chain,
    check_acyclic,
    dump_chain,
    verify_chain,
)
from pentachain.chain import C0_LABELS, C5_LABELS, expected_ranks

F = Fraction


def test_sphere_f3_is_zero(s3, sphere_geometry):
    c = build_chain(s3, sphere_geometry)
    assert all(v == 0 for row in c.f3.entries for v in row)


def test_sphere_chain_property(s3, sphere_geometry):
    c = build_chain(s3, sphere_geometry)
    ok, witness = verify_chain(c)
    assert ok and witness is None


def test_chain_property_random_seeds(s3, rp3):
    for tri in (s3, rp3):
        for seed in range(6):
            c = build_chain(tri, assign_geometry(tri, seed), verify=False)
            ok, _ = verify_chain(c)
            assert ok


def test_dimensions_and_labels(rp3, rp3_geometry):
    c = build_chain(rp3, rp3_geometry)
    v, e = c.vertex_count, c.edge_count
    assert c.dims == (6, 3 * v, e, e, 3 * v, 6)
    assert sum(c.dims[::2]) == sum(c.dims[1::2])  # alternating sum vanishes
    assert c.f1.col_labels == C0_LABELS
    assert c.f5.row_labels == C5_LABELS
    assert c.f2.col_labels == c.f1.row_labels
    assert c.f3.col_labels == c.f2.row_labels
    assert c.f4.col_labels == c.f3.row_labels
    assert c.f5.col_labels == c.f4.row_labels
    # every differential symbol appears as exactly one basis label
    all_labels = set(C0_LABELS) | set(c.f1.row_labels) | set(c.f2.row_labels) | set(c.f3.row_labels) | set(c.f4.row_labels) | set(C5_LABELS)
    assert len(all_labels) == 12 + 6 * v + 2 * e


def test_mutated_entry_is_detected(s3, sphere_geometry):
    c = build_chain(s3, sphere_geometry)
    rows = [list(r) for r in c.f2.entries]
    rows[2][5] += 1
    broken = type(c)(
        f1=c.f1,
        f2=RatMatrix(rows, c.f2.row_labels, c.f2.col_labels),
        f3=c.f3,
        f4=c.f4,
        f5=c.f5,
        vertex_count=c.vertex_count,
        edge_count=c.edge_count,
    )
    ok, witness = verify_chain(broken)
    assert not ok
    stage, row_label, col_label = witness
    assert stage in (1, 2)
    assert row_label in c.f2.row_labels or row_label in c.f3.row_labels
    assert col_label in C0_LABELS or col_label in c.f2.col_labels


def test_acyclicity_reports(s3, rp3, sphere_geometry, rp3_geometry):
    c = build_chain(s3, sphere_geometry)
    report = check_acyclic(c)
    assert report.acyclic and report.ranks == (6, 6, 0, 6, 6)
    c = build_chain(rp3, rp3_geometry)
    report = check_acyclic(c)
    assert report.acyclic and report.ranks == (6, 6, 6, 6, 6)
    assert expected_ranks(4, 12) == (6, 6, 6, 6, 6)


def test_zeroed_f3_breaks_acyclicity(rp3, rp3_geometry):
    c = build_chain(rp3, rp3_geometry)
    zero = RatMatrix(
        [[F(0)] * len(c.f3.col_labels) for _ in c.f3.row_labels],
        c.f3.row_labels,
        c.f3.col_labels,
    )
    broken = type(c)(
        f1=c.f1, f2=c.f2, f3=zero, f4=c.f4, f5=c.f5,
        vertex_count=c.vertex_count, edge_count=c.edge_count,
    )
    assert not check_acyclic(broken).acyclic


def test_f4_endpoint_triples_cancel(rp3, rp3_geometry):
    # rows db1..db3 of f5 sum each vertex block with weight one, so the
    # block of f5*f4 they span vanishes edge by edge
    c = build_chain(rp3, rp3_geometry)
    for r in range(3):
        for j in range(len(c.f4.col_labels)):
            total = sum(
                c.f5.entries[r][k] * c.f4.entries[k][j]
                for k in range(len(c.f4.row_labels))
            )
            assert total == 0


def test_dump_format(s3, sphere_geometry):
    c = build_chain(s3, sphere_geometry)
    dump = dump_chain(c)
    lines = dump.strip().splitlines()
    assert lines, "dump should not be empty"
    for line in lines:
        tag, row, col, value = line.split()
        assert tag in {"f1", "f2", "f3", "f4", "f5"}
        assert "/" in value or value.lstrip("-").isdigit()
    assert not any(line.startswith("f3") for line in lines)  # f3 is zero here
    assert dump == dump_chain(build_chain(s3, sphere_geometry))
