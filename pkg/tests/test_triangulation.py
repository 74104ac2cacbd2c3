import random

import pytest

from pentachain import Gluing, ParseError, Triangulation, ValidationError, build, canonical_form, isomorphic
from pentachain.triangulation import IDENTITY, compose, inverse, parity, transposition


def test_perm_helpers():
    p = (2, 0, 3, 1)
    assert compose(inverse(p), p) == IDENTITY
    assert parity(IDENTITY) == 0
    assert parity(transposition(1, 3)) == 1


def test_sphere_build(s3):
    assert s3.f_vector() == (4, 6, 4, 2)
    assert s3.orientation_signs == (1, -1)
    assert len(s3.vertices) == 4 and len(s3.edges) == 6 and len(s3.faces) == 4


def test_projective_space_counts(rp3):
    assert rp3.f_vector() == (4, 12, 16, 8)
    # twelve edge classes pair up two per vertex-class pair
    by_pair = {}
    for e in rp3.edges:
        by_pair.setdefault(tuple(sorted((e.tail, e.head))), []).append(e.id)
    assert len(by_pair) == 6
    assert all(len(v) == 2 for v in by_pair.values())


def test_euler_characteristic_zero(s3, rp3):
    for tri in (s3, rp3):
        v, e, f, t = tri.f_vector()
        assert v - e + f - t == 0


def test_non_involutive_self_gluing_rejected():
    bad = Gluing(0, (0, 2, 3, 1))
    with pytest.raises(ValidationError, match="involutive"):
        build([[bad, bad, bad, bad]])


def test_orientation_incoherence_rejected():
    # one face glued with an odd permutation, the rest with the identity:
    # the parity condition cannot be satisfied on both
    twist = (0, 2, 1, 3)
    rows = [
        [Gluing(1, twist), Gluing(1, IDENTITY), Gluing(1, IDENTITY), Gluing(1, IDENTITY)],
        [Gluing(0, twist), Gluing(0, IDENTITY), Gluing(0, IDENTITY), Gluing(0, IDENTITY)],
    ]
    with pytest.raises(ValidationError, match="orientable"):
        build(rows)


def test_missing_gluing_rejected():
    with pytest.raises(ValidationError):
        build([[Gluing(0, IDENTITY)] * 3])


def test_classes_stable_under_tet_relabeling(rp3):
    perm = [3, 1, 4, 0, 7, 2, 6, 5]
    inv = [perm.index(i) for i in range(len(perm))]
    rows = []
    for old in perm:
        rows.append([Gluing(inv[g.neighbor], g.perm) for g in rp3.tets[old]])
    relabeled = build(rows)
    assert relabeled.f_vector() == rp3.f_vector()
    sig = lambda tri: (
        sorted(v.degree for v in tri.vertices),
        sorted(e.degree for e in tri.edges),
        sorted(len(f.members) for f in tri.faces),
    )
    assert sig(relabeled) == sig(rp3)
    assert isomorphic(relabeled, rp3)


def test_orientation_coherence_relation(s3, rp3):
    for tri in (s3, rp3):
        for t, row in enumerate(tri.tets):
            for g in row:
                p = parity(g.perm)
                s1, s2 = tri.orientation_signs[t], tri.orientation_signs[g.neighbor]
                assert s1 * s2 * (-1 if p else 1) == -1


def test_gluings_are_involutive_on_slots(s3, rp3):
    for tri in (s3, rp3):
        for t, row in enumerate(tri.tets):
            for k, g in enumerate(row):
                partner = tri.tets[g.neighbor][g.perm[k]]
                assert partner.neighbor == t
                assert compose(partner.perm, g.perm) == IDENTITY


def test_edge_star_shapes(s3, rp3):
    for e in s3.edges:
        assert len(s3.edge_star(e).contributions) == 2
    for e in rp3.edges:
        assert len(rp3.edge_star(e).contributions) == 4


def test_edge_star_parity_invariant(s3, rp3):
    for tri in (s3, rp3):
        for e in tri.edges:
            for tet, (p, q), (tail, head) in tri.edge_star(e).contributions:
                assert tri.sequence_parity(tet, (p, q, tail, head)) == 0
                eid, sign = tri.edge_class(tet, tail, head)
                assert eid == e.id and sign == 1


def test_text_round_trip(s3, rp3):
    for tri in (s3, rp3):
        again = Triangulation.from_text(tri.to_text())
        assert again.tets == tri.tets


def test_parse_errors():
    with pytest.raises(ParseError, match="header"):
        Triangulation.from_text("not a triangulation\n")
    with pytest.raises(ParseError):
        Triangulation.from_text("pentachain-tri v1\ntetrahedra 1\n")
    with pytest.raises(ParseError):
        Triangulation.from_text(
            "pentachain-tri v1\ntetrahedra 1\ntet 0: 0:0123 0:0123 0:0123\n"
        )
    with pytest.raises(ParseError, match="permutation"):
        Triangulation.from_text(
            "pentachain-tri v1\ntetrahedra 1\n"
            "tet 0: 0:0120 0:0123 0:0123 0:0123\n"
        )


def test_comments_and_whitespace_ok(s3):
    text = "# a comment\n" + s3.to_text().replace("tet 1:", "tet 1:  ") + "\n# trailing\n"
    assert Triangulation.from_text(text).tets == s3.tets


def test_canonical_form_invariance(s3, rp3):
    perm = [1, 0]
    swapped = build(
        [[Gluing(perm[g.neighbor], g.perm) for g in s3.tets[old]] for old in perm]
    )
    assert canonical_form(swapped) == canonical_form(s3)
    assert isomorphic(swapped, s3)
    assert not isomorphic(s3, rp3)


def test_vertex_edge_face_lookup_consistency(rp3):
    for e in rp3.edges:
        t, (i, j) = e.members[0]
        assert rp3.vertex_class(t, i) == e.tail
        assert rp3.vertex_class(t, j) == e.head
        eid, sign = rp3.edge_class(t, i, j)
        assert (eid, sign) == (e.id, 1)
        eid, sign = rp3.edge_class(t, j, i)
        assert (eid, sign) == (e.id, -1)
    for f in rp3.faces:
        for t, k in f.members:
            assert rp3.face_class(t, k) == f.id
