import pytest

from pentachain import (
    MoveError,
    MoveSite,
    apply_move,
    canonical_form,
    enumerate_sites,
    invariant,
    isomorphic,
    random_walk,
    walk_states,
)


def euler(tri):
    v, e, f, t = tri.f_vector()
    return v - e + f - t


def test_one_four_arithmetic(s3):
    out = apply_move(s3, MoveSite("1->4", 0))
    assert out.f_vector() == (5, 10, 10, 5)
    assert euler(out) == 0


def test_two_three_and_back(s3):
    grown = apply_move(s3, MoveSite("2->3", (0, 0)))
    assert grown.f_vector() == (4, 7, 6, 3)
    new_edge = [e for e in grown.edges if e.degree == 3]
    assert len(new_edge) == 1
    assert len(grown.edge_star(new_edge[0]).contributions) == 3
    back = apply_move(grown, MoveSite("3->2", new_edge[0].id))
    assert isomorphic(back, s3)


def test_one_four_and_back(s3):
    grown = apply_move(s3, MoveSite("1->4", 1))
    fresh = [v for v in grown.vertices if v.degree == 4]
    sites = enumerate_sites(grown, "4->1")
    # the fresh vertex is always collapsible; s3 is small enough that some
    # old vertices may be as well
    fresh_ids = {v.id for v in fresh}
    assert any(site.location in fresh_ids for site in sites)
    new_vertex = max(v.id for v in grown.vertices)  # fresh classes come last
    back = apply_move(grown, MoveSite("4->1", new_vertex))
    assert isomorphic(back, s3)


def test_enumerate_counts(s3):
    assert len(enumerate_sites(s3, "1->4")) == 2
    sites23 = enumerate_sites(s3, "2->3")
    assert len(sites23) == 4  # every face class joins the two distinct tets
    assert enumerate_sites(s3, "3->2") == []
    assert enumerate_sites(s3, "4->1") == []


def test_moves_preserve_euler_and_validate(rp3):
    tri = rp3
    for kind, expect_delta in (("2->3", (0, 1, 2, 1)), ("1->4", (1, 4, 6, 3))):
        sites = enumerate_sites(tri, kind)
        assert sites
        out = apply_move(tri, sites[0])
        delta = tuple(a - b for a, b in zip(out.f_vector(), tri.f_vector()))
        assert delta == expect_delta
        assert euler(out) == 0


def test_invalid_sites_rejected(s3):
    with pytest.raises(MoveError):
        apply_move(s3, MoveSite("3->2", 0))  # edges of s3 have degree 2
    with pytest.raises(MoveError):
        apply_move(s3, MoveSite("4->1", 0))  # vertices of s3 have degree 2
    with pytest.raises(MoveError):
        apply_move(s3, MoveSite("5->0", 0))
    with pytest.raises(MoveError):
        enumerate_sites(s3, "6->1")


def test_zero_step_walk_is_input(s3):
    assert random_walk(s3, 0, seed=1) is s3


def test_walk_determinism(rp3):
    a = random_walk(rp3, 10, seed=5)
    b = random_walk(rp3, 10, seed=5)
    assert a.tets == b.tets
    c = random_walk(rp3, 10, seed=6)
    assert canonical_form(a) != canonical_form(c) or a.f_vector() != c.f_vector()


def test_walk_respects_max_tets(s3):
    sizes = [state.size for _, state in walk_states(s3, 25, seed=9, max_tets=8)]
    # growth can overshoot by one move before shrinking kicks in
    assert max(sizes) <= 8 + 3


def test_walks_preserve_invariant(s3, rp3):
    for tri, expect in ((s3, 1), (rp3, 64)):
        for seed in (101, 202):
            end = random_walk(tri, 12, seed=seed, max_tets=10)
            assert invariant(end, seed=seed).abs_invariant == expect


def test_walk_states_yield_valid_triangulations(s3):
    for site, state in walk_states(s3, 8, seed=3):
        assert site.kind in {"1->4", "2->3", "3->2", "4->1"}
        assert euler(state) == 0
