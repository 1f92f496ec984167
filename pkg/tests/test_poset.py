import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypersd.hypergraph import Hypergraph, VertexMap, full_simplex
from hypersd.poset import (
    GradedPoset,
    PosetError,
    PosetMap,
    all_chains_of_length,
    chains_with_marked_top,
    covered_by,
    face_poset,
    inclusion_poset,
    induced_poset_map,
    initial_below,
    is_compatible,
    is_S_successive,
    is_S_successive_bruteforce,
    marked_face_poset,
    order_complex,
    strictly_below,
)

from test_hypergraph import hypergraphs


def chain_poset(n):
    xs = list(range(n))
    return GradedPoset(xs, [(i, i + 1) for i in range(n - 1)], {i: i for i in xs})


@pytest.fixture
def triangle():
    return face_poset(full_simplex(3))


class TestOperators:
    def test_covered_by(self, triangle):
        assert covered_by(triangle, [(0, 1, 2)]) == {(0, 1), (0, 2), (1, 2)}
        assert covered_by(triangle, [(0, 1), (1, 2)]) == {(0,), (1,), (2,)}
        assert covered_by(triangle, triangle.minimal()) == set()

    def test_strictly_below(self, triangle):
        assert len(strictly_below(triangle, [(0, 1, 2)])) == 6
        assert strictly_below(triangle, [(0,)]) == set()

    def test_initial_below(self, triangle):
        assert initial_below(triangle, [(0, 1, 2)]) == {(0,), (1,), (2,)}
        assert initial_below(triangle, [(0,), (1,)]) == set()
        assert initial_below(chain_poset(3), [2]) == {0}

    @given(st.sets(st.sampled_from(sorted(full_simplex(4).edges)), max_size=5),
           st.sets(st.sampled_from(sorted(full_simplex(4).edges)), max_size=5))
    @settings(max_examples=60, deadline=None)
    def test_monotone_and_initial(self, ys, extra):
        p = face_poset(full_simplex(4))
        assert strictly_below(p, ys) <= strictly_below(p, ys | extra)
        init = initial_below(p, ys)
        below = strictly_below(p, ys)
        assert init <= below
        assert all(not (p.lower_covers(x) & below) for x in init)


class TestFacePoset:
    def test_edge(self):
        p = face_poset(full_simplex(2))
        assert len(p) == 3
        assert set(p.covers()) == {((0,), (0, 1)), ((1,), (0, 1))}

    def test_worked_example(self, example):
        mp = marked_face_poset(example)
        assert len(mp.poset) == 7 and len(mp.marked) == 5
        ranks = [sum(1 for x in mp.poset if mp.poset.rank[x] == r) for r in range(3)]
        assert ranks == [3, 3, 1]

    def test_point(self):
        p = face_poset(full_simplex(1))
        assert len(p) == 1 and p.rank[(0,)] == 0

    def test_complex_all_marked(self):
        k = full_simplex(3)
        assert marked_face_poset(k).marked == k.edges

    def test_single_edge_marks_one(self):
        mp = marked_face_poset(Hypergraph(2, [(0, 1)]))
        assert len(mp.poset) == 3 and mp.marked == {(0, 1)}

    def test_rank_must_step_by_one(self):
        with pytest.raises(PosetError):
            GradedPoset(["a", "b"], [("a", "b")], {"a": 0, "b": 2})


class TestChains:
    def test_marked_top_singletons(self, example):
        mp = marked_face_poset(example)
        assert chains_with_marked_top(mp, 0) == {(e,) for e in example.edges}

    def test_too_long(self, example):
        assert chains_with_marked_top(marked_face_poset(example), 3) == set()

    def test_three_chains_include_flag(self, example):
        got = chains_with_marked_top(marked_face_poset(example), 2)
        assert ((0,), (0, 1), (0, 1, 2)) in got
        brute = {c for c in all_chains_of_length(marked_face_poset(example).poset, 3) if c[-1] in example.edges}
        assert got == brute


class TestSuccessive:
    def test_listed_successive(self, example):
        mp = marked_face_poset(example)
        for c in [((0,), (0, 1)), ((1,), (1, 2)), ((1,), (0, 1)), ((2,), (1, 2))]:
            assert is_S_successive(mp, c)

    def test_listed_not_successive(self, example):
        mp = marked_face_poset(example)
        assert not is_S_successive(mp, ((0,), (0, 2)))
        assert not is_S_successive(mp, ((2,), (0, 2)))
        assert not is_S_successive(mp, ((2,),))

    def test_not_a_chain(self, example):
        with pytest.raises(PosetError):
            is_S_successive(marked_face_poset(example), ((0, 1), (0,)))

    @given(hypergraphs(max_vertices=4, max_edges=6))
    @settings(max_examples=40, deadline=None)
    def test_matches_bruteforce(self, h):
        mp = marked_face_poset(h)
        p = mp.poset
        for n in range(1, p.height() + 1):
            for c in all_chains_of_length(p, n):
                assert is_S_successive(mp, c) == is_S_successive_bruteforce(mp, c)
                if is_S_successive(mp, c):
                    assert [len(x) - 1 for x in c] == list(range(n))


class TestOrderComplex:
    def test_chain_gives_simplex(self):
        assert len(order_complex(chain_poset(3))) == 7

    def test_antichain(self):
        p = GradedPoset(["a", "b", "c"], [], {"a": 0, "b": 0, "c": 0})
        assert order_complex(p) == [("a",), ("b",), ("c",)]

    def test_inclusion_poset_of_worked_example(self, example):
        chains = set(order_complex(inclusion_poset(example)))
        assert ((0, 1), (0, 1, 2)) in chains
        assert ((2,), (1, 2)) not in chains

    def test_triangle_barycentric_count(self, triangle):
        oc = order_complex(triangle)
        assert [sum(1 for c in oc if len(c) == n) for n in (1, 2, 3)] == [7, 12, 6]

    def test_inclusion_poset_skips_dimensions(self):
        p = inclusion_poset(Hypergraph(3, [(0,), (0, 1, 2)]))
        assert p.covers() == [((0,), (0, 1, 2))]


class TestMorphisms:
    def test_identity_compatible(self, example):
        mp = marked_face_poset(example)
        m = PosetMap(mp, mp, {x: x for x in mp.poset})
        assert m.is_morphism() and is_compatible(m)

    @given(hypergraphs(max_vertices=4, max_edges=6), st.permutations(range(5)))
    @settings(max_examples=60, deadline=None)
    def test_injective_induced_maps_are_compatible(self, h, perm):
        v = len(h.vertices)
        vm = VertexMap(h, full_simplex(5), perm[:v])
        m = induced_poset_map(vm)
        assert is_compatible(m)
        assert m.is_morphism()

    @given(hypergraphs(max_vertices=4, max_edges=6), st.lists(st.integers(0, 3), min_size=4, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_induced_maps_preserve_order_and_rank_bound(self, h, images):
        vm = VertexMap(h, full_simplex(4), images[: len(h.vertices)])
        m = induced_poset_map(vm)
        assert not [x for x in m.violations() if "marked" not in x]

    def test_vertex_collapse_on_triangle_is_not_compatible(self):
        # {0,1,2} -> {0,1} sending 2 to 1, enumerated cover set by cover set:
        # the face {0} of f({0,1,2}) = {0,1} is not the image of any face of {0,1,2}
        src = marked_face_poset(full_simplex(3))
        tgt = marked_face_poset(full_simplex(2))
        m = induced_poset_map(VertexMap(full_simplex(3), full_simplex(2), [0, 1, 1]), src, tgt)
        failing = [x for x in src.poset
                   if not tgt.poset.lower_covers(m(x)) <= {m(z) for z in src.poset.lower_covers(x)}]
        assert failing == [(0, 1, 2)]
        assert not is_compatible(m)
        assert m.is_morphism()

    def test_marked_must_map_to_marked(self):
        h = Hypergraph(2, [(0,), (1,)])
        t = Hypergraph(2, [(0,), (0, 1)])
        m = PosetMap(marked_face_poset(h), marked_face_poset(t), {(0,): (1,), (1,): (1,)})
        assert any("marked" in v for v in m.violations())


def test_dot_output(example):
    mp = marked_face_poset(example)
    dot = mp.poset.to_dot(mp.marked)
    assert dot.startswith("digraph") and dot.count("->") == 9 and dot.count("filled") == 5


def test_all_chains_of_length_matches_itertools(triangle):
    two = all_chains_of_length(triangle, 2)
    brute = [c for c in itertools.combinations(triangle.elements, 2) if set(c[0]) < set(c[1])]
    assert sorted(two) == sorted(brute)
