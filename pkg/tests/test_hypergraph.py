import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypersd.hypergraph import (
    Hypergraph,
    HypergraphError,
    HypergraphFormatError,
    MorphismError,
    SimplicialComplex,
    VertexMap,
    VertexTable,
    apply_morphism,
    dumps,
    faces,
    full_simplex,
    is_simplicial_complex,
    loads,
    random_hypergraph,
    simplicial_closure,
)

from conftest import WORKED


@st.composite
def hypergraphs(draw, max_vertices=6, max_edges=12):
    v = draw(st.integers(1, max_vertices))
    masks = draw(st.sets(st.integers(1, 2 ** v - 1), min_size=1, max_size=max_edges))
    return Hypergraph(v, [[i for i in range(v) if m >> i & 1] for m in masks])


def test_closure_of_worked_example(example):
    k = simplicial_closure(example)
    assert sorted(k.edges) == sorted([(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)])
    assert isinstance(k, SimplicialComplex)


def test_closure_of_complex_is_identity():
    k = full_simplex(3)
    assert simplicial_closure(k) == k


def test_is_simplicial_complex():
    assert is_simplicial_complex(Hypergraph(2, [(0,), (1,), (0, 1)]))
    assert not is_simplicial_complex(Hypergraph(2, [(0, 1)]))


def test_simplicial_complex_rejects_non_closed():
    with pytest.raises(HypergraphError):
        SimplicialComplex(2, [(0, 1)])


def test_faces_delete_ith_vertex():
    assert faces((3, 5, 7)) == [(5, 7), (3, 7), (3, 5)]
    assert faces((4,)) == []


def test_edges_are_sorted_and_deduplicated():
    h = Hypergraph(3, [(2, 0, 0)])
    assert h.edges == frozenset({(0, 2)})


def test_rejects_empty_hypergraph_and_edges():
    with pytest.raises(HypergraphError):
        Hypergraph(2, [])
    with pytest.raises(HypergraphError):
        Hypergraph(2, [()])


def test_vertex_table_unique():
    with pytest.raises(HypergraphError):
        VertexTable(["a", "a"])


@given(hypergraphs())
@settings(max_examples=100, deadline=None)
def test_closure_properties(h):
    k = simplicial_closure(h)
    assert h.edges <= k.edges
    assert is_simplicial_complex(k)
    assert simplicial_closure(k) == k
    # minimality: every simplex of the closure lies inside an edge of h
    assert all(any(set(s) <= set(e) for e in h.edges) for s in k.edges)


@given(hypergraphs())
@settings(max_examples=100, deadline=None)
def test_json_roundtrip(h):
    assert loads(dumps(h)) == h


class TestJsonErrors:
    def test_empty_edge_names_index(self):
        with pytest.raises(HypergraphFormatError, match="edge 1: empty hyperedge"):
            loads('{"vertices": ["0"], "edges": [[0], []]}')

    def test_duplicate_edge(self):
        with pytest.raises(HypergraphFormatError, match="edge 1: duplicate"):
            loads('{"edges": [[0, 1], [1, 0]]}')

    def test_out_of_range(self):
        with pytest.raises(HypergraphFormatError, match="edge 0"):
            loads('{"vertices": ["a"], "edges": [[0, 1]]}')

    def test_syntax_error_reports_line(self):
        with pytest.raises(HypergraphFormatError, match="line 2"):
            loads('{"edges":\n [[0],')

    def test_vertices_inferred(self):
        h = loads('{"edges": [[0, 2]]}')
        assert h.vertices.labels == ("0", "1", "2")

    def test_within_edge_duplicates_collapse(self):
        assert loads('{"edges": [[1, 1, 0]]}').edges == frozenset({(0, 1)})


class TestMorphisms:
    def test_identity(self, example):
        m = VertexMap.identity(example)
        assert m.is_morphism()
        assert apply_morphism(m) == example

    def test_collapse(self):
        h = Hypergraph(2, [(0,), (1,), (0, 1)])
        t = Hypergraph(2, [(1,)])
        m = VertexMap(h, t, [1, 1], check=True)
        assert apply_morphism(m).edges == frozenset({(1,)})

    def test_non_morphism_rejected(self):
        h = Hypergraph(2, [(0, 1)])
        t = Hypergraph(2, [(0,)])
        with pytest.raises(MorphismError):
            VertexMap(h, t, [0, 1], check=True)

    def test_compose(self, example):
        swap = VertexMap(example, example, [1, 0, 2])
        ident = swap.compose(swap)
        assert ident.mapping == (0, 1, 2)


class TestRandom:
    def test_forced_power_set(self):
        h = random_hypergraph(3, 7, seed=5)
        assert len(h) == 7 and is_simplicial_complex(h)

    def test_deterministic(self):
        assert random_hypergraph(5, 10, 42) == random_hypergraph(5, 10, 42)

    def test_too_many_edges(self):
        with pytest.raises(HypergraphError):
            random_hypergraph(2, 4, 0)

    def test_no_orphans_unless_allowed(self):
        h = random_hypergraph(6, 2, 3)
        used = {v for e in h.edges for v in e}
        assert used == set(range(len(h.vertices)))
        assert len(random_hypergraph(6, 2, 3, allow_isolated=True).vertices) == 6

    @given(st.integers(1, 6), st.integers(0, 10 ** 6), st.booleans())
    @settings(max_examples=60, deadline=None)
    def test_counts(self, v, seed, weighted):
        m = min(5, 2 ** v - 1)
        h = random_hypergraph(v, m, seed, weighted=weighted, allow_isolated=True)
        assert len(h) == m and len(h.vertices) == v


def test_worked_example_json_shape(example):
    d = json.loads(dumps(example))
    assert d == {"vertices": ["0", "1", "2"], "edges": [list(e) for e in sorted(WORKED, key=lambda e: (len(e), e))]}
